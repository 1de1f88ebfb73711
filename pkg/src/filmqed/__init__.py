"""filmqed: entanglement of two emitters mediated by a thin film.

The pipeline runs material dispersion -> film plane-wave optics -> Weyl
integrals of the layered Green's function -> collective emission rates ->
closed-form two-qubit dynamics and concurrence, with a sweep/CLI layer on
top.  See the README for the CLI and config format.
"""

from .dispersion import (
    SILVER,
    VACUUM,
    BandKind,
    DispersionError,
    DrudeFilmModel,
    DrudeParams,
    EmtFilmModel,
    EpsilonPoleError,
    SpecialWavelength,
    UniaxialMedium,
    VacuumFilmModel,
    classify_band,
    drude_permittivity,
    emt_permittivities,
    find_special_wavelength,
    omega_from_wavelength,
    tio2_permittivity,
)
from .dynamics import (
    ConcurrencePoint,
    DynamicsError,
    PhysicalityError,
    RateTriple,
    TwoQubitState,
    concurrence_asymptotic,
    concurrence_closed_form,
    concurrence_curve,
    evolve,
    peak_concurrence,
    rates_from_greens,
    transmission_proxy,
    wootters_concurrence,
)
from .greens import (
    Geometry,
    GreensKind,
    GreensValue,
    Orientation,
    QuadratureError,
    QuadratureSpec,
    WeylResult,
    cross_integrand,
    default_kappa_max,
    g_cross,
    g_single,
    g_vacuum_closed_form,
    integrate_weyl,
    integrate_weyl_detailed,
    single_integrand,
)
from .layer_optics import (
    FilmStack,
    LayerOpticsError,
    Polarization,
    film_reflection,
    film_transmission,
    interface_reflection,
    kz_extraordinary,
    kz_ordinary,
    kz_vacuum,
)
from .sweep import (
    ConcurrenceMap,
    ConfigError,
    RateSpectrumRow,
    SpecialWavelengthRow,
    SweepConfig,
    parse_config,
    run_concurrence_map,
    run_rate_spectrum,
    run_special_wavelengths,
    write_map_csv,
    write_rates_csv,
    write_special_csv,
)

__version__ = "0.1.0"
