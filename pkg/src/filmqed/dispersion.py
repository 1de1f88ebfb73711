"""Material dispersion models for thin-film media.

Provides the Drude metal model, the Sellmeier-type TiO2 formula, effective
medium theory (EMT) for a metal/dielectric multilayer stack, band-topology
classification of the resulting uniaxial tensor, and a bisection search for
the special wavelengths (surface-plasmon, epsilon-near-zero and
epsilon-near-pole conditions) that organize the emission spectra.

Conventions: angular frequency omega in rad/s, vacuum wavelength in metres
(helpers accept nm where noted), permittivities relative and complex with
Im(eps) >= 0 for passive media (e^{-i omega t} time convention).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from scipy.constants import c as _C_LIGHT


class DispersionError(ValueError):
    """Raised for out-of-domain evaluations (poles, bad brackets)."""


class EpsilonPoleError(DispersionError):
    """Raised when a permittivity formula is evaluated at a pole."""


class UnsupportedConditionError(DispersionError):
    """Raised when a special-wavelength condition does not apply to a model."""


@dataclass(frozen=True)
class DrudeParams:
    """Drude-model parameters: eps(omega) = eps_inf - omega_p^2 / (omega^2 + i*omega/tau)."""

    eps_inf: float
    omega_p: float  # plasma frequency, rad/s
    tau: float  # relaxation time, s

    def __post_init__(self) -> None:
        if self.eps_inf <= 0.0:
            raise DispersionError(f"eps_inf must be positive, got {self.eps_inf}")
        if self.omega_p <= 0.0:
            raise DispersionError(f"omega_p must be positive, got {self.omega_p}")
        if self.tau <= 0.0:
            raise DispersionError(f"tau must be positive, got {self.tau}")


#: Silver parameters used for all metallic layers.
SILVER = DrudeParams(eps_inf=3.7, omega_p=1.4e16, tau=0.45e-14)


class BandKind(enum.Enum):
    """Sign topology of Re(eps_perp), Re(eps_par) of a uniaxial medium."""

    DIELECTRIC = "dielectric"  # both >= 0
    METALLIC = "metallic"  # both < 0
    TYPE_I = "type_i"  # Re(eps_par) < 0 <= Re(eps_perp)
    TYPE_II = "type_ii"  # Re(eps_perp) < 0 <= Re(eps_par)


@dataclass(frozen=True)
class UniaxialMedium:
    """Uniaxial permittivity tensor diag(eps_perp, eps_perp, eps_par).

    eps_perp applies to fields in the plane of the film (ordinary axis),
    eps_par along the optical axis (film normal).  An isotropic medium has
    eps_perp == eps_par.
    """

    eps_perp: complex
    eps_par: complex

    def __post_init__(self) -> None:
        # passivity: gain media are out of scope
        if self.eps_perp.imag < 0.0 or self.eps_par.imag < 0.0:
            raise DispersionError(
                f"passive medium requires Im(eps) >= 0, got "
                f"eps_perp={self.eps_perp}, eps_par={self.eps_par}"
            )

    @property
    def isotropic(self) -> bool:
        return self.eps_perp == self.eps_par


#: Exact vacuum, handy for identity-film checks and reference baselines.
VACUUM = UniaxialMedium(eps_perp=1.0 + 0.0j, eps_par=1.0 + 0.0j)


def drude_permittivity(omega: float, params: DrudeParams = SILVER) -> complex:
    """Drude permittivity at angular frequency omega (rad/s).

    eps(omega) = eps_inf - omega_p^2 / (omega (omega + i/tau)), which has
    Im(eps) > 0 for every finite relaxation time.
    """
    if omega <= 0.0:
        raise DispersionError(f"omega must be positive, got {omega}")
    return params.eps_inf - params.omega_p**2 / (omega * (omega + 1j / params.tau))


def tio2_permittivity(wavelength_um: float) -> float:
    """TiO2 permittivity from the lossless Sellmeier-type fit.

    eps = 5.913 + 0.2441 / (lambda^2 - 0.0803) with lambda in micrometres.
    The fit is intended for the visible window (~0.3-1.0 um); evaluation at
    or below the resonance pole lambda^2 = 0.0803 is rejected.
    """
    lam2 = wavelength_um**2
    denom = lam2 - 0.0803
    if denom <= 0.0:
        raise EpsilonPoleError(
            f"TiO2 fit pole: wavelength {wavelength_um} um has lambda^2 <= 0.0803"
        )
    return 5.913 + 0.2441 / denom


def emt_permittivities(fill: float, eps_metal: complex, eps_dielectric: complex) -> UniaxialMedium:
    """Effective uniaxial tensor of a deeply subwavelength metal/dielectric stack.

    For metal filling fraction f the in-plane (ordinary) component is the
    arithmetic mean and the normal (extraordinary) component the harmonic
    mean of the constituents:

        eps_perp = f eps_m + (1 - f) eps_d
        eps_par  = eps_m eps_d / (f eps_d + (1 - f) eps_m)

    The eps_par pole (vanishing mixing denominator) raises.
    """
    if not 0.0 <= fill <= 1.0:
        raise DispersionError(f"fill fraction must lie in [0, 1], got {fill}")
    eps_m = complex(eps_metal)
    eps_d = complex(eps_dielectric)
    eps_perp = fill * eps_m + (1.0 - fill) * eps_d
    denom = fill * eps_d + (1.0 - fill) * eps_m
    if denom == 0.0:
        raise EpsilonPoleError("EMT eps_par pole: f*eps_d + (1-f)*eps_m = 0")
    eps_par = eps_m * eps_d / denom
    return UniaxialMedium(eps_perp=eps_perp, eps_par=eps_par)


def classify_band(medium: UniaxialMedium) -> BandKind:
    """Classify the band topology from the signs of Re(eps_perp), Re(eps_par).

    Exact zeros count as the non-negative side, so a medium sitting exactly
    on an ENZ/ENP crossing classifies with the dielectric-like branch.
    """
    perp_neg = medium.eps_perp.real < 0.0
    par_neg = medium.eps_par.real < 0.0
    if perp_neg and par_neg:
        return BandKind.METALLIC
    if perp_neg:
        return BandKind.TYPE_II
    if par_neg:
        return BandKind.TYPE_I
    return BandKind.DIELECTRIC


def omega_from_wavelength(wavelength_m: float) -> float:
    """Vacuum angular frequency for a vacuum wavelength in metres."""
    if wavelength_m <= 0.0:
        raise DispersionError(f"wavelength must be positive, got {wavelength_m}")
    return 2.0 * math.pi * _C_LIGHT / wavelength_m


@dataclass(frozen=True)
class VacuumFilmModel:
    """Trivial film model: the layer is just more vacuum."""

    def medium(self, wavelength_m: float) -> UniaxialMedium:
        omega_from_wavelength(wavelength_m)  # domain check only
        return VACUUM


@dataclass(frozen=True)
class DrudeFilmModel:
    """Isotropic metallic film described by a Drude permittivity."""

    params: DrudeParams = SILVER

    def medium(self, wavelength_m: float) -> UniaxialMedium:
        eps = drude_permittivity(omega_from_wavelength(wavelength_m), self.params)
        return UniaxialMedium(eps_perp=eps, eps_par=eps)


@dataclass(frozen=True)
class EmtFilmModel:
    """Metal/dielectric multilayer film homogenized by EMT.

    The dielectric is TiO2 by default (`eps_dielectric=None`); a fixed
    complex permittivity can be supplied instead for model studies.
    """

    fill: float = 0.35
    params: DrudeParams = SILVER
    eps_dielectric: complex | None = None

    def __post_init__(self) -> None:
        if not 0.0 <= self.fill <= 1.0:
            raise DispersionError(f"fill fraction must lie in [0, 1], got {self.fill}")

    def _eps_metal(self, wavelength_m: float) -> complex:
        return drude_permittivity(omega_from_wavelength(wavelength_m), self.params)

    def _eps_diel(self, wavelength_m: float) -> complex:
        if self.eps_dielectric is not None:
            return complex(self.eps_dielectric)
        return complex(tio2_permittivity(wavelength_m * 1e6))

    def medium(self, wavelength_m: float) -> UniaxialMedium:
        return emt_permittivities(
            self.fill, self._eps_metal(wavelength_m), self._eps_diel(wavelength_m)
        )

    def mixing_denominator(self, wavelength_m: float) -> complex:
        """f*eps_d + (1-f)*eps_m, whose real zero locates the eps_par pole (ENP)."""
        return self.fill * self._eps_diel(wavelength_m) + (1.0 - self.fill) * self._eps_metal(
            wavelength_m
        )


class SpecialWavelength(enum.Enum):
    """Spectral landmarks of a film medium."""

    SURFACE_PLASMON = "sp"  # Re(eps) = -1, isotropic media only
    ENZ_PERP = "enz_perp"  # Re(eps_perp) = 0
    ENP_PAR = "enp_par"  # Re(f eps_d + (1-f) eps_m) = 0, EMT media only


def _condition(model, kind: SpecialWavelength):
    if kind is SpecialWavelength.ENZ_PERP:
        return lambda lam: model.medium(lam).eps_perp.real
    if kind is SpecialWavelength.ENP_PAR:
        if not hasattr(model, "mixing_denominator"):
            raise UnsupportedConditionError(
                f"ENP condition needs an EMT-style model, got {type(model).__name__}"
            )
        return lambda lam: model.mixing_denominator(lam).real
    if kind is SpecialWavelength.SURFACE_PLASMON:

        def sp(lam: float) -> float:
            med = model.medium(lam)
            if not med.isotropic:
                raise UnsupportedConditionError(
                    "surface-plasmon condition Re(eps) = -1 requires an isotropic medium"
                )
            return med.eps_perp.real + 1.0

        return sp
    raise UnsupportedConditionError(f"unknown condition {kind!r}")


def find_special_wavelength(
    model,
    kind: SpecialWavelength,
    bracket_nm: tuple[float, float] = (200.0, 1200.0),
) -> float:
    """Locate a special wavelength by bisection inside ``bracket_nm``.

    ``model`` is any object with a ``medium(wavelength_m)`` method (EMT models
    additionally expose the mixing denominator used for the ENP condition).
    The condition must change sign across the bracket; the returned wavelength
    (nm) is resolved far below 0.1 nm so the condition residual itself is
    driven to the 1e-6 level in permittivity units.
    """
    lo_nm, hi_nm = bracket_nm
    if not 0.0 < lo_nm < hi_nm:
        raise DispersionError(f"bad bracket {bracket_nm}")
    cond = _condition(model, kind)
    f_lo = cond(lo_nm * 1e-9)
    f_hi = cond(hi_nm * 1e-9)
    if f_lo == 0.0:
        return lo_nm
    if f_hi == 0.0:
        return hi_nm
    if f_lo * f_hi > 0.0:
        raise DispersionError(
            f"condition {kind.value} does not change sign over "
            f"[{lo_nm}, {hi_nm}] nm: f(lo)={f_lo:.6g}, f(hi)={f_hi:.6g}"
        )
    # 80 bisections shrink a 1000 nm bracket below 1e-21 nm; cheap enough
    # that the residual, not the bracket, is what limits accuracy.
    for _ in range(80):
        mid = 0.5 * (lo_nm + hi_nm)
        f_mid = cond(mid * 1e-9)
        if f_mid == 0.0:
            return mid
        if f_lo * f_mid < 0.0:
            hi_nm = mid
        else:
            lo_nm, f_lo = mid, f_mid
    return 0.5 * (lo_nm + hi_nm)
