"""Plane-wave optics of a uniaxial film in vacuum.

Everything is resolved per transverse wavenumber kappa (the in-plane
Fourier variable of the Weyl expansion) at vacuum wavenumber k0 = omega/c.
The film occupies 0 <= z <= d with its optical axis along z, vacuum on both
sides.  s (TE) waves see the ordinary index, p (TM) waves the extraordinary
one.

All functions are vectorized over ``kappa`` (scalar or ndarray) because the
Green's-function quadrature evaluates them on batches of nodes.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .dispersion import UniaxialMedium


class LayerOpticsError(ValueError):
    """Raised for invalid film parameters or coefficient poles."""


class Polarization(enum.Enum):
    S = "s"  # TE, E in-plane transverse
    P = "p"  # TM, H in-plane transverse


@dataclass(frozen=True)
class FilmStack:
    """A single uniaxial layer of the given thickness (m) in vacuum."""

    medium: UniaxialMedium
    thickness: float

    def __post_init__(self) -> None:
        if self.thickness < 0.0:
            raise LayerOpticsError(f"thickness must be >= 0, got {self.thickness}")


def _upper_branch(kz2):
    """sqrt with Im >= 0, and Re >= 0 on the real axis.

    This selects waves that decay (or propagate forward) with increasing z,
    which keeps every exponential in the film coefficients bounded.
    """
    kz = np.sqrt(np.asarray(kz2, dtype=complex))
    kz = np.where(kz.imag < 0.0, -kz, kz)
    kz = np.where((kz.imag == 0.0) & (kz.real < 0.0), -kz, kz)
    return kz[()] if np.ndim(kz2) == 0 else kz


def kz_vacuum(kappa, k0: float):
    """Normal wavenumber in vacuum: sqrt(k0^2 - kappa^2), upper branch."""
    kappa = np.asarray(kappa, dtype=float)
    return _upper_branch(k0**2 - kappa**2 + 0.0j)


def kz_ordinary(kappa, k0: float, medium: UniaxialMedium):
    """Ordinary (s-wave) normal wavenumber: sqrt(k0^2 eps_perp - kappa^2)."""
    kappa = np.asarray(kappa, dtype=float)
    return _upper_branch(k0**2 * medium.eps_perp - kappa**2)


def kz_extraordinary(kappa, k0: float, medium: UniaxialMedium):
    """Extraordinary (p-wave) normal wavenumber.

    sqrt(k0^2 eps_perp - kappa^2 eps_perp / eps_par); the anisotropy ratio
    is what opens the hyperbolic bands when the component signs differ.
    """
    if medium.eps_par == 0.0:
        raise LayerOpticsError("eps_par = 0: extraordinary dispersion is singular")
    kappa = np.asarray(kappa, dtype=float)
    return _upper_branch(k0**2 * medium.eps_perp - kappa**2 * medium.eps_perp / medium.eps_par)


def interface_reflection(pol: Polarization, kappa, k0: float, medium: UniaxialMedium):
    """Single vacuum->medium interface reflection amplitude.

    R_s = (kz_vac - kz_o) / (kz_vac + kz_o)
    R_p = (kz_vac eps_perp - kz_e) / (kz_vac eps_perp + kz_e)

    Signs follow the field conventions used in the film formulas below, so
    at normal incidence R_p = -R_s.
    """
    kzv = kz_vacuum(kappa, k0)
    if pol is Polarization.S:
        kzo = kz_ordinary(kappa, k0, medium)
        num = kzv - kzo
        den = kzv + kzo
    else:
        kze = kz_extraordinary(kappa, k0, medium)
        num = kzv * medium.eps_perp - kze
        den = kzv * medium.eps_perp + kze
    if np.any(den == 0.0):
        raise LayerOpticsError(f"interface reflection pole at kappa={kappa!r}")
    return num / den


def film_transmission(pol: Polarization, kappa, k0: float, film: FilmStack):
    """Through-film transmission amplitude, referenced to the film faces.

    t relates the wave arriving at z=0 to the wave leaving at z=d with the
    vacuum phase across the slab divided out, i.e. an identity film gives
    exactly t = 1 for all kappa:

        t_s = 4 kz_o kz_v e^{i(kz_o - kz_v) d}
              / [(kz_o + kz_v)^2 - (kz_o - kz_v)^2 e^{2 i kz_o d}]
        t_p = 4 eps_perp kz_e kz_v e^{i(kz_e - kz_v) d}
              / [(kz_e + eps_perp kz_v)^2 - (kz_e - eps_perp kz_v)^2 e^{2 i kz_e d}]

    The p matching factor is eps_perp because the TM surface admittance of a
    uniaxial layer with its axis along z is kz_e / eps_perp: that choice (and
    only that choice) makes t consistent with the interface reflection above,
    reduces correctly to the isotropic slab, and conserves |t|^2 + |r|^2 = 1
    for lossless media at propagating kappa.

    The exponents are formed from wavenumber differences before
    exponentiating, which keeps them small even deep in the evanescent
    region where e^{-i kz_v d} alone would overflow.
    """
    med, d = film.medium, film.thickness
    kzv = kz_vacuum(kappa, k0)
    if pol is Polarization.S:
        kzm = kz_ordinary(kappa, k0, med)
        num = 4.0 * kzm * kzv * np.exp(1j * (kzm - kzv) * d)
        den = (kzm + kzv) ** 2 - (kzm - kzv) ** 2 * np.exp(2j * kzm * d)
    else:
        kzm = kz_extraordinary(kappa, k0, med)
        ep = med.eps_perp
        num = 4.0 * ep * kzm * kzv * np.exp(1j * (kzm - kzv) * d)
        den = (kzm + ep * kzv) ** 2 - (kzm - ep * kzv) ** 2 * np.exp(2j * kzm * d)
    if np.any(den == 0.0):
        raise LayerOpticsError(
            f"film transmission pole ({pol.value}) at kappa={kappa!r}, d={d}"
        )
    return num / den


def film_reflection(pol: Polarization, kappa, k0: float, film: FilmStack):
    """Film reflection amplitude at the z=0 face.

    r = R (1 - e^{2 i kz_m d}) / (1 - R^2 e^{2 i kz_m d}) with the
    single-interface R of the same polarization and kz_m the in-film
    normal wavenumber (ordinary for s, extraordinary for p).
    """
    med, d = film.medium, film.thickness
    R = interface_reflection(pol, kappa, k0, med)
    if pol is Polarization.S:
        kzm = kz_ordinary(kappa, k0, med)
    else:
        kzm = kz_extraordinary(kappa, k0, med)
    phase = np.exp(2j * kzm * d)
    den = 1.0 - R**2 * phase
    if np.any(den == 0.0):
        raise LayerOpticsError(
            f"film reflection pole ({pol.value}) at kappa={kappa!r}, d={d}"
        )
    return R * (1.0 - phase) / den
