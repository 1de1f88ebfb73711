"""Dyadic Green's function components for two emitters facing a film.

Geometry: emitter 1 sits at z = -z1 in vacuum, the film occupies [0, d],
emitter 2 mirrors emitter 1 at z = d + z1.  Both dipoles share one
orientation, either in-plane (X) or along the film normal (Z).  Everything
is expressed through 1-D Weyl integrals over the transverse wavenumber
kappa; the azimuthal integral is already folded into the integrands.

Two scalar functions carry all the physics:

* the cross-film function g_cross (emitter 1 -> emitter 2, through the
  film), whose imaginary part drives the collective decay rate and whose
  real part drives the coherent dipole-dipole shift;
* the single-position function g_single (emitter 1 -> itself, vacuum plus
  film reflection), whose imaginary part renormalizes the single-emitter
  decay rate.

Integrals run over [0, k0] with kappa = k0 sin(theta) and over
[k0, kappa_max] with kappa = k0 cosh(u); both substitutions absorb the
1/kz_vac branch-point singularity at kappa = k0 into the Jacobian, so the
transformed integrands are smooth and an adaptive Gauss-Kronrod rule
converges quickly.
"""

from __future__ import annotations

import enum
import heapq
import math
from dataclasses import dataclass, replace

import numpy as np

from .dispersion import UniaxialMedium
from .layer_optics import (
    FilmStack,
    Polarization,
    film_reflection,
    film_transmission,
    kz_vacuum,
)


class QuadratureError(RuntimeError):
    """Quadrature failed to converge; carries the best estimate so far."""

    def __init__(self, message: str, value: complex = 0.0j, error: float = math.inf):
        super().__init__(message)
        self.value = value
        self.error = error


class Orientation(enum.Enum):
    X = "x"  # both dipoles in-plane, parallel to each other
    Z = "z"  # both dipoles along the film normal


class GreensKind(enum.Enum):
    CROSS_FILM = "cross_film"
    SINGLE_POSITION = "single_position"


@dataclass(frozen=True)
class Geometry:
    """Mirror-symmetric emitter pair around a film of the given thickness.

    z1 is the (positive) emitter-film gap on each side; the emitters are
    separated by thickness + 2*z1 along the film normal.
    """

    z1: float  # m, > 0
    thickness: float  # m, >= 0
    orientation: Orientation

    def __post_init__(self) -> None:
        if self.z1 <= 0.0:
            raise ValueError(f"z1 must be positive, got {self.z1}")
        if self.thickness < 0.0:
            raise ValueError(f"thickness must be >= 0, got {self.thickness}")

    @property
    def separation(self) -> float:
        return self.thickness + 2.0 * self.z1


@dataclass(frozen=True)
class QuadratureSpec:
    """Tolerances and cutoffs for the Weyl integrals.

    ``abs_tol`` is in the integral's own units (1/m); ``None`` resolves to
    1e-12 * k0.  ``kappa_max`` of ``None`` resolves to the geometry-based
    default k0 + 40 / min(2 z1, d + 2 z1), placing the cutoff where the
    evanescent envelope has decayed by e^{-40}; an explicit value is used
    verbatim and never extended.
    """

    rel_tol: float = 1e-8
    abs_tol: float | None = None
    kappa_max: float | None = None
    max_subdivisions: int = 400

    def __post_init__(self) -> None:
        if self.rel_tol <= 0.0:
            raise ValueError(f"rel_tol must be positive, got {self.rel_tol}")
        if self.abs_tol is not None and self.abs_tol <= 0.0:
            raise ValueError(f"abs_tol must be positive, got {self.abs_tol}")
        if self.kappa_max is not None and self.kappa_max <= 0.0:
            raise ValueError(f"kappa_max must be positive, got {self.kappa_max}")
        if self.max_subdivisions < 1:
            raise ValueError(f"max_subdivisions must be >= 1, got {self.max_subdivisions}")


@dataclass(frozen=True)
class GreensValue:
    """One Green's-function evaluation: value (1/m) plus what was evaluated."""

    value: complex
    kind: GreensKind
    orientation: Orientation
    k0: float


@dataclass(frozen=True)
class WeylResult:
    """Integral value with the quadrature's own error estimate."""

    value: complex
    error: float
    subdivisions: int
    kappa_max: float


# -- Gauss-Kronrod 7/15 rule ------------------------------------------------
# Standard abscissae/weights (positive half) of the 15-point Kronrod
# extension of 7-point Gauss-Legendre on [-1, 1].

_XGK_HALF = np.array(
    [
        0.9914553711208126,
        0.9491079123427585,
        0.8648644233597691,
        0.7415311855993944,
        0.5860872354676911,
        0.4058451513773972,
        0.2077849550078985,
    ]
)
_WGK_HALF = np.array(
    [
        0.0229353220105292,
        0.0630920926299786,
        0.1047900103222502,
        0.1406532597155259,
        0.1690047266392679,
        0.1903505780647854,
        0.2044329400752989,
    ]
)
_WGK_CENTER = 0.2094821410847278
_WG_HALF = np.array([0.1294849661688697, 0.2797053914892767, 0.3818300505051189])
_WG_CENTER = 0.4179591836734694

_NODES = np.concatenate([-_XGK_HALF, [0.0], _XGK_HALF[::-1]])
_WEIGHTS_K = np.concatenate([_WGK_HALF, [_WGK_CENTER], _WGK_HALF[::-1]])
_WEIGHTS_G = np.zeros(15)
_WEIGHTS_G[[1, 3, 5]] = _WG_HALF
_WEIGHTS_G[7] = _WG_CENTER
_WEIGHTS_G[[9, 11, 13]] = _WG_HALF[::-1]


def _gk_panels(f, bounds):
    """Evaluate the K15/G7 pair on every (a, b) panel with one call to f."""
    a = np.array([p[0] for p in bounds])
    b = np.array([p[1] for p in bounds])
    mid = 0.5 * (a + b)
    half = 0.5 * (b - a)
    x = mid[:, None] + half[:, None] * _NODES[None, :]
    y = np.asarray(f(x.ravel()), dtype=complex).reshape(x.shape)
    k15 = half * (y @ _WEIGHTS_K)
    g7 = half * (y @ _WEIGHTS_G)
    return k15, np.abs(k15 - g7)


def _adaptive_gk(f, a: float, b: float, rel_tol: float, abs_tol: float, max_subdivisions: int):
    """Globally adaptive G7/K15 on [a, b] for a complex vectorized integrand.

    Splits the worst panel (largest |K15 - G7|) until the summed estimate
    meets max(abs_tol, rel_tol * |integral|).  Fully deterministic: ties
    break on insertion order.  Returns (value, error_estimate, panels_split).
    """
    if b <= a:
        return 0.0j, 0.0, 0
    k15, err = _gk_panels(f, [(a, b)])
    heap = [(-err[0], 0, a, b, k15[0])]
    tick = 1
    total = k15[0]
    total_err = err[0]
    nsplit = 0
    while total_err > max(abs_tol, rel_tol * abs(total)):
        if nsplit >= max_subdivisions:
            raise QuadratureError(
                f"no convergence after {nsplit} subdivisions "
                f"(estimate {total:.6e}, error {total_err:.3e})",
                value=total,
                error=total_err,
            )
        worst_err, _, pa, pb, pval = heapq.heappop(heap)
        pm = 0.5 * (pa + pb)
        if pm <= pa or pm >= pb:
            raise QuadratureError(
                f"panel [{pa}, {pb}] collapsed below float resolution",
                value=total,
                error=total_err,
            )
        k2, e2 = _gk_panels(f, [(pa, pm), (pm, pb)])
        total += k2[0] + k2[1] - pval
        total_err += e2[0] + e2[1] + worst_err  # worst_err is negative
        heapq.heappush(heap, (-e2[0], tick, pa, pm, k2[0]))
        heapq.heappush(heap, (-e2[1], tick + 1, pm, pb, k2[1]))
        tick += 2
        nsplit += 1
    # re-sum left to right: removes the drift of incremental updates and is
    # independent of the subdivision history's heap ordering
    panels = sorted(heap, key=lambda p: p[2])
    total = complex(sum(p[4] for p in panels))
    return total, float(total_err), nsplit


def default_kappa_max(k0: float, z1: float, thickness: float) -> float:
    """Cutoff where every surviving exponential is down by at least e^{-40}."""
    zeta = min(2.0 * z1, thickness + 2.0 * z1)
    return k0 + 40.0 / zeta


def _resolve(spec: QuadratureSpec, k0: float) -> QuadratureSpec:
    if spec.abs_tol is None:
        spec = replace(spec, abs_tol=1e-12 * k0)
    return spec


def _weyl_raw(f, k0: float, kappa_max: float, spec: QuadratureSpec):
    """Integral of f over [0, kappa_max] via the two substitutions (no 1/2pi)."""
    if kappa_max <= k0:
        raise ValueError(f"kappa_max ({kappa_max}) must exceed k0 ({k0})")
    # each segment gets half the relative budget and pi * abs_tol, so the
    # combined 1/(2 pi)-scaled error stays within (rel_tol, abs_tol)
    seg_abs = spec.abs_tol * math.pi

    # keep the abscissae one ulp away from the branch point: sin(theta) rounds
    # to exactly 1 within ~1e-8 of pi/2 (and cosh(u) to 1 near u = 0), which
    # would put kappa = k0 exactly and 1/kz_vacuum = inf into the integrand
    kap_below = np.nextafter(k0, 0.0)
    kap_above = np.nextafter(k0, math.inf)

    def g_prop(theta):
        kap = np.minimum(k0 * np.sin(theta), kap_below)
        return f(kap) * k0 * np.cos(theta)

    def g_evan(u):
        kap = np.maximum(k0 * np.cosh(u), kap_above)
        return f(kap) * k0 * np.sinh(u)

    a_val, a_err, a_n = _adaptive_gk(
        g_prop, 0.0, 0.5 * math.pi, 0.5 * spec.rel_tol, seg_abs, spec.max_subdivisions
    )
    u_max = math.acosh(kappa_max / k0)
    b_val, b_err, b_n = _adaptive_gk(
        g_evan, 0.0, u_max, 0.5 * spec.rel_tol, seg_abs, spec.max_subdivisions
    )
    return a_val + b_val, a_err + b_err, a_n + b_n, g_evan, u_max


def integrate_weyl_detailed(integrand, k0: float, spec: QuadratureSpec) -> WeylResult:
    """As :func:`integrate_weyl`, but returning the error estimate too."""
    if spec.kappa_max is None:
        raise ValueError(
            "spec.kappa_max must be set for integrate_weyl; "
            "g_cross / g_single resolve the geometry-based default"
        )
    spec = _resolve(spec, k0)
    raw, raw_err, nsub, _, _ = _weyl_raw(integrand, k0, spec.kappa_max, spec)
    two_pi = 2.0 * math.pi
    return WeylResult(
        value=raw / two_pi,
        error=raw_err / two_pi,
        subdivisions=nsub,
        kappa_max=spec.kappa_max,
    )


def integrate_weyl(integrand, k0: float, spec: QuadratureSpec) -> complex:
    """(1/2pi) * integral of ``integrand(kappa)`` over [0, spec.kappa_max].

    The integrand must accept an ndarray of kappa values.  The interval is
    split at the branch point kappa = k0 and mapped through kappa =
    k0 sin(theta) / k0 cosh(u) before the adaptive rule runs.
    """
    return integrate_weyl_detailed(integrand, k0, spec).value


_TAIL_RATIO = 1e-14
_MAX_TAIL_DOUBLINGS = 12


def _integrate_with_tail(f, k0: float, spec: QuadratureSpec, z1: float, thickness: float):
    """Weyl integral with the automatic evanescent-tail extension.

    Used when ``spec.kappa_max`` is None: after integrating to the default
    cutoff, the evanescent window is doubled until the integrand magnitude
    at the cutoff falls below 1e-14 of the accumulated integral magnitude.
    An explicit ``spec.kappa_max`` is honoured verbatim (no extension).
    """
    spec = _resolve(spec, k0)
    if spec.kappa_max is not None:
        res = integrate_weyl_detailed(f, k0, spec)
        return res.value, res.error, res.kappa_max

    kappa_max = default_kappa_max(k0, z1, thickness)
    raw, raw_err, _, g_evan, u_max = _weyl_raw(f, k0, kappa_max, spec)
    seg_abs = spec.abs_tol * math.pi
    for _ in range(_MAX_TAIL_DOUBLINGS):
        accum = abs(raw)
        if abs(complex(f(np.array([kappa_max]))[0])) <= _TAIL_RATIO * accum:
            break
        kappa_next = k0 + 2.0 * (kappa_max - k0)
        u_next = math.acosh(kappa_next / k0)
        ext, ext_err, _ = _adaptive_gk(
            g_evan, u_max, u_next, 0.5 * spec.rel_tol, seg_abs, spec.max_subdivisions
        )
        raw += ext
        raw_err += ext_err
        kappa_max, u_max = kappa_next, u_next
    else:
        raise QuadratureError(
            f"evanescent tail still significant at kappa_max={kappa_max:.6e}",
            value=raw / (2.0 * math.pi),
            error=raw_err / (2.0 * math.pi),
        )
    two_pi = 2.0 * math.pi
    return raw / two_pi, raw_err / two_pi, kappa_max


# -- integrands ---------------------------------------------------------------


def cross_integrand(orientation: Orientation, kappa, k0: float, film: FilmStack, z1: float):
    """Weyl integrand of the cross-film Green's function (azimuth folded in).

    Z:  kappa * (i e^{i kz_v (d + 2 z1)} / 2 kz_v) * t_p * kappa^2 / k0^2
    X:  kappa * (i e^{i kz_v (d + 2 z1)} / 2 kz_v) * (t_s + t_p kz_v^2 / k0^2) / 2
    """
    kappa = np.asarray(kappa, dtype=float)
    kzv = kz_vacuum(kappa, k0)
    pre = kappa * 0.5j * np.exp(1j * kzv * (film.thickness + 2.0 * z1)) / kzv
    if orientation is Orientation.Z:
        t_p = film_transmission(Polarization.P, kappa, k0, film)
        return pre * t_p * kappa**2 / k0**2
    t_s = film_transmission(Polarization.S, kappa, k0, film)
    t_p = film_transmission(Polarization.P, kappa, k0, film)
    return pre * 0.5 * (t_s + t_p * kzv**2 / k0**2)


def _single_free_integrand(orientation: Orientation, kappa, k0: float):
    """Free-space part of the single-position integrand."""
    kappa = np.asarray(kappa, dtype=float)
    kzv = kz_vacuum(kappa, k0)
    pre = kappa * 0.5j / kzv
    if orientation is Orientation.Z:
        return pre * kappa**2 / k0**2
    return pre * (k0**2 + kzv**2) / (2.0 * k0**2)


def _single_reflection_integrand(
    orientation: Orientation, kappa, k0: float, film: FilmStack, z1: float
):
    """Film-reflection part of the single-position integrand."""
    kappa = np.asarray(kappa, dtype=float)
    kzv = kz_vacuum(kappa, k0)
    pre = kappa * 0.5j * np.exp(2j * kzv * z1) / kzv
    r_p = film_reflection(Polarization.P, kappa, k0, film)
    if orientation is Orientation.Z:
        return pre * kappa**2 / k0**2 * r_p
    r_s = film_reflection(Polarization.S, kappa, k0, film)
    return pre * 0.5 * (r_s - r_p * kzv**2 / k0**2)


def single_integrand(orientation: Orientation, kappa, k0: float, film: FilmStack, z1: float):
    """Weyl integrand of the single-position Green's function.

    Z:  kappa * (i / 2 kz_v) * (kappa^2 / k0^2) * (1 + r_p e^{2 i kz_v z1})
    X:  kappa * (i / 2 kz_v) * [(k0^2 + kz_v^2) / 2 k0^2
                                + e^{2 i kz_v z1} (r_s - r_p kz_v^2 / k0^2) / 2]

    Note the free-space term's evanescent (kappa > k0) contribution is
    purely real and divergent (the free-space self-energy); ``g_single``
    keeps only its propagating part, see there.
    """
    return _single_free_integrand(orientation, kappa, k0) + _single_reflection_integrand(
        orientation, kappa, k0, film, z1
    )


# -- Green's function values --------------------------------------------------


def g_cross(
    geometry: Geometry, medium: UniaxialMedium, k0: float, spec: QuadratureSpec | None = None
) -> GreensValue:
    """Cross-film Green's function component for the given dipole orientation.

    Im drives the collective decay rate, -Re the coherent dipole-dipole
    shift.  With an identity film (vacuum medium or zero thickness) this
    reduces to the free-space Green's function at the full separation.
    """
    if spec is None:
        spec = QuadratureSpec()
    if k0 <= 0.0:
        raise ValueError(f"k0 must be positive, got {k0}")
    film = FilmStack(medium=medium, thickness=geometry.thickness)

    def f(kappa):
        return cross_integrand(geometry.orientation, kappa, k0, film, geometry.z1)

    value, _, _ = _integrate_with_tail(f, k0, spec, geometry.z1, geometry.thickness)
    return GreensValue(value=value, kind=GreensKind.CROSS_FILM, orientation=geometry.orientation, k0=k0)


def g_single(
    geometry: Geometry, medium: UniaxialMedium, k0: float, spec: QuadratureSpec | None = None
) -> GreensValue:
    """Single-position Green's function at emitter 1 (vacuum + film reflection).

    The free-space term is integrated over the propagating sector only
    (kappa <= k0), where it is finite and carries the entire free-space
    imaginary part Im = k0 / 6 pi; its evanescent tail is a divergent,
    purely real self-energy that feeds no observable used here and is
    dropped.  The reflection term is integrated over the full range, so
    Im(g_single) is exact and Re(g_single) is the film-induced shift.
    """
    if spec is None:
        spec = QuadratureSpec()
    if k0 <= 0.0:
        raise ValueError(f"k0 must be positive, got {k0}")
    spec = _resolve(spec, k0)
    film = FilmStack(medium=medium, thickness=geometry.thickness)
    orientation = geometry.orientation

    def free_transformed(theta):
        kap = k0 * np.sin(theta)
        return _single_free_integrand(orientation, kap, k0) * k0 * np.cos(theta)

    free_val, _, _ = _adaptive_gk(
        free_transformed,
        0.0,
        0.5 * math.pi,
        0.5 * spec.rel_tol,
        spec.abs_tol * math.pi,
        spec.max_subdivisions,
    )

    def refl(kappa):
        return _single_reflection_integrand(orientation, kappa, k0, film, geometry.z1)

    refl_val, _, _ = _integrate_with_tail(refl, k0, spec, geometry.z1, geometry.thickness)
    value = free_val / (2.0 * math.pi) + refl_val
    return GreensValue(
        value=value, kind=GreensKind.SINGLE_POSITION, orientation=orientation, k0=k0
    )


def g_vacuum_closed_form(orientation: Orientation, separation: float, k0: float) -> complex:
    """Free-space dyadic Green's function component at axial separation R.

    For both dipoles along the separation axis (Z) or both transverse to it
    (X), with kR = k0 R:

        G_zz = e^{i kR} / (4 pi R) * 2 (1 - i kR) / kR^2
        G_xx = e^{i kR} / (4 pi R) * (1 + i / kR - 1 / kR^2)

    Both tend to i k0 / 6 pi as R -> 0 (imaginary part), fixing the vacuum
    decay-rate normalization.
    """
    if separation <= 0.0:
        raise ValueError(f"separation must be positive, got {separation}")
    if k0 <= 0.0:
        raise ValueError(f"k0 must be positive, got {k0}")
    kr = k0 * separation
    spherical = np.exp(1j * kr) / (4.0 * math.pi * separation)
    if orientation is Orientation.Z:
        return complex(spherical * 2.0 * (1.0 - 1j * kr) / kr**2)
    return complex(spherical * (1.0 + 1j / kr - 1.0 / kr**2))
