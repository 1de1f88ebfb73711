"""Collective two-qubit dissipative dynamics and concurrence.

Two identical two-level systems couple through the field modes of the
layered environment.  After tracing the field and dropping the fast optical
phase, three real numbers fix the whole evolution:

* gamma_s: single-emitter decay rate (same for both, by mirror symmetry),
* gamma_c: collective cross-damping rate, |gamma_c| <= gamma_s,
* omega_c: coherent dipole-dipole shift.

All three are expressed in units of the free-space rate gamma_0 and times
in units of 1/gamma_0, so the master equation is parameter-free.  States
are tracked in the collective basis |e> = |e1 e2>, |s/a> = (|e1 g2> +/-
|g1 e2>)/sqrt(2), |g> = |g1 g2>; the populations and the two coherences
rho_as, rho_eg close on themselves, which is what makes the closed-form
solutions below possible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .greens import GreensKind, GreensValue


class DynamicsError(ValueError):
    """Raised for invalid rates, states or times."""


class PhysicalityError(DynamicsError):
    """Raised when extracted rates violate |gamma_c| <= gamma_s beyond tolerance."""


#: Relative slack allowed on |gamma_c| <= gamma_s before raising; smaller
#: excursions (quadrature noise, exact film-less degeneracy) are clamped.
_PHYSICALITY_SLACK = 1e-9


@dataclass(frozen=True)
class RateTriple:
    """Emission-rate triple in units of gamma_0."""

    gamma_s: float
    gamma_c: float
    omega_c: float

    def __post_init__(self) -> None:
        if not self.gamma_s > 0.0:
            raise DynamicsError(f"gamma_s must be positive, got {self.gamma_s}")
        if abs(self.gamma_c) > self.gamma_s:
            raise DynamicsError(
                f"|gamma_c| = {abs(self.gamma_c)} exceeds gamma_s = {self.gamma_s}"
            )


def rates_from_greens(single: GreensValue, cross: GreensValue) -> RateTriple:
    """Extract (gamma_s, gamma_c, omega_c)/gamma_0 from the two Green's values.

    gamma_s = (6 pi / k0) Im g_single
    gamma_c = (6 pi / k0) Im g_cross
    omega_c = -(6 pi / k0) Re g_cross

    The pair must share orientation and k0.  |gamma_c| may exceed gamma_s
    only by quadrature noise: up to a relative 1e-9 it is clamped onto the
    physical boundary, beyond that a PhysicalityError is raised.
    """
    if single.kind is not GreensKind.SINGLE_POSITION:
        raise DynamicsError(f"first argument must be single-position, got {single.kind}")
    if cross.kind is not GreensKind.CROSS_FILM:
        raise DynamicsError(f"second argument must be cross-film, got {cross.kind}")
    if single.orientation is not cross.orientation:
        raise DynamicsError(
            f"orientation mismatch: {single.orientation} vs {cross.orientation}"
        )
    if single.k0 != cross.k0:
        raise DynamicsError(f"k0 mismatch: {single.k0} vs {cross.k0}")
    scale = 6.0 * math.pi / single.k0
    gamma_s = scale * single.value.imag
    gamma_c = scale * cross.value.imag
    omega_c = -scale * cross.value.real
    if gamma_s <= 0.0:
        raise PhysicalityError(f"gamma_s = {gamma_s} is not positive")
    if abs(gamma_c) > gamma_s * (1.0 + _PHYSICALITY_SLACK):
        raise PhysicalityError(
            f"|gamma_c| = {abs(gamma_c)} exceeds gamma_s = {gamma_s} "
            f"beyond the {_PHYSICALITY_SLACK} slack"
        )
    gamma_c = min(max(gamma_c, -gamma_s), gamma_s)
    return RateTriple(gamma_s=gamma_s, gamma_c=gamma_c, omega_c=omega_c)


#: Collective -> product basis change; columns are |e>, |s>, |a>, |g> written
#: in the product basis |e1 e2>, |e1 g2>, |g1 e2>, |g1 g2>.
_SQ2 = 1.0 / math.sqrt(2.0)
_U_COLLECTIVE_TO_PRODUCT = np.array(
    [
        [1.0, 0.0, 0.0, 0.0],
        [0.0, _SQ2, _SQ2, 0.0],
        [0.0, _SQ2, -_SQ2, 0.0],
        [0.0, 0.0, 0.0, 1.0],
    ]
)

_POPULATION_TOL = 1e-12


@dataclass(frozen=True)
class TwoQubitState:
    """Density-matrix components in the collective basis.

    Only the components that the dynamics couples are tracked; all other
    coherences are identically zero for the initial states of interest and
    stay zero.  Populations must sum to one.
    """

    rho_ee: float
    rho_ss: float
    rho_aa: float
    rho_gg: float
    rho_as: complex = 0.0j
    rho_eg: complex = 0.0j

    def __post_init__(self) -> None:
        pops = (self.rho_ee, self.rho_ss, self.rho_aa, self.rho_gg)
        for name, p in zip(("rho_ee", "rho_ss", "rho_aa", "rho_gg"), pops):
            if p < -_POPULATION_TOL or p > 1.0 + _POPULATION_TOL:
                raise DynamicsError(f"population {name} = {p} outside [0, 1]")
        if abs(sum(pops) - 1.0) > _POPULATION_TOL:
            raise DynamicsError(f"populations sum to {sum(pops)}, expected 1")

    @classmethod
    def excited_one(cls) -> "TwoQubitState":
        """Emitter 1 excited, emitter 2 in the ground state."""
        return cls(rho_ee=0.0, rho_ss=0.5, rho_aa=0.5, rho_gg=0.0, rho_as=0.5 + 0.0j)

    @classmethod
    def doubly_excited(cls) -> "TwoQubitState":
        return cls(rho_ee=1.0, rho_ss=0.0, rho_aa=0.0, rho_gg=0.0)

    def collective_matrix(self) -> np.ndarray:
        """4x4 density matrix in the collective basis (|e>, |s>, |a>, |g>)."""
        rho = np.zeros((4, 4), dtype=complex)
        rho[0, 0] = self.rho_ee
        rho[1, 1] = self.rho_ss
        rho[2, 2] = self.rho_aa
        rho[3, 3] = self.rho_gg
        rho[2, 1] = self.rho_as
        rho[1, 2] = np.conj(self.rho_as)
        rho[0, 3] = self.rho_eg
        rho[3, 0] = np.conj(self.rho_eg)
        return rho

    def product_matrix(self) -> np.ndarray:
        """4x4 density matrix in the product basis |e1 e2>, |e1 g2>, |g1 e2>, |g1 g2>."""
        u = _U_COLLECTIVE_TO_PRODUCT
        return u @ self.collective_matrix() @ u.T


def _phi(x):
    """(1 - e^{-x}) / x, the divided difference behind the driven populations.

    Continuous through x = 0 with phi(0) = 1, so the symmetric/antisymmetric
    feeding terms need no special-casing at gamma_c = -/+ gamma_s.
    """
    x = np.asarray(x, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.where(x == 0.0, 1.0, -np.expm1(-x) / np.where(x == 0.0, 1.0, x))
    return out[()] if np.ndim(x) == 0 else out


def evolve(rates: RateTriple, state: TwoQubitState, t: float) -> TwoQubitState:
    """Propagate a state for a time t >= 0 (units of 1/gamma_0).

    Closed-form solution of the collective master equation:

        rho_ee(t) = rho_ee e^{-4 gs t}
        rho_ss(t) = rho_ss e^{-2(gs+gc) t} + 2 t (gs+gc) rho_ee e^{-2(gs+gc) t} phi(2(gs-gc) t)
        rho_aa(t) = rho_aa e^{-2(gs-gc) t} + 2 t (gs-gc) rho_ee e^{-2(gs-gc) t} phi(2(gs+gc) t)
        rho_as(t) = rho_as e^{-2(gs - i oc) t}
        rho_eg(t) = rho_eg e^{-2 gs t}      (optical phase already dropped)
        rho_gg(t) = 1 - rho_ee - rho_ss - rho_aa

    The phi form is the same function as the textbook expression with the
    (gs -/+ gc) denominators, rewritten so the degenerate limits come out
    of expm1 instead of a 0/0.
    """
    if t < 0.0:
        raise DynamicsError(f"t must be >= 0, got {t}")
    gs, gc, oc = rates.gamma_s, rates.gamma_c, rates.omega_c
    decay_e = math.exp(-4.0 * gs * t)
    decay_s = math.exp(-2.0 * (gs + gc) * t)
    decay_a = math.exp(-2.0 * (gs - gc) * t)
    ee = state.rho_ee * decay_e
    ss = state.rho_ss * decay_s + 2.0 * t * (gs + gc) * state.rho_ee * decay_s * _phi(
        2.0 * (gs - gc) * t
    )
    aa = state.rho_aa * decay_a + 2.0 * t * (gs - gc) * state.rho_ee * decay_a * _phi(
        2.0 * (gs + gc) * t
    )
    rho_as = state.rho_as * np.exp(-2.0 * (gs - 1j * oc) * t)
    rho_eg = state.rho_eg * math.exp(-2.0 * gs * t)
    return TwoQubitState(
        rho_ee=ee,
        rho_ss=ss,
        rho_aa=aa,
        rho_gg=1.0 - ee - ss - aa,
        rho_as=complex(rho_as),
        rho_eg=complex(rho_eg),
    )


@dataclass(frozen=True)
class ConcurrencePoint:
    """Concurrence c at time t (units of 1/gamma_0)."""

    t: float
    c: float


def concurrence_curve(rates: RateTriple, t) -> np.ndarray:
    """Closed-form concurrence for the emitter-1-excited initial state.

    C(t) = e^{-2 gs t} sqrt(sinh^2(2 gc t) + sin^2(2 oc t)), clamped to
    [0, 1].  The hyperbolic factor is evaluated as a difference of two
    decaying exponentials, so large 2 gc t cannot overflow (|gc| <= gs
    keeps both exponents non-positive).  Vectorized over t.
    """
    t = np.asarray(t, dtype=float)
    if np.any(t < 0.0):
        raise DynamicsError("t must be >= 0")
    gs, gc, oc = rates.gamma_s, rates.gamma_c, rates.omega_c
    hyp = 0.5 * (np.exp(-2.0 * (gs - gc) * t) - np.exp(-2.0 * (gs + gc) * t))
    osc = np.exp(-2.0 * gs * t) * np.sin(2.0 * oc * t)
    c = np.clip(np.sqrt(hyp**2 + osc**2), 0.0, 1.0)
    return c[()] if np.ndim(t) == 0 else c


def concurrence_closed_form(rates: RateTriple, t: float) -> ConcurrencePoint:
    """Concurrence at a single time for the emitter-1-excited initial state."""
    return ConcurrencePoint(t=float(t), c=float(concurrence_curve(rates, float(t))))


def concurrence_asymptotic(rates: RateTriple, t: float) -> ConcurrencePoint:
    """Late-time envelope C ~ (1/2) e^{2(|gc| - gs) t}.

    Valid once 2 |gc| t >> 1 (hyperbolic factor saturated) and the
    oscillatory term has decayed relative to it.
    """
    if t < 0.0:
        raise DynamicsError(f"t must be >= 0, got {t}")
    gs, gc = rates.gamma_s, rates.gamma_c
    return ConcurrencePoint(t=float(t), c=0.5 * math.exp(2.0 * (abs(gc) - gs) * t))


_SY_SY = np.array(
    [
        [0.0, 0.0, 0.0, -1.0],
        [0.0, 0.0, 1.0, 0.0],
        [0.0, 1.0, 0.0, 0.0],
        [-1.0, 0.0, 0.0, 0.0],
    ]
)


def wootters_concurrence(rho: np.ndarray) -> float:
    """Concurrence of an arbitrary two-qubit density matrix (product basis).

    C = max(0, sqrt(l1) - sqrt(l2) - sqrt(l3) - sqrt(l4)) with l_i the
    decreasing eigenvalues of rho (sy x sy) rho* (sy x sy).  Eigenvalues
    below a relative 1e-13 floor are exact zeros seen through eigensolver
    rounding and are zeroed before the square root: the root would otherwise
    amplify 1e-16-level dust into 1e-8-level concurrence noise.  Tiny
    negative eigenvalues from rounding are clipped the same way.
    """
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (4, 4):
        raise DynamicsError(f"expected a 4x4 density matrix, got shape {rho.shape}")
    if not np.allclose(rho, rho.conj().T, atol=1e-9):
        raise DynamicsError("density matrix is not Hermitian")
    if abs(np.trace(rho).real - 1.0) > 1e-9:
        raise DynamicsError(f"trace is {np.trace(rho)}, expected 1")
    rho_tilde = _SY_SY @ rho.conj() @ _SY_SY
    lam = np.linalg.eigvals(rho @ rho_tilde).real
    lam = np.sort(np.clip(lam, 0.0, None))[::-1]
    if lam[0] > 0.0:
        lam[lam < 1e-13 * lam[0]] = 0.0
    roots = np.sqrt(lam)
    return float(max(0.0, roots[0] - roots[1] - roots[2] - roots[3]))


def transmission_proxy(rates: RateTriple) -> float:
    """gamma_c^2 + omega_c^2: squared magnitude of the cross-film coupling."""
    return rates.gamma_c**2 + rates.omega_c**2


def peak_concurrence(
    rates: RateTriple, u_max: float = 40.0, base_points: int = 4001
) -> ConcurrencePoint:
    """Maximum of the closed-form concurrence over t in (0, u_max / gamma_s].

    The grid is uniform in u = gamma_s t and refined with the shift-to-decay
    ratio so fast 2 omega_c t oscillations stay resolved.
    """
    gs = rates.gamma_s
    # at least ~16 samples per half-period of sin(2 oc t) across the window
    phase = 2.0 * abs(rates.omega_c) / gs * u_max
    n = max(base_points, int(16.0 * phase / math.pi) + 1)
    t = np.linspace(0.0, u_max / gs, n)
    c = concurrence_curve(rates, t)
    i = int(np.argmax(c))
    return ConcurrencePoint(t=float(t[i]), c=float(c[i]))
