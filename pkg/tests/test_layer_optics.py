"""Tests for the film transmission/reflection coefficients.

The independent oracle is the textbook characteristic-matrix (transfer
matrix) treatment of a single slab between two vacuum half-spaces: for a
layer with normal wavenumber kz_m, surface admittance q_m and phase
delta = kz_m d,

    M = [[cos delta, -i sin delta / q_m], [-i q_m sin delta, cos delta]]
    A = M11 + M12 q_v,  B = M21 + M22 q_v
    r = (q_v A - B) / (q_v A + B),   t_matrix = 2 q_v / (q_v A + B)

with q = kz for s waves and q = kz / eps_perp for p waves (the tangential-E
to tangential-H ratio).  The library's t is referenced to the film faces,
i.e. t = t_matrix * e^{-i kz_vac d}.
"""

import math

import numpy as np
import pytest

from filmqed import (
    FilmStack,
    LayerOpticsError,
    Polarization,
    UniaxialMedium,
    film_reflection,
    film_transmission,
    interface_reflection,
    kz_extraordinary,
    kz_ordinary,
    kz_vacuum,
)

K0 = 2 * math.pi / 500e-9


def transfer_matrix_slab(pol, kappa, k0, medium, thickness):
    """Characteristic-matrix t (face-referenced) and r for one slab in vacuum."""
    kzv = kz_vacuum(kappa, k0)
    if pol is Polarization.S:
        kzm = kz_ordinary(kappa, k0, medium)
        q_m, q_v = kzm, kzv
    else:
        kzm = kz_extraordinary(kappa, k0, medium)
        q_m, q_v = kzm / medium.eps_perp, kzv
    delta = kzm * thickness
    m11 = np.cos(delta)
    m12 = -1j * np.sin(delta) / q_m
    m21 = -1j * q_m * np.sin(delta)
    m22 = np.cos(delta)
    a = m11 + m12 * q_v
    b = m21 + m22 * q_v
    r = (q_v * a - b) / (q_v * a + b)
    t = 2 * q_v / (q_v * a + b) * np.exp(-1j * kzv * thickness)
    return t, r


ISOTROPIC_MEDIA = [
    UniaxialMedium(2.25 + 0.01j, 2.25 + 0.01j),
    UniaxialMedium(-2.675 + 0.256j, -2.675 + 0.256j),  # silver-like
    UniaxialMedium(7.0 + 0j, 7.0 + 0j),
]

UNIAXIAL_MEDIA = [
    UniaxialMedium(2.25 + 0.02j, 5.0 + 0.1j),
    UniaxialMedium(-2.1 + 0.25j, 3.5 + 0.05j),  # in-plane metallic
    UniaxialMedium(3.2 + 0.05j, -4.0 + 0.3j),  # normal metallic
]


@pytest.mark.parametrize("medium", ISOTROPIC_MEDIA + UNIAXIAL_MEDIA)
@pytest.mark.parametrize("k0d", [0.1, 1.0, 5.0])
@pytest.mark.parametrize("pol", [Polarization.S, Polarization.P])
def test_matches_transfer_matrix(medium, k0d, pol):
    thickness = k0d / K0
    film = FilmStack(medium, thickness)
    # includes kappa = k0 exactly (kz_vac = 0) and deep evanescent kappa
    kappas = np.linspace(0.0, 3.0, 61) * K0
    t_lib = film_transmission(pol, kappas, K0, film)
    r_lib = film_reflection(pol, kappas, K0, film)
    t_ref, r_ref = transfer_matrix_slab(pol, kappas, K0, medium, thickness)
    scale_t = np.maximum(np.abs(t_ref), 1e-300)
    scale_r = np.maximum(np.abs(r_ref), 1.0)  # r can be 0; bound abs error then
    assert np.max(np.abs(t_lib - t_ref) / scale_t) < 1e-12
    assert np.max(np.abs(r_lib - r_ref) / scale_r) < 1e-12


@pytest.mark.parametrize(
    "medium",
    [
        UniaxialMedium(2.25 + 0j, 2.25 + 0j),
        UniaxialMedium(7.0 + 0j, 7.0 + 0j),
        UniaxialMedium(2.25 + 0j, 4.0 + 0j),  # lossless uniaxial
    ],
)
@pytest.mark.parametrize("pol", [Polarization.S, Polarization.P])
def test_lossless_energy_conservation(medium, pol):
    film = FilmStack(medium, 60e-9)
    kappas = np.linspace(0.0, 0.999, 40) * K0
    t = film_transmission(pol, kappas, K0, film)
    r = film_reflection(pol, kappas, K0, film)
    assert np.max(np.abs(np.abs(t) ** 2 + np.abs(r) ** 2 - 1.0)) < 1e-10


@pytest.mark.parametrize("pol", [Polarization.S, Polarization.P])
def test_lossy_film_absorbs(pol):
    film = FilmStack(UniaxialMedium(-2.675 + 0.256j, -2.675 + 0.256j), 30e-9)
    kappas = np.linspace(0.0, 0.999, 20) * K0
    t = film_transmission(pol, kappas, K0, film)
    r = film_reflection(pol, kappas, K0, film)
    assert np.all(np.abs(t) ** 2 + np.abs(r) ** 2 < 1.0)


def test_identity_film():
    vacuum = UniaxialMedium(1.0 + 0j, 1.0 + 0j)
    # avoid exactly kappa = k0: for an identity film the interface
    # coefficient is 0/0 there (a removable point, rejected as a pole)
    kappas = np.linspace(0.0, 3.0, 32) * K0
    for pol in Polarization:
        t = film_transmission(pol, kappas, K0, FilmStack(vacuum, 80e-9))
        r = film_reflection(pol, kappas, K0, FilmStack(vacuum, 80e-9))
        assert np.max(np.abs(t - 1.0)) < 1e-14
        assert np.max(np.abs(r)) < 1e-14
        # zero thickness is an identity film for any medium
        metal = UniaxialMedium(-2.0 + 0.3j, -2.0 + 0.3j)
        t0 = film_transmission(pol, kappas, K0, FilmStack(metal, 0.0))
        r0 = film_reflection(pol, kappas, K0, FilmStack(metal, 0.0))
        assert np.max(np.abs(t0 - 1.0)) < 1e-14
        assert np.max(np.abs(r0)) < 1e-14


def test_branch_rules():
    # propagating sector: real positive kz; evanescent: positive imaginary
    assert kz_vacuum(0.5 * K0, K0).real > 0.0
    assert kz_vacuum(0.5 * K0, K0).imag == 0.0
    assert kz_vacuum(2.0 * K0, K0).real == 0.0
    assert kz_vacuum(2.0 * K0, K0).imag > 0.0
    # lossy media always decay upward
    med = UniaxialMedium(-2.675 + 0.256j, 5.0 + 0.1j)
    kappas = np.linspace(0.0, 3.0, 31) * K0
    assert np.all(kz_ordinary(kappas, K0, med).imag > 0.0)
    assert np.all(kz_extraordinary(kappas, K0, med).imag > 0.0)


def test_normal_incidence_symmetry():
    # at kappa = 0 both polarizations see the in-plane permittivity and
    # describe the same wave; the sign convention pairs them as R_p = -R_s
    # and t_p = t_s (uniaxial media included: kz_e(0) = kz_o(0))
    for med in ISOTROPIC_MEDIA + UNIAXIAL_MEDIA:
        r_s = interface_reflection(Polarization.S, 0.0, K0, med)
        r_p = interface_reflection(Polarization.P, 0.0, K0, med)
        assert r_p == pytest.approx(-r_s, rel=1e-13)
        t_s = film_transmission(Polarization.S, 0.0, K0, FilmStack(med, 40e-9))
        t_p = film_transmission(Polarization.P, 0.0, K0, FilmStack(med, 40e-9))
        assert t_p == pytest.approx(t_s, rel=1e-13)


def test_scalar_and_array_shapes():
    med = UniaxialMedium(2.25 + 0.01j, 2.25 + 0.01j)
    film = FilmStack(med, 40e-9)
    t_scalar = film_transmission(Polarization.S, 0.4 * K0, K0, film)
    assert np.ndim(t_scalar) == 0
    t_arr = film_transmission(Polarization.S, np.array([0.4, 1.7]) * K0, K0, film)
    assert t_arr.shape == (2,)
    # scalar and vectorized code paths may differ in the last ulp
    assert t_arr[0] == pytest.approx(t_scalar, rel=1e-14)
    kz = kz_vacuum(0.4 * K0, K0)
    assert np.ndim(kz) == 0


def test_validation():
    med = UniaxialMedium(2.0 + 0j, 2.0 + 0j)
    with pytest.raises(LayerOpticsError):
        FilmStack(med, -1e-9)
    with pytest.raises(LayerOpticsError):
        kz_extraordinary(0.5 * K0, K0, UniaxialMedium(2.0 + 0j, 0.0 + 0j))
