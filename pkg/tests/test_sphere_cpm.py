import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cohomfold.errors import DomainError, InvalidParameterError
from cohomfold.halfangle import build_halfangle
from cohomfold.linalg import RandomSource, haar_special_orthogonal, uniform_cpm_point, uniform_sphere_point
from cohomfold.sphere_cpm import cpm_fold, cpm_geodesic, projective_distance, sphere_power
from cohomfold.verify import near_middle_points

odd_k = st.integers(-9, 9).filter(lambda k: k % 2)


def test_sphere_examples():
    p = uniform_sphere_point(4, RandomSource(1), size=10)
    assert np.max(np.abs(sphere_power(1, p) - p)) <= 1e-15
    v = np.array([0.6, 0.8])
    out = sphere_power(2, np.r_[np.cos(0.5), np.sin(0.5) * v])
    assert np.max(np.abs(out - np.r_[np.cos(1.0), np.sin(1.0) * v])) <= 1e-14
    pole = np.array([1.0, 0, 0, 0])
    assert np.array_equal(sphere_power(3, pole), pole)


def test_sphere_domain():
    with pytest.raises(DomainError):
        sphere_power(3, np.array([1.0, 1.0, 0.0]))


@pytest.mark.parametrize("n", [1, 2, 3, 6])
@pytest.mark.parametrize("k", [-4, -1, 0, 2, 3, 7])
def test_sphere_unit_norm_and_equivariance(n, k):
    gen = RandomSource(n * 10 + k + 50).generator()
    p = uniform_sphere_point(n, gen, size=200)
    out = sphere_power(k, p)
    assert np.max(np.abs(np.linalg.norm(out, axis=1) - 1)) <= 1e-10
    if n >= 2:
        q = haar_special_orthogonal(n, gen, size=200)
        q[::2, :, 0] *= -1
        rp = p.copy()
        rp[:, 1:] = np.einsum("nij,nj->ni", q, p[:, 1:])
        expect = out.copy()
        expect[:, 1:] = np.einsum("nij,nj->ni", q, out[:, 1:])
        assert np.max(np.abs(sphere_power(k, rp) - expect)) <= 1e-12


@pytest.mark.parametrize("j", range(6))
def test_sphere_matches_halfangle(j):
    t = np.linspace(0.01, np.pi - 0.01, 100)
    p = np.stack([np.cos(t), np.sin(t), 0 * t], axis=1)
    out = sphere_power(2 * j + 1, p)
    polys = build_halfangle(j)
    assert np.max(np.abs(out[:, 0] - polys.f(np.sin(t) ** 2) * np.cos(t))) <= 1e-9
    assert np.max(np.abs(out[:, 1] - polys.g(np.sin(t) ** 2) * np.sin(t))) <= 1e-9


def test_fold_examples():
    e0 = np.array([1, 0, 0, 0], dtype=complex)
    for k in (1, 3, -3, 5, 7):
        assert projective_distance(cpm_fold(k, e0), e0) <= 1e-15
    out = cpm_fold(3, cpm_geodesic(0.2, 3))
    assert projective_distance(out, cpm_geodesic(0.6, 3)) <= 1e-12


def test_fold_errors():
    with pytest.raises(InvalidParameterError):
        cpm_fold(2, np.array([1, 0, 0], dtype=complex))
    with pytest.raises(DomainError):
        cpm_fold(3, np.array([1, 1, 0], dtype=complex))


def test_fold_minus_one_is_conjugation():
    z = uniform_cpm_point(3, RandomSource(3), size=100)
    assert np.max(projective_distance(cpm_fold(-1, z), np.conj(z))) <= 1e-9


@pytest.fixture(scope="module")
def cp3_points():
    gen = RandomSource(77).generator()
    z = uniform_cpm_point(3, gen, size=1000)
    z[:100] = near_middle_points(3, 100, gen)
    return z, gen


@pytest.mark.parametrize("k", [1, -1, 3, 5, -3])
def test_projective_well_definedness(cp3_points, k):
    z, gen = cp3_points
    alpha = gen.uniform(0, 2 * np.pi, len(z))
    moved = np.exp(1j * alpha)[:, None] * z
    assert np.max(projective_distance(cpm_fold(k, moved), cpm_fold(k, z))) <= 1e-9


@pytest.mark.parametrize("k", [1, -1, 3, 5, -3, 7])
def test_fold_equivariance(cp3_points, k):
    z, gen = cp3_points
    r = haar_special_orthogonal(4, gen, size=len(z))
    lhs = cpm_fold(k, np.einsum("nij,nj->ni", r, z))
    rhs = np.einsum("nij,nj->ni", r, cpm_fold(k, z))
    assert np.max(projective_distance(lhs, rhs)) <= 1e-8


def test_real_locus_fixed():
    x = uniform_sphere_point(4, RandomSource(8), size=200).astype(complex)
    for k in (1, 3, -3, 5, 9):
        assert np.max(projective_distance(cpm_fold(k, x), x)) <= 1e-9


def test_middle_orbit_limits():
    z = near_middle_points(2, 200, RandomSource(9).generator())
    exact = z[:50]
    assert np.max(np.abs(np.sum(exact * exact, axis=1))) <= 1e-12
    for k in (3, 5, -3, 7):
        expected = exact if k % 4 == 1 else np.conj(exact)
        assert np.max(projective_distance(cpm_fold(k, exact), expected)) <= 1e-9


def test_continuity_across_middle_threshold():
    # points just outside the zeta threshold land next to the limiting value
    for delta in (1e-9, 1e-8, 1e-7, 1e-6):
        z = cpm_geodesic(np.pi / 4 - delta, 2)
        for k in (3, 5):
            assert projective_distance(cpm_fold(k, z), cpm_geodesic(k * (np.pi / 4 - delta), 2)) <= 1e-6


@settings(max_examples=100, deadline=None)
@given(odd_k, st.floats(0, np.pi / 4), st.floats(0, 2 * np.pi), st.integers(0, 2**31))
def test_geodesic_folding_property(k, t, alpha, seed):
    r = haar_special_orthogonal(3, RandomSource(seed))
    z = np.exp(1j * alpha) * (r @ cpm_geodesic(t, 2))
    expected = r @ cpm_geodesic(k * t, 2)
    assert projective_distance(cpm_fold(k, z), expected) <= 1e-8

