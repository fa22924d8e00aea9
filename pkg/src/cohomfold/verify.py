"""Invariant suites behind ``cohomfold verify``.

Each suite returns a list of :class:`Check` rows (name, worst residual,
tolerance, pass flag). Sample sizes and tolerances mirror the test-suite
properties; every random draw is seeded.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import weyl
from .halfangle import (
    build_halfangle,
    chebyshev_eval,
    h_closed_form,
    poly_add,
    poly_mul,
)
from .linalg import (
    RandomSource,
    haar_special_orthogonal,
    haar_special_unitary,
    transpose,
    uniform_cpm_point,
    uniform_sphere_point,
)
from .sphere_cpm import cpm_fold, cpm_geodesic, projective_distance, sphere_power
from .su3 import normal_geodesic, psi, psi_via_polynomial, unitarity_residual

SEED = 20240607


@dataclass(frozen=True)
class Check:
    name: str
    residual: float
    tolerance: float
    passed: bool

    @classmethod
    def of(cls, name: str, residual, tolerance: float) -> "Check":
        r = float(residual)
        return cls(name, r, tolerance, bool(r <= tolerance))


def _rs(stream: int) -> RandomSource:
    return RandomSource(SEED, stream)


# -- halfangle ----------------------------------------------------------------


def halfangle_suite(max_j: int = 25) -> list[Check]:
    gen = _rs(1).generator()
    exact = trig = pyth = closed = 0.0
    for j in range(max_j + 1):
        P = build_halfangle(j)
        residual_poly = poly_add(P.f_coeffs, poly_mul((0, 1), P.h_coeffs))
        exact = max(exact, 0.0 if residual_poly == (1,) else 1.0)
        closed = max(closed, 0.0 if h_closed_form(j) == P.h_coeffs else 1.0)
        t = gen.uniform(0, np.pi, 100)
        s2 = np.sin(t) ** 2
        trig = max(
            trig,
            np.max(np.abs(P.f(s2) * np.cos(t) - np.cos((2 * j + 1) * t))),
            np.max(np.abs(P.g(s2) * np.sin(t) - np.sin((2 * j + 1) * t))),
        )
        x = gen.uniform(0, 1, 100)
        pyth = max(pyth, np.max(np.abs(P.f(x) ** 2 * (1 - x) + P.g(x) ** 2 * x - 1)))
    link = 0.0
    for j in range(16):
        P = build_halfangle(j)
        c = gen.uniform(-1, 1, 100)
        T, U = chebyshev_eval(2 * j + 1, c)
        link = max(link, np.max(np.abs(P.g(1 - c * c) - U)), np.max(np.abs(P.f(1 - c * c) * c - T)))
    return [
        Check.of("f_j + x h_j == 1 (exact integers)", exact, 0.0),
        Check.of("closed-form h_j matches division", closed, 0.0),
        Check.of("f_j(sin^2 t) cos t = cos((2j+1)t), g_j likewise", trig, 1e-9),
        Check.of("f_j^2 (1-x) + g_j^2 x = 1", pyth, 1e-9),
        Check.of("Chebyshev link T_(2j+1), U_2j", link, 1e-9),
    ]


# -- SU(3) --------------------------------------------------------------------


def su3_suite(n: int = 1000) -> list[Check]:
    B = haar_special_unitary(3, _rs(10), size=n)
    A = haar_special_unitary(3, _rs(11), size=n)
    ABAt = A @ B @ transpose(A)
    equiv = max(
        np.max(np.abs(psi(k, ABAt) - A @ psi(k, B) @ transpose(A))) for k in (3, -3, 5, -7)
    )
    closure = max(np.max(unitarity_residual(psi(k, B))) for k in (1, -1, 3, -3, 5, -5, 7, -7, 9))
    trans = max(np.max(np.abs(psi(-k, B) - transpose(psi(k, B)))) for k in (1, 3, 5, 7))
    ident = max(np.max(np.abs(psi(1, B) - B)), np.max(np.abs(psi(-1, B) - transpose(B))))
    Bs = B[:100]
    semi = max(np.max(np.abs(psi(k, psi(l, Bs)) - psi(k * l, Bs))) for k, l in ((3, 5), (3, -3), (5, 5)))
    sym = A @ transpose(A)
    n0 = max(np.max(np.abs(psi(k, sym) - sym)) for k in (3, -3, 5, 7, -9))
    on_n1 = A @ normal_geodesic(np.pi / 2) @ transpose(A)
    n1 = max(
        np.max(np.abs(psi(k, on_n1) - (on_n1 if k % 4 == 1 else transpose(on_n1))))
        for k in (3, 5, -3, 7, 9, -5)
    )
    t = _rs(12).generator().uniform(-np.pi, np.pi, n)
    fold = max(
        np.max(np.abs(psi(k, normal_geodesic(t)) - normal_geodesic(k * t)))
        for k in (1, -1, 3, -3, 5, -5, 7, -7, 9)
    )
    poly = np.max(np.abs(psi_via_polynomial(3, Bs) - psi(3, Bs)))
    return [
        Check.of("psi_1 = id, psi_-1 = transpose", ident, 1e-13),
        Check.of("geodesic folding psi_k(gamma(t)) = gamma(kt)", fold, 1e-9),
        Check.of("equivariance psi_k(A B A^T) = A psi_k(B) A^T", equiv, 1e-8),
        Check.of("closure in SU(3)", closure, 1e-8),
        Check.of("psi_-k = psi_k^T", trans, 1e-10),
        Check.of("semigroup psi_k o psi_l = psi_kl", semi, 1e-7),
        Check.of("symmetric orbit fixed", n0, 1e-9),
        Check.of("SU(2)-orbit: B for k=1 mod 4, B^T for k=3 mod 4", n1, 1e-9),
        Check.of("explicit real polynomial reproduces psi_3", poly, 1e-10),
    ]


# -- spheres ------------------------------------------------------------------


def sphere_suite(n: int = 1000) -> list[Check]:
    gen = _rs(20).generator()
    norm_err = equiv = 0.0
    for dim in (2, 3, 5):
        p = uniform_sphere_point(dim, gen, size=n)
        Q = haar_special_orthogonal(dim, gen, size=n)
        Q[:: 2, :, 0] *= -1  # include improper elements of O(n)
        rotated = p.copy()
        rotated[:, 1:] = np.einsum("nij,nj->ni", Q, p[:, 1:])
        for k in (-3, 0, 1, 2, 3, 5):
            out = sphere_power(k, p)
            norm_err = max(norm_err, np.max(np.abs(np.linalg.norm(out, axis=1) - 1)))
            expect = out.copy()
            expect[:, 1:] = np.einsum("nij,nj->ni", Q, out[:, 1:])
            equiv = max(equiv, np.max(np.abs(sphere_power(k, rotated) - expect)))
    t = gen.uniform(0, np.pi, n)
    geo = np.zeros((n, 3))
    geo[:, 0], geo[:, 1] = np.cos(t), np.sin(t)
    link = 0.0
    for j in range(8):
        P = build_halfangle(j)
        out = sphere_power(2 * j + 1, geo)
        s2 = np.sin(t) ** 2
        link = max(
            link,
            np.max(np.abs(out[:, 0] - P.f(s2) * np.cos(t))),
            np.max(np.abs(out[:, 1] - P.g(s2) * np.sin(t))),
        )
    return [
        Check.of("unit norm of k-powers", norm_err, 1e-10),
        Check.of("O(n)-equivariance", equiv, 1e-12),
        Check.of("odd k-powers match half-angle polynomials", link, 1e-9),
    ]


# -- CP^m ---------------------------------------------------------------------


def near_middle_points(m: int, count: int, gen: np.random.Generator) -> np.ndarray:
    """Points within ~1e-6 of the orbit ``z^T z = 0``, some exactly on it."""
    delta = gen.uniform(0, 1e-6, count)
    delta[: count // 4] = 0.0
    R = haar_special_orthogonal(m + 1, gen, size=count)
    z = np.einsum("nij,nj->ni", R, cpm_geodesic(np.pi / 4 - delta, m))
    return z * np.exp(1j * gen.uniform(0, 2 * np.pi, count))[:, None]


def cpm_suite(m: int = 3, n: int = 1000) -> list[Check]:
    gen = _rs(30).generator()
    z = uniform_cpm_point(m, gen, size=n)
    z[: n // 10] = near_middle_points(m, n // 10, gen)
    alpha = gen.uniform(0, 2 * np.pi, n)
    phase = max(
        np.max(projective_distance(cpm_fold(k, np.exp(1j * alpha)[:, None] * z), cpm_fold(k, z)))
        for k in (1, -1, 3, 5, -3)
    )
    R = haar_special_orthogonal(m + 1, gen, size=n)
    Rz = np.einsum("nij,nj->ni", R, z)
    equiv = max(
        np.max(projective_distance(cpm_fold(k, Rz), np.einsum("nij,nj->ni", R, cpm_fold(k, z))))
        for k in (1, -1, 3, 5, -3)
    )
    real = uniform_sphere_point(m, gen, size=n).astype(complex)
    fixed = max(np.max(projective_distance(cpm_fold(k, real), real)) for k in (1, 3, -3, 5, 7))
    conj = np.max(projective_distance(cpm_fold(-1, z), np.conj(z)))
    t = gen.uniform(0, np.pi / 4, n)
    geo = max(
        np.max(projective_distance(cpm_fold(k, cpm_geodesic(t, m)), cpm_geodesic(k * t, m)))
        for k in (3, 5, -3)
    )
    return [
        Check.of("projective well-definedness (incl. z^T z ~ 0)", phase, 1e-9),
        Check.of("SO(m+1)-equivariance", equiv, 1e-8),
        Check.of("real locus fixed", fixed, 1e-9),
        Check.of("fold_-1 = complex conjugation", conj, 1e-9),
        Check.of("geodesic folding gamma(t) -> gamma(kt)", geo, 1e-9),
    ]


# -- exact theory -------------------------------------------------------------

PARITY_CODIM = {weyl.Parity.ODD: 3, weyl.Parity.EVEN: 2}


def grid_data(weyl_order: int, p0, p1, chi: int = 1) -> weyl.CohomOneData:
    """Euler-consistent representative data for a parity pair."""
    p0, p1 = weyl.Parity.of(p0), weyl.Parity.of(p1)
    both_odd = p0 is weyl.Parity.ODD and p1 is weyl.Parity.ODD
    chi0 = chi if (both_odd or p0 is weyl.Parity.EVEN) else 0
    chi1 = chi if (both_odd or p1 is weyl.Parity.EVEN) else 0
    chi_gh = 2 * chi if both_odd else 0
    return weyl.CohomOneData(
        weyl_order,
        PARITY_CODIM[p0],
        PARITY_CODIM[p1],
        chi0,
        chi1,
        chi_gh,
        isotropy_equal=True,
        rank_equal=chi_gh > 0,
        name=f"W{weyl_order}-{p0.value}/{p1.value}",
    )


def consistent_grid(weyl_orders=range(2, 13, 2)):
    for W in weyl_orders:
        for p0 in weyl.Parity:
            for p1 in weyl.Parity:
                if weyl.orientability_consistency(W, p0, p1):
                    yield W, p0, p1


def theory_suite() -> list[Check]:
    even_bad = odd_bad = tau_bad = lef_bad = 0
    for W, p0, p1 in consistent_grid():
        for chi in (0, 1, 2, 3):
            data = grid_data(W, p0, p1, chi)
            for j in (-6, -5, -4, -3, -2, -1, 1, 2, 3, 4, 5, 6):
                oracle = weyl.degree_oracle(data, j)
                if j % 2 == 0:
                    even_bad += oracle != weyl.degree_formula(data, j)
                elif p0 is p1:
                    odd_bad += oracle != weyl.degree_formula(data, j)
                taus = {weyl.degree_oracle(data, j, Fraction(a, 3)) for a in (1, 2)}
                tau_bad += taus != {oracle}
                lef_bad += weyl.lefschetz_oracle(data, j) != weyl.lefschetz_formula(data, j)
    for entry in weyl.catalog().values():
        for j in (-3, -2, -1, 1, 2, 3, 4):
            lef_bad += weyl.lefschetz_oracle(entry, j) != weyl.lefschetz_formula(entry, j)
    mixed = weyl.CohomOneData(4, 3, 2, 0, 1, 0, isotropy_equal=True)
    flag_raised = weyl.degree_oracle(mixed, 1) == -1 and weyl.degree_discrepancy(mixed, 1)
    ring_bad = 0
    for k in (-5, -3, -1, 1, 3, 5, 7):
        ring = weyl.CohomologyRingDesc("exterior", (3, 5), (k, 1))
        ring_bad += (weyl.ring_degree(ring), weyl.ring_lefschetz(ring)) != (k, 0)
    for m in (3, 5):
        for j, expect in ((1, (-1, 0)), (2, (1, m + 1))):
            ring = weyl.CohomologyRingDesc("truncated", (2,), (-1 if j % 2 else 1,), truncation=m)
            ring_bad += (weyl.ring_degree(ring), weyl.ring_lefschetz(ring)) != expect
    return [
        Check.of("even j: oracle == closed-form degree table", even_bad, 0),
        Check.of("odd j, equal parities: oracle == closed-form table", odd_bad, 0),
        Check.of("oracle independent of tau", tau_bad, 0),
        Check.of("Lefschetz oracle == formula (grid + catalog)", lef_bad, 0),
        Check.of("mixed parities flagged against closed-form table", 0 if flag_raised else 1, 0),
        Check.of("ring calculators reproduce (deg, L)", ring_bad, 0),
    ]


SUITES = {
    "halfangle": halfangle_suite,
    "su3": su3_suite,
    "sphere": sphere_suite,
    "cpm": cpm_suite,
    "theory": theory_suite,
}


def run_suite(name: str) -> dict[str, list[Check]]:
    if name == "all":
        return {key: fn() for key, fn in SUITES.items()}
    if name not in SUITES:
        raise KeyError(name)
    return {name: SUITES[name]()}
