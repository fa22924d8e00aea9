"""Acceptance gate: one PASS/FAIL line per criterion, at the stated tolerances."""

import time
from fractions import Fraction

import numpy as np
import pytest

from cohomfold import weyl
from cohomfold.halfangle import build_halfangle, poly_add, poly_mul
from cohomfold.linalg import RandomSource, haar_special_unitary, transpose, uniform_cpm_point
from cohomfold.maps import SelfMap
from cohomfold.numtopo import degree_estimate, get_model
from cohomfold.sphere_cpm import cpm_fold, projective_distance
from cohomfold.su3 import RealizationPlan, normal_geodesic, psi, realize_degree
from cohomfold.verify import consistent_grid, grid_data, near_middle_points
from cohomfold.weyl import CohomologyRingDesc, Parity

SAMPLES = 200_000
SEED = 42
STEP = 1e-4


def report(capsys, number, title, ok, detail=""):
    with capsys.disabled():
        print(f"\n[criterion {number:2d}] {'PASS' if ok else 'FAIL'}  {title}  {detail}")
    assert ok, detail


def test_criterion_01_exact_identities(capsys):
    start = time.perf_counter()
    b = haar_special_unitary(3, RandomSource(1), size=1000)
    r_id = np.max(np.abs(psi(1, b) - b))
    r_tr = np.max(np.abs(psi(-1, b) - transpose(b)))
    elapsed = time.perf_counter() - start
    ok = r_id <= 1e-13 and r_tr <= 1e-13 and elapsed < 5
    report(capsys, 1, "psi_1 = id, psi_-1 = transpose", ok, f"residuals {r_id:.1e}/{r_tr:.1e}, {elapsed:.2f}s")


def test_criterion_02_geodesic_folding(capsys):
    t = RandomSource(2).generator().uniform(-np.pi, np.pi, 1000)
    worst = max(
        np.max(np.linalg.norm(psi(k, normal_geodesic(t)) - normal_geodesic(k * t), axis=(1, 2)))
        for k in (1, -1, 3, -3, 5, -5, 7, -7, 9)
    )
    report(capsys, 2, "psi_k(gamma(t)) = gamma(kt)", worst <= 1e-9, f"max {worst:.1e}")


def test_criterion_03_equivariance(capsys):
    b = haar_special_unitary(3, RandomSource(3), size=1000)
    a = haar_special_unitary(3, RandomSource(4), size=1000)
    worst = max(
        np.max(np.linalg.norm(psi(k, a @ b @ transpose(a)) - a @ psi(k, b) @ transpose(a), axis=(1, 2)))
        for k in (3, -3, 5, -7)
    )
    a0 = np.diag([np.exp(1j * np.pi / 4), np.exp(-1j * np.pi / 4), 1])
    b0 = a0 @ normal_geodesic(np.pi / 4) @ a0.T
    pinned = np.linalg.norm(psi(3, b0) - a0 @ normal_geodesic(3 * np.pi / 4) @ a0.T)
    ok = worst <= 1e-8 and pinned <= 1e-10
    report(capsys, 3, "equivariance + pinned counterexample", ok, f"max {worst:.1e}, pinned {pinned:.1e}")


DEGREE_CASES = [
    ("su3", "psi", 3, 3),
    ("su3", "psi", -3, -3),
    ("su3", "psi", 5, 5),
    ("su3", "rho", 2, 4),
    ("su3", "rho", 3, 9),
    ("s3", "power", 3, 3),
    ("s2", "power", 2, 0),
    ("s2", "power", 3, 1),
    ("cp3", "fold", 3, -1),
    ("cp3", "fold", 5, 1),
]


def _estimate(manifold, fn):
    return degree_estimate(fn, get_model(manifold), SAMPLES, RandomSource(SEED), h=STEP)


def test_criterion_04_numerical_degrees(capsys):
    lines, ok = [], True
    for manifold, kind, k, target in DEGREE_CASES:
        start = time.perf_counter()
        est = _estimate(manifold, SelfMap(kind, k))
        elapsed = time.perf_counter() - start
        hit = abs(est.mean - target) <= max(0.2, 3 * est.standard_error) and elapsed <= 600
        ok &= hit
        lines.append(f"{kind}:{k}@{manifold}={est.mean:.3f}+-{est.standard_error:.3f}(->{target}{'' if hit else ' MISS'})")
    report(capsys, 4, "Monte-Carlo degrees (2e5 samples, seed 42, h 1e-4)", ok, "; ".join(lines))


def test_criterion_05_halfangle(capsys):
    gen = RandomSource(5).generator()
    exact_ok, worst = True, 0.0
    for j in range(26):
        p = build_halfangle(j)
        exact_ok &= poly_add(p.f_coeffs, poly_mul((0, 1), p.h_coeffs)) == (1,)
        t = gen.uniform(0, np.pi, 100)
        s2 = np.sin(t) ** 2
        x = gen.uniform(0, 1, 100)
        worst = max(
            worst,
            np.max(np.abs(p.f(s2) * np.cos(t) - np.cos((2 * j + 1) * t))),
            np.max(np.abs(p.g(s2) * np.sin(t) - np.sin((2 * j + 1) * t))),
            np.max(np.abs(p.f(x) ** 2 * (1 - x) + p.g(x) ** 2 * x - 1)),
        )
    ok = exact_ok and worst <= 1e-9
    report(capsys, 5, "half-angle identities, j <= 25", ok, f"exact {exact_ok}, float max {worst:.1e}")


def test_criterion_06_oracle_formula(capsys):
    start = time.perf_counter()
    mismatches = []
    for W, p0, p1 in consistent_grid():
        data = grid_data(W, p0, p1)
        js = [-6, -4, -2, 2, 4, 6] + ([-5, -3, -1, 1, 3, 5] if p0 is p1 else [])
        for j in js:
            if weyl.degree_oracle(data, j) != weyl.degree_formula(data, j):
                mismatches.append((W, p0.value, p1.value, j))
    cp_case = grid_data(4, Parity.ODD, Parity.EVEN)
    oracle_cp = weyl.degree_oracle(cp_case, 1)
    flagged = weyl.degree_discrepancy(cp_case, 1)
    elapsed = time.perf_counter() - start
    ok = not mismatches and oracle_cp == -1 and flagged and elapsed < 1
    detail = f"mismatches {mismatches}, mixed oracle {oracle_cp}, flag {flagged}, {elapsed:.2f}s"
    report(capsys, 6, "degree oracle vs formula", ok, detail)


def test_criterion_07_lefschetz_catalog(capsys):
    cat = weyl.catalog()
    bad = []

    def check(name, j, expected):
        entry = cat[name]
        got = (weyl.lefschetz_oracle(entry, j), weyl.lefschetz_formula(entry, j))
        if got != (expected, expected):
            bad.append((name, j, got, expected))

    for j in (-3, -1, 1, 3, 5):
        check("SU3", j, 0)
    for j in (-2, -1, 1, 2, 3, 4):
        k = j + 1
        check("M7_1", j, 2 * (1 - k))
        check("M7_2", j, 3 * (1 - k))
        for n in (3, 5, 7):
            check(f"S{n}", j, 1 - k)
        check("S2", j, 1 if k % 2 == 0 else 2)
    for m in (3, 5):
        for j in (-2, -1, 1, 2, 3):
            check(f"CP{m}", j, 0 if j % 2 else m + 1)
    report(capsys, 7, "Lefschetz numbers of the catalog", not bad, f"mismatches {bad}")


def test_criterion_08_rings(capsys):
    bad = []
    for k in (-5, -3, -1, 1, 3, 5, 7):
        r = CohomologyRingDesc("exterior", (3, 5), (k, 1))
        if (weyl.ring_degree(r), weyl.ring_lefschetz(r)) != (k, 0):
            bad.append(("x3y5 (k,1)", k))
        r = CohomologyRingDesc("exterior", (3, 5), (k, k))
        if (weyl.ring_degree(r), weyl.ring_lefschetz(r)) != (k * k, (1 - k) ** 2):
            bad.append(("x3y5 (k,k)", k))
    r = CohomologyRingDesc("truncated", (2,), (-1,), truncation=3)
    if (weyl.ring_degree(r), weyl.ring_lefschetz(r)) != (-1, 0):
        bad.append("truncated")
    prod = weyl.product_spheres_chi((3, 4), 2)
    if not (prod.chi == 4 == weyl.lookup("CP3").chi_M and prod.feasible):
        bad.append("product (3,4)")
    for W in (2, 4, 6, 8, 12):
        data = weyl.CohomOneData(W, 3, 3, W // 2, W // 2, W, rank_equal=True)
        rep = weyl.homology_sphere_chi(data)
        if rep.chi != W or rep.contradiction:
            bad.append(("homology sphere", W))
    report(capsys, 8, "ring calculators and chi identities", not bad, f"failures {bad}")


def test_criterion_09_realization(capsys):
    wrong = []
    for d in range(-100, 101):
        verdict = weyl.realizable_su3_degree(d)
        if d == 0:
            expected = weyl.Realizability.ZERO_CAVEAT
        else:
            expected = weyl.Realizability.YES if weyl.two_adic_valuation(d) % 2 == 0 else weyl.Realizability.NO
        if verdict is not expected:
            wrong.append(d)
    plan = realize_degree(12)
    composed = isinstance(plan, RealizationPlan) and (plan.power, plan.psi_k) == (2, 3)
    est = _estimate("su3", SelfMap("realize", 12))
    hit = est.rounded == 12 and abs(est.mean - 12) <= max(0.2, 3 * est.standard_error)
    ok = not wrong and composed and hit
    detail = f"wrong {wrong}, plan {plan.describe()}, estimate {est.mean:.3f}+-{est.standard_error:.3f}"
    report(capsys, 9, "degree realization on SU(3)", ok, detail)


def test_criterion_10_cpm_well_defined(capsys):
    gen = RandomSource(10).generator()
    z = uniform_cpm_point(3, gen, size=1000)
    z[:100] = near_middle_points(3, 100, gen)
    near = np.abs(np.sum(z[:100] * z[:100], axis=1))
    alpha = gen.uniform(0, 2 * np.pi, 1000)
    worst = max(
        np.max(projective_distance(cpm_fold(k, np.exp(1j * alpha)[:, None] * z), cpm_fold(k, z)))
        for k in (1, -1, 3, 5, -3)
    )
    ok = worst <= 1e-9 and np.max(near) <= 2e-6
    report(capsys, 10, "cpm_fold phase invariance (incl. z^T z ~ 0)", ok, f"max {worst:.1e}")
