import numpy as np
import pytest

from cohomfold.errors import ConsistencyError, InvalidParameterError
from cohomfold.linalg import RandomSource, dagger, haar_special_unitary, uniform_sphere_point
from cohomfold.maps import SelfMap, parse_map
from cohomfold.numtopo import (
    CPmModel,
    DegreeEstimate,
    SphereModel,
    SU3Model,
    degree_estimate,
    degree_verdict,
    differential,
    get_model,
    signed_jacobian,
)
from cohomfold.su3 import normal_geodesic, power_map, psi


def _flat(v, model):
    v = np.asarray(v)
    nd = len(model.point_shape)
    flat = v.reshape(v.shape[: v.ndim - nd] + (-1,))
    if np.iscomplexobj(flat):
        flat = np.concatenate([flat.real, flat.imag], axis=-1)
    return flat


@pytest.mark.parametrize("model", [SU3Model(), SphereModel(2), SphereModel(5), CPmModel(1), CPmModel(3)])
def test_frames_orthonormal_and_tangent(model):
    p = model.sample(RandomSource(1).generator(), 50)
    frame = _flat(model.frame(p), model)
    gram = frame @ np.swapaxes(frame, -1, -2)
    assert np.max(np.abs(gram - np.eye(model.dim))) <= 1e-10
    assert np.max(np.abs(model.project(p[:, None], model.frame(p)) - model.frame(p))) <= 1e-10


@pytest.mark.parametrize("n", [1, 2, 3, 6])
def test_sphere_frame_orientation(n):
    model = SphereModel(n)
    p = model.sample(RandomSource(n).generator(), 200)
    p[0] = np.eye(n + 1)[0]
    p[1] = -np.eye(n + 1)[0]
    frame = model.frame(p)
    mats = np.concatenate([p[:, None, :], frame], axis=1)
    assert np.max(np.abs(np.linalg.det(mats) - 1)) <= 1e-10


@pytest.mark.parametrize("model", [SU3Model(), SphereModel(3), CPmModel(2)])
def test_retraction_consistency(model):
    p = model.sample(RandomSource(2).generator(), 10)
    e = model.frame(p)[:, 0]
    assert np.max(np.abs(model.retract(p, e, 0.0) - p)) <= 1e-15
    errs = []
    for h in (1e-2, 5e-3):
        errs.append(np.max(np.abs((model.retract(p, e, h) - p) / h - e)))
    assert errs[1] < 0.6 * errs[0]
    assert np.max(model.residual(model.retract(p, e, 0.1))) <= 1e-12


@pytest.mark.parametrize("name", ["su3", "s2", "s3", "cp1", "cp3"])
def test_identity_jacobian(name):
    model = get_model(name)
    p = model.sample(RandomSource(3).generator(), 20)
    d, _ = differential(SelfMap("identity"), model, p)
    assert np.max(np.abs(d - np.eye(model.dim))) <= 1e-6
    assert np.max(np.abs(signed_jacobian(SelfMap("identity"), model, p) - 1)) <= 1e-6


def test_transpose_and_left_translation_are_isometries():
    model = SU3Model()
    p = model.sample(RandomSource(4).generator(), 50)
    jt = signed_jacobian(SelfMap("transpose"), model, p)
    assert np.max(np.abs(jt + 1)) <= 1e-8
    u = haar_special_unitary(3, RandomSource(5))
    jl = signed_jacobian(lambda b: u @ b, model, p)
    assert np.max(np.abs(np.abs(jl) - 1)) <= 1e-6


def test_antipodal_on_s2():
    model = SphereModel(2)
    p = model.sample(RandomSource(6).generator(), 50)
    assert np.max(np.abs(signed_jacobian(SelfMap("antipodal"), model, p) + 1)) <= 1e-8


def test_s3_power_jacobian_closed_form():
    p = np.r_[np.cos(0.4), np.sin(0.4) * np.array([0.48, 0.6, 0.64])]
    j = signed_jacobian(SelfMap("power", 3), SphereModel(3), p)
    assert abs(j - 3 * (np.sin(1.2) / np.sin(0.4)) ** 2) <= 1e-5


def test_psi3_richardson_on_geodesic():
    model = SU3Model()
    p = normal_geodesic(np.array([0.3, 0.7, 1.1]))
    fn = SelfMap("psi", 3)
    j_h = signed_jacobian(fn, model, p, h=1e-3)
    j_h2 = signed_jacobian(fn, model, p, h=5e-4)
    assert np.max(np.abs(j_h - j_h2)) <= 1e-4
    assert np.all(j_h > 0)


def test_chain_rule():
    model = SU3Model()
    p = model.sample(RandomSource(7).generator(), 100)
    phi = SelfMap("psi", 3)
    rho = SelfMap("rho", 2)
    j_phi = signed_jacobian(phi, model, p)
    j_rho = signed_jacobian(rho, model, psi(3, p))
    j_comp = signed_jacobian(lambda b: power_map(2, psi(3, b)), model, p)
    rel = np.abs(j_comp - j_rho * j_phi) / np.maximum(np.abs(j_comp), 1)
    assert np.max(rel) <= 1e-4


def test_sphere_frame_choice_independence():
    model = SphereModel(3)
    p = model.sample(RandomSource(8).generator(), 50)
    fn = SelfMap("power", 3)
    # h = 1e-5 keeps the O(h^2) stencil error (direction dependent) below 1e-9
    base = signed_jacobian(fn, model, p, h=1e-5)
    # rotate every frame by a fixed SO(3) element: the determinant is unchanged
    from cohomfold.linalg import haar_special_orthogonal

    rot = haar_special_orthogonal(3, RandomSource(9))

    class Rotated(SphereModel):
        def frame(self, q):
            return np.einsum("ab,...bi->...ai", rot, super().frame(q))

    assert np.max(np.abs(signed_jacobian(fn, Rotated(3), p, h=1e-5) - base)) <= 1e-8


def test_off_manifold_output_detected():
    model = SphereModel(2)
    p = model.sample(RandomSource(10).generator(), 5)
    with pytest.raises(ConsistencyError):
        differential(lambda q: 2 * q, model, p)
    with pytest.raises(InvalidParameterError):
        differential(SelfMap("identity"), model, p, h=0)


def test_degree_estimate_identity_su3():
    est = degree_estimate(SelfMap("identity"), SU3Model(), 10_000, RandomSource(1))
    assert abs(est.mean - 1) <= 1e-4
    assert est.rounded == 1 and est.accepted


def test_degree_estimate_small_maps():
    est = degree_estimate(SelfMap("psi", 3), SU3Model(), 20_000, RandomSource(42))
    assert est.rounded == 3 and est.accepted
    est = degree_estimate(SelfMap("fold", 3), CPmModel(3), 20_000, RandomSource(42))
    assert est.rounded == -1 and est.accepted
    assert est.excluded_fraction < 1e-2


def test_degree_estimate_requires_samples():
    with pytest.raises(InvalidParameterError):
        degree_estimate(SelfMap("identity"), SphereModel(2), 999, RandomSource(1))


def test_degree_estimate_rejects_broken_map():
    with pytest.raises(ConsistencyError):
        degree_estimate(lambda q: 2 * q, SphereModel(2), 1000, RandomSource(1))


def test_worker_count_independence():
    fn, model = SelfMap("power", 3), SphereModel(2)
    one = degree_estimate(fn, model, 4000, RandomSource(3), block_size=1000, workers=1)
    two = degree_estimate(fn, model, 4000, RandomSource(3), block_size=1000, workers=2)
    assert one == two


def test_seed_determinism():
    fn, model = SelfMap("psi", -3), SU3Model()
    a = degree_estimate(fn, model, 2000, RandomSource(11))
    b = degree_estimate(fn, model, 2000, RandomSource(11))
    assert a.to_json() == b.to_json()


def test_standard_error_scaling():
    fn, model = SelfMap("power", 3), SphereModel(2)
    ratios = []
    for trial in range(5):
        small = degree_estimate(fn, model, 20_000, RandomSource(100 + trial))
        large = degree_estimate(fn, model, 40_000, RandomSource(200 + trial))
        ratios.append(large.standard_error / small.standard_error)
    assert 0.6 <= np.mean(ratios) <= 0.85


def test_verdict_rule():
    assert degree_verdict(2.9, 0.01) == (3, "accepted")
    assert degree_verdict(2.7, 0.01) == (3, "inconclusive")
    assert degree_verdict(2.6, 0.2) == (3, "accepted")
    est = DegreeEstimate(1.0, 0.1, 1000, 1, "accepted")
    assert set(est.to_json()) == {"mean", "stderr", "samples", "rounded", "verdict", "excluded_fraction"}


def test_parse_map():
    assert parse_map("psi:-3") == SelfMap("psi", -3)
    assert parse_map("sphere:4") == SelfMap("power", 4)
    assert parse_map("cpm:3") == SelfMap("fold", 3)
    assert str(parse_map("transpose")) == "transpose"
    for bad in ("psi:2", "fold:4", "psi", "bogus:1", "transpose:3", "rho:x"):
        with pytest.raises(InvalidParameterError):
            parse_map(bad)
    assert parse_map("psi:3").compatible(SU3Model())
    assert not parse_map("psi:3").compatible(SphereModel(3))
