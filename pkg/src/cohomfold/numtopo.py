"""Finite-difference Jacobians and Monte-Carlo mapping degrees.

The degree of a selfmap ``f`` of a closed oriented Riemannian manifold is the
average of its signed Jacobian against the normalized volume. Jacobians are
central differences along an oriented orthonormal frame at the source point,
read off in the oriented frame at the image point. Every routine works on
stacks of points so that a whole block of samples is handled in one pass.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.linalg import expm

from .errors import ConsistencyError, InvalidParameterError
from .linalg import (
    RandomSource,
    dagger,
    haar_special_unitary,
    project_su3_algebra,
    su3_lie_frame,
    unitarity_residual,
    uniform_cpm_point,
    uniform_sphere_point,
)

DEFAULT_STEP = 1e-4
OFF_MANIFOLD_TOL = 1e-6
MAX_REJECTED_FRACTION = 0.01


class ManifoldModel:
    """Sampling, oriented frames and retractions for one embedded manifold.

    Points are arrays with trailing shape ``point_shape``; tangent vectors
    live in the same ambient space.
    """

    name: str
    dim: int
    point_shape: tuple

    def sample(self, rng, size: int) -> np.ndarray:
        raise NotImplementedError

    def frame(self, p: np.ndarray) -> np.ndarray:
        """Oriented orthonormal tangent frame, shape ``(..., dim) + point_shape``."""
        raise NotImplementedError

    def retract(self, p: np.ndarray, e: np.ndarray, h: float) -> np.ndarray:
        raise NotImplementedError

    def project(self, p: np.ndarray, v: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def residual(self, p: np.ndarray) -> np.ndarray:
        """Distance-like measure of how far ``p`` is from the manifold."""
        raise NotImplementedError

    def align(self, ref: np.ndarray, w: np.ndarray) -> np.ndarray:
        """Choose the representative of ``w`` closest to ``ref`` (projective models)."""
        return w

    def coords(self, q: np.ndarray, v: np.ndarray) -> np.ndarray:
        """Components of tangent vectors ``v`` at ``q`` in the frame at ``q``.

        ``v`` has shape ``(..., r) + point_shape``; result ``(..., dim, r)``.
        Vector-valued models only; matrix models override this.
        """
        frame = self.frame(q)
        v = self.project(q[..., None, :], v)
        return np.real(np.einsum("...ai,...bi->...ab", np.conj(frame), v))

    def stencil(self, p: np.ndarray, h: float) -> tuple[np.ndarray, np.ndarray]:
        """Points ``retract(p, +-h e_i)`` for the frame at ``p``; shape ``(..., dim) + point_shape``."""
        frame = self.frame(p)
        pp = p[..., None, :]
        return self.retract(pp, frame, h), self.retract(pp, frame, -h)


class SU3Model(ManifoldModel):
    """SU(3) with the bi-invariant metric ``Re tr(X^dagger Y)`` and left-translated frame."""

    name = "su3"
    dim = 8
    point_shape = (3, 3)

    def __init__(self):
        self._basis = np.array(su3_lie_frame())
        self._exp_cache: dict = {}

    def sample(self, rng, size: int) -> np.ndarray:
        return haar_special_unitary(3, rng, size=size)

    def frame(self, p):
        return p[..., None, :, :] @ self._basis

    def _exps(self, h: float):
        if h not in self._exp_cache:
            self._exp_cache[h] = (
                np.array([expm(h * e) for e in self._basis]),
                np.array([expm(-h * e) for e in self._basis]),
            )
        return self._exp_cache[h]

    def stencil(self, p, h):
        plus, minus = self._exps(h)
        pp = p[..., None, :, :]
        return pp @ plus, pp @ minus

    def retract(self, p, e, h):
        xi = dagger(p) @ e
        return p @ np.array([expm(h * x) for x in xi.reshape(-1, 3, 3)]).reshape(np.shape(xi))

    def project(self, p, v):
        return p @ project_su3_algebra(dagger(p) @ v)

    def coords(self, q, v):
        xi = project_su3_algebra(dagger(q)[..., None, :, :] @ v)
        # Re tr(E_a^dagger xi_b)
        return np.real(np.einsum("aij,...bij->...ab", np.conj(self._basis), xi))

    def residual(self, p):
        return unitarity_residual(p)


def _sphere_frame(p: np.ndarray) -> np.ndarray:
    """Tangent frame ``(e_1..e_n)`` at ``p`` with ``det[p, e_1..e_n] = +1``.

    Built from the Householder reflection exchanging ``e_0`` and ``+-p``,
    choosing the sign that keeps the reflection vector long.
    """
    n1 = p.shape[-1]
    flip = p[..., 0] >= 0
    sgn = np.where(flip, 1.0, -1.0)
    e0 = np.zeros(n1)
    e0[0] = 1.0
    u = e0 + sgn[..., None] * p
    u = u / np.linalg.norm(u, axis=-1, keepdims=True)
    H = np.eye(n1) - 2 * u[..., :, None] * u[..., None, :]
    # H e_0 = -sgn p; the columns 1..n span the tangent space at p.
    tangent = np.swapaxes(H[..., :, 1:], -1, -2).copy()
    # det[-sgn p, H cols] = det H = -1  =>  det[p, H cols] = sgn.
    tangent[..., -1, :] *= sgn[..., None]
    return tangent


class SphereModel(ManifoldModel):
    def __init__(self, n: int):
        if n < 1:
            raise InvalidParameterError("sphere dimension must be positive")
        self.n = n
        self.dim = n
        self.name = f"s{n}"
        self.point_shape = (n + 1,)

    def sample(self, rng, size):
        return uniform_sphere_point(self.n, rng, size=size)

    def frame(self, p):
        return _sphere_frame(p)

    def retract(self, p, e, h):
        return np.cos(h) * p + np.sin(h) * e

    def project(self, p, v):
        return v - np.sum(p * v, axis=-1, keepdims=True) * p

    def residual(self, p):
        return np.abs(np.linalg.norm(p, axis=-1) - 1.0)


def _cpm_horizontal(z: np.ndarray) -> np.ndarray:
    """Complex orthonormal basis of ``z^perp``, shape ``(..., m, m+1)``."""
    n1 = z.shape[-1]
    z0 = z[..., 0]
    phase = np.where(np.abs(z0) > 0, z0 / np.where(np.abs(z0) > 0, np.abs(z0), 1), 1.0)
    v = z.copy()
    v[..., 0] += phase
    v = v / np.linalg.norm(v, axis=-1, keepdims=True)
    H = np.eye(n1) - 2 * v[..., :, None] * np.conj(v[..., None, :])
    # H e_0 is a unit multiple of z, so the remaining columns are horizontal.
    return np.swapaxes(H[..., :, 1:], -1, -2)


class CPmModel(ManifoldModel):
    """``CP^m`` with the Fubini-Study metric, points as unit representatives."""

    def __init__(self, m: int):
        if m < 1:
            raise InvalidParameterError("CP^m needs m >= 1")
        self.m = m
        self.dim = 2 * m
        self.name = f"cp{m}"
        self.point_shape = (m + 1,)

    def sample(self, rng, size):
        return uniform_cpm_point(self.m, rng, size=size)

    def frame(self, z):
        h = _cpm_horizontal(z)
        out = np.empty(h.shape[:-2] + (2 * self.m, self.m + 1), dtype=complex)
        out[..., 0::2, :] = h
        out[..., 1::2, :] = 1j * h
        return out

    def retract(self, z, e, h):
        return np.cos(h) * z + np.sin(h) * e

    def project(self, z, v):
        inner = np.sum(np.conj(z) * v, axis=-1, keepdims=True)
        return v - inner * z

    def align(self, ref, w):
        inner = np.sum(np.conj(w) * ref, axis=-1, keepdims=True)
        mag = np.abs(inner)
        return w * np.where(mag > 0, inner / np.where(mag > 0, mag, 1), 1)

    def residual(self, z):
        return np.abs(np.linalg.norm(z, axis=-1) - 1.0)


def get_model(name: str) -> ManifoldModel:
    """``su3``, ``s<n>`` or ``cp<m>`` (case-insensitive)."""
    key = name.strip().lower().replace("^", "")
    if key == "su3":
        return SU3Model()
    if key.startswith("cp") and key[2:].isdigit():
        return CPmModel(int(key[2:]))
    if key.startswith("s") and key[1:].isdigit():
        return SphereModel(int(key[1:]))
    raise InvalidParameterError(f"unknown manifold {name!r} (use su3, s<n>, cp<m>)")


def _add_axis(x: np.ndarray, model: ManifoldModel) -> np.ndarray:
    return x[..., None, :] if len(model.point_shape) == 1 else x[..., None, :, :]


def differential(fn: Callable, model: ManifoldModel, p, h: float = DEFAULT_STEP, check: bool = True):
    """Matrix of ``d fn`` at ``p`` in the oriented frames at ``p`` and ``fn(p)``.

    Column ``i`` holds the central difference along the ``i``-th frame vector.
    Returns ``(D, q)`` with ``D`` of shape ``(..., dim, dim)`` and ``q = fn(p)``.
    """
    if not h > 0:
        raise InvalidParameterError("step must be positive")
    p = np.asarray(p)
    q = fn(p)
    if check:
        res = model.residual(q)
        if np.any(res > OFF_MANIFOLD_TOL):
            raise ConsistencyError(f"map output off {model.name}: residual {np.max(res):.3e}")
    plus, minus = model.stencil(p, h)
    shape = plus.shape
    flat = (-1,) + model.point_shape
    w_plus = fn(plus.reshape(flat)).reshape(shape)
    w_minus = fn(minus.reshape(flat)).reshape(shape)
    qq = _add_axis(q, model)
    w_plus = model.align(qq, w_plus)
    w_minus = model.align(qq, w_minus)
    diff = (w_plus - w_minus) / (2 * h)
    return model.coords(q, diff), q


def signed_jacobian(fn: Callable, model: ManifoldModel, p, h: float = DEFAULT_STEP, check: bool = True):
    d, _ = differential(fn, model, p, h, check)
    j = np.linalg.det(d)
    return float(j) if np.ndim(j) == 0 else j


@dataclass(frozen=True)
class DegreeEstimate:
    mean: float
    standard_error: float
    samples: int
    rounded: int
    verdict: str
    excluded_fraction: float = 0.0
    rejected: int = 0

    @property
    def accepted(self) -> bool:
        return self.verdict == "accepted"

    def to_json(self) -> dict:
        return {
            "mean": self.mean,
            "stderr": self.standard_error,
            "samples": self.samples,
            "rounded": self.rounded,
            "verdict": self.verdict,
            "excluded_fraction": self.excluded_fraction,
        }


def degree_verdict(mean: float, stderr: float) -> tuple[int, str]:
    rounded = int(math.floor(mean + 0.5))
    ok = abs(mean - rounded) <= max(0.2, 3 * stderr)
    return rounded, "accepted" if ok else "inconclusive"


@dataclass
class _BlockResult:
    total: float
    total_sq: float
    count: int
    drawn: int
    excluded: int
    rejected: int


def _run_block(args) -> _BlockResult:
    fn, model, seed, stream, size, h, chunk = args
    gen = RandomSource(seed, stream).generator()
    near = getattr(fn, "near_singular", None)
    points, drawn, excluded = [], 0, 0
    have = 0
    while have < size:
        batch = model.sample(gen, size - have)
        drawn += len(batch)
        if near is not None:
            keep = ~near(batch)
            excluded += int(np.count_nonzero(~keep))
            batch = batch[keep]
        points.append(batch)
        have += len(batch)
    pts = np.concatenate(points)[:size]
    total = total_sq = 0.0
    count = rejected = 0
    for start in range(0, size, chunk):
        blk = pts[start : start + chunk]
        d, q = differential(fn, model, blk, h, check=False)
        ok = model.residual(q) <= OFF_MANIFOLD_TOL
        jac = np.linalg.det(d[ok])
        rejected += int(np.count_nonzero(~ok))
        total += float(np.sum(jac))
        total_sq += float(np.sum(jac * jac))
        count += int(jac.size)
    return _BlockResult(total, total_sq, count, drawn, excluded, rejected)


def degree_estimate(
    fn: Callable,
    model: ManifoldModel,
    samples: int,
    rng,
    h: float = DEFAULT_STEP,
    workers: int = 1,
    block_size: int = 10_000,
    chunk: int = 5_000,
) -> DegreeEstimate:
    """Monte-Carlo mean of the signed Jacobian over invariant samples.

    Samples are split into fixed blocks, block ``b`` drawn from stream ``b``
    of the seed, and partial sums are combined in block order. The result
    therefore does not depend on ``workers``. If ``fn`` has a
    ``near_singular(points)`` method, flagged points are redrawn and the
    excluded fraction is reported.
    """
    if samples < 1000:
        raise InvalidParameterError("degree estimates need at least 1000 samples")
    seed = rng.seed if isinstance(rng, RandomSource) else int(rng)
    sizes = [block_size] * (samples // block_size)
    if samples % block_size:
        sizes.append(samples % block_size)
    jobs = [(fn, model, seed, b, s, h, chunk) for b, s in enumerate(sizes)]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_block, jobs))
    else:
        results = [_run_block(job) for job in jobs]

    total = sum(r.total for r in results)
    total_sq = sum(r.total_sq for r in results)
    n = sum(r.count for r in results)
    rejected = sum(r.rejected for r in results)
    drawn = sum(r.drawn for r in results)
    excluded = sum(r.excluded for r in results)
    if rejected > MAX_REJECTED_FRACTION * samples:
        raise ConsistencyError(
            f"{rejected} of {samples} samples mapped off {model.name} "
            f"(more than {MAX_REJECTED_FRACTION:.0%}); check the map and step size"
        )
    mean = total / n
    var = max(total_sq - n * mean * mean, 0.0) / (n - 1)
    stderr = math.sqrt(var / n)
    rounded, verdict = degree_verdict(mean, stderr)
    return DegreeEstimate(
        mean=mean,
        standard_error=stderr,
        samples=n,
        rounded=rounded,
        verdict=verdict,
        excluded_fraction=excluded / drawn if drawn else 0.0,
        rejected=rejected,
    )
