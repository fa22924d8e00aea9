"""Complex matrix utilities and invariant random sampling.

All samplers take either a :class:`RandomSource` (seed + stream index) or an
already constructed :class:`numpy.random.Generator`, and an optional ``size``
for drawing a batch of independent samples at once.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import DomainError, InvalidDimensionError

CONSTRUCTION_TOL = 1e-12
MEMBERSHIP_TOL = 1e-9


@dataclass(frozen=True)
class RandomSource:
    """Reproducible random stream identified by ``(seed, stream)``.

    Distinct stream indices under one seed give statistically independent
    substreams (via :class:`numpy.random.SeedSequence` spawn keys).
    """

    seed: int
    stream: int = 0

    def __post_init__(self):
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        if self.stream < 0:
            raise ValueError("stream index must be non-negative")

    def generator(self) -> np.random.Generator:
        ss = np.random.SeedSequence(entropy=self.seed, spawn_key=(self.stream,))
        return np.random.Generator(np.random.PCG64(ss))

    def substream(self, index: int) -> "RandomSource":
        return RandomSource(self.seed, index)


RngLike = Union[RandomSource, np.random.Generator, int]


def as_generator(rng: RngLike) -> np.random.Generator:
    if isinstance(rng, RandomSource):
        return rng.generator()
    if isinstance(rng, np.random.Generator):
        return rng
    return RandomSource(int(rng)).generator()


@dataclass(frozen=True)
class Tolerance:
    eps: float = MEMBERSHIP_TOL

    def __post_init__(self):
        if not self.eps > 0:
            raise ValueError("tolerance must be positive")


def _shape(size) -> tuple:
    if size is None:
        return ()
    if isinstance(size, (int, np.integer)):
        return (int(size),)
    return tuple(size)


def _complex_ginibre(gen: np.random.Generator, shape: tuple) -> np.ndarray:
    return (gen.standard_normal(shape) + 1j * gen.standard_normal(shape)) / np.sqrt(2.0)


def _qr_positive(z: np.ndarray) -> np.ndarray:
    # Q with the sign/phase convention that diag(R) is real positive.
    q, r = np.linalg.qr(z)
    d = np.diagonal(r, axis1=-2, axis2=-1)
    ph = d / np.abs(d)
    return q * ph[..., None, :]


def haar_special_unitary(n: int, rng: RngLike, size=None) -> np.ndarray:
    """Haar-distributed element(s) of SU(n).

    Ginibre matrix -> QR with positive real diagonal of R -> multiply by
    ``exp(-i*phi/n)`` with ``phi`` the principal argument of the determinant.
    """
    if n < 2:
        raise InvalidDimensionError(f"SU(n) needs n >= 2, got {n}")
    gen = as_generator(rng)
    q = _qr_positive(_complex_ginibre(gen, _shape(size) + (n, n)))
    phi = np.angle(np.linalg.det(q))
    return q * np.exp(-1j * phi / n)[..., None, None]


def haar_special_orthogonal(n: int, rng: RngLike, size=None) -> np.ndarray:
    """Haar-distributed real rotation(s) in SO(n)."""
    if n < 2:
        raise InvalidDimensionError(f"SO(n) needs n >= 2, got {n}")
    gen = as_generator(rng)
    q, r = np.linalg.qr(gen.standard_normal(_shape(size) + (n, n)))
    q = q * np.sign(np.diagonal(r, axis1=-2, axis2=-1))[..., None, :]
    # O(n) -> SO(n) by flipping the first column of improper draws.
    det = np.sign(np.linalg.det(q))
    q[..., :, 0] *= det[..., None]
    return q


def uniform_sphere_point(n: int, rng: RngLike, size=None) -> np.ndarray:
    """Uniform point(s) on the unit sphere S^n in R^(n+1)."""
    if n < 1:
        raise InvalidDimensionError(f"S^n needs n >= 1, got {n}")
    gen = as_generator(rng)
    x = gen.standard_normal(_shape(size) + (n + 1,))
    return x / np.linalg.norm(x, axis=-1, keepdims=True)


def uniform_cpm_point(m: int, rng: RngLike, size=None) -> np.ndarray:
    """Unit representative(s) of Fubini-Study uniform points of CP^m."""
    if m < 1:
        raise InvalidDimensionError(f"CP^m needs m >= 1, got {m}")
    gen = as_generator(rng)
    z = _complex_ginibre(gen, _shape(size) + (m + 1,))
    return z / np.linalg.norm(z, axis=-1, keepdims=True)


def dagger(a: np.ndarray) -> np.ndarray:
    return np.conj(np.swapaxes(a, -1, -2))


def transpose(a: np.ndarray) -> np.ndarray:
    return np.swapaxes(a, -1, -2)


def unitarity_residual(b: np.ndarray) -> np.ndarray:
    """Max-entry residual of ``B^dagger B - I`` and ``|det B - 1|`` combined."""
    b = np.asarray(b)
    n = b.shape[-1]
    gram = dagger(b) @ b - np.eye(n)
    res = np.max(np.abs(gram), axis=(-2, -1))
    return np.maximum(res, np.abs(np.linalg.det(b) - 1.0))


def check_special_unitary(b: np.ndarray, tol: float = MEMBERSHIP_TOL) -> np.ndarray:
    """Return ``b`` as a complex array, raising DomainError off SU(n)."""
    b = np.asarray(b, dtype=complex)
    if b.ndim < 2 or b.shape[-1] != b.shape[-2]:
        raise DomainError(f"expected square matrices, got shape {b.shape}")
    if not np.all(np.isfinite(b)):
        raise DomainError("matrix has non-finite entries")
    res = unitarity_residual(b)
    if np.any(res > tol):
        raise DomainError(f"not special unitary: residual {np.max(res):.3e} > {tol:.1e}")
    return b


def minor2(b: np.ndarray, rows, cols) -> np.ndarray:
    (r0, r1), (c0, c1) = rows, cols
    return b[..., r0, c0] * b[..., r1, c1] - b[..., r0, c1] * b[..., r1, c0]


def cofactor_matrix(b: np.ndarray) -> np.ndarray:
    """Cofactor matrix of 3x3 matrices, polynomial in the entries.

    For ``B`` in SU(3) this equals the entrywise conjugate of ``B``.
    """
    out = np.empty(np.shape(b), dtype=complex)
    for i in range(3):
        rows = [r for r in range(3) if r != i]
        for j in range(3):
            cols = [c for c in range(3) if c != j]
            out[..., i, j] = (-1) ** (i + j) * minor2(b, rows, cols)
    return out


def cofactor_conjugate(b: np.ndarray, i: int, j: int, tol: float = MEMBERSHIP_TOL):
    """Conjugate of entry ``b[i, j]`` of an SU(3) matrix, via its cofactor.

    Indices are 1-based, as in matrix notation: ``(2, 3)`` gives
    ``b31*b12 - b11*b32``.
    """
    b = check_special_unitary(b, tol)
    if b.shape[-2:] != (3, 3):
        raise DomainError("cofactor_conjugate is defined for 3x3 matrices")
    if not (1 <= i <= 3 and 1 <= j <= 3):
        raise IndexError("indices are 1-based and must lie in 1..3")
    rows = [r for r in range(3) if r != i - 1]
    cols = [c for c in range(3) if c != j - 1]
    return (-1) ** (i + j) * minor2(b, rows, cols)


def _gell_mann() -> list[np.ndarray]:
    lam = np.zeros((8, 3, 3), dtype=complex)
    lam[0][0, 1] = lam[0][1, 0] = 1
    lam[1][0, 1], lam[1][1, 0] = -1j, 1j
    lam[2][0, 0], lam[2][1, 1] = 1, -1
    lam[3][0, 2] = lam[3][2, 0] = 1
    lam[4][0, 2], lam[4][2, 0] = -1j, 1j
    lam[5][1, 2] = lam[5][2, 1] = 1
    lam[6][1, 2], lam[6][2, 1] = -1j, 1j
    lam[7] = np.diag([1, 1, -2]) / np.sqrt(3)
    return list(lam)


def su3_lie_frame() -> list[np.ndarray]:
    """Orthonormal basis ``i*lambda_a/sqrt(2)`` of su(3).

    Orthonormal for ``<X, Y> = Re tr(X^dagger Y)``; the list order fixes the
    orientation of SU(3) used throughout.
    """
    return [1j * lam / np.sqrt(2.0) for lam in _gell_mann()]


def project_su3_algebra(x: np.ndarray) -> np.ndarray:
    """Skew-Hermitian traceless part of 3x3 matrices."""
    skew = 0.5 * (x - dagger(x))
    tr = np.trace(skew, axis1=-2, axis2=-1)
    return skew - (tr / 3.0)[..., None, None] * np.eye(3)
