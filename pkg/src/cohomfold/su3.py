"""Polynomial selfmaps of SU(3).

The group acts on itself by ``(A, B) -> A B A^T`` with cohomogeneity one.
The curve ``gamma(t)`` (a rotation in the upper-left 2x2 block) meets every
orbit perpendicularly, and ``psi(k, .)`` sends ``A gamma(t) A^T`` to
``A gamma(k t) A^T`` for odd ``k``. All functions accept a single 3x3 matrix
or a stack of shape ``(..., 3, 3)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import ConsistencyError, InvalidParameterError
from .halfangle import build_halfangle
from .linalg import (
    MEMBERSHIP_TOL,
    check_special_unitary,
    cofactor_matrix,
    dagger,
    transpose,
    unitarity_residual,
)
from .weyl import Realizability, realizable_su3_degree, two_adic_valuation

OUTPUT_TOL = 1e-8


def normal_geodesic(t) -> np.ndarray:
    t = np.asarray(t, dtype=float)
    c, s = np.cos(t), np.sin(t)
    out = np.zeros(t.shape + (3, 3), dtype=complex)
    out[..., 0, 0] = c
    out[..., 0, 1] = -s
    out[..., 1, 0] = s
    out[..., 1, 1] = c
    out[..., 2, 2] = 1.0
    return out


def _x_unchecked(b: np.ndarray) -> np.ndarray:
    # tr(B Bbar) = sum_ij b_ij * conj(b_ji)
    tr = np.einsum("...ij,...ji->...", b, np.conj(b)).real
    return np.clip((3.0 - tr) / 4.0, 0.0, 1.0)


def orbit_invariant_x(b, tol: float = MEMBERSHIP_TOL):
    """``sin^2 t`` for ``B = A gamma(t) A^T``, as ``(3 - Re tr(B Bbar)) / 4``.

    ``B Bbar = A gamma(2t) A^dagger``, so its trace is an orbit invariant.
    """
    b = check_special_unitary(b, tol)
    x = _x_unchecked(b)
    return float(x) if x.ndim == 0 else x


def recover_slice_parameter(b, tol: float = MEMBERSHIP_TOL):
    """Slice parameter ``t`` in ``[0, pi/2]`` of the orbit through ``B``."""
    x = orbit_invariant_x(b, tol)
    return np.arcsin(np.sqrt(x))


def orbit_signature(b) -> np.ndarray:
    """Characteristic polynomial coefficients of ``B Bbar`` (orbit invariant)."""
    b = np.asarray(b, dtype=complex)
    m = b @ np.conj(b)
    tr1 = np.trace(m, axis1=-2, axis2=-1)
    tr2 = np.trace(m @ m, axis1=-2, axis2=-1)
    det = np.linalg.det(m)
    return np.stack([-tr1, 0.5 * (tr1**2 - tr2), -det], axis=-1)


def cross_vector(b: np.ndarray) -> np.ndarray:
    """``(b23bar - b32bar, b31bar - b13bar, b12bar - b21bar)`` from cofactors.

    Equals ``2 sin(t) v`` (up to sign) where ``v`` is the third column of
    ``A`` in ``B = A gamma(t) A^T``.
    """
    cb = cofactor_matrix(b)
    return np.stack(
        [
            cb[..., 1, 2] - cb[..., 2, 1],
            cb[..., 2, 0] - cb[..., 0, 2],
            cb[..., 0, 1] - cb[..., 1, 0],
        ],
        axis=-1,
    )


def _odd_param(k: int) -> tuple[int, int]:
    if not isinstance(k, (int, np.integer)) or k % 2 == 0:
        raise InvalidParameterError(f"psi needs an odd integer k, got {k!r}")
    return (abs(int(k)) - 1) // 2, (1 if k > 0 else -1)


def _psi_unchecked(k: int, b: np.ndarray) -> np.ndarray:
    m, sign = _odd_param(k)
    if m == 0:
        # f_0 = g_0 = 1, h_0 = 0: identity or transpose, kept exact
        return np.array(b, copy=True) if sign > 0 else np.array(transpose(b), copy=True)
    polys = build_halfangle(m)
    x = _x_unchecked(b)
    f = np.asarray(polys.f(x))[..., None, None]
    g = np.asarray(polys.g(x))[..., None, None]
    h = np.asarray(polys.h(x) if polys.h_coeffs else np.zeros_like(x))[..., None, None]
    bt = transpose(b)
    c = cross_vector(b)
    return 0.5 * f * (b + bt) + sign * 0.5 * g * (b - bt) + 0.25 * h * (c[..., :, None] * c[..., None, :])


def psi(k: int, b, tol: float = MEMBERSHIP_TOL) -> np.ndarray:
    """Equivariant selfmap of SU(3) of degree ``k`` (``k`` odd).

    ``1/2 f(x) (B + B^T) + sgn(k)/2 g(x) (B - B^T) + 1/4 h(x) c c^T`` with
    polynomials of index ``(|k| - 1) / 2`` and ``x`` the orbit invariant.
    The output is checked against SU(3), never projected onto it.
    """
    _odd_param(k)
    b = check_special_unitary(b, tol)
    out = _psi_unchecked(k, b)
    res = unitarity_residual(out)
    if np.any(res > OUTPUT_TOL):
        raise ConsistencyError(f"psi_{k} output left SU(3): residual {np.max(res):.3e}")
    return out


def power_map(k: int, b, tol: float = MEMBERSHIP_TOL) -> np.ndarray:
    """``B^k`` by repeated squaring; negative powers via ``B^dagger``."""
    b = check_special_unitary(b, tol)
    if k < 0:
        b, k = dagger(b), -k
    result = np.broadcast_to(np.eye(3, dtype=complex), b.shape).copy()
    base = b
    while k:
        if k & 1:
            result = result @ base
        base = base @ base
        k >>= 1
    return result


@dataclass(frozen=True)
class RealizationPlan:
    """``rho_(2^m) o psi_(2l+1)``, a selfmap of degree ``4^m (2l + 1)``."""

    m: int
    ell: int

    @property
    def degree(self) -> int:
        return 4**self.m * (2 * self.ell + 1)

    @property
    def psi_k(self) -> int:
        return 2 * self.ell + 1

    @property
    def power(self) -> int:
        return 2**self.m

    def __call__(self, b, tol: float = MEMBERSHIP_TOL) -> np.ndarray:
        return power_map(self.power, psi(self.psi_k, b, tol))

    def describe(self) -> str:
        parts = []
        if self.m:
            parts.append(f"rho_{self.power}")
        parts.append(f"psi_{self.psi_k}")
        return " o ".join(parts)


def realize_degree(d: int):
    """Plan for a selfmap of SU(3) of degree ``d``, or a :class:`Realizability` verdict."""
    verdict = realizable_su3_degree(d)
    if verdict is not Realizability.YES:
        return verdict
    m = two_adic_valuation(d) // 2
    odd = d // 4**m
    return RealizationPlan(m=m, ell=(odd - 1) // 2)


@lru_cache(maxsize=None)
def psi_polynomial(k: int):
    """Symbolic ``psi_k`` entries as real polynomials in ``Re b_ij, Im b_ij``.

    Returns ``(variables, entries)``: ``variables`` is the list of 18 real
    sympy symbols ordered ``(re11, im11, re12, ...)``, ``entries`` a 3x3 list
    of complex-valued polynomial expressions. ``x`` and the conjugates inside
    the cross vector are written as polynomials (cofactors expanded).
    """
    import sympy as sp

    m, sign = _odd_param(k)
    if m == 0:
        # f_0 = g_0 = 1, h_0 = 0: identity or transpose, kept exact
        return np.array(b, copy=True) if sign > 0 else np.array(transpose(b), copy=True)
    polys = build_halfangle(m)
    re = [[sp.Symbol(f"re{i + 1}{j + 1}", real=True) for j in range(3)] for i in range(3)]
    im = [[sp.Symbol(f"im{i + 1}{j + 1}", real=True) for j in range(3)] for i in range(3)]
    b = sp.Matrix(3, 3, lambda i, j: re[i][j] + sp.I * im[i][j])
    bbar = sp.Matrix(3, 3, lambda i, j: re[i][j] - sp.I * im[i][j])
    x = sp.re(sp.expand((3 - (b * bbar).trace()) / 4))

    def poly_at(coeffs):
        return sum((int(c) * x**n for n, c in enumerate(coeffs)), sp.Integer(0))

    f, g, h = poly_at(polys.f_coeffs), poly_at(polys.g_coeffs), poly_at(polys.h_coeffs)
    cof = b.adjugate().T
    c = sp.Matrix([cof[1, 2] - cof[2, 1], cof[2, 0] - cof[0, 2], cof[0, 1] - cof[1, 0]])
    out = f * (b + b.T) / 2 + sign * g * (b - b.T) / 2 + h * (c * c.T) / 4
    variables = [v for i in range(3) for j in range(3) for v in (re[i][j], im[i][j])]
    return variables, [[out[i, j] for j in range(3)] for i in range(3)]


def psi_via_polynomial(k: int, b) -> np.ndarray:
    """Evaluate :func:`psi_polynomial` numerically (no membership checks)."""
    fn = _lambdified(k)
    b = np.asarray(b, dtype=complex)
    args = [part for i in range(3) for j in range(3) for part in (b[..., i, j].real, b[..., i, j].imag)]
    out = np.empty(b.shape, dtype=complex)
    for i in range(3):
        for j in range(3):
            out[..., i, j] = fn[i][j](*args)
    return out


@lru_cache(maxsize=None)
def _lambdified(k: int):
    import sympy as sp

    variables, entries = psi_polynomial(k)
    return [[sp.lambdify(variables, e, "numpy") for e in row] for row in entries]
