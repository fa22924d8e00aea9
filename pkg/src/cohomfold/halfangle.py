"""Half-angle polynomials for odd multiples and Chebyshev recurrences.

For ``k = 2j + 1`` the polynomials ``f_j, g_j`` satisfy

    cos(k t) = f_j(sin^2 t) cos t,    sin(k t) = g_j(sin^2 t) sin t,

and ``h_j = (1 - f_j) / x``. Coefficients are exact Python integers in the
monomial basis of ``x`` (lowest degree first).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import comb

import numpy as np

from .errors import DomainError, InvalidParameterError

MAX_J = 60
Poly = tuple  # tuple[int, ...], lowest degree first


def _trim(p) -> Poly:
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return tuple(p)


def poly_add(a: Poly, b: Poly) -> Poly:
    n = max(len(a), len(b))
    return _trim((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n))


def poly_scale(a: Poly, s: int) -> Poly:
    return _trim(s * c for c in a)


def poly_mul(a: Poly, b: Poly) -> Poly:
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return _trim(out)


def poly_pow(a: Poly, n: int) -> Poly:
    out: Poly = (1,)
    for _ in range(n):
        out = poly_mul(out, a)
    return out


def poly_divx(a: Poly) -> Poly:
    """Exact division by ``x``; the constant term must vanish."""
    if a and a[0] != 0:
        raise ValueError("polynomial is not divisible by x")
    return _trim(a[1:])


ONE_MINUS_X: Poly = (1, -1)
X: Poly = (0, 1)


@dataclass(frozen=True)
class HalfAnglePolys:
    j: int
    f_coeffs: Poly
    g_coeffs: Poly
    h_coeffs: Poly

    @property
    def k(self) -> int:
        return 2 * self.j + 1

    def f(self, x):
        return horner(self.f_coeffs, x)

    def g(self, x):
        return horner(self.g_coeffs, x)

    def h(self, x):
        return horner(self.h_coeffs, x)


def _check_j(j: int) -> None:
    if j < 0:
        raise InvalidParameterError(f"j must be non-negative, got {j}")
    if j > MAX_J:
        raise InvalidParameterError(f"j = {j} exceeds the coefficient guard j <= {MAX_J}")


def _binomial_sum(j: int, offset: int) -> Poly:
    out: Poly = ()
    for i in range(j + 1):
        term = poly_mul(poly_pow(X, i), poly_pow(ONE_MINUS_X, j - i))
        out = poly_add(out, poly_scale(term, (-1) ** i * comb(2 * j + 1, 2 * i + offset)))
    return out


@lru_cache(maxsize=None)
def build_halfangle(j: int) -> HalfAnglePolys:
    """Expand ``f_j, g_j`` from their binomial sums; ``h_j`` by exact division."""
    _check_j(j)
    f = _binomial_sum(j, 0)
    g = _binomial_sum(j, 1)
    h = poly_divx(poly_add((1,), poly_scale(f, -1)))
    return HalfAnglePolys(j, f, g, h)


def h_closed_form(j: int) -> Poly:
    """The closed binomial sum for ``h_j``, used only to cross-check."""
    _check_j(j)
    out: Poly = ()
    for i in range(j):
        a = poly_scale(poly_pow(X, i), comb(j, i + 1))
        b = poly_scale(
            poly_mul(poly_pow(X, i), poly_pow(ONE_MINUS_X, j - 1 - i)), comb(2 * j + 1, 2 * i + 2)
        )
        out = poly_add(out, poly_scale(poly_add(a, b), (-1) ** i))
    return out


_LD = np.longdouble
_SPLITTER = _LD(2) ** ((np.finfo(_LD).nmant + 2) // 2) + 1


def _split(a):
    c = _SPLITTER * a
    hi = c - (c - a)
    return hi, a - hi


def _two_prod(a, b):
    p = a * b
    ah, al = _split(a)
    bh, bl = _split(b)
    return p, al * bl - (((p - ah * bh) - al * bh) - ah * bl)


def _two_sum(a, b):
    s = a + b
    z = s - a
    return s, (a - (s - z)) + (b - z)


_PLAIN_LIMIT = 10**3  # sum |c| below this: plain long double Horner is accurate to ~1e-16
_EXACT_LIMIT = 2**90  # max |c| above this: compensated long double is not enough


def _horner_exact(coeffs: Poly, x: np.ndarray) -> np.ndarray:
    out = np.empty(x.shape, dtype=float)
    for idx, xv in np.ndenumerate(x):
        num, den = float(xv).as_integer_ratio()
        acc = 0
        scale = 1
        for c in reversed(coeffs):
            acc = acc * num + c * scale
            scale *= den
        out[idx] = acc / (scale // den) if coeffs else 0.0
    return out


def horner(coeffs: Poly, x):
    """Evaluate integer coefficients at ``x``.

    Small polynomials use long double Horner. Larger ones cancel heavily in the
    monomial basis (coefficients grow like 4^j), so the rounding error of each
    step is carried in a second long double accumulator; beyond that the
    evaluation is exact in integers.
    """
    xl = np.asarray(x, dtype=_LD)
    if sum(abs(c) for c in coeffs) < _PLAIN_LIMIT:
        acc = np.zeros_like(xl)
        for c in reversed(coeffs):
            acc = acc * xl + _LD(c)
        out = acc.astype(float)
    elif max(abs(c) for c in coeffs) > _EXACT_LIMIT:
        out = _horner_exact(coeffs, np.asarray(x, dtype=float))
    else:
        acc = np.zeros_like(xl)
        err = np.zeros_like(xl)
        for c in reversed(coeffs):
            head = _LD(c)
            tail = _LD(c - int(head))
            prod, e_prod = _two_prod(acc, xl)
            acc, e_sum = _two_sum(prod, head)
            err = err * xl + (e_prod + e_sum + tail)
        out = (acc + err).astype(float)
    return float(out) if out.ndim == 0 else out


def eval_f(j: int, x):
    return build_halfangle(j).f(x)


def eval_g(j: int, x):
    return build_halfangle(j).g(x)


def eval_h(j: int, x):
    return build_halfangle(j).h(x)


@dataclass(frozen=True)
class ChebyshevPair:
    """Coefficients of ``T_|k|`` and ``U_(|k|-1)`` in ``c = cos t``."""

    k: int
    T_coeffs: Poly
    U_coeffs: Poly


@lru_cache(maxsize=None)
def build_chebyshev(k: int) -> ChebyshevPair:
    n = abs(k)
    t_prev, t_cur = (1,), (0, 1)  # T_0, T_1
    u_prev, u_cur = (), (1,)  # U_-1, U_0
    if n == 0:
        return ChebyshevPair(k, (1,), ())
    for _ in range(n - 1):
        t_prev, t_cur = t_cur, poly_add(poly_mul((0, 2), t_cur), poly_scale(t_prev, -1))
        u_prev, u_cur = u_cur, poly_add(poly_mul((0, 2), u_cur), poly_scale(u_prev, -1))
    return ChebyshevPair(k, t_cur, u_cur)


def chebyshev_eval(k: int, c):
    """``(T_k(c), U_(k-1)(c))`` by the three-term recurrence.

    ``T_k(cos t) = cos(k t)`` and ``U_(k-1)(cos t) sin t = sin(k t)`` for every
    integer ``k``, including ``k <= 0``.
    """
    c = np.asarray(c, dtype=float)
    if np.any(np.abs(c) > 1 + 1e-12):
        raise DomainError("Chebyshev argument must lie in [-1, 1]")
    n = abs(k)
    t_prev, t_cur = np.ones_like(c), c.copy()
    u_prev, u_cur = np.zeros_like(c), np.ones_like(c)
    if n == 0:
        t_cur, u_cur = np.ones_like(c), np.zeros_like(c)
    for _ in range(max(n - 1, 0)):
        t_prev, t_cur = t_cur, 2 * c * t_cur - t_prev
        u_prev, u_cur = u_cur, 2 * c * u_cur - u_prev
    if k < 0:
        u_cur = -u_cur
    if c.ndim == 0:
        return float(t_cur), float(u_cur)
    return t_cur, u_cur
