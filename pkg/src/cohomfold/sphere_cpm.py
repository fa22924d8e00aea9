"""k-power maps of spheres and geodesic folding on complex projective space.

``sphere_power`` writes a point of ``S^n`` as ``(cos t, v sin t)`` and sends
it to ``(cos kt, v sin kt)`` using Chebyshev polynomials, so it is smooth at
the poles. ``cpm_fold`` is the analogous folding for ``SO(m+1)`` acting on
``CP^m`` with normal geodesic ``[cos t : i sin t : 0 : ... : 0]``.

Both accept a single point or a stack of points along the last axis.
"""

from __future__ import annotations

import numpy as np

from .errors import DomainError, InvalidParameterError
from .halfangle import chebyshev_eval

UNIT_TOL = 1e-9
ZETA_THRESHOLD = 1e-8  # |z^T z| below this: the t = pi/4 orbit
V_THRESHOLD = 1e-12  # |Im z'| below this: the real locus t = 0


def _check_unit(p: np.ndarray, tol: float) -> None:
    if not np.all(np.isfinite(p)):
        raise DomainError("point has non-finite coordinates")
    norm = np.linalg.norm(p, axis=-1)
    if np.any(np.abs(norm - 1.0) > tol):
        raise DomainError(f"expected unit vectors, max norm error {np.max(np.abs(norm - 1)):.3e}")


def sphere_power(k: int, p, tol: float = UNIT_TOL) -> np.ndarray:
    """``(p0, w) -> (T_k(p0), U_(k-1)(p0) w)``."""
    p = np.asarray(p, dtype=float)
    _check_unit(p, tol)
    c = np.clip(p[..., 0], -1.0, 1.0)
    t_k, u_k = chebyshev_eval(k, c)
    out = np.empty_like(p)
    out[..., 0] = t_k
    out[..., 1:] = np.asarray(u_k)[..., None] * p[..., 1:]
    return out


def _odd(k: int) -> int:
    if not isinstance(k, (int, np.integer)) or k % 2 == 0:
        raise InvalidParameterError(f"cpm_fold needs an odd integer k, got {k!r}")
    return int(k)


def cpm_fold(k: int, z, tol: float = UNIT_TOL) -> np.ndarray:
    """Fold the distance to ``RP^m`` by the odd factor ``k``.

    Rotate the representative so that ``z^T z >= 0``; then ``z = u + i v``
    with ``u . v = 0`` and ``t = atan2(|v|, |u|)`` in ``[0, pi/4]``, and the
    image is ``cos(kt) u/|u| + i sin(kt) v/|v|``. On ``z^T z = 0``
    (``t = pi/4``) the image is ``[z]`` for ``k = 1 mod 4`` and ``[conj z]``
    for ``k = 3 mod 4``. Returns unit representatives.
    """
    k = _odd(k)
    z = np.asarray(z, dtype=complex)
    _check_unit(z, tol)
    zeta = np.sum(z * z, axis=-1)
    zprime = z * np.exp(-0.5j * np.angle(zeta))[..., None]
    u, v = zprime.real, zprime.imag
    nu = np.linalg.norm(u, axis=-1)
    nv = np.linalg.norm(v, axis=-1)
    t = np.arctan2(nv, nu)
    safe_nu = np.where(nu > 0, nu, 1.0)[..., None]
    safe_nv = np.where(nv > 0, nv, 1.0)[..., None]
    out = np.cos(k * t)[..., None] * (u / safe_nu) + 1j * np.sin(k * t)[..., None] * (v / safe_nv)

    real_locus = nv < V_THRESHOLD
    out = np.where(real_locus[..., None], zprime, out)
    middle = np.abs(zeta) < ZETA_THRESHOLD
    if np.any(middle):
        limit = zprime if k % 4 == 1 else np.conj(zprime)
        out = np.where(middle[..., None], limit, out)
    return out / np.linalg.norm(out, axis=-1, keepdims=True)


def projective_distance(z, w) -> np.ndarray:
    """Residual between projective classes: ``|z - e^(ia) w|`` minimized over ``a``.

    Both arguments must be unit representatives.
    """
    z = np.asarray(z, dtype=complex)
    w = np.asarray(w, dtype=complex)
    inner = np.sum(np.conj(w) * z, axis=-1)
    phase = np.where(np.abs(inner) > 0, inner / np.where(np.abs(inner) > 0, np.abs(inner), 1), 1)
    return np.linalg.norm(z - phase[..., None] * w, axis=-1)


def cpm_geodesic(t, m: int) -> np.ndarray:
    """``[cos t : i sin t : 0 : ... : 0]`` in ``CP^m``."""
    t = np.asarray(t, dtype=float)
    out = np.zeros(t.shape + (m + 1,), dtype=complex)
    out[..., 0] = np.cos(t)
    out[..., 1] = 1j * np.sin(t)
    return out
