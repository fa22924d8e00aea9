"""Named selfmaps as picklable callables, parsed from specs like ``psi:3``."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidParameterError
from .linalg import transpose
from .numtopo import CPmModel, ManifoldModel, SphereModel, SU3Model
from .sphere_cpm import cpm_fold, sphere_power
from .su3 import RealizationPlan, power_map, psi, realize_degree

# kind -> model class it acts on
_KINDS = {
    "psi": SU3Model,
    "rho": SU3Model,
    "realize": SU3Model,
    "transpose": SU3Model,
    "power": SphereModel,
    "antipodal": SphereModel,
    "fold": CPmModel,
    "identity": ManifoldModel,
}
_ALIASES = {"sphere": "power", "cpm": "fold", "id": "identity"}
_NEEDS_ODD = {"psi", "fold"}
_NEEDS_ARG = {"psi", "rho", "realize", "power", "fold"}

NEAR_SINGULAR_DIST = 1e-3


@dataclass(frozen=True)
class SelfMap:
    kind: str
    k: int = 1

    def __call__(self, p):
        if self.kind == "psi":
            return psi(self.k, p)
        if self.kind == "rho":
            return power_map(self.k, p)
        if self.kind == "realize":
            plan = realize_degree(self.k)
            if not isinstance(plan, RealizationPlan):
                raise InvalidParameterError(f"degree {self.k} is {plan.value}")
            return plan(p)
        if self.kind == "transpose":
            return transpose(np.asarray(p))
        if self.kind == "power":
            return sphere_power(self.k, p)
        if self.kind == "antipodal":
            return -np.asarray(p)
        if self.kind == "fold":
            return cpm_fold(self.k, p)
        return np.asarray(p)

    def near_singular(self, p):
        """Points within ``NEAR_SINGULAR_DIST`` of the loci where the fold switches formulas."""
        p = np.asarray(p)
        if self.kind != "fold":
            return np.zeros(p.shape[0], dtype=bool)
        zeta = np.abs(np.sum(p * p, axis=-1))
        # |z^T z| = cos 2t; slice parameter t = arccos(|zeta|)/2 in [0, pi/4].
        t = 0.5 * np.arccos(np.clip(zeta, 0.0, 1.0))
        return (t < NEAR_SINGULAR_DIST) | (np.pi / 4 - t < NEAR_SINGULAR_DIST)

    def compatible(self, model: ManifoldModel) -> bool:
        return isinstance(model, _KINDS[self.kind])

    def __str__(self) -> str:
        return self.kind if self.kind not in _NEEDS_ARG else f"{self.kind}:{self.k}"


def parse_map(spec: str) -> SelfMap:
    """Parse ``kind[:k]`` (e.g. ``psi:-3``, ``rho:2``, ``power:4``, ``fold:3``)."""
    kind, _, arg = spec.strip().partition(":")
    kind = _ALIASES.get(kind.lower(), kind.lower())
    if kind not in _KINDS:
        raise InvalidParameterError(f"unknown map {kind!r}; choose from {', '.join(sorted(_KINDS))}")
    if kind in _NEEDS_ARG:
        try:
            k = int(arg)
        except ValueError:
            raise InvalidParameterError(f"map {kind!r} needs an integer argument, e.g. {kind}:3") from None
    elif arg:
        raise InvalidParameterError(f"map {kind!r} takes no argument")
    else:
        k = 1
    if kind in _NEEDS_ODD and k % 2 == 0:
        raise InvalidParameterError(f"{kind} needs an odd k, got {k}")
    return SelfMap(kind, k)
