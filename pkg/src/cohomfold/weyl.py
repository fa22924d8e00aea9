"""Exact combinatorics of geodesic-folding maps on cohomogeneity-one manifolds.

A cohomogeneity-one manifold with finite Weyl group is described here only by
the data that enter the degree and Lefschetz computations
(:class:`CohomOneData`). Parameters along the normal geodesic are normalized
so that the two singular orbits sit at ``t = 0`` (``N0``) and ``t = 1``
(``N1``); the geodesic closes at ``t = |W|``.

Each closed-form table (``degree_formula``, ``lefschetz_formula``) has an
independent enumeration counterpart (``degree_oracle``, ``lefschetz_oracle``)
that counts preimages of a regular value or fixed orbits directly, in exact
rational arithmetic.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

from .errors import InvalidParameterError, NonRegularValueError


class Parity(str, enum.Enum):
    ODD = "odd"
    EVEN = "even"

    @classmethod
    def of(cls, value) -> "Parity":
        if isinstance(value, Parity):
            return value
        if isinstance(value, str):
            return cls(value.lower())
        return cls.ODD if int(value) % 2 else cls.EVEN


@dataclass(frozen=True)
class CohomOneData:
    """Weyl-group order, singular-orbit codimensions and Euler characteristics."""

    weyl_order: int
    codim0: int
    codim1: int
    chi0: int
    chi1: int
    chiGH: int
    isotropy_equal: bool = False
    orientable: bool = True
    rank_equal: bool = False
    name: str = ""

    def __post_init__(self):
        if self.weyl_order <= 0 or self.weyl_order % 2:
            raise InvalidParameterError(f"|W| must be a positive even integer, got {self.weyl_order}")
        if self.codim0 < 1 or self.codim1 < 1:
            raise InvalidParameterError("singular orbit codimensions must be positive")
        if self.chiGH < 0:
            raise InvalidParameterError("chi(G/H) is non-negative")
        if self.rank_equal != (self.chiGH > 0):
            raise InvalidParameterError("rank G = rank H exactly when chi(G/H) > 0")

    @property
    def chi_M(self) -> int:
        return self.chi0 + self.chi1 - self.chiGH

    @property
    def parities(self) -> tuple[Parity, Parity]:
        return Parity.of(self.codim0), Parity.of(self.codim1)

    def fold_k(self, j: int) -> int:
        return fold_k(self.weyl_order, j)

    def euler_consistent(self) -> bool:
        """Sphere-bundle check ``G/H -> N_i`` with fibre ``S^(codim_i - 1)``.

        Odd codimension: ``chi(G/H) = 2 chi(N_i)``; even codimension:
        ``chi(G/H) = 0``.
        """
        for codim, chi in ((self.codim0, self.chi0), (self.codim1, self.chi1)):
            expected = 2 * chi if codim % 2 else 0
            if self.chiGH != expected:
                return False
        return True


def fold_k(weyl_order: int, j: int) -> int:
    return j * weyl_order // 2 + 1


@dataclass(frozen=True)
class FoldParam:
    j: int
    weyl_order: int

    @property
    def k(self) -> int:
        return fold_k(self.weyl_order, self.j)


def allowed_fold_params(data: CohomOneData, j: int) -> bool:
    """Folding by ``k = j|W|/2 + 1`` is well defined for even ``j``, and for
    odd ``j`` when the isotropy groups at ``t0`` and ``t0 + |W|/2`` coincide."""
    return j % 2 == 0 or data.isotropy_equal


# -- orientation --------------------------------------------------------------


def _count_even(a: int, b: int) -> int:
    return 0 if b < a else b // 2 - (a - 1) // 2


def _count_odd(a: int, b: int) -> int:
    return 0 if b < a else (b + 1) // 2 - a // 2


def orientation_pattern(codim0_parity, codim1_parity) -> Callable[[int], int]:
    """Sign of ``phi`` on the piece ``G/H x ]l, l+1[`` relative to the product orientation.

    Crossing the integer ``i`` flips the sign exactly when the singular orbit
    met there (``N0`` for even ``i``, ``N1`` for odd ``i``) has even
    codimension. ``s(0) = +1``.
    """
    flip0 = Parity.of(codim0_parity) is Parity.EVEN
    flip1 = Parity.of(codim1_parity) is Parity.EVEN

    def sign(ell: int) -> int:
        lo, hi = (1, ell) if ell >= 0 else (ell + 1, 0)
        flips = flip0 * _count_even(lo, hi) + flip1 * _count_odd(lo, hi)
        return -1 if flips % 2 else 1

    return sign


def orientability_consistency(weyl_order: int, codim0_parity, codim1_parity) -> bool:
    """True when the orientation pattern is ``|W|``-periodic."""
    if weyl_order % 2:
        raise InvalidParameterError("|W| must be even")
    sign = orientation_pattern(codim0_parity, codim1_parity)
    return all(sign(ell) == sign(ell + weyl_order) for ell in range(-weyl_order, weyl_order))


def _require_degree_pre(data: CohomOneData, j: int) -> None:
    if not allowed_fold_params(data, j):
        raise InvalidParameterError(f"j = {j} is not an allowed fold parameter for {data.name or data}")
    if not data.orientable:
        raise InvalidParameterError("degree is only defined for orientable data")
    if not orientability_consistency(data.weyl_order, *data.parities):
        raise InvalidParameterError(
            f"codimension parities {data.parities[0].value}/{data.parities[1].value} "
            f"are not orientable with |W| = {data.weyl_order}"
        )


# -- degree -------------------------------------------------------------------


def preimage_parameters(weyl_order: int, k: int, tau: Fraction) -> list[Fraction]:
    """``t_m = (m|W| + tau)/k`` lying in ``]0, |W|[``, in increasing order."""
    if k == 0:
        return []
    out = []
    # k t_m ranges over ]0, k|W|[ (or ]k|W|, 0[), so |k| values of m qualify.
    m_lo, m_hi = (0, k - 1) if k > 0 else (k, -1)
    for m in range(m_lo - 1, m_hi + 2):
        t = (m * weyl_order + tau) / Fraction(k)
        if 0 < t < weyl_order:
            out.append(t)
    return sorted(out)


def degree_oracle(data: CohomOneData, j: int, tau=Fraction(1, 2), retry: bool = False) -> int:
    """Signed count of preimages of ``gamma(tau)`` under the folding map.

    Each preimage ``gamma(t_m)`` contributes ``sgn(k) * s(floor(t_m))`` with
    ``s`` from :func:`orientation_pattern`.
    """
    _require_degree_pre(data, j)
    tau = Fraction(tau)
    if not 0 < tau < 1:
        raise InvalidParameterError("tau must lie strictly between 0 and 1")
    k = data.fold_k(j)
    ts = preimage_parameters(data.weyl_order, k, tau)
    if any(t.denominator == 1 for t in ts):
        if retry:
            return degree_oracle(data, j, Fraction(1, 3))
        raise NonRegularValueError(f"gamma({tau}) is not a regular value")
    if k != 0 and len(ts) != abs(k):
        raise AssertionError(f"expected |k| = {abs(k)} preimages, found {len(ts)}")
    sign = orientation_pattern(*data.parities)
    sk = 1 if k > 0 else -1
    return sum(sk * sign(int(t // 1)) for t in ts)


def degree_formula(data: CohomOneData, j: int) -> int:
    """Closed-form degree table, case by case and unreconciled with the oracle."""
    _require_degree_pre(data, j)
    k = data.fold_k(j)
    p0, p1 = data.parities
    both_odd = p0 is Parity.ODD and p1 is Parity.ODD
    if j % 2 == 0:
        return k if both_odd else 1
    if both_odd:
        return k
    W = data.weyl_order
    if p0 is Parity.EVEN and p1 is Parity.EVEN and W % 4:
        return 0
    if p0 is Parity.EVEN and p1 is Parity.ODD and W % 8:
        return -1
    return 1


def degree_discrepancy(data: CohomOneData, j: int) -> bool:
    """True when the closed-form table disagrees with the enumeration."""
    return degree_formula(data, j) != degree_oracle(data, j, retry=True)


# -- Lefschetz number ---------------------------------------------------------


def _fold_to_slice(t: Fraction) -> Fraction:
    r = t % 2
    return 2 - r if r > 1 else r


def fixed_orbit_parameters(data: CohomOneData, j: int) -> list[Fraction]:
    """Slice parameters ``t`` in ``[0, 1]`` of orbits on which the map is the identity."""
    k = data.fold_k(j)
    W = data.weyl_order
    if k == 1:
        raise InvalidParameterError("j = 0 gives the identity, which fixes every orbit")
    n_steps = abs(k - 1)
    reps = set()
    for n in range(n_steps):
        t = Fraction(n * W, n_steps)
        # (k - 1) t = +-n|W| is a multiple of |W| by construction.
        reps.add(_fold_to_slice(t))
    return sorted(reps)


def lefschetz_oracle(data: CohomOneData, j: int) -> int:
    """Sum of fixed-point indices after perturbing by a generic group element.

    A pointwise-fixed orbit ``V`` contributes ``(-sgn j)^codim(V) * chi(V)``.
    """
    if j == 0:
        return data.chi_M
    if not allowed_fold_params(data, j):
        raise InvalidParameterError(f"j = {j} is not an allowed fold parameter")
    s = -1 if j > 0 else 1
    total = 0
    for t in fixed_orbit_parameters(data, j):
        if t == 0:
            total += s**data.codim0 * data.chi0
        elif t == 1:
            total += s**data.codim1 * data.chi1
        else:
            total += s * data.chiGH
    return total


def lefschetz_formula(data: CohomOneData, j: int) -> int:
    """Closed-form Lefschetz table."""
    if not allowed_fold_params(data, j):
        raise InvalidParameterError(f"j = {j} is not an allowed fold parameter")
    p0, p1 = data.parities
    half = Fraction(-j * data.chiGH, 2)
    if j % 2 == 0:
        value = half if (p0 is Parity.ODD and p1 is Parity.ODD) else data.chi_M
    else:
        value = half if data.rank_equal else data.chi0
    if Fraction(value).denominator != 1:
        raise InvalidParameterError("chi(G/H) must be even here")
    return int(value)


# -- cohomology rings ---------------------------------------------------------


class RingVariant(str, enum.Enum):
    EXTERIOR = "exterior"
    TRUNCATED = "truncated"
    SPHERES = "spheres"


@dataclass(frozen=True)
class CohomologyRingDesc:
    """Rational cohomology ring with the induced map's action on generators.

    * ``EXTERIOR``: odd generator ``degrees``, one coefficient per generator.
    * ``SPHERES``: product of spheres, strictly increasing ``degrees``.
    * ``TRUNCATED``: one even generator of degree ``degrees[0]`` with
      ``x^(truncation+1) = 0``; ``coefficients[0]`` is the action on it.
    """

    variant: RingVariant
    degrees: tuple
    coefficients: tuple
    truncation: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, "variant", RingVariant(self.variant))
        object.__setattr__(self, "degrees", tuple(self.degrees))
        object.__setattr__(self, "coefficients", tuple(self.coefficients))
        if self.variant is RingVariant.TRUNCATED:
            if len(self.degrees) != 1 or len(self.coefficients) != 1 or self.truncation is None:
                raise InvalidParameterError("truncated ring needs one generator and a truncation")
            if self.degrees[0] % 2:
                raise InvalidParameterError("truncated polynomial generator must have even degree")
        else:
            if len(self.degrees) != len(self.coefficients) or not self.degrees:
                raise InvalidParameterError("one coefficient per generator")
            if self.variant is RingVariant.EXTERIOR and any(d % 2 == 0 for d in self.degrees):
                raise InvalidParameterError("exterior generators have odd degree")
            if self.variant is RingVariant.SPHERES and any(
                a >= b for a, b in zip(self.degrees, self.degrees[1:])
            ):
                raise InvalidParameterError("sphere degrees must be strictly increasing")


def ring_degree(ring: CohomologyRingDesc) -> int:
    if ring.variant is RingVariant.TRUNCATED:
        return ring.coefficients[0] ** ring.truncation
    out = 1
    for c in ring.coefficients:
        out *= c
    return out


def ring_lefschetz(ring: CohomologyRingDesc) -> int:
    """Alternating trace of the induced map on the whole cohomology ring."""
    if ring.variant is RingVariant.TRUNCATED:
        d = ring.coefficients[0]
        return sum(d**i for i in range(ring.truncation + 1))
    out = 1
    for deg, c in zip(ring.degrees, ring.coefficients):
        out *= 1 + (-1) ** deg * c
    return out


@dataclass(frozen=True)
class ChiReport:
    chi: int
    supplied: Optional[int]
    contradiction: bool
    detail: str = ""


def homology_sphere_chi(data: CohomOneData, j: int = 2) -> ChiReport:
    """Forced ``chi(G/H)`` when ``M`` is an odd-dimensional rational homology sphere.

    Both codimensions odd gives ``deg = k`` and ``L = -j chi/2``; the
    constraint ``L = 1 - deg`` then pins ``chi``.
    """
    if data.codim0 % 2 == 0 or data.codim1 % 2 == 0:
        raise InvalidParameterError("both singular orbits must have odd codimension")
    if j == 0 or j % 2:
        raise InvalidParameterError("use a nonzero even j")
    deg = data.fold_k(j)
    # -j chi / 2 = 1 - deg
    chi = Fraction(2 * (deg - 1), j)
    assert chi.denominator == 1
    chi = int(chi)
    contradiction = data.chiGH != chi
    detail = (
        f"supplied chi(G/H) = {data.chiGH} but a rational homology sphere forces {chi}"
        if contradiction
        else ""
    )
    return ChiReport(chi=chi, supplied=data.chiGH, contradiction=contradiction, detail=detail)


@dataclass(frozen=True)
class SignAssignment:
    position: int  # generator receiving the factor k (0-based)
    signs: tuple


@dataclass(frozen=True)
class ProductSpheresReport:
    chi: int
    assignments: tuple = field(default_factory=tuple)

    @property
    def feasible(self) -> bool:
        return bool(self.assignments)


def product_spheres_chi(degrees, weyl_order: int) -> ProductSpheresReport:
    """Forced ``chi(G/H)`` for a rank-equal action on a product of spheres.

    Enumerates the generator ``p`` carrying the factor ``k`` and all sign
    vectors with an even number of ``-1`` entries, keeping those for which
    ``(1 + (-1)^l_p k s_p) prod_(i != p) (1 + (-1)^l_i s_i)`` equals
    ``-j chi/2 = -(k - 1) chi/|W|`` identically in ``k`` with ``chi > 0``.
    """
    degrees = tuple(degrees)
    if not degrees or any(a >= b for a, b in zip(degrees, degrees[1:])):
        raise InvalidParameterError("degrees must be non-empty and strictly increasing")
    m = len(degrees)
    chi_values = set()
    found = []
    for p in range(m):
        for signs in itertools.product((1, -1), repeat=m):
            if signs.count(-1) % 2:
                continue
            eps = (-1) ** degrees[p] * signs[p]
            rest = 1
            for i in range(m):
                if i != p:
                    rest *= 1 + (-1) ** degrees[i] * signs[i]
            # rest + eps*rest*k == chi/|W| - (chi/|W|) k  =>  eps = -1, chi = rest*|W|
            if rest > 0 and eps == -1:
                chi_values.add(rest * weyl_order)
                found.append(SignAssignment(position=p, signs=signs))
    forced = 2 ** (m - 1) * weyl_order
    assert chi_values <= {forced}
    return ProductSpheresReport(chi=forced, assignments=tuple(found))


# -- SU(3) degrees ------------------------------------------------------------


class Realizability(str, enum.Enum):
    YES = "yes"
    NO = "not-realizable"
    ZERO_CAVEAT = "zero-caveat"


def two_adic_valuation(d: int) -> int:
    if d == 0:
        raise ValueError("v2(0) is undefined")
    d = abs(d)
    return (d & -d).bit_length() - 1


def realizable_su3_degree(d: int) -> Realizability:
    """Degrees of selfmaps of SU(3) are ``4^m`` times an odd number.

    ``d = 0`` is reported separately: a constant map has degree zero.
    """
    if d == 0:
        return Realizability.ZERO_CAVEAT
    return Realizability.YES if two_adic_valuation(d) % 2 == 0 else Realizability.NO


# -- examples -----------------------------------------------------------------


def sphere_data(n: int) -> CohomOneData:
    """``O(n)`` acting on ``S^n`` by rotating the last ``n`` coordinates."""
    if n < 2:
        raise InvalidParameterError("sphere examples need n >= 2")
    chi_gh = 1 + (-1) ** (n - 1)
    return CohomOneData(2, n, n, 1, 1, chi_gh, isotropy_equal=True, rank_equal=chi_gh > 0, name=f"S{n}")


def cpm_data(m: int) -> CohomOneData:
    """``SO(m+1)`` acting on ``CP^m``: ``N0 = RP^m``, ``N1`` the oriented 2-plane Grassmannian."""
    if m < 2:
        raise InvalidParameterError("CP^m examples need m >= 2")
    chi0 = 0 if m % 2 else 1
    chi1 = m + 1 if m % 2 else m
    return CohomOneData(4, m, 2, chi0, chi1, 0, isotropy_equal=True, name=f"CP{m}")


def catalog() -> dict[str, CohomOneData]:
    entries = [
        CohomOneData(4, 3, 3, 0, 0, 0, isotropy_equal=True, name="SU3"),
        *(sphere_data(n) for n in (2, 3, 4, 5, 7)),
        *(cpm_data(m) for m in (2, 3, 5)),
        CohomOneData(2, 3, 3, 2, 2, 4, isotropy_equal=True, rank_equal=True, name="M7_1"),
        CohomOneData(2, 3, 3, 3, 3, 6, isotropy_equal=True, rank_equal=True, name="M7_2"),
    ]
    return {e.name: e for e in entries}


def lookup(name: str) -> CohomOneData:
    entries = catalog()
    key = name.upper().replace("^", "")
    for entry_name, entry in entries.items():
        if entry_name.upper() == key:
            return entry
    raise KeyError(f"unknown catalog entry {name!r}; known: {', '.join(entries)}")
