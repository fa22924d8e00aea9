"""Equivariant selfmaps of cohomogeneity-one manifolds and their degrees.

Submodules: ``linalg`` (sampling, matrix helpers), ``halfangle``
(half-angle and Chebyshev polynomials), ``su3`` (the maps ``psi_k`` and
``rho_k``), ``sphere_cpm`` (sphere powers and ``CP^m`` folding), ``numtopo``
(Monte-Carlo degrees), ``weyl`` (exact degree and Lefschetz theory) and
``cli``.
"""

from .errors import (
    CohomFoldError,
    ConsistencyError,
    DomainError,
    InvalidDimensionError,
    InvalidParameterError,
    NonRegularValueError,
)
from .halfangle import build_halfangle, chebyshev_eval, eval_f, eval_g, eval_h
from .linalg import RandomSource, haar_special_orthogonal, haar_special_unitary
from .maps import SelfMap, parse_map
from .numtopo import DegreeEstimate, degree_estimate, get_model, signed_jacobian
from .sphere_cpm import cpm_fold, sphere_power
from .su3 import RealizationPlan, normal_geodesic, orbit_invariant_x, power_map, psi, realize_degree
from .weyl import (
    CohomOneData,
    catalog,
    degree_formula,
    degree_oracle,
    lefschetz_formula,
    lefschetz_oracle,
    realizable_su3_degree,
)

__version__ = "0.1.0"
