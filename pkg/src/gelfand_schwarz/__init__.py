"""Spherical functions of (K, R^n) pairs and a constructive Schwarz theorem.

For a compact ``K`` acting orthogonally on ``R^n`` with invariant generators
``rho_1, ..., rho_l``, the package computes the exact series ``h_xi`` with
``phi_xi = h_xi o rho`` and reconstructs invariant ``f`` as ``h o rho``.
"""

__version__ = "0.1.0"

from .catalog import BUILTIN_NAMES, builtin_pair, so2_pair, so3_pair, trivial_pair, z2_pair
from .exceptions import *  # noqa: F401,F403
from .groups import CompactGroup, haar_average_scalar, reynolds, validate_group
from .invariants import (GelfandPair, check_special_assumption, enumerate_graded, expansion_matrix,
                         express_in_generators, validate_pair)
from .polynomial import Polynomial, derivative_at_zero_pairing, poly_compose_linear, poly_eval, poly_product
from .spherical import (CoefficientTable, HSeries, build_coefficient_table, build_h_series, eval_h_series,
                        eval_spherical_direct, spherical_eigenvalue, verify_eigenfunction, verify_symmetry)
from .transform import (BoxQuadrature, InvariantFunction, build_h_global, bump, corollary_h_from_g,
                        fourier_forward, fourier_inverse, gaussian, gelfand_transform, verify_schwarz)
