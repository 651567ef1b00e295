"""Exact Lipschitz tensor cross-norms and Lipschitz operator-ideal norms on
finite pointed metric spaces with polyhedral normed codomains."""

from .crossnorms import (NormResult, d_p_bounds, eps_norm, pi_norm, prec_check, pushforward,
                         w_p_upper)
from .errors import LipTensorError
from .hulls import a_max_lower_bound, quotient_operator, restrict_operator, theta_norm
from .ideals import (alpha_prime_norm, d_p_operator_norm, extremal_functional, lip_alpha_norm,
                     lip_norm, p_summing_norm, rank_one)
from .instances import (FiniteMetricSpace, FormalRepresentation, LipFunctional, LipOperator,
                        Molecule, PolyhedralSpace, build_space, dual_space, elementary, functional,
                        molecule, molecule_from_representation, operator, pairing, random_instance,
                        representation, validate_metric)
from .laws import law_suite, reverify
from .lippolytope import enumerate_vertices, lip_constant
from .lp import LpProblem, LpSolution, lp_check_certificate, lp_solve, make_problem

__version__ = "0.1.0"

__all__ = [
    "FiniteMetricSpace", "PolyhedralSpace", "Molecule", "FormalRepresentation", "LipOperator",
    "LipFunctional", "LipTensorError", "NormResult", "LpProblem", "LpSolution",
    "validate_metric", "build_space", "dual_space", "molecule", "elementary", "representation",
    "molecule_from_representation", "operator", "functional", "pairing", "random_instance",
    "lp_solve", "lp_check_certificate", "make_problem", "enumerate_vertices", "lip_constant",
    "pi_norm", "eps_norm", "d_p_bounds", "w_p_upper", "prec_check", "pushforward",
    "lip_norm", "lip_alpha_norm", "p_summing_norm", "d_p_operator_norm", "extremal_functional",
    "rank_one", "alpha_prime_norm", "restrict_operator", "quotient_operator", "a_max_lower_bound",
    "theta_norm", "law_suite", "reverify",
]
