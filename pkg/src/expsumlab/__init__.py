"""expsumlab: a numerical laboratory for exponential sums with symmetric-square
Hecke eigenvalue coefficients, Farey-dissected evaluation, Dirichlet character
splittings, and Piatetski-Shapiro prime experiments."""

from .backend import BACKEND, resolve_workers
from .characters import DirichletCharacter, additive_expansion, enumerate_characters, gauss_sum
from .expsum import (SumReport, arc_partition_sum, bound_sweep, direct_sum,
                     make_coeffs, splitting_identity_check, theorem_bound)
from .farey import FareyArc, HMap, dissect, farey_fractions, h_inverse
from .hecke import (HeckeTable, Sym2Coeffs, build_sym2_coeffs, build_tau_table,
                    check_mult_identity, lambda_value, load_tau_cache,
                    save_tau_cache, tau_table_by_recursion)
from .phase import (ConditionReport, GApprox, PhaseFunction, build_g,
                    check_conditions, gprime_error_bound_check)
from .psprimes import PSRun, is_prime, ps_enumerate, sign_change_count, theorem3_report

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "resolve_workers",
    "DirichletCharacter", "enumerate_characters", "gauss_sum", "additive_expansion",
    "SumReport", "direct_sum", "arc_partition_sum", "splitting_identity_check",
    "bound_sweep", "make_coeffs", "theorem_bound",
    "FareyArc", "HMap", "farey_fractions", "dissect", "h_inverse",
    "HeckeTable", "Sym2Coeffs", "build_tau_table", "tau_table_by_recursion",
    "lambda_value", "check_mult_identity", "build_sym2_coeffs",
    "save_tau_cache", "load_tau_cache",
    "PhaseFunction", "GApprox", "ConditionReport", "check_conditions",
    "build_g", "gprime_error_bound_check",
    "PSRun", "ps_enumerate", "theorem3_report", "sign_change_count", "is_prime",
    "__version__",
]
