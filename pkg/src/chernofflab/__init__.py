"""Chernoff-type semigroup approximations on matrices, with bound audits."""

from ._core import BACKEND
from .approximants import (
    ChernoffFamily,
    chernoff_iterate,
    euler_approx,
    exact_semigroup,
    generator_approx,
    resolvent_defect,
    trotter_approx,
)
from .defects import (
    BoundAudit,
    RittEstimate,
    audit_bound,
    bound_lemma2,
    bound_quasisectorial,
    bound_sqrt_n,
    bound_thm22,
    chernoff_defect_norm,
    chernoff_defect_vec,
    ritt_constant,
)
from .families import FamilySpec, corpus, make_operator
from .linalg import expm, herm_eig_extremes, opnorm, powm, resolvent
from .poisson import (
    PoissonSplit,
    poisson_abs_moment,
    poisson_pmf_window,
    poisson_split,
    poisson_var_sum,
    tail_claim_audit,
)
from .rates import RateReport, fit_power, sweep
from .regions import (
    NumericalRangeBoundary,
    SectorialCert,
    in_D_alpha,
    in_sector,
    min_semi_angle,
    numerical_range_boundary,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "audit_bound",
    "BACKEND",
    "bound_lemma2",
    "bound_quasisectorial",
    "bound_sqrt_n",
    "bound_thm22",
    "BoundAudit",
    "chernoff_defect_norm",
    "chernoff_defect_vec",
    "chernoff_iterate",
    "ChernoffFamily",
    "corpus",
    "euler_approx",
    "exact_semigroup",
    "expm",
    "FamilySpec",
    "fit_power",
    "generator_approx",
    "herm_eig_extremes",
    "in_D_alpha",
    "in_sector",
    "make_operator",
    "min_semi_angle",
    "numerical_range_boundary",
    "NumericalRangeBoundary",
    "opnorm",
    "poisson_abs_moment",
    "poisson_pmf_window",
    "poisson_split",
    "poisson_var_sum",
    "PoissonSplit",
    "powm",
    "RateReport",
    "resolvent",
    "resolvent_defect",
    "ritt_constant",
    "RittEstimate",
    "SectorialCert",
    "sweep",
    "tail_claim_audit",
    "trotter_approx",
]
