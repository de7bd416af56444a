"""Numerical laboratory for Bohnenblust–Hille and Hardy–Littlewood constants."""

from .errors import (
    AdmissibilityError,
    BHLabError,
    BoundViolationError,
    CapExceededError,
    ConvergenceError,
    DomainError,
    TensorDataError,
)
from .kernel import INFINITY, ExtendedReal, KernelConfig, as_extended, euler_gamma, gamma, log_gamma, solve_q0
from .khinchine import Field, khinchine_a, khinchine_a_inv_bh
from .constants import (
    BoundReport,
    FormulaId,
    bh_envelope,
    bh_lower_real,
    bh_upper,
    hl_lower_real,
    hl_threshold,
    hl_upper_best,
    hl_upper_p_dependent,
    hl_upper_p_free,
    hl_upper_sqrt2,
)
from .exponents import (
    InterpolationDecomposition,
    MultiExponent,
    bh_admissible,
    gen_bh_upper,
    gen_bh_upper_prior,
    gen_hl_upper,
    hl_admissible,
    hl_critical_exponent,
    interpolation_weights,
    lambda_0,
    lambda_ladder,
    lambda_m,
    max_q_threshold,
)
from .verifier import (
    CoefficientTensor,
    NormEstimate,
    certified_ratio,
    certify_ratio,
    hadamard_block_form,
    mixed_norm,
    search_extremal,
    sup_norm_ascent,
    sup_norm_exact_real_linf,
    sup_norm_upper_holder,
)

REAL = Field.REAL
COMPLEX = Field.COMPLEX

__version__ = "0.1.0"
