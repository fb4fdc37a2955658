"""Exact modular counting, unit-group exponential sums, and error-exponent
scans for generalized Lehmer statistics."""

__version__ = "0.1.0"

from .analysis import (
    DEFAULT_SEED,
    DEFAULT_WORK_BUDGET,
    ExponentFit,
    ScanRecord,
    bound_ratio_sweep,
    fit_exponent,
    lemma_ratio_sweep,
    orthogonality_check,
    parity_scan,
    scan_family,
)
from .counting import (
    CongruenceSystem,
    CountReport,
    ParityReport,
    ProblemSpec,
    congruence_system,
    count_direct,
    count_report,
    count_via_congruence_system,
    main_term,
    parity_report,
    u_bounds,
)
from .errors import (
    AllZeroCoefficients,
    CoprimalityViolation,
    EvenModulus,
    InsufficientData,
    InvalidModulus,
    LehmerLabError,
    NotInvertible,
    PlanMismatch,
    RangeTooLarge,
    ZeroExponent,
)
from .expsum import (
    ComplexSum,
    ExpSumArgs,
    e_l,
    exp_sum_crt,
    exp_sum_direct,
    geometric_bound_ratios,
    geometric_sum,
    lemma_ratio,
    symmetric_range,
)
from .ntcore import (
    CrtPlan,
    Modulus,
    build_crt_plan,
    divisors,
    euler_phi,
    factor,
    is_prime,
    mod_inverse,
    pow_mod_signed,
    primes_in_range,
)

__all__ = [
    "AllZeroCoefficients",
    "ComplexSum",
    "CongruenceSystem",
    "CoprimalityViolation",
    "CountReport",
    "CrtPlan",
    "DEFAULT_SEED",
    "DEFAULT_WORK_BUDGET",
    "EvenModulus",
    "ExpSumArgs",
    "ExponentFit",
    "InsufficientData",
    "InvalidModulus",
    "LehmerLabError",
    "Modulus",
    "NotInvertible",
    "ParityReport",
    "PlanMismatch",
    "ProblemSpec",
    "RangeTooLarge",
    "ScanRecord",
    "ZeroExponent",
    "bound_ratio_sweep",
    "build_crt_plan",
    "congruence_system",
    "count_direct",
    "count_report",
    "count_via_congruence_system",
    "divisors",
    "e_l",
    "euler_phi",
    "exp_sum_crt",
    "exp_sum_direct",
    "factor",
    "fit_exponent",
    "geometric_bound_ratios",
    "geometric_sum",
    "is_prime",
    "lemma_ratio",
    "lemma_ratio_sweep",
    "main_term",
    "mod_inverse",
    "orthogonality_check",
    "parity_report",
    "parity_scan",
    "pow_mod_signed",
    "primes_in_range",
    "scan_family",
    "symmetric_range",
    "u_bounds",
]
