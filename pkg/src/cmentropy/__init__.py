"""Entropies of the c-family of discrete distributions (binomial, Poisson,
negative binomial) with certified series sums, exact derivatives, integral
representations and sign-pattern checks."""

__version__ = "0.1.0"

from .basis import (
    FamilyParams,
    SeriesValue,
    TruncationPolicy,
    basis_derivative,
    expectation,
    log_basis,
    validate_params,
)
from .derivatives import (
    DerivativeRequest,
    evaluate_derivative,
    finite_difference_derivative,
    shannon_derivative_exact,
    shannon_prime,
    sum_squares_prime,
)
from .entropies import EntropyValue, renyi2, shannon, sum_squares, tsallis2
from .errors import (
    DegenerateLog,
    DomainViolation,
    EntropyError,
    GridTooCoarse,
    MaxTermsExceeded,
    NLeqC,
    NonIntegerL,
    NonPositiveN,
    OrderTooHigh,
    ParameterError,
    StencilOutsideDomain,
    ToleranceNotReached,
)
from .quadrature import QuadratureResult, QuadratureSpec, integrate
from .suites import SUITES, run_all, run_suite

import types as _types

__all__ = sorted(name for name, obj in globals().items()
                 if not name.startswith("_") and not isinstance(obj, _types.ModuleType))
