"""Exact higher derivatives of H and S, plus a Richardson finite-difference oracle.

Differentiating the basis recurrence under the entropy sum gives, for order
``j + 1 >= 1``::

    H^(j+1)(x) = n L^(j)(x) + n (n+c)(n+2c)...(n+jc) sum_k p_{n+(j+1)c,k}(x) D^j g(k)

with ``L(x) = log((1+cx)/x)``, ``g(k) = log((k+1)/(n+ck))`` and ``D`` the
forward difference in ``k``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np

from .basis import (
    FamilyParams,
    SeriesValue,
    TruncationPolicy,
    linear_envelope_tail,
    log_basis_array,
    truncated_log_terms,
)
from .entropies import shannon
from .errors import DomainViolation, OrderTooHigh, StencilOutsideDomain

DEFAULT_MAX_ORDER = 10
_EPS = np.finfo(float).eps


def log_ratio_derivative(c: float, x: float, j: int) -> float:
    """j-th derivative of log((1 + c x)/x)."""
    if j == 0:
        return math.log1p(c * x) - math.log(x)
    sign = -1.0 if j % 2 == 0 else 1.0
    return sign * math.factorial(j - 1) * ((c / (1.0 + c * x)) ** j - x ** (-j))


def g_differences(p: FamilyParams, count: int, j: int) -> np.ndarray:
    """D^j g(k) for k = 0..count-1, where g(k) = log((k+1)/(n+ck))."""
    n, c = p.n, p.c
    if j == 0:
        k = np.arange(count, dtype=float)
        return np.log(k + 1.0) - np.log(n + c * k)
    # first differences in log1p form: no cancellation before the remaining j-1 passes
    k = np.arange(count + j - 1, dtype=float)
    d1 = np.log1p(1.0 / (k + 1.0)) - np.log1p(c / (n + c * k))
    return np.diff(d1, j - 1)[:count]


def g_envelope(p: FamilyParams, j: int) -> tuple[float, float]:
    # bounds on |D^j g(k)|, from the mean value theorem for j >= 1
    if j == 0:
        a = abs(math.log(p.n)) + (abs(math.log(p.c)) if p.c > 0 else 0.0)
        return a, (1.0 if p.c == 0 else 0.0)
    ratio = p.c / p.n if p.c > 0 else 0.0
    return math.factorial(j - 1) * (1.0 + ratio**j), 0.0


def shannon_derivative_series(p: FamilyParams, x: float, order: int,
                              policy: TruncationPolicy | None = None) -> SeriesValue:
    """Order-``order`` derivative of H with a certified truncation bound."""
    policy = policy or TruncationPolicy()
    p.check_domain(x, interior=True)
    j = order - 1
    closed = p.n * log_ratio_derivative(p.c, x, j)
    prefactor = p.n * math.prod(p.n + i * p.c for i in range(1, j + 1))
    if p.c < 0 and j >= p.l:
        # the product contains n + l c = 0
        return SeriesValue(closed, 0.0, 0)
    q = p.shifted(j + 1)
    scaled = TruncationPolicy(policy.abs_tol / abs(prefactor), policy.max_terms)
    logp, tail = truncated_log_terms(q, x, scaled, linear_envelope_tail(*g_envelope(p, j)))
    dg = g_differences(p, logp.size, j)
    terms = np.where(np.isneginf(logp), 0.0, np.exp(logp) * dg)
    value = closed + prefactor * math.fsum(terms)
    return SeriesValue(value, abs(prefactor) * tail, int(logp.size))


def shannon_prime(p: FamilyParams, x: float, policy: TruncationPolicy | None = None) -> float:
    return shannon_derivative_series(p, x, 1, policy).value


def shannon_derivative_exact(p: FamilyParams, x: float, order: int,
                             policy: TruncationPolicy | None = None,
                             max_order: int = DEFAULT_MAX_ORDER) -> float:
    if not 1 <= order <= max_order:
        raise OrderTooHigh(f"order must be in 1..{max_order}, got {order}")
    return shannon_derivative_series(p, x, order, policy).value


def sum_squares_prime(p: FamilyParams, x: float, policy: TruncationPolicy | None = None) -> float:
    """S'(x) = 2n sum_k p_{n,k} (p_{n+c,k-1} - p_{n+c,k})."""
    policy = policy or TruncationPolicy()
    p.check_domain(x, interior=True)
    scale = 2.0 * p.n
    scaled = TruncationPolicy(policy.abs_tol / scale, policy.max_terms)
    logp, _ = truncated_log_terms(p, x, scaled, linear_envelope_tail(1.0, 0.0))
    k = np.arange(logp.size)
    q = np.exp(log_basis_array(p.shifted(1), x, k))
    diff = np.concatenate(([0.0], q[:-1])) - q
    return scale * math.fsum(np.exp(logp) * diff)


# -- finite differences ---------------------------------------------------

class FDEstimate(NamedTuple):
    value: float
    error: float


def _central(f, x, order, h):
    offsets = order / 2.0 - np.arange(order + 1)
    weights = [(-1) ** i * math.comb(order, i) for i in range(order + 1)]
    return math.fsum(w * f(x + o * h) for w, o in zip(weights, offsets)) / h**order


def finite_difference_derivative(f: Callable[[float], float], x: float, order: int,
                                 h: float | None = None,
                                 domain: tuple[float, float] | None = None) -> FDEstimate:
    """Central difference of the given order, Richardson-extrapolated over h and h/2.

    When ``h`` is omitted it is chosen from the order and the distance to the
    ``domain`` ends.  An explicit ``h`` whose stencil leaves ``domain`` raises
    :class:`StencilOutsideDomain`.
    """
    if order < 1:
        raise ValueError("order must be positive")
    lo, hi = domain if domain is not None else (-math.inf, math.inf)
    room = min(x - lo, hi - x)
    if room <= 0:
        raise StencilOutsideDomain(f"x={x} is not inside {domain}")
    if h is None:
        h = _EPS ** (1.0 / (order + 5)) * min(max(1.0, abs(x)), room)
    if order * h / 2.0 >= room:
        raise StencilOutsideDomain(f"stencil of width {order * h} at x={x} leaves {domain}")
    coarse = _central(f, x, order, h)
    fine = _central(f, x, order, h / 2.0)
    return FDEstimate((4.0 * fine - coarse) / 3.0, abs(fine - coarse) / 3.0)


@dataclass(frozen=True)
class DerivativeRequest:
    params: FamilyParams
    x: float
    order: int
    method: str = "exact"
    max_order: int = DEFAULT_MAX_ORDER

    def __post_init__(self):
        if self.method not in ("exact", "finite_difference"):
            raise ValueError(f"unknown method {self.method!r}")
        if not 1 <= self.order <= self.max_order:
            raise OrderTooHigh(f"order must be in 1..{self.max_order}, got {self.order}")
        if not self.params.is_interior(self.x):
            raise DomainViolation(f"x={self.x} must lie strictly inside the domain")


def evaluate_derivative(req: DerivativeRequest, policy: TruncationPolicy | None = None) -> float:
    if req.method == "exact":
        return shannon_derivative_exact(req.params, req.x, req.order, policy, req.max_order)
    policy = policy or TruncationPolicy(abs_tol=1e-16)
    p = req.params
    return finite_difference_derivative(
        lambda t: shannon(p, t, policy).value, req.x, req.order,
        domain=(0.0, p.upper)).value
