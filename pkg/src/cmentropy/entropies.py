"""Shannon entropy, sum of squares, and order-2 Renyi/Tsallis entropies of the family."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .basis import FamilyParams, TruncationPolicy, truncated_log_terms
from .errors import DegenerateLog

_TWO_OVER_E = 2.0 / math.e


@dataclass(frozen=True)
class EntropyValue:
    value: float
    error_bound: float
    terms_used: int


def _shannon_tail(pk, r, k):
    # -p log p <= (2/e) sqrt(p) on (0, 1], and sqrt(p_{K+m}) <= sqrt(p_K) r^(m/2)
    s = np.sqrt(r)
    return _TWO_OVER_E * np.sqrt(pk) * s / (1.0 - s)


def _squares_tail(pk, r, k):
    r2 = r * r
    return pk * pk * r2 / (1.0 - r2)


def shannon(p: FamilyParams, x: float, policy: TruncationPolicy | None = None) -> EntropyValue:
    """Shannon entropy H_{n,c}(x) in nats, with the convention 0 log 0 = 0."""
    policy = policy or TruncationPolicy()
    p.check_domain(x)
    logp, tail = truncated_log_terms(p, x, policy, _shannon_tail)
    finite = np.isfinite(logp)
    terms = -np.exp(logp[finite]) * logp[finite]
    return EntropyValue(math.fsum(terms), tail, int(logp.size))


def sum_squares(p: FamilyParams, x: float, policy: TruncationPolicy | None = None) -> EntropyValue:
    """S_{n,c}(x), the probability that two independent draws coincide."""
    policy = policy or TruncationPolicy()
    p.check_domain(x)
    logp, tail = truncated_log_terms(p, x, policy, _squares_tail)
    return EntropyValue(math.fsum(np.exp(2.0 * logp)), tail, int(logp.size))


def renyi2(p: FamilyParams, x: float, policy: TruncationPolicy | None = None) -> EntropyValue:
    """R = -log S with first-order error propagation."""
    s = sum_squares(p, x, policy)
    low = s.value - s.error_bound
    if low <= 0:
        raise DegenerateLog(f"S interval [{low}, ...] touches zero at x={x}")
    return EntropyValue(-math.log(s.value), s.error_bound / low, s.terms_used)


def tsallis2(p: FamilyParams, x: float, policy: TruncationPolicy | None = None) -> EntropyValue:
    s = sum_squares(p, x, policy)
    return EntropyValue(1.0 - s.value, s.error_bound, s.terms_used)


def bessel_i0_oracle(z: float) -> float:
    """Modified Bessel I0 by its power series; accurate to ~1e-14 relative for z <= 50."""
    if z < 0:
        raise ValueError("z must be non-negative")
    q = 0.25 * z * z
    term = 1.0
    terms = [term]
    m = 0
    while True:
        m += 1
        term *= q / (m * m)
        terms.append(term)
        if term < 1e-18 * terms[0] and term < 1e-18 * math.fsum(terms):
            return math.fsum(terms)
