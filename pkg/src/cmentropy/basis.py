"""The c-family of discrete distributions and certified series sums over it.

For ``c < 0`` the family is a binomial law on ``{0, ..., l}`` with ``l = -n/c``,
for ``c = 0`` it is Poisson with mean ``n x`` and for ``c > 0`` it is negative
binomial.  All basis values are formed in log-space and exponentiated last.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.special import gammaln, xlog1py, xlogy

from .errors import (
    DomainViolation,
    MaxTermsExceeded,
    NLeqC,
    NonIntegerL,
    NonPositiveN,
    ParameterError,
)

# Above this shape value the rising factorial is summed as log1p(i/a) to avoid
# cancelling two huge log-gamma values (c -> 0+ regime).
_LARGE_SHAPE = 1.0e3
_MAX_EXACT_L = 2**53


@dataclass(frozen=True)
class FamilyParams:
    """A (c, n) pair of the family.

    ``l`` is the support size minus one when ``c < 0`` and ``None`` otherwise.
    Construct through :func:`validate_params` for user input; direct
    construction only checks that the basis is a well-defined distribution,
    which also admits the degenerate shifted families (``l = 0``) used by the
    derivative recurrences.
    """

    c: float
    n: float
    l: int | None = None

    def __post_init__(self):
        if self.c < 0:
            l = self.l
            if l is None:
                l = _integer_support(self.c, self.n)
                object.__setattr__(self, "l", l)
            if l < 0 or not math.isclose(-self.n / self.c, l, rel_tol=1e-9, abs_tol=1e-12):
                raise ParameterError(f"inconsistent support size l={l} for c={self.c}, n={self.n}")
        else:
            if self.l is not None:
                raise ParameterError("support size only applies when c < 0")
            if not self.n > 0:
                raise NonPositiveN(f"n must be positive, got {self.n}")

    @property
    def bounded(self) -> bool:
        return self.c < 0

    @property
    def upper(self) -> float:
        """Right end of the domain I_c (``inf`` when c >= 0)."""
        return -1.0 / self.c if self.c < 0 else math.inf

    @property
    def midpoint(self) -> float:
        return -0.5 / self.c

    def contains(self, x: float) -> bool:
        return 0.0 <= x <= self.upper

    def is_interior(self, x: float) -> bool:
        return 0.0 < x < self.upper

    def check_domain(self, x: float, interior: bool = False) -> None:
        ok = self.is_interior(x) if interior else self.contains(x)
        if not ok:
            where = "interior of" if interior else ""
            raise DomainViolation(f"x={x} is outside the {where} domain [0, {self.upper}]")

    def shifted(self, m: int = 1) -> FamilyParams:
        """Params ``(n + m c, c)``, the family appearing after ``m`` derivative steps."""
        if self.c < 0:
            if self.l - m < 0:
                raise ParameterError(f"cannot shift support l={self.l} by {m}")
            return FamilyParams(self.c, -self.c * (self.l - m), self.l - m)
        return FamilyParams(self.c, self.n + m * self.c)


def _integer_support(c: float, n: float) -> int:
    l = -n / c
    if not math.isfinite(l) or l > _MAX_EXACT_L:
        raise NonIntegerL(f"-n/c = {l} is not a representable natural number")
    l_int = round(l)
    if l_int < 0 or abs(l - l_int) > 1e-9 * max(1.0, l):
        raise NonIntegerL(f"-n/c = {l:g} is not a natural number (c={c}, n={n})")
    return int(l_int)


def validate_params(c: float, n: float) -> FamilyParams:
    """Check the family hypotheses and return the corresponding params.

    Raises
    ------
    NonPositiveN
        ``n <= 0``.
    NLeqC
        ``c >= 0`` and ``n <= c``.
    NonIntegerL
        ``c < 0`` and ``-n/c`` is not a positive integer.
    """
    c = float(c)
    n = float(n)
    if not (math.isfinite(c) and math.isfinite(n)):
        raise ParameterError("c and n must be finite")
    if n <= 0:
        raise NonPositiveN(f"n must be positive, got {n}")
    if c >= 0:
        if n <= c:
            raise NLeqC(f"n must exceed c when c >= 0 (c={c}, n={n})")
        return FamilyParams(c, n)
    l = _integer_support(c, n)
    if l < 1:
        raise NonIntegerL(f"-n/c must be at least 1, got {l}")
    return FamilyParams(c, n, l)


@dataclass(frozen=True)
class TruncationPolicy:
    abs_tol: float = 1e-12
    max_terms: int = 100_000

    def __post_init__(self):
        if not self.abs_tol > 0:
            raise ValueError("abs_tol must be positive")
        if self.max_terms < 1:
            raise ValueError("max_terms must be at least 1")


@dataclass(frozen=True)
class SeriesValue:
    value: float
    tail_bound: float
    terms_used: int


def _log_rising(a: float, k: np.ndarray) -> np.ndarray:
    """log of a (a+1) ... (a+k-1) for integer array ``k``."""
    if a < _LARGE_SHAPE:
        return gammaln(a + k) - gammaln(a)
    kmax = int(k.max()) if k.size else 0
    partial = np.concatenate(([0.0], np.cumsum(np.log1p(np.arange(kmax) / a))))
    return k * math.log(a) + partial[k.astype(int)]


def log_basis_array(p: FamilyParams, x: float, k: np.ndarray) -> np.ndarray:
    """Vectorised log p_{n,k}(x) over an integer array ``k`` (no domain check)."""
    k = np.asarray(k)
    kf = k.astype(float)
    c, n = p.c, p.n
    if c < 0:
        l = p.l
        inside = k <= l
        kc = np.where(inside, kf, 0.0)
        y = -c * x
        out = (gammaln(l + 1.0) - gammaln(kc + 1.0) - gammaln(l - kc + 1.0)
               + xlogy(kc, y) + xlog1py(l - kc, -y))
        return np.where(inside, out, -np.inf)
    if c == 0:
        return xlogy(kf, n * x) - n * x - gammaln(kf + 1.0)
    a = n / c
    cx = c * x
    # k log(cx) + k log(a) folded into k log(n x) keeps the c -> 0 limit exact
    rising_excess = _log_rising(a, k) - kf * math.log(a)
    return (rising_excess + xlogy(kf, n * x) - gammaln(kf + 1.0)
            - n * math.log1p(cx) / c - kf * math.log1p(cx))


def log_basis(p: FamilyParams, k: int, x: float) -> float:
    """Natural log of p_{n,k}^{[c]}(x); ``-inf`` where the basis vanishes.

    For ``c < 0`` and ``k > l`` the value is ``-inf`` rather than an error.
    """
    p.check_domain(x)
    if k < 0:
        raise ValueError("k must be non-negative")
    return float(log_basis_array(p, x, np.array([k]))[0])


def basis(p: FamilyParams, k: int, x: float) -> float:
    return math.exp(log_basis(p, k, x))


def basis_derivative(p: FamilyParams, k: int, x: float) -> float:
    """d/dx p_{n,k}(x) through the recurrence n (p_{n+c,k-1} - p_{n+c,k})."""
    p.check_domain(x, interior=True)
    q = p.shifted(1)
    lower = basis(q, k - 1, x) if k >= 1 else 0.0
    return p.n * (lower - basis(q, k, x))


# -- certified truncation -------------------------------------------------

TailFn = Callable[[np.ndarray, np.ndarray, np.ndarray], np.ndarray]


def ratio_bound(p: FamilyParams, x: float, k: np.ndarray) -> np.ndarray:
    """sup_{k' >= k} p_{k'+1}/p_{k'} for unbounded families."""
    kf = np.asarray(k, dtype=float)
    r = (p.n + p.c * kf) * x / ((kf + 1.0) * (1.0 + p.c * x))
    if p.c > 0:
        # the ratio is monotone in k with limit cx/(1+cx)
        r = np.maximum(r, p.c * x / (1.0 + p.c * x))
    return r


def linear_envelope_tail(a: float, b: float) -> TailFn:
    """Tail bound of sum_{k>K} p_k |f(k)| when |f(k)| <= a + b k."""

    def tail(pk, r, k):
        q = r / (1.0 - r)
        return pk * ((a + b * (k + 1.0)) * q + b * q * q)

    return tail


def _log_terms_by_ratio(p: FamilyParams, x: float, count: int) -> np.ndarray | None:
    """log p_k for k < count by forward products of term ratios from p_0.

    Rounding error grows like sqrt(k) eps instead of the eps * |log-gamma|
    of the direct formula, which matters once the sums are differenced to
    high order.  Returns None when p_0 would underflow.
    """
    c, n = p.c, p.n
    log_p0 = -n * x if c == 0 else -n * math.log1p(c * x) / c
    if log_p0 < -600.0:
        return None
    kf = np.arange(count - 1, dtype=float)
    ratios = (n + c * kf) * x / ((kf + 1.0) * (1.0 + c * x))
    terms = math.exp(log_p0) * np.cumprod(np.concatenate(([1.0], ratios)))
    with np.errstate(divide="ignore"):
        return np.log(terms)


def truncated_log_terms(p: FamilyParams, x: float, policy: TruncationPolicy,
                        tail: TailFn) -> tuple[np.ndarray, float]:
    """log p_k for k = 0..K together with a certified bound on the omitted tail.

    ``tail(p_K, r_K, K)`` must bound the remainder of the caller's series given
    that every later term ratio is at most ``r_K < 1``.
    """
    if p.c < 0:
        return log_basis_array(p, x, np.arange(p.l + 1)), 0.0
    if x == 0:
        return np.array([0.0]), 0.0
    mean = p.n * x
    spread = math.sqrt(mean * (1.0 + p.c * x))
    kmax = int(mean + 12.0 * spread + 32)
    while True:
        kmax = min(kmax, policy.max_terms)
        k = np.arange(kmax)
        logp = _log_terms_by_ratio(p, x, kmax)
        if logp is None:
            logp = log_basis_array(p, x, k)
        r = ratio_bound(p, x, k)
        with np.errstate(divide="ignore", invalid="ignore"):
            bound = np.where(r < 1.0, tail(np.exp(logp), r, k.astype(float)), np.inf)
        ok = np.flatnonzero(bound <= policy.abs_tol)
        if ok.size:
            K = int(ok[0])
            return logp[: K + 1], float(bound[K])
        if kmax >= policy.max_terms:
            raise MaxTermsExceeded(
                f"tail bound {policy.abs_tol:g} not reached within {policy.max_terms} terms "
                f"(c={p.c}, n={p.n}, x={x})")
        kmax *= 2


def expectation(p: FamilyParams, x: float, f: Callable[[np.ndarray], np.ndarray],
                policy: TruncationPolicy | None = None,
                envelope: tuple[float, float] = (1.0, 0.0)) -> SeriesValue:
    """Sum of p_{n,k}(x) f(k) over the support.

    ``f`` is called once with an integer array of indices.  For unbounded
    support the caller guarantees ``|f(k)| <= envelope[0] + envelope[1] * k``;
    the default envelope covers functions bounded by one.
    """
    policy = policy or TruncationPolicy()
    p.check_domain(x)
    logp, tail = truncated_log_terms(p, x, policy, linear_envelope_tail(*envelope))
    k = np.arange(logp.size)
    fk = np.asarray(f(k), dtype=float)
    terms = np.exp(logp) * fk
    # 0 * f(k) stays 0 even where f is infinite on a null atom
    terms = np.where(np.isneginf(logp), 0.0, terms)
    return SeriesValue(math.fsum(terms), tail, int(logp.size))
