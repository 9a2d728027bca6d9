"""Integral representations of log l!, the entropies and their derivatives.

These are evaluated by adaptive quadrature and serve as oracles independent of
the series code paths.  Most integrands carry the kernel ``-t/log(1-t)``,
which lies in (0, 1) on the open unit interval, tends to 1 at ``t = 0`` and to
0 at ``t = 1``.
"""

from __future__ import annotations

import math

import numpy as np

from .basis import FamilyParams
from .errors import DomainViolation, ParameterError
from .quadrature import QuadratureResult, QuadratureSpec, integrate

# below this t the binomial integrand switches to its expanded polynomial form
_POLY_SWITCH = 0.25


def kernel(t: np.ndarray, spec: QuadratureSpec | None = None) -> np.ndarray:
    """-t / log(1 - t) with its limits 1 at t = 0 and 0 at t = 1."""
    spec = spec or QuadratureSpec()
    t = np.asarray(t, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = -t / np.log1p(-t)
    if spec.limit_at_zero:
        out = np.where(t < spec.guard_band, 1.0 - t / 2.0 - t * t / 12.0, out)
    if spec.zero_at_one:
        out = np.where(t >= 1.0, 0.0, out)
    return out


def _with_tail(res: QuadratureResult, offset: float, scale: float = 1.0,
               extra_error: float = 0.0) -> QuadratureResult:
    return QuadratureResult(offset + scale * res.value,
                            abs(scale) * res.error_estimate + extra_error,
                            res.subdivisions_used)


def _xlogx(v: float) -> float:
    return v * math.log(v) if v > 0 else 0.0


def log_factorial_integral(l: int, form: str = "logarithmic",
                           spec: QuadratureSpec | None = None) -> QuadratureResult:
    """log(l!) from its exponential ([0, inf)) or logarithmic ([0, 1]) integral."""
    spec = spec or QuadratureSpec()
    if l < 1:
        raise ValueError("l must be a positive integer")
    i = np.arange(1, l, dtype=float)[:, None]
    if l == 1:
        return QuadratureResult(0.0, 0.0, 0)

    if form == "exponential":
        # l - (1 - e^{-ls})/(1 - e^{-s}) = sum_{i<l} (1 - e^{-is})
        def integrand(s):
            s = np.asarray(s, dtype=float)[None, :]
            with np.errstate(divide="ignore", invalid="ignore"):
                body = (-np.expm1(-i * s) / s).sum(axis=0)
            if spec.limit_at_zero:
                limit = (i * (1.0 - i * s / 2.0)).sum(axis=0)
                body = np.where(s[0] < spec.guard_band, limit, body)
            return body * np.exp(-s[0])

        s_max = 40.0 + math.log(l)
        tail = l * math.exp(-s_max) / s_max
        return _with_tail(integrate(integrand, 0.0, s_max, spec), 0.0, extra_error=tail)

    if form == "logarithmic":
        # (1 - (1-t)^l)/t - l = sum_{0<i<l} ((1-t)^i - 1)
        def integrand(t):
            t = np.asarray(t, dtype=float)
            with np.errstate(divide="ignore", invalid="ignore"):
                u = np.log1p(-t)[None, :]
                body = (np.expm1(i * u) / u).sum(axis=0)
            if spec.limit_at_zero:
                body = np.where(t < spec.guard_band, (i * (1.0 - i * t / 2.0)).sum(axis=0), body)
            if spec.zero_at_one:
                body = np.where(t >= 1.0, 0.0, body)
            return body

        return integrate(integrand, 0.0, 1.0, spec)
    raise ValueError(f"unknown form {form!r}")


def _binomial_numerator_over_t2(l: int, y: float, t: np.ndarray) -> np.ndarray:
    """((1-yt)^l + (1-(1-y)t)^l - 1 - (1-t)^l) / t^2, stable near t = 0."""
    i = np.arange(2, l + 1)
    coeffs = np.array([math.comb(l, int(m)) * (-1) ** int(m) for m in i], dtype=float)
    coeffs *= y**i + (1.0 - y) ** i - 1.0
    poly = np.polynomial.polynomial.polyval(t, coeffs) if coeffs.size else np.zeros_like(t)
    with np.errstate(divide="ignore", invalid="ignore"):
        raw = ((1.0 - y * t) ** l + (1.0 - (1.0 - y) * t) ** l - 1.0 - (1.0 - t) ** l) / (t * t)
    return np.where(t < _POLY_SWITCH, poly, raw)


def shannon_binomial_integral(p: FamilyParams, x: float,
                              spec: QuadratureSpec | None = None) -> QuadratureResult:
    """H_{n,c}(x) for c < 0 through its [0, 1] integral form."""
    spec = spec or QuadratureSpec()
    if not p.c < 0:
        raise ParameterError("binomial representation needs c < 0")
    if not p.is_interior(x):
        raise DomainViolation(f"x={x} must lie in (0, {p.upper})")
    l, y = p.l, -p.c * x
    closed = -l * (_xlogx(y) + _xlogx(1.0 - y))

    def integrand(t):
        t = np.asarray(t, dtype=float)
        return kernel(t, spec) * _binomial_numerator_over_t2(l, y, t)

    return _with_tail(integrate(integrand, 0.0, 1.0, spec), closed)


def binomial_even_derivative_integral(p: FamilyParams, k: int, x: float,
                                      spec: QuadratureSpec | None = None) -> QuadratureResult:
    """H^(2k+2)_{n,c}(x) for c < 0 from its kernel-weighted integral."""
    spec = spec or QuadratureSpec()
    if not p.c < 0:
        raise ParameterError("binomial representation needs c < 0")
    if not p.is_interior(x):
        raise DomainViolation(f"x={x} must lie in (0, {p.upper})")
    c, l = p.c, p.l
    odd = 2 * k + 1
    closed = c * l * math.factorial(2 * k) * (x**-odd - (c / (1.0 + c * x)) ** odd)
    falling = math.prod(l - i for i in range(2 * k + 2))
    if falling == 0:
        return QuadratureResult(closed, 0.0, 0)
    power = l - 2 * k - 2

    def integrand(t):
        t = np.asarray(t, dtype=float)
        inner = (1.0 + c * x * t) ** power + (1.0 - t - c * x * t) ** power
        return kernel(t, spec) * inner * t ** (2 * k)

    return _with_tail(integrate(integrand, 0.0, 1.0, spec), closed, falling * c ** (2 * k + 2))


def _expm1_minus_identity(z: np.ndarray) -> np.ndarray:
    """e^z - 1 - z without cancellation for small |z|."""
    z = np.asarray(z, dtype=float)
    series = np.zeros_like(z)
    term = z.copy()
    for m in range(2, 12):
        term = term * z / m
        series += term
    return np.where(np.abs(z) < 0.1, series, np.expm1(z) - z)


def shannon_poisson_integral(x: float, spec: QuadratureSpec | None = None) -> QuadratureResult:
    """H_{1,0}(x), the Poisson entropy at mean x; H_{n,0}(y) = H_{1,0}(n y)."""
    spec = spec or QuadratureSpec()
    if not x > 0:
        raise DomainViolation("x must be positive")

    def integrand(s):
        s = np.asarray(s, dtype=float)
        with np.errstate(divide="ignore", invalid="ignore"):
            # (x - (1 - e^{-sx})/s) / log(1-s), rewritten as -(e2(-sx)/s^2) * kernel(s)
            out = -(_expm1_minus_identity(-s * x) / (s * s)) * kernel(s, spec)
        if spec.limit_at_zero:
            out = np.where(s < spec.guard_band, -x * x / 2.0, out)
        return out

    res = integrate(integrand, 0.0, 1.0, spec)
    return _with_tail(res, x - x * math.log(x), -1.0)


def poisson_derivative_integral(k: int, x: float, spec: QuadratureSpec | None = None) -> QuadratureResult:
    """H_{1,0}^(k+1)(x) for k >= 1."""
    spec = spec or QuadratureSpec()
    if k < 1:
        raise ValueError("k must be at least 1")
    if not x > 0:
        raise DomainViolation("x must be positive")

    def integrand(s):
        s = np.asarray(s, dtype=float)
        # s^k / log(1-s) = -s^(k-1) * kernel(s)
        return -(s ** (k - 1)) * kernel(s, spec) * np.exp(-s * x)

    sign = -1.0 if k % 2 else 1.0
    res = integrate(integrand, 0.0, 1.0, spec)
    return _with_tail(res, sign * math.factorial(k - 1) / x**k, sign)


def shannon_negbin_integral(n: float, x: float, spec: QuadratureSpec | None = None) -> QuadratureResult:
    """H_{n,1}(x); for general c > 0 use H_{m,c}(y) = H_{m/c,1}(c y)."""
    spec = spec or QuadratureSpec()
    if not n > 1:
        raise ParameterError("the c = 1 family needs n > 1")
    if not x > 0:
        raise DomainViolation("x must be positive")

    def integrand(t):
        t = np.asarray(t, dtype=float)
        with np.errstate(divide="ignore", invalid="ignore"):
            u = np.log1p(-t)
            left = -np.expm1((n - 1.0) * u) / u
            right = -np.expm1(-n * np.log1p(t * x)) / t
            out = left * right
        if spec.limit_at_zero:
            out = np.where(t < spec.guard_band, -(n - 1.0) * n * x, out)
        if spec.zero_at_one:
            out = np.where(t >= 1.0, 0.0, out)
        return out

    closed = n * ((1.0 + x) * math.log1p(x) - x * math.log(x))
    return _with_tail(integrate(integrand, 0.0, 1.0, spec), closed)


def negbin_derivative_integral(n: float, j: int, x: float,
                               spec: QuadratureSpec | None = None) -> QuadratureResult:
    """H_{n,1}^(j+1)(x) for j >= 1."""
    spec = spec or QuadratureSpec()
    if j < 1:
        raise ValueError("j must be at least 1")
    if not n > 1:
        raise ParameterError("the c = 1 family needs n > 1")
    if not x > 0:
        raise DomainViolation("x must be positive")

    def integrand(t):
        t = np.asarray(t, dtype=float)
        body = -np.expm1((n - 1.0) * np.log1p(-np.minimum(t, 1.0)))
        return kernel(t, spec) * body * (1.0 + x * t) ** (-n - j - 1) * t ** (j - 1)

    sign = 1.0 if j % 2 else -1.0
    closed = sign * math.factorial(j - 1) * ((x + 1.0) ** -j - x**-j)
    rising = math.prod(n + i for i in range(1, j + 1))
    res = integrate(integrand, 0.0, 1.0, spec)
    return _with_tail(res, n * closed, n * sign * rising)


def beta_identity_closed_form(j: int, n: float, x: float) -> float:
    return math.factorial(j - 1) / math.prod(n + i for i in range(1, j + 1)) / (x + 1.0) ** j


def beta_identity_fixture(j: int, n: float, x: float,
                          spec: QuadratureSpec | None = None) -> QuadratureResult:
    """Quadrature of t^(j-1) (1-t)^n / (1+xt)^(n+j+1) over [0, 1].

    The exact value is :func:`beta_identity_closed_form`; comparing the two
    exercises the quadrature engine on its own.
    """
    if j < 1 or not n > 0 or x < 0:
        raise ValueError("need j >= 1, n > 0, x >= 0")

    def integrand(t):
        t = np.asarray(t, dtype=float)
        return t ** (j - 1) * (1.0 - t) ** n / (1.0 + x * t) ** (n + j + 1)

    return integrate(integrand, 0.0, 1.0, spec)
