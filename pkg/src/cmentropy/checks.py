"""Numerical checks of sign patterns, complete monotonicity, convexity and the
log-S sandwich, each returning a :class:`CheckReport`.

Every finding stores a signed margin: non-negative means the asserted
inequality holds.  Sign checks normalise the margin by the largest magnitude
of the checked quantity over the grid, so one relative tolerance applies
across derivative orders whose sizes differ by many decades.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

from .basis import FamilyParams, TruncationPolicy, expectation
from .derivatives import g_envelope, shannon_derivative_exact, shannon_prime
from .entropies import renyi2, sum_squares, tsallis2
from .errors import GridTooCoarse, ParameterError

# tails far below double-precision noise so differencing sees no truncation jumps
CHECK_POLICY = TruncationPolicy(abs_tol=1e-22)


@dataclass(frozen=True)
class Finding:
    check: str
    x: float
    order: int
    margin: float
    tolerance: float

    @property
    def ok(self) -> bool:
        return self.margin >= -self.tolerance

    def to_dict(self, suite: str) -> dict:
        return {"suite": suite, "check": self.check, "x": self.x, "order": self.order,
                "margin": self.margin, "tolerance": self.tolerance, "ok": self.ok}


@dataclass(frozen=True)
class CheckReport:
    """Outcome of one suite.

    ``passed`` requires every finding to be within its own tolerance; when all
    findings share one tolerance this is ``worst_margin >= -tolerance``.
    Report-only suites (open conjectures) carry their findings as data and
    are never treated as failures by callers.
    """

    suite: str
    grid: str
    findings: tuple[Finding, ...] = field(default_factory=tuple)
    report_only: bool = False

    @property
    def worst(self) -> Finding | None:
        return min(self.findings, key=lambda f: f.margin, default=None)

    @property
    def worst_margin(self) -> float:
        return self.worst.margin if self.findings else math.inf

    @property
    def passed(self) -> bool:
        return all(f.ok for f in self.findings)

    @property
    def violations(self) -> list[Finding]:
        return [f for f in self.findings if not f.ok]

    @classmethod
    def merge(cls, suite: str, reports: Sequence[CheckReport]) -> CheckReport:
        findings = []
        for r in reports:
            findings.extend(
                Finding(f"{r.suite}/{f.check}", f.x, f.order, f.margin, f.tolerance)
                for f in r.findings)
        grid = "; ".join(f"{r.suite}: {r.grid}" for r in reports)
        return cls(suite, grid, tuple(findings), all(r.report_only for r in reports) and bool(reports))

    def summary(self) -> dict:
        worst = self.worst
        return {
            "suite": self.suite,
            "findings": len(self.findings),
            "violations": len(self.violations),
            "worst_margin": None if worst is None else worst.margin,
            "worst_x": None if worst is None else worst.x,
            "worst_order": None if worst is None else worst.order,
            "worst_check": None if worst is None else worst.check,
            "passed": self.passed,
            "report_only": self.report_only,
        }


def _scale(values: np.ndarray) -> float:
    s = float(np.max(np.abs(values))) if values.size else 0.0
    return s if s > 0 else 1.0


def _signed(check, xs, order, slack, tol, scale=None) -> list[Finding]:
    scale = _scale(slack) if scale is None else scale
    return [Finding(check, float(x), order, float(s) / scale, tol) for x, s in zip(xs, slack)]


def default_grid(p: FamilyParams, points: int | None = None) -> np.ndarray:
    """Interior equispaced grid for c < 0, geometric grid on [0.05, 20] otherwise."""
    if p.c < 0:
        m = (points or 99) + 1
        return p.upper * np.arange(1, m) / m
    return np.geomspace(0.05, 20.0, points or 60)


# -- complete monotonicity --------------------------------------------------

def cm_check(f: Callable[[float], float], interval: tuple[float, float], grid_points: int,
             h: float, max_order: int, tol: float, name: str = "cm") -> CheckReport:
    """Alternating forward-difference test of complete monotonicity.

    For every base point ``x`` of an equispaced grid on
    ``[a, b - max_order h]`` and every ``m <= max_order`` the margin is
    ``(-1)^m D_h^m f(x)`` divided by the largest ``|D_h^m f|`` on the grid.
    """
    a, b = interval
    if not h > 0:
        raise GridTooCoarse("step h must be positive")
    if b - a <= max_order * h or grid_points < 1:
        raise GridTooCoarse(f"interval {interval} cannot hold a {max_order}-step stencil of h={h}")
    base = np.linspace(a, b - max_order * h, grid_points)
    values = np.array([[f(x + i * h) for i in range(max_order + 1)] for x in base])
    findings = []
    diffs = values
    for m in range(max_order + 1):
        d = diffs[:, 0]
        findings += _signed("(-1)^m D^m f >= 0", base, m, (-1) ** m * d, tol, _scale(d))
        diffs = np.diff(diffs, axis=1)
    grid = f"[{a:g}, {b:g}] base points={grid_points} h={h:g} orders 0..{max_order}"
    return CheckReport(name, grid, tuple(findings))


def shannon_prime_cm_check(p: FamilyParams, interval=(0.1, 10.0), hs=(0.05, 0.1),
                           grid_points: int = 100, max_order: int = 8, tol: float = 1e-7,
                           policy: TruncationPolicy = CHECK_POLICY) -> CheckReport:
    """Complete monotonicity of H' for c >= 0."""
    if p.c < 0:
        raise ParameterError("H' is completely monotonic only for c >= 0")
    reports = [cm_check(lambda t: shannon_prime(p, t, policy), interval, grid_points, h,
                        max_order, tol, name=f"H'-cm(h={h:g})") for h in hs]
    return CheckReport.merge(f"H'-cm c={p.c:g} n={p.n:g}", reports)


# -- Shannon derivatives for c < 0 -----------------------------------------

def theorem1_sign_check(p: FamilyParams, grid: Iterable[float] | None = None, max_k: int = 3,
                        tol: float = 1e-7, midpoint_tol: float = 1e-8,
                        policy: TruncationPolicy = CHECK_POLICY) -> CheckReport:
    """Sign pattern of H^(m) for c < 0, m = 1..2 max_k + 2.

    Even orders must be non-positive on the open interval.  Odd orders must be
    non-negative left of -1/(2c), non-positive right of it, and vanish there.
    """
    if not p.c < 0:
        raise ParameterError("this check needs c < 0")
    xs = default_grid(p) if grid is None else np.asarray(list(grid), dtype=float)
    mid = p.midpoint
    findings = []
    for m in range(1, 2 * max_k + 3):
        v = np.array([shannon_derivative_exact(p, x, m, policy) for x in xs])
        scale = _scale(v)
        if m % 2 == 0:
            findings += _signed(f"H^({m})<=0", xs, m, -v, tol, scale)
            continue
        side = np.where(np.isclose(xs, mid, rtol=0, atol=1e-12), 0.0, np.sign(mid - xs))
        off = side != 0
        findings += _signed(f"H^({m}) sign split", xs[off], m, side[off] * v[off], tol, scale)
        at_mid = shannon_derivative_exact(p, mid, m, policy)
        findings.append(Finding(f"H^({m})(mid)=0", mid, m, -abs(at_mid) / scale, midpoint_tol))
    grid_desc = f"{len(xs)} points in (0, {p.upper:g}), orders 1..{2 * max_k + 2}"
    return CheckReport(f"theorem1 c={p.c:g} n={p.n:g}", grid_desc, tuple(findings))


# -- log-ratio sandwich -----------------------------------------------------

def sandwich_terms(p: FamilyParams, x: float, policy: TruncationPolicy = CHECK_POLICY):
    """(lower, middle SeriesValue, upper) of the sandwich around
    sum_k p_{n+c,k}(x) log((k+1)/(ck+n))."""
    c, n = p.c, p.n
    q = p.shifted(1)

    def g(k):
        return np.log((k + 1.0) / (c * k + n))

    middle = expectation(q, x, g, policy, envelope=g_envelope(p, 0))
    lower = math.log(x / (c * x + 1.0))
    upper = math.log((n * x + 1.0) / (n * c * x + n))
    return lower, middle, upper


def corollary1_check(p: FamilyParams, grid: Iterable[float] | None = None,
                     policy: TruncationPolicy = CHECK_POLICY, tol: float = 1e-9) -> CheckReport:
    """log(x/(cx+1)) <= sum p_{n+c,k} log((k+1)/(ck+n)) <= log((nx+1)/(ncx+n)), c >= 0."""
    if p.c < 0:
        raise ParameterError("this check needs c >= 0")
    xs = default_grid(p) if grid is None else np.asarray(list(grid), dtype=float)
    findings = []
    for x in xs:
        lower, middle, upper = sandwich_terms(p, float(x), policy)
        findings.append(Finding("lower", float(x), 0, middle.value - lower + middle.tail_bound, tol))
        findings.append(Finding("upper", float(x), 0, upper - middle.value + middle.tail_bound, tol))
    grid_desc = f"{len(xs)} points in [{xs.min():g}, {xs.max():g}]"
    return CheckReport(f"corollary1 c={p.c:g} n={p.n:g}", grid_desc, tuple(findings))


# -- sum of squares, Renyi and Tsallis ----------------------------------------

def _values(fn, p, xs, policy):
    return np.array([fn(p, float(x), policy).value for x in xs])


def section3_suite(p: FamilyParams, grid: Iterable[float] | None = None, tol: float = 1e-7,
                   policy: TruncationPolicy = CHECK_POLICY, cm_interval=(0.1, 10.0),
                   hs=(0.05, 0.1), cm_points: int = 100, max_order: int = 8) -> CheckReport:
    """Convexity and monotonicity of S, and the resulting shape of R and T.

    ``grid`` must be equispaced; defaults are [0, -1/c] with 101 points for
    c < 0 and [0, 10] with 101 points otherwise.
    """
    upper = p.upper if p.c < 0 else 10.0
    xs = np.linspace(0.0, upper, 101) if grid is None else np.asarray(list(grid), dtype=float)
    s = _values(sum_squares, p, xs, policy)
    t = _values(tsallis2, p, xs, policy)
    d2s = s[2:] - 2 * s[1:-1] + s[:-2]
    d2t = t[2:] - 2 * t[1:-1] + t[:-2]
    findings = _signed("S convex", xs[1:-1], 2, d2s, tol)
    findings += _signed("T concave", xs[1:-1], 2, -d2t, tol)
    reports = []
    if p.c < 0:
        mid = p.midpoint
        ds = np.diff(s)
        left = xs[1:] <= mid + 1e-12
        right = xs[:-1] >= mid - 1e-12
        scale = _scale(ds)
        findings += _signed("S decreasing on [0, mid]", xs[:-1][left], 1, -ds[left], tol, scale)
        findings += _signed("S increasing on [mid, end]", xs[:-1][right], 1, ds[right], tol, scale)
        nearest = int(np.argmin(np.abs(xs - mid)))
        findings.append(Finding("argmin S at mid", float(xs[nearest]), 0,
                                -(s[nearest] - s.min()) / _scale(s), tol))
    else:
        r = _values(renyi2, p, xs, policy)
        dr = np.diff(r)
        d2r = r[2:] - 2 * r[1:-1] + r[:-2]
        findings += _signed("R increasing", xs[:-1], 1, dr, tol)
        findings += _signed("R concave", xs[1:-1], 2, -d2r, tol)
        for h in hs:
            reports.append(cm_check(lambda x: sum_squares(p, x, policy).value, cm_interval,
                                    cm_points, h, max_order, tol, name=f"S-cm(h={h:g})"))
            # difference quotient of T stands in for T'; D T = -D S, formed from S
            # because 1 - S discards the low bits of S
            reports.append(cm_check(
                lambda x, h=h: (sum_squares(p, x, policy).value
                                - sum_squares(p, x + h, policy).value) / h,
                (cm_interval[0], cm_interval[1] - h), cm_points, h, max_order - 1, tol,
                name=f"T'-cm(h={h:g})"))
    own = CheckReport("shape", f"{len(xs)} points in [{xs[0]:g}, {xs[-1]:g}]", tuple(findings))
    return CheckReport.merge(f"section3 c={p.c:g} n={p.n:g}", [own, *reports])


def conjecture33_scan(p: FamilyParams, points: int = 199,
                      policy: TruncationPolicy = CHECK_POLICY) -> CheckReport:
    """Curvature of log S on an equispaced grid of [0, -1/c], as data.

    Log-convexity of S for c < 0 is an open question, so the report is
    report-only: a negative minimum is recorded, never a failure.  Margins
    are second differences divided by the squared step.
    """
    if not p.c < 0:
        raise ParameterError("the scan targets c < 0")
    if points < 3:
        raise GridTooCoarse("need at least 3 points")
    xs = np.linspace(0.0, p.upper, points)
    step = xs[1] - xs[0]
    log_s = np.log(_values(sum_squares, p, xs, policy))
    curvature = (log_s[2:] - 2 * log_s[1:-1] + log_s[:-2]) / step**2
    findings = tuple(Finding("log S curvature", float(x), 2, float(v), 0.0)
                     for x, v in zip(xs[1:-1], curvature))
    return CheckReport(f"conjecture33 c={p.c:g} n={p.n:g}",
                       f"{points} points in [0, {p.upper:g}]", findings, report_only=True)
