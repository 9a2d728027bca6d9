"""Named verification suites with their default parameter matrices."""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np

from . import checks
from .basis import FamilyParams, validate_params
from .checks import CHECK_POLICY, CheckReport, Finding
from .derivatives import shannon_derivative_exact
from .entropies import shannon
from .errors import ParameterError
from .representations import (
    beta_identity_closed_form,
    beta_identity_fixture,
    binomial_even_derivative_integral,
    kernel,
    log_factorial_integral,
    negbin_derivative_integral,
    poisson_derivative_integral,
    shannon_binomial_integral,
    shannon_negbin_integral,
    shannon_poisson_integral,
)

SUITES = ("theorem1", "theorem2", "theorem3", "corollary1", "section3", "representations")

DEFAULT_PARAMS = {
    "theorem1": [(-1.0, 5.0), (-1.0, 10.0), (-2.0, 8.0)],
    "theorem2": [(0.0, 1.0), (0.0, 3.0)],
    "theorem3": [(1.0, 2.0), (1.0, 5.0)],
    "corollary1": [(0.0, 1.0), (0.0, 2.0), (1.0, 2.0)],
    "section3": [(-1.0, 6.0), (-1.0, 11.0), (0.0, 1.0), (1.0, 2.0)],
}

SIGN_TOL = 1e-7
REPRESENTATION_TOL = 1e-8


@dataclass(frozen=True)
class SuiteOutcome:
    suite: str
    report: CheckReport
    wall_time: float

    @property
    def classification(self) -> str:
        if self.report.report_only:
            return "report-only"
        return "pass" if self.report.passed else "violation"


def compatible(suite: str, c: float) -> bool:
    return {
        "theorem1": c < 0,
        "theorem2": c == 0,
        "theorem3": c > 0,
        "corollary1": c >= 0,
    }.get(suite, True)


def _theorem1(p: FamilyParams, quick: bool, tol: float) -> CheckReport:
    grid = checks.default_grid(p, 49 if quick else 99)
    return checks.theorem1_sign_check(p, grid, max_k=3, tol=tol)


def _cm(p: FamilyParams, quick: bool, tol: float) -> CheckReport:
    return checks.shannon_prime_cm_check(p, grid_points=40 if quick else 100, tol=tol)


def _corollary1(p: FamilyParams, quick: bool, tol: float) -> CheckReport:
    grid = checks.default_grid(p, 30 if quick else 60)
    return checks.corollary1_check(p, grid, tol=min(tol, 1e-9))


def _section3(p: FamilyParams, quick: bool, tol: float) -> CheckReport:
    upper = p.upper if p.c < 0 else 10.0
    grid = np.linspace(0.0, upper, 51 if quick else 101)
    return checks.section3_suite(p, grid, tol=tol, cm_points=40 if quick else 100)


_RUNNERS = {
    "theorem1": _theorem1,
    "theorem2": _cm,
    "theorem3": _cm,
    "corollary1": _corollary1,
    "section3": _section3,
}


def _agreement(label, x, order, value, reference, tol) -> Finding:
    return Finding(label, float(x), order, -abs(value - reference), tol)


def representation_crosscheck(quick: bool = False, tol: float = REPRESENTATION_TOL) -> CheckReport:
    """Integral representations against the series engine on a fixed matrix."""
    pol = CHECK_POLICY
    f: list[Finding] = []
    ls = (1, 2, 5, 10, 20) if quick else range(1, 21)
    for l in ls:
        for form in ("exponential", "logarithmic"):
            v = log_factorial_integral(l, form).value
            f.append(_agreement(f"log l! ({form})", l, 0, v, math.lgamma(l + 1.0), 1e-9))

    fractions = (0.2, 0.5, 0.8) if quick else (0.1, 0.3, 0.5, 0.7, 0.9)
    for c, n in [(-1.0, 1.0), (-1.0, 2.0), (-1.0, 6.0), (-2.0, 4.0), (-2.0, 6.0)]:
        p = validate_params(c, n)
        for frac in fractions:
            x = frac * p.upper
            v = shannon_binomial_integral(p, x).value
            f.append(_agreement(f"H binomial c={c:g} n={n:g}", x, 0, v, shannon(p, x, pol).value, tol))

    xs = (0.5, 1.0, 2.0) if quick else (0.25, 0.5, 1.0, 2.0, 5.0)
    for n in (1.0, 3.0):
        p = validate_params(0.0, n)
        for x in xs:
            v = shannon_poisson_integral(n * x).value
            f.append(_agreement(f"H Poisson n={n:g}", x, 0, v, shannon(p, x, pol).value, tol))
    for n in (2.0, 3.0):
        p = validate_params(1.0, n)
        for x in xs:
            v = shannon_negbin_integral(n, x).value
            f.append(_agreement(f"H negative binomial n={n:g}", x, 0, v, shannon(p, x, pol).value, tol))

    deriv_tol = 1e-7
    p0 = validate_params(0.0, 1.0)
    for k in (1, 2, 3):
        for x in xs:
            v = poisson_derivative_integral(k, x).value
            ref = shannon_derivative_exact(p0, x, k + 1, pol)
            f.append(_agreement("Poisson derivative integral", x, k + 1, v, ref, deriv_tol))
    for n in (2.0, 3.0):
        p = validate_params(1.0, n)
        for j in (1, 2, 3):
            for x in xs:
                v = negbin_derivative_integral(n, j, x).value
                ref = shannon_derivative_exact(p, x, j + 1, pol)
                f.append(_agreement(f"negative binomial derivative integral n={n:g}", x, j + 1, v, ref,
                                    deriv_tol))
    for c, n in [(-1.0, 5.0), (-2.0, 8.0), (-1.0, 3.0)]:
        p = validate_params(c, n)
        for k in (0, 1):
            for frac in (0.3, 0.5):
                x = frac * p.upper
                v = binomial_even_derivative_integral(p, k, x).value
                ref = shannon_derivative_exact(p, x, 2 * k + 2, pol)
                f.append(_agreement(f"binomial even derivative integral c={c:g} n={n:g}", x, 2 * k + 2,
                                    v, ref, deriv_tol * max(1.0, abs(ref))))

    cases = [(j, n, x) for j in (1, 2, 3) for n in (1.0, 2.0) for x in (0.5, 1.0, 2.0)]
    cases += [(1, 1.0, 1.0), (2, 1.0, 0.0), (3, 2.0, 2.0)]
    for j, n, x in cases:
        v = beta_identity_fixture(j, n, x).value
        f.append(_agreement(f"beta identity j={j} n={n:g}", x, 0, v, beta_identity_closed_form(j, n, x),
                            1e-10))

    t = np.linspace(1e-9, 1.0 - 1e-9, 2001)
    w = kernel(t)
    slack = np.minimum(w, 1.0 - w)
    worst = int(np.argmin(slack))
    f.append(Finding("kernel in (0, 1)", float(t[worst]), 0, float(slack[worst]), 0.0))
    return CheckReport("representations", "fixed cross-check matrix" + (" (quick)" if quick else ""),
                       tuple(f))


def run_suite(name: str, params: FamilyParams | None = None, quick: bool = False,
              tol: float = SIGN_TOL) -> SuiteOutcome:
    """Run one named suite; ``params=None`` runs its default matrix."""
    start = time.perf_counter()
    if name == "representations":
        report = representation_crosscheck(quick, min(tol, REPRESENTATION_TOL))
    elif name in _RUNNERS:
        if params is not None:
            if not compatible(name, params.c):
                raise ParameterError(f"suite {name} does not apply to c={params.c:g}")
            plist = [params]
        else:
            plist = [validate_params(c, n) for c, n in DEFAULT_PARAMS[name]]
        reports = [_RUNNERS[name](p, quick, tol) for p in plist]
        report = reports[0] if len(reports) == 1 else CheckReport.merge(name, reports)
    else:
        raise ValueError(f"unknown suite {name!r}")
    return SuiteOutcome(name, report, time.perf_counter() - start)


def run_all(params: FamilyParams | None = None, quick: bool = False,
            tol: float = SIGN_TOL) -> list[SuiteOutcome]:
    """Every suite; with ``params`` only suites that apply to its c get them,
    the rest use their defaults."""
    out = []
    for name in SUITES:
        use = params if params is not None and compatible(name, params.c) else None
        out.append(run_suite(name, use, quick, tol))
    return out
