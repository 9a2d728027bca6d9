"""Acceptance criteria 1-12, one PASS/FAIL line each.

Run under pytest (lines appear in the terminal summary) or directly with
``python tests/test_acceptance.py``.
"""

import math
import os
import subprocess
import sys
import time

import mpmath as mp
import numpy as np
import pytest

from cmentropy.basis import expectation, validate_params
from cmentropy.checks import (
    conjecture33_scan,
    corollary1_check,
    default_grid,
    sandwich_terms,
    section3_suite,
    shannon_prime_cm_check,
    theorem1_sign_check,
)
from cmentropy.cli import main
from cmentropy.derivatives import DerivativeRequest, evaluate_derivative, shannon_derivative_exact
from cmentropy.entropies import renyi2, shannon, sum_squares, tsallis2
from cmentropy.representations import (
    beta_identity_closed_form,
    beta_identity_fixture,
    log_factorial_integral,
    negbin_derivative_integral,
    poisson_derivative_integral,
    shannon_binomial_integral,
    shannon_negbin_integral,
    shannon_poisson_integral,
)

RESULTS = {}


def record(number, ok, detail):
    line = f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
    RESULTS[number] = line
    print(line)
    return ok


def _valid(c, n):
    try:
        return validate_params(c, n)
    except ValueError:
        return None


def _grid(p, points):
    hi = p.upper if p.c < 0 else 10.0
    return [float(x) for x in np.linspace(0.0, hi, points)]


def criterion_1():
    start = time.perf_counter()
    worst_norm = worst_mean = -math.inf
    families = 0
    for c in (-2, -1, 0, 0.5, 1, 2):
        for n in (1, 2, 5, 10):
            p = _valid(c, n)
            if p is None:
                continue
            families += 1
            for x in _grid(p, 25):
                total = expectation(p, x, lambda k: np.ones_like(k, dtype=float))
                mean = expectation(p, x, lambda k: k, envelope=(0.0, 1.0))
                worst_norm = max(worst_norm, abs(total.value - 1) - (1e-12 + total.tail_bound))
                worst_mean = max(worst_mean, abs(mean.value - n * x)
                                 - (1e-10 * (1 + n * x) + mean.tail_bound))
    elapsed = time.perf_counter() - start
    ok = worst_norm <= 0 and worst_mean <= 0 and elapsed < 5
    return record(1, ok, f"{families} families x 25 points, worst excess over bound "
                         f"sum={worst_norm:.2e} mean={worst_mean:.2e}, {elapsed:.2f} s")


def criterion_2():
    p = validate_params(-1, 1)
    dh = ds = 0.0
    for x in np.linspace(0.01, 0.99, 99):
        x = float(x)
        dh = max(dh, abs(shannon(p, x).value - (-x * math.log(x) - (1 - x) * math.log1p(-x))))
        ds = max(ds, abs(sum_squares(p, x).value - (1 - 2 * x + 2 * x * x)))
    return record(2, dh <= 1e-12 and ds <= 1e-12, f"binary H err {dh:.1e}, S err {ds:.1e} (99 points)")


def criterion_3():
    worst = 0.0
    for n in (1.0, 2.0, 5.0):
        p = validate_params(0, n)
        for x in np.linspace(0.0, 20.0 / n, 50):
            z = 2 * n * float(x)
            ref = float(mp.exp(-z) * mp.besseli(0, z))
            worst = max(worst, abs(sum_squares(p, float(x)).value - ref))
    return record(3, worst <= 1e-10, f"max |S - e^-2nx I0(2nx)| = {worst:.1e} for nx <= 20")


def criterion_4():
    start = time.perf_counter()
    parts = []
    ok = True
    for c, l in ((-1, 5), (-1, 10), (-2, 4)):
        p = validate_params(c, -c * l)
        r = theorem1_sign_check(p, default_grid(p, 99), max_k=3, tol=1e-7, midpoint_tol=1e-8)
        ok &= r.passed
        parts.append(f"(c={c},l={l}) worst {r.worst_margin:.1e}")
    elapsed = time.perf_counter() - start
    ok &= elapsed < 30
    return record(4, ok, "; ".join(parts) + f", {elapsed:.1f} s")


def criterion_5():
    parts = []
    ok = True
    for c, n in ((0, 1), (0, 3), (1, 2), (1, 5)):
        r = shannon_prime_cm_check(validate_params(c, n), (0.1, 10.0), (0.05, 0.1), 100, 8, 1e-7)
        ok &= r.passed
        parts.append(f"({c},{n}) {r.worst_margin:.1e}")
    return record(5, ok, "H' alternating differences, worst scaled margin " + ", ".join(parts))


def criterion_6():
    parts = []
    ok = True
    for c, n in ((0, 1), (1, 2)):
        r = section3_suite(validate_params(c, n), np.linspace(0, 10, 101), tol=1e-7)
        ok &= r.passed
        groups = {}
        for f in r.findings:
            head, rest = f.check.split("/", 1)
            key = rest if head == "shape" else head.split("(")[0]
            groups[key] = min(groups.get(key, math.inf), f.margin)
        needed = {"S-cm", "T'-cm", "S convex", "T concave", "R increasing", "R concave"}
        ok &= needed <= set(groups)
        parts.append(f"c={c}: " + " ".join(f"{k}={v:.1e}" for k, v in sorted(groups.items())))
    for c, n in ((-1, 6),):
        p = validate_params(c, n)
        t = np.array([tsallis2(p, float(x)).value for x in np.linspace(0, 1, 101)])
        d2 = t[2:] - 2 * t[1:-1] + t[:-2]
        ok &= bool(d2.max() <= 1e-7 * np.abs(d2).max())
        parts.append(f"c=-1 max D^2 T={d2.max():.1e}")
    # R increasing and concave as plain differences too
    for c, n in ((0, 1), (1, 2)):
        p = validate_params(c, n)
        r = np.array([renyi2(p, float(x)).value for x in np.linspace(0, 10, 101)])
        ok &= bool(np.diff(r).min() >= -1e-7 and np.diff(r, 2).max() <= 1e-7)
    return record(6, ok, "; ".join(parts))


def criterion_7():
    ok = True
    parts = []
    xs = np.linspace(0.0, 1.0, 101)
    for l in (6, 11):
        p = validate_params(-1, l)
        s = np.array([sum_squares(p, float(x)).value for x in xs])
        d2 = np.diff(s, 2)
        arg = float(xs[int(np.argmin(s))])
        ok &= bool(d2.min() >= -1e-9) and arg == 0.5
        parts.append(f"l={l}: min D^2 S={d2.min():.2e}, argmin x={arg}")
    return record(7, ok, "; ".join(parts))


def criterion_8():
    ok = True
    parts = []
    for c, n in ((0, 1), (0, 2), (1, 2)):
        r = corollary1_check(validate_params(c, n), np.geomspace(0.05, 20, 60), tol=1e-9)
        ok &= r.worst_margin >= -1e-9
        parts.append(f"({c},{n}) worst {r.worst_margin:.1e}")
    lower, middle, upper = sandwich_terms(validate_params(0, 1), 1.0)
    mp.mp.dps = 40
    ref = float(mp.exp(-1) * mp.fsum(mp.log(k + 1) / mp.factorial(k) for k in range(200)))
    ok &= abs(middle.value - ref) <= 1e-12 and 0 < middle.value < math.log(2)
    parts.append(f"spot middle={middle.value:.7f} (200-term sum {ref:.7f}, quoted 0.5735), "
                 f"bounds ({lower:g}, {upper:.4f})")
    return record(8, ok, "; ".join(parts))


def criterion_9():
    errs = {}

    def note(key, err):
        errs[key] = max(errs.get(key, 0.0), err)

    for l in range(1, 21):
        for form in ("exponential", "logarithmic"):
            note("logfact", abs(log_factorial_integral(l, form).value - math.lgamma(l + 1)))
    for c, n in ((-1, 1), (-1, 2), (-1, 6), (-2, 4), (-2, 6)):
        p = validate_params(c, n)
        for u in (0.1, 0.3, 0.5, 0.7, 0.9):
            x = u * p.upper
            note("entropy", abs(shannon_binomial_integral(p, x).value - shannon(p, x).value))
    for x in (0.25, 0.5, 1.0, 2.0, 5.0):
        note("entropy", abs(shannon_poisson_integral(x).value - shannon(validate_params(0, 1), x).value))
        for n in (2.0, 3.0):
            note("entropy", abs(shannon_negbin_integral(n, x).value - shannon(validate_params(1, n), x).value))
        for k in (1, 2, 3):
            ref = shannon_derivative_exact(validate_params(0, 1), x, k + 1)
            note("deriv", abs(poisson_derivative_integral(k, x).value - ref))
            for n in (2.0, 3.0):
                ref = shannon_derivative_exact(validate_params(1, n), x, k + 1)
                note("deriv", abs(negbin_derivative_integral(n, k, x).value - ref))
    for j, n, x in [(1, 1, 1.0), (2, 1, 0.0), (3, 2, 2.0)] + [
            (j, n, x) for j in (1, 2, 3) for n in (1.0, 2.0) for x in (0.5, 1.0, 2.0)]:
        note("beta", abs(beta_identity_fixture(j, n, x).value - beta_identity_closed_form(j, n, x)))
    note("beta", abs(beta_identity_closed_form(1, 1, 1.0) - 0.25))
    ok = (errs["logfact"] <= 1e-9 and errs["entropy"] <= 1e-8 and errs["deriv"] <= 1e-7
          and errs["beta"] <= 1e-10)
    return record(9, ok, f"log l! {errs['logfact']:.1e}, entropies {errs['entropy']:.1e}, "
                         f"derivatives {errs['deriv']:.1e}, beta fixture {errs['beta']:.1e}")


def criterion_10():
    worst = 0.0
    count = 0
    for c, n in ((-1, 5), (-1, 10), (-2, 8), (0, 1), (0, 3), (0.5, 2), (1, 2), (1, 5)):
        p = validate_params(c, n)
        xs = [u * p.upper for u in (0.1, 0.3, 0.5, 0.7, 0.9)] if c < 0 else [0.1, 0.5, 1.0, 3.0, 8.0]
        for x in xs:
            for order in (1, 2, 3, 4):
                exact = evaluate_derivative(DerivativeRequest(p, x, order))
                fd = evaluate_derivative(DerivativeRequest(p, x, order, "finite_difference"))
                worst = max(worst, abs(exact - fd) / max(1e-6, 1e-4 * abs(exact)))
                count += 1
    return record(10, worst <= 1.0, f"{count} cases, worst |exact - fd| / tolerance = {worst:.3f}")


def criterion_11():
    parts = []
    ok = True
    for c, l in ((-1, 5), (-1, 20), (-2, 10)):
        p = validate_params(c, -c * l)
        code = main(["scan-conjecture", "--c", str(c), "--n", str(p.n), "--points", "199",
                     "--format", "csv", "--output", os.devnull])
        r = conjecture33_scan(p, 199)
        ok &= code == 0 and r.report_only and len(r.findings) == 197
        parts.append(f"(c={c},l={l}) min (log S)''={r.worst.margin:.4g} at x={r.worst.x:.4g}")
    return record(11, ok, "report only; " + "; ".join(parts))


INJECT = (
    "import sys\n"
    "from cmentropy import checks\n"
    "real = checks.shannon_derivative_exact\n"
    "checks.shannon_derivative_exact = lambda *a, **k: -real(*a, **k)\n"
    "from cmentropy.cli import main\n"
    "sys.exit(main(['check', 'theorem1', '--quick']))\n"
)


def criterion_12():
    start = time.perf_counter()
    clean = subprocess.run([sys.executable, "-m", "cmentropy", "check", "all", "--quick"],
                           capture_output=True, text=True, timeout=600)
    elapsed = time.perf_counter() - start
    bug = subprocess.run([sys.executable, "-c", INJECT], capture_output=True, text=True, timeout=600)
    ok = clean.returncode == 0 and elapsed < 300 and bug.returncode == 1
    return record(12, ok, f"check all --quick exit {clean.returncode} in {elapsed:.1f} s; "
                          f"injected sign bug exit {bug.returncode}")


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6,
            criterion_7, criterion_8, criterion_9, criterion_10, criterion_11, criterion_12]


@pytest.mark.parametrize("criterion", CRITERIA, ids=[f"criterion_{i}" for i in range(1, 13)])
def test_criterion(criterion):
    assert criterion()


if __name__ == "__main__":
    results = [c() for c in CRITERIA]
    sys.exit(0 if all(results) else 1)
