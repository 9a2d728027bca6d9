import math

import numpy as np
import pytest

import oracles
from cmentropy import checks
from cmentropy.basis import validate_params
from cmentropy.checks import (
    CheckReport,
    Finding,
    cm_check,
    conjecture33_scan,
    corollary1_check,
    default_grid,
    sandwich_terms,
    section3_suite,
    shannon_prime_cm_check,
    theorem1_sign_check,
)
from cmentropy.errors import GridTooCoarse, ParameterError
from cmentropy.suites import SUITES, SuiteOutcome, run_all, run_suite


class TestCmCheck:
    def test_exponential_passes(self):
        r = cm_check(lambda x: math.exp(-x), (0.0, 5.0), 50, 0.1, 8, 1e-7)
        assert r.passed
        assert r.worst_margin >= 0

    @pytest.mark.parametrize("h", [0.05, 0.1, 0.2])
    def test_canonical_functions(self, h):
        assert cm_check(lambda x: math.exp(-x), (0.0, 5.0), 40, h, 8, 1e-7).passed
        assert cm_check(lambda x: 1 / (1 + x), (0.0, 5.0), 40, h, 8, 1e-7).passed
        assert not cm_check(lambda x: math.sin(x) + 2, (0.0, 5.0), 40, h, 8, 1e-7).passed

    def test_square_fails_first_order(self):
        r = cm_check(lambda x: x * x, (0.0, 5.0), 40, 0.1, 4, 1e-7)
        assert not r.passed
        assert {f.order for f in r.violations} >= {1}
        assert all(f.order != 0 for f in r.violations)

    def test_grid_too_coarse(self):
        with pytest.raises(GridTooCoarse):
            cm_check(math.exp, (0.0, 0.5), 10, 0.1, 8, 1e-7)

    def test_shannon_prime_poisson(self):
        r = shannon_prime_cm_check(validate_params(0, 1), grid_points=30)
        assert r.passed

    def test_shannon_prime_rejects_bounded(self):
        with pytest.raises(ParameterError):
            shannon_prime_cm_check(validate_params(-1, 5))


class TestTheorem1:
    def test_passes(self):
        r = theorem1_sign_check(validate_params(-1, 5), default_grid(validate_params(-1, 5), 99))
        assert r.passed
        assert len(r.findings) > 99 * 8 - 10

    def test_binary_second_derivative(self):
        p = validate_params(-1, 1)
        r = theorem1_sign_check(p, max_k=0)
        even = [f for f in r.findings if f.order == 2]
        assert even and all(f.margin > 0 for f in even)

    def test_midpoint_zero(self):
        p = validate_params(-2, 4)
        r = theorem1_sign_check(p, max_k=3)
        mids = [f for f in r.findings if "(mid)" in f.check]
        assert len(mids) == 4
        assert all(f.x == 0.25 and f.ok for f in mids)

    def test_flipped_sign_is_caught(self, monkeypatch):
        real = checks.shannon_derivative_exact
        monkeypatch.setattr(checks, "shannon_derivative_exact", lambda *a, **k: -real(*a, **k))
        r = theorem1_sign_check(validate_params(-1, 5))
        assert not r.passed

    def test_needs_negative_c(self):
        with pytest.raises(ParameterError):
            theorem1_sign_check(validate_params(0, 1))


class TestCorollary1:
    def test_spot_value(self):
        lower, middle, upper = sandwich_terms(validate_params(0, 1), 1.0)
        assert lower == 0.0
        assert upper == pytest.approx(math.log(2), rel=1e-15)
        assert middle.value == pytest.approx(float(oracles.sandwich_middle(0, 1, 1, terms=200)), abs=1e-13)
        assert lower < middle.value < upper

    def test_near_zero(self):
        lower, middle, upper = sandwich_terms(validate_params(0, 1), 1e-8)
        assert lower < -18 and lower < middle.value <= upper

    @pytest.mark.parametrize("c, n", [(0, 1), (0, 2), (1, 2)])
    def test_holds(self, c, n):
        p = validate_params(c, n)
        r = corollary1_check(p, np.geomspace(0.05, 20, 40))
        assert r.passed
        assert r.worst_margin >= -1e-9

    def test_negative_binomial_margins_positive(self):
        r = corollary1_check(validate_params(1, 2), [1.0])
        assert all(f.margin > 0 for f in r.findings)

    def test_middle_against_mpmath(self):
        lower, middle, upper = sandwich_terms(validate_params(1, 2), 1.0)
        assert middle.value == pytest.approx(float(oracles.sandwich_middle(1, 2, 1)), abs=1e-13)


class TestSection3:
    def test_binary_second_difference(self):
        p = validate_params(-1, 1)
        xs = np.linspace(0, 1, 21)
        r = section3_suite(p, xs)
        assert r.passed
        h = xs[1] - xs[0]
        convex = [f for f in r.findings if "S convex" in f.check]
        # margins are scaled by the largest second difference, which is the constant 4 h^2
        assert all(f.margin == pytest.approx(1.0, rel=1e-9) for f in convex)
        assert 4 * h * h == pytest.approx(0.01)

    def test_argmin_at_half(self):
        p = validate_params(-1, 6)
        r = section3_suite(p, np.linspace(0, 1, 101))
        assert r.passed
        arg = [f for f in r.findings if "argmin" in f.check][0]
        assert arg.x == 0.5

    def test_poisson(self):
        r = section3_suite(validate_params(0, 1), np.linspace(0, 10, 51), cm_points=30)
        assert r.passed
        assert any("S-cm" in f.check for f in r.findings)


class TestConjectureScan:
    def test_binary_closed_form(self):
        r = conjecture33_scan(validate_params(-1, 1), 201)
        mid = min(r.findings, key=lambda f: abs(f.x - 0.5))
        # (log S)'' = S''/S - (S'/S)^2 = 4 / (1/2) at x = 1/2
        assert mid.margin == pytest.approx(8.0, rel=1e-3)
        assert r.report_only

    def test_completes(self):
        r = conjecture33_scan(validate_params(-2, 8))
        assert len(r.findings) == 197
        assert all(math.isfinite(f.margin) for f in r.findings)

    def test_negative_curvature_is_not_a_failure(self):
        r = CheckReport("scan", "g", (Finding("log S curvature", 0.5, 2, -1.0, 0.0),), report_only=True)
        assert SuiteOutcome("scan", r, 0.0).classification == "report-only"

    def test_needs_negative_c(self):
        with pytest.raises(ParameterError):
            conjecture33_scan(validate_params(1, 2))


class TestReport:
    def test_passed_matches_worst_margin(self):
        fs = (Finding("a", 0.1, 1, 0.5, 1e-7), Finding("b", 0.2, 1, -5e-8, 1e-7))
        r = CheckReport("s", "g", fs)
        assert r.passed and r.worst_margin == -5e-8
        r2 = CheckReport("s", "g", fs + (Finding("c", 0.3, 2, -2e-7, 1e-7),))
        assert not r2.passed and len(r2.violations) == 1

    def test_merge_labels(self):
        a = CheckReport("a", "g", (Finding("x", 0.0, 0, 1.0, 0.0),))
        m = CheckReport.merge("top", [a])
        assert m.findings[0].check == "a/x"

    def test_summary_keys(self):
        s = CheckReport("s", "g", (Finding("x", 0.0, 0, 1.0, 0.0),)).summary()
        assert s["passed"] and s["worst_margin"] == 1.0 and s["violations"] == 0


class TestSuites:
    def test_quick_all_pass(self):
        outcomes = run_all(quick=True)
        assert [o.suite for o in outcomes] == list(SUITES)
        assert all(o.classification == "pass" for o in outcomes)

    def test_incompatible_params(self):
        with pytest.raises(ParameterError):
            run_suite("theorem1", validate_params(0, 1))

    def test_unknown_suite(self):
        with pytest.raises(ValueError):
            run_suite("theorem9")
