# pylint: skip-file

import unittest

from lmm_interp.acceptance import (
    DRIFT_TOLERANCE,
    _drift_identities,
    _run,
    check_baseline_agreement,
    check_broken_date_accuracy,
    check_drift_machinery,
    check_dynamics,
    check_endpoint_collapse,
    check_implied_vol_dip,
    check_martingales,
    check_numeraire_identity,
    check_stub_identity,
    check_tenor_date_caplet,
)
from lmm_interp.exception.numerical_failure import NumericalFailure
from lmm_interp.model.curve import ModelState, build_initial_curve
from lmm_interp.model.tenor import TenorStructure
from lmm_interp.model.volatility.exponential import ExponentialVolatility
from lmm_interp.response import CheckResult


class TestDeterministicChecks(unittest.TestCase):

    def test_endpoint_collapse(self):
        result = check_endpoint_collapse()
        self.assertTrue(result.passed, result.detail)

    def test_stub_identity(self):
        result = check_stub_identity(1)
        self.assertTrue(result.passed, result.detail)

    def test_baseline_agreement(self):
        result = check_baseline_agreement()
        self.assertTrue(result.passed, result.detail)
        self.assertTrue(result.detail.endswith("bp"))

    def test_numeraire_identity(self):
        result = check_numeraire_identity(1)
        self.assertTrue(result.passed, result.detail)

    def test_drift_identities_on_initial_curve(self):
        tenor = TenorStructure.for_horizon(4.25)
        state = ModelState.initial(build_initial_curve(3, tenor))
        vol = ExponentialVolatility.two_factor(0.6, 0.8, 0.1, 0.01)
        self.assertLessEqual(_drift_identities(state, vol), DRIFT_TOLERANCE)


class TestSimulatedChecks(unittest.TestCase):

    def test_dynamics(self):
        result = check_dynamics(1)
        self.assertEqual(result.name, "dynamics")
        self.assertTrue(result.passed, result.detail)

    def test_drift_machinery(self):
        result = check_drift_machinery(20_000, 1)
        self.assertTrue(result.passed, result.detail)

    def test_tenor_date_caplet(self):
        result = check_tenor_date_caplet(100_000, 1)
        self.assertTrue(result.passed, result.detail)

    def test_broken_date_accuracy(self):
        result = check_broken_date_accuracy(100_000, 1)
        self.assertTrue(result.passed, result.detail)
        self.assertTrue(result.detail.endswith("inside the band"))

    def test_implied_vol_dip(self):
        result = check_implied_vol_dip(20_000, 1)
        self.assertTrue(result.passed, result.detail)

    def test_martingales(self):
        for seed in (1, 2):
            with self.subTest(seed=seed):
                result = check_martingales(20_000, seed)
                self.assertTrue(result.passed, result.detail)


class TestRunner(unittest.TestCase):

    def test_failure_is_reported(self):
        def failing():
            raise NumericalFailure("no bracket")

        with self.assertLogs("lmm_interp.acceptance", level="WARNING"):
            result = _run("broken", failing)
        self.assertEqual(result, CheckResult("broken", False, "NumericalFailure: no bracket"))

    def test_passing_check(self):
        expected = CheckResult("fine", True, "ok")
        with self.assertLogs("lmm_interp.acceptance", level="INFO") as logs:
            self.assertEqual(_run("fine", lambda: expected), expected)
        self.assertIn("passed", logs.output[0])


if __name__ == "__main__":
    unittest.main()
