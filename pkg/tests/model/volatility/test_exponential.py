# pylint: skip-file

import math
import unittest

import numpy as np
from scipy.integrate import quad

from lmm_interp.exception.domain_failure import DomainFailure
from lmm_interp.model.volatility.exponential import ExponentialVolatility


class TestExponentialVolatility(unittest.TestCase):

    def setUp(self):
        self.vol = ExponentialVolatility.two_factor(0.6, 0.8, 0.1, 0.01)

    def test_value(self):
        np.testing.assert_allclose(
            self.vol.vol(0.5, 1.5), [0.6 * math.exp(-0.8), 0.1 * math.exp(-0.01)]
        )

    def test_integrated_var_closed_form(self):
        expected = 0.36 * (1 - math.exp(-1.6)) / 1.6 + 0.01 * (1 - math.exp(-0.02)) / 0.02
        self.assertAlmostEqual(self.vol.integrated_var(1.0, 0.0, 1.0), expected, places=14)
        self.assertAlmostEqual(self.vol.integrated_var(1.0, 0.0, 1.0), 0.189474, places=6)
        self.assertAlmostEqual(self.vol.integrated_vol(1.0, 0.0, 1.0), 0.43529, places=5)

    def test_integrated_cov_matches_quadrature(self):
        rng = np.random.default_rng(11)
        for _ in range(100):
            T_a, T_b = rng.uniform(0.1, 10.0, size=2)
            s0, s1 = np.sort(rng.uniform(0.0, min(T_a, T_b), size=2))

            def integrand(s):
                return float(np.dot(self.vol.vol(s, T_a), self.vol.vol(s, T_b)))

            expected, _ = quad(integrand, s0, s1, epsabs=1e-14, epsrel=1e-13)
            actual = self.vol.integrated_cov(T_a, T_b, s0, s1)
            self.assertLessEqual(abs(actual - expected), 1e-10 * max(abs(expected), 1e-12))

    def test_zero_decay(self):
        vol = ExponentialVolatility([(0.2, 0.0)])
        self.assertAlmostEqual(vol.integrated_var(3.0, 1.0, 3.0), 0.08, places=14)

    def test_step_vol_reproduces_step_variance(self):
        loading = self.vol.step_vol(0.5, 1.0, 2.0)
        self.assertAlmostEqual(
            float(np.sum(loading**2)) * 0.5, self.vol.integrated_var(2.0, 0.5, 1.0), places=14
        )
        self.assertTrue(np.all(loading > 0))

    def test_step_vol_keeps_sign(self):
        vol = ExponentialVolatility([(-0.2, 0.5)])
        self.assertLess(vol.step_vol(0.0, 0.5, 1.0)[0], 0.0)

    def test_upper_limit_beyond_maturity(self):
        with self.assertRaises(DomainFailure):
            self.vol.integrated_cov(1.0, 2.0, 0.0, 1.5)

    def test_to_json(self):
        self.assertEqual(
            self.vol.to_json(),
            {"type": "exponential", "factors": [[0.6, 0.8], [0.1, 0.01]]},
        )


if __name__ == "__main__":
    unittest.main()
