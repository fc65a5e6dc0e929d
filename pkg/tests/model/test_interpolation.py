# pylint: skip-file

import math
import unittest

import numpy as np
from scipy.integrate import quad

from lmm_interp.exception.domain_failure import DomainFailure
from lmm_interp.exception.state_failure import StateFailure
from lmm_interp.model.curve import InitialCurve, ModelState, build_initial_curve, discrete_bond
from lmm_interp.model.interpolation import (
    baseline_forward,
    baseline_libor,
    baseline_loglinear_zcb,
    correction_factor,
    expected_libor_under_payment_measure,
    fallback_diagnostics,
    instantaneous_forward,
    interpolated_libor,
    long_bond_ratio,
    rolling_numeraire,
    savings_account,
    short_bond,
    short_rate,
    short_rate_integral,
    zcb,
)
from lmm_interp.model.scheme import InterpolationScheme
from lmm_interp.model.tenor import TenorStructure
from lmm_interp.model.volatility.exponential import ExponentialVolatility
from lmm_interp.model.volatility.flat import FlatVolatility


def state_at(tenor, t, libors):
    libors = np.asarray(libors, dtype=float)
    fixings = np.full_like(libors, np.nan)
    passed = int(math.floor(t / tenor.delta + 1e-9)) + 1
    fixings[:passed] = libors[:passed]
    return ModelState(tenor, t, libors, fixings)


class TestCorrectionFactor(unittest.TestCase):

    def test_value(self):
        expected = 1 + 0.0125 * (math.exp(0.0225) - 1) / 1.0125
        self.assertAlmostEqual(float(correction_factor(0.05, 0.25, 0.0225)), expected, places=15)
        self.assertAlmostEqual(float(correction_factor(0.05, 0.25, 0.0225)), 1.000281, places=6)
        self.assertEqual(float(correction_factor(0.05, 0.25, 0.0)), 1.0)

    def test_expected_libor(self):
        tenor = TenorStructure.for_horizon(2.0)
        state = ModelState.initial(InitialCurve.flat(tenor, 0.05))
        value = expected_libor_under_payment_measure(state, FlatVolatility(0.3), 4, 0.5)
        self.assertAlmostEqual(float(value), 0.05 * float(correction_factor(0.05, 0.25, 0.045)))
        with self.assertRaises(DomainFailure):
            expected_libor_under_payment_measure(state, FlatVolatility(0.3), 2, 0.75)


class TestZeroCouponBonds(unittest.TestCase):

    def setUp(self):
        self.tenor = TenorStructure.for_horizon(2.5)
        self.curve = InitialCurve.flat(self.tenor, 0.05)
        self.state = ModelState.initial(self.curve)
        self.vol = FlatVolatility(0.3)
        self.daycount = InterpolationScheme.daycount()
        self.shortvol = InterpolationScheme.short_bond_volatility()

    def test_broken_maturity(self):
        value = zcb(self.state, self.daycount, self.vol, 0.375)
        self.assertAlmostEqual(float(value), 1.00625 / 1.0125**2, places=15)

    def test_tenor_dates(self):
        for scheme in (self.daycount, self.shortvol):
            for j in range(self.tenor.n + 1):
                self.assertAlmostEqual(
                    float(zcb(self.state, scheme, self.vol, self.tenor.date(j))),
                    float(discrete_bond(self.state, j)),
                    places=15,
                )

    def test_continuity_at_tenor_dates(self):
        curve = build_initial_curve(3, TenorStructure.for_horizon(2.25))
        state = ModelState.initial(curve)
        for scheme in (self.daycount, self.shortvol):
            for j in range(1, curve.tenor.n):
                T = curve.tenor.date(j)
                at = float(zcb(state, scheme, self.vol, T))
                self.assertAlmostEqual(float(zcb(state, scheme, self.vol, T - 1e-9)), at, places=8)
                self.assertAlmostEqual(float(zcb(state, scheme, self.vol, T + 1e-9)), at, places=8)

    def test_bond_at_own_time(self):
        state = state_at(self.tenor, 0.3, np.full(10, 0.05))
        self.assertEqual(float(zcb(state, self.shortvol, self.vol, 0.3)), 1.0)

    def test_short_bond(self):
        libors = np.full(10, 0.05)
        libors[1] = 0.04
        state = state_at(self.tenor, 0.3, libors)
        self.assertAlmostEqual(
            float(short_bond(state, self.daycount, self.vol)), 1 / (1 + 0.2 * 0.04), places=15
        )
        self.assertEqual(float(short_bond(self.state, self.shortvol, self.vol)), 1.0)

    def test_method_2_short_bond(self):
        libors = np.full(10, 0.05)
        libors[1] = 0.04
        libors[2] = 0.06
        state = state_at(self.tenor, 0.3, libors)
        expected = 1 / (1 + 0.2 * (0.8 * 0.04 + 0.2 * 0.06))
        value = float(short_bond(state, self.shortvol, self.vol))
        self.assertAlmostEqual(value, expected, places=15)

    def test_long_bond_ratio(self):
        self.assertEqual(float(long_bond_ratio(self.state, self.daycount, self.vol, 0.5)), 1.0)
        self.assertAlmostEqual(
            float(long_bond_ratio(self.state, self.daycount, self.vol, 0.375)), 1.00625, places=15
        )
        cf = float(correction_factor(0.05, 0.25, 0.09 * 0.375))
        expected = 1 + 0.125 * (0.5 * 0.05 + 0.5 * 0.05 * cf)
        self.assertAlmostEqual(
            float(long_bond_ratio(self.state, self.shortvol, self.vol, 0.375)), expected, places=15
        )

    def test_maturity_out_of_range(self):
        with self.assertRaises(DomainFailure):
            zcb(self.state, self.daycount, self.vol, 2.6)
        later = state_at(self.tenor, 0.3, np.full(10, 0.05))
        with self.assertRaises(DomainFailure):
            zcb(later, self.daycount, self.vol, 0.2)

    def test_fallback_in_last_period(self):
        T = self.tenor.horizon - 0.1
        self.assertEqual(
            float(zcb(self.state, self.shortvol, self.vol, T)),
            float(zcb(self.state, self.daycount, self.vol, T)),
        )
        self.assertEqual(len(fallback_diagnostics(self.shortvol, self.tenor, [T, 1.0, 0.3])), 1)
        self.assertEqual(fallback_diagnostics(self.daycount, self.tenor, [T]), [])


class TestInterpolatedLibor(unittest.TestCase):

    def setUp(self):
        self.tenor = TenorStructure.for_horizon(2.5)
        self.vol = FlatVolatility(0.3)
        self.daycount = InterpolationScheme.daycount()
        self.shortvol = InterpolationScheme.short_bond_volatility()

    def test_flat_curve_method_1(self):
        state = ModelState.initial(InitialCurve.flat(self.tenor, 0.05))
        for T in np.random.default_rng(3).uniform(0.0, 2.25, size=50):
            self.assertAlmostEqual(
                float(interpolated_libor(state, self.daycount, self.vol, T)), 0.05, delta=1e-12
            )

    def test_tenor_date_is_discrete_rate(self):
        curve = build_initial_curve(3, TenorStructure.for_horizon(2.25))
        state = ModelState.initial(curve)
        for scheme in (self.daycount, self.shortvol):
            self.assertEqual(
                float(interpolated_libor(state, scheme, self.vol, 1.0)), curve.libors0[4]
            )

    def test_between_neighbours(self):
        curve = build_initial_curve(3, TenorStructure.for_horizon(2.25))
        state = ModelState.initial(curve)
        value = float(interpolated_libor(state, self.daycount, self.vol, 1.125))
        self.assertGreater(value, curve.libors0[4])
        self.assertLess(value, curve.libors0[5])

    def test_out_of_range(self):
        state = ModelState.initial(InitialCurve.flat(self.tenor, 0.05))
        with self.assertRaises(DomainFailure):
            interpolated_libor(state, self.daycount, self.vol, 2.3)


class TestForwardRates(unittest.TestCase):

    def setUp(self):
        self.tenor = TenorStructure.for_horizon(2.25)
        self.curve = build_initial_curve(3, self.tenor)
        self.state = ModelState.initial(self.curve)
        self.vol = ExponentialVolatility.two_factor(0.6, 0.8, 0.1, 0.01)
        self.daycount = InterpolationScheme.daycount()
        self.shortvol = InterpolationScheme.short_bond_volatility()

    def test_analytic_matches_finite_difference(self):
        for T in np.random.default_rng(5).uniform(0.001, 2.249, size=50):
            analytic = float(instantaneous_forward(self.state, self.daycount, self.vol, T))
            numeric = float(
                instantaneous_forward(
                    self.state, self.daycount, self.vol, T, mode="finite-difference"
                )
            )
            self.assertLessEqual(abs(analytic - numeric), 1e-6 * analytic)

    def test_one_sided_limits(self):
        L = self.curve.libors0
        left = instantaneous_forward(self.state, self.daycount, self.vol, 1.0, side="left")
        right = instantaneous_forward(self.state, self.daycount, self.vol, 1.0, side="right")
        self.assertAlmostEqual(float(left), L[3], places=15)
        self.assertAlmostEqual(float(right), L[4] / (1 + 0.25 * L[4]), places=15)
        with self.assertRaises(DomainFailure):
            instantaneous_forward(self.state, self.daycount, self.vol, 1.0)
        with self.assertRaises(DomainFailure):
            instantaneous_forward(self.state, self.daycount, self.vol, 0.5, mode="spline")

    def test_limits_approached(self):
        for scheme in (self.daycount, self.shortvol):
            right = float(instantaneous_forward(self.state, scheme, self.vol, 1.0, side="right"))
            near = float(instantaneous_forward(self.state, scheme, self.vol, 1.0 + 1e-9))
            self.assertAlmostEqual(near, right, places=6)

    def test_short_rate(self):
        L0 = self.curve.libors0[0]
        self.assertAlmostEqual(
            float(short_rate(self.state, self.daycount, self.vol)), L0 / (1 + 0.25 * L0), places=15
        )
        later = state_at(self.tenor, 0.3, self.curve.libors0)
        L1 = self.curve.libors0[1]
        self.assertAlmostEqual(
            float(short_rate(later, self.daycount, self.vol)), L1 / (1 + 0.2 * L1), places=15
        )

    def test_method_2_short_rate_is_positive(self):
        later = state_at(self.tenor, 0.3, self.curve.libors0)
        self.assertGreater(float(short_rate(later, self.shortvol, self.vol)), 0.0)


class TestSavingsAccount(unittest.TestCase):

    def setUp(self):
        self.tenor = TenorStructure.for_horizon(2.25)
        self.curve = build_initial_curve(3, self.tenor)
        self.vol = FlatVolatility(0.3)
        self.daycount = InterpolationScheme.daycount()
        self.shortvol = InterpolationScheme.short_bond_volatility()

    def test_short_rate_integral_full_period(self):
        for fixing in (0.01, 0.05, 0.2):
            self.assertAlmostEqual(
                float(short_rate_integral(fixing, 0.5, 0.25, 0.5)), math.log1p(0.25 * fixing),
                places=15,
            )

    def test_short_rate_integral_matches_quadrature(self):
        fixing = 0.07

        def rate(s):
            return fixing / (1 + (0.5 - s) * fixing)

        expected, _ = quad(rate, 0.3, 0.45, epsabs=1e-15)
        value = float(short_rate_integral(fixing, 0.5, 0.3, 0.45))
        self.assertAlmostEqual(value, expected, places=13)

    def test_method_1_savings_account_is_rolling_numeraire(self):
        for t in (0.3, 0.9, 1.6):
            state = state_at(self.tenor, t, self.curve.libors0)
            self.assertAlmostEqual(
                float(savings_account(state, self.daycount, self.vol)),
                float(rolling_numeraire(state, self.daycount, self.vol)),
                places=14,
            )

    def test_tenor_date(self):
        state = state_at(self.tenor, 0.5, self.curve.libors0)
        L = self.curve.libors0
        expected = (1 + 0.25 * L[0]) * (1 + 0.25 * L[1])
        self.assertAlmostEqual(float(savings_account(state, self.shortvol, self.vol)), expected)
        self.assertAlmostEqual(float(rolling_numeraire(state, self.shortvol, self.vol)), expected)

    def test_method_2_needs_short_rate_path(self):
        state = state_at(self.tenor, 0.3, self.curve.libors0)
        with self.assertRaises(StateFailure):
            savings_account(state, self.shortvol, self.vol)
        times = np.linspace(0.25, 0.3, 11)
        value = savings_account(state, self.shortvol, self.vol, (times, np.full(11, 0.06)))
        expected = (1 + 0.25 * self.curve.libors0[0]) * math.exp(0.06 * 0.05)
        self.assertAlmostEqual(float(value), expected, places=14)
        with self.assertRaises(StateFailure):
            savings_account(state, self.shortvol, self.vol, (times[:-1], np.full(10, 0.06)))


class TestBaseline(unittest.TestCase):

    def setUp(self):
        self.tenor = TenorStructure.for_horizon(10.0)
        self.curve = build_initial_curve(2, self.tenor)

    def test_tenor_dates(self):
        state = ModelState.initial(self.curve)
        for j in (0, 5, 17, 40):
            self.assertAlmostEqual(
                baseline_loglinear_zcb(self.curve, self.tenor.date(j)),
                float(discrete_bond(state, j)),
                places=14,
            )

    def test_forward(self):
        L = self.curve.libors0
        self.assertAlmostEqual(
            baseline_forward(self.curve, 4.3), math.log1p(0.25 * L[17]) / 0.25, places=14
        )
        self.assertAlmostEqual(
            baseline_forward(self.curve, 4.25, side="left"), math.log1p(0.25 * L[16]) / 0.25
        )
        with self.assertRaises(DomainFailure):
            baseline_forward(self.curve, 4.25)

    def test_flat_libor(self):
        curve = InitialCurve.flat(self.tenor, 0.05)
        for T in (0.1, 3.3, 9.7):
            self.assertAlmostEqual(baseline_libor(curve, T), 0.05, delta=1e-12)
        self.assertAlmostEqual(baseline_libor(self.curve, 4.25), self.curve.libors0[17], places=12)
        with self.assertRaises(DomainFailure):
            baseline_libor(curve, 9.8)


if __name__ == "__main__":
    unittest.main()
