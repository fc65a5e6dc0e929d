# pylint: skip-file

import unittest

import numpy as np

from lmm_interp.exception.config_failure import ConfigFailure
from lmm_interp.exception.domain_failure import DomainFailure
from lmm_interp.exception.state_failure import StateFailure
from lmm_interp.model.curve import InitialCurve, ModelState, build_initial_curve
from lmm_interp.model.interpolation import expected_libor_under_payment_measure
from lmm_interp.model.measure import MeasureTag
from lmm_interp.model.scheme import InterpolationScheme
from lmm_interp.model.tenor import TenorStructure
from lmm_interp.model.volatility.exponential import ExponentialVolatility
from lmm_interp.model.volatility.flat import FlatVolatility
from lmm_interp.pricing import CapletSpec, atm_strike, price_caplet_mc
from lmm_interp.simulation import (
    DiscretizationScheme,
    MCConfig,
    MCEstimate,
    estimate,
    path_normals,
    simulate_paths,
    time_grid,
)


class TestMCConfig(unittest.TestCase):

    def test_defaults(self):
        config = MCConfig()
        self.assertEqual(config.measure, MeasureTag.spot_rolling())
        self.assertIs(config.scheme, DiscretizationScheme.LOG_EULER)
        self.assertFalse(config.antithetic)

    def test_invalid(self):
        with self.assertRaises(ConfigFailure) as context:
            MCConfig(n_paths=1)
        self.assertEqual(context.exception.field, "n_paths")
        with self.assertRaises(ConfigFailure):
            MCConfig(n_paths=11, antithetic=True)
        with self.assertRaises(ConfigFailure) as context:
            MCConfig(seed=-1)
        self.assertEqual(context.exception.field, "seed")
        with self.assertRaises(ConfigFailure):
            MCConfig(seed=2**64)
        with self.assertRaises(ConfigFailure):
            MCConfig(steps_per_period=0)
        with self.assertRaises(ConfigFailure):
            MCConfig(chunk_size=3)

    def test_replace(self):
        config = MCConfig(n_paths=100, seed=5, antithetic=True)
        changed = config.replace(n_paths=6)
        self.assertEqual(changed.n_paths, 6)
        self.assertEqual(changed.seed, 5)
        self.assertTrue(changed.antithetic)
        self.assertEqual(config.n_paths, 100)

    def test_to_json(self):
        config = MCConfig(n_paths=10, measure=MeasureTag.forward(3), seed=2)
        self.assertEqual(
            config.to_json(),
            {
                "n_paths": 10,
                "steps_per_period": 4,
                "scheme": "log-euler",
                "measure": "forward:3",
                "seed": 2,
                "antithetic": False,
            },
        )

    def test_scheme_labels(self):
        pc = DiscretizationScheme.PREDICTOR_CORRECTOR
        self.assertIs(DiscretizationScheme.from_label("pc"), pc)
        self.assertIs(DiscretizationScheme.from_label("Predictor_Corrector"), pc)
        self.assertIs(DiscretizationScheme.from_label("euler"), DiscretizationScheme.LOG_EULER)
        with self.assertRaises(ConfigFailure):
            DiscretizationScheme.from_label("milstein")


class TestEstimate(unittest.TestCase):

    def test_plain(self):
        result = estimate([1.0, 2.0, 3.0, 4.0])
        self.assertAlmostEqual(result.mean, 2.5)
        self.assertAlmostEqual(result.std_error, 0.645497, places=6)
        self.assertEqual(result.n_paths, 4)

    def test_antithetic(self):
        result = estimate([1.0, 3.0, 2.0, 4.0], antithetic=True)
        self.assertAlmostEqual(result.mean, 2.5)
        self.assertAlmostEqual(result.std_error, 0.5)
        self.assertEqual(result.n_paths, 4)

    def test_invalid(self):
        with self.assertRaises(DomainFailure):
            estimate([1.0])
        with self.assertRaises(DomainFailure):
            estimate([1.0, 2.0, 3.0], antithetic=True)
        with self.assertRaises(DomainFailure):
            estimate([1.0, 2.0], antithetic=True)

    def test_interval(self):
        result = MCEstimate(1.0, 0.1, 10, ["note"])
        low, high = result.confidence_interval()
        self.assertAlmostEqual(low, 0.8)
        self.assertAlmostEqual(high, 1.2)
        self.assertTrue(result.contains(1.25))
        self.assertFalse(result.contains(1.35))
        self.assertEqual(result.to_json()["diagnostics"], ["note"])
        with self.assertRaises(StateFailure):
            MCEstimate(1.0, -0.1, 10)


class TestPathNormals(unittest.TestCase):

    def test_deterministic(self):
        np.testing.assert_array_equal(path_normals(7, 0, 4, 5), path_normals(7, 0, 4, 5))
        self.assertFalse(np.array_equal(path_normals(7, 0, 4, 5), path_normals(8, 0, 4, 5)))

    def test_chunk_invariant(self):
        whole = path_normals(7, 0, 6, 5)
        np.testing.assert_array_equal(whole[2:], path_normals(7, 2, 4, 5))

    def test_antithetic(self):
        draws = path_normals(7, 0, 4, 3, antithetic=True)
        np.testing.assert_array_equal(draws[1], -draws[0])
        np.testing.assert_array_equal(draws[3], -draws[2])
        np.testing.assert_array_equal(draws[0], path_normals(7, 0, 1, 3)[0])

    def test_moments(self):
        draws = path_normals(11, 0, 4000, 5)
        self.assertLess(abs(draws.mean()), 0.03)
        self.assertLess(abs(draws.std() - 1.0), 0.03)


class TestTimeGrid(unittest.TestCase):

    def setUp(self):
        self.tenor = TenorStructure.for_horizon(1.0)

    def test_subdivision(self):
        grid = time_grid(self.tenor, 1.0, 2)
        np.testing.assert_allclose(grid, np.linspace(0.0, 1.0, 9))

    def test_extra_times(self):
        grid = time_grid(self.tenor, 1.0, 2, [0.3])
        self.assertEqual(len(grid), 10)
        self.assertIn(0.3, grid)

    def test_merge_near_tenor_date(self):
        grid = time_grid(self.tenor, 1.0, 2, [0.25 + 1e-13])
        self.assertEqual(len(grid), 9)
        self.assertIn(0.25, grid)

    def test_broken_horizon(self):
        grid = time_grid(self.tenor, 0.6, 1)
        np.testing.assert_allclose(grid, [0.0, 0.25, 0.5, 0.6])


class TestSimulatePaths(unittest.TestCase):

    def setUp(self):
        self.tenor = TenorStructure.for_horizon(2.0)
        self.curve = InitialCurve.flat(self.tenor, 0.05)
        self.vol = FlatVolatility(0.3)

    def test_invalid_horizon(self):
        with self.assertRaises(DomainFailure):
            simulate_paths(self.curve, self.vol, MCConfig(n_paths=2), horizon=2.5)
        with self.assertRaises(DomainFailure):
            simulate_paths(
                self.curve, self.vol, MCConfig(n_paths=2, measure=MeasureTag.forward(2)), 1.0
            )

    def test_observation_times_need_observer(self):
        with self.assertRaises(ConfigFailure):
            simulate_paths(
                self.curve, self.vol, MCConfig(n_paths=2), 1.0, observation_times=[0.5]
            )
        with self.assertRaises(DomainFailure):
            simulate_paths(
                self.curve,
                self.vol,
                MCConfig(n_paths=2),
                1.0,
                observer=lambda state: state.libor(5),
                observation_times=[1.5],
            )

    def test_zero_volatility(self):
        for scheme in DiscretizationScheme:
            config = MCConfig(n_paths=4, scheme=scheme)
            result = simulate_paths(self.curve, FlatVolatility(0.0), config, 1.3)
            np.testing.assert_array_equal(result.final_state.libors, np.full((4, 8), 0.05))

    def test_chunk_size_invariant(self):
        config = MCConfig(n_paths=10, seed=3, chunk_size=4)
        small = simulate_paths(self.curve, self.vol, config, 1.0)
        large = simulate_paths(self.curve, self.vol, config.replace(chunk_size=4096), 1.0)
        np.testing.assert_allclose(small.final_state.libors, large.final_state.libors, rtol=1e-14)

    def test_fixings_recorded(self):
        result = simulate_paths(self.curve, self.vol, MCConfig(n_paths=4), 1.0)
        fixings = result.final_state.fixings
        self.assertTrue(np.all(np.isfinite(fixings[:, :5])))
        self.assertTrue(np.all(np.isnan(fixings[:, 5:])))
        np.testing.assert_array_equal(fixings[:, 4], result.final_state.libors[:, 4])

    def test_observations(self):
        result = simulate_paths(
            self.curve,
            self.vol,
            MCConfig(n_paths=6),
            1.0,
            observer=lambda state: state.libor(6),
            observation_times=[0.3, 0.0],
        )
        self.assertEqual(result.observation_times, [0.3, 0.0])
        self.assertEqual(result.observation(0).shape, (6,))
        np.testing.assert_array_equal(result.observation(1), np.full(6, 0.05))
        self.assertEqual(result.grid_index(0.3), int(np.argmin(np.abs(result.times - 0.3))))
        with self.assertRaises(DomainFailure):
            result.grid_index(0.31)

    def test_forward_measure_martingale(self):
        config = MCConfig(n_paths=20_000, seed=1, measure=MeasureTag.forward(4))
        result = simulate_paths(
            self.curve,
            self.vol,
            config,
            0.75,
            observer=lambda state: state.libor(3),
            observation_times=[0.75],
        )
        values = result.observation(0)
        self.assertTrue(estimate(values).contains(0.05, k=4.0))
        self.assertAlmostEqual(np.var(np.log(values)), 0.0675, delta=0.003)

    def test_antithetic_pairs(self):
        config = MCConfig(n_paths=8, seed=2, measure=MeasureTag.forward(4), antithetic=True)
        result = simulate_paths(self.curve, self.vol, config, 0.75)
        logs = np.log(result.final_state.libors[:, 3]).reshape(-1, 2).sum(axis=1)
        np.testing.assert_allclose(logs - 2 * np.log(0.05), -0.0675, atol=1e-12)

    def test_radon_nikodym(self):
        config = MCConfig(n_paths=20_000, seed=4, measure=MeasureTag.forward(4))
        result = simulate_paths(self.curve, self.vol, config, 0.75, record=True)
        self.assertEqual(result.libor_paths.shape[0], 20_000)
        density = result.radon_nikodym(3, 0.75)
        self.assertTrue(estimate(density).contains(1.0, k=4.0))
        state = ModelState.initial(self.curve)
        expected = float(expected_libor_under_payment_measure(state, self.vol, 3, 0.75))
        reweighted = estimate(density * result.final_state.libors[:, 3])
        self.assertTrue(reweighted.contains(expected, k=4.0))
        with self.assertRaises(StateFailure):
            result.radon_nikodym(2, 0.75)

    def test_radon_nikodym_needs_record(self):
        result = simulate_paths(
            self.curve, self.vol, MCConfig(n_paths=2, measure=MeasureTag.forward(4)), 0.75
        )
        with self.assertRaises(StateFailure):
            result.radon_nikodym(3)


class TestSchemeAgreement(unittest.TestCase):

    def test_caplet_prices_agree(self):
        tenor = TenorStructure.for_horizon(4.25)
        curve = build_initial_curve(3, tenor)
        vol = ExponentialVolatility.two_factor(0.6, 0.8, 0.1, 0.01)
        for scheme in (InterpolationScheme.daycount(), InterpolationScheme.short_bond_volatility()):
            with self.subTest(method=scheme.label):
                spec = CapletSpec(3.6, atm_strike(curve, scheme, vol, 3.6))
                prices = [
                    price_caplet_mc(
                        spec, curve, vol, scheme,
                        MCConfig(n_paths=40_000, seed=1, scheme=stepping),
                    )
                    for stepping in DiscretizationScheme
                ]
                euler, corrected = prices
                combined = np.hypot(euler.std_error, corrected.std_error)
                self.assertGreater(combined, 0.0)
                self.assertLessEqual(abs(euler.mean - corrected.mean), 3.0 * combined)
                self.assertEqual(euler.diagnostics, [])


if __name__ == "__main__":
    unittest.main()
