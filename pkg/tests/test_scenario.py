# pylint: skip-file

import tempfile
import unittest
from pathlib import Path

import numpy as np

from lmm_interp.exception.config_failure import ConfigFailure
from lmm_interp.model.curve import InitialCurve
from lmm_interp.model.tenor import TenorStructure
from lmm_interp.model.volatility.exponential import ExponentialVolatility
from lmm_interp.model.volatility.flat import FlatVolatility
from lmm_interp.model.volatility.piecewise import PiecewiseConstantVolatility
from lmm_interp.scenario import (
    FIGURE_COMMANDS,
    FIGURE_PRESETS,
    ScenarioConfig,
    parse_volatility,
    resolve_curve,
)
from lmm_interp.simulation import DiscretizationScheme


class TestScenarioDefaults(unittest.TestCase):

    def test_defaults(self):
        config = ScenarioConfig()
        self.assertIsNone(config.figure)
        self.assertEqual(config.t_star, 10.0)
        self.assertEqual(config.method, "all")
        self.assertEqual(config.tenor().n, 40)
        self.assertEqual([scheme.label for scheme in config.schemes()], ["1", "2"])

    def test_presets(self):
        self.assertEqual(sorted(FIGURE_PRESETS), list(range(1, 8)))
        self.assertEqual(sorted(FIGURE_COMMANDS), list(range(1, 8)))
        config = ScenarioConfig.for_figure(4)
        self.assertEqual(config.figure, 4)
        self.assertEqual(config.fixed_maturity, 1.8125)
        self.assertEqual(config.fixed_ttm, 0.3125)
        self.assertEqual(config.tenor().n, 9)
        self.assertEqual(ScenarioConfig.for_figure(3).window_start, 4.0)
        self.assertEqual(ScenarioConfig.for_figure(6, n_paths=2000).n_paths, 2000)
        with self.assertRaises(ConfigFailure):
            ScenarioConfig.for_figure(9)

    def test_schemes(self):
        self.assertTrue(ScenarioConfig(method="1").schemes()[0].is_daycount)
        self.assertFalse(ScenarioConfig(method="2").schemes()[0].is_daycount)
        self.assertEqual(ScenarioConfig(method="baseline").schemes(), [])

    def test_sweep_start(self):
        config = ScenarioConfig.for_figure(6)
        self.assertAlmostEqual(config.sweep_start(), 3.5)
        self.assertEqual(config.override(sweep_period_start=2.0).sweep_start(), 2.0)

    def test_mc_config(self):
        config = ScenarioConfig(n_paths=500, seed=9, scheme="pc", antithetic=True)
        mc = config.mc_config()
        self.assertEqual(mc.n_paths, 500)
        self.assertEqual(mc.seed, 9)
        self.assertTrue(mc.antithetic)
        self.assertIs(mc.scheme, DiscretizationScheme.PREDICTOR_CORRECTOR)
        self.assertTrue(mc.measure.is_spot)

    def test_override(self):
        config = ScenarioConfig.for_figure(6)
        changed = config.override(n_paths=300, seed=None, method="2")
        self.assertEqual(changed.n_paths, 300)
        self.assertEqual(changed.seed, config.seed)
        self.assertEqual(changed.method, "2")
        self.assertEqual(changed.t_star, 4.25)


class TestScenarioText(unittest.TestCase):

    def test_parse(self):
        text = (
            "# figure six at small size\n\n"
            "figure = 6\nn_paths = 2000  # quick\nantithetic = yes\n"
        )
        config = ScenarioConfig.from_text(text)
        self.assertEqual(config.figure, 6)
        self.assertEqual(config.t_star, 4.25)
        self.assertEqual(config.vol, "lambda2")
        self.assertEqual(config.n_paths, 2000)
        self.assertTrue(config.antithetic)

    def test_unknown_key(self):
        with self.assertRaises(ConfigFailure) as context:
            ScenarioConfig.from_text("t_star = 2.25\npaths = 10\n")
        self.assertEqual(context.exception.field, "paths")
        self.assertEqual(context.exception.line, 2)
        with self.assertRaises(ConfigFailure):
            ScenarioConfig(paths=10)

    def test_missing_separator(self):
        with self.assertRaises(ConfigFailure) as context:
            ScenarioConfig.from_text("\nt_star 2.25\n")
        self.assertEqual(context.exception.line, 2)

    def test_duplicate_key(self):
        with self.assertRaises(ConfigFailure) as context:
            ScenarioConfig.from_text("seed = 1\nseed = 2\n")
        self.assertEqual(context.exception.field, "seed")
        self.assertEqual(context.exception.line, 2)

    def test_invalid_value(self):
        with self.assertRaises(ConfigFailure) as context:
            ScenarioConfig.from_text("seed = 1\nn_paths = many\n")
        self.assertEqual(context.exception.field, "n_paths")
        self.assertEqual(context.exception.line, 2)
        self.assertIn("line 2", str(context.exception))
        with self.assertRaises(ConfigFailure):
            ScenarioConfig.from_text("antithetic = maybe\n")

    def test_round_trip(self):
        for config in (ScenarioConfig(), ScenarioConfig.for_figure(4, seed=3)):
            self.assertEqual(ScenarioConfig.from_text(config.to_text()), config)

    def test_figure_argument(self):
        config = ScenarioConfig.from_text("n_paths = 500\n", figure=6)
        self.assertEqual(config.figure, 6)
        self.assertEqual(config.t_star, 4.25)
        self.assertEqual(config.n_paths, 500)
        self.assertEqual(ScenarioConfig.from_text("figure = 6\n", figure=6).figure, 6)
        with self.assertRaises(ConfigFailure) as context:
            ScenarioConfig.from_text("figure = 6\n", figure=7)
        self.assertEqual(context.exception.field, "figure")

    def test_from_file(self):
        with tempfile.TemporaryDirectory() as directory:
            path = Path(directory) / "scenario.txt"
            path.write_text("figure = 1\nmethod = 2\n", encoding="utf-8")
            config = ScenarioConfig.from_file(path)
            self.assertEqual(config.method, "2")
            with self.assertRaises(ConfigFailure):
                ScenarioConfig.from_file(Path(directory) / "missing.txt")


class TestScenarioValidation(unittest.TestCase):

    def test_invalid_values(self):
        invalid = [
            ({"method": "3"}, "method"),
            ({"t_star": 10.1}, "t_star"),
            ({"sweep_points": 1}, "sweep_points"),
            ({"window_start": 4.0}, "window_start"),
            ({"window_start": 4.0, "window_end": 11.0}, "window_start"),
            ({"fixed_maturity": 12.0}, "fixed_maturity"),
            ({"fixed_ttm": 0.0}, "fixed_ttm"),
            ({"t_star": 4.25, "sweep_period_start": 4.0}, "sweep_period_start"),
            ({"n_paths": 1}, "n_paths"),
            ({"vol": "sabr"}, "vol"),
            ({"scheme": "milstein"}, "scheme"),
        ]
        for values, field in invalid:
            with self.subTest(values=values):
                with self.assertRaises(ConfigFailure) as context:
                    ScenarioConfig(**values)
                self.assertEqual(context.exception.field, field)


class TestResolvers(unittest.TestCase):

    def test_volatility_tokens(self):
        lambda1 = parse_volatility("lambda1")
        self.assertIsInstance(lambda1, FlatVolatility)
        np.testing.assert_allclose(lambda1.vol(0.0, 1.0), [0.3])
        lambda2 = parse_volatility(" Lambda2 ")
        self.assertIsInstance(lambda2, ExponentialVolatility)
        self.assertEqual(lambda2.dimension, 2)
        np.testing.assert_allclose(parse_volatility("flat:0.2").vol(0.0, 1.0), [0.2])
        self.assertEqual(parse_volatility("exp:0.5,0.1").dimension, 1)

    def test_invalid_volatility_tokens(self):
        for token in ("exp:0.5", "flat:x", "exp:", "bogus"):
            with self.subTest(token=token):
                with self.assertRaises(ConfigFailure) as context:
                    parse_volatility(token)
                self.assertEqual(context.exception.field, "vol")

    def test_curves(self):
        tenor = TenorStructure.for_horizon(2.25)
        self.assertAlmostEqual(resolve_curve("3", tenor).libors0[8], 0.10)
        with tempfile.TemporaryDirectory() as directory:
            path = Path(directory) / "curve.csv"
            InitialCurve.flat(tenor, 0.045).to_csv(path)
            np.testing.assert_allclose(resolve_curve(str(path), tenor).libors0, np.full(9, 0.045))
            with self.assertRaises(ConfigFailure) as context:
                resolve_curve(str(Path(directory) / "missing.csv"), tenor)
            self.assertEqual(context.exception.field, "initial_curve")
            with self.assertRaises(ConfigFailure):
                resolve_curve(str(path), TenorStructure.for_horizon(2.0))

    def test_piecewise_token(self):
        rows = ["time_start,time_end,maturity,factor_1", "0,1,0,0.2", "0,1,1,0.2"]
        with tempfile.TemporaryDirectory() as directory:
            path = Path(directory) / "Vol.csv"
            path.write_text("\n".join(rows) + "\n", encoding="utf-8")
            vol = parse_volatility(f"piecewise:{path}")
            self.assertIsInstance(vol, PiecewiseConstantVolatility)
            np.testing.assert_allclose(vol.vol(0.5, 1.0), [0.2])
            with self.assertRaises(ConfigFailure) as context:
                parse_volatility(f"piecewise:{Path(directory) / 'missing.csv'}")
            self.assertEqual(context.exception.field, "vol")

    def test_malformed_curve_file(self):
        tenor = TenorStructure.for_horizon(0.75)
        contents = {
            "empty": "",
            "text rate": "tenor_index,start_date_years,libor\n0,0.0,abc\n1,0.25,0.05\n2,0.5,0.05\n",
        }
        with tempfile.TemporaryDirectory() as directory:
            for name, text in contents.items():
                with self.subTest(curve=name):
                    path = Path(directory) / f"{name}.csv"
                    path.write_text(text, encoding="utf-8")
                    with self.assertRaises(ConfigFailure) as context:
                        resolve_curve(str(path), tenor)
                    self.assertEqual(context.exception.field, "initial_curve")


if __name__ == "__main__":
    unittest.main()
