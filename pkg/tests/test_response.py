# pylint: skip-file

import tempfile
import unittest
from pathlib import Path

import pandas as pd

from lmm_interp.response import (
    CheckResponse,
    CheckResult,
    DynamicsResponse,
    ImpliedVolResponse,
    SweepResponse,
)


class TestFrameResponse(unittest.TestCase):

    def setUp(self):
        self.frame = pd.DataFrame(
            {
                "series": ["forward", "forward", "libor", "forward"],
                "maturity": [0.5, 0.25, 0.25, 0.25],
                "value": [0.051, 0.05, 0.0500000000001234, 0.049],
                "method": ["1", "1", "1", "2"],
                "diagnostic": ["", "", "", "method 2 fell back"],
            }
        )
        self.response = SweepResponse({"status": "Ok", "message": "sweep", "content": self.frame})

    def test_getters(self):
        self.assertTrue(self.response.is_status_ok())
        self.assertEqual(self.response.get_message(), "sweep")
        self.assertIs(self.response.get_frame(), self.frame)

    def test_defaults(self):
        response = SweepResponse({"content": self.frame})
        self.assertEqual(response.get_status(), "Ok")
        self.assertEqual(response.get_message(), "")
        self.assertFalse(SweepResponse({"status": "Failed", "content": self.frame}).is_status_ok())

    def test_series(self):
        forwards = self.response.series("forward", "1")
        self.assertEqual(forwards["maturity"].tolist(), [0.25, 0.5])

    def test_diagnostics(self):
        self.assertEqual(self.response.get_diagnostics(), ["method 2 fell back"])
        plain = DynamicsResponse({"content": pd.DataFrame({"time": [0.1], "value": [0.05]})})
        self.assertEqual(plain.get_diagnostics(), [])

    def test_write_csv(self):
        with tempfile.TemporaryDirectory() as directory:
            path = self.response.write_csv(Path(directory) / "out" / "figure1.csv")
            self.assertTrue(path.exists())
            lines = path.read_text(encoding="utf-8").splitlines()
            self.assertEqual(lines[0], "series,maturity,value,method,diagnostic")
            self.assertEqual(len(lines), 5)
            self.assertIn("0.0500000000001", lines[3])
            self.assertNotIn("0.0500000000001234", lines[3])

    def test_trace_and_method(self):
        dynamics = DynamicsResponse(
            {
                "content": pd.DataFrame(
                    {
                        "time": [0.2, 0.1],
                        "rate_kind": ["short_rate", "short_rate"],
                        "value": [0.051, 0.05],
                        "method": ["1", "1"],
                    }
                )
            }
        )
        self.assertEqual(dynamics.trace("short_rate", "1")["time"].tolist(), [0.1, 0.2])
        impvol = ImpliedVolResponse(
            {"content": pd.DataFrame({"T": [3.75, 3.5], "method": ["2", "2"]})}
        )
        self.assertEqual(impvol.for_method("2")["T"].tolist(), [3.5, 3.75])
        self.assertTrue(impvol.for_method("1").empty)


class TestCheckResponse(unittest.TestCase):

    def test_all_passed(self):
        response = CheckResponse([CheckResult("a", True, "ok"), CheckResult("b", True, "ok")])
        self.assertTrue(response.is_status_ok())
        self.assertEqual(response.get_message(), "2/2 checks passed")
        self.assertEqual(response.get_failures(), [])

    def test_failure(self):
        failed = CheckResult("b", False, "outside 3 SE")
        response = CheckResponse([CheckResult("a", True, "ok"), failed])
        self.assertEqual(response.get_status(), "Failed")
        self.assertEqual(response.get_message(), "1/2 checks passed")
        self.assertEqual(response.get_failures(), [failed])
        frame = response.get_frame()
        self.assertEqual(list(frame.columns), ["name", "passed", "detail"])
        self.assertEqual(frame["passed"].tolist(), [True, False])


if __name__ == "__main__":
    unittest.main()
