# pylint: skip-file

import unittest

import numpy as np

from lmm_interp.exception.domain_failure import DomainFailure
from lmm_interp.model.tenor import TenorStructure


class TestTenorStructure(unittest.TestCase):

    def setUp(self):
        self.tenor = TenorStructure(delta=0.25, n=8)

    def test_dates(self):
        self.assertEqual(self.tenor.date(0), 0.0)
        self.assertEqual(self.tenor.date(3), 0.75)
        self.assertEqual(self.tenor.horizon, 2.0)
        np.testing.assert_allclose(self.tenor.dates(), np.arange(9) * 0.25)

    def test_date_out_of_range(self):
        with self.assertRaises(DomainFailure):
            self.tenor.date(9)
        with self.assertRaises(DomainFailure):
            self.tenor.date(-1)

    def test_eta(self):
        self.assertEqual(self.tenor.eta(0.0), 0)
        self.assertEqual(self.tenor.eta(0.1), 1)
        self.assertEqual(self.tenor.eta(0.25), 1)
        self.assertEqual(self.tenor.eta(0.3), 2)
        self.assertEqual(self.tenor.eta(1.9), 8)

    def test_eta_at_tenor_dates_within_tolerance(self):
        self.assertEqual(self.tenor.eta(0.75 + 1e-13), 3)
        self.assertEqual(self.tenor.eta(0.75 - 1e-13), 3)

    def test_eta_rejects_horizon(self):
        with self.assertRaises(DomainFailure):
            self.tenor.eta(2.0)
        with self.assertRaises(DomainFailure):
            self.tenor.eta(2.5)
        with self.assertRaises(DomainFailure):
            self.tenor.eta(-0.1)

    def test_period_of(self):
        self.assertEqual(self.tenor.period_of(0.1), 1)
        self.assertEqual(self.tenor.period_of(0.25), 1)
        self.assertEqual(self.tenor.period_of(2.0), 8)
        with self.assertRaises(DomainFailure):
            self.tenor.period_of(0.0)

    def test_next_tenor_date(self):
        self.assertEqual(self.tenor.next_tenor_date(0.3), 0.5)
        self.assertEqual(self.tenor.next_tenor_date(0.5), 0.5)

    def test_tenor_index(self):
        self.assertEqual(self.tenor.tenor_index(0.75), 3)
        self.assertIsNone(self.tenor.tenor_index(0.3))
        self.assertIsNone(self.tenor.tenor_index(0.75 + 1e-9))
        self.assertTrue(self.tenor.is_tenor_date(2.0))
        self.assertFalse(self.tenor.is_tenor_date(2.25))

    def test_for_horizon(self):
        tenor = TenorStructure.for_horizon(10.0)
        self.assertEqual(tenor.n, 40)
        self.assertEqual(TenorStructure.for_horizon(4.25).n, 17)
        with self.assertRaises(DomainFailure):
            TenorStructure.for_horizon(2.3)

    def test_from_dates(self):
        tenor = TenorStructure.from_dates([0.0, 0.5, 1.0, 1.5])
        self.assertEqual(tenor.delta, 0.5)
        self.assertEqual(tenor.n, 3)
        with self.assertRaises(DomainFailure):
            TenorStructure.from_dates([0.0, 0.5, 1.2])

    def test_invalid_construction(self):
        with self.assertRaises(DomainFailure):
            TenorStructure(delta=0.0, n=4)
        with self.assertRaises(DomainFailure):
            TenorStructure(delta=0.25, n=1)

    def test_to_json_and_equality(self):
        self.assertEqual(self.tenor.to_json(), {"t0": 0.0, "delta": 0.25, "n": 8})
        self.assertEqual(self.tenor, TenorStructure.for_horizon(2.0))
        self.assertNotEqual(self.tenor, TenorStructure.for_horizon(2.25))


if __name__ == "__main__":
    unittest.main()
