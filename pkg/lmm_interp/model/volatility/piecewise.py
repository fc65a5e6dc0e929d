"""PiecewiseConstantVolatility Module

This module defines the PiecewiseConstantVolatility class, a volatility given
as a table of d-vectors indexed by calendar-time bucket and LIBOR maturity.

Classes:
    PiecewiseConstantVolatility: Represents a tabulated volatility.

"""

from pathlib import Path
from typing import Sequence, Union

import numpy as np
import pandas as pd

from lmm_interp.exception.domain_failure import DomainFailure
from lmm_interp.model import TENOR_DATE_TOLERANCE
from lmm_interp.model.volatility.abstract_volatility import AbstractVolatility

CSV_KEY_COLUMNS = ("time_start", "time_end", "maturity")


class PiecewiseConstantVolatility(AbstractVolatility):
    """
    Represents a volatility that is constant on calendar-time buckets for each
    tabulated maturity.

    Args:
        time_edges (sequence of float): Increasing bucket edges e_0 < ... < e_B,
            with e_0 <= 0 and e_B covering the last maturity.
        maturities (sequence of float): The tabulated maturities (usually the
            tenor dates T_0..T_{N-1}).
        values (array-like): Shape (B, M, d); values[b, m] is the volatility
            vector on bucket b for maturity m.

    Example:
        vol = PiecewiseConstantVolatility(
            time_edges=[0.0, 1.0, 2.0],
            maturities=[0.0, 1.0, 2.0],
            values=np.full((2, 3, 1), 0.2),
        )
    """

    def __init__(
        self,
        time_edges: Sequence[float],
        maturities: Sequence[float],
        values,
    ) -> None:
        values = np.asarray(values, dtype=float)
        if values.ndim != 3:
            raise DomainFailure("Piecewise volatility values must have shape (B, M, d).")
        super().__init__(values.shape[2])
        self.time_edges = np.asarray(time_edges, dtype=float)
        self.maturities = np.asarray(maturities, dtype=float)
        if self.time_edges.size != values.shape[0] + 1:
            raise DomainFailure("Expected one more time edge than volatility buckets.")
        if np.any(np.diff(self.time_edges) <= 0):
            raise DomainFailure("Time edges must be strictly increasing.")
        if self.maturities.size != values.shape[1]:
            raise DomainFailure("Expected one volatility column per maturity.")
        if not np.all(np.isfinite(values)):
            raise DomainFailure("Piecewise volatility values must be finite.")
        self.values = values

    @classmethod
    def from_csv(cls, path: Union[str, Path]) -> "PiecewiseConstantVolatility":
        """
        Read a volatility from a CSV file with columns (time_start, time_end,
        maturity) followed by one column per factor, and one row for every
        (bucket, maturity) pair.

        Raises:
            DomainFailure: If columns or rows are missing, or buckets overlap.
        """
        frame = pd.read_csv(path)
        missing = [column for column in CSV_KEY_COLUMNS if column not in frame.columns]
        if missing:
            raise DomainFailure(f"Volatility file {path} lacks columns {missing}.")
        factors = [column for column in frame.columns if column not in CSV_KEY_COLUMNS]
        if not factors:
            raise DomainFailure(f"Volatility file {path} has no factor columns.")
        starts = frame["time_start"].to_numpy(dtype=float)
        ends = frame["time_end"].to_numpy(dtype=float)
        rows = frame["maturity"].to_numpy(dtype=float)
        edges = np.unique(np.concatenate([starts, ends]))
        maturities = np.unique(rows)
        buckets = np.searchsorted(edges, starts)
        if np.any(buckets >= edges.size - 1) or np.any(edges[buckets + 1] != ends):
            raise DomainFailure(f"Buckets in {path} must be consecutive intervals.")
        if len(frame) != (edges.size - 1) * maturities.size:
            raise DomainFailure(f"Volatility file {path} needs one row per bucket and maturity.")
        values = np.full((edges.size - 1, maturities.size, len(factors)), np.nan)
        values[buckets, np.searchsorted(maturities, rows)] = frame[factors].to_numpy(dtype=float)
        if np.any(np.isnan(values)):
            raise DomainFailure(f"Volatility file {path} repeats a (bucket, maturity) row.")
        return cls(edges, maturities, values)

    def _maturity_index(self, T: float) -> int:
        matches = np.flatnonzero(np.abs(self.maturities - T) <= TENOR_DATE_TOLERANCE)
        if matches.size == 0:
            raise DomainFailure(f"Maturity {T} is not tabulated.")
        return int(matches[0])

    def _bucket(self, t: float) -> int:
        if t < self.time_edges[0] - TENOR_DATE_TOLERANCE or t > self.time_edges[-1]:
            raise DomainFailure(f"Time {t} outside the tabulated buckets.")
        return int(min(max(np.searchsorted(self.time_edges, t, side="right") - 1, 0),
                       self.values.shape[0] - 1))

    def _value(self, t: float, T: float) -> np.ndarray:
        return self.values[self._bucket(t), self._maturity_index(T)].copy()

    def _components(self, T_a: float, T_b: float, s0: float, s1: float) -> np.ndarray:
        if s0 < self.time_edges[0] - TENOR_DATE_TOLERANCE or s1 > self.time_edges[-1]:
            raise DomainFailure(f"Interval [{s0}, {s1}] outside the tabulated buckets.")
        a = self._maturity_index(T_a)
        b = self._maturity_index(T_b)
        lower = np.maximum(self.time_edges[:-1], s0)
        upper = np.minimum(self.time_edges[1:], s1)
        overlap = np.clip(upper - lower, 0.0, None)
        return np.einsum("k,kc,kc->c", overlap, self.values[:, a], self.values[:, b])

    def to_json(self) -> dict:
        """
        Convert the volatility parameters to a JSON representation.

        Returns:
            dict: A dictionary with the variant name, edges, maturities and values.
        """
        return {
            "type": "piecewise",
            "time_edges": self.time_edges.tolist(),
            "maturities": self.maturities.tolist(),
            "values": self.values.tolist(),
        }
