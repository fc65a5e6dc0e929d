"""
The `lmm_interp.model.curve` module holds the discrete tenor model state: the
initial curve of forward LIBORs, the live forward LIBORs and recorded spot
fixings along a path, and exact zero coupon bond ratios between tenor dates.

Classes:
    InitialCurve: The initial discrete tenor forward LIBORs L(0, T_i).
    ModelState: Live forward LIBORs and recorded fixings at a time t.

Functions:
    build_initial_curve(scenario_id, tenor): One of the three appendix curves.
    discrete_bond(state, j): Bond ratio B(t, T_j) / B(t, T_{eta(t)}).
    advance_fixing(state, i): Record the spot fixing L(T_i, T_i).

Usage:
    tenor = TenorStructure.for_horizon(4.25)
    curve = build_initial_curve(3, tenor)
    state = ModelState.initial(curve)
    discrete_bond(state, 4)

Note:
    A ModelState may hold a single path (libors of shape (N,)) or a bundle of
    paths (shape (P, N)); every operation of the model broadcasts over the
    leading axes, while times and tenor indices are shared by all paths.
"""

import logging
from pathlib import Path
from typing import Union

import numpy as np
import pandas as pd

from lmm_interp.exception.domain_failure import DomainFailure
from lmm_interp.exception.state_failure import StateFailure
from lmm_interp.model import TENOR_DATE_TOLERANCE
from lmm_interp.model.tenor import TenorStructure

logger = logging.getLogger(__name__)

SCENARIO_KNOTS = {
    1: ([0.0, 5.0, 10.0], [0.04, 0.06, 0.04]),
    2: ([0.0, 4.25, 4.75, 5.5, 10.0], [0.05, 0.067, 0.065, 0.068, 0.05]),
}

CSV_COLUMNS = ["tenor_index", "start_date_years", "libor"]


class InitialCurve:
    """
    Represents the initial term structure of discrete tenor forward LIBORs.

    Attributes:
        tenor (TenorStructure): The tenor structure the curve lives on.
        libors0 (np.ndarray): L(0, T_i) for i = 0..N-1, simple rates per year.

    Methods:
        to_frame(): The curve as a pandas DataFrame.
        to_csv(path): Write the curve as CSV.
        from_csv(path, tenor): Read a curve from CSV.
        flat(tenor, level): A flat curve.
    """

    def __init__(self, tenor: TenorStructure, libors0) -> None:
        """
        Initialize an InitialCurve instance.

        Args:
            tenor (TenorStructure): The tenor structure.
            libors0 (array-like): The N initial forward LIBORs.

        Raises:
            DomainFailure: On a length mismatch or a non-positive rate.
        """
        libors0 = np.array(libors0, dtype=float)
        if libors0.shape != (tenor.n,):
            raise DomainFailure(
                f"Expected {tenor.n} initial LIBORs, got shape {libors0.shape}."
            )
        if not np.all(np.isfinite(libors0)) or np.any(libors0 <= 0):
            raise DomainFailure("Initial forward LIBORs must be finite and strictly positive.")
        libors0.setflags(write=False)
        self.tenor = tenor
        self.libors0 = libors0

    @classmethod
    def flat(cls, tenor: TenorStructure, level: float) -> "InitialCurve":
        """
        Build a flat curve L(0, T_i) = level.
        """
        return cls(tenor, np.full(tenor.n, level))

    def to_frame(self) -> pd.DataFrame:
        """
        Return the curve as a DataFrame with columns
        (tenor_index, start_date_years, libor).
        """
        return pd.DataFrame(
            {
                "tenor_index": np.arange(self.tenor.n),
                "start_date_years": self.tenor.dates()[:-1],
                "libor": self.libors0,
            },
            columns=CSV_COLUMNS,
        )

    def to_csv(self, path: Union[str, Path]) -> None:
        """
        Write the curve as CSV with a one-line header.
        """
        self.to_frame().to_csv(path, index=False, float_format="%.12g")

    @classmethod
    def from_csv(cls, path: Union[str, Path], tenor: TenorStructure) -> "InitialCurve":
        """
        Read a curve from a CSV file with columns
        (tenor_index, start_date_years, libor).

        Raises:
            DomainFailure: If the columns or the start dates do not match the tenor.
        """
        frame = pd.read_csv(path)
        missing = [column for column in CSV_COLUMNS if column not in frame.columns]
        if missing:
            raise DomainFailure(f"Curve file {path} lacks columns {missing}.")
        frame = frame.sort_values("tenor_index")
        expected = tenor.dates()[:-1]
        starts = frame["start_date_years"].to_numpy(dtype=float)
        if starts.shape != expected.shape or np.any(np.abs(starts - expected) > 1e-9):
            raise DomainFailure(f"Start dates in {path} do not match {tenor!r}.")
        return cls(tenor, frame["libor"].to_numpy(dtype=float))


def build_initial_curve(scenario_id: int, tenor: TenorStructure) -> InitialCurve:
    """
    Build one of the three appendix term structures of forward LIBORs,
    sampled at the start dates T_0..T_{N-1}.

    Args:
        scenario_id (int): 1 (4%->6%->4% over 10y), 2 (kinked 5%..6.8%..5%),
            or 3 (5% rising linearly to 10% at T* - delta).
        tenor (TenorStructure): The tenor structure to sample on.

    Returns:
        InitialCurve: The sampled curve.

    Raises:
        DomainFailure: On an unknown scenario id.
    """
    starts = tenor.dates()[:-1]
    if scenario_id in SCENARIO_KNOTS:
        knots, rates = SCENARIO_KNOTS[scenario_id]
        return InitialCurve(tenor, np.interp(starts, knots, rates))
    if scenario_id == 3:
        last_start = tenor.horizon - tenor.delta
        return InitialCurve(tenor, 0.05 + 0.05 * (starts - tenor.t0) / (last_start - tenor.t0))
    raise DomainFailure(f"Unknown initial term structure {scenario_id}; expected 1, 2 or 3.")


class ModelState:
    """
    Represents the discrete tenor model at time t.

    The libors array always has N entries along its last axis. Entries whose
    start date T_i is at or before t are dead: they hold the spot fixing
    L(T_i, T_i) and no longer diffuse. The fixings array holds the recorded
    fixings for T_i <= t and NaN for the others.

    Attributes:
        tenor (TenorStructure): The tenor structure.
        t (float): The current time.
        libors (np.ndarray): Shape (..., N) forward LIBORs L(t, T_i).
        fixings (np.ndarray): Shape (..., N) spot fixings L(T_i, T_i) or NaN.

    Methods:
        initial(curve): The state at T_0.
        live_index(): The first index whose rate still diffuses.
        libor(i): L(t, T_i), the fixing for dead rates.
        fixing(i): L(T_i, T_i), raising if not fixed yet.
        replace(...): A copy with some fields replaced.
        bumped(i, factor): A copy with L(t, T_i) scaled by factor.
    """

    def __init__(self, tenor: TenorStructure, t: float, libors, fixings) -> None:
        """
        Initialize a ModelState instance.

        Raises:
            DomainFailure: If t is outside [T_0, T_N] or shapes disagree.
            StateFailure: If a rate is negative or a required fixing is missing.
        """
        libors = np.asarray(libors, dtype=float)
        fixings = np.asarray(fixings, dtype=float)
        if t < tenor.t0 - TENOR_DATE_TOLERANCE or t > tenor.horizon + TENOR_DATE_TOLERANCE:
            raise DomainFailure(f"State time {t} outside [{tenor.t0}, {tenor.horizon}].")
        if libors.shape[-1:] != (tenor.n,) or fixings.shape != libors.shape:
            raise DomainFailure("LIBOR and fixing arrays must both have N entries per path.")
        if not np.all(np.isfinite(libors)) or np.any(libors < 0):
            raise StateFailure("Forward LIBORs must be finite and non-negative.")
        self.tenor = tenor
        self.t = float(t)
        self.libors = libors
        self.fixings = fixings
        if np.any(np.isnan(fixings[..., : self._passed_count()])):
            raise StateFailure(f"Missing spot fixings before time {t}.")

    @classmethod
    def initial(cls, curve: InitialCurve) -> "ModelState":
        """
        Return the state at T_0, with the spot fixing L(T_0, T_0) recorded.
        """
        libors = np.array(curve.libors0, dtype=float)
        fixings = np.full_like(libors, np.nan)
        fixings[0] = libors[0]
        return cls(curve.tenor, curve.tenor.t0, libors, fixings)

    def _passed_count(self) -> int:
        # number of start dates T_i strictly before t
        index = self.tenor.tenor_index(self.t)
        if index is not None:
            return min(index, self.tenor.n)
        return min(int(np.floor((self.t - self.tenor.t0) / self.tenor.delta)) + 1, self.tenor.n)

    def live_index(self) -> int:
        """
        Return the smallest index i with T_i > t; rates from there on diffuse.
        """
        index = self.tenor.tenor_index(self.t)
        if index is not None:
            return min(index + 1, self.tenor.n)
        return self._passed_count()

    def libor(self, i: int) -> np.ndarray:
        """
        Return L(t, T_i) across paths (the fixing when T_i <= t).

        Raises:
            DomainFailure: If i is outside 0..N-1.
        """
        if i < 0 or i >= self.tenor.n:
            raise DomainFailure(f"LIBOR index {i} outside 0..{self.tenor.n - 1}.")
        return self.libors[..., i]

    def fixing(self, i: int) -> np.ndarray:
        """
        Return the spot fixing L(T_i, T_i) across paths.

        Raises:
            StateFailure: If T_i has not been reached.
        """
        if i < 0 or i >= self.tenor.n:
            raise DomainFailure(f"Fixing index {i} outside 0..{self.tenor.n - 1}.")
        value = self.fixings[..., i]
        if np.any(np.isnan(value)):
            raise StateFailure(f"No fixing recorded for T_{i} at time {self.t}.")
        return value

    def is_fixed(self, i: int) -> bool:
        """Whether the fixing for T_i has been recorded on every path."""
        return bool(np.all(~np.isnan(self.fixings[..., i])))

    def replace(self, t=None, libors=None, fixings=None) -> "ModelState":
        """
        Return a copy with the given fields replaced.
        """
        return ModelState(
            self.tenor,
            self.t if t is None else t,
            self.libors if libors is None else libors,
            self.fixings if fixings is None else fixings,
        )

    def bumped(self, i: int, factor: float) -> "ModelState":
        """
        Return a copy with L(t, T_i) multiplied by factor (and the fixing too
        when T_i is already fixed).
        """
        libors = np.array(self.libors, copy=True)
        libors[..., i] = libors[..., i] * factor
        fixings = self.fixings
        if not np.all(np.isnan(fixings[..., i])):
            fixings = np.array(fixings, copy=True)
            fixings[..., i] = fixings[..., i] * factor
        return self.replace(libors=libors, fixings=fixings)

    @property
    def n_paths(self) -> int:
        """The number of paths held (1 for a single-path state)."""
        return int(np.prod(self.libors.shape[:-1], dtype=int))


def discrete_bond(state: ModelState, j: int) -> np.ndarray:
    """
    Return B(t, T_j) / B(t, T_{eta(t)}) = prod_{i=eta(t)}^{j-1} (1 + delta L(t, T_i))^{-1}.

    At a tenor date t = T_k this is the bond price B(T_k, T_j) itself.

    Args:
        state (ModelState): The model state at time t.
        j (int): The maturity index, with T_j >= t.

    Returns:
        np.ndarray: The bond ratio across paths.

    Raises:
        DomainFailure: If j is outside 0..N or T_j < t.
    """
    tenor = state.tenor
    if j < 0 or j > tenor.n:
        raise DomainFailure(f"Bond maturity index {j} outside 0..{tenor.n}.")
    if tenor.date(j) < state.t - TENOR_DATE_TOLERANCE:
        raise DomainFailure(f"Bond maturity T_{j} lies before the state time {state.t}.")
    start = tenor.tenor_index(state.t)
    if start is None:
        start = tenor.eta(state.t)
    growth = 1.0 + tenor.delta * state.libors[..., start:j]
    return 1.0 / np.prod(growth, axis=-1)


def advance_fixing(state: ModelState, i: int) -> ModelState:
    """
    Record the spot fixing L(T_i, T_i) when the state time reaches T_i.

    The rate keeps its value in the libors array (it is used by method-1
    interpolation over (T_i, T_{i+1}]) but no longer diffuses.

    Args:
        state (ModelState): A state at time T_i whose fixing i is not recorded.
        i (int): The tenor index.

    Returns:
        ModelState: The state with the fixing recorded.

    Raises:
        StateFailure: If the state time is not T_i or the fixing already exists.
    """
    if state.tenor.tenor_index(state.t) != i or i >= state.tenor.n:
        raise StateFailure(f"Cannot fix L(T_{i}, T_{i}) at time {state.t}.")
    if not np.all(np.isnan(state.fixings[..., i])):
        raise StateFailure(f"L(T_{i}, T_{i}) is already fixed.")
    fixings = np.array(state.fixings, copy=True)
    fixings[..., i] = state.libors[..., i]
    return ModelState(state.tenor, state.t, state.libors, fixings)
