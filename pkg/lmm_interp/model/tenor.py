"""TenorStructure Module

This module defines the TenorStructure class, the discrete grid of dates
T_0, ..., T_N with uniform accrual length delta on which forward LIBORs are
modelled, together with the eta index function used by every other module.

Classes:
    TenorStructure: Represents a uniform discrete tenor structure.

Usage:
    tenor = TenorStructure(delta=0.25, n=8)

    tenor.eta(0.3)               # 2
    tenor.next_tenor_date(0.3)   # 0.5
    tenor.tenor_index(0.75)      # 3
"""

import math
from typing import Optional

import numpy as np

from lmm_interp.exception.domain_failure import DomainFailure
from lmm_interp.model import DEFAULT_DELTA, TENOR_DATE_TOLERANCE


class TenorStructure:
    """
    Represents a uniform discrete tenor structure {T_0, ..., T_N}.

    Dates are never stored as accumulated sums: T_i is always computed as
    t0 + i * delta, and an arbitrary time is classified as a tenor date when
    it lies within TENOR_DATE_TOLERANCE years of one.

    Attributes:
        t0 (float): The time origin T_0.
        delta (float): The accrual length delta in years.
        n (int): The number of tenor dates beyond the origin (N).

    Methods:
        date(i): The tenor date T_i.
        dates(): All tenor dates as an array.
        horizon: The final tenor date T_N.
        tenor_index(t): The index i with T_i == t, or None.
        is_tenor_date(t): Whether t is a tenor date.
        eta(t): The index of the next tenor date at or after t.
        period_of(t): The accrual period (T_{k-1}, T_k] containing t.
        next_tenor_date(t): T_{eta(t)}.
        to_json(): A JSON representation of the tenor structure.
    """

    def __init__(self, delta: float = DEFAULT_DELTA, n: int = 2, t0: float = 0.0) -> None:
        """
        Initialize a TenorStructure instance.

        Args:
            delta (float): The accrual length in years, strictly positive.
            n (int): The number of tenor dates beyond the origin, at least 2.
            t0 (float): The time origin (default 0).

        Raises:
            DomainFailure: If delta is not positive or n is smaller than 2.
        """
        if not delta > 0 or not math.isfinite(delta):
            raise DomainFailure(f"Accrual length must be positive, got {delta}.")
        if int(n) != n or n < 2:
            raise DomainFailure(f"A tenor structure needs at least 2 periods, got {n}.")
        self.t0 = float(t0)
        self.delta = float(delta)
        self.n = int(n)

    @classmethod
    def from_dates(cls, dates) -> "TenorStructure":
        """
        Build a tenor structure from an explicit list of dates.

        Args:
            dates (sequence of float): The dates T_0 < T_1 < ... < T_N.

        Returns:
            TenorStructure: The equivalent uniform tenor structure.

        Raises:
            DomainFailure: If the dates are not uniformly spaced.
        """
        dates = np.asarray(dates, dtype=float)
        if dates.ndim != 1 or dates.size < 3:
            raise DomainFailure("A tenor structure needs at least three dates.")
        steps = np.diff(dates)
        if np.any(np.abs(steps - steps[0]) > TENOR_DATE_TOLERANCE):
            raise DomainFailure("Only uniformly spaced tenor structures are supported.")
        return cls(delta=float(steps[0]), n=dates.size - 1, t0=float(dates[0]))

    @classmethod
    def for_horizon(cls, t_star: float, delta: float = DEFAULT_DELTA) -> "TenorStructure":
        """
        Build the tenor structure starting at 0 with final date t_star.

        Raises:
            DomainFailure: If t_star is not a whole number of accrual periods.
        """
        n = round(t_star / delta)
        if abs(n * delta - t_star) > TENOR_DATE_TOLERANCE * max(1.0, t_star):
            raise DomainFailure(
                f"Horizon {t_star} is not a multiple of the accrual length {delta}."
            )
        return cls(delta=delta, n=n)

    @property
    def horizon(self) -> float:
        """The final tenor date T_N (also written T*)."""
        return self.date(self.n)

    def date(self, i: int) -> float:
        """
        Return the tenor date T_i.

        Raises:
            DomainFailure: If i is outside 0..N.
        """
        if i < 0 or i > self.n:
            raise DomainFailure(f"Tenor index {i} outside 0..{self.n}.")
        return self.t0 + i * self.delta

    def dates(self) -> np.ndarray:
        """Return all tenor dates T_0..T_N."""
        return self.t0 + np.arange(self.n + 1) * self.delta

    def tenor_index(self, t: float) -> Optional[int]:
        """
        Return i when t equals the tenor date T_i (within tolerance), else None.
        """
        position = (t - self.t0) / self.delta
        i = round(position)
        if abs(self.t0 + i * self.delta - t) <= TENOR_DATE_TOLERANCE and 0 <= i <= self.n:
            return int(i)
        return None

    def is_tenor_date(self, t: float) -> bool:
        """Whether t is one of the tenor dates."""
        return self.tenor_index(t) is not None

    def period_of(self, t: float) -> int:
        """
        Return the index k of the accrual period (T_{k-1}, T_k] containing t.

        Unlike eta this is also defined at T_N (giving N); it is the period in
        which a simulation step ending at t lies.

        Raises:
            DomainFailure: If t is not in (T_0, T_N].
        """
        i = self.tenor_index(t)
        if i is not None:
            if i == 0:
                raise DomainFailure("The origin T_0 does not close an accrual period.")
            return i
        if t < self.t0 or t > self.horizon:
            raise DomainFailure(f"Time {t} outside ({self.t0}, {self.horizon}].")
        return int(math.ceil((t - self.t0) / self.delta))

    def eta(self, t: float) -> int:
        """
        Return eta(t) = max{i in 1..N : T_{i-1} < t}, and 0 at t = T_0.

        Args:
            t (float): A time in [T_0, T_N).

        Returns:
            int: The index of the next tenor date at or after t.

        Raises:
            DomainFailure: If t is outside [T_0, T_N).
        """
        i = self.tenor_index(t)
        if i == self.n or t > self.horizon or t < self.t0 - TENOR_DATE_TOLERANCE:
            raise DomainFailure(f"eta is defined on [{self.t0}, {self.horizon}), got {t}.")
        if i is not None:
            return i
        return int(math.ceil((t - self.t0) / self.delta))

    def next_tenor_date(self, t: float) -> float:
        """
        Return T_{eta(t)}, the next tenor date at or after t.

        Raises:
            DomainFailure: As eta.
        """
        return self.date(self.eta(t))

    def to_json(self) -> dict:
        """
        Convert the tenor structure to a JSON representation.

        Returns:
            dict: A dictionary with the origin, accrual length and date count.
        """
        return {"t0": self.t0, "delta": self.delta, "n": self.n}

    def __eq__(self, other) -> bool:
        if not isinstance(other, TenorStructure):
            return NotImplemented
        return self.to_json() == other.to_json()

    def __hash__(self) -> int:
        return hash((self.t0, self.delta, self.n))

    def __repr__(self) -> str:
        return f"TenorStructure(delta={self.delta}, n={self.n}, t0={self.t0})"
