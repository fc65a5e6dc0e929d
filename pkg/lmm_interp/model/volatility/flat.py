"""FlatVolatility Module

This module defines the FlatVolatility class, a constant one-factor
volatility lambda(t, T) = level.

Classes:
    FlatVolatility: Represents a constant one-factor volatility.

"""

import math

import numpy as np

from lmm_interp.exception.domain_failure import DomainFailure
from lmm_interp.model.volatility.abstract_volatility import AbstractVolatility


class FlatVolatility(AbstractVolatility):
    """
    Represents a constant one-factor volatility.

    Args:
        level (float): The constant relative volatility per sqrt-year.

    Example:
        lambda_1 = FlatVolatility(0.3)
    """

    def __init__(self, level: float) -> None:
        super().__init__(1)
        if not math.isfinite(level):
            raise DomainFailure(f"Volatility level must be finite, got {level}.")
        self.level = float(level)

    def _value(self, t: float, T: float) -> np.ndarray:
        return np.array([self.level])

    def _components(self, T_a: float, T_b: float, s0: float, s1: float) -> np.ndarray:
        return np.array([self.level * self.level * (s1 - s0)])

    def to_json(self) -> dict:
        """
        Convert the volatility parameters to a JSON representation.

        Returns:
            dict: A dictionary with the variant name and level.
        """
        return {"type": "flat", "level": self.level}
