"""ExponentialVolatility Module

This module defines the ExponentialVolatility class, a multi-factor volatility
whose component c decays exponentially in time to maturity:
lambda_c(t, T) = a_c * exp(-b_c * (T - t)).

Classes:
    ExponentialVolatility: Represents an exponentially decaying volatility.

"""

import math
from typing import Sequence, Tuple

import numpy as np

from lmm_interp.exception.domain_failure import DomainFailure
from lmm_interp.model.volatility.abstract_volatility import AbstractVolatility


class ExponentialVolatility(AbstractVolatility):
    """
    Represents a volatility with exponentially decaying factors.

    Every component is a scaled exponential of the time to maturity, so the
    integrated covariances have closed forms.

    Args:
        factors (sequence of (a, b) pairs): Level a and decay rate b per factor.

    Example:
        lambda_2 = ExponentialVolatility([(0.6, 0.8), (0.1, 0.01)])
    """

    def __init__(self, factors: Sequence[Tuple[float, float]]) -> None:
        factors = [(float(a), float(b)) for a, b in factors]
        super().__init__(len(factors))
        for a, b in factors:
            if not (math.isfinite(a) and math.isfinite(b)):
                raise DomainFailure("Exponential volatility parameters must be finite.")
        self.levels = np.array([a for a, _ in factors])
        self.decays = np.array([b for _, b in factors])

    @classmethod
    def two_factor(cls, a_1: float, b_1: float, a_2: float, b_2: float):
        """
        Build the two-factor loadings (a_1 e^{-b_1 (T-t)}, a_2 e^{-b_2 (T-t)}).
        """
        return cls([(a_1, b_1), (a_2, b_2)])

    def _value(self, t: float, T: float) -> np.ndarray:
        return self.levels * np.exp(-self.decays * (T - t))

    def _components(self, T_a: float, T_b: float, s0: float, s1: float) -> np.ndarray:
        length = s1 - s0
        result = np.empty(self.dimension)
        for c, (a, b) in enumerate(zip(self.levels, self.decays)):
            if b == 0.0:
                result[c] = a * a * length
                continue
            # a^2 e^{-b(T_a+T_b-2 s1)} (1 - e^{-2 b (s1-s0)}) / (2b)
            scale = a * a * math.exp(-b * (T_a + T_b - 2.0 * s1))
            result[c] = scale * (-math.expm1(-2.0 * b * length)) / (2.0 * b)
        return result

    def to_json(self) -> dict:
        """
        Convert the volatility parameters to a JSON representation.

        Returns:
            dict: A dictionary with the variant name and the (a, b) pairs.
        """
        return {
            "type": "exponential",
            "factors": [[float(a), float(b)] for a, b in zip(self.levels, self.decays)],
        }
