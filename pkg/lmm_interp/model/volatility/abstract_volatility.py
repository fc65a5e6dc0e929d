"""Abstract Volatility Class

This module defines the AbstractVolatility class, an abstract base class for
the deterministic d-dimensional volatility functions lambda(t, T) of the
discrete tenor forward LIBORs.

Classes:
    AbstractVolatility: Represents a deterministic LIBOR volatility function.

"""

from abc import ABC, abstractmethod

import numpy as np

from lmm_interp.exception.domain_failure import DomainFailure
from lmm_interp.model import TENOR_DATE_TOLERANCE


class AbstractVolatility(ABC):
    """
    Represents a deterministic volatility function lambda(t, T) with values in
    R^d, together with its integrated covariances.

    Concrete subclasses provide the pointwise value and the componentwise
    integrals; the dot products, square roots and per-step effective loadings
    are derived here.

    Attributes:
        dimension (int): The factor dimension d.

    Methods:
        vol(t, T): The volatility vector lambda(t, T).
        integrated_components(T_a, T_b, s0, s1): Componentwise integrals.
        integrated_cov(T_a, T_b, s0, s1): Integral of lambda(s,T_a).lambda(s,T_b).
        integrated_var(T, s0, s1): Integral of |lambda(s,T)|^2.
        integrated_vol(T, s0, s1): The square root of integrated_var.
        step_vol(s0, s1, T): The effective constant loading over a time step.
        to_json(): A JSON representation of the volatility parameters.
    """

    def __init__(self, dimension: int) -> None:
        """
        Initialize an AbstractVolatility instance.

        Args:
            dimension (int): The factor dimension d, at least 1.
        """
        if dimension < 1:
            raise DomainFailure(f"Factor dimension must be at least 1, got {dimension}.")
        self.dimension = int(dimension)

    @abstractmethod
    def _value(self, t: float, T: float) -> np.ndarray:
        """
        Return lambda(t, T) for validated arguments.
        """

    @abstractmethod
    def _components(self, T_a: float, T_b: float, s0: float, s1: float) -> np.ndarray:
        """
        Return the d-vector of integrals over [s0, s1] of
        lambda_c(s, T_a) * lambda_c(s, T_b), for validated arguments.
        """

    @abstractmethod
    def to_json(self) -> dict:
        """
        Convert the volatility parameters to a JSON representation.

        Returns:
            dict: A dictionary describing the variant and its parameters.
        """

    def vol(self, t: float, T: float) -> np.ndarray:
        """
        Return the volatility vector lambda(t, T).

        Args:
            t (float): The current time, 0 <= t.
            T (float): The maturity of the LIBOR, t <= T.

        Returns:
            np.ndarray: The d-vector lambda(t, T).

        Raises:
            DomainFailure: If t > T or t < 0.
        """
        if t > T + TENOR_DATE_TOLERANCE or t < -TENOR_DATE_TOLERANCE:
            raise DomainFailure(f"Volatility is defined for 0 <= t <= T, got t={t}, T={T}.")
        return self._value(min(t, T), T)

    def integrated_components(
        self, T_a: float, T_b: float, s0: float, s1: float
    ) -> np.ndarray:
        """
        Return the componentwise integrated covariance over [s0, s1].

        Raises:
            DomainFailure: If the limits are not 0 <= s0 <= s1 <= min(T_a, T_b).
        """
        if s0 < -TENOR_DATE_TOLERANCE or s1 < s0 - TENOR_DATE_TOLERANCE:
            raise DomainFailure(f"Invalid integration limits [{s0}, {s1}].")
        if s1 > min(T_a, T_b) + TENOR_DATE_TOLERANCE:
            raise DomainFailure(
                f"Upper limit {s1} beyond the earlier maturity {min(T_a, T_b)}."
            )
        s0 = max(s0, 0.0)
        s1 = min(max(s1, s0), min(T_a, T_b))
        if s1 <= s0:
            return np.zeros(self.dimension)
        return self._components(T_a, T_b, s0, s1)

    def integrated_cov(self, T_a: float, T_b: float, s0: float, s1: float) -> float:
        """
        Return the integral over [s0, s1] of lambda(s, T_a) . lambda(s, T_b).

        Raises:
            DomainFailure: If the limits are invalid.
        """
        return float(np.sum(self.integrated_components(T_a, T_b, s0, s1)))

    def integrated_var(self, T: float, s0: float, s1: float) -> float:
        """
        Return the integral over [s0, s1] of |lambda(s, T)|^2.
        """
        return self.integrated_cov(T, T, s0, s1)

    def integrated_vol(self, T: float, s0: float, s1: float) -> float:
        """
        Return lambda-bar, the square root of integrated_var(T, s0, s1).
        """
        return float(np.sqrt(self.integrated_var(T, s0, s1)))

    def step_vol(self, s0: float, s1: float, T: float) -> np.ndarray:
        """
        Return the constant loading that reproduces, component by component,
        the variance of lambda(., T) over the step [s0, s1].

        Each component is the root mean square of lambda_c over the step,
        signed like lambda_c at the step midpoint. For a single component the
        resulting log-Euler increment has the exact lognormal variance.

        Raises:
            DomainFailure: If s1 <= s0 or s1 > T.
        """
        if s1 <= s0:
            raise DomainFailure(f"Empty time step [{s0}, {s1}].")
        components = self.integrated_components(T, T, s0, s1)
        sign = np.sign(self.vol(0.5 * (s0 + s1), T))
        sign[sign == 0] = 1.0
        return sign * np.sqrt(np.maximum(components, 0.0) / (s1 - s0))
