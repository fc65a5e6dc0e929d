"""Interpolation Scheme Module

This module defines the selectors for the ways the discrete tenor model is
extended to continuous tenor.

Enums:
    InterpolationMethod: Represents the two arbitrage-free interpolation methods.

Classes:
    InterpolationScheme: A method together with its short-bond weight function.
    BaselineScheme: Marker for loglinear interpolation of discount factors.

"""

from enum import Enum
from typing import Callable, Optional

from lmm_interp.exception.domain_failure import DomainFailure
from lmm_interp.model.tenor import TenorStructure


class InterpolationMethod(Enum):
    """
    Represents the arbitrage-free interpolation methods.

    Enum Members:
        DAYCOUNT_FRACTIONS (str): Method 1. Short bonds are priced off the last
            spot fixing, pro-rated by the remaining accrual; short bonds carry
            no volatility.
        SHORT_BOND_VOLATILITY (str): Method 2. Short bonds blend the last
            fixing and the next live forward LIBOR with weight alpha.

    Example:
        method = InterpolationMethod.from_label("2")  # SHORT_BOND_VOLATILITY
    """

    DAYCOUNT_FRACTIONS = "1"
    SHORT_BOND_VOLATILITY = "2"

    @classmethod
    def from_label(cls, label) -> "InterpolationMethod":
        """
        Return the method for a label ("1", "2", "daycount", "shortvol").

        Raises:
            DomainFailure: On an unknown label.
        """
        text = str(label).strip().lower()
        aliases = {
            "1": cls.DAYCOUNT_FRACTIONS,
            "daycount": cls.DAYCOUNT_FRACTIONS,
            "daycount_fractions": cls.DAYCOUNT_FRACTIONS,
            "2": cls.SHORT_BOND_VOLATILITY,
            "shortvol": cls.SHORT_BOND_VOLATILITY,
            "short_bond_volatility": cls.SHORT_BOND_VOLATILITY,
        }
        if text not in aliases:
            raise DomainFailure(f"Unknown interpolation method '{label}'.")
        return aliases[text]


class InterpolationScheme:
    """
    Represents an interpolation method and its weight function alpha.

    alpha(t) weighs the last spot fixing against the next live forward LIBOR
    in the method-2 short bond. It must tend to 1 just after each tenor date
    and to 0 just before the next one. The default is the linear weight
    alpha(t) = (T_{eta(t)} - t) / (T_{eta(t)} - T_{eta(t)-1}).

    Attributes:
        method (InterpolationMethod): The interpolation method.
        alpha_function (Callable): Optional custom weight alpha(t, tenor).

    Methods:
        alpha(t, tenor): The weight at time t.
        label: "1" or "2".
        to_json(): A JSON representation of the scheme.
    """

    def __init__(
        self,
        method: InterpolationMethod = InterpolationMethod.DAYCOUNT_FRACTIONS,
        alpha_function: Optional[Callable[[float, TenorStructure], float]] = None,
    ) -> None:
        self.method = method
        self.alpha_function = alpha_function

    @classmethod
    def daycount(cls) -> "InterpolationScheme":
        """Method 1, interpolation by daycount fractions."""
        return cls(InterpolationMethod.DAYCOUNT_FRACTIONS)

    @classmethod
    def short_bond_volatility(cls, alpha_function=None) -> "InterpolationScheme":
        """Method 2, interpolation with short bond volatility."""
        return cls(InterpolationMethod.SHORT_BOND_VOLATILITY, alpha_function)

    @property
    def label(self) -> str:
        """The method label used in output files ("1" or "2")."""
        return self.method.value

    @property
    def is_daycount(self) -> bool:
        """Whether this is method 1."""
        return self.method is InterpolationMethod.DAYCOUNT_FRACTIONS

    def alpha(self, t: float, tenor: TenorStructure) -> float:
        """
        Return the short-bond weight alpha(t) in [0, 1].

        At a tenor date the weight is taken as its right limit 1.

        Raises:
            DomainFailure: If a custom weight leaves [0, 1].
        """
        if self.alpha_function is not None:
            value = float(self.alpha_function(t, tenor))
            if not 0.0 <= value <= 1.0:
                raise DomainFailure(f"alpha({t}) = {value} outside [0, 1].")
            return value
        if tenor.is_tenor_date(t):
            return 1.0
        end = tenor.next_tenor_date(t)
        return (end - t) / tenor.delta

    def to_json(self) -> dict:
        """
        Convert the scheme to a JSON representation.

        Returns:
            dict: A dictionary with the method label.
        """
        return {"method": self.label, "custom_alpha": self.alpha_function is not None}

    def __repr__(self) -> str:
        return f"InterpolationScheme({self.method.name})"


class BaselineScheme:  # pylint: disable=too-few-public-methods
    """
    Marker for loglinear interpolation of discount factors, used only as a
    comparison baseline for the initial term structure.
    """

    label = "baseline"

    def to_json(self) -> dict:
        """
        Convert the scheme to a JSON representation.
        """
        return {"method": self.label}
