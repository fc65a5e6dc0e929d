"""Numerical Failure Exceptions

This module defines the exceptions raised when a numerical procedure cannot
deliver a result: a root finder that does not bracket, a price outside its
arbitrage bounds.

Classes:
    NumericalFailure: Represents a failed numerical procedure.
    PriceBoundsFailure: Represents a price outside its no-arbitrage bounds.

"""

from lmm_interp.exception.model_failure import ModelFailure


class NumericalFailure(ModelFailure):
    """
    Raised when a numerical procedure fails to produce a reliable result.
    """

    def __init__(self, *args: object) -> None:
        super().__init__(*args)


class PriceBoundsFailure(NumericalFailure):
    """
    Raised when an option price violates an arbitrage bound, which makes the
    implied volatility undefined.

    Attributes:
        bound (str): The name of the violated bound ("intrinsic" or "forward").
        bound_value (float): The value of the violated bound.
        price (float): The offending price.
    """

    def __init__(self, bound: str, bound_value: float, price: float) -> None:
        super().__init__(
            f"Price {price:.6g} violates the {bound} bound {bound_value:.6g}."
        )
        self.bound = bound
        self.bound_value = bound_value
        self.price = price
