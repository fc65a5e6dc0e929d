"""State Failure Exception

This module defines the StateFailure class, raised when a model state does not
carry what an operation needs (a missing fixing, a rate fixed twice, a dead
rate asked for its volatility).

Classes:
    StateFailure: Represents an inconsistent or incomplete model state.

"""

from lmm_interp.exception.model_failure import ModelFailure


class StateFailure(ModelFailure):
    """
    Raised when a ModelState is inconsistent with the requested operation.
    """

    def __init__(self, *args: object) -> None:
        super().__init__(*args)
