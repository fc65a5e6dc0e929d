"""Domain Failure Exception

This module defines the DomainFailure class, raised when a time, maturity,
tenor index or integration limit lies outside the range where the model
defines it.

Classes:
    DomainFailure: Represents an out-of-range argument.

"""

from lmm_interp.exception.model_failure import ModelFailure


class DomainFailure(ModelFailure, ValueError):
    """
    Raised when an argument lies outside the domain of an operation, for
    instance a time at or beyond the horizon T_N, a maturity earlier than the
    current time, or a tenor index out of range.
    """

    def __init__(self, *args: object) -> None:
        super().__init__(*args)
