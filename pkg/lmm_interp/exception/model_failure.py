"""Model Failure Exception

This module defines the ModelFailure class, the root of every exception
raised by the library.

Classes:
    ModelFailure: Represents an exception raised when a model failure occurs.

"""


class ModelFailure(Exception):
    """
    The ModelFailure class extends the built-in Exception class to represent
    an exceptional situation where a failure occurs in the term structure model.

    Every more specific failure of the library (domain, state, configuration
    and numerical failures) derives from it, so callers can catch the whole
    family at once.
    """

    def __init__(self, *args: object) -> None:
        super().__init__(*args)
