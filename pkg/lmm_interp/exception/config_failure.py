"""Config Failure Exception

This module defines the ConfigFailure class, raised when a scenario or Monte
Carlo configuration cannot be parsed or validated.

Classes:
    ConfigFailure: Represents an invalid configuration.

"""

from typing import Optional

from lmm_interp.exception.model_failure import ModelFailure


class ConfigFailure(ModelFailure):
    """
    Raised on configuration errors. The optional field name and line number
    point at the offending entry of a key=value configuration file.

    Attributes:
        field (str): The configuration key at fault, if known.
        line (int): The 1-based line number in the configuration text, if known.
    """

    def __init__(
        self, message: str, field: Optional[str] = None, line: Optional[int] = None
    ) -> None:
        location = []
        if line is not None:
            location.append(f"line {line}")
        if field is not None:
            location.append(f"field '{field}'")
        super().__init__(f"{message} ({', '.join(location)})" if location else message)
        self.field = field
        self.line = line
