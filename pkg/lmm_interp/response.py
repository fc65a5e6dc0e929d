"""
The `lmm_interp.response` module provides classes for the results of the
engine's actions.

Every response wraps a dictionary with a status, a message and a content.
Data series are carried as pandas DataFrames and can be written as CSV; the
acceptance check carries a list of named check results.

Classes:
    AbstractResponse: Base class for responses.
    FrameResponse: A response whose content is a DataFrame.
    SweepResponse: Initial term-structure sweeps (forwards and LIBORs).
    DynamicsResponse: Traces of interpolated rates along a simulated path.
    ImpliedVolResponse: Monte Carlo and approximate implied volatilities.
    CheckResult: The outcome of one acceptance check.
    CheckResponse: The outcomes of the acceptance checks.

Usage:
    response = engine.sweep()
    if response.is_status_ok():
        response.write_csv("figure1.csv")
"""

from abc import ABC
from pathlib import Path
from typing import List, NamedTuple, Union

import pandas as pd

CSV_FLOAT_FORMAT = "%.12g"


class AbstractResponse(ABC):
    """
    Abstract base class for responses.

    Attributes:
        response_content (dict): The status, message and content.

    Methods:
        get_status(): Retrieve the status from the response.
        is_status_ok(): Check if the status is 'Ok'.
        get_message(): Retrieve the message from the response.
        get_content(): Retrieve the content from the response.
    """

    def __init__(self, response_content: dict) -> None:
        """
        Initialize an AbstractResponse instance.

        Args:
            response_content (dict): The content of the response.
        """
        super().__init__()
        self.response_content = response_content

    def get_status(self) -> str:
        """
        Retrieve the status from the response.

        Returns:
            str: The status string, 'Ok' when absent.
        """
        if "status" not in self.response_content:
            return "Ok"
        return str(self.response_content["status"])

    def is_status_ok(self) -> bool:
        """
        Check if the status is 'Ok'.
        """
        return bool(self.get_status() == "Ok")

    def get_message(self) -> str:
        """
        Retrieve the message from the response.
        """
        if "message" not in self.response_content:
            return ""
        return str(self.response_content["message"])

    def get_content(self) -> any:
        """
        Retrieve the content from the response.
        """
        if "content" not in self.response_content:
            return self.response_content
        return self.response_content["content"]


class FrameResponse(AbstractResponse):
    """
    Represents a response whose content is a DataFrame of a data series.

    Methods:
        get_frame(): The data series.
        get_diagnostics(): The distinct non-empty diagnostic notes.
        write_csv(path): Write the series as CSV (one header line, 12 significant digits).
    """

    def get_frame(self) -> pd.DataFrame:
        """
        Retrieve the data series.
        """
        return self.get_content()

    def get_diagnostics(self) -> List[str]:
        """
        Retrieve the distinct non-empty entries of the `diagnostic` column.
        """
        frame = self.get_frame()
        if "diagnostic" not in frame.columns:
            return []
        notes = frame["diagnostic"].fillna("")
        return sorted({note for note in notes if note})

    def write_csv(self, path: Union[str, Path]) -> Path:
        """
        Write the data series as CSV.

        Returns:
            Path: The written file.
        """
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        self.get_frame().to_csv(path, index=False, float_format=CSV_FLOAT_FORMAT)
        return path


class SweepResponse(FrameResponse):
    """
    Initial term-structure sweeps, with columns
    (series, maturity, value, method, diagnostic); series is "forward" for
    instantaneous forwards f(0, T) and "libor" for forward LIBORs L(0, T).
    """

    def series(self, name: str, method: str) -> pd.DataFrame:
        """
        Return the rows of one series and method label, ordered by maturity.
        """
        frame = self.get_frame()
        selected = frame[(frame["series"] == name) & (frame["method"] == method)]
        return selected.sort_values("maturity").reset_index(drop=True)


class DynamicsResponse(FrameResponse):
    """
    Rate traces along one simulated path, with columns
    (time, rate_kind, maturity_or_ttm, value, method, diagnostic); rate_kind is
    "short_rate", "fixed_maturity" or "fixed_ttm".
    """

    def trace(self, rate_kind: str, method: str) -> pd.DataFrame:
        """
        Return one trace, ordered by time.
        """
        frame = self.get_frame()
        selected = frame[(frame["rate_kind"] == rate_kind) & (frame["method"] == method)]
        return selected.sort_values("time").reset_index(drop=True)


class ImpliedVolResponse(FrameResponse):
    """
    Caplet implied volatilities across a swept period, with columns
    (T, mc_implied, mc_lo, mc_hi, approx_implied, method, strike, mc_price,
    mc_std_error, diagnostic).
    """

    def for_method(self, method: str) -> pd.DataFrame:
        """
        Return the rows of one method label, ordered by T.
        """
        frame = self.get_frame()
        return frame[frame["method"] == method].sort_values("T").reset_index(drop=True)


class CheckResult(NamedTuple):
    """The outcome of one acceptance check."""

    name: str
    passed: bool
    detail: str


class CheckResponse(AbstractResponse):
    """
    The outcomes of the acceptance checks; the status is 'Ok' when every
    check passed and 'Failed' otherwise.
    """

    def __init__(self, results: List[CheckResult]) -> None:
        failed = [result.name for result in results if not result.passed]
        super().__init__(
            {
                "status": "Failed" if failed else "Ok",
                "message": f"{len(results) - len(failed)}/{len(results)} checks passed",
                "content": list(results),
            }
        )

    def get_results(self) -> List[CheckResult]:
        """Retrieve every check result."""
        return self.get_content()

    def get_failures(self) -> List[CheckResult]:
        """Retrieve the failed checks."""
        return [result for result in self.get_results() if not result.passed]

    def get_frame(self) -> pd.DataFrame:
        """Return the results as a DataFrame (name, passed, detail)."""
        return pd.DataFrame(self.get_results(), columns=list(CheckResult._fields))
