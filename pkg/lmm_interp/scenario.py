"""
The `lmm_interp.scenario` module describes experiment scenarios: which
initial curve, volatility, horizon and interpolation methods a run uses, and
the Monte Carlo settings for the runs that simulate.

Scenarios are written as flat key=value text with `#` comments. Each figure
of the reference experiments has a preset; keys given alongside `figure`
override the preset.

Classes:
    ScenarioConfig: A parsed and validated scenario.

Functions:
    parse_volatility(token): Build a volatility from its token.
    resolve_curve(token, tenor): Build an initial curve from its token.

Usage:
    config = ScenarioConfig.for_figure(6, n_paths=20000)
    tenor = config.tenor()
    curve = config.initial_curve_for(tenor)
"""

from pathlib import Path
from typing import Dict, List, Optional, Union

from lmm_interp.exception.config_failure import ConfigFailure
from lmm_interp.exception.model_failure import ModelFailure
from lmm_interp.model import DEFAULT_DELTA
from lmm_interp.model.curve import InitialCurve, build_initial_curve
from lmm_interp.model.scheme import InterpolationScheme
from lmm_interp.model.tenor import TenorStructure
from lmm_interp.model.volatility.abstract_volatility import AbstractVolatility
from lmm_interp.model.volatility.exponential import ExponentialVolatility
from lmm_interp.model.volatility.flat import FlatVolatility
from lmm_interp.model.volatility.piecewise import PiecewiseConstantVolatility
from lmm_interp.simulation import DiscretizationScheme, MCConfig

METHODS = ("1", "2", "baseline", "all")


def _parse_bool(text: str) -> bool:
    value = text.strip().lower()
    if value in ("1", "true", "yes", "on"):
        return True
    if value in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text}")


def _format(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


# key -> (parser, default)
FIELDS = {
    "figure": (int, None),
    "initial_curve": (str, "1"),
    "vol": (str, "lambda1"),
    "t_star": (float, 10.0),
    "delta": (float, DEFAULT_DELTA),
    "method": (str, "all"),
    "fixed_maturity": (float, None),
    "fixed_ttm": (float, None),
    "window_start": (float, None),
    "window_end": (float, None),
    "sweep_period_start": (float, None),
    "sweep_points": (int, 11),
    "n_paths": (int, 100_000),
    "steps_per_period": (int, 4),
    "scheme": (str, "log-euler"),
    "seed": (int, 1),
    "antithetic": (_parse_bool, False),
    "output_dir": (str, "."),
}

FIGURE_PRESETS: Dict[int, Dict[str, object]] = {
    1: {"initial_curve": "1", "vol": "lambda1", "t_star": 10.0, "method": "1"},
    2: {"initial_curve": "1", "vol": "lambda1", "t_star": 10.0, "method": "2"},
    3: {
        "initial_curve": "2",
        "vol": "lambda1",
        "t_star": 10.0,
        "method": "all",
        "window_start": 4.0,
        "window_end": 6.0,
    },
    4: {
        "initial_curve": "3",
        "vol": "lambda1",
        "t_star": 2.25,
        "method": "1",
        "fixed_maturity": 1.8125,
        "fixed_ttm": 0.3125,
    },
    5: {
        "initial_curve": "3",
        "vol": "lambda1",
        "t_star": 2.25,
        "method": "2",
        "fixed_maturity": 1.8125,
        "fixed_ttm": 0.3125,
    },
    6: {"initial_curve": "3", "vol": "lambda2", "t_star": 4.25, "method": "1"},
    7: {"initial_curve": "3", "vol": "lambda2", "t_star": 4.25, "method": "2"},
}

FIGURE_COMMANDS = {
    1: "sweep",
    2: "sweep",
    3: "sweep",
    4: "dynamics",
    5: "dynamics",
    6: "impvol",
    7: "impvol",
}


def parse_volatility(token: str) -> AbstractVolatility:
    """
    Build a volatility from "lambda1", "lambda2", "flat:<level>",
    "exp:<a1>,<b1>[,<a2>,<b2>...]" or "piecewise:<csv path>".

    Raises:
        ConfigFailure: On an unknown or malformed token, or an unreadable file.
    """
    text = token.strip().lower()
    if text.startswith("piecewise:"):
        path = token.strip()[len("piecewise:"):]
        try:
            return PiecewiseConstantVolatility.from_csv(path)
        except (OSError, ValueError, ModelFailure) as error:
            raise ConfigFailure(f"Invalid volatility '{token}': {error}", field="vol") from error
    if text == "lambda1":
        return FlatVolatility(0.3)
    if text == "lambda2":
        return ExponentialVolatility.two_factor(0.6, 0.8, 0.1, 0.01)
    try:
        if text.startswith("flat:"):
            return FlatVolatility(float(text[5:]))
        if text.startswith("exp:"):
            numbers = [float(part) for part in text[4:].split(",")]
            if not numbers or len(numbers) % 2:
                raise ValueError("exponential volatility needs (a, b) pairs")
            return ExponentialVolatility(list(zip(numbers[::2], numbers[1::2])))
    except (ValueError, ModelFailure) as error:
        raise ConfigFailure(f"Invalid volatility '{token}': {error}", field="vol") from error
    raise ConfigFailure(f"Unknown volatility '{token}'.", field="vol")


def resolve_curve(token: str, tenor: TenorStructure) -> InitialCurve:
    """
    Build the initial curve "1", "2", "3" or read it from a CSV path.

    Raises:
        ConfigFailure: If the curve cannot be built or read.
    """
    text = token.strip()
    try:
        if text in ("1", "2", "3"):
            return build_initial_curve(int(text), tenor)
        return InitialCurve.from_csv(text, tenor)
    except (OSError, ValueError, ModelFailure) as error:
        raise ConfigFailure(
            f"Invalid initial curve '{token}': {error}", field="initial_curve"
        ) from error


class ScenarioConfig:
    """
    Represents a scenario, with one attribute per key of FIELDS.

    Methods:
        from_text(text): Parse key=value text.
        from_file(path): Parse a key=value file.
        for_figure(figure_id): The preset of a figure.
        to_text(): Serialise as key=value text.
        to_json(): A JSON representation.
        override(**values): A copy with some keys replaced.
        tenor(), initial_curve_for(tenor), volatility(), schemes(), mc_config():
            The model objects the scenario describes.
    """

    def __init__(self, **values) -> None:
        """
        Initialize a ScenarioConfig instance from keyword values; missing keys
        take their defaults.

        Raises:
            ConfigFailure: On an unknown key or an invalid value.
        """
        unknown = [key for key in values if key not in FIELDS]
        if unknown:
            raise ConfigFailure(f"Unknown configuration key '{unknown[0]}'.", field=unknown[0])
        for key, (_, default) in FIELDS.items():
            setattr(self, key, values.get(key, default))
        self.validate()

    @classmethod
    def for_figure(cls, figure_id: int, **overrides) -> "ScenarioConfig":
        """
        Return the preset for a figure, with optional overrides.

        Raises:
            ConfigFailure: On an unknown figure.
        """
        if figure_id not in FIGURE_PRESETS:
            raise ConfigFailure(f"Unknown figure {figure_id}; expected 1-7.", field="figure")
        values = dict(FIGURE_PRESETS[figure_id])
        values.update(overrides)
        values["figure"] = figure_id
        return cls(**values)

    @classmethod
    def from_text(cls, text: str, figure: Optional[int] = None) -> "ScenarioConfig":
        """
        Parse flat key=value text. Blank lines and `#` comments are ignored.
        A figure given here (or as the `figure` key) applies its preset under
        the values of the text.

        Raises:
            ConfigFailure: With the offending line and key.
        """
        values = {}
        for number, raw in enumerate(text.splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigFailure("Expected key = value.", line=number)
            key, value = (part.strip() for part in line.split("=", 1))
            if key not in FIELDS:
                raise ConfigFailure("Unknown configuration key.", field=key, line=number)
            if key in values:
                raise ConfigFailure("Duplicate configuration key.", field=key, line=number)
            parser = FIELDS[key][0]
            try:
                values[key] = parser(value)
            except ValueError as error:
                raise ConfigFailure(f"Invalid value '{value}'.", field=key, line=number) from error
        if figure is not None and values.get("figure", figure) != figure:
            raise ConfigFailure(
                f"Figure {figure} conflicts with figure {values['figure']} in the text.",
                field="figure",
            )
        figure = values.pop("figure", figure)
        if figure is not None:
            return cls.for_figure(figure, **values)
        return cls(**values)

    @classmethod
    def from_file(cls, path: Union[str, Path], figure: Optional[int] = None) -> "ScenarioConfig":
        """
        Parse a key=value file.

        Raises:
            ConfigFailure: If the file cannot be read or parsed.
        """
        try:
            text = Path(path).read_text(encoding="utf-8")
        except OSError as error:
            raise ConfigFailure(f"Cannot read configuration {path}: {error}") from error
        return cls.from_text(text, figure)

    def override(self, **values) -> "ScenarioConfig":
        """
        Return a copy with the given (non-None) values replaced.
        """
        current = self.to_json()
        current.update({key: value for key, value in values.items() if value is not None})
        return ScenarioConfig(**current)

    def validate(self) -> None:
        """
        Raises:
            ConfigFailure: If values are inconsistent.
        """
        if self.figure is not None and self.figure not in FIGURE_PRESETS:
            raise ConfigFailure(f"Unknown figure {self.figure}; expected 1-7.", field="figure")
        if self.method not in METHODS:
            raise ConfigFailure(f"Method must be one of {METHODS}.", field="method")
        if self.sweep_points < 2:
            raise ConfigFailure("A sweep needs at least two points.", field="sweep_points")
        DiscretizationScheme.from_label(self.scheme)
        parse_volatility(self.vol)
        tenor = self.tenor()
        if (self.window_start is None) != (self.window_end is None):
            raise ConfigFailure("Give both window_start and window_end.", field="window_start")
        if self.window_start is not None and not (
            tenor.t0 <= self.window_start < self.window_end <= tenor.horizon
        ):
            raise ConfigFailure("Window must lie inside [T_0, T*].", field="window_start")
        if self.fixed_maturity is not None and not 0 < self.fixed_maturity < tenor.horizon:
            raise ConfigFailure("Fixed maturity must lie inside (0, T*).", field="fixed_maturity")
        if self.fixed_ttm is not None and not 0 < self.fixed_ttm < tenor.horizon:
            raise ConfigFailure(
                "Fixed time to maturity must lie inside (0, T*).", field="fixed_ttm"
            )
        start = self.sweep_period_start
        if start is not None and (
            start <= tenor.t0 or start + 2 * tenor.delta > tenor.horizon + 1e-12
        ):
            raise ConfigFailure(
                "The swept period must start after T_0 and end by T* - delta.",
                field="sweep_period_start",
            )
        self.mc_config()

    def tenor(self) -> TenorStructure:
        """
        Raises:
            ConfigFailure: If T* is not a whole number of accrual periods.
        """
        try:
            return TenorStructure.for_horizon(self.t_star, self.delta)
        except ModelFailure as error:
            raise ConfigFailure(str(error), field="t_star") from error

    def initial_curve_for(self, tenor: TenorStructure) -> InitialCurve:
        """The initial curve the scenario names, on the given tenor."""
        return resolve_curve(self.initial_curve, tenor)

    def volatility(self) -> AbstractVolatility:
        """The LIBOR volatility the scenario names."""
        return parse_volatility(self.vol)

    def schemes(self) -> List[InterpolationScheme]:
        """The arbitrage-free interpolation schemes selected by `method`."""
        if self.method == "1":
            return [InterpolationScheme.daycount()]
        if self.method == "2":
            return [InterpolationScheme.short_bond_volatility()]
        if self.method == "all":
            return [InterpolationScheme.daycount(), InterpolationScheme.short_bond_volatility()]
        return []

    def sweep_start(self, tenor: Optional[TenorStructure] = None) -> float:
        """
        Return the start of the implied-volatility sweep period, by default
        T_N - 3 delta (the last period whose payment stays clear of T_N).
        """
        if self.sweep_period_start is not None:
            return self.sweep_period_start
        tenor = tenor or self.tenor()
        return tenor.horizon - 3.0 * tenor.delta

    def mc_config(self) -> MCConfig:
        """The Monte Carlo settings of the scenario."""
        return MCConfig(
            n_paths=self.n_paths,
            steps_per_period=self.steps_per_period,
            scheme=DiscretizationScheme.from_label(self.scheme),
            seed=self.seed,
            antithetic=self.antithetic,
        )

    def to_json(self) -> dict:
        """
        Convert the scenario to a dictionary of its keys.
        """
        return {key: getattr(self, key) for key in FIELDS}

    def to_text(self) -> str:
        """
        Serialise the scenario as key=value text; from_text(to_text()) returns
        an equal scenario.
        """
        lines = [
            f"{key} = {_format(value)}"
            for key, value in self.to_json().items()
            if value is not None
        ]
        return "\n".join(lines) + "\n"

    def __eq__(self, other) -> bool:
        if not isinstance(other, ScenarioConfig):
            return NotImplemented
        return self.to_json() == other.to_json()

    def __repr__(self) -> str:
        return f"ScenarioConfig(figure={self.figure}, method={self.method}, t_star={self.t_star})"
