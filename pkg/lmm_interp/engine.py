"""
The `lmm_interp.engine` module runs the experiments a scenario describes.

Each experiment is an action: it reads the scenario, builds the tenor
structure, initial curve, volatility and interpolation schemes, runs, and
returns a response carrying its data series.

Classes:
    AbstractAction: Base class for the experiments.
    SweepAction: Initial instantaneous forwards and forward LIBORs across maturities.
    DynamicsAction: Short rate, fixed-maturity and fixed-time-to-maturity
        forwards along one simulated path.
    ImpliedVolAction: Monte Carlo and approximate caplet implied volatilities
        across one accrual period.
    CheckAction: The acceptance checks.
    Engine: Entry point running actions for a scenario.

Functions:
    sweep_grid(tenor, start, end, per_period, offset): Maturities avoiding tenor dates.
    tenor_jump_times(tenor, ttm, horizon): When t + ttm crosses a tenor date.
    trace_times(tenor, horizon, ttm, per_period, offset): Observation times of a trace.

Usage:
    engine = Engine(ScenarioConfig.for_figure(4))
    response = engine.dynamics()
    response.write_csv("figure4.csv")
"""

import logging
from abc import ABC, abstractmethod
from pathlib import Path
from typing import List, Optional

import numpy as np
import pandas as pd

from lmm_interp.exception.config_failure import ConfigFailure
from lmm_interp.model import TENOR_DATE_TOLERANCE
from lmm_interp.model.curve import ModelState
from lmm_interp.model.interpolation import (
    baseline_forward,
    baseline_libor,
    fallback_diagnostics,
    instantaneous_forward,
    interpolated_libor,
    short_rate,
)
from lmm_interp.model.tenor import TenorStructure
from lmm_interp.pricing import (
    CapletSpec,
    approx_implied_vol,
    atm_strike,
    black_inputs,
    implied_vol_band,
    price_caplet_mc,
)
from lmm_interp.response import (
    AbstractResponse,
    CheckResponse,
    DynamicsResponse,
    ImpliedVolResponse,
    SweepResponse,
)
from lmm_interp.scenario import FIGURE_COMMANDS, ScenarioConfig
from lmm_interp.simulation import simulate_paths

logger = logging.getLogger(__name__)

SWEEP_POINTS_PER_PERIOD = 64
LIMIT_OFFSET = 1e-9
BASELINE_LABEL = "baseline"


def sweep_grid(
    tenor: TenorStructure,
    start: float,
    end: float,
    per_period: int = SWEEP_POINTS_PER_PERIOD,
    offset: float = LIMIT_OFFSET,
) -> np.ndarray:
    """
    Return maturities in [start, end]: per_period points per accrual period,
    with every tenor date T_i replaced by T_i - offset and T_i + offset so
    that one-sided limits are exposed.
    """
    points = []
    for k in range(1, tenor.n + 1):
        left, right = tenor.date(k - 1), tenor.date(k)
        points.append(left + offset)
        points.extend(left + m * tenor.delta / per_period for m in range(1, per_period))
        points.append(right - offset)
    grid = np.array(points)
    return grid[(grid >= start - TENOR_DATE_TOLERANCE) & (grid <= end + TENOR_DATE_TOLERANCE)]


def tenor_jump_times(tenor: TenorStructure, ttm: float, horizon: float) -> List[float]:
    """
    Return the times t in (T_0, horizon] at which t + ttm is a tenor date;
    the fixed-time-to-maturity forward f(t, t + ttm) jumps there.
    """
    times = []
    for k in range(1, tenor.n + 1):
        t = tenor.date(k) - ttm
        if tenor.t0 < t <= horizon + TENOR_DATE_TOLERANCE:
            times.append(t)
    return times


def trace_times(
    tenor: TenorStructure,
    horizon: float,
    ttm: float,
    per_period: int = SWEEP_POINTS_PER_PERIOD,
    offset: float = LIMIT_OFFSET,
) -> np.ndarray:
    """
    Return the observation times of a dynamics trace on (T_0, horizon):
    a uniform grid with the tenor dates and jump times replaced by points
    offset on either side.
    """
    special = [tenor.date(i) for i in range(tenor.n + 1) if tenor.date(i) <= horizon]
    special += tenor_jump_times(tenor, ttm, horizon)
    count = int(round((horizon - tenor.t0) / tenor.delta * per_period))
    uniform = tenor.t0 + np.arange(1, count) * (horizon - tenor.t0) / count
    kept = [t for t in uniform if min(abs(t - s) for s in special) > 10 * offset]
    for s in special:
        kept.extend(t for t in (s - offset, s + offset) if tenor.t0 < t < horizon)
    return np.array(sorted(kept))


class AbstractAction(ABC):
    """
    Base abstract class for the experiments run by the engine.

    Attributes:
        scenario (ScenarioConfig): The scenario to run.
        command (str): The CLI subcommand of the action.

    Methods:
        action(): Run the experiment and return its response.
    """

    def __init__(self, scenario: ScenarioConfig, command: str) -> None:
        """
        Initialize an AbstractAction instance.

        Args:
            scenario (ScenarioConfig): The scenario to run.
            command (str): The CLI subcommand of the action.
        """
        super().__init__()
        self.scenario = scenario
        self.command = command
        self.tenor = scenario.tenor()
        self.curve = scenario.initial_curve_for(self.tenor)
        self.vol = scenario.volatility()

    @abstractmethod
    def action(self) -> AbstractResponse:
        """
        Run the experiment.

        Returns:
            AbstractResponse: The response carrying the results.
        """


class SweepAction(AbstractAction):
    """
    Computes the initial instantaneous forwards f(0, T) and forward LIBORs
    L(0, T) of every selected method and of the loglinear baseline.
    """

    def __init__(self, scenario: ScenarioConfig) -> None:
        super().__init__(scenario, "sweep")

    def _window(self):
        if self.scenario.window_start is not None:
            return self.scenario.window_start, self.scenario.window_end
        return self.tenor.t0, self.tenor.horizon

    def action(self) -> SweepResponse:
        """
        Run the sweep.

        Returns:
            SweepResponse: Rows (series, maturity, value, method, diagnostic).
        """
        start, end = self._window()
        state = ModelState.initial(self.curve)
        rows = []
        forward_grid = sweep_grid(self.tenor, start, end)
        libor_grid = forward_grid[forward_grid <= self.tenor.horizon - self.tenor.delta]
        for scheme in self.scenario.schemes():
            for T in forward_grid:
                rows.append(
                    (
                        "forward",
                        T,
                        float(instantaneous_forward(state, scheme, self.vol, T)),
                        scheme.label,
                        "; ".join(fallback_diagnostics(scheme, self.tenor, [T])),
                    )
                )
            for T in libor_grid:
                rows.append(
                    (
                        "libor",
                        T,
                        float(interpolated_libor(state, scheme, self.vol, T)),
                        scheme.label,
                        "; ".join(
                            fallback_diagnostics(scheme, self.tenor, [T, T + self.tenor.delta])
                        ),
                    )
                )
        for T in forward_grid:
            rows.append(("forward", T, baseline_forward(self.curve, T), BASELINE_LABEL, ""))
        for T in libor_grid:
            rows.append(("libor", T, baseline_libor(self.curve, T), BASELINE_LABEL, ""))
        frame = pd.DataFrame(rows, columns=["series", "maturity", "value", "method", "diagnostic"])
        logger.info("Swept %d maturities on [%g, %g].", len(forward_grid), start, end)
        return SweepResponse({"status": "Ok", "message": "sweep", "content": frame})


class DynamicsAction(AbstractAction):
    """
    Simulates one path of the discrete tenor model and traces, for every
    selected method, the short rate r(t), the forward f(t, fixed_maturity)
    and the forward f(t, t + fixed_ttm).
    """

    def __init__(self, scenario: ScenarioConfig) -> None:
        super().__init__(scenario, "dynamics")
        if scenario.fixed_maturity is None or scenario.fixed_ttm is None:
            raise ConfigFailure(
                "Dynamics traces need fixed_maturity and fixed_ttm.", field="fixed_maturity"
            )
        if not scenario.schemes():
            raise ConfigFailure("Dynamics traces need method 1, 2 or all.", field="method")

    def _observer(self, scheme):
        tenor, vol = self.tenor, self.vol
        maturity, ttm = self.scenario.fixed_maturity, self.scenario.fixed_ttm

        def side_for(T: float) -> Optional[str]:
            return "right" if tenor.is_tenor_date(T) else None

        def observe(state: ModelState) -> np.ndarray:
            paths = state.libors.shape[:-1]
            values = np.full(paths + (3,), np.nan)
            values[..., 0] = short_rate(state, scheme, vol)
            if state.t <= maturity and maturity < tenor.horizon:
                values[..., 1] = instantaneous_forward(
                    state, scheme, vol, maturity, side=side_for(maturity)
                )
            moving = state.t + ttm
            if moving < tenor.horizon - TENOR_DATE_TOLERANCE:
                values[..., 2] = instantaneous_forward(
                    state, scheme, vol, moving, side=side_for(moving)
                )
            return values

        return observe

    def action(self) -> DynamicsResponse:
        """
        Run the trace; path 0 of a two-path run is reported.

        Returns:
            DynamicsResponse: Rows (time, rate_kind, maturity_or_ttm, value, method, diagnostic).
        """
        horizon = self.tenor.horizon - self.tenor.delta
        times = trace_times(self.tenor, horizon, self.scenario.fixed_ttm)
        mc = self.scenario.mc_config().replace(n_paths=2, antithetic=False)
        kinds = (
            ("short_rate", 0.0),
            ("fixed_maturity", self.scenario.fixed_maturity),
            ("fixed_ttm", self.scenario.fixed_ttm),
        )
        rows = []
        for scheme in self.scenario.schemes():
            result = simulate_paths(
                self.curve, self.vol, mc, horizon, self._observer(scheme), times
            )
            for t, values in zip(times, result.observations):
                maturities = (t, self.scenario.fixed_maturity, t + self.scenario.fixed_ttm)
                for (kind, label), value, T in zip(kinds, values[0], maturities):
                    if np.isnan(value):
                        continue
                    note = "; ".join(fallback_diagnostics(scheme, self.tenor, [T]))
                    rows.append((t, kind, label, float(value), scheme.label, note))
        frame = pd.DataFrame(
            rows,
            columns=["time", "rate_kind", "maturity_or_ttm", "value", "method", "diagnostic"],
        )
        logger.info("Traced %d times to t=%g.", len(times), horizon)
        return DynamicsResponse({"status": "Ok", "message": "dynamics", "content": frame})


class ImpliedVolAction(AbstractAction):
    """
    Prices caplets struck at 1.25 times the initial interpolated LIBOR across
    one accrual period, by simulation and by the frozen-coefficient
    approximation, and quotes both as Black implied volatilities.
    """

    def __init__(self, scenario: ScenarioConfig) -> None:
        super().__init__(scenario, "impvol")
        if not scenario.schemes():
            raise ConfigFailure("Implied volatilities need method 1, 2 or all.", field="method")

    def sweep_points(self) -> np.ndarray:
        """The caplet start dates, both period ends included."""
        start = self.scenario.sweep_start(self.tenor)
        points = np.linspace(start, start + self.tenor.delta, self.scenario.sweep_points)
        return np.array([self._snap(T) for T in points])

    def _snap(self, T: float) -> float:
        index = self.tenor.tenor_index(T)
        return self.tenor.date(index) if index is not None else float(T)

    def action(self) -> ImpliedVolResponse:
        """
        Run the implied volatility experiment.

        Returns:
            ImpliedVolResponse: One row per start date and method.
        """
        mc = self.scenario.mc_config()
        delta = self.tenor.delta
        rows = []
        for scheme in self.scenario.schemes():
            for T in self.sweep_points():
                strike = atm_strike(self.curve, scheme, self.vol, T)
                spec = CapletSpec(T, strike, delta)
                price = price_caplet_mc(spec, self.curve, self.vol, scheme, mc)
                forward, discount = black_inputs(spec, self.curve, scheme, self.vol)
                band = implied_vol_band(price, forward, strike, T, discount, delta, k=2.0)
                rows.append(
                    {
                        "T": T,
                        "mc_implied": band.implied,
                        "mc_lo": band.lower,
                        "mc_hi": band.upper,
                        "approx_implied": approx_implied_vol(spec, self.curve, self.vol, scheme),
                        "method": scheme.label,
                        "strike": strike,
                        "mc_price": price.mean,
                        "mc_std_error": price.std_error,
                        "diagnostic": "; ".join(price.diagnostics),
                    }
                )
        frame = pd.DataFrame(rows)
        return ImpliedVolResponse({"status": "Ok", "message": "impvol", "content": frame})


class CheckAction(AbstractAction):
    """
    Runs the acceptance checks with the scenario's path count and seed.
    """

    def __init__(self, scenario: ScenarioConfig) -> None:
        super().__init__(scenario, "check")

    def action(self) -> CheckResponse:
        """
        Run every acceptance check.

        Returns:
            CheckResponse: Status 'Ok' when all checks pass.
        """
        # imported here: the checks drive the engine's own actions
        from lmm_interp.acceptance import run_checks  # pylint: disable=import-outside-toplevel

        return CheckResponse(run_checks(self.scenario.n_paths, self.scenario.seed))


class Engine:
    """
    Represents the experiment runner for a scenario.

    Methods:
        sweep(): Run the term-structure sweep.
        dynamics(): Run the dynamics trace.
        impvol(): Run the implied volatility experiment.
        check(): Run the acceptance checks.
        run(command): Run the action of a CLI subcommand.
        output_path(command): The default CSV file of a command.
    """

    ACTIONS = {
        "sweep": SweepAction,
        "dynamics": DynamicsAction,
        "impvol": ImpliedVolAction,
        "check": CheckAction,
    }

    def __init__(self, scenario: ScenarioConfig) -> None:
        """
        Initialize an Engine instance.

        Args:
            scenario (ScenarioConfig): The scenario to run.
        """
        self.scenario = scenario

    def run(self, command: str) -> AbstractResponse:
        """
        Run the action of a CLI subcommand.

        Raises:
            ConfigFailure: On an unknown command.
        """
        if command not in self.ACTIONS:
            raise ConfigFailure(f"Unknown command '{command}'.")
        logger.info("Running %s for %r.", command, self.scenario)
        return self.ACTIONS[command](self.scenario).action()

    def sweep(self) -> SweepResponse:
        """Run the term-structure sweep."""
        return self.run("sweep")

    def dynamics(self) -> DynamicsResponse:
        """Run the dynamics trace."""
        return self.run("dynamics")

    def impvol(self) -> ImpliedVolResponse:
        """Run the implied volatility experiment."""
        return self.run("impvol")

    def check(self) -> CheckResponse:
        """Run the acceptance checks."""
        return self.run("check")

    def output_path(self, command: str) -> Path:
        """
        Return the CSV file a command writes to: figure<id>.csv for figure
        presets of that command, <command>.csv otherwise.
        """
        figure = self.scenario.figure
        if figure is not None and FIGURE_COMMANDS.get(figure) == command:
            name = f"figure{figure}.csv"
        else:
            name = f"{command}.csv"
        return Path(self.scenario.output_dir) / name
