"""
The `lmm_interp.simulation` module provides the Monte Carlo engine of the
discrete tenor LIBOR model.

Forward LIBORs are evolved in log space under a forward measure or the rolling
spot LIBOR measure, on a time grid that never straddles a tenor date and that
contains every requested observation time. Spot fixings are recorded as the
grid reaches each tenor date. An observer callback sees the bundle of paths at
each observation time and returns per-path values, which are collected and
reduced into estimates.

Enums:
    DiscretizationScheme: Log-Euler or predictor-corrector stepping.

Classes:
    MCConfig: Path count, substeps, scheme, measure, seed and antithetics.
    MCEstimate: A Monte Carlo mean with its standard error.
    SimulationResult: Observations, final state and optional recorded paths.

Functions:
    estimate(samples, antithetic): Reduce per-path samples to an MCEstimate.
    path_normals(seed, first_path, n_paths, n_draws, antithetic): Per-path Gaussians.
    time_grid(tenor, horizon, steps_per_period, extra_times): The simulation grid.
    simulate_paths(initial, vol, config, horizon, observer, observation_times, record):
        Run the simulation.

Usage:
    config = MCConfig(n_paths=20000, seed=7)
    result = simulate_paths(
        curve, FlatVolatility(0.3), config, horizon=1.0,
        observer=lambda state: state.libor(4), observation_times=[1.0],
    )
    estimate(result.observation(0)).mean

Note:
    Path p draws its Gaussians from its own Philox stream keyed by
    (seed, p), so results do not depend on the chunking of the paths.
"""

import logging
from enum import Enum
from typing import Callable, List, NamedTuple, Optional, Sequence

import numpy as np
from scipy.special import ndtri

from lmm_interp.exception.config_failure import ConfigFailure
from lmm_interp.exception.domain_failure import DomainFailure
from lmm_interp.exception.state_failure import StateFailure
from lmm_interp.model import TENOR_DATE_TOLERANCE
from lmm_interp.model.curve import InitialCurve, ModelState, advance_fixing
from lmm_interp.model.measure import MeasureTag, drift_coefficients, radon_nikodym_increment
from lmm_interp.model.tenor import TenorStructure
from lmm_interp.model.volatility.abstract_volatility import AbstractVolatility

logger = logging.getLogger(__name__)

DEFAULT_CHUNK_SIZE = 4096
MAX_SEED = 2**64

Observer = Callable[[ModelState], np.ndarray]


class DiscretizationScheme(Enum):
    """
    Represents the time stepping of the log-LIBOR dynamics.

    Enum Members:
        LOG_EULER (str): Drift evaluated at the start of each step.
        PREDICTOR_CORRECTOR (str): Drift averaged between the start state and
            the log-Euler predicted end state.
    """

    LOG_EULER = "log-euler"
    PREDICTOR_CORRECTOR = "predictor-corrector"

    @classmethod
    def from_label(cls, label) -> "DiscretizationScheme":
        """
        Return the scheme for a label such as "log-euler" or "pc".

        Raises:
            ConfigFailure: On an unknown label.
        """
        text = str(label).strip().lower().replace("_", "-")
        aliases = {
            "log-euler": cls.LOG_EULER,
            "logeuler": cls.LOG_EULER,
            "euler": cls.LOG_EULER,
            "predictor-corrector": cls.PREDICTOR_CORRECTOR,
            "predictorcorrector": cls.PREDICTOR_CORRECTOR,
            "pc": cls.PREDICTOR_CORRECTOR,
        }
        if text not in aliases:
            raise ConfigFailure(f"Unknown discretization scheme '{label}'.", field="scheme")
        return aliases[text]


class MCConfig:  # pylint: disable=too-many-instance-attributes
    """
    Represents the settings of a Monte Carlo run.

    Attributes:
        n_paths (int): Number of paths, at least 2 (even with antithetics).
        steps_per_period (int): Substeps per accrual period, at least 1.
        scheme (DiscretizationScheme): The time stepping.
        measure (MeasureTag): The simulation measure (default SpotRolling).
        seed (int): 64-bit seed of the per-path streams.
        antithetic (bool): Whether paths come in (Z, -Z) pairs.
        chunk_size (int): Paths evolved together in memory.

    Methods:
        replace(**changes): A copy with some settings changed.
        to_json(): A JSON representation of the settings.
    """

    def __init__(  # pylint: disable=too-many-arguments
        self,
        n_paths: int = 10_000,
        steps_per_period: int = 4,
        scheme: DiscretizationScheme = DiscretizationScheme.LOG_EULER,
        measure: Optional[MeasureTag] = None,
        seed: int = 0,
        antithetic: bool = False,
        chunk_size: int = DEFAULT_CHUNK_SIZE,
    ) -> None:
        """
        Initialize an MCConfig instance.

        Raises:
            ConfigFailure: On an invalid setting.
        """
        if int(n_paths) != n_paths or n_paths < 2:
            raise ConfigFailure(f"At least 2 paths are required, got {n_paths}.", field="n_paths")
        if int(steps_per_period) != steps_per_period or steps_per_period < 1:
            raise ConfigFailure(
                f"At least one step per period is required, got {steps_per_period}.",
                field="steps_per_period",
            )
        if antithetic and n_paths % 2:
            raise ConfigFailure("Antithetic runs need an even path count.", field="n_paths")
        if int(seed) != seed or not 0 <= seed < MAX_SEED:
            raise ConfigFailure(
                f"Seed must be a 64-bit unsigned integer, got {seed}.", field="seed"
            )
        if chunk_size < 2 or chunk_size % 2:
            raise ConfigFailure(f"Chunk size must be even and positive, got {chunk_size}.")
        self.n_paths = int(n_paths)
        self.steps_per_period = int(steps_per_period)
        self.scheme = scheme
        self.measure = measure if measure is not None else MeasureTag.spot_rolling()
        self.seed = int(seed)
        self.antithetic = bool(antithetic)
        self.chunk_size = int(chunk_size)

    def replace(self, **changes) -> "MCConfig":
        """
        Return a copy with the given settings replaced.
        """
        settings = {
            "n_paths": self.n_paths,
            "steps_per_period": self.steps_per_period,
            "scheme": self.scheme,
            "measure": self.measure,
            "seed": self.seed,
            "antithetic": self.antithetic,
            "chunk_size": self.chunk_size,
        }
        settings.update(changes)
        return MCConfig(**settings)

    def to_json(self) -> dict:
        """
        Convert the settings to a JSON representation.
        """
        return {
            "n_paths": self.n_paths,
            "steps_per_period": self.steps_per_period,
            "scheme": self.scheme.value,
            "measure": self.measure.label,
            "seed": self.seed,
            "antithetic": self.antithetic,
        }


class MCEstimate:
    """
    Represents a Monte Carlo estimate.

    Attributes:
        mean (float): The sample mean.
        std_error (float): The standard error of the mean.
        n_paths (int): The number of paths behind the estimate.
        diagnostics (list of str): Notes such as interpolation fallbacks.
    """

    def __init__(
        self,
        mean: float,
        std_error: float,
        n_paths: int,
        diagnostics: Optional[List[str]] = None,
    ) -> None:
        if std_error < 0 or not np.isfinite(std_error):
            raise StateFailure(f"Invalid standard error {std_error}.")
        self.mean = float(mean)
        self.std_error = float(std_error)
        self.n_paths = int(n_paths)
        self.diagnostics = list(diagnostics or [])

    def confidence_interval(self, k: float = 2.0):
        """
        Return (mean - k SE, mean + k SE).
        """
        return self.mean - k * self.std_error, self.mean + k * self.std_error

    def contains(self, value: float, k: float = 3.0) -> bool:
        """Whether value lies within k standard errors of the mean."""
        return abs(value - self.mean) <= k * self.std_error

    def to_json(self) -> dict:
        """
        Convert the estimate to a JSON representation.
        """
        return {
            "mean": self.mean,
            "std_error": self.std_error,
            "n_paths": self.n_paths,
            "diagnostics": list(self.diagnostics),
        }

    def __repr__(self) -> str:
        return f"MCEstimate(mean={self.mean:.8g}, std_error={self.std_error:.3g}, n={self.n_paths})"


def estimate(samples, antithetic: bool = False, diagnostics=None) -> MCEstimate:
    """
    Reduce per-path samples to their mean and standard error.

    With antithetics, consecutive pairs are averaged first and the standard
    error is that of the pair means.

    Raises:
        DomainFailure: With fewer than two samples or an odd antithetic count.
    """
    samples = np.asarray(samples, dtype=float).ravel()
    if samples.size < 2:
        raise DomainFailure("At least two samples are needed for an estimate.")
    units = samples
    if antithetic:
        if samples.size % 2:
            raise DomainFailure("Antithetic samples must come in pairs.")
        units = samples.reshape(-1, 2).mean(axis=1)
        if units.size < 2:
            raise DomainFailure("At least two antithetic pairs are needed for an estimate.")
    std_error = float(np.std(units, ddof=1) / np.sqrt(units.size))
    return MCEstimate(float(np.mean(units)), std_error, samples.size, diagnostics)


def path_normals(
    seed: int, first_path: int, n_paths: int, n_draws: int, antithetic: bool = False
) -> np.ndarray:
    """
    Return standard normal draws of shape (n_paths, n_draws) for the paths
    first_path .. first_path + n_paths - 1.

    Each path (or antithetic pair) owns a Philox stream keyed by the seed in
    the low and the path index in the high 64 bits; uniforms are taken from
    the top 53 bits of each raw draw and mapped through the normal quantile.
    The second path of an antithetic pair uses the negated draws.
    """
    normals = np.empty((n_paths, n_draws))
    for row, path in enumerate(range(first_path, first_path + n_paths)):
        stream = path // 2 if antithetic else path
        generator = np.random.Philox(key=int(seed) + (stream << 64))
        raw = generator.random_raw(n_draws)
        uniforms = ((raw >> np.uint64(11)).astype(np.float64) + 0.5) * 2.0**-53
        normals[row] = ndtri(uniforms)
        if antithetic and path % 2:
            normals[row] *= -1.0
    return normals


def time_grid(
    tenor: TenorStructure,
    horizon: float,
    steps_per_period: int,
    extra_times: Sequence[float] = (),
) -> np.ndarray:
    """
    Return the simulation grid from T_0 to horizon: every tenor date, a
    uniform subdivision of each accrual period, and the extra times.

    Points closer than the tenor-date tolerance are merged, preferring tenor
    dates over extra times over subdivision points.
    """
    last = tenor.period_of(horizon)
    candidates = []
    for k in range(1, last + 1):
        start = tenor.date(k - 1)
        candidates.append((tenor.date(k - 1), 2))
        candidates.extend(
            (start + m * tenor.delta / steps_per_period, 0) for m in range(1, steps_per_period)
        )
    if tenor.is_tenor_date(horizon):
        candidates.append((tenor.date(tenor.tenor_index(horizon)), 2))
    else:
        candidates.append((float(horizon), 1))
    candidates.extend((float(t), 1) for t in extra_times)
    candidates = [c for c in candidates if c[0] <= horizon + TENOR_DATE_TOLERANCE]
    candidates.sort()
    grid = []
    for value, priority in candidates:
        if grid and value - grid[-1][0] <= TENOR_DATE_TOLERANCE:
            if priority > grid[-1][1]:
                grid[-1] = (value, priority)
            continue
        grid.append((value, priority))
    return np.array([value for value, _ in grid])


class _Step(NamedTuple):
    start: float
    end: float
    loadings: np.ndarray
    variance: np.ndarray
    measure_index: int
    fixing_index: Optional[int]


def _plan_steps(
    tenor: TenorStructure, vol: AbstractVolatility, measure: MeasureTag, times: np.ndarray
) -> List[_Step]:
    steps = []
    for start, end in zip(times[:-1], times[1:]):
        loadings = np.zeros((tenor.n, vol.dimension))
        for h in range(tenor.period_of(end), tenor.n):
            loadings[h] = vol.step_vol(start, end, tenor.date(h))
        fixing_index = tenor.tenor_index(end)
        if fixing_index is not None and fixing_index >= tenor.n:
            fixing_index = None
        steps.append(
            _Step(
                float(start),
                float(end),
                loadings,
                np.sum(loadings * loadings, axis=1),
                measure.numeraire_index(start, tenor),
                fixing_index,
            )
        )
    return steps


def _log_increment(libors, step: _Step, delta: float, shocks, coefficients=None):
    if coefficients is None:
        coefficients = drift_coefficients(libors, step.loadings, delta, step.measure_index)
    dt = step.end - step.start
    return (coefficients - 0.5 * step.variance) * dt + shocks @ step.loadings.T


def _advance(libors, step: _Step, delta: float, shocks, scheme: DiscretizationScheme):
    if scheme is DiscretizationScheme.LOG_EULER:
        return libors * np.exp(_log_increment(libors, step, delta, shocks))
    start = drift_coefficients(libors, step.loadings, delta, step.measure_index)
    predicted = libors * np.exp(_log_increment(libors, step, delta, shocks, start))
    end = drift_coefficients(predicted, step.loadings, delta, step.measure_index)
    return libors * np.exp(_log_increment(libors, step, delta, shocks, 0.5 * (start + end)))


class SimulationResult:  # pylint: disable=too-many-instance-attributes
    """
    Represents the outcome of simulate_paths.

    Attributes:
        times (np.ndarray): The simulation grid.
        observation_times (list of float): The observation times, in request order.
        observations (list of np.ndarray): Observer outputs per observation time,
            with paths along the first axis.
        final_state (ModelState): The state of all paths at the horizon.
        libor_paths (np.ndarray): Shape (P, S+1, N) LIBORs on the grid, if recorded.
        increments (np.ndarray): Shape (P, S, d) Brownian increments, if recorded.
        step_loadings (np.ndarray): Shape (S, N, d) effective loadings per step.
        measure_indices (np.ndarray): Forward measure index driving each step.

    Methods:
        observation(i): The observations at the i-th observation time.
        radon_nikodym(k, until): Density dP_{T_k}/dP_{T_{k+1}} per path.
    """

    def __init__(  # pylint: disable=too-many-arguments
        self,
        tenor: TenorStructure,
        times: np.ndarray,
        observation_times: List[float],
        observations: List[np.ndarray],
        final_state: ModelState,
        steps: List[_Step],
        libor_paths: Optional[np.ndarray] = None,
        increments: Optional[np.ndarray] = None,
    ) -> None:
        self.tenor = tenor
        self.times = times
        self.observation_times = observation_times
        self.observations = observations
        self.final_state = final_state
        self.step_loadings = np.array([step.loadings for step in steps])
        self.measure_indices = np.array([step.measure_index for step in steps], dtype=int)
        self.libor_paths = libor_paths
        self.increments = increments

    @property
    def n_paths(self) -> int:
        """The number of simulated paths."""
        return self.final_state.n_paths

    def observation(self, i: int) -> np.ndarray:
        """Return the observer outputs at the i-th observation time."""
        return self.observations[i]

    def grid_index(self, t: float) -> int:
        """
        Return the position of t on the simulation grid.

        Raises:
            DomainFailure: If t is not a grid point.
        """
        position = int(np.argmin(np.abs(self.times - t)))
        if abs(self.times[position] - t) > TENOR_DATE_TOLERANCE:
            raise DomainFailure(f"Time {t} is not on the simulation grid.")
        return position

    def radon_nikodym(self, k: int, until: Optional[float] = None) -> np.ndarray:
        """
        Return the density dP_{T_k}/dP_{T_{k+1}} on F_until for every path,
        from the recorded LIBORs and Brownian increments.

        Raises:
            StateFailure: If the paths were not recorded or L(., T_k) fixes before until.
        """
        if self.libor_paths is None or self.increments is None:
            raise StateFailure("Radon-Nikodym densities need a recorded simulation.")
        until = self.times[-1] if until is None else until
        if until > self.tenor.date(k) + TENOR_DATE_TOLERANCE:
            raise StateFailure(f"L(., T_{k}) stops diffusing at T_{k} < {until}.")
        last = self.grid_index(until)
        libors = self.libor_paths[:, :last, k]
        weight = self.tenor.delta * libors / (1.0 + self.tenor.delta * libors)
        gammas = weight[..., np.newaxis] * self.step_loadings[np.newaxis, :last, k, :]
        step_lengths = np.diff(self.times[: last + 1])
        return radon_nikodym_increment(gammas, self.increments[:, :last, :], step_lengths)


def simulate_paths(  # pylint: disable=too-many-arguments, too-many-locals
    initial: InitialCurve,
    vol: AbstractVolatility,
    config: MCConfig,
    horizon: float,
    observer: Optional[Observer] = None,
    observation_times: Sequence[float] = (),
    record: bool = False,
) -> SimulationResult:
    """
    Simulate the forward LIBORs from T_0 to horizon.

    Every live rate evolves as
        d ln L_h = (lambda_h . (G_h - G_{j-1}) - 1/2 |lambda_h|^2) dt + lambda_h . dW
    under the measure Forward(j) driving the step, with lambda_h the
    effective constant loading of the step. When a step ends on a tenor date
    T_i the fixing L(T_i, T_i) is recorded before the observer runs.

    Args:
        initial (InitialCurve): The initial forward LIBORs.
        vol (AbstractVolatility): The LIBOR volatility.
        config (MCConfig): The Monte Carlo settings.
        horizon (float): The final simulation time, at most T_N (and at most
            T_j under Forward(j)).
        observer (Callable): Maps a ModelState over a bundle of paths to
            per-path values.
        observation_times (sequence of float): Times at which the observer runs.
        record (bool): Keep the full LIBOR paths and Brownian increments.

    Returns:
        SimulationResult: The collected observations and final state.

    Raises:
        DomainFailure: On an invalid horizon or observation time.
        ConfigFailure: On observation times without an observer.
    """
    tenor = initial.tenor
    if horizon <= tenor.t0 or horizon > tenor.horizon + TENOR_DATE_TOLERANCE:
        raise DomainFailure(f"Horizon {horizon} outside ({tenor.t0}, {tenor.horizon}].")
    config.measure.validate(tenor)
    measure = config.measure
    if not measure.is_spot and horizon > tenor.date(measure.index) + TENOR_DATE_TOLERANCE:
        raise DomainFailure(
            f"Under {config.measure!r} the simulation cannot run past T_{config.measure.index}."
        )
    observation_times = [float(t) for t in observation_times]
    for t in observation_times:
        if t < tenor.t0 - TENOR_DATE_TOLERANCE or t > horizon + TENOR_DATE_TOLERANCE:
            raise DomainFailure(f"Observation time {t} outside [{tenor.t0}, {horizon}].")
    if observation_times and observer is None:
        raise ConfigFailure("Observation times were given without an observer.")

    times = time_grid(tenor, horizon, config.steps_per_period, observation_times)
    steps = _plan_steps(tenor, vol, config.measure, times)
    watch = {}
    for position, t in enumerate(observation_times):
        index = int(np.argmin(np.abs(times - t)))
        watch.setdefault(index, []).append(position)
    dimension = vol.dimension
    logger.info(
        "Simulating %d paths over %d steps to t=%g under %r.",
        config.n_paths, len(steps), horizon, config.measure,
    )

    collected = [[] for _ in observation_times]
    finals, final_fixings, recorded_paths, recorded_increments = [], [], [], []
    for first in range(0, config.n_paths, config.chunk_size):
        count = min(config.chunk_size, config.n_paths - first)
        logger.debug("Paths %d..%d.", first, first + count - 1)
        normals = path_normals(config.seed, first, count, len(steps) * dimension, config.antithetic)
        normals = normals.reshape(count, len(steps), dimension)
        libors = np.tile(initial.libors0, (count, 1))
        fixings = np.full_like(libors, np.nan)
        fixings[:, 0] = libors[:, 0]
        state = ModelState(tenor, tenor.t0, libors, fixings)
        if record:
            paths = np.empty((count, len(steps) + 1, tenor.n))
            paths[:, 0] = libors
            increments = np.empty((count, len(steps), dimension))
        for position in watch.get(0, []):
            collected[position].append(np.asarray(observer(state), dtype=float))
        for s, step in enumerate(steps):
            shocks = normals[:, s, :] * np.sqrt(step.end - step.start)
            libors = _advance(state.libors, step, tenor.delta, shocks, config.scheme)
            state = ModelState(tenor, step.end, libors, state.fixings)
            if step.fixing_index is not None:
                state = advance_fixing(state, step.fixing_index)
            if record:
                paths[:, s + 1] = libors
                increments[:, s] = shocks
            for position in watch.get(s + 1, []):
                collected[position].append(np.asarray(observer(state), dtype=float))
        finals.append(state.libors)
        final_fixings.append(state.fixings)
        if record:
            recorded_paths.append(paths)
            recorded_increments.append(increments)

    final_state = ModelState(
        tenor, times[-1], np.concatenate(finals), np.concatenate(final_fixings)
    )
    return SimulationResult(
        tenor,
        times,
        observation_times,
        [np.concatenate(chunks) for chunks in collected],
        final_state,
        steps,
        np.concatenate(recorded_paths) if record else None,
        np.concatenate(recorded_increments) if record else None,
    )
