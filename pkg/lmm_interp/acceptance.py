"""
The `lmm_interp.acceptance` module runs the acceptance checks of the model:
exactness at tenor dates, accuracy of the broken-date approximation,
martingale and numeraire identities, the drift machinery and the qualitative
behaviour of the interpolated rate dynamics.

Every check returns a CheckResult; run_checks runs them all.

Functions:
    check_tenor_date_caplet(n_paths, seed)
    check_endpoint_collapse()
    check_broken_date_accuracy(n_paths, seed)
    check_implied_vol_dip(n_paths, seed)
    check_martingales(n_paths, seed)
    check_numeraire_identity(seed)
    check_stub_identity(seed)
    check_baseline_agreement()
    check_drift_machinery(n_paths, seed)
    check_dynamics(seed)
    run_checks(n_paths, seed): All of the above.

Usage:
    for result in run_checks(n_paths=100_000, seed=1):
        print(result.name, result.passed, result.detail)
"""

import logging
import math
from typing import Callable, List

import numpy as np
from scipy.integrate import quad

from lmm_interp.exception.model_failure import ModelFailure
from lmm_interp.model.curve import InitialCurve, ModelState, build_initial_curve, discrete_bond
from lmm_interp.model.interpolation import (
    baseline_libor,
    expected_libor_under_payment_measure,
    interpolated_libor,
    rolling_numeraire,
    savings_account,
    short_rate,
    short_rate_integral,
    zcb,
)
from lmm_interp.model.measure import (
    DriftStencil,
    MeasureTag,
    drift_under,
    gamma_at,
    literal_drift,
)
from lmm_interp.model.scheme import InterpolationScheme
from lmm_interp.model.tenor import TenorStructure
from lmm_interp.model.volatility.exponential import ExponentialVolatility
from lmm_interp.model.volatility.flat import FlatVolatility
from lmm_interp.pricing import (
    CapletSpec,
    approx_implied_vol,
    atm_strike,
    black_inputs,
    implied_vol_band,
    price_caplet_mc,
)
from lmm_interp.response import CheckResult
from lmm_interp.scenario import ScenarioConfig
from lmm_interp.simulation import DiscretizationScheme, MCConfig, estimate, simulate_paths

logger = logging.getLogger(__name__)

LIMIT_OFFSET = 1e-9
IDENTITY_TOLERANCE = 1e-12
DRIFT_TOLERANCE = 1e-14
JUMP_THRESHOLD = 1e-5
MAX_BLOCK_SIZE = 5


def _lambda1() -> FlatVolatility:
    return FlatVolatility(0.3)


def _lambda2() -> ExponentialVolatility:
    return ExponentialVolatility.two_factor(0.6, 0.8, 0.1, 0.01)


def _figure6_model():
    tenor = TenorStructure.for_horizon(4.25)
    return tenor, build_initial_curve(3, tenor), _lambda2()


def _schemes():
    return [InterpolationScheme.daycount(), InterpolationScheme.short_bond_volatility()]


def check_tenor_date_caplet(n_paths: int, seed: int) -> CheckResult:
    """
    A caplet fixing on the tenor date T=1 (flat 5% curve, lambda1, K=6.25%)
    has a lognormal underlying: its simulated implied volatility must match
    0.3 within two standard errors, with a standard error below 0.004.
    """
    tenor = TenorStructure.for_horizon(1.5)
    curve = InitialCurve.flat(tenor, 0.05)
    vol = _lambda1()
    scheme = InterpolationScheme.daycount()
    spec = CapletSpec(1.0, 0.0625, tenor.delta)
    price = price_caplet_mc(spec, curve, vol, scheme, MCConfig(n_paths=n_paths, seed=seed))
    forward, discount = black_inputs(spec, curve, scheme, vol)
    band = implied_vol_band(price, forward, spec.strike, spec.start, discount, tenor.delta, k=2.0)
    std_error = (band.upper - band.lower) / 4.0
    passed = band.lower <= 0.3 <= band.upper and std_error < 0.004
    return CheckResult(
        "tenor-date caplet",
        bool(passed),
        f"implied {band.implied:.5f} in [{band.lower:.5f}, {band.upper:.5f}], SE {std_error:.5f}",
    )


def check_endpoint_collapse() -> CheckResult:
    """
    At tenor dates the frozen-coefficient approximation reduces to
    lambda-bar(0, T_i) / sqrt(T_i) for both volatilities and both methods.
    """
    tenor = TenorStructure.for_horizon(4.25)
    curve = build_initial_curve(3, tenor)
    worst = 0.0
    for vol in (_lambda1(), _lambda2()):
        for scheme in _schemes():
            for i in range(1, tenor.n):
                T = tenor.date(i)
                spec = CapletSpec(T, 0.05, tenor.delta)
                expected = vol.integrated_vol(T, 0.0, T) / math.sqrt(T)
                worst = max(worst, abs(approx_implied_vol(spec, curve, vol, scheme) - expected))
    return CheckResult(
        "endpoint collapse", worst <= IDENTITY_TOLERANCE, f"max deviation {worst:.3g}"
    )


def check_broken_date_accuracy(n_paths: int, seed: int) -> CheckResult:
    """
    On the swept period [3.5, 3.75] of the lambda2 scenario, the approximate
    implied volatility lies inside the simulated +-3 SE band at no fewer than
    8 of 9 interior start dates (method 1).
    """
    tenor, curve, vol = _figure6_model()
    scheme = InterpolationScheme.daycount()
    mc = MCConfig(n_paths=n_paths, seed=seed)
    starts = 3.5 + tenor.delta * np.arange(1, 10) / 10.0
    inside = 0
    for T in starts:
        spec = CapletSpec(float(T), atm_strike(curve, scheme, vol, float(T)), tenor.delta)
        price = price_caplet_mc(spec, curve, vol, scheme, mc)
        forward, discount = black_inputs(spec, curve, scheme, vol)
        band = implied_vol_band(price, forward, spec.strike, spec.start, discount, tenor.delta, 3.0)
        approx = approx_implied_vol(spec, curve, vol, scheme)
        if band.lower <= approx <= band.upper:
            inside += 1
        else:
            logger.info(
                "Approximation %.5f outside [%.5f, %.5f] at T=%g.",
                approx, band.lower, band.upper, T,
            )
    return CheckResult("broken-date accuracy", inside >= 8, f"{inside}/9 inside the band")


def check_implied_vol_dip(n_paths: int, seed: int) -> CheckResult:
    """
    The simulated implied volatility at mid-period lies below both endpoint
    volatilities for both methods, and the method-2 dip is shallower.
    """
    # local import: the engine itself runs these checks
    from lmm_interp.engine import ImpliedVolAction  # pylint: disable=import-outside-toplevel

    scenario = ScenarioConfig.for_figure(
        6, method="all", n_paths=n_paths, seed=seed, sweep_points=3
    )
    response = ImpliedVolAction(scenario).action()
    depths, dipped = {}, True
    for label in ("1", "2"):
        values = response.for_method(label)["mc_implied"].to_numpy()
        dipped = dipped and values[1] < min(values[0], values[2])
        depths[label] = 0.5 * (values[0] + values[2]) - values[1]
    passed = dipped and depths["2"] < depths["1"]
    return CheckResult(
        "implied volatility dip",
        bool(passed),
        f"dip depth method 1 {depths['1']:.5f}, method 2 {depths['2']:.5f}",
    )


def _bond_ratio_observer(first: int):
    def observe(state: ModelState) -> np.ndarray:
        last = discrete_bond(state, state.tenor.n)
        columns = [discrete_bond(state, j) / last for j in range(first, state.tenor.n)]
        return np.stack(columns, axis=-1)

    return observe


def check_martingales(n_paths: int, seed: int) -> CheckResult:
    """
    Under Forward(N) the bond ratios B(t, T_j) / B(t, T_N) at t = 1 keep their
    initial expectations; under the rolling spot measure the deflated bonds
    B(t, t2) / N(t) at t = 1 keep theirs for three broken t2, both methods.
    """
    tenor, curve, vol = _figure6_model()
    t = 1.0
    first = tenor.tenor_index(t)
    mc = MCConfig(
        n_paths=n_paths, seed=seed, scheme=DiscretizationScheme.PREDICTOR_CORRECTOR
    )
    terminal = simulate_paths(
        curve, vol, mc.replace(measure=MeasureTag.forward(tenor.n)), t,
        _bond_ratio_observer(first), [t],
    )
    initial = ModelState.initial(curve)
    expected = [
        float(discrete_bond(initial, j) / discrete_bond(initial, tenor.n))
        for j in range(first, tenor.n)
    ]
    failures = []
    samples = terminal.observation(0)
    for column, value in enumerate(expected):
        if not estimate(samples[:, column]).contains(value, 3.0):
            failures.append(f"F_B(T_{first + column}, T_N)")

    maturities = (1.6, 2.3, 3.1)
    schemes = _schemes()

    def deflated(state: ModelState) -> np.ndarray:
        columns = []
        for scheme in schemes:
            numeraire = rolling_numeraire(state, scheme, vol)
            columns.extend(zcb(state, scheme, vol, t2) / numeraire for t2 in maturities)
        return np.stack(columns, axis=-1)

    spot = simulate_paths(curve, vol, mc, t, deflated, [t])
    samples = spot.observation(0)
    column = 0
    for scheme in schemes:
        for t2 in maturities:
            value = float(zcb(initial, scheme, vol, t2))
            if not estimate(samples[:, column]).contains(value, 3.0):
                failures.append(f"B({t2}) method {scheme.label}")
            column += 1
    detail = "all within 3 SE" if not failures else "outside 3 SE: " + ", ".join(failures)
    return CheckResult("martingales", not failures, detail)


def check_numeraire_identity(seed: int) -> CheckResult:
    """
    Under method 1 the savings account and the roll-over numeraire coincide
    on every path at every time (50 paths x 20 broken times).
    """
    tenor, curve, vol = _figure6_model()
    scheme = InterpolationScheme.daycount()
    rng = np.random.default_rng(seed)
    times = np.sort(rng.uniform(0.01, tenor.horizon - 0.01, size=20))

    def difference(state: ModelState) -> np.ndarray:
        saved = savings_account(state, scheme, vol)
        rolled = rolling_numeraire(state, scheme, vol)
        return np.abs(saved - rolled) / rolled

    result = simulate_paths(
        curve, vol, MCConfig(n_paths=50, seed=seed), tenor.horizon, difference, times
    )
    worst = float(max(np.max(values) for values in result.observations))
    return CheckResult(
        "numeraire identity", worst <= IDENTITY_TOLERANCE, f"max relative gap {worst:.3g}"
    )


def check_stub_identity(seed: int) -> CheckResult:
    """
    Over a whole accrual period the method-1 short rate integrates to
    ln(1 + delta L) for the period's fixing L, both in closed form and by
    quadrature of the interpolated short rate (100 random fixings).
    """
    tenor = TenorStructure.for_horizon(1.0)
    scheme = InterpolationScheme.daycount()
    vol = _lambda1()
    start, end = tenor.date(1), tenor.date(2)
    rng = np.random.default_rng(seed)
    closed_worst = quad_worst = 0.0
    for fixing in rng.uniform(0.001, 0.2, size=100):
        libors = np.full(tenor.n, fixing)
        fixings = np.array([fixing, fixing, np.nan, np.nan])
        target = math.log1p(tenor.delta * fixing)
        closed = float(short_rate_integral(fixing, end, start, end))
        closed_worst = max(closed_worst, abs(closed - target))

        def rate(s: float, libors=libors, fixings=fixings) -> float:
            return float(short_rate(ModelState(tenor, s, libors, fixings), scheme, vol))

        integral, _ = quad(rate, start, end, epsabs=1e-14, epsrel=1e-13)
        quad_worst = max(quad_worst, abs(integral - target))
    passed = closed_worst <= IDENTITY_TOLERANCE and quad_worst <= IDENTITY_TOLERANCE
    return CheckResult(
        "stub identity",
        passed,
        f"closed form {closed_worst:.3g}, quadrature {quad_worst:.3g}",
    )


def check_baseline_agreement() -> CheckResult:
    """
    On the kinked curve, method-1 three-month LIBORs over [4, 6] stay within
    2 basis points of loglinear discount factor interpolation (200 points).
    """
    tenor = TenorStructure.for_horizon(10.0)
    curve = build_initial_curve(2, tenor)
    state = ModelState.initial(curve)
    scheme = InterpolationScheme.daycount()
    vol = _lambda1()
    worst = max(
        abs(float(interpolated_libor(state, scheme, vol, T)) - baseline_libor(curve, T))
        for T in np.linspace(4.0, 6.0, 200)
    )
    return CheckResult("baseline agreement", worst < 2e-4, f"max difference {worst * 1e4:.3f}bp")


def _drift_identities(state: ModelState, vol) -> float:
    tenor = state.tenor
    live = state.live_index()
    worst = 0.0
    for lo in range(live, tenor.n):
        for hi in range(lo, min(lo + MAX_BLOCK_SIZE, tenor.n)):
            for stencil in (DriftStencil.terminal(lo, hi), DriftStencil.near(lo, hi)):
                if stencil.measure.index > tenor.n:
                    continue
                summed = drift_under(stencil.measure, state, vol, stencil)[lo : hi + 1]
                literal = literal_drift(state, vol, stencil)
                worst = max(worst, float(np.max(np.abs(summed - literal))))
    for j in range(max(live, 1), tenor.n):
        step = drift_under(MeasureTag.forward(j), state, vol) - drift_under(
            MeasureTag.forward(j + 1), state, vol
        )
        gamma = gamma_at(state, vol, j)
        for h in range(live, tenor.n):
            expected = state.libor(h) * np.dot(vol.vol(state.t, tenor.date(h)), gamma)
            worst = max(worst, abs(float(step[h] - expected)))
    return worst


def check_drift_machinery(n_paths: int, seed: int) -> CheckResult:
    """
    The literal Psi ell drift matches the running-sum drift on blocks of up
    to five rates, adjacent-measure drifts differ by L_h lambda_h . gamma_j,
    and Radon-Nikodym reweighted expectations match the direct ones.
    """
    tenor, curve, vol = _figure6_model()
    states = [ModelState.initial(curve)]
    sampled = simulate_paths(curve, vol, MCConfig(n_paths=2, seed=seed), 1.3).final_state
    states.append(sampled.replace(libors=sampled.libors[0], fixings=sampled.fixings[0]))
    worst = max(_drift_identities(state, vol) for state in states)

    short_tenor = TenorStructure.for_horizon(2.25)
    short_curve = build_initial_curve(3, short_tenor)
    k, t = 4, 0.75
    mc = MCConfig(n_paths=n_paths, seed=seed, scheme=DiscretizationScheme.PREDICTOR_CORRECTOR)
    reweighted = simulate_paths(
        short_curve, vol, mc.replace(measure=MeasureTag.forward(k + 1)), t, record=True
    )
    density = reweighted.radon_nikodym(k, t)
    final = reweighted.final_state.libors
    direct = simulate_paths(short_curve, vol, mc.replace(measure=MeasureTag.forward(k)), t)
    initial = ModelState.initial(short_curve)
    expected = float(expected_libor_under_payment_measure(initial, vol, k, t))
    martingale_ok = estimate(density * final[:, k - 1]).contains(float(initial.libor(k - 1)), 3.0)
    reweighted_ok = estimate(density * final[:, k]).contains(expected, 3.0)
    direct_ok = estimate(direct.final_state.libors[:, k]).contains(expected, 3.0)
    passed = worst <= DRIFT_TOLERANCE and martingale_ok and reweighted_ok and direct_ok
    return CheckResult(
        "drift machinery",
        bool(passed),
        f"identity gap {worst:.3g}; reweighted martingale {martingale_ok}, "
        f"reweighted {reweighted_ok}, direct {direct_ok}",
    )


def _value_at(trace, time: float) -> float:
    times = trace["time"].to_numpy()
    position = int(np.argmin(np.abs(times - time)))
    if abs(times[position] - time) > IDENTITY_TOLERANCE:
        return float("nan")
    return float(trace["value"].iloc[position])


def _gap(trace, time: float) -> float:
    return abs(_value_at(trace, time + LIMIT_OFFSET) - _value_at(trace, time - LIMIT_OFFSET))


def check_dynamics(seed: int) -> CheckResult:
    """
    On one simulated path of the figure-4 scenario: the method-1 short rate is
    deterministic within each period, the fixed-maturity forward does not jump
    at tenor dates, and the fixed-time-to-maturity forward jumps exactly when
    t + ttm crosses a tenor date.
    """
    # local import: the engine itself runs these checks
    # pylint: disable=import-outside-toplevel
    from lmm_interp.engine import DynamicsAction, tenor_jump_times

    scenario = ScenarioConfig.for_figure(4, method="all", seed=seed)
    tenor = scenario.tenor()
    horizon = tenor.horizon - tenor.delta
    response = DynamicsAction(scenario).action()
    problems = []

    rates = response.trace("short_rate", "1")
    for k in range(1, tenor.period_of(horizon) + 1):
        end = tenor.date(k)
        inside = rates[(rates["time"] > tenor.date(k - 1)) & (rates["time"] < end)]
        r = inside["value"].to_numpy()
        implied = r / (1.0 - (end - inside["time"].to_numpy()) * r)
        if implied.size and np.ptp(implied) > 1e-10 * np.max(implied):
            problems.append(f"short rate varies in period {k}")

    for label in ("1", "2"):
        fixed = response.trace("fixed_maturity", label)
        for i in range(1, tenor.n):
            if tenor.date(i) >= scenario.fixed_maturity:
                continue
            if not _gap(fixed, tenor.date(i)) < JUMP_THRESHOLD:
                problems.append(f"method {label} fixed maturity jumps at {tenor.date(i):g}")
        moving = response.trace("fixed_ttm", label)
        for s in tenor_jump_times(tenor, scenario.fixed_ttm, horizon):
            gap = _gap(moving, s)
            if not math.isnan(gap) and not gap > JUMP_THRESHOLD:
                problems.append(f"method {label} fixed ttm misses the jump at {s:g}")
        for i in range(1, tenor.period_of(horizon)):
            gap = _gap(moving, tenor.date(i))
            if not math.isnan(gap) and not gap < JUMP_THRESHOLD:
                problems.append(f"method {label} fixed ttm jumps at {tenor.date(i):g}")
    detail = "traces behave as expected" if not problems else "; ".join(problems)
    return CheckResult("dynamics", not problems, detail)


def _run(name: str, check: Callable[[], CheckResult]) -> CheckResult:
    try:
        result = check()
    except ModelFailure as error:
        logger.error("Check '%s' raised %s.", name, error)
        result = CheckResult(name, False, f"{type(error).__name__}: {error}")
    level = logging.INFO if result.passed else logging.WARNING
    outcome = "passed" if result.passed else "FAILED"
    logger.log(level, "%s: %s (%s)", result.name, outcome, result.detail)
    return result


def run_checks(n_paths: int = 100_000, seed: int = 1) -> List[CheckResult]:
    """
    Run every acceptance check.

    Args:
        n_paths (int): Paths per Monte Carlo check.
        seed (int): Seed of every random draw.

    Returns:
        list of CheckResult: One result per check, in a fixed order. A check
        that raises a ModelFailure is reported as failed.
    """
    checks = [
        ("tenor-date caplet", lambda: check_tenor_date_caplet(n_paths, seed)),
        ("endpoint collapse", check_endpoint_collapse),
        ("broken-date accuracy", lambda: check_broken_date_accuracy(n_paths, seed)),
        ("implied volatility dip", lambda: check_implied_vol_dip(n_paths, seed)),
        ("martingales", lambda: check_martingales(n_paths, seed)),
        ("numeraire identity", lambda: check_numeraire_identity(seed)),
        ("stub identity", lambda: check_stub_identity(seed)),
        ("baseline agreement", check_baseline_agreement),
        ("drift machinery", lambda: check_drift_machinery(n_paths, seed)),
        ("dynamics", lambda: check_dynamics(seed)),
    ]
    return [_run(name, check) for name, check in checks]
