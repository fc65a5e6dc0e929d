"""
The `lmm_interp.model.interpolation` module extends the discrete tenor model to
continuous tenor without introducing arbitrage.

Zero coupon bonds of arbitrary maturity are composed from three factors: the
short bond B(t, T_{eta(t)}) given by the interpolation method, exact ratios of
discrete tenor bonds, and a long-bond ratio B(t, t2) / B(t, T_{eta(t2)})
fixed by no arbitrage. Everything else (interpolated LIBORs, instantaneous
forwards, the short rate, the savings account and the roll-over numeraire)
is derived from these.

Functions:
    correction_factor(libor, accrual, variance): The lognormal expectation adjustment.
    expected_libor_under_payment_measure(state, vol, j, t2): E_{T_j}[L(t2, T_j) | F_t].
    short_bond(state, scheme, vol): B(t, T_{eta(t)}).
    long_bond_ratio(state, scheme, vol, t2): B(t, t2) / B(t, T_{eta(t2)}).
    zcb(state, scheme, vol, t2): B(t, t2).
    interpolated_libor(state, scheme, vol, T): L(t, T) for any start date T.
    instantaneous_forward(state, scheme, vol, T, mode, side): f(t, T).
    short_rate(state, scheme, vol): r(t) = f(t, t).
    short_rate_integral(fixing, period_end, s0, s1): Integral of the method-1 short rate.
    savings_account(state, scheme, vol, short_rate_path): beta(t).
    rolling_numeraire(state, scheme, vol): Value of the spot LIBOR roll-over strategy.
    baseline_loglinear_zcb(initial, T): Loglinear discount factor interpolation.
    baseline_forward(initial, T, side): Its stepwise constant forward rate.
    baseline_libor(initial, T): Its forward LIBOR.
    fallback_diagnostics(scheme, tenor, times): Method-2 boundary fallbacks.

Note:
    Method 2 refers to L(t, T_{eta}) and lambda(., T_{eta}). In the final
    accrual period (eta = N) no such rate exists, and method 2 falls back to
    method 1 for that period. fallback_diagnostics reports where this happens.
"""

import logging
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy.integrate import trapezoid

from lmm_interp.exception.domain_failure import DomainFailure
from lmm_interp.exception.state_failure import StateFailure
from lmm_interp.model import FINITE_DIFFERENCE_STEP, TENOR_DATE_TOLERANCE
from lmm_interp.model.curve import InitialCurve, ModelState
from lmm_interp.model.scheme import InterpolationScheme
from lmm_interp.model.tenor import TenorStructure
from lmm_interp.model.volatility.abstract_volatility import AbstractVolatility

logger = logging.getLogger(__name__)

FORWARD_MODES = ("analytic", "finite-difference")
LIMIT_SIDES = ("left", "right")


def correction_factor(libor, accrual: float, variance: float):
    """
    Return 1 + accrual L (e^variance - 1) / (1 + accrual L).

    Multiplying L by this factor gives the expectation of a lognormal forward
    LIBOR under the forward measure to its own start date, i.e. one accrual
    period earlier than the measure under which it is a martingale.
    """
    libor = np.asarray(libor, dtype=float)
    return 1.0 + accrual * libor * np.expm1(variance) / (1.0 + accrual * libor)


def expected_libor_under_payment_measure(
    state: ModelState, vol: AbstractVolatility, j: int, t2: float
):
    """
    Return E_{T_j}[L(t2, T_j) | F_t], the expectation of a live LIBOR under
    the forward measure to its start date T_j.

    Raises:
        DomainFailure: If t2 is outside [t, T_j].
    """
    tenor = state.tenor
    maturity = tenor.date(j)
    if t2 < state.t - TENOR_DATE_TOLERANCE or t2 > maturity + TENOR_DATE_TOLERANCE:
        raise DomainFailure(f"Expectation horizon {t2} outside [{state.t}, {maturity}].")
    variance = vol.integrated_var(maturity, state.t, min(t2, maturity))
    libor = state.libor(j)
    return libor * correction_factor(libor, tenor.delta, variance)


def fallback_applies(scheme: InterpolationScheme, tenor: TenorStructure, period: int) -> bool:
    """
    Whether method 2 must fall back to method 1 for the accrual period ending
    at T_period (there is no live LIBOR L(., T_N)).
    """
    return not scheme.is_daycount and period >= tenor.n


def fallback_diagnostics(
    scheme: InterpolationScheme, tenor: TenorStructure, times: Sequence[float]
) -> List[str]:
    """
    Return a diagnostic message for each time lying in an accrual period where
    method 2 falls back to method 1.
    """
    messages = []
    for time in times:
        if tenor.is_tenor_date(time) or time <= tenor.t0:
            continue
        if fallback_applies(scheme, tenor, tenor.period_of(time)):
            messages.append(
                f"method 2 fell back to method 1 at t={time:.6g}: "
                f"no forward LIBOR L(., T_{tenor.n}) exists"
            )
    return messages


def _period_rate(state: ModelState, index: int):
    # L(t, T_index), read from the recorded fixing once T_index <= t
    if state.tenor.date(index) <= state.t + TENOR_DATE_TOLERANCE:
        return state.fixing(index)
    return state.libor(index)


def _alpha(scheme: InterpolationScheme, tenor: TenorStructure, T: float, period: int) -> float:
    if scheme.alpha_function is not None:
        return scheme.alpha(T, tenor)
    return (tenor.date(period) - T) / tenor.delta


def _ratio_in_period(
    state: ModelState,
    scheme: InterpolationScheme,
    vol: AbstractVolatility,
    T: float,
    period: int,
):
    """
    Return B(t, T) / B(t, T_period) for T in [max(t, T_{period-1}), T_period].
    """
    tenor = state.tenor
    end = tenor.date(period)
    remaining = end - T
    earlier = _period_rate(state, period - 1)
    if scheme.is_daycount or fallback_applies(scheme, tenor, period):
        if not scheme.is_daycount:
            logger.debug("Method 2 falls back to method 1 in period %d.", period)
        return 1.0 + remaining * earlier
    alpha = _alpha(scheme, tenor, T, period)
    later = state.libor(period)
    variance = vol.integrated_var(end, state.t, max(T, state.t))
    adjusted = later * correction_factor(later, tenor.delta, variance)
    return 1.0 + remaining * (alpha * earlier + (1.0 - alpha) * adjusted)


def _check_maturity(state: ModelState, t2: float, upper: Optional[float] = None) -> None:
    upper = state.tenor.horizon if upper is None else upper
    if t2 < state.t - TENOR_DATE_TOLERANCE or t2 > upper + TENOR_DATE_TOLERANCE:
        raise DomainFailure(f"Maturity {t2} outside [{state.t}, {upper}].")


def _start_index(state: ModelState) -> int:
    index = state.tenor.tenor_index(state.t)
    return index if index is not None else state.tenor.eta(state.t)


def short_bond(state: ModelState, scheme: InterpolationScheme, vol: AbstractVolatility):
    """
    Return the short bond B(t, T_{eta(t)}), the bond maturing at the next
    tenor date.

    Method 1: (1 + (T_{eta(t)} - t) L(T_{eta(t)-1}, T_{eta(t)-1}))^{-1}.
    Method 2: (1 + (T_{eta(t)} - t) (alpha(t) L(T_{eta(t)-1}, T_{eta(t)-1})
    + (1 - alpha(t)) L(t, T_{eta(t)})))^{-1}. At tenor dates the value is 1.

    Raises:
        StateFailure: If the fixing L(T_{eta(t)-1}, T_{eta(t)-1}) is missing.
    """
    tenor = state.tenor
    if tenor.is_tenor_date(state.t):
        return np.ones(state.libors.shape[:-1])
    period = tenor.eta(state.t)
    return 1.0 / _ratio_in_period(state, scheme, vol, state.t, period)


def long_bond_ratio(
    state: ModelState, scheme: InterpolationScheme, vol: AbstractVolatility, t2: float
):
    """
    Return B(t, t2) / B(t, T_{eta(t2)}), the ratio fixed by no arbitrage.

    Method 1: 1 + (T_{eta(t2)} - t2) L(t, T_{eta(t2)-1}).
    Method 2: 1 + (T_{eta(t2)} - t2) (alpha(t2) L(t, T_{eta(t2)-1})
    + (1 - alpha(t2)) L(t, T_{eta(t2)}) CF), with CF the correction factor
    over [t, t2]. The ratio is exactly 1 when t2 is a tenor date.

    Raises:
        DomainFailure: If t2 is outside [t, T_N].
    """
    _check_maturity(state, t2)
    tenor = state.tenor
    if tenor.is_tenor_date(t2):
        return np.ones(state.libors.shape[:-1])
    return _ratio_in_period(state, scheme, vol, t2, tenor.eta(t2))


def zcb(state: ModelState, scheme: InterpolationScheme, vol: AbstractVolatility, t2: float):
    """
    Return the zero coupon bond price B(t, t2) for any t <= t2 <= T_N:

        B(t, t2) = B(t, T_{eta(t)}) prod_{i=eta(t)}^{eta(t2)-1} (1 + delta L(t, T_i))^{-1}
                   B(t, t2) / B(t, T_{eta(t2)})

    Raises:
        DomainFailure: If t2 is outside [t, T_N].
    """
    _check_maturity(state, t2)
    tenor = state.tenor
    if abs(t2 - state.t) <= TENOR_DATE_TOLERANCE:
        return np.ones(state.libors.shape[:-1])
    start = _start_index(state)
    end = tenor.tenor_index(t2)
    if end is None:
        end = tenor.eta(t2)
        ratio = _ratio_in_period(state, scheme, vol, t2, end)
    else:
        ratio = 1.0
    product = np.prod(1.0 + tenor.delta * state.libors[..., start:end], axis=-1)
    return short_bond(state, scheme, vol) * ratio / product


def interpolated_libor(
    state: ModelState, scheme: InterpolationScheme, vol: AbstractVolatility, T: float
):
    """
    Return the forward LIBOR L(t, T) for an arbitrary start date T, through
    the factorisation

        L(t, T) = ( B(t,T)/B(t,T_{eta(T)}) (1 + delta L(t, T_{eta(T)}))
                    / (B(t,T+delta)/B(t,T_{eta(T)+1})) - 1 ) / delta

    At a tenor date the discrete LIBOR is returned unchanged.

    Raises:
        DomainFailure: If T is outside [t, T_N - delta].
    """
    tenor = state.tenor
    _check_maturity(state, T, tenor.horizon - tenor.delta)
    index = tenor.tenor_index(T)
    if index is not None:
        return np.array(state.libor(index), copy=True)
    period = tenor.eta(T)
    near = _ratio_in_period(state, scheme, vol, T, period)
    far = _ratio_in_period(state, scheme, vol, T + tenor.delta, period + 1)
    growth = 1.0 + tenor.delta * state.libor(period)
    return (near * growth / far - 1.0) / tenor.delta


def _forward_period(state: ModelState, T: float, side: Optional[str]) -> int:
    tenor = state.tenor
    index = tenor.tenor_index(T)
    if index is None:
        return tenor.eta(T)
    if side not in LIMIT_SIDES:
        raise DomainFailure(
            f"Instantaneous forwards jump at the tenor date {T}; request side 'left' or 'right'."
        )
    if side == "left":
        if index == 0 or T <= state.t + TENOR_DATE_TOLERANCE:
            raise DomainFailure(f"No left limit at {T} for a state at time {state.t}.")
        return index
    if index >= tenor.n:
        raise DomainFailure(f"No right limit at the horizon {T}.")
    return index + 1


def instantaneous_forward(
    state: ModelState,
    scheme: InterpolationScheme,
    vol: AbstractVolatility,
    T: float,
    mode: str = "analytic",
    side: Optional[str] = None,
):
    """
    Return the instantaneous forward rate f(t, T) = -d/dT ln B(t, T).

    Within an accrual period B(t, T_{eta(T)}) does not depend on T, so
    f(t, T) = -d/dT ln(B(t, T) / B(t, T_{eta(T)})). Method 1 has the closed
    form L / (1 + (T_{eta(T)} - T) L) with L = L(t, T_{eta(T)-1}); method 2
    (and mode "finite-difference") differentiates numerically with step h,
    one-sided within 2h of the ends of the period.

    Args:
        T (float): The maturity, t <= T <= T_N.
        mode (str): "analytic" or "finite-difference".
        side (str): "left" or "right"; required when T is a tenor date.

    Raises:
        DomainFailure: On an invalid maturity, mode or missing side.
    """
    if mode not in FORWARD_MODES:
        raise DomainFailure(f"Unknown differentiation mode '{mode}'.")
    _check_maturity(state, T)
    tenor = state.tenor
    period = _forward_period(state, T, side)
    if mode == "analytic" and scheme.is_daycount:
        rate = _period_rate(state, period - 1)
        return rate / (1.0 + (tenor.date(period) - T) * rate)

    def log_ratio(x):
        return np.log(_ratio_in_period(state, scheme, vol, x, period))

    lower = max(state.t, tenor.date(period - 1))
    upper = tenor.date(period)
    h = FINITE_DIFFERENCE_STEP
    if T - lower < 2.0 * h:
        slope = (-3.0 * log_ratio(T) + 4.0 * log_ratio(T + h) - log_ratio(T + 2.0 * h)) / (2.0 * h)
    elif upper - T < 2.0 * h:
        slope = (3.0 * log_ratio(T) - 4.0 * log_ratio(T - h) + log_ratio(T - 2.0 * h)) / (2.0 * h)
    else:
        slope = (log_ratio(T + h) - log_ratio(T - h)) / (2.0 * h)
    return -slope


def short_rate(state: ModelState, scheme: InterpolationScheme, vol: AbstractVolatility):
    """
    Return the continuously compounded short rate r(t) = f(t, t) (the right
    limit at tenor dates).
    """
    side = "right" if state.tenor.is_tenor_date(state.t) else None
    return instantaneous_forward(state, scheme, vol, state.t, side=side)


def short_rate_integral(fixing, period_end: float, s0: float, s1: float):
    """
    Return the integral over [s0, s1] of the method-1 short rate
    r(s) = L / (1 + (T - s) L) within an accrual period ending at T:

        ln(1 + (T - s0) L) - ln(1 + (T - s1) L)

    Over a whole period this equals ln(1 + delta L).
    """
    fixing = np.asarray(fixing, dtype=float)
    return np.log1p((period_end - s0) * fixing) - np.log1p((period_end - s1) * fixing)


def _fixing_product(state: ModelState, count: int):
    if count <= 0:
        return np.ones(state.libors.shape[:-1])
    fixings = state.fixings[..., :count]
    if np.any(np.isnan(fixings)):
        raise StateFailure(f"Fixings up to T_{count - 1} are required.")
    return np.prod(1.0 + state.tenor.delta * fixings, axis=-1)


def savings_account(
    state: ModelState,
    scheme: InterpolationScheme,
    vol: AbstractVolatility,
    short_rate_path: Optional[Tuple[Sequence[float], np.ndarray]] = None,
):
    """
    Return the savings account beta(t) = exp(integral_0^t r(s) ds):

        beta(t) = prod_{i=0}^{eta(t)-2} (1 + delta L(T_i, T_i))
                  exp(integral_{T_{eta(t)-1}}^t r(s) ds)

    Under method 1 the stub integral has a closed form. Under method 2 the
    short rate is stochastic inside the period and the stub is integrated
    (trapezoidal rule) from a supplied path of short rates.

    Args:
        short_rate_path (tuple): (times, rates) covering [T_{eta(t)-1}, t];
            rates has the times along its last axis. Required for method 2.

    Raises:
        StateFailure: On missing fixings or a missing method-2 short-rate path.
    """
    tenor = state.tenor
    index = tenor.tenor_index(state.t)
    if index is not None:
        return _fixing_product(state, index)
    period = tenor.eta(state.t)
    start = tenor.date(period - 1)
    base = _fixing_product(state, period - 1)
    if scheme.is_daycount or fallback_applies(scheme, tenor, period):
        stub = short_rate_integral(state.fixing(period - 1), tenor.date(period), start, state.t)
        return base * np.exp(stub)
    if short_rate_path is None:
        raise StateFailure(
            "The method-2 savings account needs the short-rate path over the current period."
        )
    times, rates = short_rate_path
    times = np.asarray(times, dtype=float)
    if abs(times[0] - start) > 1e-9 or abs(times[-1] - state.t) > 1e-9:
        raise StateFailure(f"Short-rate path must cover [{start}, {state.t}].")
    return base * np.exp(trapezoid(np.asarray(rates, dtype=float), times, axis=-1))


def rolling_numeraire(
    state: ModelState, scheme: InterpolationScheme, vol: AbstractVolatility
):
    """
    Return the value at t of one unit invested at T_0 and rolled over at spot
    LIBOR:

        prod_{i=0}^{eta(t)-2} (1 + delta L(T_i, T_i)) B(t, T_{eta(t)}) / B(T_{eta(t)-1}, T_{eta(t)})

    This is the numeraire of the rolling spot LIBOR measure for both methods;
    under method 1 it coincides with the savings account.
    """
    tenor = state.tenor
    index = tenor.tenor_index(state.t)
    if index is not None:
        return _fixing_product(state, index)
    period = tenor.eta(state.t)
    return _fixing_product(state, period) * short_bond(state, scheme, vol)


def _baseline_log_bonds(initial: InitialCurve) -> np.ndarray:
    steps = np.log1p(initial.tenor.delta * initial.libors0)
    return -np.concatenate(([0.0], np.cumsum(steps)))


def baseline_loglinear_zcb(initial: InitialCurve, T: float) -> float:
    """
    Return B(0, T) from loglinear interpolation of the discrete tenor bonds
    B(0, T_i) = prod_{k<i} (1 + delta L(0, T_k))^{-1}.

    Raises:
        DomainFailure: If T is outside [T_0, T_N].
    """
    tenor = initial.tenor
    if T < tenor.t0 - TENOR_DATE_TOLERANCE or T > tenor.horizon + TENOR_DATE_TOLERANCE:
        raise DomainFailure(f"Maturity {T} outside [{tenor.t0}, {tenor.horizon}].")
    return float(np.exp(np.interp(T, tenor.dates(), _baseline_log_bonds(initial))))


def baseline_forward(initial: InitialCurve, T: float, side: Optional[str] = None) -> float:
    """
    Return the stepwise constant forward rate ln(1 + delta L(0, T_{eta(T)-1})) / delta
    implied by loglinear discount factor interpolation.

    Raises:
        DomainFailure: At a tenor date without side, or outside (T_0, T_N).
    """
    tenor = initial.tenor
    index = tenor.tenor_index(T)
    if index is None:
        period = tenor.eta(T)
    elif side == "left" and index >= 1:
        period = index
    elif side == "right" and index < tenor.n:
        period = index + 1
    else:
        raise DomainFailure(f"Forward at tenor date {T} needs a valid side.")
    return float(np.log1p(tenor.delta * initial.libors0[period - 1]) / tenor.delta)


def baseline_libor(initial: InitialCurve, T: float) -> float:
    """
    Return the forward LIBOR L(0, T) implied by loglinear discount factor
    interpolation.
    """
    tenor = initial.tenor
    if T > tenor.horizon - tenor.delta + TENOR_DATE_TOLERANCE:
        raise DomainFailure(f"Start date {T} beyond T_N - delta.")
    ratio = baseline_loglinear_zcb(initial, T) / baseline_loglinear_zcb(initial, T + tenor.delta)
    return (ratio - 1.0) / tenor.delta
