"""
The `lmm_interp.pricing` module prices caplets on forward LIBORs with
arbitrary (broken) start dates.

Classes:
    CapletSpec: A caplet on L(T, T) paying at T + delta.
    ImpliedVolBand: An implied volatility with its Monte Carlo band.

Functions:
    black_caplet(forward, strike, total_stdev, discount, accrual): Black caplet price.
    implied_vol(price, forward, strike, maturity, discount, accrual): Black implied volatility.
    implied_vol_band(estimate, forward, strike, maturity, discount, accrual, k):
        Implied volatilities of a price estimate and its k-SE band.
    price_caplet_mc(spec, initial, vol, scheme, mc): Monte Carlo caplet price.
    libor_elasticities(state, scheme, vol, T): d ln L(t,T) / d ln L(t,T_i).
    interp_libor_vol(state, scheme, vol, T): Relative volatility of L(t, T).
    approx_implied_vol(spec, initial, vol, scheme): Frozen-coefficient implied volatility.

Usage:
    spec = CapletSpec(start=1.125, strike=0.0625)
    estimate = price_caplet_mc(spec, curve, vol, InterpolationScheme.daycount(), MCConfig())
    approx_implied_vol(spec, curve, vol, InterpolationScheme.daycount())
"""

import logging
import math
from typing import Dict, NamedTuple

import numpy as np
from scipy.optimize import brentq
from scipy.stats import norm

from lmm_interp.exception.config_failure import ConfigFailure
from lmm_interp.exception.domain_failure import DomainFailure
from lmm_interp.exception.numerical_failure import NumericalFailure, PriceBoundsFailure
from lmm_interp.model import SENSITIVITY_RELATIVE_STEP, TENOR_DATE_TOLERANCE
from lmm_interp.model.curve import InitialCurve, ModelState
from lmm_interp.model.interpolation import (
    fallback_diagnostics,
    interpolated_libor,
    rolling_numeraire,
    zcb,
)
from lmm_interp.model.scheme import InterpolationScheme
from lmm_interp.model.volatility.abstract_volatility import AbstractVolatility
from lmm_interp.simulation import MCConfig, MCEstimate, estimate, simulate_paths

logger = logging.getLogger(__name__)

ATM_STRIKE_MULTIPLIER = 1.25
IMPLIED_VOL_TOLERANCE = 1e-10
PRICE_FLOOR = 1e-14
MAX_IMPLIED_VOL = 100.0


class CapletSpec:
    """
    Represents a caplet paying accrual * max(L(T, T) - K, 0) at T + accrual.

    Attributes:
        start (float): The start (fixing) date T, possibly broken.
        strike (float): The strike K.
        accrual (float): The accrual length delta.
        notional (float): The notional (default 1).
    """

    def __init__(
        self, start: float, strike: float, accrual: float = 0.25, notional: float = 1.0
    ) -> None:
        if not start > 0:
            raise DomainFailure(f"Caplet start date must be positive, got {start}.")
        if not strike > 0:
            raise DomainFailure(f"Caplet strike must be positive, got {strike}.")
        if not accrual > 0 or not notional > 0:
            raise DomainFailure("Caplet accrual and notional must be positive.")
        self.start = float(start)
        self.strike = float(strike)
        self.accrual = float(accrual)
        self.notional = float(notional)

    @property
    def payment_date(self) -> float:
        """The payment date T + delta."""
        return self.start + self.accrual

    def validate(self, initial: InitialCurve) -> None:
        """
        Raises:
            DomainFailure: If the accrual differs from the tenor's or T > T_N - delta.
        """
        tenor = initial.tenor
        if abs(self.accrual - tenor.delta) > TENOR_DATE_TOLERANCE:
            raise DomainFailure(f"Caplet accrual {self.accrual} differs from delta={tenor.delta}.")
        if self.start > tenor.horizon - tenor.delta + TENOR_DATE_TOLERANCE:
            raise DomainFailure(f"Caplet start {self.start} beyond T_N - delta.")

    def payoff(self, fixing):
        """Return the payoff accrual * max(fixing - K, 0) per path."""
        return self.notional * self.accrual * np.maximum(np.asarray(fixing) - self.strike, 0.0)

    def to_json(self) -> dict:
        """
        Convert the caplet to a JSON representation.
        """
        return {
            "start": self.start,
            "strike": self.strike,
            "accrual": self.accrual,
            "notional": self.notional,
        }


class ImpliedVolBand(NamedTuple):
    """An implied volatility and the implied volatilities of its band edges."""

    implied: float
    lower: float
    upper: float


def black_caplet(
    forward: float, strike: float, total_stdev: float, discount: float, accrual: float
) -> float:
    """
    Return the Black caplet price discount * accrual * (F N(d1) - K N(d2)),
    with d1,2 = (ln(F/K) +- v^2/2) / v.

    Args:
        forward (float): The forward LIBOR F.
        strike (float): The strike K.
        total_stdev (float): The total standard deviation v = sigma sqrt(T).
        discount (float): The discount factor to the payment date, in (0, 1].
        accrual (float): The accrual length.

    Raises:
        DomainFailure: On non-positive rates, negative variance or an invalid discount.
    """
    if not forward > 0 or not strike > 0:
        raise DomainFailure("Black caplet needs positive forward and strike.")
    if total_stdev < 0:
        raise DomainFailure(f"Negative total standard deviation {total_stdev}.")
    if not 0 < discount <= 1.0 + 1e-12 or not accrual > 0:
        raise DomainFailure(f"Invalid discount {discount} or accrual {accrual}.")
    if total_stdev == 0:
        return discount * accrual * max(forward - strike, 0.0)
    d_1 = (math.log(forward / strike) + 0.5 * total_stdev**2) / total_stdev
    d_2 = d_1 - total_stdev
    return discount * accrual * (forward * norm.cdf(d_1) - strike * norm.cdf(d_2))


def implied_vol(  # pylint: disable=too-many-arguments
    price: float,
    forward: float,
    strike: float,
    maturity: float,
    discount: float,
    accrual: float,
) -> float:
    """
    Return the Black volatility sigma with
    black_caplet(forward, strike, sigma sqrt(maturity), discount, accrual) = price.

    Prices within PRICE_FLOOR of the intrinsic value return 0.

    Raises:
        PriceBoundsFailure: If the price is below intrinsic or not below discount * accrual * F.
        NumericalFailure: If no bracketing volatility is found.
    """
    if not maturity > 0:
        raise DomainFailure(f"Implied volatility needs a positive maturity, got {maturity}.")
    intrinsic = discount * accrual * max(forward - strike, 0.0)
    ceiling = discount * accrual * forward
    if price < intrinsic - PRICE_FLOOR:
        raise PriceBoundsFailure("intrinsic", intrinsic, price)
    if price >= ceiling:
        raise PriceBoundsFailure("forward", ceiling, price)
    if price - intrinsic <= PRICE_FLOOR:
        logger.debug("Price %.3g is at the intrinsic floor; implied volatility 0.", price)
        return 0.0
    root_time = math.sqrt(maturity)

    def excess(sigma: float) -> float:
        return black_caplet(forward, strike, sigma * root_time, discount, accrual) - price

    upper = 1.0
    while excess(upper) < 0:
        upper *= 2.0
        if upper > MAX_IMPLIED_VOL:
            raise NumericalFailure(f"No implied volatility below {MAX_IMPLIED_VOL} for {price}.")
    return float(brentq(excess, 0.0, upper, xtol=IMPLIED_VOL_TOLERANCE))


def implied_vol_band(  # pylint: disable=too-many-arguments
    price: MCEstimate,
    forward: float,
    strike: float,
    maturity: float,
    discount: float,
    accrual: float,
    k: float = 2.0,
) -> ImpliedVolBand:
    """
    Return the implied volatility of an estimated price and of the prices
    k standard errors below and above it. A band edge outside the arbitrage
    bounds maps to 0 (below) or NaN (above).
    """
    implied = implied_vol(price.mean, forward, strike, maturity, discount, accrual)
    low_price, high_price = price.confidence_interval(k)
    try:
        lower = implied_vol(low_price, forward, strike, maturity, discount, accrual)
    except PriceBoundsFailure:
        lower = 0.0
    try:
        upper = implied_vol(high_price, forward, strike, maturity, discount, accrual)
    except PriceBoundsFailure:
        upper = float("nan")
    return ImpliedVolBand(implied, lower, upper)


def price_caplet_mc(
    spec: CapletSpec,
    initial: InitialCurve,
    vol: AbstractVolatility,
    scheme: InterpolationScheme,
    mc: MCConfig,
) -> MCEstimate:
    """
    Price a caplet by simulation under the rolling spot LIBOR measure.

    Each path fixes the interpolated LIBOR L(T, T) at T and deflates the
    payoff by the roll-over numeraire at T + delta.

    Returns:
        MCEstimate: The price per unit notional, with method-2 fallback notes
            in its diagnostics.

    Raises:
        ConfigFailure: If the configuration is not under the spot measure.
        DomainFailure: If the caplet does not fit the tenor structure.
    """
    spec.validate(initial)
    if not mc.measure.is_spot:
        raise ConfigFailure(
            "Caplets are priced under the rolling spot LIBOR measure.", field="measure"
        )
    tenor = initial.tenor
    diagnostics = fallback_diagnostics(scheme, tenor, [spec.start, spec.payment_date])
    for message in diagnostics:
        logger.warning(message)

    def observe(state: ModelState):
        if state.t < spec.start + TENOR_DATE_TOLERANCE:
            return interpolated_libor(state, scheme, vol, spec.start)
        return rolling_numeraire(state, scheme, vol)

    result = simulate_paths(
        initial,
        vol,
        mc,
        spec.payment_date,
        observer=observe,
        observation_times=[spec.start, spec.payment_date],
    )
    fixing, numeraire = result.observation(0), result.observation(1)
    samples = spec.payoff(fixing) / numeraire
    price = estimate(samples, antithetic=mc.antithetic, diagnostics=diagnostics)
    logger.info("Caplet at T=%g, K=%g: %r", spec.start, spec.strike, price)
    return price


def libor_elasticities(
    state: ModelState, scheme: InterpolationScheme, vol: AbstractVolatility, T: float
) -> Dict[int, float]:
    """
    Return d ln L(t, T) / d ln L(t, T_i) for the discrete rates that enter
    the interpolated LIBOR, keyed by tenor index.

    Method 1 uses the closed forms for L(t, T_{eta(T)-1}) and L(t, T_{eta(T)});
    method 2 bumps L(t, T_{eta(T)-1}), L(t, T_{eta(T)}) and L(t, T_{eta(T)+1})
    by a relative step and differences centrally. At a tenor date T_i the
    only elasticity is 1 for index i.
    """
    tenor = state.tenor
    index = tenor.tenor_index(T)
    if index is not None:
        return {index: 1.0}
    period = tenor.eta(T)
    level = float(interpolated_libor(state, scheme, vol, T))
    if scheme.is_daycount:
        earlier = float(state.libor(period - 1))
        later = float(state.libor(period))
        remaining = tenor.date(period) - T
        delta = tenor.delta
        d_earlier = remaining * (1.0 + delta * later) / (delta * (1.0 + remaining * later))
        d_later = (
            (1.0 + remaining * earlier) * (delta - remaining)
            / (delta * (1.0 + remaining * later) ** 2)
        )
        return {
            period - 1: d_earlier * earlier / level,
            period: d_later * later / level,
        }
    elasticities = {}
    step = SENSITIVITY_RELATIVE_STEP
    for i in (period - 1, period, period + 1):
        if i >= tenor.n:
            continue
        up = float(interpolated_libor(state.bumped(i, 1.0 + step), scheme, vol, T))
        down = float(interpolated_libor(state.bumped(i, 1.0 - step), scheme, vol, T))
        elasticities[i] = (up - down) / (2.0 * step * level)
    return elasticities


def interp_libor_vol(
    state: ModelState, scheme: InterpolationScheme, vol: AbstractVolatility, T: float
) -> np.ndarray:
    """
    Return the relative volatility d-vector of the interpolated LIBOR L(t, T),

        sum_i (d ln L(t,T) / d ln L(t,T_i)) lambda(t, T_i)

    over the discrete rates still diffusing at t; fixed rates contribute
    nothing.

    Raises:
        DomainFailure: If the state holds more than one path or T is out of range.
    """
    if state.libors.ndim != 1:
        raise DomainFailure("The interpolated LIBOR volatility is computed for a single path.")
    tenor = state.tenor
    if tenor.is_tenor_date(T):
        return np.asarray(vol.vol(state.t, T), dtype=float)
    total = np.zeros(vol.dimension)
    for i, weight in libor_elasticities(state, scheme, vol, T).items():
        if tenor.date(i) <= state.t + TENOR_DATE_TOLERANCE:
            continue
        total += weight * vol.vol(state.t, tenor.date(i))
    return total


def approx_implied_vol(
    spec: CapletSpec,
    initial: InitialCurve,
    vol: AbstractVolatility,
    scheme: InterpolationScheme,
) -> float:
    """
    Return the frozen-coefficient Black implied volatility of a caplet on
    L(T, T):

        sigma^2 T = sum_{a,b} w_a w_b integral_0^{min(T_a, T_b, T)} lambda(s,T_a) . lambda(s,T_b) ds

    with the elasticities w evaluated on the initial curve. Each discrete rate
    diffuses until its own fixing date or until T, whichever comes first; at
    a tenor date T_j the result is lambda-bar(0, T_j) / sqrt(T_j).
    """
    spec.validate(initial)
    tenor = initial.tenor
    T = spec.start
    index = tenor.tenor_index(T)
    if index is not None:
        maturity = tenor.date(index)
        return vol.integrated_vol(maturity, tenor.t0, maturity) / math.sqrt(maturity - tenor.t0)
    state = ModelState.initial(initial)
    weights = libor_elasticities(state, scheme, vol, T)
    variance = 0.0
    for a, w_a in weights.items():
        for b, w_b in weights.items():
            limit = min(tenor.date(a), tenor.date(b), T)
            covariance = vol.integrated_cov(tenor.date(a), tenor.date(b), tenor.t0, limit)
            variance += w_a * w_b * covariance
    return math.sqrt(max(variance, 0.0) / (T - tenor.t0))


def atm_strike(
    initial: InitialCurve, scheme: InterpolationScheme, vol: AbstractVolatility, T: float
) -> float:
    """
    Return ATM_STRIKE_MULTIPLIER times the initial interpolated LIBOR L(0, T).
    """
    return ATM_STRIKE_MULTIPLIER * float(
        interpolated_libor(ModelState.initial(initial), scheme, vol, T)
    )


def black_inputs(
    spec: CapletSpec,
    initial: InitialCurve,
    scheme: InterpolationScheme,
    vol: AbstractVolatility,
):
    """
    Return (forward, discount) for quoting a caplet price as a Black implied
    volatility: the initial interpolated LIBOR L(0, T) and zcb(0, T + delta).
    """
    state = ModelState.initial(initial)
    forward = float(interpolated_libor(state, scheme, vol, spec.start))
    discount = float(zcb(state, scheme, vol, spec.payment_date))
    return forward, discount
