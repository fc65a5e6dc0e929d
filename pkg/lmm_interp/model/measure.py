"""
The `lmm_interp.model.measure` module provides the measure-change machinery of
the discrete tenor model: the gamma loadings linking adjacent forward
measures, the drift of every forward LIBOR under any forward measure or the
rolling spot LIBOR measure, and the Radon-Nikodym density between adjacent
forward measures.

Enums:
    MeasureType: Forward measure or rolling spot LIBOR measure.

Classes:
    MeasureTag: A pricing measure, Forward(j) or SpotRolling.
    DriftStencil: The block of coupled LIBORs lo..hi under a measure.

Functions:
    gamma(libors, loadings, delta): delta L / (1 + delta L) lambda for every rate.
    gamma_at(state, vol, k): gamma for one live rate at the state time.
    drift_coefficients(libors, loadings, delta, j): Drift of ln L (without the Ito term).
    drift_under(measure, state, vol, stencil): Drift of dL for every rate.
    drift_matrices(state, vol, stencil): The Lambda, Psi and ell building blocks.
    literal_drift(state, vol, stencil): The drift as the matrix product Psi ell.
    radon_nikodym_increment(gammas, increments, step_lengths): dP_{T_k}/dP_{T_{k+1}}.

Note:
    Under Forward(j) the drift of L_h is L_h lambda_h . (G_h - G_{j-1}), with G
    the running sum of gamma over tenor indices. For h < j-1 this is
    -L_h lambda_h . sum_{k=h+1}^{j-1} gamma_k, for h > j-1 it is
    L_h lambda_h . sum_{k=j}^{h} gamma_k, and L_{j-1} is driftless.
"""

from enum import Enum
from typing import Optional, Tuple

import numpy as np

from lmm_interp.exception.domain_failure import DomainFailure
from lmm_interp.exception.state_failure import StateFailure
from lmm_interp.model.curve import ModelState
from lmm_interp.model.tenor import TenorStructure
from lmm_interp.model.volatility.abstract_volatility import AbstractVolatility


class MeasureType(Enum):
    """
    Represents the kinds of pricing measure.

    Enum Members:
        FORWARD (str): The forward measure to a tenor date T_j.
        SPOT_ROLLING (str): The rolling spot LIBOR measure.
    """

    FORWARD = "forward"
    SPOT_ROLLING = "spot"


class MeasureTag:
    """
    Represents a pricing measure of the discrete tenor model.

    The rolling spot LIBOR measure is realised by pasting conditional forward
    measures: on the period (T_{i-1}, T_i] it coincides with Forward(i).

    Attributes:
        kind (MeasureType): The kind of measure.
        index (int): j for Forward(j), None for SpotRolling.

    Methods:
        forward(j): The forward measure to T_j.
        spot_rolling(): The rolling spot LIBOR measure.
        numeraire_index(t, tenor): j of the forward measure governing the increment after t.
        validate(tenor): Check the measure against a tenor structure.
    """

    def __init__(self, kind: MeasureType, index: Optional[int] = None) -> None:
        if kind is MeasureType.FORWARD:
            if index is None or int(index) != index or index < 1:
                raise DomainFailure(f"Forward measures need a tenor index j >= 1, got {index}.")
            index = int(index)
        elif index is not None:
            raise DomainFailure("The rolling spot LIBOR measure takes no index.")
        self.kind = kind
        self.index = index

    @classmethod
    def forward(cls, j: int) -> "MeasureTag":
        """The forward measure to T_j."""
        return cls(MeasureType.FORWARD, j)

    @classmethod
    def spot_rolling(cls) -> "MeasureTag":
        """The rolling spot LIBOR measure."""
        return cls(MeasureType.SPOT_ROLLING)

    @classmethod
    def from_label(cls, label: str) -> "MeasureTag":
        """
        Parse "spot" or "forward:<j>".

        Raises:
            DomainFailure: On an unknown label.
        """
        text = str(label).strip().lower()
        if text in ("spot", "spot_rolling", "spotrolling"):
            return cls.spot_rolling()
        if text.startswith("forward:"):
            try:
                return cls.forward(int(text.split(":", 1)[1]))
            except ValueError as error:
                raise DomainFailure(f"Invalid forward measure '{label}'.") from error
        raise DomainFailure(f"Unknown measure '{label}'.")

    @property
    def is_spot(self) -> bool:
        """Whether this is the rolling spot LIBOR measure."""
        return self.kind is MeasureType.SPOT_ROLLING

    @property
    def label(self) -> str:
        """The label accepted by from_label."""
        return "spot" if self.is_spot else f"forward:{self.index}"

    def validate(self, tenor: TenorStructure) -> None:
        """
        Raises:
            DomainFailure: If Forward(j) has j > N.
        """
        if not self.is_spot and self.index > tenor.n:
            raise DomainFailure(f"Forward measure index {self.index} beyond N={tenor.n}.")

    def numeraire_index(self, t: float, tenor: TenorStructure) -> int:
        """
        Return j such that the increment of the LIBORs just after time t is
        driven under Forward(j). At a tenor date T_i the spot measure has
        already rolled to Forward(i+1).
        """
        if not self.is_spot:
            return self.index
        index = tenor.tenor_index(t)
        if index is not None:
            return index + 1
        return tenor.eta(t)

    def to_json(self) -> dict:
        """
        Convert the measure to a JSON representation.
        """
        return {"kind": self.kind.value, "index": self.index}

    def __eq__(self, other) -> bool:
        if not isinstance(other, MeasureTag):
            return NotImplemented
        return self.kind is other.kind and self.index == other.index

    def __hash__(self) -> int:
        return hash((self.kind, self.index))

    def __repr__(self) -> str:
        return "SpotRolling" if self.is_spot else f"Forward({self.index})"


class DriftStencil:
    """
    Represents the block of forward LIBORs L_lo..L_hi whose drifts are
    coupled under a measure, together with that measure.

    The block Markov in itself under Forward(j) is lo = min(h, j-1),
    hi = max(h, j-1) for a rate h. Forward(hi + 1) is the block-terminal
    measure (drifts are negative) and Forward(lo + 1) the block-near measure
    (drifts are positive).

    Attributes:
        lo (int): First tenor index of the block.
        hi (int): Last tenor index of the block.
        measure (MeasureTag): A forward measure with lo <= j - 1 <= hi.
    """

    def __init__(self, lo: int, hi: int, measure: MeasureTag) -> None:
        if lo < 0 or hi < lo:
            raise DomainFailure(f"Invalid stencil bounds {lo}..{hi}.")
        if measure.is_spot or not lo <= measure.index - 1 <= hi:
            raise DomainFailure(f"Stencil {lo}..{hi} does not match the measure {measure!r}.")
        self.lo = int(lo)
        self.hi = int(hi)
        self.measure = measure

    @classmethod
    def covering(cls, h: int, j: int) -> "DriftStencil":
        """The smallest stencil closing the drift of L_h under Forward(j)."""
        return cls(min(h, j - 1), max(h, j - 1), MeasureTag.forward(j))

    @classmethod
    def terminal(cls, lo: int, hi: int) -> "DriftStencil":
        """The block lo..hi under Forward(hi + 1)."""
        return cls(lo, hi, MeasureTag.forward(hi + 1))

    @classmethod
    def near(cls, lo: int, hi: int) -> "DriftStencil":
        """The block lo..hi under Forward(lo + 1)."""
        return cls(lo, hi, MeasureTag.forward(lo + 1))

    @property
    def size(self) -> int:
        """The number n of rates in the block."""
        return self.hi - self.lo + 1

    def indices(self) -> np.ndarray:
        """The tenor indices lo..hi."""
        return np.arange(self.lo, self.hi + 1)

    def __repr__(self) -> str:
        return f"DriftStencil({self.lo}..{self.hi}, {self.measure!r})"


def gamma(libors, loadings, delta: float) -> np.ndarray:
    """
    Return gamma_k = delta L_k / (1 + delta L_k) lambda_k for every rate.

    Args:
        libors (np.ndarray): Shape (..., N) forward LIBORs.
        loadings (np.ndarray): Shape (N, d) volatility loadings lambda_k.
        delta (float): The accrual length.

    Returns:
        np.ndarray: Shape (..., N, d).
    """
    libors = np.asarray(libors, dtype=float)
    weight = delta * libors / (1.0 + delta * libors)
    return weight[..., np.newaxis] * np.asarray(loadings, dtype=float)


def _rate_loadings(state: ModelState, vol: AbstractVolatility) -> np.ndarray:
    tenor = state.tenor
    loadings = np.zeros((tenor.n, vol.dimension))
    for h in range(state.live_index(), tenor.n):
        loadings[h] = vol.vol(state.t, tenor.date(h))
    return loadings


def gamma_at(state: ModelState, vol: AbstractVolatility, k: int) -> np.ndarray:
    """
    Return gamma(t, T_k, T_{k+1}) = delta L(t, T_k) / (1 + delta L(t, T_k)) lambda(t, T_k).

    Raises:
        StateFailure: If L(., T_k) is dead or absent at the state time.
    """
    tenor = state.tenor
    if k < state.live_index() or k >= tenor.n:
        raise StateFailure(f"L(., T_{k}) is not live at time {state.t}.")
    libor = state.libor(k)
    weight = tenor.delta * libor / (1.0 + tenor.delta * libor)
    return np.multiply.outer(weight, vol.vol(state.t, tenor.date(k)))


def drift_coefficients(libors, loadings, delta: float, j: int) -> np.ndarray:
    """
    Return lambda_h . (G_h - G_{j-1}) for every rate h, the drift of L_h under
    Forward(j) divided by L_h.

    Args:
        libors (np.ndarray): Shape (..., N).
        loadings (np.ndarray): Shape (N, d), zero for rates that do not diffuse.
        delta (float): The accrual length.
        j (int): The forward measure index, 1 <= j <= N.

    Returns:
        np.ndarray: Shape (..., N).
    """
    loadings = np.asarray(loadings, dtype=float)
    running = np.cumsum(gamma(libors, loadings, delta), axis=-2)
    relative = running - running[..., j - 1 : j, :]
    return np.einsum("...hc,hc->...h", relative, loadings)


def drift_under(
    measure: MeasureTag,
    state: ModelState,
    vol: AbstractVolatility,
    stencil: Optional[DriftStencil] = None,
) -> np.ndarray:
    """
    Return the drift mu_h of dL_h = mu_h dt + L_h lambda_h . dW for every rate
    at the state time, under the given measure. Dead rates have zero drift.

    Args:
        measure (MeasureTag): Forward(j), or SpotRolling (Forward(eta(t))
            inside a period, Forward(i+1) at a tenor date T_i).
        state (ModelState): The model state.
        vol (AbstractVolatility): The LIBOR volatility.
        stencil (DriftStencil): Optional block; when given only rates lo..hi
            are read and only their drifts are returned non-zero.

    Returns:
        np.ndarray: Shape (..., N) drifts per year.

    Raises:
        DomainFailure: If the stencil does not match the measure.
    """
    tenor = state.tenor
    measure.validate(tenor)
    j = measure.numeraire_index(state.t, tenor)
    loadings = _rate_loadings(state, vol)
    libors = state.libors
    mask = np.zeros(tenor.n, dtype=bool)
    mask[state.live_index():] = True
    if stencil is not None:
        if stencil.measure.index != j:
            raise DomainFailure(
                f"{stencil!r} does not match the measure {measure!r} at t={state.t}."
            )
        block = np.zeros(tenor.n, dtype=bool)
        block[stencil.lo : stencil.hi + 1] = True
        loadings = np.where(block[:, np.newaxis], loadings, 0.0)
        libors = np.where(block, libors, 0.0)
        mask &= block
    coefficients = drift_coefficients(libors, loadings, tenor.delta, j)
    return np.where(mask, libors * coefficients, 0.0)


def drift_matrices(
    state: ModelState, vol: AbstractVolatility, stencil: DriftStencil
) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Build the block quantities of the joint LIBOR dynamics for a single path:

        Lambda_{hc} = L_h lambda_c(t, T_h)                 (n x d)
        Psi_{hk}    = L_h lambda(t, T_h) . lambda(t, T_k)  (n x n)
        ell_k       = delta L_k / (1 + delta L_k)          (n)

    Psi is restricted to k > h under the block-terminal measure Forward(hi+1)
    and to lo < k <= h under the block-near measure Forward(lo+1).

    Raises:
        DomainFailure: If the stencil measure is neither block end, or the
            state holds more than one path.
    """
    tenor = state.tenor
    if state.libors.ndim != 1:
        raise DomainFailure("Drift matrices are built for a single path.")
    indices = stencil.indices()
    libors = state.libors[indices]
    loadings = np.array([vol.vol(state.t, tenor.date(h)) for h in indices])
    lambda_matrix = libors[:, np.newaxis] * loadings
    full = libors[:, np.newaxis] * (loadings @ loadings.T)
    h_pos, k_pos = np.indices((stencil.size, stencil.size))
    j = stencil.measure.index
    if j == stencil.hi + 1:
        psi = np.where(k_pos > h_pos, full, 0.0)
    elif j == stencil.lo + 1:
        psi = np.where((k_pos > 0) & (k_pos <= h_pos), full, 0.0)
    else:
        raise DomainFailure(f"{stencil!r} is neither block-terminal nor block-near.")
    ell = tenor.delta * libors / (1.0 + tenor.delta * libors)
    return lambda_matrix, psi, ell


def literal_drift(state: ModelState, vol: AbstractVolatility, stencil: DriftStencil) -> np.ndarray:
    """
    Return the block drift -Psi ell (block-terminal measure) or +Psi' ell
    (block-near measure) for a single path, as an n-vector.
    """
    _, psi, ell = drift_matrices(state, vol, stencil)
    sign = -1.0 if stencil.measure.index == stencil.hi + 1 else 1.0
    return sign * (psi @ ell)


def radon_nikodym_increment(gammas, increments, step_lengths) -> np.ndarray:
    """
    Return the discretised density dP_{T_k}/dP_{T_{k+1}} over a run of steps,

        exp( sum_s gamma_s . dW_s - 1/2 sum_s |gamma_s|^2 dt_s )

    where dW are Brownian increments under P_{T_{k+1}}.

    Args:
        gammas (np.ndarray): Shape (..., S, d) gamma(t_s, T_k, T_{k+1}) at step starts.
        increments (np.ndarray): Shape (..., S, d) Brownian increments.
        step_lengths (np.ndarray): Shape (S,) step lengths.

    Returns:
        np.ndarray: Shape (...) densities.

    Raises:
        StateFailure: If the arrays do not line up.
    """
    gammas = np.asarray(gammas, dtype=float)
    increments = np.asarray(increments, dtype=float)
    step_lengths = np.asarray(step_lengths, dtype=float)
    if gammas.shape != increments.shape or gammas.shape[-2] != step_lengths.shape[0]:
        raise StateFailure("Gamma loadings, increments and step lengths do not line up.")
    stochastic = np.sum(gammas * increments, axis=(-2, -1))
    compensator = 0.5 * np.sum(np.sum(gammas * gammas, axis=-1) * step_lengths, axis=-1)
    return np.exp(stochastic - compensator)
