# Copyright (c) 2026 Pl4yer-ONE
# This file is part of DualTap.
# Licensed under GPLv3 or commercial license.

"""
Mean and Mean-Square Predictors
Closed forms for the mean weight error, per-tap bias, the scalar MSD
recursion and the steady-state MSD of zero-attracting LMS filters.

The steady-state penalty weights s_bar (one per active tap) are an input;
see plugin.py for how they are obtained.
"""

from dataclasses import dataclass, field
from typing import Any, Callable, Dict, Optional, Union

import numpy as np

from src.config import DB_FLOOR
from src.errors import (
    DivergenceError,
    InvalidComparisonError,
    InvalidConfigurationError,
    InvalidInputError,
)
from .stability import msd_contraction

PenaltySequence = Union[np.ndarray, Callable[[int], np.ndarray]]


def to_db(value: Union[float, np.ndarray]) -> Union[float, np.ndarray]:
    """10 log10 of a squared-deviation quantity, clamped at DB_FLOOR."""
    return 10.0 * np.log10(np.maximum(value, DB_FLOOR))


@dataclass(frozen=True, eq=False)
class TheoryInputs:
    """
    Operating point for the steady-state formulas.

    sbar_active holds one steady-state mean penalty weight per active tap.
    Values of exactly 0 are accepted (fully relaxed penalty).
    """
    M: int
    K: int
    sigma_x2: float
    sigma_v2: float
    mu: float
    rho0: float
    sbar_active: np.ndarray = field(default_factory=lambda: np.zeros(0))

    def __post_init__(self):
        sbar = np.asarray(self.sbar_active, dtype=np.float64).reshape(-1)
        object.__setattr__(self, "sbar_active", sbar)
        if not (self.sigma_x2 > 0 and self.sigma_v2 > 0):
            raise InvalidConfigurationError("input and noise variances must be > 0")
        if not self.mu > 0:
            raise InvalidConfigurationError(f"step size must be > 0, got {self.mu}")
        if self.rho0 < 0:
            raise InvalidConfigurationError(f"rho0 must be >= 0, got {self.rho0}")
        if not 0 <= self.K <= self.M:
            raise InvalidConfigurationError(f"need 0 <= K <= M, got K={self.K}, M={self.M}")
        if sbar.size != self.K:
            raise InvalidInputError(f"expected {self.K} steady-state weights, got {sbar.size}")
        if np.any(sbar < 0) or np.any(sbar > 1):
            raise InvalidConfigurationError("steady-state weights must lie in [0, 1]")

    @property
    def sum_sbar_squared(self) -> float:
        return float(np.sum(self.sbar_active ** 2))

    @property
    def shared_parameters(self) -> tuple:
        return (self.mu, self.sigma_x2, self.rho0, self.M, self.sigma_v2)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "M": self.M,
            "K": self.K,
            "sigma_x2": self.sigma_x2,
            "sigma_v2": self.sigma_v2,
            "mu": self.mu,
            "rho0": self.rho0,
            "sbar_active": self.sbar_active.tolist(),
        }


# =============================================================================
# MEAN BEHAVIOUR
# =============================================================================

def _active_mask(w_o: np.ndarray) -> np.ndarray:
    return np.asarray(w_o) != 0.0


def steady_state_penalty(w_o: np.ndarray, sbar_active: Optional[np.ndarray] = None) -> np.ndarray:
    """pi_i = s_bar_i sgn(w_o,i) on the active set, 0 elsewhere."""
    w_o = np.asarray(w_o, dtype=np.float64)
    mask = _active_mask(w_o)
    sbar = np.ones(int(mask.sum())) if sbar_active is None else np.asarray(sbar_active, dtype=np.float64)
    if sbar.size != mask.sum():
        raise InvalidInputError(f"expected {int(mask.sum())} steady-state weights, got {sbar.size}")
    pi = np.zeros_like(w_o)
    pi[mask] = sbar * np.sign(w_o[mask])
    return pi


def mean_error_solution(
    w_o: np.ndarray,
    mu: float,
    sigma_x2: float,
    rho0: float,
    n_warm: int,
    n: int,
    pi_sequence: Optional[PenaltySequence] = None,
    sbar_active: Optional[np.ndarray] = None,
) -> np.ndarray:
    """
    E{w_o - w(n)} = lambda^n w_o + rho0 sum_{k=n_warm}^{n-1} lambda^(n-1-k) pi(k),
    lambda = 1 - mu sigma_x^2.

    Args:
        pi_sequence: Mean penalty per iteration, either an array with at least
            n rows or a callable k -> vector. Defaults to the constant
            steady-state penalty built from sbar_active (all ones if omitted).

    Raises:
        InvalidConfigurationError: |lambda| >= 1
    """
    w_o = np.asarray(w_o, dtype=np.float64)
    lam = 1.0 - mu * sigma_x2
    if not abs(lam) < 1.0:
        raise InvalidConfigurationError(
            f"mean recursion unstable: |1 - mu*sigma_x^2| = {abs(lam):.4g} >= 1"
        )

    homogeneous = lam ** n * w_o
    if rho0 == 0.0 or n <= n_warm:
        return homogeneous

    if pi_sequence is None:
        pi = steady_state_penalty(w_o, sbar_active)
        # geometric sum over k = n_warm .. n-1
        weight = (1.0 - lam ** (n - n_warm)) / (1.0 - lam)
        return homogeneous + rho0 * weight * pi

    forced = np.zeros_like(w_o)
    for k in range(n_warm, n):
        pi_k = pi_sequence(k) if callable(pi_sequence) else pi_sequence[k]
        forced += lam ** (n - 1 - k) * np.asarray(pi_k, dtype=np.float64)
    return homogeneous + rho0 * forced


def per_tap_bias(
    w_o: np.ndarray,
    sbar_active: np.ndarray,
    rho0: float,
    mu: float,
    sigma_x2: float,
) -> np.ndarray:
    """Limit of E{w_o - w(n)}: rho0 s_bar_i sgn(w_o,i) / (mu sigma_x^2) on S, 0 off S."""
    return rho0 * steady_state_penalty(w_o, sbar_active) / (mu * sigma_x2)


def bias_bound(rho0: float, K: int, mu: float, sigma_x2: float) -> float:
    """Norm bound on the steady-state mean error: rho0 K / (mu sigma_x^2)."""
    return rho0 * K / (mu * sigma_x2)


# =============================================================================
# MEAN-SQUARE BEHAVIOUR
# =============================================================================

def _ms_denominator(inputs: TheoryInputs) -> float:
    denominator = 2.0 - inputs.mu * inputs.sigma_x2 * (1 + inputs.M)
    if not denominator > 0:
        raise DivergenceError(
            f"mean-square unstable: 2 - mu*sigma_x^2*(M+1) = {denominator:.4g} <= 0"
        )
    return denominator


def msd_learning_curve(
    inputs: TheoryInputs,
    msd_0: float,
    n_iters: int,
    n_warm: int = 0,
) -> np.ndarray:
    """
    Iterate MSD(n+1) = alpha MSD(n) + mu^2 M sigma_v^2 sigma_x^2 + 2 rho0 (1 - mu sigma_x^2) b(n).

    The cross term b(n) = (rho0 / (mu sigma_x^2)) sum s_bar^2 once zero
    attraction is active (n > n_warm) and 0 before.

    Returns:
        Array of length n_iters with MSD(0) = msd_0

    Raises:
        DivergenceError: alpha >= 1
    """
    mu, sx2 = inputs.mu, inputs.sigma_x2
    alpha = msd_contraction(mu, sx2, inputs.M)
    if not alpha < 1.0:
        raise DivergenceError(f"MSD recursion diverges: alpha = {alpha:.6g} >= 1")

    drive = mu ** 2 * inputs.M * inputs.sigma_v2 * sx2
    cross = 2.0 * inputs.rho0 * (1.0 - mu * sx2) * (inputs.rho0 / (mu * sx2)) * inputs.sum_sbar_squared

    curve = np.empty(n_iters)
    msd = float(msd_0)
    for n in range(n_iters):
        curve[n] = msd
        msd = alpha * msd + drive + (cross if n > n_warm else 0.0)
    return curve


def noise_floor(inputs: TheoryInputs, approximate: bool = True) -> float:
    """The rho0-independent part of the steady-state MSD."""
    if approximate:
        _ms_denominator(inputs)
        return inputs.mu * inputs.M * inputs.sigma_v2 / 2.0
    return inputs.mu * inputs.M * inputs.sigma_v2 / _ms_denominator(inputs)


def steady_state_msd(inputs: TheoryInputs, approximate: bool = False) -> float:
    """
    Steady-state MSD of a zero-attracting LMS filter.

    exact:
        mu M sigma_v^2 / D + 2 rho0^2 (1 - mu sigma_x^2) / (mu^2 sigma_x^4 D) * sum s_bar^2
    approximate (small step):
        mu M sigma_v^2 / 2 + rho0^2 / (mu^2 sigma_x^4) * sum s_bar^2
    with D = 2 - mu sigma_x^2 (1 + M). Passing RZA weights gives the RZA-LMS
    figure, DD-SAF weights the DD-SAF figure.

    Raises:
        DivergenceError: D <= 0
    """
    mu, sx2, rho0 = inputs.mu, inputs.sigma_x2, inputs.rho0
    denominator = _ms_denominator(inputs)
    penalty = inputs.sum_sbar_squared
    if approximate:
        return mu * inputs.M * inputs.sigma_v2 / 2.0 + rho0 ** 2 / (mu ** 2 * sx2 ** 2) * penalty
    return (
        mu * inputs.M * inputs.sigma_v2 / denominator
        + 2.0 * rho0 ** 2 * (1.0 - mu * sx2) / (mu ** 2 * sx2 ** 2 * denominator) * penalty
    )


def delta_msd(inputs_rza: TheoryInputs, inputs_dd: TheoryInputs) -> float:
    """
    Steady-state gain of DD-SAF over RZA-LMS at a shared operating point:
    rho0^2 / (mu^2 sigma_x^4) * sum (s_bar_RZA^2 - s_bar_DD^2).

    Raises:
        InvalidComparisonError: the two inputs differ in (mu, sigma_x^2, rho0, M, sigma_v^2) or K
    """
    if inputs_rza.K != inputs_dd.K or not np.allclose(
        inputs_rza.shared_parameters, inputs_dd.shared_parameters, rtol=1e-12, atol=0.0
    ):
        raise InvalidComparisonError(
            "delta_msd needs identical (mu, sigma_x^2, rho0, M, sigma_v^2) and active count"
        )
    mu, sx2, rho0 = inputs_dd.mu, inputs_dd.sigma_x2, inputs_dd.rho0
    return rho0 ** 2 / (mu ** 2 * sx2 ** 2) * float(
        np.sum(inputs_rza.sbar_active ** 2 - inputs_dd.sbar_active ** 2)
    )
