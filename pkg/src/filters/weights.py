# Copyright (c) 2026 Pl4yer-ONE
# This file is part of DualTap.
# Licensed under GPLv3 or commercial license.

"""
Zero-Attraction Building Blocks
Penalty weights, sign convention, warm start and the error-memory recursion.

All functions accept scalars or numpy arrays and work element-wise.
"""

from typing import Union

import numpy as np

from src.errors import InvalidInputError

ArrayLike = Union[float, np.ndarray]


def sgn(v: ArrayLike) -> ArrayLike:
    """Strict sign: -1, 0 or +1. sgn(0) = 0 so exactly-zero taps get no push."""
    return np.sign(v)


def rza_weight(w_i: ArrayLike, epsilon: float) -> ArrayLike:
    """Reweighted zero-attractor weight 1 / (1 + eps*|w_i|), in (0, 1]."""
    return 1.0 / (1.0 + epsilon * np.abs(w_i))


def dd_weight(w_i: ArrayLike, q_i: ArrayLike, beta_w: float, beta_q: float) -> ArrayLike:
    """
    Dual-domain weight 1 / (1 + beta_w*|w_i| + beta_q*|q_i|), in (0, 1].

    Never exceeds rza_weight(w_i, beta_w); equal to it when beta_q = 0.
    """
    return 1.0 / (1.0 + beta_w * np.abs(w_i) + beta_q * np.abs(q_i))


def dual_domain_active(
    w_i: ArrayLike,
    q_i: ArrayLike,
    tau_w: float,
    tau_q: float,
) -> ArrayLike:
    """Hard reading of the dual-domain test: |w_i| > tau_w or |q_i| > tau_q."""
    return (np.abs(w_i) > tau_w) | (np.abs(q_i) > tau_q)


def warm_start_rho(n: int, rho0: float, n_warm: int) -> float:
    """Zero-attraction schedule: 0 while n <= n_warm, rho0 afterwards."""
    return 0.0 if n <= n_warm else rho0


def recommended_warm_start(mu: float, input_variance: float) -> int:
    """One LMS time constant, 1 / (mu * sigma_x^2), rounded."""
    return int(round(1.0 / (mu * input_variance)))


def error_memory_update(
    q: np.ndarray,
    e_prev: float,
    x_prev: np.ndarray,
    gamma_q: float,
) -> np.ndarray:
    """
    q(n) = gamma_q * q(n-1) + e(n-1) * x(n-1).

    Raises:
        InvalidInputError: q and x_prev differ in length
    """
    if np.shape(q) != np.shape(x_prev):
        raise InvalidInputError(
            f"error memory length {np.size(q)} does not match regressor length {np.size(x_prev)}"
        )
    return gamma_q * q + e_prev * x_prev
