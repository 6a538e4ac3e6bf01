# Copyright (c) 2026 Pl4yer-ONE
# This file is part of DualTap.
# Licensed under GPLv3 or commercial license.

"""
Steady-State Penalty Weights
There is no closed form for s_bar; it is either measured on a pilot run
(plug-in) or bounded by evaluating the weight at the true coefficients.
"""

import numpy as np

from src.errors import InvalidInputError


def estimate_sbar_from_tail(weight_trace: np.ndarray, tail_window: int) -> np.ndarray:
    """
    Per-tap mean of s_i(n) over the last tail_window iterations.

    Args:
        weight_trace: Array (n_iters, K) of penalty weights on the active taps
        tail_window: Number of final iterations to average

    Raises:
        InvalidInputError: tail_window outside [1, n_iters]
    """
    trace = np.asarray(weight_trace, dtype=np.float64)
    if trace.ndim == 1:
        trace = trace[:, np.newaxis]
    if not 1 <= tail_window <= trace.shape[0]:
        raise InvalidInputError(
            f"tail window {tail_window} does not fit a trace of {trace.shape[0]} iterations"
        )
    return trace[-tail_window:].mean(axis=0)


def analytic_sbar(active_values: np.ndarray, beta_w: float) -> np.ndarray:
    """1 / (1 + beta_w |w_o,i|): the weight at w = w_o with an empty error memory."""
    return 1.0 / (1.0 + beta_w * np.abs(np.asarray(active_values, dtype=np.float64)))
