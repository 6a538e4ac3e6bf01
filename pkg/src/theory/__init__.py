# Copyright (c) 2026 Pl4yer-ONE
# This file is part of DualTap.
# Licensed under GPLv3 or commercial license.

"""
Theory Module
Closed-form stability, bias and MSD predictors for overlaying on simulations.
"""

from .stability import (
    MeanSquareBound,
    mean_stability_bound,
    ms_stability_bound,
    msd_contraction,
    is_ms_stable,
)
from .steady_state import (
    TheoryInputs,
    to_db,
    steady_state_penalty,
    mean_error_solution,
    per_tap_bias,
    bias_bound,
    msd_learning_curve,
    noise_floor,
    steady_state_msd,
    delta_msd,
)
from .plugin import estimate_sbar_from_tail, analytic_sbar
from .prediction import TheoryPrediction, predict

__all__ = [
    'MeanSquareBound',
    'mean_stability_bound',
    'ms_stability_bound',
    'msd_contraction',
    'is_ms_stable',
    'TheoryInputs',
    'to_db',
    'steady_state_penalty',
    'mean_error_solution',
    'per_tap_bias',
    'bias_bound',
    'msd_learning_curve',
    'noise_floor',
    'steady_state_msd',
    'delta_msd',
    'estimate_sbar_from_tail',
    'analytic_sbar',
    'TheoryPrediction',
    'predict',
]
