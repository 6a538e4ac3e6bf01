# Copyright (c) 2026 Pl4yer-ONE
# This file is part of DualTap.
# Licensed under GPLv3 or commercial license.

"""
Signal Model
Sparse ground-truth systems, input and noise processes, observation model.
"""

from .streams import TrialStream, Channel
from .systems import (
    SystemSpec,
    SparseSystem,
    generate_sparse_system,
    build_system,
    desired_output,
)
from .sources import (
    WhiteInput,
    AR1Input,
    InputSpec,
    GaussianNoise,
    BernoulliGaussianNoise,
    SnrNoise,
    NoiseSpec,
    next_input,
    next_noise,
    input_sequence,
    noise_sequence,
    regressor_matrix,
    snr_to_noise_variance,
    clean_output_power,
    resolve_noise,
)

__all__ = [
    'TrialStream',
    'Channel',
    'SystemSpec',
    'SparseSystem',
    'generate_sparse_system',
    'build_system',
    'desired_output',
    'WhiteInput',
    'AR1Input',
    'InputSpec',
    'GaussianNoise',
    'BernoulliGaussianNoise',
    'SnrNoise',
    'NoiseSpec',
    'next_input',
    'next_noise',
    'input_sequence',
    'noise_sequence',
    'regressor_matrix',
    'snr_to_noise_variance',
    'clean_output_power',
    'resolve_noise',
]
