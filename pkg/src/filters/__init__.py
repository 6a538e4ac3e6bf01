# Copyright (c) 2026 Pl4yer-ONE
# This file is part of DualTap.
# Licensed under GPLv3 or commercial license.

"""
Filters Module
LMS, ZA-LMS, RZA-LMS and DD-SAF update rules with multiplication tallies.
"""

from .weights import (
    sgn,
    rza_weight,
    dd_weight,
    dual_domain_active,
    warm_start_rho,
    recommended_warm_start,
    error_memory_update,
)
from .adaptive import (
    AlgorithmKind,
    AlgorithmConfig,
    FilterState,
    MULTIPLICATIONS_PER_TAP,
    penalty_weights,
    zero_attraction,
    filter_step,
)
from .trace import FilterTraceWriter, read_trace

__all__ = [
    'sgn',
    'rza_weight',
    'dd_weight',
    'dual_domain_active',
    'warm_start_rho',
    'recommended_warm_start',
    'error_memory_update',
    'AlgorithmKind',
    'AlgorithmConfig',
    'FilterState',
    'MULTIPLICATIONS_PER_TAP',
    'penalty_weights',
    'zero_attraction',
    'filter_step',
    'FilterTraceWriter',
    'read_trace',
]
