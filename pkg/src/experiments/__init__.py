# Copyright (c) 2026 Pl4yer-ONE
# This file is part of DualTap.
# Licensed under GPLv3 or commercial license.

"""
Experiments Module
Monte-Carlo harness, presets, step-size sweeps and result export.
"""

from .presets import ExperimentConfig, preset, reference_algorithms, tail_window
from .runner import (
    ExperimentContext,
    MsdCurve,
    prepare_experiment,
    trial_signals,
    simulate,
    run_trial,
    run_pilot,
    run_monte_carlo,
)
from .steady_state import SteadyStateEstimate, estimate_steady_state, paired_difference
from .sweep import SweepPoint, step_size_sweep
from .overlay import (
    TheoryOverlay,
    theory_inputs,
    build_overlays,
    theory_line,
    recursion_curve,
)
from .exporter import (
    export_curves_csv,
    read_curves_csv,
    export_sweep_csv,
    read_sweep_csv,
    format_summary,
    export_summary,
)
from .config_file import load_config

__all__ = [
    'ExperimentConfig',
    'preset',
    'reference_algorithms',
    'tail_window',
    'ExperimentContext',
    'MsdCurve',
    'prepare_experiment',
    'trial_signals',
    'simulate',
    'run_trial',
    'run_pilot',
    'run_monte_carlo',
    'SteadyStateEstimate',
    'estimate_steady_state',
    'paired_difference',
    'SweepPoint',
    'step_size_sweep',
    'TheoryOverlay',
    'theory_inputs',
    'build_overlays',
    'theory_line',
    'recursion_curve',
    'export_curves_csv',
    'read_curves_csv',
    'export_sweep_csv',
    'read_sweep_csv',
    'format_summary',
    'export_summary',
    'load_config',
]
