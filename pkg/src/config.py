# Copyright (c) 2026 Pl4yer-ONE
# This file is part of DualTap.
# Licensed under GPLv3 or commercial license.

"""
Configuration Module
Global settings and constants for DualTap.
"""

from pathlib import Path

# =============================================================================
# GLOBAL PATHS & SETTINGS
# =============================================================================
BASE_DIR = Path(__file__).parent.parent
OUTPUTS_DIR = BASE_DIR / "outputs"

DEFAULT_MASTER_SEED = 20260101

# Reporting
ENABLE_DEBUG_LOGS = False
LOGGER_NAME = "dualtap"

# =============================================================================
# SHARED EXPERIMENT SETUP
# =============================================================================
FILTER_LENGTH = 128                       # M
ACTIVE_BLOCKS = ((20, 4), (70, 4))        # K = 8, two blocks of four taps
INPUT_VARIANCE = 1.0                      # sigma_x^2 (white input)
SNR_DB = 35.0
MONTE_CARLO_TRIALS = 50

# =============================================================================
# SPARSITY PARAMETERS
# Zero-attraction intensity is given relative to the step size: rho0 = gain * mu
# =============================================================================
RZA_PARAMS = {
    "epsilon": 0.02,
    "zero_attraction_gain": 0.08,
}

DDSAF_PARAMS = {
    "beta_w": 0.02,
    "beta_q": 2.0,
    "zero_attraction_gain": 0.28,
    "gamma_q": 0.97,
    "n_warm": 200,
}

# =============================================================================
# PER-EXPERIMENT SETTINGS
# =============================================================================
EXPERIMENT_STEP_SIZES = {
    1: {"LMS": 0.006, "RZA-LMS": 0.008, "DD-SAF": 0.01},
    3: {"LMS": 0.0026, "RZA-LMS": 0.0026, "DD-SAF": 0.0026},
    4: {"LMS": 0.002, "RZA-LMS": 0.002, "DD-SAF": 0.002},
    5: {"LMS": 0.0039, "RZA-LMS": 0.0042, "DD-SAF": 0.005},
}

EXPERIMENT_ITERATIONS = {1: 2000, 2: 4000, 3: 4000, 4: 8000, 5: 2000}

SWEEP_MU_RANGE = (0.0005, 0.010)
SWEEP_POINTS = 10
SWEEP_BASE_MU = 0.0026
SWEEP_WINDOW = 1000

AR1_CORRELATION = 0.85
AR1_INNOVATION_VARIANCE = 0.7
AR1_SNR_DB = 25.0

IMPULSIVE_NOISE = {
    "spike_probability": 0.2,
    "background_variance": 1.0,
    "spike_scale": 100.0,
    "global_scale": 1.0,
}

# Tail used when a preset does not name one
DEFAULT_TAIL_FRACTION = 0.25

# =============================================================================
# NUMERICAL GUARDS
# =============================================================================
DIVERGENCE_THRESHOLD = 1e10     # any |w_i| above this aborts the trial
DB_FLOOR = 1e-300               # squared deviations clamped before log10
SNR_CALIBRATION_SAMPLES = 100_000

# hard dual-domain activity test used by the debug trace
TRACE_TAU_W = 0.05
TRACE_TAU_Q = 0.05

# =============================================================================
# CLI EXIT CODES
# =============================================================================
EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DIVERGENCE = 2
EXIT_VALIDATION = 3

# =============================================================================
# OUTPUT SETTINGS
# =============================================================================
CURVES_FILENAME = "curves.csv"
SWEEP_FILENAME = "sweep.csv"
SUMMARY_FILENAME = "summary.txt"
