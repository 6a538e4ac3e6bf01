# Copyright (c) 2026 Pl4yer-ONE
# This file is part of DualTap.
# Licensed under GPLv3 or commercial license.

"""
Steady-State Estimation
Tail averages of learning curves, with across-trial spread.
"""

from dataclasses import dataclass
from typing import Any, Dict, Tuple

import numpy as np

from src.config import DB_FLOOR
from src.errors import InvalidInputError
from .runner import MsdCurve


def _db(value):
    return 10.0 * np.log10(np.maximum(value, DB_FLOOR))


@dataclass
class SteadyStateEstimate:
    """
    Steady-state MSD of one curve.

    Averaging is done in the linear domain before conversion to dB.
    std_across_trials is the linear spread of per-trial tail means, std_db
    the spread of the same means in dB (both 0 for curves without trials).
    """
    algorithm: str
    msd_db: float
    window: Tuple[int, int]
    std_across_trials: float
    std_db: float
    trial_tail_means: np.ndarray

    def to_dict(self) -> Dict[str, Any]:
        return {
            "algorithm": self.algorithm,
            "msd_db": self.msd_db,
            "window": list(self.window),
            "std_across_trials": self.std_across_trials,
            "std_db": self.std_db,
        }


def estimate_steady_state(curve: MsdCurve, window: int) -> SteadyStateEstimate:
    """
    Average the last ``window`` iterations of ``curve``.

    Raises:
        InvalidInputError: window outside [1, N]
    """
    N = curve.n_iters
    if not 1 <= window <= N:
        raise InvalidInputError(f"steady-state window {window} does not fit N={N}")

    msd = float(np.mean(curve.mean_deviation[-window:]))
    if curve.trial_deviations is not None:
        tails = curve.trial_deviations[:, -window:].mean(axis=1)
    else:
        tails = np.array([msd])

    return SteadyStateEstimate(
        algorithm=curve.algorithm,
        msd_db=float(_db(msd)),
        window=(N - window, N),
        std_across_trials=float(np.std(tails)),
        std_db=float(np.std(_db(tails))),
        trial_tail_means=tails,
    )


def paired_difference(a: SteadyStateEstimate, b: SteadyStateEstimate) -> Tuple[float, float]:
    """
    Mean and standard error of the per-trial dB difference a - b.

    Both estimates must come from the same trials (same run, same window).

    Raises:
        InvalidInputError: trial counts or windows differ
    """
    if a.window != b.window or a.trial_tail_means.size != b.trial_tail_means.size:
        raise InvalidInputError("paired difference needs estimates over the same trials and window")
    diff = _db(a.trial_tail_means) - _db(b.trial_tail_means)
    if diff.size < 2:
        return float(diff.mean()), 0.0
    return float(diff.mean()), float(np.std(diff, ddof=1) / np.sqrt(diff.size))
