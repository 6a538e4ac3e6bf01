# Copyright (c) 2026 Pl4yer-ONE
# This file is part of DualTap.
# Licensed under GPLv3 or commercial license.

"""
Theory Prediction
Bundles every closed-form figure for one operating point.
"""

from dataclasses import dataclass, asdict
from typing import Any, Dict, List, Optional

import numpy as np

from src.filters import recommended_warm_start
from .stability import mean_stability_bound, ms_stability_bound
from .steady_state import (
    TheoryInputs,
    bias_bound,
    delta_msd,
    per_tap_bias,
    steady_state_msd,
    to_db,
)


@dataclass
class TheoryPrediction:
    """Stability limits, steady-state MSD and bias for one configuration."""
    mean_stable_max_mu: float
    ms_stable_max_mu: float
    ms_stable_max_mu_large_m: float
    msd_ss: float
    msd_ss_db: float
    noise_floor: float
    bias_bound: float
    penalty_norm_bound: float
    per_tap_bias: List[float]
    delta_msd: float
    recommended_n_warm: int

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def predict(
    inputs: TheoryInputs,
    w_o: np.ndarray,
    reference_sbar: Optional[np.ndarray] = None,
    approximate: bool = True,
) -> TheoryPrediction:
    """
    Evaluate the closed forms at ``inputs``.

    Args:
        inputs: Operating point with the algorithm's s_bar
        w_o: True system, for the per-tap bias
        reference_sbar: RZA-LMS weights at the same operating point; when
            given, delta_msd is the gain of ``inputs`` over that reference
        approximate: Small-step steady-state form instead of the exact one

    Raises:
        DivergenceError: mean-square unstable operating point
    """
    ms_bound = ms_stability_bound(inputs.M, inputs.sigma_x2)
    msd = steady_state_msd(inputs, approximate=approximate)
    floor_inputs = TheoryInputs(
        inputs.M, inputs.K, inputs.sigma_x2, inputs.sigma_v2, inputs.mu, 0.0,
        np.zeros(inputs.K),
    )

    gain = 0.0
    if reference_sbar is not None:
        reference = TheoryInputs(
            inputs.M, inputs.K, inputs.sigma_x2, inputs.sigma_v2, inputs.mu, inputs.rho0,
            reference_sbar,
        )
        gain = delta_msd(reference, inputs)

    return TheoryPrediction(
        mean_stable_max_mu=mean_stability_bound(inputs.sigma_x2),
        ms_stable_max_mu=ms_bound.exact,
        ms_stable_max_mu_large_m=ms_bound.large_m,
        msd_ss=msd,
        msd_ss_db=float(to_db(msd)),
        noise_floor=steady_state_msd(floor_inputs, approximate=approximate),
        bias_bound=bias_bound(inputs.rho0, inputs.K, inputs.mu, inputs.sigma_x2),
        penalty_norm_bound=float(inputs.K),
        per_tap_bias=per_tap_bias(w_o, inputs.sbar_active, inputs.rho0, inputs.mu, inputs.sigma_x2).tolist(),
        delta_msd=gain,
        recommended_n_warm=recommended_warm_start(inputs.mu, inputs.sigma_x2),
    )
