# Copyright (c) 2026 Pl4yer-ONE
# This file is part of DualTap.
# Licensed under GPLv3 or commercial license.

"""
Step-Size Sweep
Steady-state MSD of every algorithm over a grid of step sizes.
"""

import math
from dataclasses import dataclass, asdict
from typing import Any, Dict, List, Optional, Sequence

from src.errors import DivergenceError, InvalidConfigurationError
from src.logger import logger
from src.theory import ms_stability_bound
from .presets import ExperimentConfig
from .runner import prepare_experiment, run_monte_carlo
from .steady_state import estimate_steady_state


@dataclass
class SweepPoint:
    """One (mu, algorithm) cell; msd_ss_db is NaN when the run diverged."""
    mu: float
    algorithm: str
    msd_ss_db: float
    std_db: float
    diverged: bool

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def step_size_sweep(
    config: ExperimentConfig,
    mu_grid: Optional[Sequence[float]] = None,
    workers: int = 1,
) -> List[SweepPoint]:
    """
    Run the experiment at each step size of the grid.

    Every algorithm gets the grid value as its step size with rho0 / mu
    kept at the configured ratio. Algorithms run in isolation, so one
    diverging algorithm does not hide the others at that grid point.

    Raises:
        InvalidConfigurationError: empty grid
    """
    grid = list(config.mu_grid if mu_grid is None else mu_grid)
    if not grid:
        raise InvalidConfigurationError("step-size sweep needs a non-empty mu grid")

    context = prepare_experiment(config)
    bound = ms_stability_bound(config.system.M, config.input_variance).exact
    points: List[SweepPoint] = []

    for mu in grid:
        if mu >= bound:
            logger.warning("mu=%.5f exceeds the mean-square bound %.5f", mu, bound)
        at_mu = config.with_step_size(mu)
        for name in at_mu.algorithm_names:
            try:
                curve = run_monte_carlo(at_mu.only(name), workers=workers, context=context)[name]
            except DivergenceError as exc:
                logger.warning("sweep point mu=%.5f %s diverged: %s", mu, name, exc)
                points.append(SweepPoint(mu, name, math.nan, math.nan, True))
                continue
            estimate = estimate_steady_state(curve, at_mu.steady_state_window)
            points.append(SweepPoint(mu, name, estimate.msd_db, estimate.std_db, False))
            logger.info("mu=%.5f %s %.2f dB", mu, name, estimate.msd_db)
    return points
