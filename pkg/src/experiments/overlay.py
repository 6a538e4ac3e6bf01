# Copyright (c) 2026 Pl4yer-ONE
# This file is part of DualTap.
# Licensed under GPLv3 or commercial license.

"""
Theory Overlay
Connects an experiment to the closed forms: s_bar estimation, per-algorithm
predictions and the theory lines written next to the simulated curves.
"""

from dataclasses import dataclass
from typing import Dict, Optional

import numpy as np

from src.errors import InvalidConfigurationError
from src.filters import AlgorithmKind
from src.logger import logger
from src.theory import (
    TheoryInputs,
    TheoryPrediction,
    analytic_sbar,
    estimate_sbar_from_tail,
    msd_learning_curve,
    predict,
    to_db,
)
from .presets import ExperimentConfig
from .runner import ExperimentContext, MsdCurve, prepare_experiment, run_pilot

RECURSION_SUFFIX = " (recursion)"


@dataclass
class TheoryOverlay:
    """Closed-form prediction for one algorithm of an experiment."""
    algorithm: str
    inputs: TheoryInputs
    prediction: TheoryPrediction
    sbar_mode: str


def steady_state_weights(
    config: ExperimentConfig,
    name: str,
    context: ExperimentContext,
    sbar_mode: str,
) -> np.ndarray:
    """s_bar on the active taps for algorithm ``name``."""
    algorithm = config.algorithm(name)
    K = context.system.K
    if algorithm.kind in (AlgorithmKind.LMS, AlgorithmKind.ZA):
        return np.ones(K)
    if sbar_mode == "plugin":
        weights = run_pilot(config, name, context)
        sbar = estimate_sbar_from_tail(weights, config.steady_state_window)
        logger.debug("%s plug-in s_bar mean %.4f", name, float(np.mean(sbar)))
        return sbar
    beta = algorithm.epsilon if algorithm.kind is AlgorithmKind.RZA else algorithm.beta_w
    return analytic_sbar(context.system.active_values, beta)


def theory_inputs(
    config: ExperimentConfig,
    name: str,
    context: ExperimentContext,
    sbar_mode: Optional[str] = None,
) -> TheoryInputs:
    """
    Operating point of ``name`` as seen by the closed forms.

    Raises:
        InvalidConfigurationError: correlated input (the closed forms assume white input)
    """
    if not config.white_input:
        raise InvalidConfigurationError("closed-form theory requires white input")
    algorithm = config.algorithm(name)
    system = context.system
    mode = sbar_mode or config.sbar_mode
    rho0 = algorithm.rho0 if algorithm.is_sparse else 0.0
    sbar = steady_state_weights(config, name, context, mode) if algorithm.is_sparse else np.zeros(system.K)
    return TheoryInputs(
        M=system.M,
        K=system.K,
        sigma_x2=config.input_variance,
        sigma_v2=context.noise.total_variance,
        mu=algorithm.mu,
        rho0=rho0,
        sbar_active=np.clip(sbar, 0.0, 1.0),
    )


def build_overlays(
    config: ExperimentConfig,
    context: Optional[ExperimentContext] = None,
    sbar_mode: Optional[str] = None,
) -> Dict[str, TheoryOverlay]:
    """
    Predictions for every algorithm of the experiment.

    DD-SAF's delta_msd is evaluated at its own (mu, rho0), with the RZA-LMS
    weights of the same experiment as reference when RZA-LMS is configured.

    Raises:
        DivergenceError: an algorithm sits outside the mean-square stable range
    """
    context = context or prepare_experiment(config)
    mode = sbar_mode or config.sbar_mode
    inputs = {name: theory_inputs(config, name, context, mode) for name in config.algorithm_names}

    rza_names = [n for n, a in config.algorithms if a.kind is AlgorithmKind.RZA]
    reference = inputs[rza_names[0]].sbar_active if rza_names else None

    overlays = {}
    for name, algorithm in config.algorithms:
        ref = reference if algorithm.kind is AlgorithmKind.DDSAF else None
        prediction = predict(inputs[name], context.system.coefficients, reference_sbar=ref)
        overlays[name] = TheoryOverlay(name, inputs[name], prediction, mode)
    return overlays


def theory_line(overlay: TheoryOverlay, n_iters: int, fingerprint: str) -> MsdCurve:
    """Constant steady-state prediction, one row per iteration."""
    return MsdCurve(
        algorithm=overlay.algorithm,
        msd_db=np.full(n_iters, overlay.prediction.msd_ss_db),
        n_trials=0,
        fingerprint=fingerprint,
        source="theory",
    )


def recursion_curve(
    overlay: TheoryOverlay,
    config: ExperimentConfig,
    msd_0: float,
    fingerprint: str,
) -> MsdCurve:
    """Transient MSD predicted by the mean-square recursion from MSD(0) = msd_0."""
    algorithm = config.algorithm(overlay.algorithm)
    n_warm = algorithm.n_warm if algorithm.kind is AlgorithmKind.DDSAF else 0
    msd = msd_learning_curve(overlay.inputs, msd_0, config.n_iters, n_warm=n_warm)
    return MsdCurve(
        algorithm=overlay.algorithm + RECURSION_SUFFIX,
        msd_db=np.asarray(to_db(msd), dtype=np.float64),
        n_trials=0,
        fingerprint=fingerprint,
        source="theory",
    )
