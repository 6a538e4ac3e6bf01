# Copyright (c) 2026 Pl4yer-ONE
# This file is part of DualTap.
# Licensed under GPLv3 or commercial license.

"""
Monte-Carlo Runner
Runs every configured algorithm on shared per-trial signals and averages
the squared weight deviation over trials.
"""

from contextlib import nullcontext
from dataclasses import dataclass
from multiprocessing import Pool
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from src.config import DB_FLOOR, DIVERGENCE_THRESHOLD
from src.errors import DivergenceError, InvalidInputError
from src.filters import AlgorithmConfig, FilterState, FilterTraceWriter, filter_step, penalty_weights
from src.logger import logger
from src.signal_model import (
    Channel,
    NoiseSpec,
    SparseSystem,
    TrialStream,
    build_system,
    input_sequence,
    noise_sequence,
    regressor_matrix,
    resolve_noise,
)
from .presets import ExperimentConfig


@dataclass(frozen=True, eq=False)
class ExperimentContext:
    """Per-experiment quantities shared by all trials: w_o and the concrete noise law."""
    system: SparseSystem
    noise: NoiseSpec


@dataclass(eq=False)
class MsdCurve:
    """
    Trial-averaged learning curve of one algorithm.

    trial_deviations holds ||w_o - w(n)||^2 per trial (n_trials, N) for
    simulated curves; theory curves carry msd_db only.
    """
    algorithm: str
    msd_db: np.ndarray
    n_trials: int
    fingerprint: str
    source: str = "sim"
    trial_deviations: Optional[np.ndarray] = None

    @property
    def n_iters(self) -> int:
        return int(self.msd_db.size)

    @property
    def mean_deviation(self) -> np.ndarray:
        """Trial-averaged MSD in the linear domain."""
        if self.trial_deviations is not None:
            return self.trial_deviations.mean(axis=0)
        return 10.0 ** (self.msd_db / 10.0)

    @classmethod
    def from_trials(
        cls, algorithm: str, trial_deviations: np.ndarray, fingerprint: str
    ) -> "MsdCurve":
        deviations = np.asarray(trial_deviations, dtype=np.float64)
        mean = deviations.mean(axis=0)
        return cls(
            algorithm=algorithm,
            msd_db=10.0 * np.log10(np.maximum(mean, DB_FLOOR)),
            n_trials=deviations.shape[0],
            fingerprint=fingerprint,
            trial_deviations=deviations,
        )


def prepare_experiment(config: ExperimentConfig) -> ExperimentContext:
    """Draw w_o once and calibrate the noise against it."""
    system = build_system(config.system, TrialStream(config.master_seed, 0, Channel.SYSTEM))
    noise = resolve_noise(
        config.noise_spec,
        system,
        config.input_spec,
        TrialStream(config.master_seed, 0, Channel.CALIBRATION),
    )
    logger.debug(
        "system K=%d energy=%.6f, noise %s", system.K, system.energy, noise.to_dict()
    )
    return ExperimentContext(system=system, noise=noise)


def trial_signals(
    config: ExperimentConfig,
    context: ExperimentContext,
    trial_index: int,
    channels: Tuple[int, int] = (Channel.INPUT, Channel.NOISE),
) -> Tuple[np.ndarray, np.ndarray]:
    """Regressors (N, M) and desired samples (N,) of one trial."""
    input_channel, noise_channel = channels
    N = config.n_iters
    x = input_sequence(config.input_spec, N, TrialStream(config.master_seed, trial_index, input_channel))
    v = noise_sequence(context.noise, N, TrialStream(config.master_seed, trial_index, noise_channel))
    X = np.ascontiguousarray(regressor_matrix(x, context.system.M))
    d = X @ context.system.coefficients + v
    return X, d


def simulate(
    system: SparseSystem,
    X: np.ndarray,
    d: np.ndarray,
    algorithm: AlgorithmConfig,
    name: str,
    record_active_weights: bool = False,
    trace_path: Optional[str] = None,
) -> Tuple[np.ndarray, Optional[np.ndarray]]:
    """
    Run one filter over a fixed signal realisation.

    Returns:
        (squared deviation per iteration, active-tap penalty weights or None)

    Raises:
        DivergenceError: some |w_i| exceeded the divergence threshold
    """
    N, M = X.shape
    w_o = system.coefficients
    active = np.asarray(system.active_set, dtype=np.intp)
    state = FilterState.initial(M)
    deviation = np.empty(N)
    weights = np.empty((N, system.K)) if record_active_weights else None

    writer = FilterTraceWriter(trace_path, M) if trace_path else nullcontext()
    with writer as trace:
        for n in range(N):
            diff = w_o - state.w
            deviation[n] = float(diff @ diff)
            if weights is not None:
                weights[n] = penalty_weights(state, algorithm)[active]
            next_state, e = filter_step(state, algorithm, X[n], d[n])
            if trace is not None:
                trace.record(state, e)
            if not np.all(np.abs(next_state.w) <= DIVERGENCE_THRESHOLD):
                raise DivergenceError(
                    f"weights exceeded {DIVERGENCE_THRESHOLD:g}",
                    iteration=n + 1,
                    algorithm=name,
                )
            state = next_state
    return deviation, weights


def run_trial(
    config: ExperimentConfig,
    name: str,
    trial_index: int,
    context: Optional[ExperimentContext] = None,
    trace_path: Optional[str] = None,
) -> np.ndarray:
    """Squared deviation of one algorithm in one trial."""
    context = context or prepare_experiment(config)
    X, d = trial_signals(config, context, trial_index)
    try:
        deviation, _ = simulate(
            context.system, X, d, config.algorithm(name), name, trace_path=trace_path
        )
    except DivergenceError as exc:
        exc.trial_index = trial_index
        raise
    return deviation


def run_pilot(
    config: ExperimentConfig,
    name: str,
    context: Optional[ExperimentContext] = None,
) -> np.ndarray:
    """
    Penalty weights on the active taps over one pilot run.

    The pilot uses its own input and noise channels, so it never shares
    samples with the Monte-Carlo trials.
    """
    context = context or prepare_experiment(config)
    X, d = trial_signals(config, context, 0, channels=(Channel.PILOT_INPUT, Channel.PILOT_NOISE))
    _, weights = simulate(
        context.system, X, d, config.algorithm(name), name, record_active_weights=True
    )
    return weights


def _run_trial_all(args) -> Dict[str, np.ndarray]:
    config, context, names, trial_index, trace_dir = args
    X, d = trial_signals(config, context, trial_index)
    deviations = {}
    for name in names:
        trace_path = None
        if trace_dir is not None and trial_index == 0:
            trace_path = str(Path(trace_dir) / f"trace_{name}.csv")
        try:
            deviations[name], _ = simulate(
                context.system, X, d, config.algorithm(name), name, trace_path=trace_path
            )
        except DivergenceError as exc:
            exc.trial_index = trial_index
            raise
    return deviations


def run_monte_carlo(
    config: ExperimentConfig,
    workers: int = 1,
    trial_indices: Optional[Sequence[int]] = None,
    context: Optional[ExperimentContext] = None,
    trace_dir: Optional[str] = None,
) -> Dict[str, MsdCurve]:
    """
    Average every algorithm of ``config`` over Monte-Carlo trials.

    All algorithms see the same x and v in a given trial. Results are
    reduced in trial order, so they do not depend on ``workers``.

    Args:
        config: Experiment configuration
        workers: Process count; 1 runs in-process
        trial_indices: Trials to run, default range(n_trials)
        context: Precomputed system and noise, default derived from config
        trace_dir: If set, trial 0 of every algorithm is dumped there

    Returns:
        Curve name -> MsdCurve, in configuration order

    Raises:
        DivergenceError: any trial of any algorithm diverged
    """
    if workers < 1:
        raise InvalidInputError(f"workers must be >= 1, got {workers}")
    indices = list(range(config.n_trials) if trial_indices is None else trial_indices)
    if not indices:
        raise InvalidInputError("no trials to run")

    context = context or prepare_experiment(config)
    names = config.algorithm_names
    jobs = [(config, context, names, t, trace_dir) for t in indices]

    logger.info(
        "running %d trials x %d iterations for %s (workers=%d)",
        len(indices), config.n_iters, ", ".join(names), workers,
    )
    if workers == 1:
        results: List[Dict[str, np.ndarray]] = [_run_trial_all(job) for job in jobs]
    else:
        with Pool(processes=workers) as pool:
            results = pool.map(_run_trial_all, jobs)

    fingerprint = config.fingerprint()
    curves = {}
    for name in names:
        stacked = np.stack([trial[name] for trial in results])
        curves[name] = MsdCurve.from_trials(name, stacked, fingerprint)
        logger.debug("%s final MSD %.2f dB", name, curves[name].msd_db[-1])
    return curves
