# Copyright (c) 2026 Pl4yer-ONE
# This file is part of DualTap.
# Licensed under GPLv3 or commercial license.

"""
Experiment Configuration and Presets
ExperimentConfig plus the five reference experiments.

Zero-attraction strength in the presets is rho0 = gain * mu, with gain 0.08
for RZA-LMS and 0.28 for DD-SAF; gamma_q = 0.97 is the error-memory
forgetting factor and beta_w = epsilon = 0.02.
"""

import hashlib
import json
from dataclasses import dataclass, replace
from typing import Any, Dict, Optional, Sequence, Tuple, Union

import numpy as np

from src.config import (
    ACTIVE_BLOCKS,
    AR1_CORRELATION,
    AR1_INNOVATION_VARIANCE,
    AR1_SNR_DB,
    DDSAF_PARAMS,
    DEFAULT_MASTER_SEED,
    DEFAULT_TAIL_FRACTION,
    EXPERIMENT_ITERATIONS,
    EXPERIMENT_STEP_SIZES,
    FILTER_LENGTH,
    IMPULSIVE_NOISE,
    INPUT_VARIANCE,
    MONTE_CARLO_TRIALS,
    RZA_PARAMS,
    SNR_DB,
    SWEEP_BASE_MU,
    SWEEP_MU_RANGE,
    SWEEP_POINTS,
    SWEEP_WINDOW,
)
from src.errors import InvalidConfigurationError, InvalidInputError
from src.filters import AlgorithmConfig, AlgorithmKind
from src.signal_model import (
    AR1Input,
    BernoulliGaussianNoise,
    InputSpec,
    NoiseSpec,
    SnrNoise,
    SystemSpec,
    WhiteInput,
)

NamedAlgorithm = Tuple[str, AlgorithmConfig]
SBAR_MODES = ("plugin", "analytic")


@dataclass(frozen=True)
class ExperimentConfig:
    """
    Everything a Monte-Carlo run depends on.

    Output of the harness is a pure function of this object.
    """
    system: SystemSpec
    input_spec: InputSpec
    noise_spec: Union[NoiseSpec, SnrNoise]
    n_iters: int
    n_trials: int
    master_seed: int
    algorithms: Tuple[NamedAlgorithm, ...]
    steady_state_window: int
    theory_overlay: bool = False
    mu_grid: Tuple[float, ...] = ()
    sbar_mode: str = "plugin"
    name: str = "custom"

    def __post_init__(self):
        object.__setattr__(self, "algorithms", tuple((str(n), a) for n, a in self.algorithms))
        object.__setattr__(self, "mu_grid", tuple(float(m) for m in self.mu_grid))
        if self.n_trials < 1:
            raise InvalidConfigurationError(f"n_trials must be >= 1, got {self.n_trials}")
        if not 1 <= self.steady_state_window <= self.n_iters:
            raise InvalidConfigurationError(
                f"need 1 <= steady_state_window <= n_iters, got "
                f"{self.steady_state_window} and {self.n_iters}"
            )
        if not self.algorithms:
            raise InvalidConfigurationError("at least one algorithm is required")
        names = [n for n, _ in self.algorithms]
        if len(set(names)) != len(names):
            raise InvalidConfigurationError(f"duplicate algorithm names: {names}")
        if any(m <= 0 for m in self.mu_grid):
            raise InvalidConfigurationError("step-size grid values must be > 0")
        if self.sbar_mode not in SBAR_MODES:
            raise InvalidConfigurationError(f"sbar_mode must be one of {SBAR_MODES}")

    # Lookup ----------------------------------------------------------------

    @property
    def algorithm_names(self) -> Tuple[str, ...]:
        return tuple(n for n, _ in self.algorithms)

    def algorithm(self, name: str) -> AlgorithmConfig:
        return dict(self.algorithms)[self.resolve_name(name)]

    def resolve_name(self, text: str) -> str:
        """Match a curve name case-insensitively, falling back to the algorithm kind."""
        for name in self.algorithm_names:
            if name.lower() == text.strip().lower():
                return name
        kind = AlgorithmKind.parse(text)
        matches = [n for n, a in self.algorithms if a.kind is kind]
        if len(matches) != 1:
            raise InvalidConfigurationError(f"no unique algorithm matches {text!r}")
        return matches[0]

    @property
    def input_variance(self) -> float:
        return self.input_spec.stationary_variance

    @property
    def white_input(self) -> bool:
        return isinstance(self.input_spec, WhiteInput)

    # Derived configs -------------------------------------------------------

    def only(self, name: str) -> "ExperimentConfig":
        """Same experiment restricted to one algorithm (streams are unchanged)."""
        name = self.resolve_name(name)
        return replace(self, algorithms=((name, self.algorithm(name)),))

    def with_step_size(self, mu: float) -> "ExperimentConfig":
        """Apply one step size to every algorithm, keeping rho0 / mu."""
        return replace(
            self,
            algorithms=tuple((n, a.with_step_size(mu)) for n, a in self.algorithms),
        )

    def with_overrides(
        self,
        master_seed: Optional[int] = None,
        n_trials: Optional[int] = None,
        n_iters: Optional[int] = None,
        mu: Optional[Dict[str, float]] = None,
        rho0: Optional[Dict[str, float]] = None,
        theory_overlay: Optional[bool] = None,
        mu_grid: Optional[Sequence[float]] = None,
        sbar_mode: Optional[str] = None,
    ) -> "ExperimentConfig":
        """
        Apply CLI-style overrides.

        A step-size override keeps rho0 / mu (the zero-attraction intensity);
        a rho0 override is applied afterwards and sets rho0 verbatim.
        """
        algorithms = dict(self.algorithms)
        for key, value in (mu or {}).items():
            name = self.resolve_name(key)
            algorithms[name] = algorithms[name].with_step_size(value)
        for key, value in (rho0 or {}).items():
            name = self.resolve_name(key)
            algorithms[name] = replace(algorithms[name], rho0=value)

        iters = self.n_iters if n_iters is None else n_iters
        return replace(
            self,
            master_seed=self.master_seed if master_seed is None else master_seed,
            n_trials=self.n_trials if n_trials is None else n_trials,
            n_iters=iters,
            steady_state_window=min(self.steady_state_window, iters),
            algorithms=tuple(algorithms.items()),
            theory_overlay=self.theory_overlay if theory_overlay is None else theory_overlay,
            mu_grid=self.mu_grid if mu_grid is None else tuple(mu_grid),
            sbar_mode=self.sbar_mode if sbar_mode is None else sbar_mode,
        )

    # Serialisation ---------------------------------------------------------

    def to_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "system": self.system.to_dict(),
            "input": self.input_spec.to_dict(),
            "noise": self.noise_spec.to_dict(),
            "n_iters": self.n_iters,
            "n_trials": self.n_trials,
            "master_seed": self.master_seed,
            "algorithms": [[n, a.to_dict()] for n, a in self.algorithms],
            "steady_state_window": self.steady_state_window,
            "theory_overlay": self.theory_overlay,
            "mu_grid": list(self.mu_grid),
            "sbar_mode": self.sbar_mode,
        }

    def fingerprint(self) -> str:
        """Stable hex digest of the configuration."""
        canonical = json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()[:16]


# =============================================================================
# PRESETS
# =============================================================================

def reference_algorithms(step_sizes: Dict[str, float]) -> Tuple[NamedAlgorithm, ...]:
    """LMS, RZA-LMS and DD-SAF with the shared sparsity parameters."""
    mu_lms, mu_rza, mu_dd = step_sizes["LMS"], step_sizes["RZA-LMS"], step_sizes["DD-SAF"]
    return (
        ("LMS", AlgorithmConfig.lms(mu_lms)),
        ("RZA-LMS", AlgorithmConfig.rza(
            mu_rza,
            rho0=RZA_PARAMS["zero_attraction_gain"] * mu_rza,
            epsilon=RZA_PARAMS["epsilon"],
        )),
        ("DD-SAF", AlgorithmConfig.ddsaf(
            mu_dd,
            rho0=DDSAF_PARAMS["zero_attraction_gain"] * mu_dd,
            beta_w=DDSAF_PARAMS["beta_w"],
            beta_q=DDSAF_PARAMS["beta_q"],
            gamma_q=DDSAF_PARAMS["gamma_q"],
            n_warm=DDSAF_PARAMS["n_warm"],
        )),
    )


def tail_window(n_iters: int) -> int:
    return max(1, int(round(DEFAULT_TAIL_FRACTION * n_iters)))


def sweep_grid() -> Tuple[float, ...]:
    low, high = SWEEP_MU_RANGE
    return tuple(np.linspace(low, high, SWEEP_POINTS).tolist())


def preset(experiment_id: int, master_seed: int = DEFAULT_MASTER_SEED) -> ExperimentConfig:
    """
    Configuration of a reference experiment.

    1  white input, 35 dB, tuned step sizes, theory overlay
    2  step-size sweep, shared mu, N = 4000, tail 1000
    3  shared mu = 0.0026, N = 4000
    4  AR(1) input (0.85, 0.7), 25 dB, shared mu = 0.002, N = 8000
    5  Bernoulli-Gaussian noise (0.2, 100), tuned step sizes

    Raises:
        InvalidInputError: unknown experiment id
    """
    if experiment_id not in EXPERIMENT_ITERATIONS:
        raise InvalidInputError(f"unknown experiment id {experiment_id}; expected 1..5")

    system = SystemSpec(M=FILTER_LENGTH, blocks=ACTIVE_BLOCKS, normalize=True)
    n_iters = EXPERIMENT_ITERATIONS[experiment_id]
    common = dict(
        system=system,
        n_iters=n_iters,
        n_trials=MONTE_CARLO_TRIALS,
        master_seed=master_seed,
        name=f"experiment-{experiment_id}",
    )

    if experiment_id == 1:
        return ExperimentConfig(
            input_spec=WhiteInput(INPUT_VARIANCE),
            noise_spec=SnrNoise(SNR_DB),
            algorithms=reference_algorithms(EXPERIMENT_STEP_SIZES[1]),
            steady_state_window=tail_window(n_iters),
            theory_overlay=True,
            **common,
        )
    if experiment_id == 2:
        shared = {"LMS": SWEEP_BASE_MU, "RZA-LMS": SWEEP_BASE_MU, "DD-SAF": SWEEP_BASE_MU}
        return ExperimentConfig(
            input_spec=WhiteInput(INPUT_VARIANCE),
            noise_spec=SnrNoise(SNR_DB),
            algorithms=reference_algorithms(shared),
            steady_state_window=SWEEP_WINDOW,
            mu_grid=sweep_grid(),
            **common,
        )
    if experiment_id == 3:
        return ExperimentConfig(
            input_spec=WhiteInput(INPUT_VARIANCE),
            noise_spec=SnrNoise(SNR_DB),
            algorithms=reference_algorithms(EXPERIMENT_STEP_SIZES[3]),
            steady_state_window=SWEEP_WINDOW,
            theory_overlay=True,
            **common,
        )
    if experiment_id == 4:
        return ExperimentConfig(
            input_spec=AR1Input(rho=AR1_CORRELATION, innovation_variance=AR1_INNOVATION_VARIANCE),
            noise_spec=SnrNoise(AR1_SNR_DB),
            algorithms=reference_algorithms(EXPERIMENT_STEP_SIZES[4]),
            steady_state_window=tail_window(n_iters),
            theory_overlay=False,
            **common,
        )
    return ExperimentConfig(
        input_spec=WhiteInput(INPUT_VARIANCE),
        noise_spec=BernoulliGaussianNoise(**IMPULSIVE_NOISE),
        algorithms=reference_algorithms(EXPERIMENT_STEP_SIZES[5]),
        steady_state_window=tail_window(n_iters),
        **common,
    )
