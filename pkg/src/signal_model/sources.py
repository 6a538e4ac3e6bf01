# Copyright (c) 2026 Pl4yer-ONE
# This file is part of DualTap.
# Licensed under GPLv3 or commercial license.

"""
Input and Noise Processes
White / AR(1) inputs, Gaussian / Bernoulli-Gaussian noise, SNR calibration.

Each process has a single-sample form (next_input / next_noise) and a
block form (input_sequence / noise_sequence) used by the Monte-Carlo
harness. The two forms share distributions, not draw order: next_noise
interleaves one uniform and one normal per sample, noise_sequence draws
all uniforms first. Do not mix them on one stream and expect equal paths.
"""

from dataclasses import dataclass, asdict
from typing import Any, Dict, Union

import numpy as np
from scipy.signal import lfilter

from src.config import SNR_CALIBRATION_SAMPLES
from src.errors import InvalidConfigurationError, InvalidInputError
from .streams import TrialStream
from .systems import SparseSystem


# =============================================================================
# INPUT SPECS
# =============================================================================

@dataclass(frozen=True)
class WhiteInput:
    """i.i.d. zero-mean Gaussian input with the given variance."""
    variance: float = 1.0

    def __post_init__(self):
        if not self.variance > 0:
            raise InvalidConfigurationError(f"input variance must be > 0, got {self.variance}")

    @property
    def stationary_variance(self) -> float:
        return self.variance

    def to_dict(self) -> Dict[str, Any]:
        return {"kind": "white", **asdict(self)}


@dataclass(frozen=True)
class AR1Input:
    """x(n) = rho * x(n-1) + v0(n), v0 ~ N(0, innovation_variance)."""
    rho: float
    innovation_variance: float

    def __post_init__(self):
        if not abs(self.rho) < 1:
            raise InvalidConfigurationError(f"AR(1) correlation must satisfy |rho| < 1, got {self.rho}")
        if not self.innovation_variance > 0:
            raise InvalidConfigurationError(
                f"innovation variance must be > 0, got {self.innovation_variance}"
            )

    @property
    def stationary_variance(self) -> float:
        return self.innovation_variance / (1.0 - self.rho ** 2)

    def to_dict(self) -> Dict[str, Any]:
        return {"kind": "ar1", **asdict(self)}


InputSpec = Union[WhiteInput, AR1Input]


# =============================================================================
# NOISE SPECS
# =============================================================================

@dataclass(frozen=True)
class GaussianNoise:
    """Zero-mean Gaussian measurement noise."""
    variance: float

    def __post_init__(self):
        if not self.variance > 0:
            raise InvalidConfigurationError(f"noise variance must be > 0, got {self.variance}")

    @property
    def total_variance(self) -> float:
        return self.variance

    def to_dict(self) -> Dict[str, Any]:
        return {"kind": "gaussian", **asdict(self)}


@dataclass(frozen=True)
class BernoulliGaussianNoise:
    """
    Impulsive noise: with probability spike_probability the sample has
    variance spike_scale * background_variance, otherwise background_variance.
    The sample is then multiplied by global_scale.
    """
    spike_probability: float
    background_variance: float = 1.0
    spike_scale: float = 100.0
    global_scale: float = 1.0

    def __post_init__(self):
        if not 0.0 <= self.spike_probability <= 1.0:
            raise InvalidConfigurationError(
                f"spike probability must lie in [0, 1], got {self.spike_probability}"
            )
        for name in ("background_variance", "spike_scale", "global_scale"):
            if not getattr(self, name) > 0:
                raise InvalidConfigurationError(f"{name} must be > 0, got {getattr(self, name)}")

    @property
    def total_variance(self) -> float:
        p = self.spike_probability
        mixture = (1.0 - p) * self.background_variance + p * self.spike_scale * self.background_variance
        return mixture * self.global_scale ** 2

    def to_dict(self) -> Dict[str, Any]:
        return {"kind": "bernoulli_gaussian", **asdict(self)}


@dataclass(frozen=True)
class SnrNoise:
    """Gaussian noise whose variance is set from an SNR against the clean output power."""
    snr_db: float

    def to_dict(self) -> Dict[str, Any]:
        return {"kind": "snr", **asdict(self)}


NoiseSpec = Union[GaussianNoise, BernoulliGaussianNoise]


# =============================================================================
# SINGLE-SAMPLE GENERATORS
# =============================================================================

def next_input(spec: InputSpec, state: float, stream: TrialStream) -> float:
    """
    Draw x(n).

    Args:
        spec: WhiteInput or AR1Input
        state: x(n-1) for AR(1) (0 at n = 0); ignored for white input
        stream: Input channel of the trial
    """
    if isinstance(spec, AR1Input):
        return spec.rho * state + np.sqrt(spec.innovation_variance) * stream.normal()
    return np.sqrt(spec.variance) * stream.normal()


def next_noise(spec: NoiseSpec, stream: TrialStream) -> float:
    """Draw v(n)."""
    if isinstance(spec, BernoulliGaussianNoise):
        spike = stream.uniform() < spec.spike_probability
        variance = spec.background_variance * (spec.spike_scale if spike else 1.0)
        return spec.global_scale * np.sqrt(variance) * stream.normal()
    return np.sqrt(spec.variance) * stream.normal()


# =============================================================================
# BLOCK GENERATORS
# =============================================================================

def input_sequence(spec: InputSpec, n_samples: int, stream: TrialStream) -> np.ndarray:
    """x(0) .. x(n_samples - 1); the AR(1) recursion starts from x(-1) = 0."""
    if isinstance(spec, AR1Input):
        innovations = np.sqrt(spec.innovation_variance) * stream.normal(n_samples)
        return lfilter([1.0], [1.0, -spec.rho], innovations)
    return np.sqrt(spec.variance) * stream.normal(n_samples)


def noise_sequence(spec: NoiseSpec, n_samples: int, stream: TrialStream) -> np.ndarray:
    """v(0) .. v(n_samples - 1)."""
    if isinstance(spec, BernoulliGaussianNoise):
        spikes = stream.uniform(n_samples) < spec.spike_probability
        std = np.where(
            spikes,
            np.sqrt(spec.spike_scale * spec.background_variance),
            np.sqrt(spec.background_variance),
        )
        return spec.global_scale * std * stream.normal(n_samples)
    return np.sqrt(spec.variance) * stream.normal(n_samples)


def regressor_matrix(samples: np.ndarray, M: int) -> np.ndarray:
    """
    Tapped-delay-line regressors.

    Row n is [x(n), x(n-1), ..., x(n-M+1)] with zeros before n = 0.
    Returns a read-only view of shape (len(samples), M).
    """
    if M < 1:
        raise InvalidInputError(f"filter length must be >= 1, got {M}")
    padded = np.concatenate([np.zeros(M - 1), np.asarray(samples, dtype=np.float64)])
    return np.lib.stride_tricks.sliding_window_view(padded, M)[:, ::-1]


# =============================================================================
# SNR CALIBRATION
# =============================================================================

def snr_to_noise_variance(snr_db: float, signal_power: float) -> float:
    """signal_power / 10^(snr_db / 10)."""
    if not signal_power > 0:
        raise InvalidInputError(f"signal power must be > 0, got {signal_power}")
    return signal_power / 10.0 ** (snr_db / 10.0)


def clean_output_power(
    system: SparseSystem,
    spec: InputSpec,
    stream: TrialStream,
    n_samples: int = SNR_CALIBRATION_SAMPLES,
) -> float:
    """
    Power of w_o^T x(n).

    Exact for white input (sigma_x^2 * ||w_o||^2); for AR(1) input the
    sample variance of the clean output over an n_samples pre-run.
    """
    if isinstance(spec, WhiteInput):
        return spec.variance * system.energy
    x = input_sequence(spec, n_samples + system.M - 1, stream)
    clean = np.convolve(x, system.coefficients)[system.M - 1:n_samples + system.M - 1]
    return float(np.var(clean))


def resolve_noise(
    noise: Union[NoiseSpec, SnrNoise],
    system: SparseSystem,
    input_spec: InputSpec,
    stream: TrialStream,
) -> NoiseSpec:
    """Turn an SNR request into a concrete GaussianNoise; other specs pass through."""
    if isinstance(noise, SnrNoise):
        power = clean_output_power(system, input_spec, stream)
        return GaussianNoise(variance=snr_to_noise_variance(noise.snr_db, power))
    return noise
