# Copyright (c) 2026 Pl4yer-ONE
# This file is part of DualTap.
# Licensed under GPLv3 or commercial license.

"""
Sparse Ground-Truth Systems
Block-sparse impulse responses and the observation model d = w_o^T x + v.
"""

from dataclasses import dataclass
from typing import Any, Dict, List, Sequence, Tuple

import numpy as np

from src.errors import InvalidConfigurationError, InvalidInputError
from .streams import TrialStream

Block = Tuple[int, int]  # (start_index, length)


@dataclass(frozen=True)
class SystemSpec:
    """Recipe for a block-sparse system: filter length, blocks, unit-norm flag."""
    M: int
    blocks: Tuple[Block, ...] = ()
    normalize: bool = True

    def __post_init__(self):
        object.__setattr__(self, "blocks", tuple((int(s), int(n)) for s, n in self.blocks))
        _validate_blocks(self.M, self.blocks)

    @property
    def K(self) -> int:
        return sum(length for _, length in self.blocks)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "M": self.M,
            "blocks": [list(b) for b in self.blocks],
            "normalize": self.normalize,
        }


@dataclass(frozen=True, eq=False)
class SparseSystem:
    """
    Ground-truth coefficient vector w_o with its active index set.

    coefficients[i] is zero for every i outside active_set.
    """
    coefficients: np.ndarray
    active_set: Tuple[int, ...]

    def __post_init__(self):
        coeffs = np.asarray(self.coefficients, dtype=np.float64)
        object.__setattr__(self, "coefficients", coeffs)
        object.__setattr__(self, "active_set", tuple(sorted(int(i) for i in self.active_set)))
        if len(self.active_set) > coeffs.size:
            raise InvalidConfigurationError("active set larger than filter length")
        inactive = np.ones(coeffs.size, dtype=bool)
        inactive[list(self.active_set)] = False
        if np.any(coeffs[inactive] != 0.0):
            raise InvalidConfigurationError("nonzero coefficient outside the active set")

    @property
    def M(self) -> int:
        return int(self.coefficients.size)

    @property
    def K(self) -> int:
        return len(self.active_set)

    @property
    def active_values(self) -> np.ndarray:
        return self.coefficients[list(self.active_set)]

    @property
    def energy(self) -> float:
        """Squared Euclidean norm, the MSD at w = 0."""
        return float(np.dot(self.coefficients, self.coefficients))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "coefficients": self.coefficients.tolist(),
            "active_set": list(self.active_set),
        }


def _validate_blocks(M: int, blocks: Sequence[Block]) -> None:
    if M < 1:
        raise InvalidConfigurationError(f"filter length must be >= 1, got {M}")
    occupied = np.zeros(M, dtype=bool)
    for start, length in blocks:
        if length < 1 or start < 0 or start + length > M:
            raise InvalidConfigurationError(
                f"block ({start}, {length}) out of range for M={M}"
            )
        if occupied[start:start + length].any():
            raise InvalidConfigurationError(f"block ({start}, {length}) overlaps another block")
        occupied[start:start + length] = True


def generate_sparse_system(
    M: int,
    blocks: Sequence[Block],
    values_stream: TrialStream,
    normalize: bool = True,
) -> SparseSystem:
    """
    Draw a block-sparse system.

    Args:
        M: Tap count
        blocks: Disjoint (start_index, length) ranges holding the active taps
        values_stream: Source of the standard-normal tap values
        normalize: Scale to unit Euclidean norm

    Returns:
        SparseSystem whose active_set is the union of the block ranges

    Raises:
        InvalidConfigurationError: overlapping or out-of-range blocks
    """
    _validate_blocks(M, blocks)

    active: List[int] = []
    for start, length in blocks:
        active.extend(range(start, start + length))
    active.sort()

    coefficients = np.zeros(M, dtype=np.float64)
    if active:
        values = np.asarray(values_stream.normal(len(active)), dtype=np.float64)
        # a zero draw would leave an "active" tap at zero
        values[values == 0.0] = np.finfo(np.float64).tiny
        if normalize:
            values = values / np.linalg.norm(values)
        coefficients[active] = values

    return SparseSystem(coefficients=coefficients, active_set=tuple(active))


def build_system(spec: SystemSpec, values_stream: TrialStream) -> SparseSystem:
    """Convenience wrapper: generate_sparse_system from a SystemSpec."""
    return generate_sparse_system(spec.M, spec.blocks, values_stream, spec.normalize)


def desired_output(system: SparseSystem, regressor: np.ndarray, noise_sample: float) -> float:
    """
    Observation model: w_o^T x(n) + v(n).

    Raises:
        InvalidInputError: regressor length differs from M
    """
    x = np.asarray(regressor, dtype=np.float64)
    if x.shape != (system.M,):
        raise InvalidInputError(
            f"regressor length {x.size} does not match filter length {system.M}"
        )
    return float(np.dot(system.coefficients, x) + noise_sample)
