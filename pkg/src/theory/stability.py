# Copyright (c) 2026 Pl4yer-ONE
# This file is part of DualTap.
# Licensed under GPLv3 or commercial license.

"""
Stability Bounds
Mean and mean-square step-size limits for LMS-type filters with white input.
The zero-attraction term does not move either bound.
"""

from dataclasses import dataclass, asdict
from typing import Any, Dict

from src.errors import InvalidInputError


@dataclass(frozen=True)
class MeanSquareBound:
    """Largest stable step size in the mean-square sense."""
    exact: float      # 2 / ((M+1) sigma_x^2), used for all stability decisions
    large_m: float    # 2 / (M sigma_x^2)

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def _check_variance(sigma_x2: float) -> None:
    if not sigma_x2 > 0:
        raise InvalidInputError(f"input variance must be > 0, got {sigma_x2}")


def mean_stability_bound(sigma_x2: float) -> float:
    """Mean convergence requires mu < 2 / sigma_x^2."""
    _check_variance(sigma_x2)
    return 2.0 / sigma_x2


def ms_stability_bound(M: int, sigma_x2: float) -> MeanSquareBound:
    """Mean-square convergence requires mu < 2 / ((M+1) sigma_x^2)."""
    _check_variance(sigma_x2)
    if M < 1:
        raise InvalidInputError(f"filter length must be >= 1, got {M}")
    return MeanSquareBound(exact=2.0 / ((M + 1) * sigma_x2), large_m=2.0 / (M * sigma_x2))


def msd_contraction(mu: float, sigma_x2: float, M: int) -> float:
    """alpha = 1 - 2 mu sigma_x^2 + mu^2 sigma_x^4 (1 + M)."""
    return 1.0 - 2.0 * mu * sigma_x2 + mu ** 2 * sigma_x2 ** 2 * (1 + M)


def is_ms_stable(mu: float, M: int, sigma_x2: float) -> bool:
    return 0.0 < mu < ms_stability_bound(M, sigma_x2).exact
