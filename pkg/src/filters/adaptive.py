# Copyright (c) 2026 Pl4yer-ONE
# This file is part of DualTap.
# Licensed under GPLv3 or commercial license.

"""
Adaptive Filter Update Rules
LMS, ZA-LMS, RZA-LMS and DD-SAF as single-step state machines.

Update (all variants):
    e(n)   = d(n) - w(n)^T x(n)
    w(n+1) = w(n) + mu e(n) x(n) - rho(n) s(n) * sgn(w(n))

    LMS     rho = 0
    ZA      s_i = 1,                   rho = rho0
    RZA     s_i = 1/(1+eps|w_i|),      rho = rho0
    DD-SAF  s_i = 1/(1+bw|w_i|+bq|q_i|), rho = warm-start schedule,
            q(n+1) = gamma_q q(n) + e(n) x(n)

Multiplications are tallied per tap only (scalar work excluded):
LMS 2M, ZA 3M, RZA 4M, DD-SAF 6M.
"""

from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Any, Callable, Dict, Tuple

import numpy as np

from src.errors import InvalidConfigurationError, InvalidInputError
from .weights import sgn, rza_weight, dd_weight, warm_start_rho, error_memory_update

SignFunction = Callable[[np.ndarray], np.ndarray]


class AlgorithmKind(str, Enum):
    """Supported update rules."""
    LMS = "LMS"
    ZA = "ZA"
    RZA = "RZA"
    DDSAF = "DDSAF"

    @property
    def label(self) -> str:
        """Curve name used in reports and CSV files."""
        return ALGORITHM_LABELS[self]

    @classmethod
    def parse(cls, text: str) -> "AlgorithmKind":
        key = text.strip().upper().replace("-", "").replace("_", "")
        aliases = {
            "LMS": cls.LMS,
            "ZA": cls.ZA, "ZALMS": cls.ZA,
            "RZA": cls.RZA, "RZALMS": cls.RZA,
            "DDSAF": cls.DDSAF, "DD": cls.DDSAF,
        }
        if key not in aliases:
            raise InvalidConfigurationError(f"unknown algorithm: {text!r}")
        return aliases[key]


ALGORITHM_LABELS = {
    AlgorithmKind.LMS: "LMS",
    AlgorithmKind.ZA: "ZA-LMS",
    AlgorithmKind.RZA: "RZA-LMS",
    AlgorithmKind.DDSAF: "DD-SAF",
}

MULTIPLICATIONS_PER_TAP = {
    AlgorithmKind.LMS: 2,
    AlgorithmKind.ZA: 3,
    AlgorithmKind.RZA: 4,
    AlgorithmKind.DDSAF: 6,
}


@dataclass(frozen=True)
class AlgorithmConfig:
    """
    Per-algorithm parameters.

    LMS ignores every sparsity field; ZA and RZA ignore beta_q, gamma_q
    and n_warm (ZA also ignores epsilon).
    """
    kind: AlgorithmKind
    mu: float
    rho0: float = 0.0
    epsilon: float = 0.0
    beta_w: float = 0.0
    beta_q: float = 0.0
    gamma_q: float = 0.97
    n_warm: int = 0

    def __post_init__(self):
        object.__setattr__(self, "kind", AlgorithmKind(self.kind))
        if not self.mu > 0:
            raise InvalidConfigurationError(f"step size must be > 0, got {self.mu}")
        if self.rho0 < 0:
            raise InvalidConfigurationError(f"rho0 must be >= 0, got {self.rho0}")
        for name in ("epsilon", "beta_w", "beta_q"):
            if getattr(self, name) < 0:
                raise InvalidConfigurationError(f"{name} must be >= 0, got {getattr(self, name)}")
        if not 0.0 < self.gamma_q < 1.0:
            raise InvalidConfigurationError(f"gamma_q must lie in (0, 1), got {self.gamma_q}")
        if self.n_warm < 0:
            raise InvalidConfigurationError(f"n_warm must be >= 0, got {self.n_warm}")

    # Factories -------------------------------------------------------------

    @classmethod
    def lms(cls, mu: float) -> "AlgorithmConfig":
        return cls(AlgorithmKind.LMS, mu)

    @classmethod
    def za(cls, mu: float, rho0: float) -> "AlgorithmConfig":
        return cls(AlgorithmKind.ZA, mu, rho0=rho0)

    @classmethod
    def rza(cls, mu: float, rho0: float, epsilon: float) -> "AlgorithmConfig":
        return cls(AlgorithmKind.RZA, mu, rho0=rho0, epsilon=epsilon)

    @classmethod
    def ddsaf(
        cls,
        mu: float,
        rho0: float,
        beta_w: float,
        beta_q: float,
        gamma_q: float,
        n_warm: int,
    ) -> "AlgorithmConfig":
        return cls(
            AlgorithmKind.DDSAF, mu, rho0=rho0,
            beta_w=beta_w, beta_q=beta_q, gamma_q=gamma_q, n_warm=n_warm,
        )

    # -----------------------------------------------------------------------

    @property
    def label(self) -> str:
        return self.kind.label

    @property
    def is_sparse(self) -> bool:
        return self.kind is not AlgorithmKind.LMS

    def with_step_size(self, mu: float) -> "AlgorithmConfig":
        """New step size, keeping the zero-attraction intensity rho0 / mu."""
        return replace(self, mu=mu, rho0=self.rho0 * (mu / self.mu))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "kind": self.kind.value,
            "mu": self.mu,
            "rho0": self.rho0,
            "epsilon": self.epsilon,
            "beta_w": self.beta_w,
            "beta_q": self.beta_q,
            "gamma_q": self.gamma_q,
            "n_warm": self.n_warm,
        }


@dataclass
class FilterState:
    """
    w(n), q(n), the iteration counter n and the running multiplication tally.

    q stays identically zero for every algorithm except DD-SAF.
    """
    w: np.ndarray
    q: np.ndarray
    n: int = 0
    mult_count: int = 0

    def __post_init__(self):
        if np.shape(self.w) != np.shape(self.q):
            raise InvalidInputError("w and q must have the same length")

    @classmethod
    def initial(cls, M: int) -> "FilterState":
        """w(0) = 0, q(0) = 0."""
        return cls(w=np.zeros(M), q=np.zeros(M))

    @property
    def M(self) -> int:
        return int(np.size(self.w))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "w": self.w.tolist(),
            "q": self.q.tolist(),
            "n": self.n,
            "mult_count": self.mult_count,
        }


def penalty_weights(state: FilterState, config: AlgorithmConfig) -> np.ndarray:
    """s(n) for the current state; ones for LMS and ZA."""
    kind = config.kind
    if kind is AlgorithmKind.RZA:
        return rza_weight(state.w, config.epsilon)
    if kind is AlgorithmKind.DDSAF:
        return dd_weight(state.w, state.q, config.beta_w, config.beta_q)
    return np.ones_like(state.w)


def zero_attraction(n: int, config: AlgorithmConfig) -> float:
    """rho(n) for the given algorithm."""
    kind = config.kind
    if kind is AlgorithmKind.LMS:
        return 0.0
    if kind is AlgorithmKind.DDSAF:
        return warm_start_rho(n, config.rho0, config.n_warm)
    return config.rho0


def filter_step(
    state: FilterState,
    config: AlgorithmConfig,
    x: np.ndarray,
    d: float,
    sign: SignFunction = sgn,
) -> Tuple[FilterState, float]:
    """
    Advance one iteration.

    Args:
        state: Current FilterState (left untouched)
        config: Algorithm parameters
        x: Regressor x(n), length M
        d: Desired sample d(n)
        sign: Sign convention; override only to exercise the validation suite

    Returns:
        (next state, prediction error e(n))

    Raises:
        InvalidInputError: regressor length differs from M
    """
    x = np.asarray(x, dtype=np.float64)
    if x.shape != state.w.shape:
        raise InvalidInputError(
            f"regressor length {x.size} does not match filter length {state.M}"
        )

    w = state.w
    e = d - float(np.dot(w, x))
    w_next = w + (config.mu * e) * x

    q_next = state.q
    if config.kind is AlgorithmKind.DDSAF:
        q_next = error_memory_update(state.q, e, x, config.gamma_q)

    rho = zero_attraction(state.n, config)
    if rho != 0.0:
        s = penalty_weights(state, config)
        w_next = w_next - rho * (s * sign(w))

    tally = MULTIPLICATIONS_PER_TAP[config.kind] * state.M
    return FilterState(
        w=w_next,
        q=q_next,
        n=state.n + 1,
        mult_count=state.mult_count + tally,
    ), e
