# Copyright (c) 2026 Pl4yer-ONE
# This file is part of DualTap.
# Licensed under GPLv3 or commercial license.

"""
Exception hierarchy shared by all DualTap modules.
"""

from typing import Optional


class DualTapError(Exception):
    """Root of all DualTap errors."""


class InvalidConfigurationError(DualTapError, ValueError):
    """A configuration violates its invariants (bad blocks, unstable parameters, ...)."""


class InvalidInputError(DualTapError, ValueError):
    """Operands have incompatible shapes or out-of-range windows."""


class InvalidComparisonError(DualTapError, ValueError):
    """Two theory inputs that must share parameters do not."""


class DivergenceError(DualTapError, ArithmeticError):
    """
    Numerical blow-up of a filter or an unstable recursion.

    Attributes:
        iteration: Iteration index at which divergence was detected (None for
            closed-form checks)
        algorithm: Curve name of the diverging algorithm, when known
        trial_index: Monte-Carlo trial, attached by the harness
    """

    def __init__(
        self,
        message: str,
        iteration: Optional[int] = None,
        algorithm: Optional[str] = None,
        trial_index: Optional[int] = None,
    ):
        super().__init__(message)
        self.iteration = iteration
        self.algorithm = algorithm
        self.trial_index = trial_index

    def __str__(self) -> str:
        parts = [super().__str__()]
        if self.algorithm is not None:
            parts.append(f"algorithm={self.algorithm}")
        if self.trial_index is not None:
            parts.append(f"trial={self.trial_index}")
        if self.iteration is not None:
            parts.append(f"iteration={self.iteration}")
        return " | ".join(parts)

    def __reduce__(self):
        return (
            self.__class__,
            (self.args[0], self.iteration, self.algorithm, self.trial_index),
        )
