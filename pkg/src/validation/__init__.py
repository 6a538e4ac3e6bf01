# Copyright (c) 2026 Pl4yer-ONE
# This file is part of DualTap.
# Licensed under GPLv3 or commercial license.

"""
Validation Module
Invariant suite behind the `validate` subcommand.
"""

from .checks import CheckResult, run_checks

__all__ = [
    'CheckResult',
    'run_checks',
]
