# Copyright (c) 2026 Pl4yer-ONE
# This file is part of DualTap.
# Licensed under GPLv3 or commercial license.

"""
Seeded Random Streams
One independent generator per (master seed, trial, channel).
"""

from dataclasses import dataclass, field
from enum import IntEnum
from typing import Optional, Union

import numpy as np

from src.errors import InvalidConfigurationError


class Channel(IntEnum):
    """Sub-streams of a trial. Values are part of the seeding contract."""
    INPUT = 0
    NOISE = 1
    SYSTEM = 2
    CALIBRATION = 3
    PILOT_INPUT = 4
    PILOT_NOISE = 5


@dataclass
class TrialStream:
    """
    Deterministic sample source for one trial.

    Two streams built from the same (master_seed, trial_index, channel)
    yield bit-identical sequences; any difference in the triple gives an
    independent stream (numpy SeedSequence spawn keys).

    Not safe to share across threads or processes.
    """
    master_seed: int
    trial_index: int
    channel: int = Channel.INPUT
    _rng: np.random.Generator = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if not 0 <= self.master_seed < 2 ** 64:
            raise InvalidConfigurationError(
                f"master_seed must be an unsigned 64-bit integer, got {self.master_seed}"
            )
        if self.trial_index < 0:
            raise InvalidConfigurationError(f"trial_index must be >= 0, got {self.trial_index}")
        seed_seq = np.random.SeedSequence(
            entropy=int(self.master_seed),
            spawn_key=(int(self.trial_index), int(self.channel)),
        )
        self._rng = np.random.default_rng(seed_seq)

    def normal(self, size: Optional[int] = None) -> Union[float, np.ndarray]:
        """Standard normal draw(s)."""
        return self._rng.standard_normal(size)

    def uniform(self, size: Optional[int] = None) -> Union[float, np.ndarray]:
        """Uniform draw(s) on [0, 1)."""
        return self._rng.random(size)

    def for_channel(self, channel: int) -> "TrialStream":
        """Fresh stream for another channel of the same trial."""
        return TrialStream(self.master_seed, self.trial_index, channel)
