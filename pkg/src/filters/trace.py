# Copyright (c) 2026 Pl4yer-ONE
# This file is part of DualTap.
# Licensed under GPLv3 or commercial license.

"""
Filter Trace Dump
Per-iteration w, q and e as rows of a CSV file, for trace-level fixtures.
"""

import csv
from pathlib import Path
from typing import List

import numpy as np

from src.config import TRACE_TAU_W, TRACE_TAU_Q
from .adaptive import FilterState
from .weights import dual_domain_active


class FilterTraceWriter:
    """
    Streams one row per iteration.

    Columns: n, e, active, w_0 .. w_{M-1}, q_0 .. q_{M-1}, where w and q are
    the state *before* the update that produced e(n) and active is the
    fraction of taps with |w_i| > tau_w or |q_i| > tau_q.

    Usage:
        with FilterTraceWriter(path, M) as trace:
            trace.record(state, e)
    """

    def __init__(self, output_path: str, M: int, tau_w: float = TRACE_TAU_W, tau_q: float = TRACE_TAU_Q):
        self.path = Path(output_path)
        self.M = M
        self.tau_w = tau_w
        self.tau_q = tau_q
        self._file = None
        self._writer = None

    def fieldnames(self) -> List[str]:
        return (
            ["n", "e", "active"]
            + [f"w_{i}" for i in range(self.M)]
            + [f"q_{i}" for i in range(self.M)]
        )

    def __enter__(self) -> "FilterTraceWriter":
        self.path.parent.mkdir(parents=True, exist_ok=True)
        self._file = open(self.path, "w", newline="", encoding="utf-8")
        self._writer = csv.writer(self._file)
        self._writer.writerow(self.fieldnames())
        return self

    def record(self, state: FilterState, e: float) -> None:
        active = dual_domain_active(state.w, state.q, self.tau_w, self.tau_q)
        self._writer.writerow(
            [state.n, repr(float(e)), repr(float(np.mean(active)))]
            + [repr(float(v)) for v in state.w]
            + [repr(float(v)) for v in state.q]
        )

    def __exit__(self, exc_type, exc, tb) -> None:
        if self._file is not None:
            self._file.close()
        self._file = None
        self._writer = None


def read_trace(path: str) -> np.ndarray:
    """Load a trace written by FilterTraceWriter as a float array (header skipped)."""
    return np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
