# Copyright (c) 2026 Pl4yer-ONE
# This file is part of DualTap.
# Licensed under GPLv3 or commercial license.

"""
Result Exporter
Writes learning curves and sweep tables to CSV and a human-readable summary.

Every CSV starts with a "# fingerprint=<hex>" line identifying the
configuration that produced it; floats are written with full precision so
identical runs produce identical files.
"""

from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from src.errors import InvalidInputError
from src.filters import AlgorithmKind
from .overlay import TheoryOverlay
from .presets import ExperimentConfig
from .runner import MsdCurve
from .steady_state import SteadyStateEstimate, paired_difference
from .sweep import SweepPoint

CURVE_COLUMNS = ["iteration", "algorithm", "msd_db", "source"]
SWEEP_COLUMNS = ["mu", "algorithm", "msd_ss_db", "std_db", "diverged"]
FINGERPRINT_PREFIX = "# fingerprint="


def curves_to_frame(curves: Sequence[MsdCurve]) -> pd.DataFrame:
    """Long-format table: one row per (curve, iteration)."""
    frames = [
        pd.DataFrame({
            "iteration": np.arange(curve.n_iters, dtype=np.int64),
            "algorithm": curve.algorithm,
            "msd_db": curve.msd_db.astype(np.float64),
            "source": curve.source,
        })
        for curve in curves
    ]
    if not frames:
        return pd.DataFrame(columns=CURVE_COLUMNS)
    return pd.concat(frames, ignore_index=True)[CURVE_COLUMNS]


def sweep_to_frame(points: Sequence[SweepPoint]) -> pd.DataFrame:
    return pd.DataFrame([p.to_dict() for p in points], columns=SWEEP_COLUMNS)


def _write_csv(frame: pd.DataFrame, output_path: str, fingerprint: str) -> str:
    path = Path(output_path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as f:
        f.write(f"{FINGERPRINT_PREFIX}{fingerprint}\n")
        frame.to_csv(f, index=False, lineterminator="\n")
    return str(path)


def _read_csv(input_path: str, columns: List[str]) -> Tuple[str, pd.DataFrame]:
    path = Path(input_path)
    if not path.exists():
        raise FileNotFoundError(f"Result file not found: {input_path}")
    with open(path, "r", encoding="utf-8") as f:
        first = f.readline().rstrip("\n")
    if not first.startswith(FINGERPRINT_PREFIX):
        raise InvalidInputError(f"{input_path} has no fingerprint header")
    frame = pd.read_csv(path, comment="#", float_precision="round_trip")
    if list(frame.columns) != columns:
        raise InvalidInputError(f"{input_path} columns {list(frame.columns)} != {columns}")
    return first[len(FINGERPRINT_PREFIX):], frame


def export_curves_csv(curves: Sequence[MsdCurve], output_path: str, fingerprint: str) -> str:
    """
    Export learning curves.

    Columns: iteration, algorithm, msd_db, source (sim | theory)

    Returns:
        Path to created file
    """
    return _write_csv(curves_to_frame(curves), output_path, fingerprint)


def read_curves_csv(input_path: str) -> Tuple[str, pd.DataFrame]:
    """(fingerprint, curve table) from a file written by export_curves_csv."""
    return _read_csv(input_path, CURVE_COLUMNS)


def export_sweep_csv(points: Sequence[SweepPoint], output_path: str, fingerprint: str) -> str:
    """
    Export a step-size sweep.

    Columns: mu, algorithm, msd_ss_db, std_db, diverged; diverged cells
    have empty MSD fields.
    """
    return _write_csv(sweep_to_frame(points), output_path, fingerprint)


def read_sweep_csv(input_path: str) -> Tuple[str, List[SweepPoint]]:
    """(fingerprint, sweep points) from a file written by export_sweep_csv."""
    fingerprint, frame = _read_csv(input_path, SWEEP_COLUMNS)
    points = [
        SweepPoint(
            mu=float(row.mu),
            algorithm=str(row.algorithm),
            msd_ss_db=float(row.msd_ss_db),
            std_db=float(row.std_db),
            diverged=bool(row.diverged),
        )
        for row in frame.itertuples(index=False)
    ]
    return fingerprint, points


# =============================================================================
# SUMMARY
# =============================================================================

def _find(config: ExperimentConfig, kind: AlgorithmKind) -> Optional[str]:
    names = [n for n, a in config.algorithms if a.kind is kind]
    return names[0] if names else None


def format_summary(
    config: ExperimentConfig,
    estimates: Dict[str, SteadyStateEstimate],
    overlays: Optional[Dict[str, TheoryOverlay]] = None,
    diverged: Sequence[str] = (),
) -> str:
    """Plain-text report of steady-state figures and, if given, theory checks."""
    start = config.n_iters - config.steady_state_window
    lines = [
        "DualTap summary",
        "=" * 60,
        f"experiment:  {config.name}",
        f"fingerprint: {config.fingerprint()}",
        f"seed:        {config.master_seed}",
        f"trials:      {config.n_trials}",
        f"iterations:  {config.n_iters}",
        f"window:      [{start}, {config.n_iters})",
        "",
        f"{'algorithm':<12}{'mu':>10}{'rho0':>12}{'MSD (dB)':>11}{'std (dB)':>10}",
    ]
    for name, estimate in estimates.items():
        algorithm = config.algorithm(name)
        lines.append(
            f"{name:<12}{algorithm.mu:>10.5f}{algorithm.rho0:>12.3e}"
            f"{estimate.msd_db:>11.2f}{estimate.std_db:>10.2f}"
        )
    for name in diverged:
        lines.append(f"{name:<12}diverged")

    rza, dd = _find(config, AlgorithmKind.RZA), _find(config, AlgorithmKind.DDSAF)
    if rza in estimates and dd in estimates and config.n_trials > 1:
        diff, stderr = paired_difference(estimates[dd], estimates[rza])
        lines += ["", f"{dd} - {rza} (paired): {diff:+.2f} dB +/- {stderr:.2f} dB"]

    if overlays:
        lines += ["", f"theory (small-step form, s_bar={next(iter(overlays.values())).sbar_mode})"]
        for name, overlay in overlays.items():
            p = overlay.prediction
            line = f"{name:<12}predicted {p.msd_ss_db:7.2f} dB"
            if name in estimates:
                line += f"  gap {estimates[name].msd_db - p.msd_ss_db:+.2f} dB"
            lines.append(line)
        if dd in overlays:
            p = overlays[dd].prediction
            lines += [
                f"mean-square bound on mu:   {p.ms_stable_max_mu:.5f} (large-M {p.ms_stable_max_mu_large_m:.5f})",
                f"bias bound ||E[w~]||:      {p.bias_bound:.4e}",
                f"recommended n_warm:        {p.recommended_n_warm}",
            ]
            if rza in overlays:
                lines.append(f"delta MSD vs RZA s_bar:    {p.delta_msd:.4e}")
    return "\n".join(lines) + "\n"


def export_summary(
    config: ExperimentConfig,
    estimates: Dict[str, SteadyStateEstimate],
    output_path: str,
    overlays: Optional[Dict[str, TheoryOverlay]] = None,
    diverged: Sequence[str] = (),
) -> str:
    path = Path(output_path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(format_summary(config, estimates, overlays, diverged), encoding="utf-8")
    return str(path)
