# Copyright (c) 2026 Pl4yer-ONE
# This file is part of DualTap.
# Licensed under GPLv3 or commercial license.

"""
Acceptance Tests
Full-length Monte-Carlo runs of the reference experiments.

Each class runs one experiment at its preset operating point. Orderings
that the rho0 = gain * mu parameterization does not reproduce are kept as
strict xfails carrying the measured figures, next to the weaker ordering
that does hold. These take minutes; deselect with ``pytest -m "not slow"``.
"""

import dataclasses
import math

import numpy as np
import pytest

from src.errors import DivergenceError
from src.experiments import (
    build_overlays,
    estimate_steady_state,
    paired_difference,
    prepare_experiment,
    preset,
    run_monte_carlo,
    step_size_sweep,
)
from src.theory import to_db

pytestmark = pytest.mark.slow

SEEDS = range(10)

SPARSE_ABOVE_LMS = (
    "rho0 = gain * mu leaves both sparse filters above LMS; measured at preset 1, "
    "10 trials: LMS -37.15 dB, RZA-LMS -13.27 dB, DD-SAF -15.47 dB"
)


def steady_states(config, curves):
    return {
        name: estimate_steady_state(curve, config.steady_state_window)
        for name, curve in curves.items()
    }


def assert_paired_below(estimates, lower, upper):
    diff, se = paired_difference(estimates[lower], estimates[upper])
    assert diff < -2.0 * se, f"{lower} - {upper} = {diff:.2f} dB (SE {se:.3f})"


def block_means_db(curve, block=200):
    n = curve.n_iters - curve.n_iters % block
    linear = 10.0 ** (curve.msd_db[:n] / 10.0)
    return to_db(linear.reshape(-1, block).mean(axis=1))


def best_points(points):
    best = {}
    for p in points:
        if not p.diverged and not math.isnan(p.msd_ss_db):
            best[p.algorithm] = min(best.get(p.algorithm, math.inf), p.msd_ss_db)
    return best


# =============================================================================
# STABILITY AND NOISE FLOOR
# =============================================================================

class TestStability:
    """LMS either side of the mean-square bound 2 / 129, ten seeds each."""

    @staticmethod
    def lms(mu, seed):
        return preset(1, master_seed=seed).only("LMS").with_step_size(mu).with_overrides(
            n_trials=1, n_iters=50000,
        )

    @pytest.mark.parametrize("seed", SEEDS)
    def test_bounded_below_bound(self, seed):
        """mu = 0.014 stays bounded over 50 000 iterations."""
        curve = run_monte_carlo(self.lms(0.014, seed))["LMS"]
        assert np.all(np.isfinite(curve.msd_db))
        assert curve.msd_db[-1000:].mean() < 0.0

    @pytest.mark.parametrize("seed", SEEDS)
    def test_diverges_above_bound(self, seed):
        """mu = 0.017 trips the divergence sentinel."""
        with pytest.raises(DivergenceError):
            run_monte_carlo(self.lms(0.017, seed))


class TestNoiseFloor:
    """LMS at mu = 0.01, 35 dB, 50 trials, N = 4000, tail 1000."""

    @pytest.fixture(scope="class")
    def run(self):
        base = preset(1).only("LMS").with_step_size(0.01)
        config = dataclasses.replace(base, n_iters=4000, n_trials=50, steady_state_window=1000)
        context = prepare_experiment(config)
        curve = run_monte_carlo(config, context=context)["LMS"]
        return config, context, estimate_steady_state(curve, 1000).msd_db

    @pytest.mark.xfail(
        strict=True,
        reason="the small-step floor mu M sigma_v^2 / 2 = -36.94 dB ignores mu (M+1) = 1.29; "
               "measured -32.64 dB (20 trials), exact form -32.44 dB",
    )
    def test_small_step_floor(self, run):
        """Steady state within 1.5 dB of mu M sigma_v^2 / 2 = -36.94 dB."""
        _, _, measured = run
        assert measured == pytest.approx(-36.94, abs=1.5)

    def test_exact_floor(self, run):
        """Steady state within 1.5 dB of mu M sigma_v^2 / (2 - mu sigma_x^2 (M + 1))."""
        config, context, measured = run
        M = config.system.M
        expected = to_db(0.01 * M * context.noise.total_variance / (2.0 - 0.01 * (M + 1)))
        assert measured == pytest.approx(expected, abs=1.5)


# =============================================================================
# EXPERIMENTS
# =============================================================================

class TestExperiment1:
    """White input, tuned step sizes, 50 trials."""

    @pytest.fixture(scope="class")
    def run(self):
        config = preset(1)
        context = prepare_experiment(config)
        curves = run_monte_carlo(config, context=context)
        return config, context, steady_states(config, curves)

    @pytest.mark.xfail(strict=True, reason=SPARSE_ABOVE_LMS)
    def test_full_ordering(self, run):
        """DD-SAF <= RZA-LMS <= LMS, each step by two paired standard errors."""
        _, _, estimates = run
        assert_paired_below(estimates, "DD-SAF", "RZA-LMS")
        assert_paired_below(estimates, "RZA-LMS", "LMS")

    def test_dd_beats_rza(self, run):
        """DD-SAF is lower than RZA-LMS by at least two standard errors."""
        _, _, estimates = run
        assert_paired_below(estimates, "DD-SAF", "RZA-LMS")

    def test_matches_plugin_prediction(self, run):
        """DD-SAF steady state within 2 dB of the plug-in prediction."""
        config, context, estimates = run
        overlay = build_overlays(config, context)["DD-SAF"]
        assert estimates["DD-SAF"].msd_db == pytest.approx(overlay.prediction.msd_ss_db, abs=2.0)


class TestExperiment2:
    """Step-size sweep over the preset grid, 50 trials per point."""

    @pytest.fixture(scope="class")
    def best(self):
        return best_points(step_size_sweep(preset(2)))

    @pytest.mark.xfail(
        strict=True,
        reason="rho0 = gain * mu fixes the sparse bias term at gain^2 * sum s_bar^2 for every mu, "
               "so the LMS minimum over the grid stays below both sparse minima",
    )
    def test_full_ordering(self, best):
        """min DD-SAF < min RZA-LMS < min LMS."""
        assert best["DD-SAF"] < best["RZA-LMS"] < best["LMS"]

    def test_dd_beats_rza(self, best):
        """The best DD-SAF point beats the best RZA-LMS point."""
        assert best["DD-SAF"] < best["RZA-LMS"]


class TestExperiment3:
    """Shared step size 0.0026, N = 4000, 50 trials."""

    def test_dd_beats_rza(self):
        """Paired gain of at least two standard errors."""
        config = preset(3)
        assert_paired_below(steady_states(config, run_monte_carlo(config)), "DD-SAF", "RZA-LMS")


class TestExperiment4:
    """Correlated AR(1) input, N = 8000, 50 trials."""

    @pytest.fixture(scope="class")
    def run(self):
        config = preset(4)
        curves = run_monte_carlo(config)
        return curves, steady_states(config, curves)

    @pytest.mark.xfail(
        strict=True,
        reason="rho0 = gain * mu leaves both sparse filters above LMS; measured at preset 4, "
               "5 trials: LMS -23.78 dB, RZA-LMS -19.44 dB, DD-SAF -21.30 dB",
    )
    def test_full_ordering(self, run):
        """DD-SAF <= RZA-LMS <= LMS at n = 8000."""
        _, estimates = run
        assert estimates["DD-SAF"].msd_db <= estimates["RZA-LMS"].msd_db <= estimates["LMS"].msd_db

    def test_dd_beats_rza(self, run):
        """DD-SAF ends below RZA-LMS."""
        _, estimates = run
        assert estimates["DD-SAF"].msd_db < estimates["RZA-LMS"].msd_db

    @pytest.mark.parametrize("name", ["LMS", "RZA-LMS", "DD-SAF"])
    def test_monotone_convergence(self, run, name):
        """200-iteration block means never rise by more than 0.5 dB."""
        curves, _ = run
        assert np.all(np.diff(block_means_db(curves[name])) <= 0.5)


class TestExperiment5:
    """Impulsive Bernoulli-Gaussian noise, 50 trials."""

    @pytest.fixture(scope="class")
    def run(self):
        config = preset(5)
        curves = run_monte_carlo(config)
        return curves, steady_states(config, curves)

    def test_no_divergence(self, run):
        """All three algorithms survive the spikes."""
        curves, _ = run
        assert set(curves) == {"LMS", "RZA-LMS", "DD-SAF"}
        assert all(np.all(np.isfinite(c.msd_db)) for c in curves.values())

    @pytest.mark.xfail(
        strict=True,
        reason="with unit background variance the noise term dominates and DD-SAF sits above "
               "RZA-LMS; measured paired DD-SAF - RZA-LMS = +2.12 dB (SE 0.025, 20 trials)",
    )
    def test_dd_not_worse_than_rza(self, run):
        """DD-SAF tail MSD <= RZA-LMS tail MSD at unit noise scale."""
        _, estimates = run
        assert estimates["DD-SAF"].msd_db <= estimates["RZA-LMS"].msd_db

    def test_dd_not_worse_than_rza_at_35db(self):
        """With the mixture rescaled to 35 dB SNR, DD-SAF is no worse than RZA-LMS."""
        base = preset(5)
        scale = math.sqrt(10.0 ** -3.5 / base.noise_spec.total_variance)
        config = dataclasses.replace(
            base, noise_spec=dataclasses.replace(base.noise_spec, global_scale=scale),
        )
        estimates = steady_states(config, run_monte_carlo(config))
        assert estimates["DD-SAF"].msd_db <= estimates["RZA-LMS"].msd_db
