# Copyright (c) 2026 Pl4yer-ONE
# This file is part of DualTap.
# Licensed under GPLv3 or commercial license.

"""
Filter Tests
Penalty weights, warm start, error memory, update rules, reductions and tallies.
"""

import numpy as np
import pytest

from src.errors import InvalidConfigurationError, InvalidInputError
from src.filters import (
    AlgorithmConfig,
    AlgorithmKind,
    FilterState,
    FilterTraceWriter,
    dd_weight,
    dual_domain_active,
    error_memory_update,
    filter_step,
    penalty_weights,
    read_trace,
    recommended_warm_start,
    rza_weight,
    sgn,
    warm_start_rho,
    zero_attraction,
)
from src.signal_model import Channel, TrialStream, generate_sparse_system, regressor_matrix


def make_signals(n_iters, M=32, seed=11, blocks=((3, 2), (17, 2))):
    system = generate_sparse_system(M, blocks, TrialStream(seed, 0, Channel.SYSTEM))
    x = TrialStream(seed, 0, Channel.INPUT).normal(n_iters)
    v = 0.01 * TrialStream(seed, 0, Channel.NOISE).normal(n_iters)
    X = np.ascontiguousarray(regressor_matrix(x, M))
    return system, X, X @ system.coefficients + v


def trajectory(config, X, d, sign=sgn):
    state = FilterState.initial(X.shape[1])
    rows = [state.w]
    for n in range(X.shape[0]):
        state, _ = filter_step(state, config, X[n], d[n], sign=sign)
        rows.append(state.w)
    return np.stack(rows)


def sgn_zero_is_one(v):
    return np.where(np.asarray(v) >= 0, 1.0, -1.0)


class TestPenaltyWeights:
    """Tests for sgn, the RZA weight and the dual-domain weight."""

    def test_sgn_of_zero(self):
        """sgn(0) = 0."""
        assert sgn(np.array([-2.0, 0.0, 3.0])).tolist() == [-1.0, 0.0, 1.0]

    def test_rza_weight(self):
        """1 / (1 + eps |w|), equal to 1 at w = 0."""
        assert rza_weight(0.0, 0.02) == 1.0
        assert rza_weight(-10.0, 0.02) == pytest.approx(1 / 1.2)

    def test_dd_weight_value(self):
        """1 / (1 + beta_w |w| + beta_q |q|)."""
        assert dd_weight(1.0, -0.5, 0.02, 2.0) == pytest.approx(1 / 2.02)

    def test_dd_weight_bounds(self):
        """0 < s_DD <= s_RZA <= 1, with equality when beta_q = 0."""
        rng = np.random.default_rng(0)
        w, q = 5 * rng.standard_normal(1000), 5 * rng.standard_normal(1000)
        s_dd, s_rza = dd_weight(w, q, 0.02, 2.0), rza_weight(w, 0.02)
        assert np.all(s_dd > 0) and np.all(s_dd <= s_rza) and np.all(s_rza <= 1)
        assert np.array_equal(dd_weight(w, q, 0.02, 0.0), s_rza)

    def test_dual_domain_active(self):
        """A tap is active when either magnitude passes its threshold."""
        flags = dual_domain_active(np.array([0.0, 0.5, 0.0]), np.array([0.0, 0.0, 2.0]), 0.1, 1.0)
        assert flags.tolist() == [False, True, True]


class TestWarmStart:
    """Tests for the zero-attraction schedule."""

    def test_schedule(self):
        """rho is 0 up to and including n_warm, rho0 afterwards."""
        assert warm_start_rho(0, 0.01, 200) == 0.0
        assert warm_start_rho(200, 0.01, 200) == 0.0
        assert warm_start_rho(201, 0.01, 200) == 0.01
        assert warm_start_rho(1, 0.01, 0) == 0.01

    def test_recommended_warm_start(self):
        """One LMS time constant."""
        assert recommended_warm_start(0.01, 1.0) == 100
        assert recommended_warm_start(0.002, 2.5225) == 198

    def test_zero_attraction_per_kind(self):
        """LMS never attracts; ZA and RZA always do; DD-SAF follows the schedule."""
        assert zero_attraction(500, AlgorithmConfig.lms(0.01)) == 0.0
        assert zero_attraction(0, AlgorithmConfig.za(0.01, 0.001)) == 0.001
        dd = AlgorithmConfig.ddsaf(0.01, 0.001, 0.02, 2.0, 0.97, 10)
        assert zero_attraction(10, dd) == 0.0
        assert zero_attraction(11, dd) == 0.001


class TestErrorMemory:
    """Tests for the recursive error-memory vector."""

    def test_single_step(self):
        """q(n) = gamma q(n-1) + e x."""
        q = error_memory_update(np.array([1.0, -1.0]), 0.5, np.array([2.0, 4.0]), 0.9)
        np.testing.assert_allclose(q, [1.9, 1.1])

    def test_matches_weighted_sum(self):
        """Ten recursive steps equal the full weighted history sum."""
        rng = np.random.default_rng(3)
        errors, regressors = rng.standard_normal(10), rng.standard_normal((10, 6))
        q = np.zeros(6)
        for n in range(1, 11):
            q = error_memory_update(q, errors[n - 1], regressors[n - 1], 0.97)
            brute = sum(0.97 ** l * errors[n - 1 - l] * regressors[n - 1 - l] for l in range(n))
            np.testing.assert_allclose(q, brute, rtol=1e-12, atol=0)

    def test_length_mismatch(self):
        """q and x must have the same length."""
        with pytest.raises(InvalidInputError):
            error_memory_update(np.zeros(3), 1.0, np.zeros(4), 0.97)


class TestAlgorithmConfig:
    """Tests for AlgorithmConfig and AlgorithmKind."""

    @pytest.mark.parametrize("text,kind", [
        ("lms", AlgorithmKind.LMS), ("RZA-LMS", AlgorithmKind.RZA),
        ("dd", AlgorithmKind.DDSAF), ("DD-SAF", AlgorithmKind.DDSAF), ("za_lms", AlgorithmKind.ZA),
    ])
    def test_parse(self, text, kind):
        """Kinds parse from curve names and short aliases."""
        assert AlgorithmKind.parse(text) is kind

    def test_parse_unknown(self):
        """Unknown names are a configuration error."""
        with pytest.raises(InvalidConfigurationError):
            AlgorithmKind.parse("nlms")

    def test_labels(self):
        """Curve names used in outputs."""
        assert [k.label for k in AlgorithmKind] == ["LMS", "ZA-LMS", "RZA-LMS", "DD-SAF"]

    @pytest.mark.parametrize("kwargs", [
        {"mu": 0.0}, {"mu": 0.01, "rho0": -1e-3}, {"mu": 0.01, "gamma_q": 1.0},
        {"mu": 0.01, "gamma_q": 0.0}, {"mu": 0.01, "n_warm": -1}, {"mu": 0.01, "beta_q": -2.0},
    ])
    def test_invalid(self, kwargs):
        """Out-of-range parameters are rejected at construction."""
        with pytest.raises(InvalidConfigurationError):
            AlgorithmConfig(AlgorithmKind.DDSAF, **kwargs)

    def test_with_step_size_keeps_ratio(self):
        """Changing mu scales rho0 so rho0 / mu is unchanged."""
        dd = AlgorithmConfig.ddsaf(0.01, 0.0028, 0.02, 2.0, 0.97, 200).with_step_size(0.005)
        assert dd.mu == 0.005
        assert dd.rho0 == pytest.approx(0.0014)
        assert dd.n_warm == 200


class TestFilterStep:
    """Tests for single-iteration updates."""

    def test_lms_step(self):
        """Hand-computed LMS update."""
        state = FilterState(w=np.array([0.5, -0.5]), q=np.zeros(2))
        new, e = filter_step(state, AlgorithmConfig.lms(0.1), np.array([1.0, 2.0]), 1.0)
        assert e == pytest.approx(1.5)
        np.testing.assert_allclose(new.w, [0.65, -0.2])
        assert new.n == 1
        assert state.w.tolist() == [0.5, -0.5]

    def test_rza_step(self):
        """Hand-computed RZA-LMS update including the attractor."""
        state = FilterState(w=np.array([1.0, 0.0]), q=np.zeros(2))
        new, e = filter_step(state, AlgorithmConfig.rza(0.1, 0.01, 1.0), np.array([1.0, 1.0]), 1.0)
        assert e == 0.0
        np.testing.assert_allclose(new.w, [1.0 - 0.01 * 0.5, 0.0])

    def test_ddsaf_step_updates_memory(self):
        """DD-SAF updates q with the current error and uses q(n) in the weight."""
        state = FilterState(w=np.array([1.0, -1.0]), q=np.array([0.5, 0.0]), n=5)
        config = AlgorithmConfig.ddsaf(0.1, 0.01, 0.0, 2.0, 0.9, 0)
        x = np.array([1.0, 1.0])
        new, e = filter_step(state, config, x, 2.0)
        assert e == 2.0
        np.testing.assert_allclose(new.q, [0.45 + 2.0, 2.0])
        expected_w = np.array([1.0, -1.0]) + 0.2 * x - 0.01 * np.array([1 / 2.0, -1.0])
        np.testing.assert_allclose(new.w, expected_w)

    def test_q_untouched_for_baselines(self):
        """Only DD-SAF maintains an error memory."""
        state = FilterState.initial(3)
        for config in (AlgorithmConfig.lms(0.1), AlgorithmConfig.rza(0.1, 0.01, 0.02)):
            new, _ = filter_step(state, config, np.ones(3), 1.0)
            assert np.all(new.q == 0.0)

    def test_regressor_mismatch(self):
        """Wrong regressor length is rejected."""
        with pytest.raises(InvalidInputError):
            filter_step(FilterState.initial(4), AlgorithmConfig.lms(0.1), np.ones(3), 0.0)

    def test_penalty_weights_per_kind(self):
        """s(n) is ones for LMS and ZA, the reweighted forms otherwise."""
        state = FilterState(w=np.array([2.0]), q=np.array([1.0]))
        assert penalty_weights(state, AlgorithmConfig.za(0.1, 0.1))[0] == 1.0
        assert penalty_weights(state, AlgorithmConfig.rza(0.1, 0.1, 0.5))[0] == pytest.approx(0.5)
        dd = AlgorithmConfig.ddsaf(0.1, 0.1, 0.5, 1.0, 0.97, 0)
        assert penalty_weights(state, dd)[0] == pytest.approx(1 / 3.0)

    @pytest.mark.parametrize("M", [8, 128, 1024])
    def test_multiplication_tallies(self, M):
        """2M, 3M, 4M, 6M multiplications per iteration."""
        configs = {
            2: AlgorithmConfig.lms(0.01),
            3: AlgorithmConfig.za(0.01, 1e-4),
            4: AlgorithmConfig.rza(0.01, 1e-4, 0.02),
            6: AlgorithmConfig.ddsaf(0.01, 1e-4, 0.02, 2.0, 0.97, 0),
        }
        for per_tap, config in configs.items():
            state = FilterState.initial(M)
            for _ in range(3):
                state, _ = filter_step(state, config, np.ones(M), 1.0)
            assert state.mult_count == 3 * per_tap * M


class TestReductions:
    """Bit-exact reductions between the variants."""

    def test_rho_zero_is_lms(self):
        """Every algorithm with rho0 = 0 reproduces LMS."""
        _, X, d = make_signals(10_000)
        lms = trajectory(AlgorithmConfig.lms(0.01), X, d)
        for config in (
            AlgorithmConfig.za(0.01, 0.0),
            AlgorithmConfig.rza(0.01, 0.0, 0.02),
            AlgorithmConfig.ddsaf(0.01, 0.0, 0.02, 2.0, 0.97, 200),
        ):
            assert np.array_equal(trajectory(config, X, d), lms)

    def test_ddsaf_without_memory_is_rza(self):
        """beta_q = 0, beta_w = eps, n_warm = 0 reproduces RZA-LMS."""
        _, X, d = make_signals(10_000)
        rza = trajectory(AlgorithmConfig.rza(0.01, 8e-4, 0.02), X, d)
        dd = trajectory(AlgorithmConfig.ddsaf(0.01, 8e-4, 0.02, 0.0, 0.97, 0), X, d)
        assert np.array_equal(dd, rza)

    def test_za_is_rza_without_reweighting(self):
        """ZA-LMS equals RZA-LMS with eps = 0."""
        _, X, d = make_signals(2000)
        za = trajectory(AlgorithmConfig.za(0.01, 8e-4), X, d)
        assert np.array_equal(za, trajectory(AlgorithmConfig.rza(0.01, 8e-4, 0.0), X, d))

    def test_warm_start_is_lms(self):
        """For n <= n_warm the DD-SAF weights are identical to LMS."""
        _, X, d = make_signals(400)
        dd = trajectory(AlgorithmConfig.ddsaf(0.01, 0.0028, 0.02, 2.0, 0.97, 200), X, d)
        lms = trajectory(AlgorithmConfig.lms(0.01), X, d)
        assert np.array_equal(dd[:201], lms[:201])
        assert not np.array_equal(dd[:203], lms[:203])

    def test_first_step_from_zero_is_lms(self):
        """From w = 0 the attractor is idle; sgn(0) = +1 breaks that."""
        _, X, d = make_signals(50)
        lms = trajectory(AlgorithmConfig.lms(0.01), X, d)
        rza = trajectory(AlgorithmConfig.rza(0.01, 8e-4, 0.02), X, d)
        broken = trajectory(AlgorithmConfig.rza(0.01, 8e-4, 0.02), X, d, sign=sgn_zero_is_one)
        assert np.array_equal(rza[:2], lms[:2])
        assert not np.array_equal(broken[:2], lms[:2])


class TestTrace:
    """Tests for the per-iteration trace dump."""

    def test_trace_round_trip(self, tmp_path):
        """Rows hold n, e, the active fraction and the pre-update w and q."""
        _, X, d = make_signals(5, M=4, blocks=((1, 2),))
        config = AlgorithmConfig.ddsaf(0.05, 1e-3, 0.02, 2.0, 0.97, 0)
        path = tmp_path / "trace.csv"
        states, errors = [], []
        with FilterTraceWriter(str(path), 4) as trace:
            state = FilterState.initial(4)
            for n in range(5):
                new, e = filter_step(state, config, X[n], d[n])
                trace.record(state, e)
                states.append(state)
                errors.append(e)
                state = new
        rows = read_trace(str(path))
        assert rows.shape == (5, 3 + 2 * 4)
        assert rows[:, 0].tolist() == [0, 1, 2, 3, 4]
        assert np.array_equal(rows[:, 1], errors)
        assert np.array_equal(rows[3, 3:7], states[3].w)
        assert np.array_equal(rows[3, 7:], states[3].q)
        assert rows[0, 2] == 0.0
        assert np.all((rows[:, 2] >= 0.0) & (rows[:, 2] <= 1.0))
