# Copyright (c) 2026 Pl4yer-ONE
# This file is part of DualTap.
# Licensed under GPLv3 or commercial license.

"""
Signal Model Tests
Seeded streams, sparse systems, input and noise processes, SNR calibration.
"""

import numpy as np
import pytest
from scipy.linalg import toeplitz

from src.errors import InvalidConfigurationError, InvalidInputError
from src.signal_model import (
    AR1Input,
    BernoulliGaussianNoise,
    Channel,
    GaussianNoise,
    SnrNoise,
    SystemSpec,
    TrialStream,
    WhiteInput,
    build_system,
    clean_output_power,
    desired_output,
    generate_sparse_system,
    input_sequence,
    next_input,
    next_noise,
    noise_sequence,
    regressor_matrix,
    resolve_noise,
    snr_to_noise_variance,
)

BLOCKS = ((20, 4), (70, 4))


@pytest.fixture
def system():
    return generate_sparse_system(128, BLOCKS, TrialStream(7, 0, Channel.SYSTEM))


class TestTrialStream:
    """Tests for the per-(seed, trial, channel) generators."""

    def test_same_triple_same_sequence(self):
        """Two streams with the same triple are bit-identical."""
        a = TrialStream(123, 4, Channel.NOISE).normal(1000)
        b = TrialStream(123, 4, Channel.NOISE).normal(1000)
        assert np.array_equal(a, b)

    @pytest.mark.parametrize("other", [(124, 4, Channel.NOISE), (123, 5, Channel.NOISE), (123, 4, Channel.INPUT)])
    def test_different_triple_different_sequence(self, other):
        """Changing the seed, the trial or the channel changes the stream."""
        a = TrialStream(123, 4, Channel.NOISE).normal(100)
        b = TrialStream(*other).normal(100)
        assert not np.array_equal(a, b)

    def test_for_channel(self):
        """for_channel keeps seed and trial."""
        stream = TrialStream(9, 2, Channel.INPUT).for_channel(Channel.PILOT_NOISE)
        assert np.array_equal(stream.normal(10), TrialStream(9, 2, Channel.PILOT_NOISE).normal(10))

    @pytest.mark.parametrize("seed", [-1, 2 ** 64])
    def test_seed_out_of_range(self, seed):
        """Seeds must fit an unsigned 64-bit integer."""
        with pytest.raises(InvalidConfigurationError):
            TrialStream(seed, 0)

    def test_negative_trial(self):
        """Trial indices start at 0."""
        with pytest.raises(InvalidConfigurationError):
            TrialStream(1, -1)

    def test_uniform_range(self):
        """Uniform draws lie in [0, 1)."""
        u = TrialStream(1, 0).uniform(10_000)
        assert u.min() >= 0.0 and u.max() < 1.0


class TestSparseSystem:
    """Tests for block-sparse system generation."""

    def test_active_set_and_norm(self, system):
        """Active taps are exactly the blocks; the vector has unit norm."""
        assert system.active_set == tuple(range(20, 24)) + tuple(range(70, 74))
        assert system.K == 8
        assert system.M == 128
        assert system.energy == pytest.approx(1.0, rel=1e-12)
        inactive = np.setdiff1d(np.arange(128), system.active_set)
        assert np.all(system.coefficients[inactive] == 0.0)
        assert np.all(system.active_values != 0.0)

    def test_same_stream_same_system(self):
        """Regeneration from the same stream is bit-identical."""
        a = generate_sparse_system(128, BLOCKS, TrialStream(7, 0, Channel.SYSTEM))
        b = generate_sparse_system(128, BLOCKS, TrialStream(7, 0, Channel.SYSTEM))
        assert np.array_equal(a.coefficients, b.coefficients)

    def test_unnormalized(self):
        """normalize=False keeps the raw Gaussian draws."""
        raw = generate_sparse_system(32, ((0, 3),), TrialStream(3, 0), normalize=False)
        expected = TrialStream(3, 0).normal(3)
        assert np.array_equal(raw.active_values, expected)

    def test_no_blocks(self):
        """No blocks gives the all-zero system."""
        empty = generate_sparse_system(16, (), TrialStream(1, 0))
        assert empty.K == 0
        assert np.all(empty.coefficients == 0.0)

    @pytest.mark.parametrize("blocks", [((20, 4), (22, 4)), ((126, 4),), ((-1, 2),), ((5, 0),)])
    def test_invalid_blocks(self, blocks):
        """Overlapping, out-of-range and empty blocks are rejected."""
        with pytest.raises(InvalidConfigurationError):
            generate_sparse_system(128, blocks, TrialStream(1, 0))

    def test_system_spec(self):
        """SystemSpec validates eagerly and builds the same system."""
        spec = SystemSpec(M=128, blocks=BLOCKS)
        assert spec.K == 8
        built = build_system(spec, TrialStream(7, 0, Channel.SYSTEM))
        direct = generate_sparse_system(128, BLOCKS, TrialStream(7, 0, Channel.SYSTEM))
        assert np.array_equal(built.coefficients, direct.coefficients)
        with pytest.raises(InvalidConfigurationError):
            SystemSpec(M=10, blocks=((8, 4),))


class TestObservation:
    """Tests for the regressor and desired-signal construction."""

    def test_desired_output(self, system):
        """d = w_o^T x + v."""
        x = TrialStream(1, 0).normal(128)
        assert desired_output(system, x, 0.5) == pytest.approx(float(system.coefficients @ x) + 0.5)

    def test_desired_output_length_mismatch(self, system):
        """A regressor of the wrong length is rejected."""
        with pytest.raises(InvalidInputError):
            desired_output(system, np.ones(127), 0.0)

    def test_regressor_rows(self):
        """Row n is [x(n), x(n-1), ..., x(n-M+1)] with zeros before the start."""
        X = regressor_matrix(np.arange(1.0, 6.0), 3)
        assert X.shape == (5, 3)
        assert X[0].tolist() == [1.0, 0.0, 0.0]
        assert X[1].tolist() == [2.0, 1.0, 0.0]
        assert X[4].tolist() == [5.0, 4.0, 3.0]


class TestInputs:
    """Tests for white and AR(1) inputs."""

    def test_white_variance(self):
        """White input has the requested variance."""
        x = input_sequence(WhiteInput(2.0), 200_000, TrialStream(1, 0))
        assert np.var(x) == pytest.approx(2.0, rel=0.02)

    def test_ar1_recursion(self):
        """AR(1) samples satisfy x(n) = rho x(n-1) + innovation(n)."""
        spec = AR1Input(rho=0.85, innovation_variance=0.7)
        x = input_sequence(spec, 1000, TrialStream(5, 1))
        innovations = np.sqrt(0.7) * TrialStream(5, 1).normal(1000)
        assert x[0] == pytest.approx(innovations[0])
        np.testing.assert_allclose(x[1:], 0.85 * x[:-1] + innovations[1:], rtol=1e-10, atol=1e-12)

    def test_ar1_stationary_variance(self):
        """Stationary variance is sigma^2 / (1 - rho^2)."""
        spec = AR1Input(rho=0.85, innovation_variance=0.7)
        assert spec.stationary_variance == pytest.approx(0.7 / (1 - 0.85 ** 2))
        x = input_sequence(spec, 1_000_000, TrialStream(2, 0))
        assert np.var(x[1000:]) == pytest.approx(spec.stationary_variance, rel=0.02)

    def test_next_input(self):
        """Single-sample AR(1) form applies the recursion to the given state."""
        spec = AR1Input(rho=0.5, innovation_variance=1.0)
        draw = TrialStream(3, 0).normal()
        assert next_input(spec, 2.0, TrialStream(3, 0)) == pytest.approx(1.0 + draw)
        assert next_input(WhiteInput(4.0), 9.9, TrialStream(3, 0)) == pytest.approx(2.0 * draw)

    @pytest.mark.parametrize("rho", [1.0, -1.0, 1.5])
    def test_ar1_unstable(self, rho):
        """|rho| >= 1 is rejected."""
        with pytest.raises(InvalidConfigurationError):
            AR1Input(rho=rho, innovation_variance=1.0)


class TestNoise:
    """Tests for Gaussian and Bernoulli-Gaussian noise."""

    def test_gaussian_variance(self):
        """Gaussian noise has the requested variance."""
        v = noise_sequence(GaussianNoise(0.25), 200_000, TrialStream(1, 0, Channel.NOISE))
        assert np.var(v) == pytest.approx(0.25, rel=0.02)

    def test_bernoulli_total_variance(self):
        """Mixture variance (1-p) + 100 p, scaled by global_scale^2."""
        spec = BernoulliGaussianNoise(spike_probability=0.2)
        assert spec.total_variance == pytest.approx(20.8)
        scaled = BernoulliGaussianNoise(spike_probability=0.2, global_scale=0.5)
        assert scaled.total_variance == pytest.approx(5.2)
        v = noise_sequence(spec, 1_000_000, TrialStream(4, 0, Channel.NOISE))
        assert np.var(v) == pytest.approx(20.8, rel=0.03)

    def test_bernoulli_no_spikes(self):
        """p = 0 reduces to background Gaussian noise."""
        v = noise_sequence(BernoulliGaussianNoise(0.0), 200_000, TrialStream(4, 0, Channel.NOISE))
        assert np.var(v) == pytest.approx(1.0, rel=0.02)
        assert abs(next_noise(BernoulliGaussianNoise(0.0), TrialStream(4, 1))) < 10.0

    def test_zero_probability_ignores_zero_uniform(self, monkeypatch):
        """With p = 0 a uniform draw of exactly 0.0 is still background noise."""
        spec = BernoulliGaussianNoise(0.0, spike_scale=1e6)
        stream = TrialStream(6, 0, Channel.NOISE)
        monkeypatch.setattr(stream, "uniform", lambda size=None: 0.0 if size is None else np.zeros(size))
        expected = TrialStream(6, 0, Channel.NOISE).normal(50)
        np.testing.assert_array_equal(noise_sequence(spec, 50, stream), expected)
        single = TrialStream(6, 1, Channel.NOISE)
        monkeypatch.setattr(single, "uniform", lambda size=None: 0.0)
        assert next_noise(spec, single) == TrialStream(6, 1, Channel.NOISE).normal()

    def test_block_draw_order(self):
        """noise_sequence draws every uniform, then every normal."""
        spec = BernoulliGaussianNoise(0.3, global_scale=2.0)
        reference = TrialStream(8, 0, Channel.NOISE)
        u, z = reference.uniform(200), reference.normal(200)
        expected = 2.0 * np.where(u < 0.3, 10.0, 1.0) * z
        np.testing.assert_allclose(noise_sequence(spec, 200, TrialStream(8, 0, Channel.NOISE)), expected, rtol=1e-15)

    def test_single_sample_draw_order(self):
        """next_noise draws one uniform, then one normal, per sample."""
        spec = BernoulliGaussianNoise(0.3)
        stream = TrialStream(8, 1, Channel.NOISE)
        reference = TrialStream(8, 1, Channel.NOISE)
        for _ in range(20):
            u, z = reference.uniform(), reference.normal()
            assert next_noise(spec, stream) == pytest.approx((10.0 if u < 0.3 else 1.0) * z, rel=1e-15)

    def test_invalid_probability(self):
        """Spike probability outside [0, 1] is rejected."""
        with pytest.raises(InvalidConfigurationError):
            BernoulliGaussianNoise(spike_probability=1.5)


class TestSnrCalibration:
    """Tests for noise variance from an SNR target."""

    def test_snr_to_noise_variance(self):
        """35 dB against unit power gives 10^-3.5."""
        assert snr_to_noise_variance(35.0, 1.0) == pytest.approx(10 ** -3.5)
        assert snr_to_noise_variance(0.0, 2.0) == pytest.approx(2.0)

    def test_zero_power(self):
        """Zero signal power cannot be calibrated."""
        with pytest.raises(InvalidInputError):
            snr_to_noise_variance(35.0, 0.0)

    def test_white_clean_power(self, system):
        """White input: power is sigma_x^2 ||w_o||^2."""
        assert clean_output_power(system, WhiteInput(2.0), TrialStream(1, 0)) == pytest.approx(2.0)

    def test_ar1_clean_power(self, system):
        """AR(1) input: pre-run power matches w_o^T R w_o."""
        spec = AR1Input(rho=0.85, innovation_variance=0.7)
        lags = spec.stationary_variance * 0.85 ** np.arange(128)
        expected = float(system.coefficients @ toeplitz(lags) @ system.coefficients)
        measured = clean_output_power(system, spec, TrialStream(1, 0, Channel.CALIBRATION), 200_000)
        assert measured == pytest.approx(expected, rel=0.1)

    def test_resolve_noise(self, system):
        """SnrNoise becomes GaussianNoise; concrete specs pass through."""
        resolved = resolve_noise(SnrNoise(35.0), system, WhiteInput(1.0), TrialStream(1, 0))
        assert isinstance(resolved, GaussianNoise)
        assert resolved.variance == pytest.approx(10 ** -3.5)
        impulsive = BernoulliGaussianNoise(0.2)
        assert resolve_noise(impulsive, system, WhiteInput(1.0), TrialStream(1, 0)) is impulsive
