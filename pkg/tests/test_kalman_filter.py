"""
Tests for the Kalman predict/update engine and NIS gating
"""
import numpy as np
import pytest

from backend.models.fusion_config import InitializationConfig, NoiseConfig
from backend.models.measurement import Modality
from backend.tracking.kalman_filter import (
    FilterState,
    GateDecision,
    UpdateKind,
    chi2_threshold,
    gate,
    initialize,
    nis,
    predict,
    update,
)
from backend.tracking.motion_model import STATE_DIM, cv_transition, measurement_matrix
from backend.utils.errors import ConfigError, InputDomainError, NumericalDegeneracyError, OrderingError


def _state(estimate=None, covariance=None, t=0.0):
    estimate = np.zeros(STATE_DIM) if estimate is None else np.asarray(estimate, dtype=float)
    covariance = np.eye(STATE_DIM) if covariance is None else np.asarray(covariance, dtype=float)
    return FilterState(estimate=estimate, covariance=covariance, timestamp=t)


def _radar_noise(variance=1.0, sigma_a=1.0):
    return NoiseConfig(
        sigma_a=sigma_a,
        r_radar=(variance * np.eye(3)).tolist(),
        r_rf=(variance * np.eye(2)).tolist(),
    )


class TestPredict:

    def test_zero_dt_returns_same_state(self):
        fs = _state()
        assert predict(fs, 0.0, NoiseConfig()) is fs

    def test_constant_velocity_propagation(self):
        fs = predict(_state([0, 0, 0, 10, 0, 0], t=1.0), 2.0, NoiseConfig())
        assert np.allclose(fs.position, [20.0, 0.0, 0.0])
        assert np.allclose(fs.velocity, [10.0, 0.0, 0.0])
        assert fs.timestamp == pytest.approx(3.0)

    def test_identity_covariance_growth(self):
        fs = predict(_state(), 1.0, NoiseConfig(sigma_a=1.0))
        for axis in range(3):
            assert fs.covariance[axis, axis] == pytest.approx(2.25)
            assert fs.covariance[axis + 3, axis + 3] == pytest.approx(2.0)
            assert fs.covariance[axis, axis + 3] == pytest.approx(1.5)

    def test_backwards_is_ordering_error(self):
        with pytest.raises(OrderingError):
            predict(_state(), -0.5, NoiseConfig())


class TestNisAndGate:

    def test_nis_examples(self):
        assert nis(np.zeros(2), np.eye(2)) == 0.0
        assert nis(np.array([3.0, 0.0]), np.eye(2)) == pytest.approx(9.0)
        assert nis(np.array([1.0, 1.0]), np.diag([1.0, 4.0])) == pytest.approx(1.25)

    def test_singular_innovation_covariance(self):
        with pytest.raises(NumericalDegeneracyError):
            nis(np.array([1.0, 0.0]), np.array([[1.0, 1.0], [1.0, 1.0]]))

    @pytest.mark.parametrize("dim,expected", [(2, 5.991465), (3, 7.814728)])
    def test_chi2_thresholds(self, dim, expected):
        assert chi2_threshold(dim, 0.95) == pytest.approx(expected, abs=1e-6)

    def test_threshold_vanishes_at_low_confidence(self):
        assert 0.0 < chi2_threshold(2, 1e-9) < 1e-6

    @pytest.mark.parametrize("confidence", [0.0, 1.0, 1.5])
    def test_bad_confidence(self, confidence):
        with pytest.raises(ConfigError):
            chi2_threshold(2, confidence)

    def test_bad_dimension(self):
        with pytest.raises(InputDomainError):
            chi2_threshold(4, 0.95)

    def test_gate_examples(self):
        assert gate(0.0, 2, 0.95) is GateDecision.ACCEPT
        assert gate(0.0, 3, 0.95) is GateDecision.ACCEPT
        assert gate(9.0, 2, 0.95) is GateDecision.REJECT
        assert gate(7.0, 3, 0.95) is GateDecision.ACCEPT


class TestUpdate:

    def test_scalar_reducible_case(self):
        fs = _state([5.0, 0, 0, 0, 0, 0])
        posterior, outcome = update(fs, [7.0, 0.0, 0.0], Modality.RADAR_3D, _radar_noise(1.0))
        assert outcome.kind is UpdateKind.UPDATED
        assert posterior.estimate[0] == pytest.approx(6.0)
        assert posterior.covariance[0, 0] == pytest.approx(0.5)

    def test_huge_noise_leaves_prior(self):
        fs = _state([1.0, 2.0, 3.0, 0.1, 0.2, 0.3], 4.0 * np.eye(STATE_DIM))
        posterior, _ = update(fs, [100.0, -50.0, 20.0], Modality.RADAR_3D, _radar_noise(1e12))
        assert np.allclose(posterior.estimate, fs.estimate, rtol=1e-6, atol=1e-6)
        assert np.allclose(posterior.covariance, fs.covariance, rtol=1e-6)

    def test_rf_update_leaves_altitude(self):
        fs = _state([0, 0, 50.0, 0, 0, 0], np.diag([9.0, 9.0, 16.0, 1.0, 1.0, 1.0]))
        posterior, outcome = update(fs, [3.0, -3.0], Modality.RF_2D, _radar_noise(9.0))
        assert outcome.kind is UpdateKind.UPDATED
        assert posterior.estimate[2] == 50.0
        assert posterior.covariance[2, 2] == 16.0
        assert posterior.estimate[0] == pytest.approx(1.5)

    def test_posterior_variance_not_above_prior(self):
        rng = np.random.default_rng(5)
        a = rng.normal(size=(STATE_DIM, STATE_DIM))
        fs = _state(rng.normal(size=STATE_DIM), a @ a.T + np.eye(STATE_DIM))
        posterior, _ = update(fs, rng.normal(size=3), Modality.RADAR_3D, NoiseConfig())
        for i in range(3):
            assert posterior.covariance[i, i] <= fs.covariance[i, i]

    def test_dimension_mismatch(self):
        with pytest.raises(InputDomainError):
            update(_state(), [1.0, 2.0], Modality.RADAR_3D, NoiseConfig())

    def test_degenerate_innovation_covariance(self):
        covariance = np.eye(STATE_DIM)
        covariance[0:3, 0:3] = -np.eye(3)
        with pytest.raises(NumericalDegeneracyError):
            update(_state(covariance=covariance), [0.0, 0.0, 0.0], Modality.RADAR_3D, _radar_noise(1.0))

    def test_rejected_measurement_leaves_state_untouched(self):
        fs = _state()
        posterior, outcome = update(fs, [100.0, 0.0, 0.0], Modality.RADAR_3D, _radar_noise(1.0), gate_confidence=0.95)
        assert outcome.kind is UpdateKind.REJECTED_BY_GATE
        assert outcome.nis_value == pytest.approx(5000.0)
        assert posterior is fs

    def test_covariance_stays_symmetric_psd(self):
        rng = np.random.default_rng(11)
        noise = NoiseConfig()
        fs = _state(covariance=100.0 * np.eye(STATE_DIM))
        for _ in range(10_000):
            fs = predict(fs, float(rng.uniform(0.0, 4.0)), noise)
            if rng.uniform() < 0.5:
                fs, _ = update(fs, fs.position + rng.normal(0.0, 15.0, 3), Modality.RADAR_3D, noise)
            else:
                fs, _ = update(fs, fs.position[:2] + rng.normal(0.0, 20.0, 2), Modality.RF_2D, noise)
            assert np.array_equal(fs.covariance, fs.covariance.T)
        assert np.min(np.linalg.eigvalsh(fs.covariance)) >= -1e-9 * np.trace(fs.covariance)


class TestInitialize:

    def test_radar_seed(self):
        fs = initialize([10.0, 20.0, 30.0], Modality.RADAR_3D, NoiseConfig(), 4.0)
        assert np.array_equal(fs.estimate, [10.0, 20.0, 30.0, 0.0, 0.0, 0.0])
        assert fs.timestamp == 4.0
        assert np.allclose(fs.covariance[0:3, 0:3], 10.0 * np.asarray(NoiseConfig().r_radar))
        assert np.allclose(fs.covariance[3:6, 3:6], 100.0 * np.eye(3))

    def test_rf_seed_uses_default_altitude(self):
        fs = initialize([10.0, 20.0], Modality.RF_2D, NoiseConfig(), 0.0)
        assert np.array_equal(fs.estimate, [10.0, 20.0, 0.0, 0.0, 0.0, 0.0])
        assert fs.covariance[2, 2] == pytest.approx(1.0e4)

    def test_rf_seed_custom_altitude(self):
        init = InitializationConfig(default_altitude_m=60.0)
        fs = initialize([0.0, 0.0], Modality.RF_2D, NoiseConfig(), 0.0, init)
        assert fs.estimate[2] == 60.0

    def test_first_follow_up_passes_gate_for_stationary_target(self):
        rng = np.random.default_rng(8)
        noise = NoiseConfig()
        r = np.asarray(noise.r_radar)
        chol = np.linalg.cholesky(r)
        target = np.array([300.0, 400.0, 60.0])
        passed = 0
        for _ in range(200):
            fs = initialize(target + chol @ rng.normal(size=3), Modality.RADAR_3D, noise, 0.0)
            fs = predict(fs, 0.25, noise)
            _, outcome = update(fs, target + chol @ rng.normal(size=3), Modality.RADAR_3D, noise, 0.95)
            passed += outcome.kind is UpdateKind.UPDATED
        assert passed >= 195


def test_matches_weighted_least_squares_batch():
    """A near-deterministic CV track filtered without gating equals the batch WLS solution."""
    rng = np.random.default_rng(21)
    noise = NoiseConfig(sigma_a=1e-9, r_radar=np.diag([4.0, 9.0, 16.0]).tolist(), r_rf=np.diag([25.0, 36.0]).tolist())
    prior_mean = np.array([0.0, 0.0, 50.0, 3.0, -2.0, 0.0])
    prior_cov = np.diag([100.0, 100.0, 100.0, 10.0, 10.0, 10.0])
    truth = np.array([2.0, -1.0, 52.0, 3.5, -2.5, 0.1])

    times = np.cumsum(rng.uniform(0.1, 1.0, 50))
    modalities = [Modality.RADAR_3D if i % 3 else Modality.RF_2D for i in range(len(times))]

    fs = FilterState(estimate=prior_mean, covariance=prior_cov, timestamp=0.0)
    rows, rhs, weights = [], [], []
    for t, modality in zip(times, modalities):
        h = measurement_matrix(modality) @ cv_transition(float(t))
        r = noise.measurement_covariance(modality)
        z = h @ truth + np.linalg.cholesky(r) @ rng.normal(size=modality.dim)
        fs = predict(fs, float(t) - fs.timestamp, noise)
        fs, outcome = update(fs, z, modality, noise)
        assert outcome.kind is UpdateKind.UPDATED
        rows.append(h)
        rhs.append(z)
        weights.append(np.linalg.inv(r))

    # information form with the prior as a pseudo-measurement
    info = np.linalg.inv(prior_cov)
    vec = info @ prior_mean
    for h, z, w in zip(rows, rhs, weights):
        info = info + h.T @ w @ h
        vec = vec + h.T @ w @ z
    batch_cov = np.linalg.inv(info)
    batch_initial = batch_cov @ vec

    f_end = cv_transition(float(times[-1]))
    batch_estimate = f_end @ batch_initial
    batch_covariance = f_end @ batch_cov @ f_end.T
    assert len(times) == 50
    assert np.linalg.norm(fs.estimate - batch_estimate) <= 1e-8 * np.linalg.norm(batch_estimate)
    assert np.linalg.norm(fs.covariance - batch_covariance) <= 1e-7 * np.linalg.norm(batch_covariance)


def test_nis_acceptance_matches_confidence():
    """Simulated noise matching the filter model passes a 95% gate 95% of the time."""
    rng = np.random.default_rng(1234)
    sigma_a = 0.5
    noise = NoiseConfig(sigma_a=sigma_a)
    r = np.asarray(noise.r_radar)
    r_chol = np.linalg.cholesky(r)
    dt = 0.25

    prior_cov = np.diag([100.0, 100.0, 100.0, 4.0, 4.0, 4.0])
    truth = np.linalg.cholesky(prior_cov) @ rng.normal(size=STATE_DIM)
    fs = FilterState(estimate=np.zeros(STATE_DIM), covariance=prior_cov, timestamp=0.0)
    f = cv_transition(dt)

    accepted = 0
    nis_values = []
    n_updates = 6000
    for _ in range(n_updates):
        accel = rng.normal(0.0, sigma_a, 3)
        truth = f @ truth
        truth[0:3] += 0.5 * dt ** 2 * accel
        truth[3:6] += dt * accel
        z = truth[0:3] + r_chol @ rng.normal(size=3)
        fs = predict(fs, dt, noise)
        fs, outcome = update(fs, z, Modality.RADAR_3D, noise)
        nis_values.append(outcome.nis_value)
        accepted += gate(outcome.nis_value, 3, 0.95) is GateDecision.ACCEPT

    assert accepted / n_updates == pytest.approx(0.95, abs=0.02)
    assert np.mean(nis_values) == pytest.approx(3.0, abs=0.2)
