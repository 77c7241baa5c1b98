import numpy as np
import pytest

from irsbf import (
    BeamformingState,
    ChannelEstimates,
    ConfigurationError,
    ErrorModel,
    SystemDims,
    effective_channel,
    interference_noise_cov,
    monte_carlo_cov_oracle,
    mse_matrix,
    signal_plus_impairment_cov,
    weighted_sum_rate,
    wmmse_objective,
)
from irsbf.active import optimal_receive_filter, optimal_weights

from conftest import random_instance


def scalar_setup(hd=1.0, hr=0.0, g=0.0, w=1.0, phi=0.0, noise=1.0, err=None):
    est = ChannelEstimates(np.array([[g]]), [np.array([[hd]])], [np.array([[hr]])])
    if err is None:
        err = ErrorModel.error_free(1, noise)
    state = BeamformingState(
        [np.array([[w]], dtype=complex)],
        [np.zeros((1, 1), dtype=complex)],
        [np.eye(1, dtype=complex)],
        np.array([phi]),
        np.ones(1),
    )
    return est, err, state


class TestEffectiveChannel:
    def test_zero_phases_is_plain_sum(self, instance):
        _, est, _, state, _ = instance
        N = est.G_hat.shape[0]
        H = effective_channel(est, 0, np.zeros(N))
        expected = est.Hd_hat[0].conj().T + est.Hr_hat[0].conj().T @ est.G_hat
        np.testing.assert_allclose(H, expected, atol=1e-14)

    def test_zero_G_leaves_direct_only(self, instance):
        _, est, _, state, rng = instance
        est0 = ChannelEstimates(np.zeros_like(est.G_hat), est.Hd_hat, est.Hr_hat)
        phi = rng.uniform(0, 2 * np.pi, est.G_hat.shape[0])
        np.testing.assert_allclose(
            effective_channel(est0, 1, phi), est.Hd_hat[1].conj().T, atol=1e-14
        )

    def test_scalar_destructive_interference(self):
        est, _, _ = scalar_setup(hr=1.0, g=1.0, phi=np.pi)
        H = effective_channel(est, 0, np.array([np.pi]))
        assert abs(H[0, 0]) < 1e-14

    def test_dimension_mismatch_raises(self, instance):
        _, est, _, _, _ = instance
        with pytest.raises(ConfigurationError):
            effective_channel(est, 0, np.zeros(3))


class TestCovariances:
    def test_single_user_error_free_is_noise_only(self):
        est, err, state = scalar_setup(noise=0.7)
        J = interference_noise_cov(est, err, state, 0)
        np.testing.assert_allclose(J, 0.7 * np.eye(1), atol=1e-14)

    def test_scalar_expansion(self):
        # J = p(s_g|hr|^2 + s_d + s_g s_r + s_r |g|^2) + noise
        hd, hr, g, w = 0.3, 1.2, 0.8, 0.9
        err = ErrorModel(0.03, (0.01,), (0.02,), (0.5,))
        est, _, state = scalar_setup(hd, hr, g, w)
        J = interference_noise_cov(est, err, state, 0)
        p = w ** 2
        expected = p * (0.03 * hr ** 2 + 0.01 + 0.03 * 0.02 + 0.02 * g ** 2) + 0.5
        np.testing.assert_allclose(J[0, 0].real, expected, rtol=1e-12)

    def test_hermitian_psd(self):
        for seed in range(20):
            _, est, err, state, _ = random_instance(seed)
            for k in range(2):
                for X in (interference_noise_cov(est, err, state, k),
                          signal_plus_impairment_cov(est, err, state, k)):
                    np.testing.assert_allclose(X, X.conj().T, atol=1e-12)
                    lo = np.linalg.eigvalsh(X)[0]
                    assert lo >= -1e-10 * np.linalg.norm(X)

    def test_consistency_identity(self):
        for seed in range(100):
            _, est, err, state, _ = random_instance(seed)
            for k in range(2):
                J = interference_noise_cov(est, err, state, k)
                Q = signal_plus_impairment_cov(est, err, state, k)
                Hk = effective_channel(est, k, state.phi)
                HW = Hk @ state.W[k]
                rhs = Q + err.sigma2_n[k] * np.eye(2) - HW @ HW.conj().T
                assert np.linalg.norm(J - rhs) <= 1e-10 * np.linalg.norm(J)

    def test_phase_invariance(self):
        _, est, err, state, rng = random_instance(3)
        J1 = interference_noise_cov(est, err, state, 0)
        state2 = state.copy()
        state2.phi = rng.uniform(0, 2 * np.pi, est.G_hat.shape[0])
        J2 = interference_noise_cov(est, err, state2, 0)
        # only the interference term moves with phi; impairment terms are invariant.
        # with K=1 worth of interferers zeroed the whole J is invariant:
        state.W[1] *= 0
        state2.W[1] *= 0
        J1 = interference_noise_cov(est, err, state, 0)
        J2 = interference_noise_cov(est, err, state2, 0)
        np.testing.assert_allclose(J1, J2, atol=1e-12 * np.linalg.norm(J1))

    def test_q_trivial_cases(self):
        _, est, err, state, _ = random_instance(5, K=1)
        err0 = ErrorModel.error_free(1, 0.1)
        Q = signal_plus_impairment_cov(est, err0, state, 0)
        Hk = effective_channel(est, 0, state.phi)
        HW = Hk @ state.W[0]
        np.testing.assert_allclose(Q, HW @ HW.conj().T, atol=1e-12)
        state.W = [np.zeros_like(state.W[0])]
        np.testing.assert_allclose(
            signal_plus_impairment_cov(est, err, state, 0), 0, atol=1e-14
        )


class TestMonteCarloOracle:
    def test_noise_only(self):
        _, est, _, state, _ = random_instance(7, K=1)
        err = ErrorModel.error_free(1, 0.4)
        cov = monte_carlo_cov_oracle(est, err, state, 0, samples=10_000, seed=11)
        rel = np.linalg.norm(cov - 0.4 * np.eye(2)) / np.linalg.norm(0.4 * np.eye(2))
        assert rel < 3.0 / np.sqrt(10_000) * 3

    def test_interference_only(self):
        _, est, _, state, _ = random_instance(8)
        err = ErrorModel.error_free(2, 0.05)
        Hk = effective_channel(est, 0, state.phi)
        HW = Hk @ state.W[1]
        expected = HW @ HW.conj().T + 0.05 * np.eye(2)
        cov = monte_carlo_cov_oracle(est, err, state, 0, samples=200_000, seed=12)
        assert np.linalg.norm(cov - expected) / np.linalg.norm(expected) < 0.05

    def test_matches_closed_form(self):
        _, est, err, state, _ = random_instance(9)
        J = interference_noise_cov(est, err, state, 0)
        cov = monte_carlo_cov_oracle(est, err, state, 0, samples=100_000, seed=13)
        assert np.linalg.norm(cov - J) / np.linalg.norm(J) < 0.05

    def test_seeded_reproducible(self):
        _, est, err, state, _ = random_instance(10)
        a = monte_carlo_cov_oracle(est, err, state, 0, samples=5_000, seed=1)
        b = monte_carlo_cov_oracle(est, err, state, 0, samples=5_000, seed=1)
        np.testing.assert_array_equal(a, b)


class TestRateAndObjective:
    def test_zero_precoders_zero_rate(self, instance):
        _, est, err, state, _ = instance
        state.W = [np.zeros_like(W) for W in state.W]
        assert weighted_sum_rate(est, err, state) == pytest.approx(0.0, abs=1e-12)

    def test_scalar_one_bit(self):
        # |hw|^2 = noise -> log2(2) = 1
        est, err, state = scalar_setup(hd=1.0, g=0.0, hr=0.0, w=1.0, noise=1.0)
        assert weighted_sum_rate(est, err, state) == pytest.approx(1.0, rel=1e-12)

    def test_rate_identity_with_optimal_filters(self):
        for seed in range(30):
            _, est, err, state, _ = random_instance(seed)
            for k in range(2):
                state.C[k] = optimal_receive_filter(est, err, state, k)
                E, T = optimal_weights(est, err, state, k)
                state.T[k] = T
            R = weighted_sum_rate(est, err, state)
            R2 = 0.0
            for k in range(2):
                E, _ = optimal_weights(est, err, state, k)
                _, ld = np.linalg.slogdet(np.linalg.inv(E))
                R2 += state.omega[k] * ld / np.log(2)
            assert abs(R - R2) <= 1e-8 * abs(R)

    def test_mse_matrix_trivial(self, instance):
        _, est, err, state, _ = instance
        state.C = [np.zeros_like(C) for C in state.C]
        np.testing.assert_allclose(mse_matrix(est, err, state, 0), np.eye(2), atol=1e-14)

    def test_scalar_mmse_filter_gives_half(self):
        est, err, state = scalar_setup()
        state.C = [np.array([[0.5]], dtype=complex)]
        assert mse_matrix(est, err, state, 0)[0, 0].real == pytest.approx(0.5)

    def test_filter_optimality_in_weighted_trace(self):
        _, est, err, state, rng = random_instance(12)
        k = 0
        state.C[k] = optimal_receive_filter(est, err, state, k)
        T = state.T[k]
        base = np.real(np.trace(T @ mse_matrix(est, err, state, k)))
        for _ in range(100):
            pert = state.copy()
            pert.C[k] = state.C[k] + 0.1 * (
                rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
            )
            val = np.real(np.trace(T @ mse_matrix(est, err, pert, k)))
            assert val >= base - 1e-10 * abs(base)

    def test_objective_trivial_value(self, instance):
        _, est, err, state, _ = instance
        # T_k = omega_k I and E_k = I  ->  f = sum_k omega_k Ns
        state.C = [np.zeros_like(C) for C in state.C]
        state.T = [state.omega[k] * np.eye(2) for k in range(2)]
        f = wmmse_objective(est, err, state)
        assert f == pytest.approx(sum(state.omega) * 2, rel=1e-12)

    def test_objective_complements_rate_at_optimum(self):
        _, est, err, state, _ = random_instance(14)
        for k in range(2):
            state.C[k] = optimal_receive_filter(est, err, state, k)
            _, state.T[k] = optimal_weights(est, err, state, k)
        f = wmmse_objective(est, err, state)
        R = weighted_sum_rate(est, err, state)
        Ns = 2
        assert f + R == pytest.approx(sum(state.omega) * Ns, rel=1e-8)

    def test_optimal_mse_eigenvalues_in_unit_interval(self):
        for seed in range(20):
            _, est, err, state, _ = random_instance(seed)
            for k in range(2):
                state.C[k] = optimal_receive_filter(est, err, state, k)
                E, _ = optimal_weights(est, err, state, k)
                eig = np.linalg.eigvalsh(E)
                assert np.all(eig > 0) and np.all(eig <= 1 + 1e-10)
