"""Closed-form statistics of the downlink under imperfect CSI: effective
channel, interference-plus-noise covariance, MSE matrices, the weighted sum
rate and its WMMSE surrogate, plus a Monte Carlo oracle for the covariance."""

import numpy as np

from .errors import ConfigurationError, NumericalError
from .types import BeamformingState, ChannelEstimates, ErrorModel

LOG2 = np.log(2.0)


def _logdet_hermitian(A: np.ndarray) -> float:
    """log-determinant of a Hermitian positive definite matrix (base e)."""
    try:
        L = np.linalg.cholesky(A)
    except np.linalg.LinAlgError as exc:
        raise NumericalError("matrix not positive definite in log-determinant") from exc
    return float(2.0 * np.sum(np.log(np.real(np.diag(L)))))


def effective_channel(est: ChannelEstimates, k: int, phi: np.ndarray) -> np.ndarray:
    """Composite estimated channel Hd^H + Hr^H diag(e^{j phi}) G (Nr x M)."""
    phi = np.asarray(phi, dtype=float)
    if not np.all(np.isfinite(phi)):
        raise ConfigurationError("phases must be finite")
    if phi.shape != (est.G_hat.shape[0],):
        raise ConfigurationError("phi length must equal the IRS element count")
    theta = np.exp(1j * phi)
    return est.Hd_hat[k].conj().T + est.Hr_hat[k].conj().T @ (theta[:, None] * est.G_hat)


def interference_noise_cov(
    est: ChannelEstimates, err: ErrorModel, state: BeamformingState, k: int
) -> np.ndarray:
    """Interference-plus-noise covariance J_k (Hermitian Nr x Nr).

    The phase matrix cancels inside every impairment term (unit modulus), so
    J_k depends on phi only through the effective channel of the interferers.
    """
    Hk = effective_channel(est, k, state.phi)
    Wt = state.W_tilde()
    tr_Wt = float(np.real(np.trace(Wt)))
    N = est.G_hat.shape[0]
    Nr = Hk.shape[0]

    J = np.zeros((Nr, Nr), dtype=complex)
    for i in range(state.K):
        if i == k:
            continue
        HW = Hk @ state.W[i]
        J += HW @ HW.conj().T
    Hr = est.Hr_hat[k]
    J += err.sigma2_g * tr_Wt * (Hr.conj().T @ Hr)
    alpha = (
        (err.sigma2_d[k] + N * err.sigma2_g * err.sigma2_r[k]) * tr_Wt
        + err.sigma2_r[k] * float(np.real(np.trace(est.G_hat @ Wt @ est.G_hat.conj().T)))
        + err.sigma2_n[k]
    )
    J += alpha * np.eye(Nr)
    return 0.5 * (J + J.conj().T)


def signal_plus_impairment_cov(
    est: ChannelEstimates, err: ErrorModel, state: BeamformingState, k: int
) -> np.ndarray:
    """Signal-plus-impairment covariance Q_k = J_k - sigma2_n I + Hk Wk Wk^H Hk^H."""
    Hk = effective_channel(est, k, state.phi)
    Wt = state.W_tilde()
    tr_Wt = float(np.real(np.trace(Wt)))
    N = est.G_hat.shape[0]
    Nr = Hk.shape[0]
    Hr = est.Hr_hat[k]

    Q = Hk @ Wt @ Hk.conj().T
    Q += err.sigma2_d[k] * tr_Wt * np.eye(Nr)
    Q += err.sigma2_g * tr_Wt * (Hr.conj().T @ Hr)
    Q += err.sigma2_r[k] * float(np.real(np.trace(est.G_hat @ Wt @ est.G_hat.conj().T))) * np.eye(Nr)
    Q += err.sigma2_g * err.sigma2_r[k] * N * tr_Wt * np.eye(Nr)
    return 0.5 * (Q + Q.conj().T)


def weighted_sum_rate(est: ChannelEstimates, err: ErrorModel, state: BeamformingState) -> float:
    """Weighted sum rate (bits/s/Hz) over all users given the estimates and
    the error statistics."""
    R = 0.0
    for k in range(state.K):
        Hk = effective_channel(est, k, state.phi)
        J = interference_noise_cov(est, err, state, k)
        HW = Hk @ state.W[k]
        S = HW @ HW.conj().T
        R += state.omega[k] * (_logdet_hermitian(J + S) - _logdet_hermitian(J)) / LOG2
    return float(R)


def mse_matrix(est: ChannelEstimates, err: ErrorModel, state: BeamformingState, k: int) -> np.ndarray:
    """MSE matrix E_k of user k's stream estimate under filter C_k."""
    Hk = effective_channel(est, k, state.phi)
    Q = signal_plus_impairment_cov(est, err, state, k)
    C, W = state.C[k], state.W[k]
    Ns = W.shape[1]
    E = (
        C.conj().T @ Q @ C
        - C.conj().T @ Hk @ W
        - W.conj().T @ Hk.conj().T @ C
        + err.sigma2_n[k] * (C.conj().T @ C)
        + np.eye(Ns)
    )
    return 0.5 * (E + E.conj().T)


def wmmse_objective(est: ChannelEstimates, err: ErrorModel, state: BeamformingState) -> float:
    """WMMSE surrogate f = sum_k tr(T_k E_k) - omega_k log2|T_k / omega_k|."""
    f = 0.0
    for k in range(state.K):
        E = mse_matrix(est, err, state, k)
        T = state.T[k]
        f += float(np.real(np.trace(T @ E)))
        f -= state.omega[k] * _logdet_hermitian(T / state.omega[k]) / LOG2
    return float(f)


def _sample_cscg(rng: np.random.Generator, shape, var: float) -> np.ndarray:
    if var == 0.0:
        return np.zeros(shape, dtype=complex)
    scale = np.sqrt(var / 2.0)
    return scale * (rng.standard_normal(shape) + 1j * rng.standard_normal(shape))


def monte_carlo_cov_oracle(
    est: ChannelEstimates,
    err: ErrorModel,
    state: BeamformingState,
    k: int,
    samples: int = 100_000,
    seed: int = 0,
    chunk: int = 4096,
) -> np.ndarray:
    """Sampled estimate of the interference-plus-noise covariance.

    Draws data symbols, estimation errors and noise, forms the interference
    term of the received signal and averages its outer product. Serves as the
    independent check of the closed-form covariance.
    """
    rng = np.random.default_rng(seed)
    K = state.K
    M, Ns = state.W[0].shape
    N, _ = est.G_hat.shape
    Nr = est.Hd_hat[k].shape[1]
    theta = np.exp(1j * state.phi)
    Hk = effective_channel(est, k, state.phi)
    HrkH = est.Hr_hat[k].conj().T            # Nr x N
    HrkH_theta = HrkH * theta[None, :]       # Hr^H Theta
    G = est.G_hat

    acc = np.zeros((Nr, Nr), dtype=complex)
    done = 0
    while done < samples:
        b = min(chunk, samples - done)
        s = _sample_cscg(rng, (b, K, Ns), 1.0)
        # x = sum_i W_i s_i per sample (b x M); interferers only for the Hk term
        x_all = np.zeros((b, M), dtype=complex)
        x_intf = np.zeros((b, M), dtype=complex)
        for i in range(K):
            xi = s[:, i, :] @ state.W[i].T
            x_all += xi
            if i != k:
                x_intf += xi

        dHd = _sample_cscg(rng, (b, M, Nr), err.sigma2_d[k])
        dHr = _sample_cscg(rng, (b, N, Nr), err.sigma2_r[k])
        dG = _sample_cscg(rng, (b, N, M), err.sigma2_g)
        noise = _sample_cscg(rng, (b, Nr), err.sigma2_n[k])

        n_k = x_intf @ Hk.T                                        # Hk x_intf
        n_k += np.einsum("bmr,bm->br", dHd.conj(), x_all)          # dHd^H x
        # Hr^H Theta dG x and dHr^H Theta (G + dG) x
        theta_Gx = (theta[:, None] * G) @ x_all.T                  # N x b
        dGx = np.einsum("bnm,bm->bn", dG, x_all)                   # dG x
        n_k += (HrkH_theta @ dGx.T).T
        n_k += np.einsum("bnr,bn->br", dHr.conj(), theta_Gx.T + theta[None, :] * dGx)
        n_k += noise

        acc += n_k.T @ n_k.conj()
        done += b
    cov = acc / samples
    return 0.5 * (cov + cov.conj().T)
