"""Transmit-side sub-problem: closed-form receive filters and weight
matrices, Lagrangian precoders and bisection on the dual variable enforcing
the transmit power budget."""

from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError, NumericalError
from .model import effective_channel, signal_plus_impairment_cov
from .types import BeamformingState, ChannelEstimates, ErrorModel

POWER_REL_TOL = 1e-6
BRACKET_REL_TOL = 1e-12
MAX_BRACKET_DOUBLINGS = 60


@dataclass(frozen=True)
class DualSolveReport:
    lambda_star: float
    power_used: float
    iterations: int
    bracket: tuple


def optimal_receive_filter(
    est: ChannelEstimates, err: ErrorModel, state: BeamformingState, k: int
) -> np.ndarray:
    """MMSE receive filter C_k = (Q_k + sigma2_n I)^{-1} Hk W_k."""
    Hk = effective_channel(est, k, state.phi)
    Q = signal_plus_impairment_cov(est, err, state, k)
    Nr = Q.shape[0]
    A = Q + err.sigma2_n[k] * np.eye(Nr)
    try:
        return np.linalg.solve(A, Hk @ state.W[k])
    except np.linalg.LinAlgError as exc:
        raise NumericalError("singular system in receive-filter update") from exc


def optimal_weights(
    est: ChannelEstimates, err: ErrorModel, state: BeamformingState, k: int
) -> tuple:
    """Optimal MSE matrix E_k = I - W_k^H Hk^H C_k and weight T_k = omega_k E_k^{-1}."""
    Hk = effective_channel(est, k, state.phi)
    W, C = state.W[k], state.C[k]
    Ns = W.shape[1]
    E = np.eye(Ns) - W.conj().T @ Hk.conj().T @ C
    E = 0.5 * (E + E.conj().T)
    try:
        T = state.omega[k] * np.linalg.inv(E)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"MSE matrix of user {k} numerically singular") from exc
    return E, 0.5 * (T + T.conj().T)


def _system_matrix(est: ChannelEstimates, err: ErrorModel, filters, weights, phi) -> np.ndarray:
    """Common M x M matrix bracketed in the precoder solution; shared by all users."""
    M = est.G_hat.shape[1]
    N = est.G_hat.shape[0]
    GHG = est.G_hat.conj().T @ est.G_hat
    S = np.zeros((M, M), dtype=complex)
    for i in range(len(filters)):
        Hi = effective_channel(est, i, phi)
        Ci, Ti = filters[i], weights[i]
        HC = Hi.conj().T @ Ci
        S += HC @ Ti @ HC.conj().T
        tr_TCC = float(np.real(np.trace(Ti @ Ci.conj().T @ Ci)))
        Hri_C = est.Hr_hat[i] @ Ci
        tr_TCHH = float(np.real(np.trace(Ti @ Hri_C.conj().T @ Hri_C)))
        S += err.sigma2_d[i] * tr_TCC * np.eye(M)
        S += err.sigma2_g * tr_TCHH * np.eye(M)
        S += err.sigma2_r[i] * tr_TCC * GHG
        S += err.sigma2_g * err.sigma2_r[i] * N * tr_TCC * np.eye(M)
    return 0.5 * (S + S.conj().T)


def precoders_for_dual(
    est: ChannelEstimates,
    err: ErrorModel,
    filters,
    weights,
    phi,
    lam: float,
) -> list:
    """Precoders W_k(lambda); the shared system matrix is factored once."""
    if lam < 0:
        raise ConfigurationError("dual variable must be nonnegative")
    S = _system_matrix(est, err, filters, weights, phi)
    M = S.shape[0]
    A = S + lam * np.eye(M)
    rhs = [
        effective_channel(est, k, phi).conj().T @ filters[k] @ weights[k]
        for k in range(len(filters))
    ]
    B = np.concatenate(rhs, axis=1)
    try:
        X = np.linalg.solve(A, B)
    except np.linalg.LinAlgError:
        # rank-deficient at lambda = 0 in error-free corner cases
        ridge = 1e-12 * max(float(np.real(np.trace(A))), 1.0) / M
        X = np.linalg.solve(A + ridge * np.eye(M), B)
    out, col = [], 0
    for r in rhs:
        out.append(X[:, col:col + r.shape[1]])
        col += r.shape[1]
    return out


def _total_power(W_list) -> float:
    return float(sum(np.linalg.norm(W) ** 2 for W in W_list))


def solve_power_dual(
    est: ChannelEstimates,
    err: ErrorModel,
    filters,
    weights,
    phi,
    P_t: float,
) -> tuple:
    """Bisect on the dual variable until the power budget binds (or lambda = 0).

    power(lambda) is non-increasing, so a doubling search brackets the root
    and bisection pins it down.
    """
    if P_t <= 0:
        raise ConfigurationError("transmit power budget must be positive")

    W0 = precoders_for_dual(est, err, filters, weights, phi, 0.0)
    p0 = _total_power(W0)
    if p0 <= P_t:
        return DualSolveReport(0.0, p0, 0, (0.0, 0.0)), W0

    lam_lo, lam_hi = 0.0, 1.0
    W_hi = precoders_for_dual(est, err, filters, weights, phi, lam_hi)
    doublings = 0
    while _total_power(W_hi) > P_t:
        lam_lo = lam_hi
        lam_hi *= 2.0
        doublings += 1
        if doublings > MAX_BRACKET_DOUBLINGS:
            raise ConfigurationError("could not bracket the power dual (pathological scales)")
        W_hi = precoders_for_dual(est, err, filters, weights, phi, lam_hi)

    iterations = doublings
    lam, W = lam_hi, W_hi
    power = _total_power(W)
    while True:
        mid = 0.5 * (lam_lo + lam_hi)
        W_mid = precoders_for_dual(est, err, filters, weights, phi, mid)
        p_mid = _total_power(W_mid)
        iterations += 1
        if p_mid > P_t:
            lam_lo = mid
        else:
            lam_hi = mid
            lam, W, power = mid, W_mid, p_mid
        if abs(p_mid - P_t) / P_t <= POWER_REL_TOL:
            lam, W, power = mid, W_mid, p_mid
            break
        if lam_hi - lam_lo <= BRACKET_REL_TOL * lam_hi:
            break

    if power > P_t * (1.0 + POWER_REL_TOL):
        # keep the feasible endpoint
        W = precoders_for_dual(est, err, filters, weights, phi, lam_hi)
        lam, power = lam_hi, _total_power(W)
    return DualSolveReport(lam, power, iterations, (lam_lo, lam_hi)), W


def lagrangian_value(
    est: ChannelEstimates,
    err: ErrorModel,
    state: BeamformingState,
    lam: float,
    P_t: float,
) -> float:
    """Lagrangian of the precoder sub-problem at fixed filters and weights.

    Used by tests for stationarity checks of the closed-form precoder.
    """
    val = lam * (state.total_power() - P_t)
    for k in range(state.K):
        Hk = effective_channel(est, k, state.phi)
        Q = signal_plus_impairment_cov(est, err, state, k)
        C, T, W = state.C[k], state.T[k], state.W[k]
        val += float(np.real(np.trace(T @ C.conj().T @ Q @ C)))
        val -= 2.0 * float(np.real(np.trace(T @ C.conj().T @ Hk @ W)))
    return float(val)
