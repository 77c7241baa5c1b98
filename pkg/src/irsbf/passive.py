"""Phase-shift sub-problem: reduction to a quadratic form over unit-modulus
phases, the eigenvalue-majorizer (MM) and Taylor-surrogate (SCA) update
steps, phase quantization and a brute-force enumeration oracle."""

import itertools
from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError
from .types import BeamformingState, ChannelEstimates, ErrorModel, wrap_phases

DEGENERATE_COMPONENT = 1e-14
MAX_ORACLE_CANDIDATES = 10 ** 6


@dataclass(frozen=True)
class PassiveCoefficients:
    """Coefficient matrices of the phase quadratic h(phi) = e^H F e + 2Re{e^H d}."""

    A0: np.ndarray
    A1: np.ndarray
    a2: float
    B0: np.ndarray
    B1: np.ndarray
    D: np.ndarray
    F: np.ndarray
    d: np.ndarray

    @property
    def N(self) -> int:
        return self.F.shape[0]


def build_passive_coefficients(
    est: ChannelEstimates, err: ErrorModel, state: BeamformingState
) -> PassiveCoefficients:
    """Assemble the quadratic-form coefficients at the current filters,
    weights and precoders."""
    N = est.G_hat.shape[0]
    G = est.G_hat
    Wt = state.W_tilde()
    tr_Wt = float(np.real(np.trace(Wt)))
    GWtGH = G @ Wt @ G.conj().T

    A0 = np.zeros((N, N), dtype=complex)
    A1 = np.zeros((N, N), dtype=complex)
    B1 = np.zeros((N, N), dtype=complex)
    D = np.zeros((N, N), dtype=complex)
    a2 = 0.0
    for k in range(state.K):
        Hr, C, T, W = est.Hr_hat[k], state.C[k], state.T[k], state.W[k]
        HrCT = Hr @ C @ T
        HrCTCH = HrCT @ C.conj().T @ Hr.conj().T
        A0 += HrCTCH
        A1 += err.sigma2_g * tr_Wt * HrCTCH
        tr_TCC = float(np.real(np.trace(T @ C.conj().T @ C)))
        B1 += err.sigma2_r[k] * tr_TCC * GWtGH
        a2 += err.sigma2_g * err.sigma2_r[k] * tr_TCC * tr_Wt
        D += HrCT @ (C.conj().T @ est.Hd_hat[k].conj().T @ Wt @ G.conj().T
                     - W.conj().T @ G.conj().T)

    A0 = 0.5 * (A0 + A0.conj().T)
    A1 = 0.5 * (A1 + A1.conj().T)
    B0 = 0.5 * (GWtGH + GWtGH.conj().T)
    B1 = 0.5 * (B1 + B1.conj().T)
    F = A0 * B0.T + A1 * np.eye(N) + B1.T * np.eye(N) + a2 * np.eye(N)
    F = 0.5 * (F + F.conj().T)
    return PassiveCoefficients(A0, A1, float(a2), B0, B1, D, F, np.diag(D).copy())


def evaluate_h(coef: PassiveCoefficients, phi: np.ndarray) -> float:
    """Quadratic phase objective; real by construction."""
    e = np.exp(1j * np.asarray(phi, dtype=float))
    val = e.conj() @ coef.F @ e + 2.0 * np.real(e.conj() @ coef.d)
    return float(np.real(val))


def gradient_h(coef: PassiveCoefficients, phi: np.ndarray) -> np.ndarray:
    """Gradient of h with respect to the phase vector."""
    phi = np.asarray(phi, dtype=float)
    e = np.exp(1j * phi)
    return 2.0 * np.real(-1j * np.conj(e) * (coef.F @ e + coef.d))


def max_majorizer_eigenvalue(coef: PassiveCoefficients) -> float:
    """Largest eigenvalue of F (dense Hermitian eigensolver)."""
    return float(np.linalg.eigvalsh(coef.F)[-1])


def mm_surrogate(coef: PassiveCoefficients, phi: np.ndarray, phi_r: np.ndarray, mu=None) -> float:
    """Majorizing surrogate of h anchored at phi_r; equals h at phi = phi_r."""
    if mu is None:
        mu = max_majorizer_eigenvalue(coef)
    e = np.exp(1j * np.asarray(phi, dtype=float))
    e_r = np.exp(1j * np.asarray(phi_r, dtype=float))
    M = mu * np.eye(coef.N) - coef.F
    val = (
        mu * coef.N
        + np.real(e_r.conj() @ M @ e_r)
        - 2.0 * np.real(e.conj() @ (M @ e_r))
        + 2.0 * np.real(e.conj() @ coef.d)
    )
    return float(val)


def mm_update(coef: PassiveCoefficients, phi_r: np.ndarray) -> np.ndarray:
    """One majorization-minimization step; never increases h."""
    phi_r = np.asarray(phi_r, dtype=float)
    mu = max_majorizer_eigenvalue(coef)
    e_r = np.exp(1j * phi_r)
    z = (mu * np.eye(coef.N) - coef.F) @ e_r - coef.d
    phi_next = np.angle(z)
    degenerate = np.abs(z) < DEGENERATE_COMPONENT
    phi_next[degenerate] = phi_r[degenerate]
    return wrap_phases(phi_next)


def sca_update(
    coef: PassiveCoefficients,
    phi_r: np.ndarray,
    beta0: float | None = None,
    c: float = 0.25,
    max_backtracks: int = 40,
) -> tuple:
    """One gradient step on h with Armijo-selected curvature beta_r.

    Returns (phi_next, beta_r, stalled); stalled means backtracking was
    exhausted and the phases are returned unchanged.
    """
    phi_r = wrap_phases(phi_r)
    grad = gradient_h(coef, phi_r)
    gnorm2 = float(grad @ grad)
    if beta0 is None:
        mu = max_majorizer_eigenvalue(coef)
        beta0 = mu if mu > 1e-12 else 1.0
    if gnorm2 == 0.0:
        return phi_r, beta0, False
    h_r = evaluate_h(coef, phi_r)
    beta = beta0
    for _ in range(max_backtracks + 1):
        phi_new = wrap_phases(phi_r - grad / beta)
        if evaluate_h(coef, phi_new) <= h_r - (c / beta) * gnorm2:
            return phi_new, beta, False
        beta *= 2.0
    return phi_r, beta, True


def quantize_phases(phi: np.ndarray, B: int) -> np.ndarray:
    """Round each phase to the nearest B-bit alphabet point under circular
    distance. B = 0 is the continuous mode and returns the input unchanged."""
    phi = wrap_phases(phi)
    if B == 0:
        return phi
    L = 2 ** B
    step = 2.0 * np.pi / L
    return wrap_phases(np.round(phi / step) * step)


def exhaustive_phase_oracle(coef: PassiveCoefficients, B: int) -> tuple:
    """Global minimizer of h over the discrete alphabet by enumeration.

    Intended for tiny problems; refuses when the candidate count exceeds
    10^6. Ties break toward the lexicographically smallest phase tuple.
    """
    if B < 1:
        raise ConfigurationError("oracle requires a discrete alphabet (B >= 1)")
    L = 2 ** B
    N = coef.N
    if L ** N > MAX_ORACLE_CANDIDATES:
        raise ConfigurationError("search space too large for exhaustive enumeration")
    alphabet = 2.0 * np.pi * np.arange(L) / L
    best_phi, best_h = None, np.inf
    for combo in itertools.product(alphabet, repeat=N):
        phi = np.asarray(combo)
        h = evaluate_h(coef, phi)
        if h < best_h:
            best_phi, best_h = phi, h
    return best_phi, float(best_h)
