"""Domain types: system dimensions, channel estimates, error statistics and
the beamforming variables updated by the alternating optimizer."""

from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigurationError


@dataclass(frozen=True)
class SystemDims:
    """Antenna/element counts and the phase-shifter resolution.

    B = 0 means continuous phases; otherwise each phase lives on the
    L = 2^B point uniform grid over [0, 2pi).
    """

    M: int
    N: int
    Nr: int
    K: int
    Ns: int
    B: int = 0

    def __post_init__(self):
        for name in ("M", "N", "Nr", "K", "Ns"):
            if getattr(self, name) < 1:
                raise ConfigurationError(f"{name} must be >= 1")
        if self.Ns > min(self.M, self.Nr):
            raise ConfigurationError("Ns must not exceed min(M, Nr)")
        if self.B < 0:
            raise ConfigurationError("B must be >= 0")

    @property
    def L(self) -> int:
        """Alphabet size; only meaningful when B > 0."""
        return 2 ** self.B


@dataclass(frozen=True)
class ChannelEstimates:
    """Estimated channels: BS-IRS (N x M), per-user direct (M x Nr) and
    IRS-user (N x Nr) links."""

    G_hat: np.ndarray
    Hd_hat: tuple
    Hr_hat: tuple

    def __post_init__(self):
        object.__setattr__(self, "Hd_hat", tuple(np.asarray(H, dtype=complex) for H in self.Hd_hat))
        object.__setattr__(self, "Hr_hat", tuple(np.asarray(H, dtype=complex) for H in self.Hr_hat))
        object.__setattr__(self, "G_hat", np.asarray(self.G_hat, dtype=complex))

    @property
    def K(self) -> int:
        return len(self.Hd_hat)

    def validate(self, dims: SystemDims):
        if self.G_hat.shape != (dims.N, dims.M):
            raise ConfigurationError(f"G_hat shape {self.G_hat.shape} != {(dims.N, dims.M)}")
        if len(self.Hd_hat) != dims.K or len(self.Hr_hat) != dims.K:
            raise ConfigurationError("per-user channel list length != K")
        for k in range(dims.K):
            if self.Hd_hat[k].shape != (dims.M, dims.Nr):
                raise ConfigurationError(f"Hd_hat[{k}] shape mismatch")
            if self.Hr_hat[k].shape != (dims.N, dims.Nr):
                raise ConfigurationError(f"Hr_hat[{k}] shape mismatch")
        for arr in (self.G_hat, *self.Hd_hat, *self.Hr_hat):
            if not np.all(np.isfinite(arr)):
                raise ConfigurationError("channel estimate contains non-finite entries")


@dataclass(frozen=True)
class ErrorModel:
    """Per-entry estimation-error variances and receiver noise powers.

    All values are linear powers in milliwatts (noise) or dimensionless
    per-entry variances (errors).
    """

    sigma2_g: float
    sigma2_d: tuple
    sigma2_r: tuple
    sigma2_n: tuple

    def __post_init__(self):
        object.__setattr__(self, "sigma2_d", tuple(float(v) for v in self.sigma2_d))
        object.__setattr__(self, "sigma2_r", tuple(float(v) for v in self.sigma2_r))
        object.__setattr__(self, "sigma2_n", tuple(float(v) for v in self.sigma2_n))
        if self.sigma2_g < 0 or any(v < 0 for v in self.sigma2_d + self.sigma2_r + self.sigma2_n):
            raise ConfigurationError("variances must be nonnegative")

    @classmethod
    def error_free(cls, K: int, sigma2_n: float = 1.0) -> "ErrorModel":
        return cls(0.0, (0.0,) * K, (0.0,) * K, (sigma2_n,) * K)


@dataclass
class BeamformingState:
    """All variables of the alternating optimization.

    W[k]: M x Ns precoders; C[k]: Nr x Ns receive filters; T[k]: Ns x Ns
    Hermitian PSD weight matrices; phi: length-N phase vector in [0, 2pi);
    omega[k]: positive rate weights.
    """

    W: list
    C: list
    T: list
    phi: np.ndarray
    omega: np.ndarray

    def __post_init__(self):
        self.W = [np.asarray(W, dtype=complex) for W in self.W]
        self.C = [np.asarray(C, dtype=complex) for C in self.C]
        self.T = [np.asarray(T, dtype=complex) for T in self.T]
        self.phi = np.asarray(self.phi, dtype=float)
        self.omega = np.asarray(self.omega, dtype=float)

    @property
    def K(self) -> int:
        return len(self.W)

    def W_tilde(self) -> np.ndarray:
        """Sum of W_k W_k^H over users (M x M)."""
        return sum(W @ W.conj().T for W in self.W)

    def total_power(self) -> float:
        return float(sum(np.linalg.norm(W) ** 2 for W in self.W))

    def copy(self) -> "BeamformingState":
        return BeamformingState(
            [W.copy() for W in self.W],
            [C.copy() for C in self.C],
            [T.copy() for T in self.T],
            self.phi.copy(),
            self.omega.copy(),
        )


def wrap_phases(phi: np.ndarray) -> np.ndarray:
    """Normalize phases into [0, 2pi)."""
    return np.mod(np.asarray(phi, dtype=float), 2.0 * np.pi)
