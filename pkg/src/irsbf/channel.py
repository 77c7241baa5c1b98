"""Scenario generation: geometry, path-loss laws, Rayleigh direct links,
Rician reflected links over half-wavelength ULAs, and calibration of the
estimation-error variances to a target normalized MSE."""

from dataclasses import dataclass, field, replace

import numpy as np

from .errors import ConfigurationError
from .types import ChannelEstimates, ErrorModel, SystemDims


@dataclass(frozen=True)
class ScenarioConfig:
    dims: SystemDims
    bs_pos: tuple = (0.0, 30.0)
    irs_pos: tuple = (200.0, 30.0)
    ue_center: tuple = (200.0, 0.0)
    ue_radius: float = 10.0
    P_t_dbm: float = 0.0
    bandwidth_hz: float = 180e3
    noise_psd_dbm_hz: float = -170.0
    rician_nu: float = 10.0
    nmse: float = 0.05

    def __post_init__(self):
        if self.ue_radius < 0 or self.bandwidth_hz <= 0:
            raise ConfigurationError("ue_radius must be >= 0 and bandwidth > 0")
        if not (0.0 <= self.nmse < 1.0):
            raise ConfigurationError("nmse must lie in [0, 1)")

    @property
    def P_t_mw(self) -> float:
        return 10.0 ** (self.P_t_dbm / 10.0)

    @property
    def noise_power_mw(self) -> float:
        return 10.0 ** ((self.noise_psd_dbm_hz + 10.0 * np.log10(self.bandwidth_hz)) / 10.0)


def paper_scenario(**overrides) -> ScenarioConfig:
    """Large evaluation profile: 8 BS antennas, 100 IRS elements, 3 users."""
    cfg = ScenarioConfig(dims=SystemDims(M=8, N=100, Nr=2, K=3, Ns=2, B=2))
    return replace(cfg, **overrides) if overrides else cfg


def desk_scenario(**overrides) -> ScenarioConfig:
    """Small profile for CI-friendly runtimes.

    The lowered arrays and the tight user disk keep the 16-element reflected
    path strong enough to separate the schemes statistically while the direct
    link stays relevant, mirroring the regime of the large profile.
    """
    cfg = ScenarioConfig(
        dims=SystemDims(M=4, N=16, Nr=2, K=2, Ns=2, B=2),
        bs_pos=(0.0, 10.0),
        irs_pos=(200.0, 10.0),
        ue_center=(200.0, 0.0),
        ue_radius=5.0,
    )
    return replace(cfg, **overrides) if overrides else cfg


def path_loss_direct(d: float) -> float:
    """Direct-link path loss in dB."""
    if d <= 0:
        raise ConfigurationError("distance must be positive")
    return 32.6 + 36.7 * np.log10(d)


def path_loss_irs(d: float) -> float:
    """Reflected-hop path loss in dB (both BS-IRS and IRS-user segments)."""
    if d <= 0:
        raise ConfigurationError("distance must be positive")
    return 35.6 + 22.0 * np.log10(d)


def steering_vector(count: int, angle: float) -> np.ndarray:
    """Half-wavelength ULA response, entries e^{j pi n sin(angle)}."""
    if count < 1:
        raise ConfigurationError("antenna count must be >= 1")
    n = np.arange(count)
    return np.exp(1j * np.pi * n * np.sin(angle))


def sample_rayleigh(rows: int, cols: int, loss_db: float, rng: np.random.Generator) -> np.ndarray:
    """i.i.d. CSCG entries with per-entry variance set by the path loss."""
    std = 10.0 ** (-loss_db / 20.0) / np.sqrt(2.0)
    return std * (rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols)))


def sample_rician(
    rows: int,
    cols: int,
    loss_db: float,
    nu: float,
    a_r: np.ndarray,
    a_t: np.ndarray,
    rng: np.random.Generator,
) -> np.ndarray:
    """Rician channel: rank-1 LOS from the steering vectors plus Rayleigh NLOS."""
    if nu < 0:
        raise ConfigurationError("Rician factor must be nonnegative")
    kappa = 10.0 ** (-loss_db / 20.0)
    los = np.outer(a_r, a_t.conj())
    nlos = (rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))) / np.sqrt(2.0)
    return kappa * (np.sqrt(nu / (nu + 1.0)) * los + np.sqrt(1.0 / (nu + 1.0)) * nlos)


def _segment_angle(a, b) -> float:
    """Azimuth of the a -> b segment against the x-axis (arrays broadside north)."""
    return float(np.arctan2(b[1] - a[1], b[0] - a[0]))


def generate_scenario(config: ScenarioConfig, rng: np.random.Generator):
    """Draw user positions and all estimated channels.

    Returns (estimates, user_positions, omega) with the rate weights
    proportional to the inverse linear direct-link path loss, normalized so
    they sum to K.
    """
    dims = config.dims
    bs = np.asarray(config.bs_pos, dtype=float)
    irs = np.asarray(config.irs_pos, dtype=float)
    center = np.asarray(config.ue_center, dtype=float)

    # uniform draw in the disk
    radii = config.ue_radius * np.sqrt(rng.uniform(0.0, 1.0, size=dims.K))
    angles = rng.uniform(0.0, 2.0 * np.pi, size=dims.K)
    users = center[None, :] + np.stack([radii * np.cos(angles), radii * np.sin(angles)], axis=1)

    d_bs_irs = float(np.linalg.norm(irs - bs))
    angle_t = _segment_angle(bs, irs)
    angle_r = _segment_angle(irs, bs)
    G = sample_rician(
        dims.N, dims.M, path_loss_irs(d_bs_irs), config.rician_nu,
        steering_vector(dims.N, angle_r), steering_vector(dims.M, angle_t), rng,
    )

    Hd, Hr, loss_direct_lin = [], [], []
    for k in range(dims.K):
        ue = users[k]
        d_direct = float(np.linalg.norm(ue - bs))
        d_irs_ue = float(np.linalg.norm(ue - irs))
        loss_d = path_loss_direct(d_direct)
        loss_direct_lin.append(10.0 ** (-loss_d / 10.0))
        Hd.append(sample_rayleigh(dims.M, dims.Nr, loss_d, rng))
        Hr.append(
            sample_rician(
                dims.N, dims.Nr, path_loss_irs(d_irs_ue), config.rician_nu,
                steering_vector(dims.N, _segment_angle(ue, irs)),
                steering_vector(dims.Nr, _segment_angle(irs, ue)),
                rng,
            )
        )

    # omega_k proportional to the inverse linear path loss (= channel gain)
    gain = np.asarray(loss_direct_lin)
    omega = dims.K * gain / np.sum(gain)
    est = ChannelEstimates(G, tuple(Hd), tuple(Hr))
    est.validate(dims)
    return est, users, omega


def calibrate_error_variances(
    est: ChannelEstimates, nmse: float, config: ScenarioConfig
) -> ErrorModel:
    """Per-entry error variances matching the target NMSE per realized
    estimate, plus the receiver noise power from PSD and bandwidth."""
    if nmse < 0:
        raise ConfigurationError("nmse must be nonnegative")
    dims = config.dims
    sigma2_g = nmse * float(np.linalg.norm(est.G_hat) ** 2) / (dims.N * dims.M)
    sigma2_d = tuple(
        nmse * float(np.linalg.norm(H) ** 2) / (dims.M * dims.Nr) for H in est.Hd_hat
    )
    sigma2_r = tuple(
        nmse * float(np.linalg.norm(H) ** 2) / (dims.N * dims.Nr) for H in est.Hr_hat
    )
    noise = config.noise_power_mw
    return ErrorModel(sigma2_g, sigma2_d, sigma2_r, (noise,) * dims.K)
