"""Outer alternating loop: filter/weight updates, dual-solved precoders, one
passive phase step (MM or SCA), quantization and the fractional-decrease
stopping rule. Also the fixed-IRS and no-IRS baselines."""

from dataclasses import dataclass

import numpy as np

from .active import optimal_receive_filter, optimal_weights, solve_power_dual
from .errors import ConfigurationError
from .model import weighted_sum_rate, wmmse_objective
from .passive import build_passive_coefficients, mm_update, quantize_phases, sca_update
from .types import BeamformingState, ChannelEstimates, ErrorModel, SystemDims, wrap_phases

STALL_PATIENCE = 10


@dataclass(frozen=True)
class OptimizerConfig:
    method: str = "sca"                    # "mm" | "sca"
    max_outer: int = 100
    rel_tol: float = 1e-4
    passive_steps_per_outer: int = 1
    quantize_each_iteration: bool = True
    continuous_phases: bool = False

    def __post_init__(self):
        if self.method not in ("mm", "sca"):
            raise ConfigurationError(f"unknown passive method {self.method!r}")
        if self.max_outer < 1:
            raise ConfigurationError("max_outer must be >= 1")
        if self.rel_tol <= 0:
            raise ConfigurationError("rel_tol must be positive")


@dataclass
class RunResult:
    state: BeamformingState
    trace_f: list
    trace_rate: list
    iterations: int
    stop_reason: str

    @property
    def wsr(self) -> float:
        return self.trace_rate[-1] if self.trace_rate else 0.0


def initialize_state(
    dims: SystemDims,
    est: ChannelEstimates,
    P_t: float,
    omega: np.ndarray,
    rng: np.random.Generator,
    continuous_phases: bool = False,
) -> BeamformingState:
    """Random phases from the alphabet (or continuous) and random precoders
    scaled to use the full power budget."""
    if dims.B > 0 and not continuous_phases:
        phi = rng.integers(0, dims.L, size=dims.N) * (2.0 * np.pi / dims.L)
    else:
        phi = rng.uniform(0.0, 2.0 * np.pi, size=dims.N)
    W = [
        (rng.standard_normal((dims.M, dims.Ns)) + 1j * rng.standard_normal((dims.M, dims.Ns)))
        for _ in range(dims.K)
    ]
    total = sum(np.linalg.norm(Wk) ** 2 for Wk in W)
    scale = np.sqrt(P_t / total)
    W = [scale * Wk for Wk in W]
    C = [np.zeros((dims.Nr, dims.Ns), dtype=complex) for _ in range(dims.K)]
    T = [np.eye(dims.Ns, dtype=complex) for _ in range(dims.K)]
    return BeamformingState(W, C, T, wrap_phases(phi), np.asarray(omega, dtype=float))


def _bcd_loop(
    config: OptimizerConfig,
    dims: SystemDims,
    est: ChannelEstimates,
    err: ErrorModel,
    P_t: float,
    state: BeamformingState,
    update_phases: bool,
) -> RunResult:
    quantizing = update_phases and dims.B > 0 and not config.continuous_phases
    trace_f, trace_rate = [], []
    f_prev = None
    best_f, best_state = np.inf, None
    non_improving = 0
    stop_reason = "max_outer"
    it = 0
    # the passive solver iterates on continuous phases; the quantized vector
    # is what the transmit side and the objective see
    phi_cont = state.phi.copy()

    for it in range(1, config.max_outer + 1):
        for k in range(dims.K):
            state.C[k] = optimal_receive_filter(est, err, state, k)
            _, state.T[k] = optimal_weights(est, err, state, k)
        _, state.W = solve_power_dual(est, err, state.C, state.T, state.phi, P_t)

        stalled = False
        if update_phases:
            coef = build_passive_coefficients(est, err, state)
            for _ in range(config.passive_steps_per_outer):
                if config.method == "mm":
                    phi_cont = mm_update(coef, phi_cont)
                else:
                    phi_cont, _, stalled = sca_update(coef, phi_cont)
            if quantizing and config.quantize_each_iteration:
                state.phi = quantize_phases(phi_cont, dims.B)
            else:
                state.phi = phi_cont

        f = wmmse_objective(est, err, state)
        trace_f.append(f)
        trace_rate.append(weighted_sum_rate(est, err, state))

        if best_state is None or f < best_f - 1e-12 * max(1.0, abs(best_f)):
            best_f, best_state = f, state.copy()
            non_improving = 0
        else:
            non_improving += 1

        if f_prev is not None and abs(f_prev - f) <= config.rel_tol * abs(f_prev):
            stop_reason = "converged"
            break
        if quantizing and non_improving >= STALL_PATIENCE:
            stop_reason = "quantization_cycle"
            break
        if stalled:
            stop_reason = "sca_stalled"
            break
        f_prev = f

    if quantizing and best_state is not None and config.quantize_each_iteration:
        state = best_state
    if quantizing and not config.quantize_each_iteration:
        state.phi = quantize_phases(state.phi, dims.B)
        trace_rate.append(weighted_sum_rate(est, err, state))
        trace_f.append(wmmse_objective(est, err, state))
    return RunResult(state, trace_f, trace_rate, it, stop_reason)


def run_joint_design(
    config: OptimizerConfig,
    dims: SystemDims,
    est: ChannelEstimates,
    err: ErrorModel,
    P_t: float,
    omega: np.ndarray,
    rng: np.random.Generator,
) -> RunResult:
    """Full joint active/passive design."""
    est.validate(dims)
    state = initialize_state(dims, est, P_t, omega, rng, config.continuous_phases)
    return _bcd_loop(config, dims, est, err, P_t, state, update_phases=True)


def run_baseline_fixed_irs(
    config: OptimizerConfig,
    dims: SystemDims,
    est: ChannelEstimates,
    err: ErrorModel,
    P_t: float,
    omega: np.ndarray,
    rng: np.random.Generator,
) -> RunResult:
    """Random phases held fixed; only the transmit side is optimized."""
    est.validate(dims)
    state = initialize_state(dims, est, P_t, omega, rng, config.continuous_phases)
    return _bcd_loop(config, dims, est, err, P_t, state, update_phases=False)


def run_baseline_no_irs(
    config: OptimizerConfig,
    dims: SystemDims,
    est: ChannelEstimates,
    err: ErrorModel,
    P_t: float,
    omega: np.ndarray,
    rng: np.random.Generator,
) -> RunResult:
    """Direct transmissions only: reflected links and their error variances
    are zeroed before the active-only loop."""
    est_direct = ChannelEstimates(
        np.zeros_like(est.G_hat),
        est.Hd_hat,
        tuple(np.zeros_like(H) for H in est.Hr_hat),
    )
    err_direct = ErrorModel(0.0, err.sigma2_d, (0.0,) * dims.K, err.sigma2_n)
    return run_baseline_fixed_irs(config, dims, est_direct, err_direct, P_t, omega, rng)


class JointBeamformer:
    """Estimator-style front door for the joint design.

    Construct with hyperparameters, then call ``fit(est, err)`` with channel
    estimates and an error model; the solution lands in ``state_``,
    ``trace_f_``, ``trace_rate_`` and ``wsr_``.
    """

    def __init__(
        self,
        method: str = "sca",
        max_outer: int = 100,
        rel_tol: float = 1e-4,
        passive_steps_per_outer: int = 1,
        quantize_each_iteration: bool = True,
        continuous_phases: bool = False,
        baseline: str | None = None,   # None | "fixed_irs" | "no_irs"
        P_t: float = 1.0,
        seed: int = 0,
    ):
        self.method = method
        self.max_outer = max_outer
        self.rel_tol = rel_tol
        self.passive_steps_per_outer = passive_steps_per_outer
        self.quantize_each_iteration = quantize_each_iteration
        self.continuous_phases = continuous_phases
        self.baseline = baseline
        self.P_t = P_t
        self.seed = seed

    _param_names = (
        "method", "max_outer", "rel_tol", "passive_steps_per_outer",
        "quantize_each_iteration", "continuous_phases", "baseline", "P_t", "seed",
    )

    def get_params(self, deep: bool = True) -> dict:
        return {name: getattr(self, name) for name in self._param_names}

    def set_params(self, **params) -> "JointBeamformer":
        for name, value in params.items():
            if name not in self._param_names:
                raise ConfigurationError(f"unknown parameter {name!r}")
            setattr(self, name, value)
        return self

    def _config(self) -> OptimizerConfig:
        return OptimizerConfig(
            method=self.method,
            max_outer=self.max_outer,
            rel_tol=self.rel_tol,
            passive_steps_per_outer=self.passive_steps_per_outer,
            quantize_each_iteration=self.quantize_each_iteration,
            continuous_phases=self.continuous_phases,
        )

    def fit(
        self,
        dims: SystemDims,
        est: ChannelEstimates,
        err: ErrorModel,
        omega=None,
    ) -> "JointBeamformer":
        if omega is None:
            omega = np.ones(dims.K)
        rng = np.random.default_rng(self.seed)
        runner = {
            None: run_joint_design,
            "fixed_irs": run_baseline_fixed_irs,
            "no_irs": run_baseline_no_irs,
        }.get(self.baseline, None)
        if runner is None:
            raise ConfigurationError(f"unknown baseline {self.baseline!r}")
        result = runner(self._config(), dims, est, err, self.P_t, omega, rng)
        self.state_ = result.state
        self.trace_f_ = result.trace_f
        self.trace_rate_ = result.trace_rate
        self.iterations_ = result.iterations
        self.stop_reason_ = result.stop_reason
        self.wsr_ = result.wsr
        return self
