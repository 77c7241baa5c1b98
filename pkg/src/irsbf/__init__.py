"""Joint active/passive beamforming for IRS-aided MU-MIMO downlinks under
MMSE channel-estimation errors."""

from .types import BeamformingState, ChannelEstimates, ErrorModel, SystemDims
from .model import (
    effective_channel,
    interference_noise_cov,
    monte_carlo_cov_oracle,
    mse_matrix,
    signal_plus_impairment_cov,
    weighted_sum_rate,
    wmmse_objective,
)
from .active import (
    DualSolveReport,
    lagrangian_value,
    optimal_receive_filter,
    optimal_weights,
    precoders_for_dual,
    solve_power_dual,
)
from .passive import (
    PassiveCoefficients,
    build_passive_coefficients,
    evaluate_h,
    exhaustive_phase_oracle,
    gradient_h,
    mm_update,
    quantize_phases,
    sca_update,
)
from .optimizer import (
    JointBeamformer,
    OptimizerConfig,
    RunResult,
    initialize_state,
    run_baseline_fixed_irs,
    run_baseline_no_irs,
    run_joint_design,
)
from .harness import (
    SweepRecord,
    read_records,
    run_trial,
    summarize,
    summarize_records,
    sweep_irs_position,
    sweep_nmse,
    sweep_power,
    trial_seed,
)
from .channel import (
    ScenarioConfig,
    calibrate_error_variances,
    desk_scenario,
    generate_scenario,
    paper_scenario,
    path_loss_direct,
    path_loss_irs,
    sample_rayleigh,
    sample_rician,
    steering_vector,
)
from .errors import ConfigurationError, NumericalError

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
