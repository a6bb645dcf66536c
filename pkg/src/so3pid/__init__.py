"""Geometric attitude tracking on SO(3): math kernel, rigid-body
variational integrator, PID/PD/Euler-angle controllers and a deterministic
scenario harness."""

from .control import (
    AttitudeErrors,
    ClassicPidGains,
    ClassicPidState,
    ControllerGains,
    DesiredAttitudeSample,
    EulerSingularity,
    PidControllerState,
    attitude_errors,
    classic_pid_torque,
    in_disturbance_neighborhood,
    integrator_rhs,
    lyapunov_value,
    pd_torque,
    pid_torque,
    position_thrust,
    step_integrator,
)
from .harness import (
    CSV_HEADER,
    DisturbanceModel,
    EmptyRun,
    NonFiniteState,
    ScenarioConfig,
    StepRecord,
    metrics,
    read_csv,
    run_scenario,
    write_csv,
)
from .rigid_body import (
    GRAVITY,
    BodyState,
    InertiaModel,
    WrenchInput,
    continuous_rotational_rhs,
    lgvi_step,
    translational_step,
)
from .so3 import (
    NotRotation,
    NotSkewSymmetric,
    check_rotation,
    exp_so3,
    hat,
    log_so3,
    morse_error,
    morse_gradient,
    principal_angle,
    vee,
)
from .trajectory import (
    DegenerateThrust,
    HelixParams,
    LogBranchError,
    PositionRefSample,
    discrete_desired_rates,
    flat_desired_attitude,
    helix_sample,
)

__version__ = "0.1.0"
