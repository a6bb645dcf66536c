"""Closed-loop scenario runner and logging.

One scenario is a deterministic single-threaded fold over a uniform time
grid: sample the reference, run the outer position loop, run the selected
inner attitude controller, advance the integrator state, step the rigid
body, emit a record.  Identical configurations produce identical records
byte for byte.

Records serialize to CSV with the fixed schema in CSV_HEADER (17
significant digits, LF line endings).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import control, trajectory
from .control import ClassicPidGains, ClassicPidState, ControllerGains, \
    PidControllerState
from .rigid_body import GRAVITY, BodyState, InertiaModel, WrenchInput, \
    lgvi_step, translational_step
from .so3 import exp_so3, morse_error, principal_angle
from .trajectory import HelixParams, SchemaMismatch, flat_desired_attitude, \
    helix_sample

__all__ = [
    "CONTROLLERS",
    "CSV_HEADER",
    "DisturbanceModel",
    "EmptyRun",
    "NonFiniteState",
    "RunDiagnostics",
    "ScenarioConfig",
    "SchemaMismatch",
    "StepRecord",
    "build_reference",
    "metrics",
    "read_csv",
    "run_scenario",
    "run_scenario_with_diagnostics",
    "write_csv",
]

CONTROLLERS = ("geometric-pid", "geometric-pd", "classic-pid")


class EmptyRun(ValueError):
    """Metrics requested for an empty record sequence."""


class NonFiniteState(RuntimeError):
    """NaN or Inf appeared in the simulation state."""

    def __init__(self, message: str, step: int):
        super().__init__(message)
        self.step = step


@dataclass(frozen=True)
class DisturbanceModel:
    """Per-axis disturbance torque  D_i(t) = const_i + ampl_i sin(freq_i t + phase_i)."""

    const: np.ndarray = field(default_factory=lambda: np.zeros(3))
    ampl: np.ndarray = field(default_factory=lambda: np.zeros(3))
    freq: np.ndarray = field(default_factory=lambda: np.zeros(3))
    phase: np.ndarray = field(default_factory=lambda: np.zeros(3))

    def __post_init__(self):
        for name in ("const", "ampl", "freq", "phase"):
            v = np.asarray(getattr(self, name), dtype=float)
            if v.shape != (3,):
                raise ValueError(f"disturbance {name} must be a 3-vector")
            if not np.all(np.isfinite(v)):
                raise ValueError(f"disturbance {name} must be finite")
            object.__setattr__(self, name, v)

    def at(self, t: float) -> np.ndarray:
        return self.const + self.ampl * np.sin(self.freq * t + self.phase)

    def gamma(self) -> float:
        """Closed-form upper bound on sup_t |D(t)|: |const| + |ampl|."""
        return float(np.linalg.norm(self.const) + np.linalg.norm(self.ampl))


@dataclass(frozen=True)
class ScenarioConfig:
    """Everything a run needs; defaults reproduce the stock experiment.

    The physical constants (inertia, mass, step size) follow the reference
    vehicle; gains, helix shape, disturbance values and the initial offset
    are tunable study parameters.  ``init_v`` of None matches the initial
    inertial velocity to the reference.  ``reference`` may name a CSV
    produced by write_reference_csv (or an external planner) to replace
    the helix pipeline.
    """

    name: str = "default"
    controller: str = "geometric-pid"
    gains: ControllerGains = None
    classic_gains: ClassicPidGains = None
    inertia: InertiaModel = None
    h: float = 0.01
    duration: float = 30.0
    init_rotation: np.ndarray = field(
        default_factory=lambda: np.array([0.3, -0.2, 0.4]))
    init_omega: np.ndarray = field(
        default_factory=lambda: np.array([-1.5, 1.0, -1.2]))
    init_b_offset: np.ndarray = field(
        default_factory=lambda: np.array([0.5, -0.5, 0.0]))
    init_v: Optional[np.ndarray] = None
    helix: HelixParams = field(default_factory=HelixParams)
    yaw_d: float = 0.0
    disturbance: Optional[DisturbanceModel] = None
    gravity: float = GRAVITY
    seed: Optional[int] = None
    output: Optional[str] = None
    reference: Optional[str] = None

    def __post_init__(self):
        if self.controller not in CONTROLLERS:
            raise ValueError(f"unknown controller {self.controller!r}")
        if not self.h > 0.0:
            raise ValueError(f"step size must be positive, got {self.h}")
        if self.duration < self.h:
            raise ValueError(
                f"duration {self.duration} shorter than one step {self.h}")
        if self.gains is None:
            object.__setattr__(self, "gains", default_gains())
        if self.classic_gains is None:
            object.__setattr__(self, "classic_gains", default_classic_gains())
        if self.inertia is None:
            object.__setattr__(self, "inertia", default_inertia())
        for name in ("init_rotation", "init_omega", "init_b_offset"):
            object.__setattr__(
                self, name, np.asarray(getattr(self, name), dtype=float))
        if self.init_v is not None:
            object.__setattr__(
                self, "init_v", np.asarray(self.init_v, dtype=float))

    @property
    def n_steps(self) -> int:
        return int(round(self.duration / self.h))


def default_inertia() -> InertiaModel:
    return InertiaModel(J=np.diag([0.0820, 0.0845, 0.1377]), m=4.34)


def default_gains(m: float = 4.34) -> ControllerGains:
    return ControllerGains(
        kP=8.0, kI=1.0, kDI=2.0, K=np.array([1.0, 1.1, 1.2]),
        P=4.0 * m * np.eye(3), Lv=2.8 * m * np.eye(3),
    )


def default_classic_gains() -> ClassicPidGains:
    return ClassicPidGains(
        Kp=np.full(3, 0.4), Ki=np.full(3, 0.05), Kd=np.full(3, 0.3))


def default_disturbance() -> DisturbanceModel:
    return DisturbanceModel(
        const=np.array([0.10, -0.08, 0.06]),
        ampl=np.array([0.20, 0.20, 0.20]),
        freq=np.array([1.0, 1.5, 2.0]),
        phase=np.zeros(3),
    )


@dataclass(frozen=True)
class StepRecord:
    """One logged simulation step (see CSV_HEADER for the column order)."""

    t: float
    b: np.ndarray
    btilde_norm: float
    vtilde_norm: float
    f: float
    tau: np.ndarray
    tau_norm: float
    omega: np.ndarray
    om_norm: float
    phi: float
    V: float
    F_I: np.ndarray
    D: np.ndarray
    in_nbhd: bool


@dataclass(frozen=True)
class RunDiagnostics:
    """Quantities tracked during the run that records do not carry.

    The final principal angle (rotation angle of the attitude error) is
    kept alongside the weighted error phi, which weighs axes unevenly.
    """

    max_orthonormality_err: float
    max_det_err: float
    final_principal_angle: float


def build_reference(cfg: ScenarioConfig):
    """Reference arrays for a run: n_steps + 2 samples on the t grid.

    Either evaluates the helix + flatness pipeline or loads an external
    reference CSV (validated against the grid)."""
    n = cfg.n_steps
    if cfg.reference is not None:
        samples, r_seq, om, om_dot = trajectory.read_reference_csv(cfg.reference)
        if len(samples) < n + 2:
            raise SchemaMismatch(
                f"reference has {len(samples)} samples, run needs {n + 2}")
        for k, s in enumerate(samples[: n + 2]):
            if abs(s.t - k * cfg.h) > 1e-9:
                raise SchemaMismatch(
                    f"reference sample {k} at t={s.t} is off the h={cfg.h} grid")
        return samples[: n + 2], r_seq[: n + 2], om[: n + 2], om_dot[: n + 2]
    samples = [helix_sample(cfg.helix, k * cfg.h) for k in range(n + 2)]
    r_seq = []
    for k, s in enumerate(samples):
        try:
            r_seq.append(
                flat_desired_attitude(s, cfg.yaw_d, cfg.inertia.m, cfg.gravity))
        except trajectory.DegenerateThrust as exc:
            exc.step = k
            raise
    om, om_dot = trajectory.discrete_desired_rates(r_seq, cfg.h)
    return samples, r_seq, om, om_dot


def _initial_state(cfg: ScenarioConfig, first: trajectory.PositionRefSample) -> BodyState:
    R0 = exp_so3(cfg.init_rotation)
    v0 = first.v_d if cfg.init_v is None else cfg.init_v
    return BodyState(
        R=R0, Omega=cfg.init_omega.copy(),
        b=first.b_d + cfg.init_b_offset, nu=R0.T @ v0,
    )


def run_scenario(cfg: ScenarioConfig) -> list[StepRecord]:
    """Run the configured closed loop; one record per grid point.

    The record at step k logs the state at t_k together with the inputs
    computed from it; inputs of the final record are not applied.
    Propagates DegenerateThrust / LogBranchError / EulerSingularity from
    the reference or controller and raises NonFiniteState if the state
    leaves the finite range.
    """
    records, _ = run_scenario_with_diagnostics(cfg)
    return records


def run_scenario_with_diagnostics(
        cfg: ScenarioConfig) -> tuple[list[StepRecord], RunDiagnostics]:
    # a diverging run produces inf/nan transiently before the explicit
    # guard fires; keep numpy quiet about it
    with np.errstate(over="ignore", invalid="ignore"):
        return _run_loop(cfg)


def _run_loop(cfg: ScenarioConfig) -> tuple[list[StepRecord], RunDiagnostics]:
    samples, r_seq, om_seq, om_dot_seq = build_reference(cfg)
    body = cfg.inertia
    gains = cfg.gains
    h = cfg.h
    n = cfg.n_steps
    gamma = cfg.disturbance.gamma() if cfg.disturbance is not None else 0.0
    zero3 = np.zeros(3)

    state = _initial_state(cfg, samples[0])
    ctl = PidControllerState()
    classic = ClassicPidState()
    records: list[StepRecord] = []
    eye = np.eye(3)
    max_orth = 0.0
    max_det = 0.0

    for k in range(n + 1):
        t = k * h
        # 1e100 is far beyond any physical trajectory but small enough that
        # the next few squared magnitudes stay representable
        finite = (
            np.all(np.isfinite(state.R))
            and np.all(np.abs(state.Omega) < 1e100)
            and np.all(np.abs(state.b) < 1e100)
            and np.all(np.abs(state.nu) < 1e100)
        )
        if not finite:
            raise NonFiniteState(f"non-finite state at step {k}", step=k)
        sample = samples[k]
        ref = control.DesiredAttitudeSample(
            R_d=r_seq[k], Omega_d=om_seq[k], Omega_d_dot=om_dot_seq[k])
        d_k = cfg.disturbance.at(t) if cfg.disturbance is not None else zero3

        f = control.position_thrust(
            state, sample.b_d, sample.v_d, sample.v_d_dot, gains,
            body.m, cfg.gravity)
        errors = control.attitude_errors(state.R, state.Omega, ref)
        if cfg.controller == "geometric-pid":
            tau = control.pid_torque(errors, ctl, ref, state.Omega, gains, body)
            f_i = ctl.F_I
        elif cfg.controller == "geometric-pd":
            tau = control.pd_torque(errors, ref, state.Omega, gains, body)
            f_i = zero3
        else:
            try:
                tau, classic = control.classic_pid_torque(
                    state.R, state.Omega, ref, cfg.classic_gains, classic, h)
            except control.EulerSingularity as exc:
                exc.step = k
                raise
            f_i = zero3

        v_err = state.R @ state.nu - sample.v_d
        record = StepRecord(
            t=t,
            b=state.b,
            btilde_norm=float(np.linalg.norm(state.b - sample.b_d)),
            vtilde_norm=float(np.linalg.norm(v_err)),
            f=f,
            tau=tau,
            tau_norm=float(np.linalg.norm(tau)),
            omega=errors.omega,
            om_norm=float(np.linalg.norm(errors.omega)),
            phi=morse_error(errors.Q, gains.K),
            V=control.lyapunov_value(errors, f_i, gains, body),
            F_I=f_i,
            D=d_k,
            in_nbhd=control.in_disturbance_neighborhood(
                errors, f_i, gains, gamma),
        )
        records.append(record)

        orth = float(np.linalg.norm(state.R.T @ state.R - eye))
        det = abs(float(np.linalg.det(state.R)) - 1.0)
        max_orth = max(max_orth, orth)
        max_det = max(max_det, det)

        if not (math.isfinite(record.f) and np.all(np.isfinite(tau))):
            raise NonFiniteState(f"non-finite control input at step {k}", step=k)

        if k == n:
            break

        if cfg.controller == "geometric-pid":
            ctl = control.step_integrator(
                ctl, control.integrator_rhs(errors, gains, body), h)
        rotated = lgvi_step(state, WrenchInput(tau=tau, f=f, D=d_k), body, h)
        translated = translational_step(state, f, body.m, cfg.gravity, h)
        # nu was advanced in the step-k frame; re-express in the new frame
        state = BodyState(
            R=rotated.R, Omega=rotated.Omega, b=translated.b,
            nu=rotated.R.T @ (state.R @ translated.nu),
        )

    final_angle = principal_angle(r_seq[n].T @ state.R)
    return records, RunDiagnostics(
        max_orthonormality_err=max_orth, max_det_err=max_det,
        final_principal_angle=final_angle)


def metrics(records: list[StepRecord]) -> dict[str, float]:
    """Summary statistics of a run.

    Steady-state means/maxima use the last 25% of the records; the control
    effort sums h |tau_k| over the applied steps; the time-to-threshold is
    the first grid time with phi < 0.01 (inf when never reached).
    """
    if not records:
        raise EmptyRun("no records")
    h = records[1].t - records[0].t if len(records) > 1 else 0.0
    tail = records[-max(1, len(records) // 4):]
    om = [r.om_norm for r in tail]
    phi = [r.phi for r in tail]
    applied = records[:-1] if len(records) > 1 else []
    t_phi = math.inf
    for r in records:
        if r.phi < 0.01:
            t_phi = r.t
            break
    return {
        "ss_mean_om": float(np.mean(om)),
        "ss_max_om": float(np.max(om)),
        "ss_mean_phi": float(np.mean(phi)),
        "ss_max_phi": float(np.max(phi)),
        "effort": float(sum(h * r.tau_norm for r in applied)),
        "peak_tau": float(max(r.tau_norm for r in records)),
        "time_to_phi_001": t_phi,
    }


CSV_HEADER = (
    "t,bx,by,bz,btilde_norm,vtilde_norm,f,taux,tauy,tauz,tau_norm,"
    "omx,omy,omz,om_norm,phi,V,FIx,FIy,FIz,Dx,Dy,Dz,in_nbhd"
)


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def write_csv(records: list[StepRecord], path) -> None:
    """Write records to CSV: fixed header, 17 significant digits, LF."""
    lines = [CSV_HEADER]
    for r in records:
        vals = (
            [r.t] + list(r.b) + [r.btilde_norm, r.vtilde_norm, r.f]
            + list(r.tau) + [r.tau_norm] + list(r.omega)
            + [r.om_norm, r.phi, r.V] + list(r.F_I) + list(r.D)
        )
        lines.append(",".join(_fmt(v) for v in vals) + f",{int(r.in_nbhd)}")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def read_csv(path) -> list[StepRecord]:
    """Read records back from CSV; lossless inverse of write_csv."""
    with open(path, "r", encoding="utf-8") as fh:
        lines = [ln for ln in fh.read().splitlines() if ln]
    if not lines or lines[0] != CSV_HEADER:
        raise SchemaMismatch(f"unexpected record header in {path}")
    out = []
    for ln in lines[1:]:
        v = ln.split(",")
        if len(v) != 24:
            raise SchemaMismatch(f"expected 24 columns, got {len(v)}")
        x = [float(s) for s in v[:23]]
        out.append(StepRecord(
            t=x[0], b=np.array(x[1:4]), btilde_norm=x[4], vtilde_norm=x[5],
            f=x[6], tau=np.array(x[7:10]), tau_norm=x[10],
            omega=np.array(x[11:14]), om_norm=x[14], phi=x[15], V=x[16],
            F_I=np.array(x[17:20]), D=np.array(x[20:23]),
            in_nbhd=bool(int(v[23])),
        ))
    return out
