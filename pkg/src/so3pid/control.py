"""Tracking errors and the attitude/position control laws.

Three attitude controllers share the same error geometry:

* geometric PID: proportional/derivative action on the rotation-matrix
  error plus an intrinsic integrator state F_I driven by
  ``J Fdot_I = -kP S(Q) - kD w``,
* geometric PD: the same law with the integral channel removed,
* classic PID: per-axis PID on ZYX Euler angles, kept as a
  local-coordinates baseline (subject to gimbal lock).

Gains satisfy ``kD = kI + kDI`` by construction; kD is derived, never set.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .rigid_body import InertiaModel
from .so3 import check_error_weights, morse_error, morse_gradient

__all__ = [
    "AttitudeErrors",
    "ClassicPidGains",
    "ClassicPidState",
    "ControllerGains",
    "DesiredAttitudeSample",
    "EulerSingularity",
    "attitude_errors",
    "classic_pid_torque",
    "euler_zyx",
    "in_disturbance_neighborhood",
    "integrator_rhs",
    "lyapunov_value",
    "pd_torque",
    "pid_torque",
    "position_thrust",
    "step_integrator",
]

_E3 = np.array([0.0, 0.0, 1.0])


class EulerSingularity(ValueError):
    """Pitch within tolerance of +/-90 deg: ZYX angles are degenerate."""


def _check_spd(mat, name: str) -> np.ndarray:
    mat = np.asarray(mat, dtype=float)
    if mat.shape != (3, 3):
        raise ValueError(f"{name} must be 3x3, got {mat.shape}")
    if np.linalg.norm(mat - mat.T) > 1e-9:
        raise ValueError(f"{name} must be symmetric")
    if np.any(np.linalg.eigvalsh(mat) <= 0.0):
        raise ValueError(f"{name} must be positive definite")
    return mat


@dataclass(frozen=True)
class ControllerGains:
    """Feedback gains for the geometric attitude loop and position loop.

    kD is always kI + kDI (the derived value is exposed as a property so
    it cannot drift out of sync).  K holds the diagonal of the attitude
    error weight matrix; P and Lv are the SPD position/velocity gains.
    """

    kP: float
    kI: float
    kDI: float
    K: np.ndarray
    P: np.ndarray
    Lv: np.ndarray

    def __post_init__(self):
        for name in ("kP", "kI", "kDI"):
            if not getattr(self, name) > 0.0:
                raise ValueError(f"{name} must be positive, got {getattr(self, name)}")
        object.__setattr__(self, "K", check_error_weights(self.K))
        object.__setattr__(self, "P", _check_spd(self.P, "P"))
        object.__setattr__(self, "Lv", _check_spd(self.Lv, "Lv"))

    @property
    def kD(self) -> float:
        return self.kI + self.kDI


@dataclass(frozen=True)
class PidControllerState:
    """Integrator state of the geometric PID controller; starts at zero."""

    F_I: np.ndarray = field(default_factory=lambda: np.zeros(3))


@dataclass(frozen=True)
class DesiredAttitudeSample:
    """Reference attitude, angular velocity and angular acceleration."""

    R_d: np.ndarray
    Omega_d: np.ndarray
    Omega_d_dot: np.ndarray


@dataclass(frozen=True)
class AttitudeErrors:
    """Attitude error Q = R_d^T R and rate error w = Omega - Q^T Omega_d."""

    Q: np.ndarray
    omega: np.ndarray


def attitude_errors(R, Omega, ref: DesiredAttitudeSample) -> AttitudeErrors:
    """Tracking errors of (R, Omega) against the reference sample."""
    Q = ref.R_d.T @ R
    return AttitudeErrors(Q=Q, omega=Omega - Q.T @ ref.Omega_d)


def integrator_rhs(errors: AttitudeErrors, gains: ControllerGains,
                   body: InertiaModel) -> np.ndarray:
    """Continuous rate of the intrinsic integrator:
    Fdot_I = J^-1 (-kP S(Q) - kD w)."""
    return body.J_inv @ (
        -gains.kP * morse_gradient(errors.Q, gains.K) - gains.kD * errors.omega
    )


def step_integrator(state: PidControllerState, rhs,
                    h: float) -> PidControllerState:
    """Explicit Euler update of the integrator state."""
    return PidControllerState(F_I=state.F_I + h * np.asarray(rhs, dtype=float))


def pid_torque(errors: AttitudeErrors, ctl: PidControllerState,
               ref: DesiredAttitudeSample, Omega, gains: ControllerGains,
               body: InertiaModel) -> np.ndarray:
    """Geometric PID attitude torque.

    tau = kI F_I - kP S(Q) - kD w
          + J (Q^T dOmega_d - w x Q^T Omega_d) - (J Omega) x Q^T Omega_d

    At perfect tracking the feedforward reduces to -J Omega x Omega, which
    cancels the gyroscopic term of the dynamics exactly.
    """
    Q, w = errors.Q, errors.omega
    QtOd = Q.T @ ref.Omega_d
    return (
        gains.kI * ctl.F_I
        - gains.kP * morse_gradient(Q, gains.K)
        - gains.kD * w
        + body.J @ (Q.T @ ref.Omega_d_dot - np.cross(w, QtOd))
        - np.cross(body.J @ Omega, QtOd)
    )


def pd_torque(errors: AttitudeErrors, ref: DesiredAttitudeSample, Omega,
              gains: ControllerGains, body: InertiaModel) -> np.ndarray:
    """Geometric PD attitude torque: the PID law without the integral
    channel.  Equals pid_torque evaluated with F_I = 0."""
    Q, w = errors.Q, errors.omega
    QtOd = Q.T @ ref.Omega_d
    return (
        -gains.kP * morse_gradient(Q, gains.K)
        - gains.kD * w
        + body.J @ (Q.T @ ref.Omega_d_dot - np.cross(w, QtOd))
        - np.cross(body.J @ Omega, QtOd)
    )


@dataclass(frozen=True)
class ClassicPidGains:
    """Per-axis gains (roll, pitch, yaw) of the Euler-angle baseline."""

    Kp: np.ndarray
    Ki: np.ndarray
    Kd: np.ndarray


@dataclass(frozen=True)
class ClassicPidState:
    """Accumulated per-axis angle error of the Euler-angle baseline."""

    integral: np.ndarray = field(default_factory=lambda: np.zeros(3))


def euler_zyx(R) -> np.ndarray:
    """ZYX (yaw-pitch-roll) Euler angles of R = Rz(psi) Ry(th) Rx(phi).

    Raises EulerSingularity when the pitch is within 1e-6 rad of +/-90 deg.
    """
    s_pitch = -float(R[2, 0])
    pitch = math.asin(min(1.0, max(-1.0, s_pitch)))
    if math.pi / 2.0 - abs(pitch) < 1e-6:
        raise EulerSingularity(f"pitch {pitch:.8f} rad is at gimbal lock")
    roll = math.atan2(R[2, 1], R[2, 2])
    yaw = math.atan2(R[1, 0], R[0, 0])
    return np.array([roll, pitch, yaw])


def _wrap_pi(angles: np.ndarray) -> np.ndarray:
    # maps into (-pi, pi]; the open/closed boundary only matters for
    # exactly-pi errors
    return -((-angles + math.pi) % (2.0 * math.pi) - math.pi)


def classic_pid_torque(R, Omega, ref: DesiredAttitudeSample,
                       gains: ClassicPidGains, state: ClassicPidState,
                       h: float) -> tuple[np.ndarray, ClassicPidState]:
    """Per-axis Euler-angle PID baseline.

    Angle errors are ZYX Euler differences wrapped to (-pi, pi]; the
    integral accumulates by explicit Euler before use.  Returns the torque
    and the updated controller state.
    """
    e = _wrap_pi(euler_zyx(ref.R_d) - euler_zyx(R))
    integral = state.integral + h * e
    tau = gains.Kp * e + gains.Ki * integral + gains.Kd * (ref.Omega_d - Omega)
    return tau, ClassicPidState(integral=integral)


def position_thrust(state, b_d, v_d, v_d_dot, gains: ControllerGains,
                    m: float, g: float) -> float:
    """Scalar thrust of the outer position loop:

    f = e3^T R^T (m g e3 + P (b - b_d) + Lv (R nu - v_d) - m vdot_d)

    i.e. the commanded force projected on the current thrust axis.  At the
    reference with level attitude this reduces to f = m g.
    """
    btilde = state.b - b_d
    F_cmd = (
        m * g * _E3
        + gains.P @ btilde
        + gains.Lv @ (state.R @ state.nu - v_d)
        - m * np.asarray(v_d_dot, dtype=float)
    )
    return float((state.R.T @ F_cmd)[2])


def lyapunov_value(errors: AttitudeErrors, F_I, gains: ControllerGains,
                   body: InertiaModel) -> float:
    """Tracking-energy value

    V = 1/2 [(F_I - w)^T J (F_I - w) + w^T J w] + kP <K, I - Q>.

    Nonnegative; zero only at (Q, w, F_I) = (I, 0, 0).
    """
    w = errors.omega
    d = np.asarray(F_I, dtype=float) - w
    return float(
        0.5 * (d @ body.J @ d + w @ body.J @ w)
        + gains.kP * morse_error(errors.Q, gains.K)
    )


def in_disturbance_neighborhood(errors: AttitudeErrors, F_I,
                                gains: ControllerGains,
                                gamma: float) -> bool:
    """Membership in the residual set

    |2w - F_I| gamma <= kDI |w|^2 + kI |F_I - w|^2

    for a disturbance torque bounded in norm by gamma.  Inside this set the
    quadratic feedback dissipation dominates the worst-case disturbance
    coupling.
    """
    w = errors.omega
    F_I = np.asarray(F_I, dtype=float)
    lhs = float(np.linalg.norm(2.0 * w - F_I)) * gamma
    rhs = gains.kDI * float(w @ w) + gains.kI * float((F_I - w) @ (F_I - w))
    return lhs <= rhs
