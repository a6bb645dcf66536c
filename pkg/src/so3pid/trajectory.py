"""Reference trajectory generation.

A helix position profile with analytic derivatives feeds a
differential-flatness map: the desired body z-axis points along the
required thrust direction ``g e3 - vdot_d`` and the desired yaw resolves
the remaining freedom.  Desired angular velocity comes from discrete
logarithms of consecutive attitudes, and desired angular acceleration
from differencing those rates, so the reference is exact on constant-rate
rotations and first-order accurate otherwise.

References are importable/exportable as CSV so external planners can
drive the simulation harness (schema in REFERENCE_CSV_HEADER).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .so3 import check_rotation, log_so3, principal_angle

__all__ = [
    "DegenerateThrust",
    "HelixParams",
    "LogBranchError",
    "PositionRefSample",
    "REFERENCE_CSV_HEADER",
    "SchemaMismatch",
    "discrete_desired_rates",
    "flat_desired_attitude",
    "helix_sample",
    "read_reference_csv",
    "write_reference_csv",
]

_E3 = np.array([0.0, 0.0, 1.0])


class DegenerateThrust(ValueError):
    """Reference demands (near) free fall; the flatness map has no axis."""


class LogBranchError(ValueError):
    """Consecutive reference attitudes are too far apart for the step."""


class SchemaMismatch(ValueError):
    """CSV header does not match the reference schema."""


@dataclass(frozen=True)
class HelixParams:
    """Circular climb: radius (m), angular_rate (rad/s), climb_rate (m/s),
    center offset (m) and phase (rad).  radius = climb_rate = 0 gives a
    constant hover point."""

    radius: float = 1.0
    angular_rate: float = 0.5
    climb_rate: float = 0.2
    center: np.ndarray = field(default_factory=lambda: np.zeros(3))
    phase: float = 0.0

    def __post_init__(self):
        if self.radius < 0.0:
            raise ValueError(f"radius must be nonnegative, got {self.radius}")
        object.__setattr__(self, "center", np.asarray(self.center, dtype=float))


@dataclass(frozen=True)
class PositionRefSample:
    """Desired position, velocity and acceleration at time t."""

    t: float
    b_d: np.ndarray
    v_d: np.ndarray
    v_d_dot: np.ndarray


def helix_sample(p: HelixParams, t: float) -> PositionRefSample:
    """Evaluate the helix and its analytic derivatives at time t."""
    a = p.angular_rate * t + p.phase
    r, w, c = p.radius, p.angular_rate, p.climb_rate
    b_d = p.center + np.array([r * math.cos(a), r * math.sin(a), c * t])
    v_d = np.array([-r * w * math.sin(a), r * w * math.cos(a), c])
    v_d_dot = np.array([-r * w * w * math.cos(a), -r * w * w * math.sin(a), 0.0])
    return PositionRefSample(t=t, b_d=b_d, v_d=v_d, v_d_dot=v_d_dot)


def flat_desired_attitude(sample: PositionRefSample, yaw_d: float,
                          m: float, g: float) -> np.ndarray:
    """Desired attitude from the flatness map.

    The desired body z-axis is the unit vector along ``m g e3 - m vdot_d``
    (the thrust the reference requires); the body x-axis is the yaw
    direction projected orthogonal to it; y completes the right-handed
    frame.  Raises DegenerateThrust when the required thrust vanishes
    (free-fall reference) or the yaw direction aligns with the thrust
    axis.
    """
    thrust = m * g * _E3 - m * sample.v_d_dot
    norm = float(np.linalg.norm(thrust))
    if norm < 1e-6:
        raise DegenerateThrust(
            f"required thrust norm {norm:.3e} at t={sample.t:.6f}"
        )
    z_d = thrust / norm
    x_yaw = np.array([math.cos(yaw_d), math.sin(yaw_d), 0.0])
    x_proj = x_yaw - (x_yaw @ z_d) * z_d
    x_norm = float(np.linalg.norm(x_proj))
    if x_norm < 1e-9:
        raise DegenerateThrust(
            f"yaw direction parallel to thrust axis at t={sample.t:.6f}"
        )
    x_d = x_proj / x_norm
    y_d = np.cross(z_d, x_d)
    return np.column_stack((x_d, y_d, z_d))


def discrete_desired_rates(R_seq, h: float) -> tuple[np.ndarray, np.ndarray]:
    """Desired angular velocity and acceleration for an attitude sequence.

    Omega_d[k] = (1/h) log(R_d[k-1]^T R_d[k]) for k >= 1, with the first
    sample replicated; Omega_d_dot by the same backward difference of
    Omega_d, first sample replicated again.  Exact for constant-axis
    constant-rate references.  Raises LogBranchError when consecutive
    attitudes are within 1e-3 of the pi geodesic bound.
    """
    n = len(R_seq)
    if n < 2:
        raise ValueError("need at least two attitude samples")
    Om = np.zeros((n, 3))
    for k in range(1, n):
        inc = R_seq[k - 1].T @ R_seq[k]
        if math.pi - principal_angle(inc) < 1e-3:
            raise LogBranchError(
                f"attitude increment at sample {k} is near pi; "
                "reference too coarse for this step"
            )
        Om[k] = log_so3(inc) / h
    Om[0] = Om[1]
    Om_dot = np.zeros((n, 3))
    Om_dot[1:] = (Om[1:] - Om[:-1]) / h
    Om_dot[0] = Om_dot[1]
    return Om, Om_dot


REFERENCE_CSV_HEADER = (
    "t,bdx,bdy,bdz,vdx,vdy,vdz,adx,ady,adz,"
    "Rd00,Rd01,Rd02,Rd10,Rd11,Rd12,Rd20,Rd21,Rd22,"
    "omdx,omdy,omdz,domdx,domdy,domdz"
)


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def write_reference_csv(path, samples, R_seq, Om, Om_dot) -> None:
    """Write reference samples to CSV (17 significant digits, LF)."""
    rows = [REFERENCE_CSV_HEADER]
    for s, R, om, dom in zip(samples, R_seq, Om, Om_dot):
        vals = (
            [s.t] + list(s.b_d) + list(s.v_d) + list(s.v_d_dot)
            + list(R.reshape(-1)) + list(om) + list(dom)
        )
        rows.append(",".join(_fmt(v) for v in vals))
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(rows) + "\n")


def read_reference_csv(path):
    """Read a reference CSV back; inverse of write_reference_csv.

    Each attitude is validated against the rotation-matrix tolerance.
    Returns (samples, R_seq, Om, Om_dot).
    """
    with open(path, "r", encoding="utf-8") as fh:
        lines = [ln for ln in fh.read().splitlines() if ln]
    if not lines or lines[0] != REFERENCE_CSV_HEADER:
        raise SchemaMismatch(f"unexpected reference header in {path}")
    samples, R_seq, Om, Om_dot = [], [], [], []
    for ln in lines[1:]:
        v = [float(x) for x in ln.split(",")]
        if len(v) != 25:
            raise SchemaMismatch(f"expected 25 columns, got {len(v)}")
        samples.append(
            PositionRefSample(
                t=v[0], b_d=np.array(v[1:4]), v_d=np.array(v[4:7]),
                v_d_dot=np.array(v[7:10]),
            )
        )
        R_seq.append(check_rotation(np.array(v[10:19]).reshape(3, 3)))
        Om.append(np.array(v[19:22]))
        Om_dot.append(np.array(v[22:25]))
    return samples, R_seq, np.array(Om), np.array(Om_dot)
