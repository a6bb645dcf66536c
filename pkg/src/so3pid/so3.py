"""Rotation math kernel: hat/vee maps, exponential and logarithm on SO(3),
and the weighted configuration error function driving the geometric
controllers.

Conventions
-----------
Vectors are numpy arrays of shape (3,), matrices of shape (3, 3).
``hat(v) @ w == cross(v, w)``.  Rotation matrices map body frame to
inertial frame.  The error-weight matrix ``K = diag(k1, k2, k3)`` is
represented by its diagonal as a length-3 array; the entries must be
positive and pairwise distinct so that the error function has isolated
critical points.
"""

from __future__ import annotations

import math

import numpy as np

__all__ = [
    "NotRotation",
    "NotSkewSymmetric",
    "ROTATION_TOL",
    "check_error_weights",
    "check_rotation",
    "exp_so3",
    "hat",
    "log_so3",
    "morse_error",
    "morse_gradient",
    "principal_angle",
    "vee",
]

ROTATION_TOL = 1e-9

# Below this angle the Rodrigues coefficients switch to 4th-order Taylor
# series; keeps relative error under 1e-12 without branch chatter.
_SMALL_ANGLE = 1e-6


class NotSkewSymmetric(ValueError):
    """Matrix handed to vee() has a symmetric part above tolerance."""


class NotRotation(ValueError):
    """Matrix is not orthonormal with determinant +1 within tolerance."""


def hat(v) -> np.ndarray:
    """Skew-symmetric matrix of a 3-vector.

    ``hat(v) @ w`` equals ``np.cross(v, w)`` for every w.
    """
    x, y, z = v
    return np.array([[0.0, -z, y], [z, 0.0, -x], [-y, x, 0.0]])


def vee(m, tol: float = ROTATION_TOL) -> np.ndarray:
    """Inverse of hat().

    Raises NotSkewSymmetric when the symmetric part of ``m`` exceeds
    ``tol`` in Frobenius norm.
    """
    m = np.asarray(m, dtype=float)
    sym = 0.5 * (m + m.T)
    if np.linalg.norm(sym) > tol:
        raise NotSkewSymmetric(
            f"symmetric part has norm {np.linalg.norm(sym):.3e} > {tol:.1e}"
        )
    return np.array([m[2, 1], m[0, 2], m[1, 0]])


def exp_so3(f) -> np.ndarray:
    """Rotation matrix for the rotation vector ``f`` (Rodrigues formula).

    R = I + sin(a)/a * f^ + (1 - cos(a))/a^2 * f^ f^  with a = |f|.
    """
    f = np.asarray(f, dtype=float)
    a2 = float(f @ f)
    if not math.isfinite(a2):
        raise ValueError(f"rotation vector is not finite: {f}")
    a = math.sqrt(a2)
    if a < _SMALL_ANGLE:
        s = 1.0 - a2 / 6.0 + a2 * a2 / 120.0
        c = 0.5 - a2 / 24.0 + a2 * a2 / 720.0
    else:
        s = math.sin(a) / a
        c = (1.0 - math.cos(a)) / a2
    fx = hat(f)
    return np.eye(3) + s * fx + c * (fx @ fx)


def log_so3(r) -> np.ndarray:
    """Rotation vector of R with magnitude in [0, pi].

    The angle comes from ``arccos((tr R - 1)/2)`` clamped to [-1, 1].
    Near zero the skew part of R is returned directly.  Within 1e-6 of pi
    the axis is extracted from the largest diagonal entry of (R + I)/2;
    its sign follows the skew part of R when that is above noise and
    otherwise defaults to a positive first nonzero component.
    """
    r = np.asarray(r, dtype=float)
    tr = r[0, 0] + r[1, 1] + r[2, 2]
    cos_a = min(1.0, max(-1.0, 0.5 * (tr - 1.0)))
    a = math.acos(cos_a)
    w = 0.5 * np.array(
        [r[2, 1] - r[1, 2], r[0, 2] - r[2, 0], r[1, 0] - r[0, 1]]
    )
    if a < _SMALL_ANGLE:
        return w
    if math.pi - a < _SMALL_ANGLE:
        b = 0.5 * (r + np.eye(3))
        i = int(np.argmax(np.diag(b)))
        axis = b[:, i] / math.sqrt(b[i, i])
        axis = axis / np.linalg.norm(axis)
        skew_dot = float(axis @ w)
        if abs(skew_dot) > 1e-12:
            if skew_dot < 0.0:
                axis = -axis
        else:
            for comp in axis:
                if abs(comp) > 1e-12:
                    if comp < 0.0:
                        axis = -axis
                    break
        return a * axis
    return (a / math.sin(a)) * w


def principal_angle(r) -> float:
    """Rotation angle of R in [0, pi]."""
    r = np.asarray(r, dtype=float)
    tr = r[0, 0] + r[1, 1] + r[2, 2]
    return math.acos(min(1.0, max(-1.0, 0.5 * (tr - 1.0))))


def check_rotation(r, tol: float = ROTATION_TOL) -> np.ndarray:
    """Validate that ``r`` is a proper rotation; returns it as an array.

    Raises NotRotation when ``|R^T R - I|_F > tol`` or ``|det R - 1| > tol``.
    Matrices produced by exp_so3 satisfy this by construction and need no
    re-check.
    """
    r = np.asarray(r, dtype=float)
    if r.shape != (3, 3):
        raise NotRotation(f"expected a 3x3 matrix, got shape {r.shape}")
    err = np.linalg.norm(r.T @ r - np.eye(3))
    if err > tol:
        raise NotRotation(f"|R^T R - I| = {err:.3e} > {tol:.1e}")
    det = np.linalg.det(r)
    if abs(det - 1.0) > tol:
        raise NotRotation(f"det R = {det!r} differs from 1 by more than {tol:.1e}")
    return r


def check_error_weights(k) -> np.ndarray:
    """Validate diagonal error weights: positive and pairwise distinct."""
    k = np.asarray(k, dtype=float)
    if k.shape != (3,):
        raise ValueError("error weights must be a length-3 vector")
    if not np.all(k > 0.0):
        raise ValueError(f"error weights must be positive, got {k}")
    if (
        abs(k[0] - k[1]) <= 1e-12
        or abs(k[0] - k[2]) <= 1e-12
        or abs(k[1] - k[2]) <= 1e-12
    ):
        raise ValueError(f"error weights must be pairwise distinct, got {k}")
    return k


def morse_error(q, k) -> float:
    """Weighted attitude error <K, I - Q> = sum k_i (1 - Q_ii).

    Nonnegative on SO(3); zero exactly at Q = I.  Computed from the
    diagonal of Q, which equals the full trace form for diagonal K.
    """
    return float(
        k[0] * (1.0 - q[0, 0]) + k[1] * (1.0 - q[1, 1]) + k[2] * (1.0 - q[2, 2])
    )


def morse_gradient(q, k) -> np.ndarray:
    """Gradient-like error vector sum_i k_i (Q^T e_i) x e_i.

    Satisfies d/dt <K, I - Q> = w . morse_gradient(Q, K) along
    Qdot = Q hat(w).  Vanishes at Q = I and at the three 180-degree
    critical rotations diag(1,-1,-1), diag(-1,1,-1), diag(-1,-1,1).
    """
    return np.array(
        [
            k[2] * q[2, 1] - k[1] * q[1, 2],
            k[0] * q[0, 2] - k[2] * q[2, 0],
            k[1] * q[1, 0] - k[0] * q[0, 1],
        ]
    )
