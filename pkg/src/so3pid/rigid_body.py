"""Rigid-body model and fixed-step integrators.

The rotational dynamics are

    Rdot = R hat(Omega),      J Omegadot = J Omega x Omega + tau + D,

advanced by a Lie-group variational step that keeps R on SO(3) exactly
(group multiplication by a Rodrigues exponential, no re-projection).
Translation uses the standard quadrotor model with inertial gravity
``+g e3`` and thrust ``-f R e3``, so a level hover balances at f = m g.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .so3 import exp_so3

__all__ = [
    "GRAVITY",
    "BodyState",
    "InertiaModel",
    "WrenchInput",
    "continuous_rotational_rhs",
    "lgvi_step",
    "translational_step",
]

# m/s^2, along +z inertial (not part of the vehicle data).
GRAVITY = 9.81

_E3 = np.array([0.0, 0.0, 1.0])


@dataclass(frozen=True)
class InertiaModel:
    """Mass and inertia of the vehicle.

    J must be symmetric positive definite (diagonal in practice);
    its inverse is cached for the stepping loop.
    """

    J: np.ndarray
    m: float
    J_inv: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        J = np.asarray(self.J, dtype=float)
        if J.shape != (3, 3):
            raise ValueError(f"inertia matrix must be 3x3, got {J.shape}")
        if np.linalg.norm(J - J.T) > 1e-12:
            raise ValueError("inertia matrix must be symmetric")
        if np.any(np.linalg.eigvalsh(J) <= 0.0):
            raise ValueError("inertia matrix must be positive definite")
        if not self.m > 0.0:
            raise ValueError(f"mass must be positive, got {self.m}")
        object.__setattr__(self, "J", J)
        object.__setattr__(self, "J_inv", np.linalg.inv(J))


@dataclass(frozen=True)
class BodyState:
    """Attitude R (body->inertial), body angular velocity Omega (rad/s),
    inertial position b (m) and body-frame translational velocity nu (m/s).

    The inertial velocity is ``R @ nu``.
    """

    R: np.ndarray
    Omega: np.ndarray
    b: np.ndarray
    nu: np.ndarray


@dataclass(frozen=True)
class WrenchInput:
    """Body torque tau (N m), scalar thrust f (N) along -body-z, and
    disturbance torque D (N m) entering additively with tau."""

    tau: np.ndarray
    f: float = 0.0
    D: np.ndarray = field(default_factory=lambda: np.zeros(3))


def lgvi_step(state: BodyState, wrench: WrenchInput, body: InertiaModel,
              h: float) -> BodyState:
    """One variational step of the rotational dynamics.

        F_k     = exp_so3(h Omega_k)
        R_{k+1} = R_k F_k
        J Omega_{k+1} = F_k^T J Omega_k + h (tau_k + D_k)

    The attitude update is a product of rotations, so orthonormality is
    preserved to rounding without projection, and with zero inputs the
    momentum transport ``F^T J Omega`` is an isometry (|J Omega| constant).
    Position and translational velocity are untouched.
    """
    F = exp_so3(h * state.Omega)
    R_next = state.R @ F
    pi_next = F.T @ (body.J @ state.Omega) + h * (wrench.tau + wrench.D)
    return BodyState(R=R_next, Omega=body.J_inv @ pi_next, b=state.b,
                     nu=state.nu)


def translational_step(state: BodyState, f: float, m: float, g: float,
                       h: float) -> BodyState:
    """Semi-implicit Euler for position: velocity first, then position.

        v_{k+1} = v_k + h (g e3 - (f/m) R e3),   v = R nu
        b_{k+1} = b_k + h v_{k+1}

    All frame conversions use the attitude carried by ``state``.  Attitude
    and angular velocity are untouched.
    """
    v = state.R @ state.nu
    v_next = v + h * (g * _E3 - (f / m) * (state.R @ _E3))
    b_next = state.b + h * v_next
    return BodyState(R=state.R, Omega=state.Omega, b=b_next,
                     nu=state.R.T @ v_next)


def continuous_rotational_rhs(state: BodyState, wrench: WrenchInput,
                              body: InertiaModel) -> np.ndarray:
    """Continuous-time angular acceleration J^-1 (J Omega x Omega + tau + D).

    Used to cross-validate the variational stepper against a conventional
    integrator; not part of the simulation loop.
    """
    JO = body.J @ state.Omega
    return body.J_inv @ (np.cross(JO, state.Omega) + wrench.tau + wrench.D)
