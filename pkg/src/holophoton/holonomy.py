"""Closed-form holonomy algebra for the three-waveguide coupler.

The dark mode never touches the central waveguide; the bright mode couples
to it with strength Omega(z).  After a cyclic evolution (integral pi) the
bright mode returns with a sign flip, so the gate on (L, C, R) is the
reflection ``2|dark><dark| - I``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import cumulative_trapezoid

from .core import (CouplingProfile, DomainError, EnvelopeProfile, GateSpec,
                   Holonomy2, LOGICAL, Unitary3, hamiltonian_matrices)

C_UNIT = np.array([0, 1, 0], dtype=complex)


@dataclass(frozen=True, eq=False)
class ModePair:
    dark: np.ndarray
    bright: np.ndarray


def dark_bright(gate: GateSpec) -> ModePair:
    """Dark and bright mode vectors on (L, C, R)."""
    s, c = np.sin(gate.theta / 2), np.cos(gate.theta / 2)
    dark = np.array([-c, 0, s * np.exp(1j * gate.phi)], dtype=complex)
    bright = np.array([s * np.exp(-1j * gate.phi), 0, c], dtype=complex)
    return ModePair(dark, bright)


@dataclass(frozen=True, eq=False)
class GeometricFrame:
    """Modes spanning the geometric subspace along the envelope's grid."""

    gate: GateSpec
    z_grid: np.ndarray
    delta: np.ndarray

    @classmethod
    def from_envelope(cls, gate: GateSpec, envelope: EnvelopeProfile) -> "GeometricFrame":
        delta = cumulative_trapezoid(envelope.omega, envelope.z_grid, initial=0.0)
        return cls(gate, envelope.z_grid, delta)

    @property
    def phi1(self) -> np.ndarray:
        return dark_bright(self.gate).dark

    def delta_at(self, z):
        return np.interp(z, self.z_grid, self.delta)

    def phi2_at(self, z) -> np.ndarray:
        """Second frame vector; shape (..., 3) for array ``z``."""
        d = np.asarray(self.delta_at(z))[..., None]
        b = dark_bright(self.gate).bright
        return np.exp(1j * d) * (np.cos(d) * b - 1j * np.sin(d) * C_UNIT)

    def vectors(self) -> np.ndarray:
        """Frame on every grid point, shape (n, 3, 2) with columns (phi1, phi2)."""
        n = self.z_grid.size
        out = np.empty((n, 3, 2), dtype=complex)
        out[:, :, 0] = self.phi1
        out[:, :, 1] = self.phi2_at(self.z_grid)
        return out


def holonomic_condition_residual(profile: CouplingProfile, frame: GeometricFrame) -> float:
    """Largest |<phi_m(z)|H(z)|phi_l(z)>| over the grid and m, l in {1, 2}."""
    if (profile.z_grid.shape != frame.z_grid.shape
            or not np.allclose(profile.z_grid, frame.z_grid, rtol=0, atol=1e-12)):
        raise DomainError("profile and frame live on different grids")
    H = hamiltonian_matrices(profile.kappa_L, profile.kappa_R)
    F = frame.vectors()
    M = np.conj(np.swapaxes(F, 1, 2)) @ H @ F
    return float(np.max(np.abs(M)))


def anandan_connection(gate: GateSpec, envelope: EnvelopeProfile, z: float) -> np.ndarray:
    """Connection ``<Phi_j|d/dz Phi_k>`` in the (Phi1, Phi2) frame.

    It only depends on the envelope: ``[[0, 0], [0, i Omega(z)]]``.
    """
    om = float(np.interp(z, envelope.z_grid, envelope.omega))
    return np.array([[0, 0], [0, 1j * om]], dtype=complex)


def connection_holonomy(gate: GateSpec, envelope: EnvelopeProfile) -> tuple[np.ndarray, Holonomy2]:
    """Path-ordered exponential of the connection.

    Returns the frame representation and the same operator expressed on the
    logical (L, R) modes.  The connection is diagonal, so path ordering
    reduces to exponentiating the integrated phase.
    """
    phase = envelope.integral
    frame_rep = np.diag([1.0, np.exp(1j * phase)])
    # frame at z_i is (dark, bright), both inside the logical span
    modes = dark_bright(gate)
    basis = np.stack([modes.dark[list(LOGICAL)], modes.bright[list(LOGICAL)]], axis=1)
    return frame_rep, Holonomy2(basis @ frame_rep @ basis.conj().T)


def analytic_holonomy(gate: GateSpec) -> Holonomy2:
    """The logical gate [[cos t, -e^{-ip} sin t], [-e^{ip} sin t, -cos t]]."""
    t, p = gate.theta, gate.phi
    return Holonomy2(np.array([
        [np.cos(t), -np.exp(-1j * p) * np.sin(t)],
        [-np.exp(1j * p) * np.sin(t), -np.cos(t)],
    ]))


def analytic_full_unitary(gate: GateSpec) -> Unitary3:
    """Cyclic-evolution unitary on (L, C, R): ``2|dark><dark| - I``."""
    d = dark_bright(gate).dark
    return Unitary3(2 * np.outer(d, d.conj()) - np.eye(3))


def analytic_unitary_at_phase(gate: GateSpec, delta: float) -> Unitary3:
    """Unitary after accumulated envelope phase ``delta`` (any, not only pi)."""
    m = dark_bright(gate)
    d, b = m.dark, m.bright
    P = lambda u, v: np.outer(u, v.conj())  # noqa: E731
    U = (P(d, d) + np.cos(delta) * (P(b, b) + P(C_UNIT, C_UNIT))
         - 1j * np.sin(delta) * (P(C_UNIT, b) + P(b, C_UNIT)))
    return Unitary3(U)


def leakage_closed_form(gate: GateSpec, epsilon: float) -> float:
    """Central-mode probability from input L for cyclicity error ``epsilon``."""
    return float(np.sin(epsilon) ** 2 * np.sin(gate.theta / 2) ** 2)


def unit_hamiltonian(gate: GateSpec) -> np.ndarray:
    """Hamiltonian with unit envelope; exp(-i pi M) is the cyclic gate."""
    wl, wr = gate.weights
    return hamiltonian_matrices(wl, wr)
