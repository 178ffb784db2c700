"""Domain types and conventions shared across the package.

Mode ordering is fixed as (L, C, R) everywhere: index 0 is the left
waveguide, 1 the central one, 2 the right one.  The logical qubit lives on
the (L, R) sub-block, with |0> = photon in L and |1> = photon in R.

The coupled-mode equations are taken as ``i da/dz = H(z) a``, so the
propagator is the path-ordered ``exp(-i \\int H dz)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

L, C, R = 0, 1, 2
MODES = {"L": L, "C": C, "R": R}
LOGICAL = (L, R)

TWO_PI = 2.0 * np.pi
CYCLICITY_TOL = 1e-9
UNITARITY_TOL = 1e-9


class DomainError(ValueError):
    """Input outside the domain an operation is defined on."""


def _as_grid(z) -> np.ndarray:
    z = np.asarray(z, dtype=float)
    if z.ndim != 1 or z.size < 2:
        raise DomainError("grid needs at least two points")
    if not np.all(np.isfinite(z)):
        raise DomainError("grid contains non-finite values")
    if np.any(np.diff(z) <= 0):
        raise DomainError("grid must be strictly increasing")
    return z


def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class GateSpec:
    """Weight angles (theta, phi) of one holonomic gate, in radians."""

    theta: float
    phi: float = 0.0

    def __post_init__(self):
        for name in ("theta", "phi"):
            v = float(getattr(self, name))
            if not np.isfinite(v):
                raise DomainError(f"{name} must be finite")
            v = v % TWO_PI
            # 2pi - tiny rounds back onto 2pi in floating point
            if v >= TWO_PI:
                v = 0.0
            object.__setattr__(self, name, v)

    @property
    def weights(self) -> tuple[complex, float]:
        """Return the constant coupling weights (w_L, w_R)."""
        return (np.sin(self.theta / 2) * np.exp(1j * self.phi),
                float(np.cos(self.theta / 2)))


HADAMARD = GateSpec(3 * np.pi / 4, 0.0)
PAULI_X = GateSpec(np.pi / 2, 0.0)


@dataclass(frozen=True, eq=False)
class EnvelopeProfile:
    """Sampled common envelope Omega(z) >= 0 (z in cm, Omega in 1/cm)."""

    z_grid: np.ndarray
    omega: np.ndarray
    cyclic: bool = False

    def __post_init__(self):
        z = _as_grid(self.z_grid)
        om = np.asarray(self.omega, dtype=float)
        if om.shape != z.shape:
            raise DomainError("omega must have one value per grid point")
        if not np.all(np.isfinite(om)):
            raise DomainError("omega contains non-finite values")
        if np.any(om < 0):
            raise DomainError("envelope must be non-negative")
        object.__setattr__(self, "z_grid", _frozen(z.copy()))
        object.__setattr__(self, "omega", _frozen(om.copy()))
        if self.cyclic and abs(self.integral - np.pi) > CYCLICITY_TOL:
            raise DomainError(
                f"profile marked cyclic but integral is {self.integral!r}")

    @property
    def integral(self) -> float:
        return float(np.trapezoid(self.omega, self.z_grid))

    @property
    def length(self) -> float:
        return float(self.z_grid[-1] - self.z_grid[0])

    def __len__(self):
        return self.z_grid.size


@dataclass(frozen=True, eq=False)
class CouplingProfile:
    """Sampled complex couplings kappa_L(z), kappa_R(z) in 1/cm."""

    z_grid: np.ndarray
    kappa_L: np.ndarray
    kappa_R: np.ndarray

    def __post_init__(self):
        z = _as_grid(self.z_grid)
        kl = np.asarray(self.kappa_L, dtype=complex)
        kr = np.asarray(self.kappa_R, dtype=complex)
        if kl.shape != z.shape or kr.shape != z.shape:
            raise DomainError("couplings must have one value per grid point")
        if not (np.all(np.isfinite(kl)) and np.all(np.isfinite(kr))):
            raise DomainError("coupling profile contains NaN or inf")
        object.__setattr__(self, "z_grid", _frozen(z.copy()))
        object.__setattr__(self, "kappa_L", _frozen(kl))
        object.__setattr__(self, "kappa_R", _frozen(kr))

    @classmethod
    def from_gate(cls, gate: GateSpec, envelope: EnvelopeProfile) -> "CouplingProfile":
        wl, wr = gate.weights
        return cls(envelope.z_grid, envelope.omega * wl, envelope.omega * wr)

    @classmethod
    def zero(cls, length: float = 1.0, n: int = 11) -> "CouplingProfile":
        z = np.linspace(0.0, length, n)
        return cls(z, np.zeros(n), np.zeros(n))

    @property
    def magnitude(self) -> np.ndarray:
        """Pointwise sqrt(|kappa_L|^2 + |kappa_R|^2)."""
        return np.hypot(np.abs(self.kappa_L), np.abs(self.kappa_R))

    @property
    def length(self) -> float:
        return float(self.z_grid[-1] - self.z_grid[0])

    def kappa_at(self, z) -> tuple[np.ndarray, np.ndarray]:
        z = np.asarray(z, dtype=float)
        if np.any(z < self.z_grid[0]) or np.any(z > self.z_grid[-1]):
            raise DomainError(
                f"z outside [{self.z_grid[0]}, {self.z_grid[-1]}]")
        kl = (np.interp(z, self.z_grid, self.kappa_L.real)
              + 1j * np.interp(z, self.z_grid, self.kappa_L.imag))
        kr = (np.interp(z, self.z_grid, self.kappa_R.real)
              + 1j * np.interp(z, self.z_grid, self.kappa_R.imag))
        return kl, kr

    def shifted(self, dz: float) -> "CouplingProfile":
        return CouplingProfile(self.z_grid + dz, self.kappa_L, self.kappa_R)

    def __len__(self):
        return self.z_grid.size


def hamiltonian_matrices(kappa_L, kappa_R) -> np.ndarray:
    """Stack of 3x3 coupled-mode Hamiltonians for arrays of couplings."""
    kl = np.asarray(kappa_L, dtype=complex)
    kr = np.asarray(kappa_R, dtype=complex)
    H = np.zeros(kl.shape + (3, 3), dtype=complex)
    H[..., C, L] = kl
    H[..., C, R] = kr
    H[..., L, C] = np.conj(kl)
    H[..., R, C] = np.conj(kr)
    return H


def hamiltonian_at(profile: CouplingProfile, z: float) -> np.ndarray:
    """Coupled-mode Hamiltonian at position ``z`` (linear interpolation).

    ``H[C, L] = kappa_L`` and ``H[C, R] = kappa_R``; there is no direct L-R
    element and the diagonal is zero.
    """
    kl, kr = profile.kappa_at(z)
    return hamiltonian_matrices(kl, kr)


def unitarity_error(m: np.ndarray) -> float:
    m = np.asarray(m)
    return float(np.max(np.abs(m.conj().T @ m - np.eye(m.shape[0]))))


@dataclass(frozen=True, eq=False)
class Unitary3:
    """3x3 unitary on (L, C, R)."""

    matrix: np.ndarray
    tol: float = field(default=UNITARITY_TOL, repr=False)

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex)
        if m.shape != (3, 3):
            raise DomainError("Unitary3 needs a 3x3 matrix")
        err = unitarity_error(m)
        if not err <= self.tol:
            raise DomainError(f"matrix is not unitary (deviation {err:.3e})")
        object.__setattr__(self, "matrix", _frozen(m))

    @property
    def unitarity_error(self) -> float:
        return unitarity_error(self.matrix)

    @property
    def logical_block(self) -> np.ndarray:
        return self.matrix[np.ix_(LOGICAL, LOGICAL)]

    def probability_table(self) -> np.ndarray:
        """p[k, j]: detect logical j after launching logical k (unnormalized)."""
        return np.abs(self.logical_block.T) ** 2

    def __matmul__(self, other: "Unitary3") -> "Unitary3":
        return Unitary3(self.matrix @ other.matrix, tol=max(self.tol, other.tol))


@dataclass(frozen=True)
class QubitState:
    amplitude_0: complex
    amplitude_1: complex

    def __post_init__(self):
        n = abs(self.amplitude_0) ** 2 + abs(self.amplitude_1) ** 2
        if abs(n - 1.0) > 1e-9:
            raise DomainError(f"qubit state not normalized (norm^2 = {n})")

    @classmethod
    def from_vector(cls, v) -> "QubitState":
        v = np.asarray(v, dtype=complex)
        return cls(complex(v[0]), complex(v[1]))

    @property
    def vector(self) -> np.ndarray:
        return np.array([self.amplitude_0, self.amplitude_1], dtype=complex)

    def probabilities(self) -> np.ndarray:
        return np.abs(self.vector) ** 2


ZERO = QubitState(1.0, 0.0)
ONE = QubitState(0.0, 1.0)


@dataclass(frozen=True, eq=False)
class Holonomy2:
    """2x2 logical gate on (|0>, |1>)."""

    matrix: np.ndarray

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex)
        if m.shape != (2, 2):
            raise DomainError("Holonomy2 needs a 2x2 matrix")
        err = unitarity_error(m)
        if not err <= UNITARITY_TOL:
            raise DomainError(f"matrix is not unitary (deviation {err:.3e})")
        object.__setattr__(self, "matrix", _frozen(m))

    def __matmul__(self, other):
        if isinstance(other, Holonomy2):
            return Holonomy2(self.matrix @ other.matrix)
        if isinstance(other, QubitState):
            return QubitState.from_vector(self.matrix @ other.vector)
        return NotImplemented

    def probability_table(self) -> np.ndarray:
        return np.abs(self.matrix.T) ** 2


IDENTITY2 = Holonomy2(np.eye(2))
