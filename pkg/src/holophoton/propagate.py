"""Numerical propagation of the coupled-mode equations.

``i dU/dz = H(z) U`` is integrated cell by cell on the profile's grid.  Each
grid cell is split into the same number of sub-steps, the per-step
propagators are built for all steps at once, and their ordered product is
taken by pairwise (tree) reduction.

Two back-ends are available and serve as checks on each other:

* ``rk4``: classical Runge-Kutta on the linearly interpolated H(z);
* ``piecewise-exponential``: exact exponential of H averaged over each
  sub-step.  For a common envelope H(z) commutes with itself, so this is
  exact up to rounding.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import permutations

import numpy as np

from .core import (C, CouplingProfile, DomainError, L, LOGICAL, MODES, R,
                   Unitary3, hamiltonian_matrices, unitarity_error)

METHODS = ("rk4", "piecewise-exponential")
PROPAGATION_UNITARITY_TOL = 1e-8
MIN_STEPS_PER_POINT = 10


class PropagationError(RuntimeError):
    pass


@dataclass(frozen=True)
class PropagationConfig:
    """``step_count`` defaults to the minimum, 10 steps per grid point."""

    step_count: int | None = None
    method: str = "rk4"

    def __post_init__(self):
        if self.method not in METHODS:
            raise DomainError(f"unknown method {self.method!r}; use one of {METHODS}")


def _ordered_product(P: np.ndarray) -> np.ndarray:
    """Return P[-1] @ ... @ P[1] @ P[0] for a stack of matrices."""
    while P.shape[0] > 1:
        if P.shape[0] % 2:
            P = np.concatenate([P, np.eye(P.shape[1], dtype=P.dtype)[None]])
        P = P[1::2] @ P[0::2]
    return P[0]


def _expm_hermitian(H: np.ndarray, t: np.ndarray) -> np.ndarray:
    """exp(-i t H) for a stack of Hermitian H via eigendecomposition."""
    w, V = np.linalg.eigh(H)
    phases = np.exp(-1j * w * t[..., None])
    return (V * phases[..., None, :]) @ np.conj(np.swapaxes(V, -1, -2))


def _substeps(profile: CouplingProfile, config: PropagationConfig) -> int:
    n = len(profile)
    steps = config.step_count if config.step_count is not None else MIN_STEPS_PER_POINT * n
    if steps < MIN_STEPS_PER_POINT * n:
        raise PropagationError(
            f"step_count={steps} is too small for a {n}-point grid; "
            f"need at least {MIN_STEPS_PER_POINT * n}")
    return math.ceil(steps / (n - 1))


def _interp_cells(k, frac):
    """Values of a linear profile at fractional positions inside each cell."""
    return k[:-1, None] + frac[None, :] * (k[1:] - k[:-1])[:, None]


def step_propagators(profile: CouplingProfile, config: PropagationConfig) -> np.ndarray:
    """Per-step propagators, shape (steps, 3, 3), in propagation order."""
    m = _substeps(profile, config)
    h = (np.diff(profile.z_grid) / m)[:, None, None, None]
    kl, kr = profile.kappa_L, profile.kappa_R
    start = np.arange(m) / m
    mid = (np.arange(m) + 0.5) / m
    H_mid = hamiltonian_matrices(_interp_cells(kl, mid), _interp_cells(kr, mid))
    if config.method == "piecewise-exponential":
        P = _expm_hermitian(H_mid, h[..., 0, 0])
    else:
        I = np.eye(3)
        H0 = hamiltonian_matrices(_interp_cells(kl, start), _interp_cells(kr, start))
        H1 = hamiltonian_matrices(_interp_cells(kl, start + 1.0 / m),
                                  _interp_cells(kr, start + 1.0 / m))
        A1, A2, A4 = -1j * h * H0, -1j * h * H_mid, -1j * h * H1
        K1 = A1
        K2 = A2 @ (I + 0.5 * K1)
        K3 = A2 @ (I + 0.5 * K2)
        K4 = A4 @ (I + K3)
        P = I + (K1 + 2 * K2 + 2 * K3 + K4) / 6
    return P.reshape(-1, 3, 3)


def evolve_unitary(profile: CouplingProfile,
                   config: PropagationConfig | None = None) -> Unitary3:
    """Propagate from the first to the last grid point and return U(z_f).

    Raises :class:`PropagationError` if the result deviates from unitarity
    by more than 1e-8; the deviation is never corrected silently.
    """
    config = config or PropagationConfig()
    if not (np.all(np.isfinite(profile.kappa_L)) and np.all(np.isfinite(profile.kappa_R))):
        raise DomainError("profile contains NaN or inf")
    U = _ordered_product(step_propagators(profile, config))
    err = unitarity_error(U)
    if not err <= PROPAGATION_UNITARITY_TOL:
        raise PropagationError(
            f"propagated matrix deviates from unitarity by {err:.3e}; "
            "increase step_count")
    return Unitary3(U, tol=PROPAGATION_UNITARITY_TOL)


def single_photon_probabilities(u: Unitary3, input_mode: str | int) -> np.ndarray:
    """Output probabilities (p_L, p_C, p_R) for a photon launched in one mode."""
    k = MODES[input_mode] if isinstance(input_mode, str) else int(input_mode)
    return np.abs(u.matrix[:, k]) ** 2


# two-photon lift ------------------------------------------------------------

TWO_PHOTON_LABELS = ("2L", "2C", "2R", "LC", "LR", "CR")
TWO_PHOTON_BASIS = ((L, L), (C, C), (R, R), (L, C), (L, R), (C, R))


def permanent(a: np.ndarray) -> complex:
    """Permanent by direct expansion; fine for the tiny matrices used here."""
    a = np.asarray(a)
    n = a.shape[0]
    if n == 0:
        return 1.0
    return sum(np.prod(a[np.arange(n), list(p)]) for p in permutations(range(n)))


def _occupation_norm(modes) -> float:
    counts = np.bincount(modes, minlength=3)
    return math.prod(math.factorial(c) for c in counts)


@dataclass(frozen=True, eq=False)
class TwoPhotonUnitary:
    """6x6 matrix on (2L, 2C, 2R, LC, LR, CR)."""

    matrix: np.ndarray

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex)
        if m.shape != (6, 6):
            raise DomainError("two-photon unitary must be 6x6")
        err = unitarity_error(m)
        if not err <= 1e-9:
            raise DomainError(f"two-photon matrix not unitary (deviation {err:.3e})")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    def amplitude(self, out: str, inp: str) -> complex:
        return complex(self.matrix[TWO_PHOTON_LABELS.index(out), TWO_PHOTON_LABELS.index(inp)])


def lift_two_photon(u: Unitary3) -> TwoPhotonUnitary:
    """Action of a single-photon unitary on the two-photon Fock space."""
    U = u.matrix
    out = np.empty((6, 6), dtype=complex)
    for j, om in enumerate(TWO_PHOTON_BASIS):
        for k, im in enumerate(TWO_PHOTON_BASIS):
            sub = U[np.ix_(om, im)]
            out[j, k] = permanent(sub) / math.sqrt(_occupation_norm(om) * _occupation_norm(im))
    return TwoPhotonUnitary(out)


def hom_coincidence(u: Unitary3, indistinguishability: float) -> float:
    """Probability that photons launched in L and R exit in L and R.

    The photons are a mixture: fraction ``q`` indistinguishable (amplitudes
    add through the permanent), the rest distinguishable (probabilities add).
    """
    q = float(indistinguishability)
    if not 0.0 <= q <= 1.0:
        raise DomainError("indistinguishability must lie in [0, 1]")
    S = u.matrix[np.ix_(LOGICAL, LOGICAL)]
    quantum = abs(S[0, 0] * S[1, 1] + S[0, 1] * S[1, 0]) ** 2
    classical = abs(S[0, 0] * S[1, 1]) ** 2 + abs(S[0, 1] * S[1, 0]) ** 2
    return float(q * quantum + (1 - q) * classical)


def hom_visibility(u: Unitary3) -> float:
    classical = hom_coincidence(u, 0.0)
    if classical <= 0.0:
        raise DomainError("classical coincidence is zero; visibility undefined")
    return (classical - hom_coincidence(u, 1.0)) / classical
