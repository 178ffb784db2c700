"""Design and simulation of non-adiabatic holonomic gates in three-waveguide couplers."""

__version__ = "0.1.0"

from .core import (C, HADAMARD, L, PAULI_X, R, CouplingProfile, DomainError,
                   EnvelopeProfile, GateSpec, Holonomy2, QubitState, Unitary3,
                   hamiltonian_at)
from .envelopes import (EnvelopeShape, build_envelope, check_cyclicity, default_shapes,
                        reparametrize, scale_to_cyclicity_error)
from .holonomy import (GeometricFrame, analytic_full_unitary, analytic_holonomy,
                       anandan_connection, dark_bright, holonomic_condition_residual)
from .propagate import (PropagationConfig, evolve_unitary, hom_coincidence, hom_visibility,
                        lift_two_photon, single_photon_probabilities)

__all__ = [
    "C", "L", "R", "HADAMARD", "PAULI_X",
    "CouplingProfile", "DomainError", "EnvelopeProfile", "GateSpec", "Holonomy2",
    "QubitState", "Unitary3", "hamiltonian_at",
    "EnvelopeShape", "build_envelope", "check_cyclicity", "default_shapes",
    "reparametrize", "scale_to_cyclicity_error",
    "GeometricFrame", "analytic_full_unitary", "analytic_holonomy", "anandan_connection",
    "dark_bright", "holonomic_condition_residual",
    "PropagationConfig", "evolve_unitary", "hom_coincidence", "hom_visibility",
    "lift_two_photon", "single_photon_probabilities",
]
