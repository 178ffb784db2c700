import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from holophoton.core import (C, HADAMARD, L, R, CouplingProfile, DomainError,
                             EnvelopeProfile, GateSpec, Holonomy2, QubitState, Unitary3,
                             hamiltonian_at)
from holophoton.envelopes import EnvelopeShape, build_envelope

angles = st.floats(-20, 20, allow_nan=False)


def test_gate_spec_normalizes_angles():
    g = GateSpec(2 * math.pi + 0.5, -0.25)
    assert g.theta == pytest.approx(0.5)
    assert g.phi == pytest.approx(2 * math.pi - 0.25)
    assert 0 <= GateSpec(-1e-300).theta < 2 * math.pi


def test_hamiltonian_constant_profile():
    p = CouplingProfile(np.linspace(0, 1, 5), np.ones(5), np.ones(5))
    H = hamiltonian_at(p, 0.37)
    expected = np.zeros((3, 3))
    expected[C, L] = expected[C, R] = expected[L, C] = expected[R, C] = 1
    np.testing.assert_array_equal(H, expected)


def test_hamiltonian_hadamard_weights():
    env = EnvelopeProfile(np.linspace(0, 1, 3), np.ones(3))
    H = hamiltonian_at(CouplingProfile.from_gate(HADAMARD, env), 0.5)
    assert H[C, L] == pytest.approx(0.9238795325112867, abs=1e-15)
    assert H[C, R] == pytest.approx(0.3826834323650898, abs=1e-15)


def test_hamiltonian_zero_envelope():
    H = hamiltonian_at(CouplingProfile.zero(), 0.3)
    assert not H.any()


def test_hamiltonian_outside_grid():
    with pytest.raises(DomainError):
        hamiltonian_at(CouplingProfile.zero(), 1.5)


def test_hamiltonian_interpolates_linearly():
    p = CouplingProfile([0.0, 1.0], [0.0, 2.0], [1.0, 3.0 + 1j])
    H = hamiltonian_at(p, 0.25)
    assert H[C, L] == pytest.approx(0.5)
    assert H[C, R] == pytest.approx(1.5 + 0.25j)


@settings(max_examples=50, deadline=None)
@given(angles, angles, st.floats(0, 1))
def test_hamiltonian_structure(theta, phi, z):
    env = build_envelope(EnvelopeShape.full_cosine(1.0, samples_per_cm=50))
    p = CouplingProfile.from_gate(GateSpec(theta, phi), env)
    H = hamiltonian_at(p, z)
    assert np.max(np.abs(H - H.conj().T)) <= 1e-12
    assert H[L, R] == 0 and H[R, L] == 0
    assert not np.diag(H).any()
    assert np.max(np.abs(p.magnitude - env.omega)) <= 1e-12


def test_envelope_rejects_bad_input():
    with pytest.raises(DomainError):
        EnvelopeProfile([0.0], [1.0])
    with pytest.raises(DomainError):
        EnvelopeProfile([0.0, 1.0, 0.5], [1, 1, 1])
    with pytest.raises(DomainError):
        EnvelopeProfile([0.0, 1.0], [1, -1])
    with pytest.raises(DomainError):
        EnvelopeProfile([0.0, 1.0], [1.0, 1.0], cyclic=True)


def test_coupling_profile_rejects_nan():
    with pytest.raises(DomainError):
        CouplingProfile([0, 1], [np.nan, 0], [0, 0])


def test_unitary_and_qubit_validation():
    with pytest.raises(DomainError):
        Unitary3(np.ones((3, 3)))
    with pytest.raises(DomainError):
        Holonomy2(np.ones((2, 2)))
    with pytest.raises(DomainError):
        QubitState(1.0, 1.0)
    u = Unitary3(np.eye(3)[[2, 1, 0]])
    np.testing.assert_array_equal(u.probability_table(), [[0, 1], [1, 0]])


def test_profiles_are_immutable():
    env = EnvelopeProfile([0.0, 1.0], [1.0, 1.0])
    with pytest.raises(ValueError):
        env.omega[0] = 3.0
