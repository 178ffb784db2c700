import json
import math

import numpy as np
import pytest

from holophoton.core import (HADAMARD, IDENTITY2, PAULI_X, ZERO, DomainError, GateSpec)
from holophoton.envelopes import EnvelopeShape
from holophoton.holonomy import analytic_holonomy
from holophoton.sequence import (GateElement, GateSequence, InertElement,
                                 build_sequence_profile, commutator_experiment,
                                 compose_analytic, load_sequence, penny_flipover,
                                 penny_sequence, penny_win_from_counts, propagate_sequence)
from holophoton.analysis import NoiseModel

Z = np.diag([1, -1])
X = np.array([[0, 1], [1, 0]])
SHORT = EnvelopeShape.sandwich(0.1, 0.2, 0.4, samples_per_cm=1000)


def _hand_product(*gates):
    # first listed acts first, so it is the rightmost factor
    m = np.eye(2)
    for g in gates:
        m = analytic_holonomy(g).matrix @ m
    return m


def test_hxh_is_minus_z():
    U = compose_analytic(GateSequence.of(HADAMARD, PAULI_X, HADAMARD))
    np.testing.assert_allclose(U.matrix, -Z, atol=1e-15)


def test_xhh_is_minus_x():
    U = compose_analytic(GateSequence.of(PAULI_X, HADAMARD, HADAMARD))
    np.testing.assert_allclose(U.matrix, -X, atol=1e-15)


def test_inert_is_identity():
    U = compose_analytic(GateSequence.of(HADAMARD, 2.0, HADAMARD))
    np.testing.assert_allclose(U.matrix, np.eye(2), atol=1e-15)


def test_order_convention_on_non_commuting_pair():
    a, b = GateSpec(0.4, 0.0), GateSpec(1.3, 0.9)
    np.testing.assert_allclose(compose_analytic(GateSequence.of(a, b)).matrix,
                               _hand_product(a, b), atol=1e-15)
    assert not np.allclose(_hand_product(a, b), _hand_product(b, a))


@pytest.mark.parametrize("gate", [HADAMARD, PAULI_X, GateSpec(1.1, 2.0)])
def test_gates_are_involutions(gate):
    U = analytic_holonomy(gate).matrix
    np.testing.assert_allclose(U @ U, np.eye(2), atol=1e-15)


def test_single_gate_profile_is_padded():
    seq = GateSequence.of(PAULI_X, shape=SHORT, gap_length=0.3)
    p = build_sequence_profile(seq)
    assert p.length == pytest.approx(0.4 + 0.6, abs=1e-8)
    assert np.all(np.diff(p.z_grid) > 0)
    assert p.magnitude[p.z_grid < 0.3].max() == 0
    assert p.magnitude[p.z_grid > 0.7 + 1e-8].max() == 0
    assert np.trapezoid(p.magnitude, p.z_grid) == pytest.approx(math.pi, abs=1e-9)


@pytest.mark.parametrize("items", [
    (HADAMARD, PAULI_X, HADAMARD),
    (HADAMARD, 1.0, HADAMARD),
    (GateSpec(0.3, 1.0), GateSpec(2.5, 0.2)),
])
def test_propagation_matches_product(items):
    seq = GateSequence.of(*items, shape=SHORT, gap_length=0.2)
    u = propagate_sequence(seq)
    np.testing.assert_allclose(u.logical_block, compose_analytic(seq).matrix, atol=1e-6)


def test_mixed_shapes_and_zero_gap():
    els = (GateElement(HADAMARD, EnvelopeShape.constant(0.5)),
           GateElement(PAULI_X, EnvelopeShape.full_cosine(0.7)),
           GateElement(GateSpec(1.0, 0.5), EnvelopeShape.raised_gaussian(0.1, 0.5)))
    seq = GateSequence(els, gap_length=0.0)
    u = propagate_sequence(seq)
    np.testing.assert_allclose(u.logical_block, compose_analytic(seq).matrix, atol=1e-6)


def test_commutator_experiment():
    res = commutator_experiment(SHORT, gap_length=0.1)
    assert res["probs_HXH"][0, 0] == pytest.approx(1, abs=1e-6)
    assert res["probs_HHX"][0, 1] == pytest.approx(1, abs=1e-6)
    assert res["max_difference"] == pytest.approx(1, abs=1e-6)


@pytest.mark.parametrize("flips", [True, False])
def test_penny_q_always_wins(flips):
    res = penny_flipover(flips, SHORT, gap_length=0.1)
    assert res["q_win_probability"] == pytest.approx(1, abs=1e-6)
    assert abs(res["final_state"].vector[0]) == pytest.approx(1, abs=1e-6)


def test_first_move_makes_pauli_x_eigenstate():
    psi = analytic_holonomy(HADAMARD) @ ZERO
    out = analytic_holonomy(PAULI_X) @ psi
    # U_H|0> = -(|0>+|1>)/sqrt2 and U_X = -X, so the eigenvalue is -1
    np.testing.assert_allclose(psi.vector, -np.array([1, 1]) / math.sqrt(2), atol=1e-15)
    np.testing.assert_allclose(out.vector, -psi.vector, atol=1e-15)


@pytest.mark.parametrize("inert", [0.01, 0.5, 3.0])
def test_game_invariant_under_inert_insertion(inert):
    base = penny_sequence(True, SHORT, gap_length=0.1)
    padded = GateSequence(base.elements[:1] + (InertElement(inert),) + base.elements[1:]
                          + (InertElement(inert),), base.gap_length)
    u0, u1 = propagate_sequence(base), propagate_sequence(padded)
    np.testing.assert_allclose(u1.logical_block, u0.logical_block, atol=1e-9)


def test_penny_noflip_keeps_total_length():
    flip = build_sequence_profile(penny_sequence(True, SHORT))
    noflip = build_sequence_profile(penny_sequence(False, SHORT))
    assert flip.length == pytest.approx(noflip.length, abs=1e-8)


def test_penny_win_from_counts():
    win = penny_win_from_counts(True, NoiseModel(rng_seed=4), SHORT, gap_length=0.1)
    assert 0.97 <= win <= 1.0


def test_sequence_validation():
    with pytest.raises(DomainError):
        GateSequence(())
    with pytest.raises(DomainError):
        GateSequence((HADAMARD,))
    with pytest.raises(DomainError):
        InertElement(0.0)
    assert compose_analytic(GateSequence.of(1.0)).matrix.tolist() == IDENTITY2.matrix.tolist()


def test_load_sequence_list_and_object():
    records = [{"type": "gate", "theta": 3 * math.pi / 4},
               {"type": "inert", "length": 0.5},
               {"type": "gate", "theta": math.pi / 2, "phi": 0.0,
                "envelope": "full-cosine", "length": 0.8}]
    seq = load_sequence(json.dumps(records))
    assert len(seq.elements) == 3
    assert seq.elements[2].shape.kind == "full-cosine"
    assert seq.elements[2].shape.total_length == 0.8
    obj = load_sequence(json.dumps({"elements": records, "gap_length": 0.25}))
    assert obj.gap_length == 0.25
    np.testing.assert_allclose(compose_analytic(obj).matrix,
                               _hand_product(HADAMARD, PAULI_X), atol=1e-15)


@pytest.mark.parametrize("text", [
    "[]",
    '[{"type": "mirror"}]',
    '[{"type": "gate"}]',
    '{"elements": []}',
])
def test_load_sequence_errors(text):
    with pytest.raises(DomainError):
        load_sequence(text)
