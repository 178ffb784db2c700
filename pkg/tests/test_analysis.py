import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from holophoton.core import HADAMARD, PAULI_X, CouplingProfile, DomainError, GateSpec, Unitary3
from holophoton.envelopes import EnvelopeShape, build_envelope, scale_to_cyclicity_error
from holophoton.holonomy import analytic_full_unitary
from holophoton.analysis import (CountTable, NoiseModel, PerturbationModel, average_fidelity,
                                 count_uncertainty, fidelity_uncertainty, ideal_table, leakage,
                                 perturb_profile, robustness_sweep, simulate_counts)
from holophoton.propagate import evolve_unitary

SANDWICH = build_envelope(EnvelopeShape.sandwich(0.25, 0.5, 1.0))
IDENTITY_TABLE = np.eye(2)
NOT_TABLE = np.eye(2)[::-1]

rows = st.floats(0, 1).map(lambda p: [p, 1 - p])
tables = st.lists(rows, min_size=2, max_size=2).map(np.array)


def test_self_fidelity():
    t = np.array([[0.3, 0.7], [0.9, 0.1]])
    assert average_fidelity(t, t) == pytest.approx(1)


def test_fidelity_near_hadamard():
    p_exp = np.array([[0.55, 0.45], [0.45, 0.55]])
    expected = (math.sqrt(0.5 * 0.55) + math.sqrt(0.5 * 0.45)) ** 2
    assert average_fidelity(ideal_table(HADAMARD), p_exp) == pytest.approx(expected, abs=1e-12)
    assert average_fidelity(ideal_table(HADAMARD), p_exp) == pytest.approx(0.99749, abs=1e-5)


def test_fidelity_orthogonal_outcomes():
    assert average_fidelity(IDENTITY_TABLE, NOT_TABLE) == 0


def test_fidelity_averages_over_inputs():
    # input 0 is right, input 1 is wrong
    assert average_fidelity(IDENTITY_TABLE, [[1, 0], [1, 0]]) == pytest.approx(0.5)


def test_fidelity_renormalizes_rows():
    lossy = 0.9 * ideal_table(HADAMARD)
    assert average_fidelity(ideal_table(HADAMARD), lossy) == pytest.approx(1)


def test_fidelity_rejects_negative():
    with pytest.raises(DomainError):
        average_fidelity(IDENTITY_TABLE, [[1.1, -0.1], [0, 1]])


@settings(max_examples=60, deadline=None)
@given(tables, tables)
def test_fidelity_symmetric_and_bounded(a, b):
    f = average_fidelity(a, b)
    assert f == pytest.approx(average_fidelity(b, a), abs=1e-12)
    assert 0 <= f <= 1


@settings(max_examples=60, deadline=None)
@given(tables, tables)
def test_fidelity_one_only_for_equal_tables(a, b):
    if average_fidelity(a, b) >= 1 - 1e-12:
        np.testing.assert_allclose(a, b, atol=1e-5)


def test_count_uncertainty_examples():
    assert count_uncertainty(10000, 10000) == pytest.approx(200)
    assert count_uncertainty(0, 5000) == pytest.approx(50)
    assert count_uncertainty(0, 0) == 0


def test_simulate_counts_deterministic():
    u = analytic_full_unitary(HADAMARD)
    a = simulate_counts(u, NoiseModel(rng_seed=5))
    b = simulate_counts(u, NoiseModel(rng_seed=5))
    np.testing.assert_array_equal(a.counts, b.counts)
    np.testing.assert_array_equal(a.central_counts, b.central_counts)
    c = simulate_counts(u, NoiseModel(rng_seed=6))
    assert not np.array_equal(a.counts, c.counts)


def test_simulate_counts_noiseless_pauli_x():
    t = simulate_counts(analytic_full_unitary(PAULI_X), NoiseModel(100_000, 0.0, 1))
    np.testing.assert_array_equal(t.counts, [[0, 100_000], [100_000, 0]])
    np.testing.assert_array_equal(t.central_counts, [0, 0])


@pytest.mark.parametrize("seed", range(10))
def test_simulate_counts_hadamard_within_three_sigma(seed):
    shots = 10_000
    t = simulate_counts(analytic_full_unitary(HADAMARD), NoiseModel(shots, 0.0, seed))
    p = t.counts / shots
    sigma = math.sqrt(0.25 / shots)
    assert np.all(np.abs(p - 0.5) <= 3 * sigma)


def test_simulate_counts_converges_with_shots():
    u = Unitary3(analytic_full_unitary(GateSpec(1.0, 0.3)).matrix)
    target = u.probability_table()
    errs = []
    for shots in (10**3, 10**5):
        dev = [np.abs(simulate_counts(u, NoiseModel(shots, 0.0, s)).probabilities() - target).max()
               for s in range(20)]
        errs.append(np.mean(dev))
    # O(1/sqrt(shots)): a factor 100 in shots gives about 10x less error
    assert 5 <= errs[0] / errs[1] <= 20


def test_count_table_validation():
    with pytest.raises(DomainError):
        CountTable([[10, 10], [0, 0]], [0, 0], [15, 15])
    with pytest.raises(DomainError):
        NoiseModel(shots_per_input=0)
    with pytest.raises(DomainError):
        NoiseModel(outcoupling_variation=1.0)


def test_count_table_uncertainties():
    t = CountTable([[5000, 5000], [5000, 5000]], [0, 0], [10000, 10000])
    np.testing.assert_allclose(t.probability_uncertainties(), (math.sqrt(5000) + 100) / 10000)
    np.testing.assert_allclose(t.central_fraction(), 0)
    assert 0 < fidelity_uncertainty(ideal_table(HADAMARD), t) < 0.05


def test_leakage_examples():
    assert leakage(analytic_full_unitary(HADAMARD)) == pytest.approx((0, 0), abs=1e-12)
    assert leakage(evolve_unitary(CouplingProfile.zero())) == (0, 0)
    env = scale_to_cyclicity_error(SANDWICH, 0.171)
    l0, _ = leakage(evolve_unitary(CouplingProfile.from_gate(HADAMARD, env)))
    assert l0 == pytest.approx(math.sin(0.171) ** 2 * math.sin(3 * math.pi / 8) ** 2, abs=1e-6)
    assert l0 == pytest.approx(0.0247, abs=1e-4)


def test_zero_strength_sweep():
    res = robustness_sweep(HADAMARD, SANDWICH, PerturbationModel("weight-jitter", trials=5))
    assert res.mean_fidelity == pytest.approx(1, abs=1e-12)
    assert res.std_fidelity <= 1e-12


def test_wavelength_shift_preserving_integral_pauli_x():
    model = PerturbationModel("wavelength-shift", sigma_a=0.05, sigma_b=0.05,
                              preserve_integral=True, trials=10, rng_seed=3)
    res = robustness_sweep(PAULI_X, SANDWICH, model)
    assert res.min_fidelity == pytest.approx(1, abs=1e-9)


def test_wavelength_shift_without_compensation_hurts():
    model = PerturbationModel("wavelength-shift", sigma_a=0.2, trials=10, rng_seed=3)
    res = robustness_sweep(HADAMARD, SANDWICH, model)
    assert res.min_fidelity < 1 - 1e-6


def test_envelope_jitter_regression():
    model = PerturbationModel("envelope-jitter", sigma=0.05, trials=100, rng_seed=7)
    res = robustness_sweep(HADAMARD, SANDWICH, model)
    assert res.mean_fidelity > 0.99
    assert res.mean_fidelity == pytest.approx(0.9999999998873507, abs=1e-12)


def test_weight_jitter_breaks_protection():
    model = PerturbationModel("weight-jitter", sigma=0.05, correlation_length=0.1, trials=10)
    res = robustness_sweep(HADAMARD, SANDWICH, model)
    assert 0.99 < res.mean_fidelity < 1 - 1e-6


def test_sweep_independent_of_workers():
    model = PerturbationModel("weight-jitter", sigma=0.03, trials=8, rng_seed=11)
    a = robustness_sweep(HADAMARD, SANDWICH, model)
    b = robustness_sweep(HADAMARD, SANDWICH, model, workers=4)
    assert a.to_json() == b.to_json()
    assert [r["trial"] for r in a.records] == list(range(8))


def test_envelope_jitter_keeps_weight_ratio(rng):
    p = CouplingProfile.from_gate(HADAMARD, SANDWICH)
    q, _ = perturb_profile(p, PerturbationModel("envelope-jitter", sigma=0.1), rng)
    on = p.magnitude > 0
    np.testing.assert_allclose(q.kappa_L[on] / q.kappa_R[on], p.kappa_L[on] / p.kappa_R[on])


def test_perturbation_model_validation():
    with pytest.raises(DomainError):
        PerturbationModel("bend-loss")
    with pytest.raises(DomainError):
        PerturbationModel("weight-jitter", sigma=-0.1)
    with pytest.raises(DomainError):
        PerturbationModel("weight-jitter", trials=0)


def test_rescaling_leaves_fidelity_exact():
    gate = GateSpec(2.0, 0.4)
    env = build_envelope(EnvelopeShape.full_cosine(1.0))
    for c in (0.5, 3.0):
        p = CouplingProfile(env.z_grid / c, c * env.omega * gate.weights[0],
                            c * env.omega * gate.weights[1])
        u = evolve_unitary(p)
        assert average_fidelity(ideal_table(gate), u.probability_table()) == pytest.approx(
            1, abs=1e-12)
