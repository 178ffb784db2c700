# ---
# jupyter:
#   jupytext:
#     formats: ipynb,py:percent
#     text_representation:
#       extension: .py
#       format_name: percent
#       format_version: '1.3'
#   kernelspec:
#     display_name: Python 3
#     language: python
#     name: python3
# ---

# %% [markdown]
# # Robustness to fabrication noise
#
# Noise that scales both couplings together keeps the weight ratio and
# only shifts the envelope area; noise that acts on each coupling
# separately changes the gate itself.  Counts are drawn with Poisson
# statistics and 1 % outcoupling variation.

# %%
import numpy as np

from holophoton import HADAMARD, CouplingProfile, evolve_unitary
from holophoton.analysis import (NoiseModel, PerturbationModel, average_fidelity, ideal_table,
                                 robustness_sweep, simulate_counts)
from holophoton.envelopes import EnvelopeShape, build_envelope

env = build_envelope(EnvelopeShape.sandwich(0.25, 0.5, 1.0))

# %%
for kind in ("envelope-jitter", "weight-jitter"):
    res = robustness_sweep(HADAMARD, env, PerturbationModel(kind, sigma=0.05, trials=30,
                                                            correlation_length=0.05))
    print(f"{kind:16s} mean F = {res.mean_fidelity:.6f}  min F = {res.min_fidelity:.6f}")

# %%
res = robustness_sweep(HADAMARD, env, PerturbationModel("wavelength-shift", sigma_a=0.05,
                                                        sigma_b=0.05, trials=10))
print(f"wavelength shift mean F = {res.mean_fidelity:.6f}")

# %% [markdown]
# Shot noise alone already limits the measured fidelity.

# %%
u = evolve_unitary(CouplingProfile.from_gate(HADAMARD, env))
f = [average_fidelity(ideal_table(HADAMARD), simulate_counts(u, NoiseModel(rng_seed=s)).probabilities())
     for s in range(100)]
print(f"counted fidelity: {np.mean(f):.5f} +- {np.std(f):.5f}")
