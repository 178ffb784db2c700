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
# # From couplings to waveguide trajectories
#
# The coupling between two guides decays exponentially with their
# separation, `kappa = a exp(-b Delta)`.  Fitting a coupling scan gives
# `(a, b)` and inverting the law turns a coupling profile into a layout.

# %%
import numpy as np

from holophoton import HADAMARD, PAULI_X, CouplingProfile, evolve_unitary
from holophoton.envelopes import EnvelopeShape, build_envelope
from holophoton.layout import (add_fanning, export_layout, fit_coupling_curve,
                               profile_from_layout, trajectories_from_profile)

# %% [markdown]
# A synthetic scan with 5 % noise.

# %%
rng = np.random.default_rng(0)
delta = np.linspace(5, 20, 8)
kappa = 20 * np.exp(-0.2 * delta) * (1 + 0.05 * rng.standard_normal(delta.size))
fit = fit_coupling_curve(zip(delta, kappa))
print(f"a = {fit.a:.2f}/cm, b = {fit.b:.4f}/um")

# %%
env = build_envelope(EnvelopeShape.full_cosine(2.0, samples_per_cm=500))
for name, gate in (("Pauli-X", PAULI_X), ("Hadamard", HADAMARD)):
    profile = CouplingProfile.from_gate(gate, env)
    layout = add_fanning(trajectories_from_profile(profile, fit), fit, ends="both")
    d_l, d_r = layout.separations
    u0 = evolve_unitary(profile).matrix
    u1 = evolve_unitary(profile_from_layout(layout, fit)).matrix
    print(f"{name}: length {layout.length_mm:.1f} mm, closest approach "
          f"L {d_l.min():.2f} um / R {d_r.min():.2f} um, mirror symmetric "
          f"{layout.is_mirror_symmetric()}, unitary change {np.abs(u1 - u0).max():.1e}")

# %%
print(export_layout(layout, "csv").decode().splitlines()[:4])
