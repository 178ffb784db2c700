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
# # Leakage from a missed cyclicity condition
#
# If the envelope area is `pi + eps` the bright mode does not fully return
# and a fraction `sin^2(eps) sin^2(theta/2)` of a photon launched into L
# ends up in the central guide.

# %%
import numpy as np

from holophoton import HADAMARD, CouplingProfile, evolve_unitary
from holophoton.analysis import leakage
from holophoton.envelopes import EnvelopeShape, build_envelope, scale_to_cyclicity_error
from holophoton.holonomy import leakage_closed_form

env = build_envelope(EnvelopeShape.sandwich(0.25, 0.5, 1.0))

# %%
eps = np.array([0.01, 0.05, 0.1, 0.171, 0.2, 0.4])
simulated = np.array([
    leakage(evolve_unitary(CouplingProfile.from_gate(HADAMARD, scale_to_cyclicity_error(env, e))))[0]
    for e in eps])
for e, s in zip(eps, simulated):
    print(f"eps={e:5.3f}  simulated={s:.6f}  closed form={leakage_closed_form(HADAMARD, e):.6f}")

# %% [markdown]
# For small errors the leakage grows quadratically.

# %%
slope = np.polyfit(np.log(eps[:3]), np.log(simulated[:3]), 1)[0]
print("log-log slope:", round(slope, 4))
