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
# # Two-photon interference on the Hadamard
#
# One photon enters L and one enters R.  For indistinguishable photons the
# coincidence probability is `|perm(S)|^2` over the 2x2 output submatrix;
# for distinguishable ones it is the classical sum of products.  The
# overlap `q` interpolates between the two.

# %%
import numpy as np

from holophoton import HADAMARD, CouplingProfile, evolve_unitary
from holophoton.envelopes import EnvelopeShape, build_envelope
from holophoton.propagate import hom_coincidence, hom_visibility, lift_two_photon

u = evolve_unitary(CouplingProfile.from_gate(HADAMARD, build_envelope(EnvelopeShape.full_cosine(1.0))))

# %%
for q in np.linspace(0, 1, 6):
    print(f"q={q:.1f}  coincidence={hom_coincidence(u, q):.4f}")
print("visibility:", round(hom_visibility(u), 9))

# %% [markdown]
# The full two-photon transfer matrix shows where the photons go: they
# bunch into 2L or 2R.

# %%
lift = lift_two_photon(u)
for out in ("2L", "2C", "2R", "LC", "LR", "CR"):
    print(f"{out}: {abs(lift.amplitude(out, 'LR')) ** 2:.3f}")
