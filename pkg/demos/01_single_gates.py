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
# # Single holonomic gates
#
# Three evanescently coupled waveguides (L, C, R).  The outer guides couple
# only to the centre, with couplings `Omega(z) sin(theta/2) e^{i phi}` and
# `Omega(z) cos(theta/2)`.  When the envelope integrates to pi the (L, R)
# block returns to itself, rotated by a purely geometric gate.

# %%
import numpy as np

from holophoton import HADAMARD, PAULI_X, CouplingProfile, evolve_unitary
from holophoton.envelopes import EnvelopeShape, build_envelope
from holophoton.holonomy import analytic_holonomy, dark_bright

np.set_printoptions(precision=4, suppress=True)

# %% [markdown]
# The dark mode never touches the central guide; the bright mode picks up
# a phase of pi.  For the NOT gate the two are the symmetric and
# antisymmetric combinations of L and R.

# %%
modes = dark_bright(PAULI_X)
print("dark  :", modes.dark)
print("bright:", modes.bright)

# %% [markdown]
# Propagate a 1 cm sandwich envelope (cosine ramps around a plateau) for
# the Hadamard and NOT settings and compare with the closed-form gate.

# %%
env = build_envelope(EnvelopeShape.sandwich(0.25, 0.5, 1.0))
for name, gate in (("Hadamard", HADAMARD), ("Pauli-X", PAULI_X)):
    u = evolve_unitary(CouplingProfile.from_gate(gate, env))
    print(name)
    print(" logical block:\n", u.logical_block.real)
    print(" closed form:\n", analytic_holonomy(gate).matrix.real)
    print(" |U|^2 table:\n", u.probability_table())

# %% [markdown]
# Nothing is left in the central waveguide at the output facet.

# %%
print("central amplitude from L:", abs(u.matrix[1, 0]))
