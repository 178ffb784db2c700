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
# # Freedom in the envelope
#
# The gate only depends on the area under `Omega(z)`.  Any shape, and any
# monotone reparametrization of the propagation coordinate, gives the same
# unitary as long as that area stays pi.

# %%
import numpy as np

from holophoton import CouplingProfile, GateSpec, evolve_unitary
from holophoton.envelopes import build_envelope, default_shapes, reparametrize

gate = GateSpec(2.1, 0.7)

# %%
reference = None
for shape in default_shapes():
    env = build_envelope(shape)
    u = evolve_unitary(CouplingProfile.from_gate(gate, env)).matrix
    reference = u if reference is None else reference
    print(f"{shape.kind:16s} peak Omega = {env.omega.max():6.3f}/cm  "
          f"max|U - U_constant| = {np.abs(u - reference).max():.1e}")

# %% [markdown]
# A warp `g(s) = s + 0.3 sin(pi s) / pi` squeezes the first half of the
# envelope and stretches the second.

# %%
env = build_envelope(default_shapes()[1])
warped = reparametrize(env, lambda s: s + 0.3 * np.sin(np.pi * s) / np.pi)
u0 = evolve_unitary(CouplingProfile.from_gate(gate, env)).matrix
u1 = evolve_unitary(CouplingProfile.from_gate(gate, warped)).matrix
print("peak moved from", env.z_grid[env.omega.argmax()], "to", warped.z_grid[warped.omega.argmax()])
print("unitary change:", np.abs(u1 - u0).max())
