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
# # Gate sequences, non-commutativity and the penny game
#
# Gates are placed one after another on the same chip, separated by
# decoupled stretches.  Sequences are written in propagation order.

# %%
import numpy as np

from holophoton import GateSpec
from holophoton.sequence import (GateSequence, commutator_experiment, compose_analytic,
                                 penny_flipover, propagate_sequence)

np.set_printoptions(precision=4, suppress=True)

# %% [markdown]
# H-X-H and X-H-H contain the same gates but send |0> to different outputs.

# %%
res = commutator_experiment()
print("H-X-H table:\n", res["probs_HXH"])
print("X-H-H table:\n", res["probs_HHX"])
print("max difference:", round(res["max_difference"], 9))

# %% [markdown]
# A random five-gate chip agrees with the product of closed-form gates.

# %%
rng = np.random.default_rng(3)
seq = GateSequence.of(*[GateSpec(*rng.uniform(0, 2 * np.pi, 2)) for _ in range(5)])
u = propagate_sequence(seq)
print("deviation:", np.abs(u.logical_block - compose_analytic(seq).matrix).max())

# %% [markdown]
# In the penny game Q plays a Hadamard, P flips or not, Q plays another
# Hadamard.  Q wins when the penny ends heads up, which happens every time.

# %%
for flips in (True, False):
    game = penny_flipover(flips)
    print(f"P flips={flips!s:5s}  Q wins with probability {game['q_win_probability']:.9f}")
