"""
Classifying one-mode Gaussian channels
======================================

A one-mode Gaussian channel is a pair of 2x2 matrices ``(T, N)`` plus a
displacement. Up to Gaussian unitaries on either side it is one of eight
canonical forms, picked out by ``tau = det T``, the ranks of ``T`` and ``N``,
and a thermal number ``nbar``.
"""

import numpy as np

from gaussrate import channel as chn
from gaussrate.gaussian import GaussianUnitary
from gaussrate.symplectic import random_symplectic

rng = np.random.default_rng(1)

###############################################################################
# A lossy fibre with some excess noise
# ------------------------------------
# Thermal loss keeps 70 % of the signal and mixes in a thermal mode with
# ``nbar = 0.4``.

fibre = chn.thermal_loss(0.7, 0.4)
print(fibre.t)
print(fibre.n)
print(chn.classify(fibre), chn.invariants(fibre))

###############################################################################
# Hiding the canonical form
# -------------------------
# Squeezing and rotating before and after the channel changes ``T`` and ``N``
# beyond recognition, yet the class and invariants do not move.

before = GaussianUnitary(random_symplectic(rng, 10.0))
after = GaussianUnitary(random_symplectic(rng, 10.0), [0.3, -1.2])
dressed = chn.dress(fibre, before, after)
print(np.round(dressed.t, 3))
print(np.round(dressed.n, 3))
print(chn.classify(dressed), chn.invariants(dressed))

###############################################################################
# The full table
# --------------
# One representative per class. Note how the rank of ``N`` separates B1
# (a single noisy quadrature) from B2 (isotropic additive noise).

for label, tau, nbar in [("A1", 0, 1), ("A2", 0, 0.5), ("B1", 1, 0), ("B2", 1, 3),
                         ("B2Id", 1, 0), ("CAtt", 0.3, 0.5), ("CAmp", 1.7, 3), ("D", -0.5, 0.5)]:
    cf = chn.canonical_form(label, tau, nbar)
    inv = chn.invariants(cf.channel())
    print(f"{label:5s} tau={inv.tau:5.2f} r={inv.r} nbar={inv.nbar:4.2f}")

###############################################################################
# Not every pair is a channel
# ---------------------------
# Too little noise for the amount of amplification breaks complete positivity.

bad = chn.GaussianChannel(np.sqrt(2.0) * np.eye(2), 0.5 * np.eye(2))
print(chn.validate(bad))
