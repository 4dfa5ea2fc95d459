"""
Decomposition and Stinespring dilation
======================================

Any channel factors as ``U_B o C o U_A`` with ``C`` canonical. The canonical
form in turn is a three-mode symplectic interaction ``L`` between the signal
and a two-mode squeezed vacuum held by the eavesdropper.
"""

import numpy as np

from gaussrate import attack as atk
from gaussrate import channel as chn
from gaussrate import dilation as dil
from gaussrate.gaussian import coherent_state, von_neumann_entropy

rng = np.random.default_rng(7)

###############################################################################
# Taking a channel apart
# ----------------------

a = atk.random_attack(rng, "CAmp", 1.8, 0.25, max_squeeze_db=8.0)
ch = a.to_channel()
ua, cf, ub = chn.decompose(ch)
print(cf.class_label, cf.invariants)
back = chn.recompose(ua, cf, ub)
print("round-trip error", np.abs(back.t - ch.t).max(), np.abs(back.n - ch.n).max())

###############################################################################
# The decomposition is not unique, but the theta parameters that feed the
# total noise are bounded below by 2 and only the triplet (tau, w, eta)
# matters for the key rate.

print(a.thetas())
print(atk.from_channel(ch).thetas())
print(atk.triplet(a), atk.triplet(atk.from_channel(ch)))

###############################################################################
# The entangling cloner
# ---------------------
# A thermal-loss channel is a beam splitter mixing the signal with one arm of
# a TMSV of variance ``w``.

d = dil.dilate("CAtt", 0.6, 1.0)
print(np.round(d.l, 3))
print(dil.verify(d, rng))

###############################################################################
# Feeding a coherent state in, the joint output is pure, so the entropy of
# Eve's two modes equals that of Bob's mode.

out = dil.full_output(d, coherent_state([1.0, 0.5]))
eve = dil.environment_output(d, coherent_state([1.0, 0.5]))
print("S(total)", von_neumann_entropy(out))
print("S(Eve)", von_neumann_entropy(eve))

###############################################################################
# Every class has a dilation, including the degenerate ones.

for label, tau, nbar in [("A2", 0, 0.5), ("B1", 1, 0), ("B2", 1, 2.0), ("D", -0.5, 0.5)]:
    print(label, dil.verify(dil.dilate(label, tau, nbar), rng).within())
