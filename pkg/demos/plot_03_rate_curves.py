"""
Key-rate bounds and extremality
===============================

For collective attacks the asymptotic rate of the coherent-state heterodyne
protocol depends on three numbers: transmission ``tau``, environment
variance ``w`` and total noise ``eta``. Direct (alpha) and reverse (beta)
reconciliation give two bounds; the better one is the rate.
"""

import math

import numpy as np

from gaussrate import attack as atk
from gaussrate import keyrate

###############################################################################
# Pure loss
# ---------
# Reverse reconciliation beats the 3 dB limit: it stays positive down to
# ``tau = 1 - 1/e``, while direct reconciliation dies at ``e / (1 + e)``.

for tau in np.linspace(0.55, 0.95, 9):
    rep = keyrate.rate_from_triplet(tau, 1.0, keyrate.eta_canonical(tau, 1.0))
    print(f"tau={tau:.2f}  alpha={rep.b_alpha:+.4f}  beta={rep.b_beta:+.4f}  {rep.regime}")
print("thresholds", 1 - 1 / math.e, math.e / (1 + math.e))

###############################################################################
# Thermal noise hurts
# -------------------

for w in (1.0, 1.5, 2.0, 3.0):
    print(w, keyrate.rate_from_triplet(0.9, w, keyrate.eta_canonical(0.9, w)).b_inf)

###############################################################################
# Canonical attacks are extremal
# ------------------------------
# Dressing the canonical form with local unitaries only raises ``eta``. The
# canonical attack with the same ``(tau, eta)`` has a hotter environment and
# never yields a larger rate.

rng = np.random.default_rng(3)
a = atk.random_attack(rng, "CAtt", 0.85, 0.1, max_squeeze_db=3.0)
e = atk.extremal_counterpart(a)
print("w", a.w, "->", e.w)
print("eta", keyrate.total_noise(a), keyrate.total_noise(e))
print("rate", keyrate.rate(a).b_inf, ">=", keyrate.rate(e).b_inf)

###############################################################################
# No key beyond entanglement breaking
# -----------------------------------
# Channels with ``tau <= 0`` leave nothing to distil.

print(keyrate.rate(atk.canonical(-0.4, 0.2)))
