"""
Asymptotic secret-key-rate bounds for the coherent-state heterodyne protocol.

All logarithms are base 2. The constant ``e`` inside the bounds is Euler's
number and sits inside the base-2 logarithm.
"""

import math
from dataclasses import asdict, dataclass

import numpy as np

from .errors import DomainError, UnsupportedRegimeError

TOL_ETA = 1e-9
TOL_TAU_ONE = 1e-9

REGIME_DIRECT = "direct"
REGIME_REVERSE = "reverse"
REGIME_ZERO = "zero"


def _xlog2x(x):
    return 0.0 if x == 0 else x * math.log2(x)


def g(x):
    """Entropy of a thermal state with quadrature variance ``x`` (bits)."""
    x = float(x)
    if not x >= 1.0:
        raise DomainError(f"g(x) requires x >= 1, got {x}")
    return _xlog2x((x + 1.0) / 2.0) - _xlog2x((x - 1.0) / 2.0)


def _check_tau(tau):
    if not tau > 0:
        raise DomainError(f"tau must be positive, got {tau}")
    if abs(tau - 1.0) <= TOL_TAU_ONE:
        raise UnsupportedRegimeError("tau = 1 is excluded from the asymptotic rate analysis")


def eta_from_thetas(tau, w, theta, theta_a, theta_b):
    """Total noise for transmission ``tau``, environment variance ``w`` and the theta parameters."""
    _check_tau(tau)
    a = abs(1.0 - tau)
    radicand = 1.0 + tau ** 2 + (a * w) ** 2 + tau * theta + a * w * (tau * theta_a + theta_b)
    return math.sqrt(radicand) / tau


def total_noise(atk):
    """Total noise of a collective Gaussian attack (``0 < tau != 1``)."""
    inv = atk.invariants
    th = atk.thetas()
    return eta_from_thetas(inv.tau, inv.w, th.theta, th.theta_a, th.theta_b)


def total_noise_det(ch):
    """
    Total noise read directly off ``(T, N)`` as ``sqrt(det(T T^T + N + I)) / tau``.

    Independent of any decomposition; used to cross-check :func:`total_noise`.
    """
    t = np.asarray(ch.t, dtype=float)
    n = np.asarray(ch.n, dtype=float)
    tau = float(np.linalg.det(t))
    if not tau > 0:
        raise DomainError(f"total_noise_det requires det T > 0, got {tau}")
    return math.sqrt(np.linalg.det(t @ t.T + n + np.eye(2))) / tau


def eta_canonical(tau, w):
    """Total noise of the canonical attack with invariants ``(tau, w)``."""
    _check_tau(tau)
    if w < 1:
        raise DomainError(f"w must be >= 1, got {w}")
    return 1.0 + 1.0 / tau + abs(1.0 - tau) * w / tau


def asymptotic_mi(mu, eta):
    """Large-modulation mutual information ``log2(mu / eta)``."""
    if mu <= 0 or eta <= 0:
        raise DomainError("mu and eta must be positive")
    return math.log2(mu / eta)


def _check_triplet(tau, w, eta):
    eta_c = eta_canonical(tau, w)
    if eta < eta_c - TOL_ETA:
        raise DomainError(f"eta = {eta} is below the canonical minimum {eta_c} for tau={tau}, w={w}")


def b_inf_alpha(tau, w, eta):
    """Direct-reconciliation bound (bits, may be negative)."""
    _check_triplet(tau, w, eta)
    a = abs(1.0 - tau)
    return math.log2(2.0 / (math.e * a * eta)) - g(w) + g(tau + a * w)


def b_inf_beta(tau, w, eta):
    """Reverse-reconciliation bound (bits, may be negative)."""
    _check_triplet(tau, w, eta)
    a = abs(1.0 - tau)
    return math.log2(2.0 / (math.e * a * tau * eta)) - g(w)


@dataclass(frozen=True)
class RateReport:
    tau: float
    w: float
    eta: float
    b_alpha: float
    b_beta: float
    b_inf: float
    regime: str

    def to_dict(self):
        return asdict(self)

    @classmethod
    def from_dict(cls, data):
        return cls(**{k: data[k] for k in cls.__dataclass_fields__})


def _zero_report(tau, w):
    nan = float("nan")
    return RateReport(tau, w, nan, nan, nan, 0.0, REGIME_ZERO)


def rate_from_triplet(tau, w, eta):
    """Rate report from the triplet ``(tau, w, eta)``; ``tau <= 0`` gives the zero regime."""
    if tau <= 0:
        return _zero_report(tau, w)
    _check_tau(tau)
    ba = b_inf_alpha(tau, w, eta)
    bb = b_inf_beta(tau, w, eta)
    best = max(0.0, ba, bb)
    if best == 0.0:
        regime = REGIME_ZERO
    elif bb >= ba:
        regime = REGIME_REVERSE
    else:
        regime = REGIME_DIRECT
    return RateReport(tau, w, eta, ba, bb, best, regime)


def rate(atk):
    """Rate report for a collective Gaussian attack."""
    inv = atk.invariants
    if inv.tau <= 0:
        return _zero_report(inv.tau, inv.w)
    _check_tau(inv.tau)
    return rate_from_triplet(inv.tau, inv.w, total_noise(atk))
