"""
Collective Gaussian attacks ``G = {L(tau, r), |w>, U_A, U_B}``.

An attack is stored as the channel invariants plus the input/output
Gaussian unitaries. Only ``(tau, w, eta)`` matters for the asymptotic rate
bounds; ``eta`` carries the effect of the unitaries through the theta
parameters.
"""

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import channel as chn
from . import keyrate
from .errors import DomainError, SizeError
from .gaussian import GaussianUnitary
from .symplectic import I2, TOL_SYMP, is_symplectic, random_symplectic


class ThetaParams(NamedTuple):
    theta: float
    theta_a: float
    theta_b: float


def thetas_of(ma, mb):
    """
    Theta parameters from the rows ``a1, a2`` of ``M_A`` and the columns
    ``b1, b2`` of ``M_B``.
    """
    a1, a2 = ma[0], ma[1]
    b1, b2 = mb[:, 0], mb[:, 1]
    theta = (a1 @ a1) * (b1 @ b1) + 2.0 * (a1 @ a2) * (b1 @ b2) + (a2 @ a2) * (b2 @ b2)
    return ThetaParams(float(theta), float(a1 @ a1 + a2 @ a2), float(b1 @ b1 + b2 @ b2))


def default_label(tau, nbar):
    """Class label implied by ``(tau, nbar)`` when the rank is not given."""
    if tau < 0:
        return chn.D
    if tau == 0:
        return chn.A1
    if tau < 1:
        return chn.CATT
    if tau == 1:
        return chn.B2 if nbar > 0 else chn.B2ID
    return chn.CAMP


@dataclass(frozen=True, eq=False)
class CollectiveGaussianAttack:
    class_label: str
    invariants: chn.ChannelInvariants
    ma: np.ndarray
    mb: np.ndarray
    da: np.ndarray = None
    db: np.ndarray = None

    def __post_init__(self):
        ma = np.array(self.ma, dtype=float)
        mb = np.array(self.mb, dtype=float)
        if ma.shape != (2, 2) or mb.shape != (2, 2):
            raise SizeError("M_A and M_B must be 2x2")
        if not (is_symplectic(ma, TOL_SYMP) and is_symplectic(mb, TOL_SYMP)):
            raise DomainError("M_A and M_B must be symplectic")
        da = np.zeros(2) if self.da is None else np.array(self.da, dtype=float).reshape(2)
        db = np.zeros(2) if self.db is None else np.array(self.db, dtype=float).reshape(2)
        chn.check_consistent(self.class_label, self.invariants.tau, self.invariants.nbar)
        for k, v in (("ma", ma), ("mb", mb), ("da", da), ("db", db)):
            object.__setattr__(self, k, v)

    @property
    def tau(self):
        return self.invariants.tau

    @property
    def w(self):
        return self.invariants.w

    def thetas(self):
        return thetas_of(self.ma, self.mb)

    def canonical_form(self):
        return chn.canonical_form(self.class_label, self.invariants.tau, self.invariants.nbar)

    def to_channel(self):
        ua = GaussianUnitary(self.ma, self.da)
        ub = GaussianUnitary(self.mb, self.db)
        return chn.recompose(ua, self.canonical_form(), ub)

    def to_dict(self):
        return {
            "class": self.class_label,
            "tau": self.invariants.tau,
            "nbar": self.invariants.nbar,
            "MA": self.ma.tolist(),
            "MB": self.mb.tolist(),
            "dA": self.da.tolist(),
            "dB": self.db.tolist(),
        }

    @classmethod
    def from_dict(cls, data):
        try:
            tau = float(data["tau"])
            nbar = float(data.get("nbar", 0.0))
            label = data.get("class") or default_label(tau, nbar)
            return cls(
                label,
                chn.canonical_form(label, tau, nbar).invariants,
                data.get("MA", I2),
                data.get("MB", I2),
                data.get("dA"),
                data.get("dB"),
            )
        except (KeyError, TypeError) as exc:
            raise SizeError(f"malformed attack description: {exc}") from exc


def thetas(atk):
    return atk.thetas()


def attack(label, tau, nbar=0.0, ma=I2, mb=I2, da=None, db=None):
    cf = chn.canonical_form(label, tau, nbar)
    return CollectiveGaussianAttack(label, cf.invariants, ma, mb, da, db)


def canonical(tau, nbar=0.0, label=None):
    """Canonical attack: identity input and output unitaries."""
    label = default_label(tau, nbar) if label is None else label
    return attack(label, tau, nbar)


def from_channel(ch, **tols):
    """Attack that reproduces ``ch``, via the canonical decomposition."""
    ua, cf, ub = chn.decompose(ch, **tols)
    return CollectiveGaussianAttack(cf.class_label, cf.invariants, ua.s, ub.s, ua.d, ub.d)


def random_attack(rng, label, tau, nbar, max_squeeze_db=20.0):
    """Canonical form dressed with random symplectic unitaries."""
    return attack(label, tau, nbar,
                  random_symplectic(rng, max_squeeze_db),
                  random_symplectic(rng, max_squeeze_db))


def extremal_counterpart(atk):
    """
    Canonical attack with the same ``tau`` and total noise but a hotter
    environment, ``w' >= w``. Its rate bound never exceeds that of ``atk``.
    """
    tau = atk.invariants.tau
    if not (tau > 0 and tau != 1):
        raise DomainError(f"extremal counterpart needs 0 < tau != 1, got {tau}")
    eta = keyrate.total_noise(atk)
    w_new = (tau * eta - tau - 1.0) / abs(1.0 - tau)
    # eta >= eta_c(tau, w) guarantees w_new >= w up to roundoff
    w_new = max(w_new, atk.invariants.w)
    return canonical(tau, (w_new - 1.0) / 2.0)


def triplet(atk):
    """Rate-relevant data ``(tau, w, eta)``."""
    return atk.invariants.tau, atk.invariants.w, keyrate.total_noise(atk)

