"""
One-mode Gaussian channels ``x -> T x + d``, ``V -> T V T^T + N``.

Covers the CPT test, the symplectic invariants ``(tau, r, nbar)``, the
canonical-form classification and the decomposition ``G = U_B o C o U_A``.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, InvalidChannelError, SizeError
from .gaussian import GaussianState, GaussianUnitary
from .symplectic import I2, Z, det2

TOL_CPT = 1e-9
TOL_RANK = 1e-7
TOL_TAU = 1e-9

A1, A2, B1, B2, B2ID, CATT, CAMP, D = "A1", "A2", "B1", "B2", "B2Id", "CAtt", "CAmp", "D"
CLASS_LABELS = (A1, A2, B1, B2, B2ID, CATT, CAMP, D)

# rank r of each class; tau is fixed for A*/B* and ranges over an interval otherwise
CLASS_RANK = {A1: 0, A2: 1, B1: 1, B2: 2, B2ID: 0, CATT: 2, CAMP: 2, D: 2}


@dataclass(frozen=True, eq=False)
class GaussianChannel:
    t: np.ndarray
    n: np.ndarray
    d: np.ndarray = field(default=None)

    def __post_init__(self):
        t = np.array(self.t, dtype=float)
        n = np.array(self.n, dtype=float)
        d = np.zeros(2) if self.d is None else np.array(self.d, dtype=float).reshape(-1)
        if t.shape != (2, 2) or n.shape != (2, 2) or d.shape != (2,):
            raise SizeError("a one-mode channel needs 2x2 T, 2x2 N and a 2-vector d")
        for a in (t, n, d):
            a.setflags(write=False)
        object.__setattr__(self, "t", t)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "d", d)

    @classmethod
    def identity(cls):
        return cls(I2, np.zeros((2, 2)))

    @classmethod
    def from_unitary(cls, u):
        return cls(u.s, np.zeros((2, 2)), u.d)

    def to_dict(self):
        return {"T": self.t.tolist(), "N": self.n.tolist(), "d": self.d.tolist()}

    @classmethod
    def from_dict(cls, data):
        try:
            return cls(data["T"], data["N"], data.get("d", [0.0, 0.0]))
        except (KeyError, TypeError, ValueError) as exc:
            raise SizeError(f"malformed channel description: {exc}") from exc


def pure_loss(tau):
    return thermal_loss(tau, 0.0)


def thermal_loss(tau, nbar):
    """Attenuator ``C(tau, 2, nbar)`` with ``0 <= tau <= 1``."""
    return GaussianChannel(math.sqrt(tau) * I2, (1 - tau) * (2 * nbar + 1) * I2)


def amplifier(tau, nbar=0.0):
    return GaussianChannel(math.sqrt(tau) * I2, (tau - 1) * (2 * nbar + 1) * I2)


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    violations: tuple = ()

    def __bool__(self):
        return self.ok


def validate(ch, tol=TOL_CPT):
    """
    Check ``N = N^T >= 0`` and ``det N >= (det T - 1)**2``.

    Returns a report listing every violated clause by name.
    """
    violations = []
    if not (np.all(np.isfinite(ch.t)) and np.all(np.isfinite(ch.n)) and np.all(np.isfinite(ch.d))):
        return ValidationReport(False, ("non-finite entries",))
    if np.max(np.abs(ch.n - ch.n.T)) > tol:
        violations.append("N not symmetric")
    ns = 0.5 * (ch.n + ch.n.T)
    if np.linalg.eigvalsh(ns)[0] < -tol:
        violations.append("N not positive semidefinite")
    lhs = det2(ns)
    rhs = (det2(ch.t) - 1.0) ** 2
    if lhs < rhs - tol:
        violations.append(f"CPT condition det N >= (det T - 1)^2 fails ({lhs:.6g} < {rhs:.6g})")
    return ValidationReport(not violations, tuple(violations))


def require_valid(ch, tol=TOL_CPT):
    report = validate(ch, tol)
    if not report.ok:
        raise InvalidChannelError("; ".join(report.violations))


def apply(ch, state):
    if state.n_modes != 1:
        raise SizeError("one-mode channels act on single-mode states")
    return GaussianState(ch.t @ state.mean + ch.d, ch.t @ state.cov @ ch.t.T + ch.n)


def compose(first, second):
    """Channel that applies ``first`` and then ``second``."""
    t2 = second.t
    return GaussianChannel(t2 @ first.t, t2 @ first.n @ t2.T + second.n, t2 @ first.d + second.d)


def dress(ch, ua, ub):
    """``U_B o ch o U_A`` for single-mode Gaussian unitaries."""
    return compose(compose(GaussianChannel.from_unitary(ua), ch), GaussianChannel.from_unitary(ub))


def matrix_rank(m, tol_rank=TOL_RANK):
    """Rank with singular values below ``tol_rank * max(1, s_max)`` treated as zero."""
    s = np.linalg.svd(np.asarray(m, dtype=float), compute_uv=False)
    return int(np.sum(s > tol_rank * max(1.0, s[0])))


@dataclass(frozen=True)
class ChannelInvariants:
    tau: float
    r: int
    nbar: float

    @property
    def w(self):
        return 2.0 * self.nbar + 1.0


def _classify_parts(ch, tol_rank, tol_tau):
    rt = matrix_rank(ch.t, tol_rank)
    rn = matrix_rank(ch.n, tol_rank)
    if rt == 0:
        return A1, rt, rn
    if rt == 1:
        return A2, rt, rn
    tau = det2(ch.t)
    if abs(tau - 1.0) <= tol_tau:
        return {0: B2ID, 1: B1, 2: B2}[rn], rt, rn
    if tau < 0:
        return D, rt, rn
    return (CATT if tau < 1 else CAMP), rt, rn


def classify(ch, tol=TOL_CPT, tol_rank=TOL_RANK, tol_tau=TOL_TAU):
    """Canonical-form class label of a valid channel."""
    require_valid(ch, tol)
    return _classify_parts(ch, tol_rank, tol_tau)[0]


def _nbar_from_det(label, tau, det_n):
    root = math.sqrt(max(det_n, 0.0))
    if label in (A1, A2):
        nbar = (root - 1.0) / 2.0
    elif label in (B1, B2ID):
        nbar = 0.0
    elif label == B2:
        nbar = root
    else:
        nbar = (root / abs(1.0 - tau) - 1.0) / 2.0
    # CPT channels have nbar >= 0; only roundoff can push it below
    return max(nbar, 0.0)


def invariants(ch, tol=TOL_CPT, tol_rank=TOL_RANK, tol_tau=TOL_TAU):
    """
    Symplectic invariants ``(tau, r, nbar)``.

    ``tau`` is reported as exactly 0 or 1 for the A and B classes.
    """
    require_valid(ch, tol)
    label, rt, rn = _classify_parts(ch, tol_rank, tol_tau)
    if label in (A1, A2):
        tau = 0.0
    elif label in (B1, B2, B2ID):
        tau = 1.0
    else:
        tau = det2(ch.t)
    nbar = _nbar_from_det(label, tau, det2(ch.n))
    return ChannelInvariants(tau, rt * rn // 2, nbar)


@dataclass(frozen=True, eq=False)
class CanonicalForm:
    class_label: str
    invariants: ChannelInvariants
    tc: np.ndarray
    nc: np.ndarray

    def channel(self):
        return GaussianChannel(self.tc, self.nc)


def check_consistent(label, tau, nbar=0.0):
    """Raise ``DomainError`` unless ``(label, tau, nbar)`` names a table row."""
    if label not in CLASS_LABELS:
        raise DomainError(f"unknown class label {label!r}")
    if nbar < 0:
        raise DomainError(f"nbar must be non-negative, got {nbar}")
    ok = {
        A1: tau == 0,
        A2: tau == 0,
        B1: tau == 1 and nbar == 0,
        B2: tau == 1 and nbar > 0,
        B2ID: tau == 1 and nbar == 0,
        CATT: 0 < tau < 1,
        CAMP: tau > 1,
        D: tau < 0,
    }[label]
    if not ok:
        raise DomainError(f"class {label} is inconsistent with tau={tau}, nbar={nbar}")


def canonical_form(label, tau, nbar=0.0):
    """The table's ``(T_c, N_c)`` for class ``label``."""
    check_consistent(label, tau, nbar)
    w = 2.0 * nbar + 1.0
    if label == A1:
        tc, nc = np.zeros((2, 2)), w * I2
    elif label == A2:
        tc, nc = (I2 + Z) / 2.0, w * I2
    elif label == B1:
        tc, nc = I2.copy(), (I2 - Z) / 2.0
    elif label == B2:
        tc, nc = I2.copy(), nbar * I2
    elif label == B2ID:
        tc, nc = I2.copy(), np.zeros((2, 2))
    elif label in (CATT, CAMP):
        tc, nc = math.sqrt(tau) * I2, abs(1.0 - tau) * w * I2
    else:
        tc, nc = math.sqrt(-tau) * Z, (1.0 - tau) * w * I2
    return CanonicalForm(label, ChannelInvariants(float(tau), CLASS_RANK[label], float(nbar)), tc, nc)


def _sqrt_unimodular(m):
    """Symmetric square root of ``m / sqrt(det m)``; symplectic for 2x2 PD ``m``."""
    evals, evecs = np.linalg.eigh(0.5 * (m + m.T))
    if evals[0] <= 0:
        raise DomainError("noise matrix is numerically singular for a full-rank class")
    evals = evals / math.sqrt(evals[0] * evals[1])
    return (evecs * np.sqrt(evals)) @ evecs.T


def _min_norm_partner(v):
    """Vector ``u`` of least norm with ``det [v; u] = 1`` (``v`` as a row)."""
    return np.array([-v[1], v[0]]) / (v @ v)


def decompose(ch, tol=TOL_CPT, tol_rank=TOL_RANK, tol_tau=TOL_TAU):
    """
    Split a channel into ``(U_A, C, U_B)`` with ``G = U_B o C o U_A``.

    Displacement gauge: ``d_A = 0``, ``d_B = d``.
    """
    require_valid(ch, tol)
    inv = invariants(ch, tol, tol_rank, tol_tau)
    label = _classify_parts(ch, tol_rank, tol_tau)[0]
    cf = canonical_form(label, inv.tau, inv.nbar)
    t, n = ch.t, 0.5 * (ch.n + ch.n.T)
    if label == B2ID:
        ma, mb = t.copy(), I2.copy()
    elif label == A1:
        ma, mb = I2.copy(), _sqrt_unimodular(n)
    elif label == A2:
        mb0 = _sqrt_unimodular(n)
        k = np.linalg.solve(mb0, t)
        # rank-one k = u v^T; rotate so that u lies along e1
        uu, s, vt = np.linalg.svd(k)
        u = uu[:, 0]
        rot = np.array([[u[0], -u[1]], [u[1], u[0]]])
        mb = mb0 @ rot
        a1 = (rot.T @ k)[0]
        ma = np.vstack([a1, _min_norm_partner(a1)])
    elif label == B1:
        evals, evecs = np.linalg.eigh(n)
        v = evecs[:, 1] * math.sqrt(max(evals[1], 0.0))
        c1 = np.array([v[1], -v[0]]) / (v @ v)
        mb = np.column_stack([c1, v])
        ma = np.linalg.solve(mb, t)
    elif label == B2:
        mb = _sqrt_unimodular(n)
        ma = np.linalg.solve(mb, t)
    else:
        mb = _sqrt_unimodular(n)
        ma = np.linalg.solve(cf.tc, np.linalg.solve(mb, t))
    ua = GaussianUnitary(ma, np.zeros(2))
    ub = GaussianUnitary(mb, ch.d.copy())
    return ua, cf, ub


def recompose(ua, cf, ub):
    """Inverse of :func:`decompose`."""
    return dress(cf.channel(), ua, ub)
