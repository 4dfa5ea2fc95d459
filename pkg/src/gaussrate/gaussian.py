"""
Gaussian states of up to three modes and Gaussian unitaries acting on them.

Mode ordering is (signal, E1, E2) wherever an environment is involved, and
quadratures are interleaved.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, SizeError
from .keyrate import g
from .symplectic import MAX_MODES, TOL_SYMP, is_symplectic, omega, symplectic_eigenvalues, tmsv_cov

TOL_STATE = 1e-9


def uncertainty_violation(cov):
    """Most negative eigenvalue of ``V + i Omega`` (0 if physical)."""
    n = cov.shape[0] // 2
    lo = float(np.linalg.eigvalsh(cov + 1j * omega(n))[0])
    return max(0.0, -lo)


@dataclass(frozen=True, eq=False)
class GaussianState:
    """
    A Gaussian state given by its quadrature mean and covariance matrix.

    Construction checks symmetry and the uncertainty relation
    ``V + i Omega >= 0``, so every state in circulation is physical.
    """

    mean: np.ndarray
    cov: np.ndarray

    def __post_init__(self):
        mean = np.array(self.mean, dtype=float).reshape(-1)
        cov = np.array(self.cov, dtype=float)
        dim = mean.shape[0]
        if dim % 2 or not 2 <= dim <= 2 * MAX_MODES:
            raise SizeError(f"state dimension must be 2, 4 or 6, got {dim}")
        if cov.shape != (dim, dim):
            raise SizeError(f"covariance shape {cov.shape} does not match mean of length {dim}")
        scale = max(1.0, float(np.max(np.abs(cov))))
        if np.max(np.abs(cov - cov.T)) > TOL_STATE * scale:
            raise DomainError("covariance matrix is not symmetric")
        cov = 0.5 * (cov + cov.T)
        if uncertainty_violation(cov) > TOL_STATE * scale:
            raise DomainError("covariance matrix violates the uncertainty principle")
        mean.setflags(write=False)
        cov.setflags(write=False)
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "cov", cov)

    @property
    def n_modes(self):
        return self.mean.shape[0] // 2


@dataclass(frozen=True, eq=False)
class GaussianUnitary:
    """Symplectic matrix ``s`` followed by displacement ``d``."""

    s: np.ndarray
    d: np.ndarray = None

    def __post_init__(self):
        s = np.array(self.s, dtype=float)
        d = np.zeros(s.shape[0]) if self.d is None else np.array(self.d, dtype=float).reshape(-1)
        if d.shape[0] != s.shape[0]:
            raise SizeError("displacement length does not match symplectic matrix")
        if not is_symplectic(s, TOL_SYMP):
            raise DomainError("GaussianUnitary requires a symplectic matrix")
        object.__setattr__(self, "s", s)
        object.__setattr__(self, "d", d)

    @classmethod
    def identity(cls, n_modes=1):
        return cls(np.eye(2 * n_modes))

    def then(self, other):
        """The unitary that applies ``self`` first and ``other`` second."""
        return GaussianUnitary(other.s @ self.s, other.s @ self.d + other.d)


def coherent_state(mean):
    return GaussianState(np.asarray(mean, dtype=float), np.eye(2))


def vacuum(n_modes=1):
    return GaussianState(np.zeros(2 * n_modes), np.eye(2 * n_modes))


def thermal_state(w):
    """Single-mode thermal state with quadrature variance ``w``."""
    return GaussianState(np.zeros(2), w * np.eye(2))


def tmsv_state(w):
    return GaussianState(np.zeros(4), tmsv_cov(w))


def apply_unitary(state, u):
    if u.s.shape[0] != state.mean.shape[0]:
        raise SizeError(f"unitary acts on {u.s.shape[0] // 2} modes, state has {state.n_modes}")
    return GaussianState(u.s @ state.mean + u.d, u.s @ state.cov @ u.s.T)


def tensor(a, b):
    if a.n_modes + b.n_modes > MAX_MODES:
        raise SizeError(f"at most {MAX_MODES} modes are supported")
    n1 = a.cov.shape[0]
    n2 = b.cov.shape[0]
    cov = np.zeros((n1 + n2, n1 + n2))
    cov[:n1, :n1] = a.cov
    cov[n1:, n1:] = b.cov
    return GaussianState(np.concatenate([a.mean, b.mean]), cov)


def partial_trace(state, keep):
    """
    Reduced state on the modes listed in ``keep`` (0-based, order preserved).
    """
    keep = list(keep)
    if not keep:
        raise SizeError("keep must name at least one mode")
    if len(set(keep)) != len(keep) or any(not 0 <= k < state.n_modes for k in keep):
        raise SizeError(f"invalid mode indices {keep} for a {state.n_modes}-mode state")
    idx = np.array([[2 * k, 2 * k + 1] for k in keep]).reshape(-1)
    return GaussianState(state.mean[idx], state.cov[np.ix_(idx, idx)])


def von_neumann_entropy(state):
    """Entropy in bits, the sum of ``g(nu)`` over the symplectic spectrum."""
    nus = symplectic_eigenvalues(state.cov)
    # roundoff can push a pure-state eigenvalue just below 1
    return float(sum(g(max(nu, 1.0)) for nu in nus))
