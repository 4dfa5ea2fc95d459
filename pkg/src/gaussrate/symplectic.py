"""
Small dense symplectic linear algebra.

Quadratures are interleaved, ``(q1, p1, q2, p2, ...)``, and the vacuum has
unit variance so that ``[x, x^T] = 2i Omega``.
"""

from typing import NamedTuple

import numpy as np

from .errors import CompletionError, DomainError, SizeError

TOL_SYMP = 1e-9
TOL_RECOMP = 1e-9

MAX_MODES = 3

I2 = np.eye(2)
Z = np.diag([1.0, -1.0])
OMEGA1 = np.array([[0.0, 1.0], [-1.0, 0.0]])


def omega(n_modes):
    """Symplectic form on ``n_modes`` modes, a direct sum of 2x2 blocks."""
    if not isinstance(n_modes, (int, np.integer)) or not 1 <= n_modes <= MAX_MODES:
        raise SizeError(f"n_modes must be an integer in [1, {MAX_MODES}], got {n_modes!r}")
    return np.kron(np.eye(n_modes), OMEGA1)


def rotation(angle):
    """2x2 rotation matrix by ``angle`` radians."""
    c, s = np.cos(angle), np.sin(angle)
    return np.array([[c, -s], [s, c]])


def det2(m):
    """Closed-form 2x2 determinant (exact on diagonal input)."""
    return float(m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0])


def _n_modes_of(mat):
    mat = np.asarray(mat, dtype=float)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise SizeError(f"expected a square matrix, got shape {mat.shape}")
    if mat.shape[0] % 2:
        raise SizeError(f"expected even dimension, got {mat.shape[0]}")
    return mat.shape[0] // 2


def symplectic_residual(s):
    """Max-norm of ``S Omega S^T - Omega``."""
    s = np.asarray(s, dtype=float)
    om = np.kron(np.eye(_n_modes_of(s)), OMEGA1)
    return float(np.max(np.abs(s @ om @ s.T - om)))


def is_symplectic(s, tol=TOL_SYMP):
    """True iff ``max|S Omega S^T - Omega| <= tol``."""
    return symplectic_residual(s) <= tol


class EulerAngles(NamedTuple):
    """``S = R(phi) diag(lam, 1/lam) R(psi)`` with ``lam >= 1``."""

    phi: float
    lam: float
    psi: float

    def matrix(self):
        return rotation(self.phi) @ np.diag([self.lam, 1.0 / self.lam]) @ rotation(self.psi)


def euler_decompose(s, tol=TOL_SYMP):
    """
    Euler (Bloch-Messiah) decomposition of a 2x2 symplectic matrix.

    The squeeze factor is the largest singular value. The remaining gauge is
    fixed by ``phi`` in ``[0, pi)``; for a pure rotation ``phi = 0`` and the
    whole angle goes into ``psi``.
    """
    s = np.asarray(s, dtype=float)
    if s.shape != (2, 2):
        raise SizeError(f"expected a 2x2 matrix, got shape {s.shape}")
    if not is_symplectic(s, tol):
        raise DomainError("euler_decompose requires a symplectic matrix")
    u, sv, vt = np.linalg.svd(s)
    if np.linalg.det(u) < 0:
        u = u @ Z
        vt = Z @ vt
    lam = float(sv[0])
    two_pi = 2.0 * np.pi
    if lam - 1.0 <= tol:
        return EulerAngles(0.0, 1.0, float(np.arctan2(s[1, 0], s[0, 0]) % two_pi))
    phi = float(np.arctan2(u[1, 0], u[0, 0]) % two_pi)
    psi = float(np.arctan2(vt[1, 0], vt[0, 0]) % two_pi)
    if phi >= np.pi:
        # (U, V) -> (-U, -V) leaves S unchanged
        phi -= np.pi
        psi = (psi + np.pi) % two_pi
    return EulerAngles(phi, lam, psi)


def random_symplectic(rng, max_squeeze_db):
    """
    Random 2x2 symplectic matrix ``R(phi) diag(lam, 1/lam) R(psi)``.

    Angles are uniform on ``[0, 2 pi)`` and the squeezing in dB,
    ``10 log10(lam**2)``, is uniform on ``[0, max_squeeze_db]``.
    """
    if max_squeeze_db < 0:
        raise DomainError("max_squeeze_db must be non-negative")
    phi, psi = rng.uniform(0.0, 2.0 * np.pi, size=2)
    db = rng.uniform(0.0, max_squeeze_db) if max_squeeze_db > 0 else 0.0
    lam = 10.0 ** (db / 20.0)
    return EulerAngles(phi, lam, psi).matrix()


def symplectic_eigenvalues(v, tol=1e-9):
    """
    Symplectic spectrum of a positive-definite covariance matrix, descending.

    Uses the Hermitian matrix ``V^(1/2) (i Omega) V^(1/2)``, which is similar
    to ``i Omega V`` and has eigenvalues ``+-nu_k``.
    """
    v = np.asarray(v, dtype=float)
    n = _n_modes_of(v)
    scale = max(1.0, float(np.max(np.abs(v))))
    if np.max(np.abs(v - v.T)) > tol * scale:
        raise DomainError("covariance matrix is not symmetric")
    v = 0.5 * (v + v.T)
    evals, evecs = np.linalg.eigh(v)
    if evals[0] <= 0:
        raise DomainError("covariance matrix is not positive definite")
    root = (evecs * np.sqrt(evals)) @ evecs.T
    herm = 1j * (root @ np.kron(np.eye(n), OMEGA1) @ root)
    spec = np.linalg.eigvalsh(herm)
    return np.sort(spec[n:])[::-1]


def tmsv_cov(w):
    """Covariance of a two-mode squeezed vacuum whose reductions have variance ``w``."""
    if w < 1:
        raise DomainError(f"TMSV variance must be >= 1, got {w}")
    c = np.sqrt(w * w - 1.0)
    return np.block([[w * I2, c * Z], [c * Z, w * I2]])


def direct_sum(*mats):
    """Block-diagonal direct sum of square matrices."""
    dim = sum(m.shape[0] for m in mats)
    out = np.zeros((dim, dim))
    k = 0
    for m in mats:
        j = m.shape[0]
        out[k:k + j, k:k + j] = m
        k += j
    return out


def complete_symplectic(rows, tol=1e-10):
    """
    Extend ``2k`` rows forming symplectic pairs to a full symplectic matrix.

    ``rows`` is a ``(2k, 2n)`` array whose rows satisfy ``R Omega R^T =
    Omega_k``. The missing pairs are built by symplectic Gram-Schmidt on the
    standard basis. Returns the matrix and its symplectic residual.
    """
    rows = np.asarray(rows, dtype=float)
    dim = rows.shape[1]
    n = dim // 2
    om = np.kron(np.eye(n), OMEGA1)
    k = rows.shape[0] // 2
    pre = rows @ om @ rows.T
    if np.max(np.abs(pre - np.kron(np.eye(k), OMEGA1))) > tol:
        raise CompletionError("given rows are not symplectic pairs",
                              residual=float(np.max(np.abs(pre - np.kron(np.eye(k), OMEGA1)))))

    def form(a, b):
        return a @ om @ b

    basis = [r.copy() for r in rows]

    def project(e):
        for j in range(0, len(basis), 2):
            u, v = basis[j], basis[j + 1]
            e = e - form(e, v) * u + form(e, u) * v
        return e

    candidates = list(np.eye(dim))
    while len(basis) < dim:
        projected = [project(e) for e in candidates]
        i = int(np.argmax([np.linalg.norm(p) for p in projected]))
        x = projected.pop(i)
        candidates.pop(i)
        x = x / np.linalg.norm(x)
        pairing = [form(x, project(e)) for e in candidates]
        j = int(np.argmax(np.abs(pairing)))
        if abs(pairing[j]) < tol:
            raise CompletionError("no partner vector found during completion")
        y = project(candidates.pop(j)) / pairing[j]
        basis.extend([x, y])
    s = np.array(basis)
    res = symplectic_residual(s)
    if res > tol:
        raise CompletionError(f"symplectic completion residual {res:.3e} exceeds {tol:.1e}",
                              residual=res)
    return s, res
