"""
Stinespring dilations of the canonical forms.

Each canonical form is realized by a three-mode symplectic ``L`` acting on
(signal, E1, E2) with a pure two-mode environment. The beam-splitter and
two-mode-squeezer classes are written in closed form; A2, B1 and the TMSV
variant of B2 fix only the signal rows of ``L`` and complete the rest by
symplectic Gram-Schmidt.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import channel as chn
from .errors import CompletionError
from .gaussian import GaussianState, partial_trace
from .symplectic import I2, Z, complete_symplectic, direct_sum, symplectic_eigenvalues, symplectic_residual, tmsv_cov

TOL_COMPLETION = 1e-10

B2_COMPOSITION = "composition"
B2_TMSV = "tmsv"


@dataclass(frozen=True, eq=False)
class StinespringDilation:
    l: np.ndarray
    env_cov: np.ndarray
    class_label: str
    invariants: chn.ChannelInvariants

    @property
    def signal_block(self):
        return self.l[:2, :2]

    @property
    def env_block(self):
        return self.l[:2, 2:]


def _beam_splitter(tau):
    """Signal-E1 beam splitter of transmissivity ``tau``, identity on E2."""
    a, b = math.sqrt(tau), math.sqrt(1.0 - tau)
    l = np.eye(6)
    l[:4, :4] = np.block([[a * I2, b * I2], [-b * I2, a * I2]])
    return l


def _two_mode_squeezer(gain):
    a, b = math.sqrt(gain), math.sqrt(gain - 1.0)
    l = np.eye(6)
    l[:4, :4] = np.block([[a * I2, b * Z], [b * Z, a * I2]])
    return l


def _conjugate_amplifier(tau):
    # idler port of an amplifier with gain 1 - tau, fed by E1
    a, b = math.sqrt(-tau), math.sqrt(1.0 - tau)
    l = np.eye(6)
    l[:4, :4] = np.block([[a * Z, b * I2], [b * I2, a * Z]])
    return l


def _complete(signal_a, signal_b):
    rows = np.hstack([signal_a, signal_b])
    try:
        l, _ = complete_symplectic(rows, TOL_COMPLETION)
    except CompletionError as exc:
        raise CompletionError(f"symplectic completion failed: {exc}", residual=exc.residual) from exc
    return l


def dilate(label, tau, nbar=0.0, b2_path=B2_COMPOSITION):
    """
    Dilation ``{L(tau, r), |w>}`` of the canonical form ``C(tau, r, nbar)``.

    ``b2_path`` selects the B2 construction: ``"composition"`` (attenuator
    then amplifier, both with vacuum ancillas) or ``"tmsv"`` (a universal
    cloner-type coupling to both arms of ``|w>``).
    """
    cf = chn.canonical_form(label, tau, nbar)
    w = 2.0 * nbar + 1.0
    env = tmsv_cov(w)
    if label in (chn.A1, chn.CATT):
        l = _beam_splitter(tau)
    elif label == chn.CAMP:
        l = _two_mode_squeezer(tau)
    elif label == chn.D:
        l = _conjugate_amplifier(tau)
    elif label == chn.A2:
        # q_out = q_S + q_E1, p_out = p_E1
        b = np.zeros((2, 4))
        b[0, 0] = b[1, 1] = 1.0
        l = _complete(cf.tc, b)
    elif label == chn.B1:
        # q_out = q_S, p_out = p_S + q_E1 with a vacuum environment
        b = np.zeros((2, 4))
        b[1, 0] = 1.0
        l = _complete(cf.tc, b)
    elif label == chn.B2:
        if b2_path == B2_TMSV:
            # x_out = x_S + k (x_E1 - Z x_E2); noise 2 k^2 (w - c) I = nbar I
            c = math.sqrt(w * w - 1.0)
            k = math.sqrt(nbar / (2.0 * (w - c)))
            b = np.hstack([k * I2, -k * Z])
            l = _complete(I2, b)
        elif b2_path == B2_COMPOSITION:
            tau1 = 2.0 / (nbar + 2.0)
            amp = np.eye(6)
            a, s = math.sqrt(1.0 / tau1), math.sqrt(1.0 / tau1 - 1.0)
            idx = [0, 1, 4, 5]
            amp[np.ix_(idx, idx)] = np.block([[a * I2, s * Z], [s * Z, a * I2]])
            l = amp @ _beam_splitter(tau1)
            env = np.eye(4)
        else:
            raise ValueError(f"unknown B2 construction {b2_path!r}")
    else:
        l = np.eye(6)
    return StinespringDilation(l, env, label, cf.invariants)


def reduced_channel(dil):
    """Channel seen by the signal after tracing out the environment."""
    a, b = dil.signal_block, dil.env_block
    return chn.GaussianChannel(a.copy(), b @ dil.env_cov @ b.T, np.zeros(2))


def full_output(dil, state):
    """Three-mode output state ``L (rho_in x env) L^T``."""
    mean = dil.l @ np.concatenate([state.mean, np.zeros(4)])
    cov = dil.l @ direct_sum(state.cov, dil.env_cov) @ dil.l.T
    return GaussianState(mean, cov)


def environment_output(dil, state):
    """Reduced state of the output ancillas (E1, E2)."""
    return partial_trace(full_output(dil, state), [1, 2])


@dataclass(frozen=True)
class DilationResiduals:
    symplectic: float
    env_purity: float
    reduction: float

    def within(self, tol_symp=1e-9, tol_pure=1e-9, tol_red=1e-8):
        return self.symplectic <= tol_symp and self.env_purity <= tol_pure and self.reduction <= tol_red


def verify(dil, rng=None, n_inputs=5):
    """
    Residuals of the three dilation contracts.

    The reduction residual compares the signal output against
    ``T_c V T_c^T + N_c`` for random single-mode input covariances.
    """
    rng = np.random.default_rng(0) if rng is None else rng
    cf = chn.canonical_form(dil.class_label, dil.invariants.tau, dil.invariants.nbar)
    sym = symplectic_residual(dil.l)
    purity = float(np.max(np.abs(symplectic_eigenvalues(dil.env_cov) - 1.0)))
    red = 0.0
    for _ in range(n_inputs):
        x = rng.normal(size=(2, 2))
        v = x @ x.T + np.eye(2)
        big = dil.l @ direct_sum(v, dil.env_cov) @ dil.l.T
        want = cf.tc @ v @ cf.tc.T + cf.nc
        red = max(red, float(np.max(np.abs(big[:2, :2] - want))))
    return DilationResiduals(sym, purity, red)
