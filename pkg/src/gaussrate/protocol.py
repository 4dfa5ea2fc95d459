"""
Monte-Carlo simulation of the coherent-state heterodyne protocol.

Each round Alice draws a displacement ``x_A ~ N(0, mu I)``, sends the
coherent state ``|x_A>`` through the channel, and Bob heterodynes the output.
Rounds are processed in chunks, each with its own rng stream spawned from
the seed, and only the first and second moments of ``(x_A, y)`` are kept.
The moments are enough for channel tomography and for the Gaussian
mutual-information estimate.
"""

import csv
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import channel as chn
from . import keyrate
from .attack import CollectiveGaussianAttack
from .errors import DomainError, SizeError, UnsupportedRegimeError

CHUNK_SIZE = 1 << 16
MIN_SAMPLES = 100
SAMPLE_CAP = 100_000


def _psd_sqrt(m):
    evals, evecs = np.linalg.eigh(0.5 * (m + m.T))
    return evecs * np.sqrt(np.clip(evals, 0.0, None))


def modulate(rng, mu, size=None):
    """Alice's displacement(s): zero-mean Gaussian, variance ``mu`` per quadrature."""
    if mu <= 0:
        raise DomainError(f"modulation variance must be positive, got {mu}")
    shape = (2,) if size is None else (size, 2)
    return rng.normal(0.0, math.sqrt(mu), size=shape)


def heterodyne(rng, state, size=None):
    """
    Heterodyne outcome(s): Gaussian with mean ``x`` and covariance ``V + I``.

    Returns a 2-vector, or a ``(size, 2)`` array of independent shots.
    """
    if state.n_modes != 1:
        raise SizeError("heterodyne acts on a single mode")
    root = _psd_sqrt(state.cov + np.eye(2))
    if size is None:
        return state.mean + root @ rng.normal(size=2)
    return state.mean + rng.normal(size=(size, 2)) @ root.T


@dataclass
class MomentSummary:
    """Streaming mean and scatter matrix of the joint vector ``(q_A, p_A, q_B, p_B)``."""

    count: int = 0
    mean: np.ndarray = field(default_factory=lambda: np.zeros(4))
    scatter: np.ndarray = field(default_factory=lambda: np.zeros((4, 4)))

    @classmethod
    def from_samples(cls, x, y):
        z = np.hstack([np.asarray(x, dtype=float), np.asarray(y, dtype=float)])
        m = z.mean(axis=0)
        c = z - m
        return cls(z.shape[0], m, c.T @ c)

    def merge(self, other):
        """Pairwise combination of two summaries (parallel-variance update)."""
        if self.count == 0:
            return MomentSummary(other.count, other.mean.copy(), other.scatter.copy())
        if other.count == 0:
            return MomentSummary(self.count, self.mean.copy(), self.scatter.copy())
        n = self.count + other.count
        delta = other.mean - self.mean
        mean = self.mean + delta * (other.count / n)
        scatter = self.scatter + other.scatter + np.outer(delta, delta) * (self.count * other.count / n)
        return MomentSummary(n, mean, scatter)

    @property
    def cov(self):
        return self.scatter / (self.count - 1)

    def to_dict(self):
        return {"count": self.count, "mean": self.mean.tolist(), "cov": self.cov.tolist()}


def gaussian_mi(cov, k=2):
    """Mutual information (bits) between the first ``k`` and remaining coordinates of a Gaussian."""
    _, ld_x = np.linalg.slogdet(cov[:k, :k])
    _, ld_y = np.linalg.slogdet(cov[k:, k:])
    _, ld = np.linalg.slogdet(cov)
    return 0.5 * (ld_x + ld_y - ld) / math.log(2.0)


def empirical_mi(summary):
    """Gaussian plug-in estimate of ``I(x_A : y)`` in bits."""
    return float(gaussian_mi(summary.cov))


def finite_mu_mi(ch, mu):
    """Exact ``I(x_A : y)`` for modulation ``mu`` (bits)."""
    if mu <= 0:
        raise DomainError("mu must be positive")
    tt = ch.t @ ch.t.T
    cond = tt + ch.n + np.eye(2)
    return 0.5 * math.log2(np.linalg.det(mu * tt + cond) / np.linalg.det(cond))


def tomography(summary, shot_noise=True):
    """
    Estimate ``(T, N, d)`` from first and second moments.

    ``T = S_yx S_xx^-1`` and ``d = mean_y - T mean_x``. The residual
    covariance of ``y`` given ``x`` equals ``T T^T + N + I`` (coherent-state
    unit through the channel plus the heterodyne unit), which is inverted for
    ``N``. With ``shot_noise=False`` the residual is taken as ``N`` itself.
    """
    if summary.count < MIN_SAMPLES:
        raise DomainError(f"tomography needs at least {MIN_SAMPLES} samples")
    cov = summary.cov
    sxx, syx, syy = cov[:2, :2], cov[2:, :2], cov[2:, 2:]
    if np.linalg.cond(sxx) > 1e12:
        raise DomainError("modulation covariance is singular")
    t_hat = np.linalg.solve(sxx.T, syx.T).T
    d_hat = summary.mean[2:] - t_hat @ summary.mean[:2]
    resid = syy - t_hat @ syx.T
    n_hat = resid - t_hat @ t_hat.T - np.eye(2) if shot_noise else resid
    n_hat = 0.5 * (n_hat + n_hat.T)
    return t_hat, n_hat, d_hat


def rate_from_estimate(t_hat, n_hat, tol_rank=chn.TOL_RANK):
    """
    Rate bound from a tomographic estimate of ``(T, N)``.

    Estimates are projected onto the physical region before evaluation:
    ``nbar`` is clipped at 0 and ``eta`` at the canonical minimum.
    """
    tau = float(np.linalg.det(t_hat))
    det_n = float(np.linalg.det(n_hat))
    if chn.matrix_rank(t_hat, tol_rank) < 2 or tau <= 0:
        nbar = max(0.0, (math.sqrt(max(det_n, 0.0)) / (1.0 - tau) - 1.0) / 2.0)
        return keyrate.rate_from_triplet(min(tau, 0.0), 2 * nbar + 1, float("nan"))
    if abs(tau - 1.0) <= keyrate.TOL_TAU_ONE:
        raise UnsupportedRegimeError("estimated transmission is 1")
    nbar = max(0.0, (math.sqrt(max(det_n, 0.0)) / abs(1.0 - tau) - 1.0) / 2.0)
    w = 2.0 * nbar + 1.0
    eta_det = math.sqrt(max(np.linalg.det(t_hat @ t_hat.T + n_hat + np.eye(2)), 0.0)) / tau
    eta = max(eta_det, keyrate.eta_canonical(tau, w))
    return keyrate.rate_from_triplet(tau, w, eta)


def rate_of_channel(ch):
    """Rate bound of an exactly known channel."""
    inv = chn.invariants(ch)
    if inv.tau <= 0:
        return keyrate.rate_from_triplet(inv.tau, inv.w, float("nan"))
    return keyrate.rate_from_triplet(inv.tau, inv.w, keyrate.total_noise_det(ch))


def postprocess_direct(y, t_hat, d_hat):
    """Bob's estimate of Alice's displacement: ``T^-1 (y - d)``."""
    t_hat = np.asarray(t_hat, dtype=float)
    if chn.matrix_rank(t_hat) < 2:
        raise UnsupportedRegimeError("estimated T is singular; direct post-processing is impossible")
    y = np.asarray(y, dtype=float)
    return np.linalg.solve(t_hat, (y - d_hat).T).T


def postprocess_reverse(x_a, t_hat, d_hat):
    """Alice's estimate of Bob's outcome: ``T x_A + d``."""
    return np.asarray(x_a, dtype=float) @ np.asarray(t_hat, dtype=float).T + d_hat


@dataclass(frozen=True, eq=False)
class ProtocolConfig:
    channel: chn.GaussianChannel
    mu: float
    n_samples: int
    seed: int

    def __post_init__(self):
        if not self.mu > 0:
            raise DomainError(f"mu must be positive, got {self.mu}")
        if int(self.n_samples) < MIN_SAMPLES:
            raise DomainError(f"n_samples must be at least {MIN_SAMPLES}")
        chn.require_valid(self.channel)

    @classmethod
    def from_dict(cls, data):
        """Build from ``{"channel" | "attack": ..., "mu", "n_samples", "seed"}``."""
        if "channel" in data:
            ch = chn.GaussianChannel.from_dict(data["channel"])
        elif "attack" in data:
            ch = CollectiveGaussianAttack.from_dict(data["attack"]).to_channel()
        else:
            raise KeyError("config needs a 'channel' or an 'attack' entry")
        return cls(ch, float(data["mu"]), int(data["n_samples"]), int(data["seed"]))


@dataclass(frozen=True, eq=False)
class SimulationRecord:
    moments: MomentSummary
    t_hat: np.ndarray
    n_hat: np.ndarray
    d_hat: np.ndarray
    mi_empirical: float
    mi_analytic: float
    rate_from_tomography: keyrate.RateReport
    samples: np.ndarray = None

    def to_dict(self):
        return {
            "moments": self.moments.to_dict(),
            "t_hat": self.t_hat.tolist(),
            "n_hat": self.n_hat.tolist(),
            "d_hat": self.d_hat.tolist(),
            "mi_empirical": self.mi_empirical,
            "mi_analytic": self.mi_analytic,
            "rate_from_tomography": self.rate_from_tomography.to_dict(),
        }


def _run_chunk(ch, mu, size, seed_seq, shot_noise, keep):
    rng = np.random.default_rng(seed_seq)
    x = modulate(rng, mu, size)
    # coherent state through the channel, then heterodyne: cov T T^T + N + I
    noise_cov = ch.t @ ch.t.T + ch.n + np.eye(2) if shot_noise else ch.n
    y = x @ ch.t.T + ch.d + rng.normal(size=(size, 2)) @ _psd_sqrt(noise_cov).T
    return MomentSummary.from_samples(x, y), (np.hstack([x, y]) if keep else None)


def simulate_moments(ch, mu, n_samples, seed, shot_noise=True, workers=1, keep_samples=False):
    """
    Run ``n_samples`` protocol rounds and return the joint moment summary.

    The result is independent of ``workers``: chunk streams are fixed by the
    seed and merged in chunk order.
    """
    sizes = [CHUNK_SIZE] * (n_samples // CHUNK_SIZE)
    if n_samples % CHUNK_SIZE:
        sizes.append(n_samples % CHUNK_SIZE)
    streams = np.random.SeedSequence(seed).spawn(len(sizes))
    keep = keep_samples and n_samples <= SAMPLE_CAP
    jobs = [(ch, mu, s, ss, shot_noise, keep) for s, ss in zip(sizes, streams)]
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            parts = list(pool.map(lambda a: _run_chunk(*a), jobs))
    else:
        parts = [_run_chunk(*a) for a in jobs]
    summary = MomentSummary()
    for part, _ in parts:
        summary = summary.merge(part)
    samples = np.vstack([p for _, p in parts]) if keep else None
    return summary, samples


def run_simulation(cfg, shot_noise=True, workers=1, keep_samples=False):
    """Simulate the protocol, run tomography and evaluate the rate from the estimate."""
    summary, samples = simulate_moments(cfg.channel, cfg.mu, cfg.n_samples, cfg.seed,
                                        shot_noise, workers, keep_samples)
    t_hat, n_hat, d_hat = tomography(summary, shot_noise)
    try:
        report = rate_from_estimate(t_hat, n_hat)
    except UnsupportedRegimeError:
        nan = float("nan")
        report = keyrate.RateReport(float(np.linalg.det(t_hat)), nan, nan, nan, nan, 0.0, keyrate.REGIME_ZERO)
    return SimulationRecord(summary, t_hat, n_hat, d_hat, empirical_mi(summary),
                            finite_mu_mi(cfg.channel, cfg.mu), report, samples)


def write_samples_csv(path, samples):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["qa", "pa", "qb", "pb"])
        for row in samples:
            writer.writerow([f"{v:.12g}" for v in row])
