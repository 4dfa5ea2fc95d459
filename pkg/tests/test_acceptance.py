"""
Acceptance suite. Each test records one criterion; the terminal summary
prints a PASS/FAIL line per criterion with the measured figure of merit.
"""

import math
import time

import mpmath as mp
import numpy as np
import pytest

from conftest import TABLE_ROWS, draw_params
from gaussrate import attack as atk
from gaussrate import channel as chn
from gaussrate import dilation as dil
from gaussrate import keyrate, protocol
from gaussrate.gaussian import GaussianUnitary
from gaussrate.symplectic import random_symplectic

mp.mp.dps = 40


def _random_unitary(rng, db=20.0):
    return GaussianUnitary(random_symplectic(rng, db), rng.normal(0.0, 2.0, size=2))


def _rate_beta_mp(tau, w):
    tau, w = mp.mpf(tau), mp.mpf(w)
    eta = 1 + 1 / tau + abs(1 - tau) * w / tau
    gw = ((w + 1) / 2) * mp.log((w + 1) / 2, 2) - (0 if w == 1 else ((w - 1) / 2) * mp.log((w - 1) / 2, 2))
    return mp.log(2 / (mp.e * abs(1 - tau) * tau * eta), 2) - gw


def test_ac1_classification_table(criterion):
    t0 = time.perf_counter()
    worst = 0.0
    for label, tau, nbar in TABLE_ROWS:
        cf = chn.canonical_form(label, tau, nbar)
        ch = cf.channel()
        assert chn.classify(ch) == label
        inv = chn.invariants(ch)
        assert inv.r == chn.CLASS_RANK[label]
        worst = max(worst, abs(inv.tau - tau), abs(inv.nbar - nbar))
    elapsed = time.perf_counter() - t0
    criterion("AC1 classification table", f"8/8 labels, invariant error {worst:.1e}, {elapsed:.3f}s")
    assert worst <= 1e-12
    assert elapsed < 1.0


def test_ac2_theta_bounds(rng, criterion):
    t0 = time.perf_counter()
    lo = math.inf
    for _ in range(10_000):
        th = atk.thetas_of(random_symplectic(rng, 20.0), random_symplectic(rng, 20.0))
        lo = min(lo, *th)
    dev = 0.0
    for _ in range(1000):
        th = atk.thetas_of(random_symplectic(rng, 0.0), random_symplectic(rng, 0.0))
        dev = max(dev, *(abs(x - 2.0) for x in th))
    elapsed = time.perf_counter() - t0
    criterion("AC2 theta bounds", f"min theta {lo:.6g}, zero-squeeze deviation {dev:.1e}, {elapsed:.2f}s")
    assert lo >= 2.0 - 1e-9
    assert dev <= 1e-12
    assert elapsed < 5.0


def test_ac3_decomposition_round_trip(rng, criterion):
    t0 = time.perf_counter()
    err_t = err_n = 0.0
    for label in chn.CLASS_LABELS:
        for _ in range(1000):
            tau, nbar = draw_params(rng, label)
            ch = chn.dress(chn.canonical_form(label, tau, nbar).channel(),
                           _random_unitary(rng, 10.0), _random_unitary(rng, 10.0))
            ua, cf, ub = chn.decompose(ch)
            assert cf.class_label == label
            err_t = max(err_t, np.abs(ub.s @ cf.tc @ ua.s - ch.t).max())
            err_n = max(err_n, np.abs(ub.s @ cf.nc @ ub.s.T - ch.n).max())
    elapsed = time.perf_counter() - t0
    criterion("AC3 decomposition round trip",
              f"8000 channels, T error {err_t:.1e}, N error {err_n:.1e}, {elapsed:.2f}s")
    assert err_t <= 1e-8 and err_n <= 1e-8
    assert elapsed < 10.0


def test_ac4_dilation_contract(rng, criterion):
    t0 = time.perf_counter()
    sym = pure = red = 0.0
    for label in chn.CLASS_LABELS:
        for _ in range(100):
            tau, nbar = draw_params(rng, label)
            res = dil.verify(dil.dilate(label, tau, nbar), rng)
            sym, pure, red = max(sym, res.symplectic), max(pure, res.env_purity), max(red, res.reduction)
    for _ in range(100):
        res = dil.verify(dil.dilate(chn.B2, 1.0, rng.uniform(0.01, 5.0), b2_path=dil.B2_TMSV), rng)
        sym, pure, red = max(sym, res.symplectic), max(pure, res.env_purity), max(red, res.reduction)
    elapsed = time.perf_counter() - t0
    criterion("AC4 dilation contract",
              f"symplectic {sym:.1e}, purity {pure:.1e}, reduction {red:.1e}, {elapsed:.2f}s")
    assert sym <= 1e-9 and pure <= 1e-9 and red <= 1e-8
    assert elapsed < 10.0


def test_ac5_eta_oracle(rng, criterion):
    worst = 0.0
    for i in range(1000):
        label = (chn.CATT, chn.CAMP)[i % 2]
        tau, nbar = draw_params(rng, label)
        a = atk.random_attack(rng, label, tau, nbar, 20.0)
        eta = keyrate.total_noise(a)
        oracle = keyrate.total_noise_det(a.to_channel())
        worst = max(worst, abs(eta - oracle) / max(1.0, oracle))
    criterion("AC5 eta oracle identity", f"1000 channels, max relative gap {worst:.1e}")
    assert worst <= 1e-9


@pytest.mark.parametrize("tau", [0.3, 0.8, 2.0])
@pytest.mark.parametrize("w", [1.0, 3.0])
def test_ac6_canonical_minimality(rng, criterion, tau, w):
    label = chn.CATT if tau < 1 else chn.CAMP
    nbar = (w - 1.0) / 2.0
    eta_c = keyrate.eta_canonical(tau, w)
    lo = min(keyrate.total_noise(atk.random_attack(rng, label, tau, nbar, 20.0)) for _ in range(1000))
    at_zero = max(keyrate.total_noise(atk.random_attack(rng, label, tau, nbar, 0.0)) for _ in range(20))
    criterion(f"AC6 canonical minimality tau={tau} w={w}",
              f"min eta - eta_c = {lo - eta_c:.2e}, zero-squeeze gap {at_zero - eta_c:.1e}")
    assert lo >= eta_c - 1e-9
    assert at_zero <= eta_c + 1e-6


def test_ac7_extremality(rng, criterion):
    worst = -math.inf
    w_gap = math.inf
    for i in range(1000):
        label = (chn.CATT, chn.CAMP)[i % 2]
        tau, nbar = draw_params(rng, label)
        a = atk.random_attack(rng, label, tau, nbar, 20.0)
        e = atk.extremal_counterpart(a)
        worst = max(worst, keyrate.rate(e).b_inf - keyrate.rate(a).b_inf)
        w_gap = min(w_gap, e.w - a.w)
        # same tau and total noise
        assert e.tau == a.tau
        assert keyrate.total_noise(e) == pytest.approx(keyrate.total_noise(a), rel=1e-9)
    criterion("AC7 extremality", f"max rate increase {worst:.1e}, min w' - w {w_gap:.1e}")
    assert worst <= 1e-9
    assert w_gap >= 0.0


def _bisect(f, lo, hi):
    flo = f(lo)
    while hi - lo > 1e-6:
        mid = 0.5 * (lo + hi)
        if (f(mid) > 0) == (flo > 0):
            lo = mid
        else:
            hi = mid
    return lo, hi


def test_ac8_spot_values(criterion):
    assert keyrate.g(1.0) == 0.0
    assert keyrate.g(3.0) == pytest.approx(2.0, abs=1e-12)
    a = atk.canonical(0.9, 0.0)
    eta = keyrate.total_noise(a)
    assert eta == pytest.approx(2.0 / 0.9, abs=1e-12)
    beta = keyrate.rate(a).b_beta
    beta_mp = float(_rate_beta_mp(mp.mpf("0.9"), 1))
    assert beta == pytest.approx(beta_mp, abs=1e-6)

    def pure_loss_bound(which):
        return lambda t: getattr(protocol.rate_of_channel(chn.pure_loss(t)), which)

    rev = _bisect(pure_loss_bound("b_beta"), 0.5, 0.9)
    direct = _bisect(pure_loss_bound("b_alpha"), 0.5, 0.9)
    criterion("AC8 spot values",
              f"B_beta(0.9, 1) = {beta:.7f}; reverse zero in [{rev[0]:.7f}, {rev[1]:.7f}], "
              f"direct zero in [{direct[0]:.7f}, {direct[1]:.7f}]")
    assert rev[0] <= 1 - 1 / math.e <= rev[1]
    assert direct[0] <= math.e / (1 + math.e) <= direct[1]


def test_ac9_asymptotic_mi(criterion):
    t0 = time.perf_counter()
    gaps_at_limit = []
    for tau in (0.3, 0.8, 2.0):
        ch = chn.thermal_loss(tau, 0.5) if tau < 1 else chn.amplifier(tau, 0.5)
        eta = protocol.rate_of_channel(ch).eta
        mus = eta * np.logspace(0, 4, 30)
        gaps = [protocol.finite_mu_mi(ch, m) - keyrate.asymptotic_mi(m, eta) for m in mus]
        assert all(x > 0 for x in gaps)
        assert all(b < a for a, b in zip(gaps, gaps[1:]))
        gaps_at_limit.append(gaps[-1])
    mc_gap = 0.0
    for tau in (0.3, 0.8, 2.0):
        ch = chn.thermal_loss(tau, 0.5) if tau < 1 else chn.amplifier(tau, 0.5)
        cfg = protocol.ProtocolConfig(ch, 10.0, 1_000_000, 7)
        rec = protocol.run_simulation(cfg)
        again = protocol.run_simulation(cfg)
        assert rec.mi_empirical == again.mi_empirical
        mc_gap = max(mc_gap, abs(rec.mi_empirical - rec.mi_analytic))
    elapsed = time.perf_counter() - t0
    criterion("AC9 asymptotic mutual information",
              f"gap at mu=1e4 eta {max(gaps_at_limit):.1e}, Monte-Carlo gap {mc_gap:.1e}, {elapsed:.1f}s")
    assert max(gaps_at_limit) <= 0.01
    assert mc_gap <= 0.05
    assert elapsed < 60.0


@pytest.mark.slow
def test_ac10_tomography(criterion):
    ch = chn.pure_loss(0.8)
    true_rate = protocol.rate_of_channel(ch).b_inf
    t_hats, n_hats, d_hats, rates = [], [], [], []
    for seed in range(20):
        rec = protocol.run_simulation(protocol.ProtocolConfig(ch, 1e4, 1_000_000, seed))
        t_hats.append(rec.t_hat)
        n_hats.append(rec.n_hat)
        d_hats.append(rec.d_hat)
        rates.append(rec.rate_from_tomography.b_inf)
    worst = 0.0
    for est, truth in ((t_hats, ch.t), (n_hats, ch.n), (d_hats, ch.d)):
        est = np.array(est)
        se = est.std(axis=0, ddof=1)
        worst = max(worst, float(np.max(np.abs(est - truth) / se)))
    rate_err = max(abs(r - true_rate) for r in rates)
    criterion("AC10 tomography", f"max error {worst:.2f} standard errors, rate error {rate_err:.3f} bits")
    assert worst <= 5.0
    assert rate_err <= 0.05


@pytest.mark.parametrize("label,tau,nbar", [(chn.D, -0.5, 0.5), (chn.D, -3.0, 0.0),
                                            (chn.A1, 0.0, 1.0), (chn.A2, 0.0, 0.5)])
def test_ac11_zero_rate_region(rng, criterion, label, tau, nbar):
    a = atk.random_attack(rng, label, tau, nbar, 10.0)
    rep = keyrate.rate(a)
    via_channel = protocol.rate_of_channel(a.to_channel())
    criterion(f"AC11 zero rate {label} tau={tau}", f"b_inf = {rep.b_inf}, regime {rep.regime}")
    assert rep.b_inf == 0.0 and via_channel.b_inf == 0.0
    assert rep.regime == keyrate.REGIME_ZERO
