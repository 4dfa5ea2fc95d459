import math

import numpy as np
import pytest

from conftest import TABLE_ROWS, draw_params
from gaussrate import channel as chn
from gaussrate import dilation as dil
from gaussrate.errors import DomainError
from gaussrate.gaussian import GaussianState, coherent_state, partial_trace, vacuum
from gaussrate.symplectic import I2, Z, symplectic_eigenvalues, tmsv_cov


def test_entangling_cloner_example():
    d = dil.dilate(chn.CATT, 0.5, 1.0)
    np.testing.assert_allclose(d.signal_block, math.sqrt(0.5) * I2)
    np.testing.assert_allclose(dil.reduced_channel(d).n, 1.5 * I2, atol=1e-14)
    np.testing.assert_array_equal(d.env_cov, tmsv_cov(3.0))


def test_identity_dilation():
    d = dil.dilate(chn.B2ID, 1.0, 0.0)
    np.testing.assert_array_equal(d.l, np.eye(6))
    np.testing.assert_array_equal(d.env_cov, np.eye(4))


def test_conjugate_amplifier_example():
    ch = dil.reduced_channel(dil.dilate(chn.D, -1.0, 0.0))
    np.testing.assert_allclose(ch.t, Z, atol=1e-15)
    np.testing.assert_allclose(ch.n, 2 * I2, atol=1e-14)


def test_reduced_channel_examples():
    ch = dil.reduced_channel(dil.dilate(chn.CATT, 0.5, 0.0))
    np.testing.assert_allclose(ch.t, math.sqrt(0.5) * I2)
    np.testing.assert_allclose(ch.n, 0.5 * I2, atol=1e-15)
    np.testing.assert_array_equal(ch.d, [0.0, 0.0])
    ch = dil.reduced_channel(dil.dilate(chn.CAMP, 2.0, 0.0))
    np.testing.assert_allclose(ch.t, math.sqrt(2) * I2)
    np.testing.assert_allclose(ch.n, I2, atol=1e-14)


def test_inconsistent_parameters():
    with pytest.raises(DomainError):
        dil.dilate(chn.CATT, 1.5, 0.0)


@pytest.mark.parametrize("label,tau,nbar", TABLE_ROWS)
def test_reduced_channel_self_consistent(label, tau, nbar):
    d = dil.dilate(label, tau, nbar)
    ch = dil.reduced_channel(d)
    assert chn.classify(ch) == label
    inv = chn.invariants(ch)
    assert inv.r == d.invariants.r
    assert inv.tau == pytest.approx(d.invariants.tau, abs=1e-12)
    assert inv.nbar == pytest.approx(d.invariants.nbar, abs=1e-9)


@pytest.mark.parametrize("label", chn.CLASS_LABELS)
def test_type_invariants_random_draws(rng, label):
    for _ in range(100):
        tau, nbar = draw_params(rng, label)
        res = dil.verify(dil.dilate(label, tau, nbar), rng)
        assert res.within(), res


def test_b2_tmsv_path(rng):
    for _ in range(50):
        nbar = rng.uniform(0.01, 10.0)
        d = dil.dilate(chn.B2, 1.0, nbar, b2_path=dil.B2_TMSV)
        assert dil.verify(d, rng).within()
        np.testing.assert_allclose(d.env_cov, tmsv_cov(2 * nbar + 1))


def test_entangling_cloner_noise_linear_in_w():
    for tau in (0.2, 0.5, 0.9):
        ns = [dil.reduced_channel(dil.dilate(chn.CATT, tau, nb)).n[0, 0] for nb in (0.0, 1.0, 2.0)]
        ws = [1.0, 3.0, 5.0]
        slope = np.polyfit(ws, ns, 1)[0]
        assert slope == pytest.approx(1 - tau, abs=1e-12)


@pytest.mark.parametrize("label,tau,nbar", TABLE_ROWS)
def test_signal_marginal_matches_channel(rng, label, tau, nbar):
    d = dil.dilate(label, tau, nbar)
    ch = dil.reduced_channel(d)
    for _ in range(10):
        s = coherent_state(rng.normal(size=2) * 3)
        full = dil.full_output(d, s)
        sig = partial_trace(full, [0])
        want = chn.apply(ch, s)
        np.testing.assert_allclose(sig.mean, want.mean, atol=1e-12)
        np.testing.assert_allclose(sig.cov, want.cov, atol=1e-9)
        # pure input through a unitary dilation stays globally pure
        np.testing.assert_allclose(symplectic_eigenvalues(full.cov), [1, 1, 1], atol=1e-8)


def test_environment_output_examples():
    d = dil.dilate(chn.B2ID, 1.0, 0.0)
    env = dil.environment_output(d, coherent_state([1.0, 1.0]))
    np.testing.assert_array_equal(env.cov, np.eye(4))

    d = dil.dilate(chn.CATT, 0.4, 0.0)
    env = dil.environment_output(d, vacuum())
    np.testing.assert_allclose(partial_trace(env, [0]).cov, I2, atol=1e-14)

    # input displacement leaks into E1 through the beam splitter
    env = dil.environment_output(d, coherent_state([2.0, 0.0]))
    np.testing.assert_allclose(env.mean[:2], [-2 * math.sqrt(0.6), 0.0], atol=1e-14)
    assert isinstance(env, GaussianState)
