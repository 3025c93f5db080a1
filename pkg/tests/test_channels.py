"""Collapse-channel assembly for both master equations."""

import math

import numpy as np
import pytest

import floquet_cat as fc
from floquet_cat import channels, hamiltonians as hams
from floquet_cat.bessel import bessel_j
from floquet_cat.params import TWO_PI


def test_lab_channels_empty_without_rates(set1_small):
    assert channels.lab_collapse_channels(set1_small) == []


def test_lab_channel_count_tracks_nonzero_rates(set1_small):
    mhz = TWO_PI * 1e-3
    p = set1_small.with_rates(kappa_m=mhz, gamma_q2=0.5 * mhz)
    chs = channels.lab_collapse_channels(p)
    assert len(chs) == 2
    assert {c.label for c in chs} == {"magnon_decay", "qubit2_decay"}


def test_lab_magnon_prefactor_units(set1_small):
    # kappa_m = 1 MHz -> prefactor sqrt(2*pi*0.001) on the magnon operator
    p = set1_small.with_rates(kappa_m=TWO_PI * 1e-3)
    (ch,) = channels.lab_collapse_channels(p)
    lay, a, m, s = hams._ops_full(p)
    assert np.allclose(ch.operator.mat, math.sqrt(TWO_PI * 1e-3) * m, atol=1e-15)


def test_effective_single_magnon_channel(set1_small):
    mhz = TWO_PI * 1e-3
    p = set1_small.with_rates(kappa_m=mhz)
    dp = fc.derive_params(p)
    chs = channels.effective_collapse_channels(p, dp)
    assert len(chs) == 1 and chs[0].label == "magnon_decay"
    lay, m, s = hams._ops_eff(p)
    assert np.allclose(chs[0].operator.mat, math.sqrt(mhz) * m, atol=1e-15)


def test_effective_qubit_channel_weights(set1_small):
    mhz = TWO_PI * 1e-3
    p = set1_small.with_rates(gamma_q1=0.5 * mhz)
    dp = fc.derive_params(p)
    chs = {c.label: c for c in channels.effective_collapse_channels(p, dp)}
    assert set(chs) == {"qubit1_x", "qubit1_y", "qubit1_z"}
    lay, m, s = hams._ops_eff(p)
    gamma = 0.5 * mhz
    assert np.allclose(chs["qubit1_x"].operator.mat,
                       math.sqrt(gamma / 2) * s[(1, "x")], atol=1e-15)
    assert np.allclose(chs["qubit1_y"].operator.mat,
                       math.sqrt(gamma / 2) * bessel_j(2, dp.mu1) * s[(1, "y")],
                       atol=1e-15)
    w = (bessel_j(1, dp.mu1) ** 2 + bessel_j(3, dp.mu1) ** 2) * gamma / 2
    # J1^2 + J3^2 ~ 0.582^2 + 0.1045^2 at mu = 1.84
    assert (bessel_j(1, dp.mu1) ** 2 + bessel_j(3, dp.mu1) ** 2) == pytest.approx(
        0.582 ** 2 + 0.1 ** 2, abs=2e-3)
    assert np.allclose(chs["qubit1_z"].operator.mat,
                       math.sqrt(w) * s[(1, "z")], atol=1e-15)


def test_hybrid_channel_coefficients():
    mhz = TWO_PI * 1e-3
    p = fc.paper_set_1(phi=math.pi / 2, n_cavity=4, n_magnon=6).with_rates(kappa_a=mhz)
    dp = fc.derive_params(p)
    (ch,) = channels.effective_collapse_channels(p, dp)
    assert ch.label == "hybrid"
    lay, m, s = hams._ops_eff(p)
    # sigma2^z coefficient is -i (G/delta) sqrt(kappa_a) at Phi = pi/2
    expected = math.sqrt(mhz) * ((dp.G / dp.delta) * s[(1, "z")]
                                 + (dp.G / dp.delta) * np.exp(-1j * dp.Phi) * s[(2, "z")]
                                 - (p.g3 / dp.delta_cm) * m)
    assert np.allclose(ch.operator.mat, expected, atol=1e-15)
    coeff2 = math.sqrt(mhz) * (dp.G / dp.delta) * np.exp(-1j * dp.Phi)
    assert coeff2 == pytest.approx(-1j * (dp.G / dp.delta) * math.sqrt(mhz), abs=1e-15)


def test_hybrid_rotating_tag():
    mhz = TWO_PI * 1e-3
    p = fc.paper_set_1(n_cavity=4, n_magnon=6).with_rates(kappa_a=mhz)
    dp = fc.derive_params(p)
    (ch,) = channels.effective_collapse_channels(p, dp, rotating_xi=True)
    assert ch.modulated is not None
    assert ch.mod_freq == pytest.approx(-dp.xi)
    lay, m, s = hams._ops_eff(p)
    assert np.allclose(ch.modulated.mat,
                       -math.sqrt(mhz) * (p.g3 / dp.delta_cm) * m, atol=1e-15)
    # static + modulated at t=0 reproduces the auxiliary-frame operator
    (ch0,) = channels.effective_collapse_channels(p, dp, rotating_xi=False)
    assert np.allclose(ch.operator.mat + ch.modulated.mat, ch0.operator.mat,
                       atol=1e-15)


def test_full_effective_channel_set(set1_small):
    mhz = TWO_PI * 1e-3
    p = set1_small.with_rates(gamma_q1=mhz, gamma_q2=mhz, kappa_m=mhz, kappa_a=mhz)
    chs = channels.effective_collapse_channels(p, fc.derive_params(p))
    assert len(chs) == 8  # 3 per qubit + magnon + hybrid
