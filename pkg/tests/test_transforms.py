import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from quarterplane.transforms import (
    HEAT,
    KDV,
    HalfLineData,
    damped_g0,
    exprel,
    hat_f,
    hat_u0,
    tilde_f,
    tilde_g0,
)

EXP = HalfLineData(u0=lambda y: np.exp(-y), decay_rate=1.0)
LAMS = np.array([0.0, 0.3, -1.7, 4.0, 25.0, 0.5 - 0.25j, -2 - 1j])


def test_hat_u0_exponential():
    got = hat_u0(LAMS, EXP, 1e-12)
    assert np.max(np.abs(got - 1 / (1 + 1j * LAMS))) < 1e-11


def test_hat_u0_zero_and_gaussian():
    assert np.all(hat_u0(LAMS, HalfLineData.zero()) == 0)
    gauss = HalfLineData(u0=lambda y: np.exp(-y * y), decay_rate=1.0)
    assert abs(hat_u0(0.0, gauss, 1e-12) - math.sqrt(math.pi) / 2) < 1e-11


def test_hat_u0_rejects_upper_half_plane():
    with pytest.raises(ValueError):
        hat_u0(1j, EXP)
    with pytest.raises(ValueError):
        hat_f(0.5j, 0.0, EXP)


def test_tilde_g0_constant():
    w = np.array([1.0, -2.0, 3j, 1e-9])
    got = tilde_g0(w, 0.7, HalfLineData.step())
    assert np.allclose(got, np.expm1(w * 0.7) / w, rtol=1e-13, atol=0)
    assert tilde_g0(0.0, 0.7, HalfLineData.step()) == pytest.approx(0.7, abs=1e-15)
    assert np.all(tilde_g0(w, 0.7, HalfLineData.zero()) == 0)


def test_tilde_g0_quadrature_matches_closed_form():
    data = HalfLineData(g0=lambda t: np.exp(t))
    w = np.array([0.0, 1.5, -3 + 2j, 10j])
    want = np.where(w == -1, 0.6, (np.exp((w + 1) * 0.6) - 1) / (w + 1))
    assert np.max(np.abs(tilde_g0(w, 0.6, data, 1e-12) - want)) < 1e-11


def test_damped_g0_is_scaled_tilde():
    data = HalfLineData(g0=lambda t: np.cos(t))
    w = np.array([0.5, 2 + 3j, 1j])
    assert np.allclose(damped_g0(w, 1.3, data, 1e-12),
                       np.exp(-w * 1.3) * tilde_g0(w, 1.3, data, 1e-12), atol=1e-11)


def test_exprel_small_argument():
    z = np.array([0.0, 1e-12, 1e-3j, 2.0])
    assert np.allclose(exprel(z), np.where(z == 0, 1, np.expm1(z) / np.where(z == 0, 1, z)),
                       rtol=1e-14)


def test_forcing_transforms():
    lam = np.array([0.0, 1.0, -2 - 0.5j])
    assert np.all(tilde_f(lam, 0.0, 1.0, HalfLineData.zero()) == 0)
    sep = HalfLineData(f=lambda y, tau: np.exp(-y), decay_rate=1.0)
    assert np.max(np.abs(tilde_f(lam, 0.0, 2.0, sep, 1e-11) - 2 / (1 + 1j * lam))) < 1e-10
    damped = HalfLineData(f=lambda y, tau: np.exp(-y - tau), decay_rate=1.0)
    assert np.max(np.abs(tilde_f(lam, 1.0, 1.0, damped, 1e-11) - 1 / (1 + 1j * lam))) < 1e-10
    assert np.max(np.abs(hat_f(lam, 0.4, damped, 1e-12)
                         - math.exp(-0.4) / (1 + 1j * lam))) < 1e-11


def test_dispersion_relations():
    heat, kdv = HEAT, KDV
    assert heat(1) == 1 and heat.degree == 2
    assert kdv(1) == -1j and kdv.degree == 3
    alpha = complex(-0.5, math.sqrt(3) / 2)
    for lam in (0.3 + 0.2j, -1.1 + 2j, 4.0):
        assert abs(kdv(alpha * lam) - kdv(lam)) <= 1e-14 * max(1, abs(lam) ** 3)


def test_decay_rate_must_be_positive():
    with pytest.raises(ValueError):
        HalfLineData(u0=lambda y: np.exp(-y), decay_rate=0.0)


@settings(max_examples=25, deadline=None)
@given(a=st.floats(-3, 3), b=st.floats(-3, 3), lam=st.floats(-20, 20))
def test_hat_u0_linear_and_bounded(a, b, lam):
    gauss = HalfLineData(u0=lambda y: np.exp(-y * y), decay_rate=1.0)
    combo = HalfLineData(u0=lambda y: a * np.exp(-y) + b * np.exp(-y * y),
                         decay_rate=1.0, decay_constant=abs(a) + abs(b) + 1e-12)
    lhs = hat_u0(lam, combo, 1e-11)
    rhs = a * hat_u0(lam, EXP, 1e-11) + b * hat_u0(lam, gauss, 1e-11)
    assert abs(lhs - rhs) < 1e-9
    # |u0_hat| <= int |u0| for real lam
    assert abs(lhs) <= abs(a) + abs(b) * math.sqrt(math.pi) / 2 + 1e-9
