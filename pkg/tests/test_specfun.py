"""Special-function checks against independent series/integral oracles."""

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from tmcalc import quad, specfun
from tmcalc.errors import DomainError, NonconvergenceError, OverflowSignal, PoleError


# ---------------------------------------------------------------------------
# gamma
# ---------------------------------------------------------------------------


def test_gamma_small_values():
    assert specfun.gamma(1.0) == pytest.approx(1.0, rel=1e-14)
    assert specfun.gamma(0.5).real == pytest.approx(math.sqrt(math.pi), rel=1e-14)
    assert specfun.gamma(5.0).real == pytest.approx(24.0, rel=1e-13)


def test_gamma_pole():
    with pytest.raises(PoleError):
        specfun.gamma(0.0)
    with pytest.raises(PoleError):
        specfun.gamma(-3.0)


@settings(max_examples=200, deadline=None)
@given(st.floats(0.01, 10.0), st.floats(-10.0, 10.0))
def test_gamma_recurrence(re, im):
    z = complex(re, im)
    lhs = specfun.gamma(z + 1.0)
    rhs = z * specfun.gamma(z)
    assert abs(lhs - rhs) <= 1e-12 * abs(rhs)


@settings(max_examples=100, deadline=None)
@given(st.floats(0.05, 8.0), st.floats(-6.0, 6.0))
def test_gamma_duplication(re, im):
    z = complex(re, im)
    lhs = specfun.gamma(2.0 * z)
    rhs = 2.0 ** (2.0 * z - 1.0) / math.sqrt(math.pi) * specfun.gamma(z) \
        * specfun.gamma(z + 0.5)
    assert abs(lhs - rhs) <= 1e-11 * abs(rhs)


@settings(max_examples=100, deadline=None)
@given(st.floats(0.05, 0.95), st.floats(-6.0, 6.0))
def test_gamma_complement(re, im):
    z = complex(re, im)
    val = specfun.gamma(z) * specfun.gamma(1.0 - z) * np.sin(math.pi * z) / math.pi
    assert abs(val - 1.0) <= 1e-11


# ---------------------------------------------------------------------------
# Bessel: power-series / integral-representation oracles
# ---------------------------------------------------------------------------


def _j_series_oracle(nu: float, x: float, terms: int = 120) -> float:
    """Plain power-series evaluation, independent of the implementation."""
    total = 0.0
    for k in range(terms):
        num = (-1.0) ** k * (0.5 * x) ** (2 * k + nu)
        den = math.gamma(k + 1.0) * float(np.real(specfun.gamma(nu + k + 1.0)))
        total += num / den
    return total


def test_j_half_order_closed_form():
    # J_{1/2}(x) = sqrt(2/(pi x)) sin x; at x = pi the value is 0
    x = math.pi
    assert specfun.bessel("J", 0.5, x) == pytest.approx(0.0, abs=1e-14)
    for x in (0.3, 1.7, 9.0):
        exact = math.sqrt(2.0 / (math.pi * x)) * math.sin(x)
        assert specfun.bessel("J", 0.5, x) == pytest.approx(exact, rel=1e-12)


@pytest.mark.parametrize("nu", [-2.3, -0.5, 0.0, 1.0, 3.7, 11.2])
@pytest.mark.parametrize("x", [0.05, 0.7, 4.0, 9.5])
def test_j_matches_series_oracle(nu, x):
    assert specfun.bessel("J", nu, x) == pytest.approx(
        _j_series_oracle(nu, x), rel=1e-10, abs=1e-13)


def test_j_large_argument_wronskian():
    # J_nu Y_nu' - J_nu' Y_nu = 2/(pi x): an oracle the asymptotic branch
    # must satisfy pointwise (tolerance limited by this test's own FD step)
    for nu in (0.3, 2.0, 7.5, 16.0):
        for x in (15.0, 40.0, 90.0):
            jp, _ = quad.differentiate(lambda t: specfun.bessel("J", nu, t), x,
                                       1, h=1e-3 * x, levels=4)
            yp, _ = quad.differentiate(lambda t: specfun.bessel("Y", nu, t), x,
                                       1, h=1e-3 * x, levels=4)
            w = specfun.bessel("J", nu, x) * yp - jp * specfun.bessel("Y", nu, x)
            assert w == pytest.approx(2.0 / (math.pi * x), rel=1e-8)


def test_i_small_argument_limit():
    # leading term x/2 for nu = 1
    x = 1e-6
    assert specfun.bessel("I", 1.0, x) == pytest.approx(x / 2.0, rel=1e-9)


def test_i_overflow_signalled():
    with pytest.raises(OverflowSignal):
        specfun.bessel("I", 0.0, 800.0)
    m, e = specfun.bessel_i_scaled(0.0, 800.0)
    # envelope e^x / sqrt(2 pi x)
    assert m == pytest.approx(1.0 / math.sqrt(2 * math.pi * 800.0), rel=1e-3)
    assert e == 800.0


def _k0_series_oracle(x: float) -> float:
    """K_0 via the ascending log series (independent of the quadrature)."""
    i0 = _j_series_oracle(0.0, x) if False else None
    # I_0 series
    q = 0.25 * x * x
    term, i0 = 1.0, 1.0
    hsum, acc = 0.0, 0.0
    for k in range(1, 60):
        term *= q / (k * k)
        i0 += term
        hsum += 1.0 / k
        acc += term * hsum
    return -(math.log(0.5 * x) + specfun.EULER_GAMMA) * i0 + acc


def test_k_matches_log_series_oracle():
    for x in (0.3, 1.0, 2.5):
        assert specfun.bessel("K", 0.0, x) == pytest.approx(
            _k0_series_oracle(x), rel=1e-10)


def test_k_half_order_closed_form():
    for x in (0.5, 2.0, 10.0):
        exact = math.sqrt(math.pi / (2.0 * x)) * math.exp(-x)
        assert specfun.bessel("K", 0.5, x) == pytest.approx(exact, rel=1e-11)


def test_k_symmetric_in_order():
    assert specfun.bessel("K", -4.5, 1.3) == pytest.approx(
        specfun.bessel("K", 4.5, 1.3), rel=1e-12)


def test_y_connection_and_integer_limit():
    # connection formula as the oracle at a clean non-integer order
    nu, x = 0.3, 2.2
    j1, j2 = _j_series_oracle(nu, x), _j_series_oracle(-nu, x)
    oracle = (j1 * math.cos(math.pi * nu) - j2) / math.sin(math.pi * nu)
    assert specfun.bessel("Y", nu, x) == pytest.approx(oracle, rel=1e-11)
    # continuity across an integer order
    left = specfun.bessel("Y", 2.0 - 1e-7, 3.3)
    mid = specfun.bessel("Y", 2.0, 3.3)
    right = specfun.bessel("Y", 2.0 + 1e-7, 3.3)
    assert mid == pytest.approx(0.5 * (left + right), abs=1e-8)


# ---------------------------------------------------------------------------
# normalized Bessel function
# ---------------------------------------------------------------------------


def test_normalized_j_at_zero():
    assert specfun.normalized_j(0.7, 0.0) == 1.0


def test_normalized_j_half_orders():
    t = np.linspace(0.1, 20.0, 37)
    got = specfun.normalized_j(-0.5, t)
    assert np.max(np.abs(got - np.cos(t))) < 1e-12
    got = specfun.normalized_j(0.5, t)
    assert np.max(np.abs(got - np.sin(t) / t)) < 1e-12


def test_normalized_j_bessel_ode_residual():
    # B_nu j = -j with j(0)=1, j'(0)=0
    nu = 0.5
    for x in np.linspace(0.1, 5.0, 9):
        d2, _ = quad.differentiate(lambda t: specfun.normalized_j(nu, t), x, 2, h=1e-2)
        d1, _ = quad.differentiate(lambda t: specfun.normalized_j(nu, t), x, 1, h=1e-2)
        resid = d2 + (2 * nu + 1) / x * d1 + specfun.normalized_j(nu, x)
        assert abs(resid) < 1e-6


# ---------------------------------------------------------------------------
# Legendre functions
# ---------------------------------------------------------------------------


def test_legendre_p_trivia():
    assert specfun.legendre_p(0.77, 0.0, 1.0) == pytest.approx(1.0, abs=1e-13)
    for z in (0.2, 1.0, 2.0, 7.0):
        assert specfun.legendre_p(1.0, 0.0, z) == pytest.approx(z, rel=1e-12)


def _legendre_angle_oracle(nu: float, z: float) -> float:
    v, _ = quad.integrate(
        lambda t: (z + math.sqrt(z * z - 1.0) * np.cos(t)) ** nu, 0.0, math.pi,
        abs_tol=1e-13)
    return v / math.pi


@pytest.mark.parametrize("z", [1.5, 2.7, 30.0])
def test_legendre_p_angle_integral(z):
    for nu in (0.3, 1.7, -0.45):
        assert specfun.legendre_p(nu, 0.0, z) == pytest.approx(
            _legendre_angle_oracle(nu, z), rel=1e-10)


def test_legendre_p_parameter_pole():
    with pytest.raises(PoleError):
        specfun.legendre_p(0.3, 1.0, 0.5)  # 1 - mu = 0


def test_legendre_q_closed_forms():
    # Q_0(z) = atanh(1/z) off the cut
    assert specfun.legendre_q(0.0, 0.0, 3.0) == pytest.approx(
        0.5 * math.log(2.0), rel=1e-12)
    assert specfun.legendre_q(0.0, 0.0, 2.0) == pytest.approx(
        0.5 * math.log(3.0), rel=1e-12)
    # Q_1(z) = z/2 log((z+1)/(z-1)) - 1
    for z in (1.01, 1.3, 6.0):
        exact = 0.5 * z * math.log((z + 1.0) / (z - 1.0)) - 1.0
        assert specfun.legendre_q(1.0, 0.0, z) == pytest.approx(exact, rel=1e-10)
    # on the cut: Ferrers Q_0(x) = atanh(x)
    for x in (-0.4, 0.25, 0.8):
        assert specfun.legendre_q(0.0, 0.0, x) == pytest.approx(
            math.atanh(x), rel=1e-9)


def test_legendre_wronskian_consistency():
    # (1-x^2) (P Q' - P' Q) = Gamma(nu+mu+1)/Gamma(nu-mu+1) on the cut
    for nu, mu in ((0.7, 0.0), (0.3, 0.4), (1.6, -0.3)):
        for x in (0.2, 0.6):
            p = lambda t: specfun.legendre_p(nu, mu, t)
            q = lambda t: specfun.legendre_q(nu, mu, t)
            qp, _ = quad.differentiate(q, x, 1, h=1e-3, levels=4)
            pp, _ = quad.differentiate(p, x, 1, h=1e-3, levels=4)
            w = p(x) * qp - q(x) * pp
            expect = float(np.real(specfun.gamma(nu + mu + 1.0)
                                   / specfun.gamma(nu - mu + 1.0))) / (1 - x * x)
            assert w == pytest.approx(expect, rel=1e-8)


def test_legendre_q_large_z_decay():
    # Q_nu(z) ~ c z^(-nu-1): the local log-slope approaches -(nu+1)
    nu = 0.8
    z1, z2 = 60.0, 90.0
    q1 = specfun.legendre_q(nu, 0.0, z1)
    q2 = specfun.legendre_q(nu, 0.0, z2)
    slope = math.log(q2 / q1) / math.log(z2 / z1)
    assert slope == pytest.approx(-(nu + 1.0), abs=2e-3)


def test_legendre_q_parameter_pole():
    with pytest.raises(PoleError):
        specfun.legendre_q(-2.0, 1.0, 1.5)  # nu + mu + 1 = 0


# ---------------------------------------------------------------------------
# Gauss hypergeometric
# ---------------------------------------------------------------------------


def test_2f1_empty_tail():
    assert specfun.gauss_2f1(0.7, -1.3, 2.2, 0.0) == pytest.approx(1.0, abs=0.0)


def test_2f1_binomial_identity():
    # F(-n, b; b; -x) = (1+x)^n
    assert specfun.gauss_2f1(-3.0, 2.0, 2.0, -0.5).real == pytest.approx(
        1.5 ** 3, rel=1e-13)


def _euler_integral_oracle(a, b, c, z) -> complex:
    """Euler integral, Re c > Re b > 0, via singular quadrature."""
    b, c = complex(b), complex(c)
    lb = float(b.real) - 1.0
    lcb = float((c - b).real) - 1.0

    def re_part(t):
        t = np.asarray(t, dtype=float)
        return np.real(t ** (b - 1.0) * (1.0 - t) ** (c - b - 1.0)
                       * (1.0 - z * t) ** (-complex(a)))

    def im_part(t):
        t = np.asarray(t, dtype=float)
        return np.imag(t ** (b - 1.0) * (1.0 - t) ** (c - b - 1.0)
                       * (1.0 - z * t) ** (-complex(a)))

    vr, _ = quad.integrate(re_part, 0.0, 1.0, singularity=(lb, lcb), abs_tol=1e-13)
    vi, _ = quad.integrate(im_part, 0.0, 1.0, singularity=(lb, lcb), abs_tol=1e-13)
    ratio = specfun.gamma(c) / (specfun.gamma(b) * specfun.gamma(c - b))
    return ratio * complex(vr, vi)


@pytest.mark.parametrize("abcz", [
    (0.7, 0.9, 2.1, 0.4),
    (-0.3, 1.4, 3.0, 0.4),
    (complex(0.5, 0.3), 1.1, 2.6, 0.4),
    (1.2, 0.8, 2.0, -0.7),
    (0.4, 0.6, 1.9, 0.95),
])
def test_2f1_euler_integral_oracle(abcz):
    a, b, c, z = abcz
    got = specfun.gauss_2f1(a, b, c, z)
    want = _euler_integral_oracle(a, b, c, z)
    assert abs(got - want) <= 1e-10 * max(1.0, abs(want))


def test_2f1_regime_errors():
    with pytest.raises(NonconvergenceError):
        specfun.gauss_2f1(0.5, 0.5, 1.5, 1.2)
    with pytest.raises(PoleError):
        specfun.gauss_2f1(0.5, 0.5, -1.0, 0.3)


# ---------------------------------------------------------------------------
# Kummer function
# ---------------------------------------------------------------------------


def test_kummer_special_values():
    assert specfun.kummer_phi(0.37, 1.0, 0.0) == pytest.approx(1.0, abs=0.0)
    assert specfun.kummer_phi(2.0, 2.0, 1.0).real == pytest.approx(math.e, rel=1e-13)
    z = 0.7
    assert specfun.kummer_phi(1.0, 2.0, z).real == pytest.approx(
        (math.exp(z) - 1.0) / z, rel=1e-13)


def test_kummer_derivative_relation():
    # d/dz Phi(a,c;z) = (a/c) Phi(a+1,c+1;z), checked by finite differences
    a, c = 0.8, 1.7
    for z in (-2.0, 0.4, 3.0):
        h = 1e-5
        fd = (specfun.kummer_phi(a, c, z + h) - specfun.kummer_phi(a, c, z - h)) / (2 * h)
        want = a / c * specfun.kummer_phi(a + 1.0, c + 1.0, z)
        assert abs(fd - want) <= 1e-9 * max(1.0, abs(want))


def test_kummer_pole_and_regularized():
    with pytest.raises(PoleError):
        specfun.kummer_phi(0.5, -1.0, 0.3)
    # regularized value is finite and matches Phi/Gamma(c) nearby
    v = specfun.kummer_phi_reg(0.5, -1.0, 0.3)
    w = specfun.kummer_phi_reg(0.5, -1.0 + 1e-7, 0.3)
    assert abs(v - w) < 1e-5


def test_kummer_large_negative_argument():
    # Phi(1, 2, z) = (e^z - 1)/z holds for very negative z too
    z = -80.0
    assert specfun.kummer_phi(1.0, 2.0, z).real == pytest.approx(-1.0 / z, rel=1e-10)
