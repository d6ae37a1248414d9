"""Quadrature engine checks: singular endpoints, tails, principal values."""

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from tmcalc import quad, specfun
from tmcalc.errors import DomainError, NonconvergenceError


def test_inverse_sqrt_endpoint():
    v, err = quad.integrate(lambda t: 1.0 / np.sqrt(t), 0.0, 1.0,
                            singularity=(-0.5, 0.0))
    assert v == pytest.approx(2.0, abs=1e-11)
    assert err < 1e-9


def test_poisson_kernel_constant_order():
    # (x^2 - t^2)^(nu - 1/2) with nu = 1/2 is identically 1
    v, _ = quad.integrate(lambda t: np.ones_like(t), 0.0, 2.0,
                          singularity=(0.0, 0.0))
    assert v == pytest.approx(2.0, abs=1e-12)


def test_poisson_kernel_beta_oracle():
    # int_0^x (x^2-t^2)^(nu-1/2) dt = x^(2 nu) sqrt(pi)/2 G(nu+1/2)/G(nu+1),
    # from the substitution t = x sin(theta)
    nu, x = 0.3, 1.5
    v, _ = quad.integrate(lambda t: (x * x - t * t) ** (nu - 0.5), 0.0, x,
                          singularity=(0.0, nu - 0.5))
    exact = x ** (2 * nu) * math.sqrt(math.pi) / 2.0 * float(
        np.real(specfun.gamma(nu + 0.5) / specfun.gamma(nu + 1.0)))
    assert v == pytest.approx(exact, rel=1e-10)


def test_singular_vs_naive_agreement():
    # for mild exponents the naive adaptive pass also converges; both paths
    # must agree
    for lam in (-0.45, -0.25, -0.1):
        f = lambda t: (1.0 + t) * t ** lam
        v1, _ = quad.integrate(f, 0.0, 1.0, singularity=(lam, 0.0))
        # the naive pass digs toward 0 geometrically; nodes never touch it
        v2, _ = quad.integrate(f, 0.0, 1.0, abs_tol=1e-12, max_segments=900)
        assert v1 == pytest.approx(v2, abs=1e-8)


def test_semiinfinite_exponential():
    v, _ = quad.integrate_semiinfinite(lambda t: np.exp(-t), 0.0, "exponential")
    assert v == pytest.approx(1.0, abs=1e-10)


def test_semiinfinite_rl_exponential_oracle():
    # int_x^inf (t-x)^(a-1) e^-t dt / Gamma(a) = e^-x  (u = t - x)
    alpha, x = 0.5, 1.0

    def f(t):
        t = np.asarray(t, dtype=float)
        return (t - x) ** (alpha - 1.0) * np.exp(-t)

    v, _ = quad.integrate(f, x + 1e-13, x + 60.0,
                          singularity=(alpha - 1.0, 0.0))
    assert v / float(np.real(specfun.gamma(alpha))) == pytest.approx(
        math.exp(-1.0), rel=1e-9)


def test_semiinfinite_compact_support(bump12):
    f = bump12
    v1, _ = quad.integrate_semiinfinite(f, 0.5, ("compact_support", 2.0))
    v2, _ = quad.integrate(f, 1.0, 2.0)
    assert v1 == pytest.approx(v2, abs=1e-12)


def test_principal_value_odd():
    assert quad.principal_value(lambda t: 1.0 / t, 0.0, -1.0, 1.0) == \
        pytest.approx(0.0, abs=1e-10)
    assert quad.principal_value(lambda t: 1.0 / (t - 1.0), 1.0, 0.0, 2.0) == \
        pytest.approx(0.0, abs=1e-10)


def test_principal_value_excision_oracle():
    # p.v. int_0^40 y e^-y/(x^2-y^2) dy at x = 1 against brute excision
    x = 1.0

    def f(y):
        y = np.asarray(y, dtype=float)
        return y * np.exp(-y) / (x * x - y * y)

    got = quad.principal_value(f, 1.0, 0.0, 40.0)
    eps = 1e-8
    o1, _ = quad.integrate(f, 0.0, 1.0 - eps, abs_tol=1e-13)
    o2, _ = quad.integrate(f, 1.0 + eps, 40.0, abs_tol=1e-13)
    # brute excision carries an O(eps) bias; it brackets the answer to ~1e-8
    assert got == pytest.approx(o1 + o2, abs=5e-8)


def test_principal_value_analytic_reduces_to_integral():
    f = lambda t: np.exp(t)
    got = quad.principal_value(f, 0.5, 0.0, 1.0)
    want, _ = quad.integrate(f, 0.0, 1.0)
    assert got == pytest.approx(want, rel=1e-9)


def test_principal_value_detects_double_pole():
    with pytest.raises(NonconvergenceError):
        quad.principal_value(lambda t: 1.0 / (t - 1.0) ** 2, 1.0, 0.0, 2.0)


def test_differentiate_trivia():
    v, _ = quad.differentiate(lambda t: t ** 3, 2.0, 2)
    assert v == pytest.approx(12.0, rel=1e-8)
    v, _ = quad.differentiate(np.sin, 0.0, 1)
    assert v == pytest.approx(1.0, rel=1e-10)


def test_differentiate_bessel_ode(bump12):
    # B_nu j_nu = -j_nu as the cross-module oracle
    nu, x = 0.5, 1.0
    j = lambda t: specfun.normalized_j(nu, t)
    d2, _ = quad.differentiate(j, x, 2)
    d1, _ = quad.differentiate(j, x, 1)
    resid = d2 + (2 * nu + 1) / x * d1 + j(x)
    assert abs(resid) <= 1e-6


@settings(max_examples=25, deadline=None)
@given(st.floats(0.1, 2.0), st.floats(2.2, 5.0), st.floats(-1.0, 1.0),
       st.floats(-1.0, 1.0))
def test_integrate_linear_additive(a, b, c1, c2):
    f1 = lambda t: np.sin(t)
    f2 = lambda t: np.exp(-t)
    lhs, e1 = quad.integrate(lambda t: c1 * f1(t) + c2 * f2(t), a, b)
    v1, _ = quad.integrate(f1, a, b)
    v2, _ = quad.integrate(f2, a, b)
    mid = 0.5 * (a + b)
    p1, _ = quad.integrate(lambda t: c1 * f1(t) + c2 * f2(t), a, mid)
    p2, _ = quad.integrate(lambda t: c1 * f1(t) + c2 * f2(t), mid, b)
    assert lhs == pytest.approx(c1 * v1 + c2 * v2, abs=1e-9)
    assert lhs == pytest.approx(p1 + p2, abs=1e-9)


def test_grid_validation():
    with pytest.raises(DomainError):
        quad.Grid(np.array([1.0]))
    with pytest.raises(DomainError):
        quad.Grid(np.array([0.0, 1.0]))
    with pytest.raises(DomainError):
        quad.Grid(np.array([1.0, 1.0]))


def test_gridfunction_support_enforced():
    g = quad.Grid.uniform(0.5, 3.0, 11)
    vals = np.ones(11)
    with pytest.raises(DomainError):
        quad.GridFunction(g, vals, support=(1.0, 2.0))


def test_gridfunction_spline_accuracy(bump12):
    g = quad.Grid.uniform(0.9, 2.1, 400)
    gf = quad.GridFunction.from_samples(g, bump12(g.nodes), support=(1.0, 2.0))
    xs = np.linspace(1.05, 1.95, 23)
    assert np.max(np.abs(gf(xs) - bump12(xs))) < 1e-9
    # spline derivative against the analytic one
    assert np.max(np.abs(gf.derivative(xs) - bump12.derivative(xs))) < 1e-6


def test_bump_derivatives_match_fd(bump12):
    x0, h = 1.37, 1e-5
    fd1 = (bump12(x0 + h) - bump12(x0 - h)) / (2 * h)
    fd2 = (bump12(x0 + h) - 2 * bump12(x0) + bump12(x0 - h)) / h ** 2
    assert bump12.derivative(x0) == pytest.approx(fd1, abs=1e-9)
    assert bump12.second_derivative(x0) == pytest.approx(fd2, abs=1e-6)


def test_bump_vanishes_outside():
    b = quad.BumpSpec(1.0, 2.0)
    assert b(0.5) == 0.0 and b(2.5) == 0.0 and b(1.0) == 0.0


def test_normalized_bump_peak():
    b = quad.BumpSpec.normalized(1.5, 1.8)
    assert b(1.65) == pytest.approx(1.0, rel=1e-12)
