"""Operator-level identities: closed forms, intertwining, factorizations."""

import math

import numpy as np
import pytest

from tmcalc import fracops, quad, specfun, transforms, transmute
from tmcalc.errors import DomainError

TS = transmute.TransmutationSpec


@pytest.fixture
def cos_gf():
    g = quad.Grid.uniform(1e-9, 4.5, 65)
    return quad.GridFunction.from_callable(np.cos, g)


def _exactfn(fn, lo, hi):
    g = quad.Grid.uniform(lo, hi, 8)
    vec = lambda t: np.array([fn(float(u)) for u in np.atleast_1d(t)])
    return quad.GridFunction.from_callable(vec, g)


# ---------------------------------------------------------------------------
# classical Poisson / Sonin
# ---------------------------------------------------------------------------


def test_poisson_on_cos_closed_form(cos_gf):
    # P_nu[cos](x) = sqrt(pi) G(nu+1/2)/(2 G(nu+1)) x^-nu J_nu(x); at
    # nu = 1/2 this is sqrt(2/pi) sin(x)/x
    for nu in (0.3, 0.5, 1.2):
        for x in (0.5, 1.0, 3.0):
            got = transmute.poisson_classic(nu, cos_gf, x)
            want = math.sqrt(math.pi) * float(np.real(
                specfun.gamma(nu + 0.5) / specfun.gamma(nu + 1.0))) / 2.0 \
                * x ** (-nu) * specfun.bessel("J", nu, x)
            assert got == pytest.approx(want, rel=1e-7), (nu, x)
    x = 1.3
    got = transmute.poisson_classic(0.5, cos_gf, x)
    assert got == pytest.approx(math.sqrt(2.0 / math.pi) * math.sin(x) / x, rel=1e-9)


def test_poisson_on_unit_beta_oracle():
    g = quad.Grid.uniform(1e-10, 3.0, 33)
    one = quad.GridFunction.from_callable(
        lambda t: np.ones_like(np.asarray(t, dtype=float)), g)
    nu = 0.4
    got = transmute.poisson_classic(nu, one, 1.7)
    want = math.sqrt(math.pi) * float(np.real(specfun.gamma(nu + 0.5))) / (
        2.0 ** (nu + 1.0) * float(np.real(specfun.gamma(nu + 1.0))) ** 2)
    assert got == pytest.approx(want, rel=1e-9)


def test_sonin_poisson_mutual_inverse(bump12_gf):
    nu = 0.25
    prof = transmute.apply_profile(TS("PoissonClassic", nu=nu), bump12_gf,
                                   0.02, 30.0, n=320)
    for x in (1.3, 1.5, 1.8):
        back = transmute.sonin_classic(nu, prof, x)
        assert back == pytest.approx(float(bump12_gf(x)), abs=2e-6)


# ---------------------------------------------------------------------------
# SPD variants and the exponentially corrected pair
# ---------------------------------------------------------------------------


def test_spd_pair_mutually_inverse(bump12_gf):
    nu = 0.7
    r = transmute.verify_inverse_pair(
        TS("SPD", nu=nu, kind="P_1/2-nu"), TS("SPD", nu=nu, kind="S_nu-1/2"),
        bump12_gf, profile_range=(0.05, 40.0), n_profile=400)
    assert r["sup_err"] <= 1e-5


def test_spd_intertwining(bump12):
    for kind, nu in (("P_1/2-nu", 0.3), ("S_nu-1/2", 0.3),
                     ("P_-nu-1/2", 0.35), ("S_nu+1/2", 0.4)):
        r = transmute.verify_intertwining(TS("SPD", nu=nu, kind=kind), bump12,
                                          probe_grid=(1.25, 1.5, 1.75))
        assert r["normalized"] <= 1e-5, (kind, r)


def test_poisson_e_intertwines(bump12):
    r = transmute.verify_intertwining(TS("PoissonE", nu=0.75), bump12,
                                      probe_grid=(1.3, 1.6))
    assert r["normalized"] <= 1e-5


def test_sonin_e_intertwines(bump12):
    r = transmute.verify_intertwining(TS("SoninE", nu=0.25), bump12,
                                      probe_grid=(1.3, 1.6))
    assert r["normalized"] <= 1e-5


# ---------------------------------------------------------------------------
# zero-order smoothness family
# ---------------------------------------------------------------------------


def test_be0_special_values(bump12_gf):
    f = bump12_gf
    for x in (1.3, 1.6):
        assert transmute.be0("1S0+", 0.0, f, x) == pytest.approx(
            float(f(x)), abs=1e-10)
        assert transmute.be0("1P0+", 1.0, f, x) == pytest.approx(
            transmute.hardy("U1", f, x), abs=1e-10)
        assert transmute.be0("1S-", 1.0, f, x) == pytest.approx(
            transmute.hardy("U2", f, x), abs=1e-10)
        assert transmute.be0("1S0+", 1.0, f, x) == pytest.approx(
            transmute.hardy("U3", f, x), abs=1e-10)
        assert transmute.be0("1P-", 1.0, f, x) == pytest.approx(
            transmute.hardy("U4", f, x), abs=1e-10)


def test_be0_intertwining(bump12):
    for kind, nu in (("1S0+", 2.0), ("1P0+", 0.4), ("1S-", 0.6), ("1P-", 1.3)):
        r = transmute.verify_intertwining(TS("BE0", nu=nu, kind=kind), bump12,
                                          probe_grid=(1.25, 1.5, 1.75))
        assert r["normalized"] <= 1e-5, (kind, r)


def test_be0_inverse_pairs(bump12_gf):
    for nu in (0.4, 1.0):
        r = transmute.verify_inverse_pair(
            TS("BE0", nu=nu, kind="1S0+"), TS("BE0", nu=nu, kind="1P0+"),
            bump12_gf, profile_range=(0.02, 250.0), n_profile=420)
        assert r["sup_err"] <= 1e-5, nu
        r = transmute.verify_inverse_pair(
            TS("BE0", nu=nu, kind="1S-"), TS("BE0", nu=nu, kind="1P-"),
            bump12_gf, profile_range=(0.02, 250.0), n_profile=420)
        assert r["sup_err"] <= 1e-5, nu


# ---------------------------------------------------------------------------
# first-kind family: reductions, factorizations, recurrences
# ---------------------------------------------------------------------------


def test_be1_reduces_to_rl_at_nu0(bump12_gf):
    mu, x = 0.4, 1.6
    got = transmute.be1("B0+", 0.0, mu, bump12_gf, x)
    want = fracops.riemann_liouville("left", 1.0 - mu, bump12_gf, x)
    assert got == pytest.approx(want, rel=1e-9)


def test_be1_symmetry_in_degree(bump12_gf):
    # kernels only see nu through nu(nu+1)
    for kind in ("B0+", "E-"):
        a = transmute.be1(kind, 0.3, 0.4, bump12_gf, 1.5)
        b = transmute.be1(kind, -1.3, 0.4, bump12_gf, 1.5)
        assert a == pytest.approx(b, rel=1e-10)


def test_be1_factorization_via_be0(bump12_gf):
    # B0+^{nu,mu} = I_{0+}^{1-mu} 1S0+ and E-^{nu,mu} = I_-^{1-mu} 1S-
    nu, mu = 0.6, 0.3
    s_prof = _exactfn(lambda u: transmute.be0("1S0+", nu, bump12_gf, u), 0.3, 2.6)
    for x in (1.3, 1.7):
        lhs = transmute.be1("B0+", nu, mu, bump12_gf, x)
        rhs = fracops.riemann_liouville("left", 1.0 - mu, s_prof, x)
        assert lhs == pytest.approx(rhs, abs=1e-5 * max(1.0, abs(rhs)))
    sm_prof = _exactfn(lambda u: transmute.be0("1S-", nu, bump12_gf, u), 0.3, 2.6)
    for x in (1.3, 1.7):
        lhs = transmute.be1("E-", nu, mu, bump12_gf, x)
        rhs = fracops.riemann_liouville("right", 1.0 - mu, sm_prof, x)
        assert lhs == pytest.approx(rhs, abs=1e-5 * max(1.0, abs(rhs)))


def test_be1_factorization_other_pair(bump12_gf):
    # E0+^{nu,mu} = 1P0+ I_{0+}^{1-mu} and B-^{nu,mu} = 1P- I_-^{1-mu}
    nu, mu = 0.6, 0.3
    i_prof = _exactfn(
        lambda u: fracops.riemann_liouville("left", 1.0 - mu, bump12_gf, u),
        0.3, 2.6)
    for x in (1.3, 1.7):
        lhs = transmute.be1("E0+", nu, mu, bump12_gf, x)
        rhs = transmute.be0("1P0+", nu, i_prof, x)
        assert lhs == pytest.approx(rhs, abs=1e-5 * max(1.0, abs(lhs)))
    ir_prof = _exactfn(
        lambda u: fracops.riemann_liouville("right", 1.0 - mu, bump12_gf, u),
        0.3, 2.6)
    for x in (1.3, 1.7):
        lhs = transmute.be1("B-", nu, mu, bump12_gf, x)
        rhs = transmute.be0("1P-", nu, ir_prof, x)
        assert lhs == pytest.approx(rhs, abs=1e-5 * max(1.0, abs(lhs)))


def test_be0_factorization_via_ek_chain(bump12_gf):
    # 1S0+ = I_{0+}^{nu+1} I_{0+;2,nu+1/2}^{-(nu+1)} (2/x)^{nu+1}
    nu = 0.6
    wgt = _exactfn(lambda u: (2.0 / u) ** (nu + 1.0) * float(bump12_gf(u)), 0.3, 2.6)
    ek = _exactfn(lambda u: fracops.erdelyi_kober(
        "left", -(nu + 1.0), nu + 0.5, wgt, u), 0.5, 2.4)
    for x in (1.3, 1.7):
        lhs = transmute.be0("1S0+", nu, bump12_gf, x)
        rhs = fracops.riemann_liouville("left", nu + 1.0, ek, x)
        assert lhs == pytest.approx(rhs, abs=1e-5 * max(1.0, abs(lhs)))


def test_be1_recurrence_in_degree(bump12_gf, bump12):
    # (2 nu+1) x B0+^{nu,mu}(f/x) = (nu-mu+1) B0+^{nu+1,mu} f
    #                              + (nu+mu) B0+^{nu-1,mu} f
    nu, mu = 0.8, 0.3
    g = quad.Grid.uniform(0.9, 2.1, 65)
    f_over_x = quad.GridFunction.from_callable(
        lambda t: bump12(t) / np.asarray(t, dtype=float), g, support=(1.0, 2.0))
    worst = 0.0
    for x in (1.3, 1.5, 1.8):
        lhs = (2 * nu + 1) * x * transmute.be1("B0+", nu, mu, f_over_x, x)
        rhs = (nu - mu + 1.0) * transmute.be1("B0+", nu + 1.0, mu, bump12_gf, x) \
            + (nu + mu) * transmute.be1("B0+", nu - 1.0, mu, bump12_gf, x)
        worst = max(worst, abs(lhs - rhs))
    assert worst <= 1e-5


def test_be1_derivative_extension(bump12_gf):
    # mu >= 1 through the derivative extension must agree with composing
    # a fractional derivative with the low-order operator
    nu, mu = 0.4, 1.3
    lhs = transmute.be1("B0+", nu, mu, bump12_gf, 1.5)
    low = _exactfn(lambda u: transmute.be1("B0+", nu, mu - 1.0, bump12_gf, u),
                   1.2, 1.8)
    rhs, _ = quad.differentiate(lambda u: np.array(
        [transmute.be1("B0+", nu, mu - 1.0, bump12_gf, float(t))
         for t in np.atleast_1d(u)]), 1.5, 1, h=1e-2)
    assert lhs == pytest.approx(rhs, rel=1e-6)


def test_erdelyi_representation(bump12_gf):
    # the weighted Erdelyi-Kober integral equals the fractional integral of
    # the zero-order-smoothness image of the weighted function
    alpha = 0.25
    x = 1.8
    lhs = fracops.frac_wrt_function(
        lambda t: np.asarray(t) ** 2, lambda t: 2.0 * np.asarray(t),
        alpha, "left", bump12_gf, x)
    wgt = _exactfn(lambda u: (2.0 * u) ** alpha * float(bump12_gf(u)), 0.3, 2.6)
    inner = _exactfn(lambda u: transmute.be0("1S0+", -alpha, wgt, u), 0.5, 2.4)
    rhs = fracops.riemann_liouville("left", alpha, inner, x)
    assert lhs == pytest.approx(rhs, abs=1e-5 * max(1.0, abs(lhs)))


# ---------------------------------------------------------------------------
# second kind, unitary pair, Hardy operators
# ---------------------------------------------------------------------------


def test_be2_intertwining(bump12):
    r = transmute.verify_intertwining(TS("BE2", nu=0.3, kind="2S"), bump12,
                                      probe_grid=(1.3, 1.6))
    assert r["normalized"] <= 1e-5


def test_be2_nu0_hilbert_form(bump12_gf):
    # at nu = 0 the Sonin-type kernel collapses to y/(x^2-y^2)
    x = 1.5
    got = transmute.be2("2S", 0.0, bump12_gf, x)
    want = (2.0 / math.pi) * quad.principal_value(
        lambda y: np.asarray(y) * np.asarray(bump12_gf(y)) / (x * x - y * y),
        x, 1.0, 2.0)
    assert got == pytest.approx(want, abs=1e-8)


def test_be2_inverse_pair(bump12_gf):
    r = transmute.verify_inverse_pair(
        TS("BE2", nu=0.3, kind="2S"), TS("BE2", nu=0.3, kind="2P"),
        bump12_gf, profile_range=(0.02, 200.0), n_profile=420)
    assert r["sup_err"] <= 1e-4


def test_unitary_pair_inverse_and_isometry(bump12_gf, bump_family):
    nu = 0.3
    r = transmute.verify_inverse_pair(
        TS("UnitarySK", nu=nu), TS("UnitaryPK", nu=nu), bump12_gf,
        profile_range=(0.02, 200.0), n_profile=420)
    assert r["sup_err"] <= 1e-4
    act = transmute.estimate_l2_action(TS("UnitarySK", nu=nu), bump_family[:3],
                                       profile_range=(0.02, 400.0), n_profile=400)
    assert max(act["isometry_defects"]) <= 1e-4


def test_hardy_pair_unitary_inverse(bump12_gf, bump_family):
    r = transmute.verify_inverse_pair(TS("Hardy", kind="U1"), TS("Hardy", kind="U2"),
                                      bump12_gf, profile_range=(0.02, 300.0),
                                      n_profile=420)
    assert r["sup_err"] <= 1e-6
    act = transmute.estimate_l2_action(TS("Hardy", kind="U1"), bump_family[:3],
                                       profile_range=(0.01, 600.0), n_profile=420)
    assert max(act["isometry_defects"]) <= 1e-4


@pytest.mark.parametrize("kind", ["U3", "U5"])
def test_hardy_list_unitary(kind, bump_family):
    act = transmute.estimate_l2_action(TS("Hardy", kind=kind), bump_family[:3],
                                       profile_range=(0.01, 600.0), n_profile=420)
    assert max(act["isometry_defects"]) <= 1e-4, act


def test_cnu_composition_identity(bump12_gf):
    # C^nu f = 1S- (1P0+ f)
    nu = 0.4
    inner = _exactfn(lambda u: transmute.be0("1P0+", nu, bump12_gf, u), 0.02, 2.2)
    for x in (1.3, 1.7):
        lhs = transmute.cnu(nu, bump12_gf, x)
        rhs = transmute.be0("1S-", nu, inner, x)
        assert lhs == pytest.approx(rhs, abs=1e-4 * max(1.0, abs(lhs)))


# ---------------------------------------------------------------------------
# generalized translation
# ---------------------------------------------------------------------------


def test_translation_identity_at_zero(bump12_gf):
    assert transmute.generalized_translation(0.7, 0.0, bump12_gf, 1.5) == \
        float(bump12_gf(1.5))


def test_translation_reduces_to_average(bump12_gf):
    x, y = 1.5, 0.3
    got = transmute.generalized_translation(-0.5, y, bump12_gf, x)
    want = 0.5 * (float(bump12_gf(x + y)) + float(bump12_gf(x - y)))
    assert got == pytest.approx(want, rel=1e-12)


def test_translation_symmetric(bump12_gf):
    nu = 0.7
    a = transmute.generalized_translation(nu, 0.9, bump12_gf, 1.4)
    b = transmute.generalized_translation(nu, 1.4, bump12_gf, 0.9)
    assert a == pytest.approx(b, rel=1e-10)


def test_translation_product_formula():
    # T_x^y j(x) = j(x) j(y) for the matched normalized Bessel function
    nu = 0.7
    g = quad.Grid.uniform(1e-9, 9.0, 65)
    fj = quad.GridFunction.from_callable(lambda t: specfun.normalized_j(nu, t), g)
    for (x, y) in ((0.6, 0.9), (1.2, 0.4), (2.0, 1.1)):
        got = transmute.generalized_translation(nu, y, fj, x)
        want = specfun.normalized_j(nu, x) * specfun.normalized_j(nu, y)
        assert got == pytest.approx(want, rel=1e-6)


# ---------------------------------------------------------------------------
# parameter translation and the Bessel-shift operator
# ---------------------------------------------------------------------------


def test_param_translation_descent_matches_general(bump12_gf):
    # alpha -> 0 of the general form approaches the closed-form descent
    nu, mu = 1.2, 0.4
    for x in (1.3, 1.7):
        closed = transmute.param_translation(nu, mu, 0.0, bump12_gf, x)
        general = transmute.param_translation(nu, mu, -1e-7, bump12_gf, x)
        assert closed == pytest.approx(general, rel=1e-5)


def test_param_translation_intertwines(bump12):
    r = transmute.verify_intertwining(
        TS("ParamTranslation", nu=1.2, mu=0.4, alpha=0.0), bump12,
        probe_grid=(1.3, 1.6))
    assert r["normalized"] <= 1e-5
    r = transmute.verify_intertwining(
        TS("ParamTranslation", nu=1.4, mu=0.3, alpha=0.25), bump12,
        probe_grid=(1.3, 1.6))
    assert r["normalized"] <= 1e-5


def test_lowndes_intertwines_with_shift(bump12):
    r = transmute.verify_intertwining(
        TS("Lowndes", nu=0.2, mu=1.0, lam=0.7), bump12,
        probe_grid=(2.1, 2.4))
    assert r["normalized"] <= 1e-5


def test_lowndes_lambda_zero_is_descent_kernel(bump12_gf):
    # at lam = 0 the kernel is the pure power kernel
    nu, mu = 0.2, 1.0
    x = 2.2
    got = transmute.lowndes(nu, mu, 0.0, bump12_gf, x)
    c = 2.0 ** (1.0 - (mu - nu)) / float(np.real(specfun.gamma(mu - nu)))
    want, _ = quad.integrate(
        lambda t: np.asarray(t) ** (2 * nu + 1) * (x * x - np.asarray(t) ** 2)
        ** (mu - nu - 1.0) * np.asarray(bump12_gf(t)),
        1.0, 2.0, abs_tol=1e-13)
    assert got == pytest.approx(c * x ** (-2 * mu) * want, rel=1e-9)


# ---------------------------------------------------------------------------
# composition method
# ---------------------------------------------------------------------------


def test_compose_reproduces_from_infinity_poisson():
    # S = Hankel^-1 (1/eta) FourierSin reproduces the odd-bump Poisson
    nu = 0.4
    bump = quad.BumpSpec.normalized(1.0, 2.0)
    f = bump.to_grid_function()
    s_op, p_op = transmute.compose_transmutation(
        transforms.TransformSpec("FourierSin"), transforms.TransformSpec("Hankel", nu),
        lambda e: np.asarray(e), eta_max=90.0)
    for x in (1.2, 1.6):
        got = s_op(f, x)
        want = transmute.spd_variant("P_1/2-nu", nu, f, x)
        assert got == pytest.approx(want, abs=1e-6 * max(1.0, abs(want)))


def test_compose_poisson_from_cos():
    # FourierCos -> Hankel with w = eta^(2nu+1) gives the classical Poisson
    # up to the fixed constant 2^nu Gamma(nu+1/2)/sqrt(pi)
    nu = 0.4
    bump = quad.BumpSpec.normalized(1.0, 2.0)
    f = bump.to_grid_function()
    s_op, _ = transmute.compose_transmutation(
        transforms.TransformSpec("FourierCos"), transforms.TransformSpec("Hankel", nu),
        lambda e: np.asarray(e) ** (2 * nu + 1), eta_max=90.0)
    c = 2.0 ** nu * float(np.real(specfun.gamma(nu + 0.5))) / math.sqrt(math.pi)
    for x in (1.2, 1.6):
        got = s_op(f, x)
        want = transmute.poisson_classic(nu, f, x) / c
        assert got == pytest.approx(want, abs=1e-6 * max(1.0, abs(want)))


def test_compose_isometric_weight(bump_family):
    # w = eta^(nu+1/2): the S-route is isometric L2 -> L2,nu up to the
    # fixed constant 2^nu Gamma(nu+1) sqrt(2/pi)
    nu = 0.4
    s_op, _ = transmute.compose_transmutation(
        transforms.TransformSpec("FourierCos"), transforms.TransformSpec("Hankel", nu),
        lambda e: np.asarray(e) ** (nu + 0.5), eta_max=120.0)
    c = 2.0 ** nu * float(np.real(specfun.gamma(nu + 1.0))) * math.sqrt(2.0 / math.pi)
    for bump in bump_family[:2]:
        f = bump.to_grid_function()
        xs = np.linspace(0.05, 3.0 * bump.b, 220)
        vals = np.array([s_op(f, float(x)) for x in xs])
        wnorm_sq = np.trapezoid(vals ** 2 * xs ** (2 * nu + 1), xs)
        ratio = c * math.sqrt(wnorm_sq) / f.l2_norm()
        assert ratio == pytest.approx(1.0, abs=2e-3)


def test_compose_rejects_vanishing_weight():
    with pytest.raises(DomainError):
        transmute.compose_transmutation(
            transforms.TransformSpec("FourierCos"),
            transforms.TransformSpec("Hankel", 0.4),
            lambda e: np.asarray(e) - 30.0)


# ---------------------------------------------------------------------------
# shifted-cosine representation of the composed Sonin operator
# ---------------------------------------------------------------------------


def test_sonin_shifted_cosine_representation():
    # S_nu f = (2/pi) int_0^inf cos(y eta - pi nu/2 - pi/4) eta^(nu+1/2)
    #          (Hankel_nu f)(eta) d eta  on even bumps, where
    # S_nu = I^(1/2-nu) S^(nu-1/2)
    nu = 0.75
    bump = quad.BumpSpec.normalized(1.0, 2.0)
    f = bump.to_grid_function()

    def lhs(y):
        inner = _exactfn(lambda u: transmute.spd_variant("S_nu-1/2", nu, f, u),
                         0.3, 2.6)
        return fracops.riemann_liouville("right", 0.5 - nu, inner, y)

    def rhs(y):
        def integrand(e):
            e = np.atleast_1d(np.asarray(e, dtype=float))
            h = np.array([transforms.hankel(nu, f, float(t)) for t in e])
            return np.cos(y * e - 0.5 * math.pi * nu - 0.25 * math.pi) \
                * e ** (nu + 0.5) * h
        v, _ = quad.integrate(integrand, 0.0, 120.0, abs_tol=1e-9, rel_tol=1e-8,
                              max_segments=1200)
        return (2.0 / math.pi) * v

    for y in (1.3, 1.7):
        assert lhs(y) == pytest.approx(rhs(y), abs=1e-5 * max(1.0, abs(rhs(y))))


# ---------------------------------------------------------------------------
# Copson transfer and the nonlinear field application
# ---------------------------------------------------------------------------


def test_copson_transfer():
    for (alpha, beta) in ((0.5, 1.5), (0.25, 1.0)):
        r = transmute.copson_check(alpha, beta, quad.BumpSpec.normalized(1.0, 2.0))
        assert r["residual"] <= 1e-4, (alpha, beta, r)


def test_copson_zero_input():
    bump = quad.BumpSpec(1.0, 2.0, amplitude=0.0)
    r = transmute.copson_check(0.5, 1.5, bump)
    assert r["residual"] == 0.0


def test_maxwell_einstein_exponential():
    g = lambda x, y: x * y
    r = transmute.maxwell_einstein_solution("u2", g, ((0.5, 1.5), (-0.5, 0.5)),
                                            {"b": 0.1})
    assert r["residual"] <= 1e-3


def test_maxwell_einstein_zero_coupling():
    g = lambda x, y: x * x - y * y
    r = transmute.maxwell_einstein_solution("u2", g, ((0.5, 1.5), (-0.5, 0.5)),
                                            {"b": 0.0})
    assert r["residual"] <= 1e-12
    assert np.max(np.abs(r["field"] - 1.0)) == 0.0


def test_maxwell_einstein_rational():
    g = lambda x, y: x * x - y * y
    r = transmute.maxwell_einstein_solution("u1", g, ((0.5, 1.5), (-0.5, 0.5)),
                                            {"a": 0.05, "A": 2.0})
    assert r["residual"] <= 1e-3


def test_maxwell_einstein_rejects_nonharmonic():
    g = lambda x, y: x * x + y * y
    with pytest.raises(DomainError):
        transmute.maxwell_einstein_solution("u2", g, ((0.5, 1.5), (-0.5, 0.5)),
                                            {"b": 0.1})
