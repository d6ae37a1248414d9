"""Symbol algebra: critical-line moduli, norms, duality, periodicity."""

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from tmcalc import specfun, symbols
from tmcalc.errors import DomainError

FAMILIES = ("1S0+", "1P0+", "1S-", "1P-", "2S", "2P", "SU")
NUS = (-0.5, -0.25, 0.0, 0.3, 1.0, 1.5 - 1e-3, 2.0)


def test_symbol_trivial_at_integer_reduction():
    # at nu = 0 the from-infinity Sonin-type symbol is identically 1
    m = symbols.symbol_of("1S-", 0.0)
    for u in (0.0, 0.7, 3.0):
        assert abs(m.eval(complex(0.5, u)) - 1.0) < 1e-13


def test_reciprocal_structure():
    for fam, inv in (("1S0+", "1P0+"), ("1S-", "1P-"), ("2S", "2P")):
        a = symbols.symbol_of(fam, 0.4)
        b = symbols.symbol_of(inv, 0.4)
        for s in (complex(0.5, 0.3), complex(0.3, -1.2), complex(1.4, 0.9)):
            assert abs(a.eval(s) * b.eval(s) - 1.0) < 1e-12


def test_reflection_duality():
    # m_{1P-}(s) = m_{1S0+}(1-s) and m_{1P0+}(s) = m_{1S-}(1-s)
    for nu in (0.3, -0.25, 1.0):
        a = symbols.symbol_of("1P-", nu)
        b = symbols.symbol_of("1S0+", nu).reflect()
        c = symbols.symbol_of("1P0+", nu)
        d = symbols.symbol_of("1S-", nu).reflect()
        for s in (complex(0.5, 0.3), complex(0.2, -1.0)):
            assert abs(a.eval(s) - b.eval(s)) < 1e-12
            assert abs(c.eval(s) - d.eval(s)) < 1e-12


def test_critical_line_cosh_identity():
    # |m_{1S0+}(iu+1/2)| = sqrt(cosh(pi u)/(cosh(pi u) - sin(pi nu)))
    for nu in NUS:
        m = symbols.symbol_of("1S0+", nu)
        for u in (0.0, 0.35, 1.0, 2.5, 7.0):
            got = abs(m.eval(complex(0.5, u)))
            want = math.sqrt(math.cosh(math.pi * u)
                             / (math.cosh(math.pi * u) - specfun.sinpi(nu)))
            assert got == pytest.approx(want, rel=1e-10), (nu, u)


def test_critical_line_special_value():
    got = abs(symbols.symbol_of("1S0+", -0.5).eval(complex(0.5, 0.0)))
    assert got == pytest.approx(1.0 / math.sqrt(2.0), rel=1e-12)


def test_su_unit_modulus():
    for nu in (0.3, 1.0, -0.25, 2.0):
        m = symbols.symbol_of("SU", nu)
        for u in np.linspace(0.0, 8.0, 17):
            assert abs(abs(m.eval(complex(0.5, u))) - 1.0) <= 1e-12


def test_su_equals_combination():
    # the SU closed form agrees with cos * 1S- - sin * p * 1S- at sample s
    nu = 0.3
    msu = symbols.symbol_of("SU", nu)
    m1sm = symbols.symbol_of("1S-", nu)
    m2s = symbols.symbol_of("2S", nu)
    c, s_ = specfun.cospi(0.5 * nu), specfun.sinpi(0.5 * nu)
    for s in (complex(0.5, 0.4), complex(0.7, -0.9)):
        combo = c * m1sm.eval(s) - s_ * m2s.eval(s)
        assert abs(msu.eval(s) - combo) < 1e-12


def test_integer_order_unit_modulus():
    for fam in ("1S0+", "1P0+", "1S-", "1P-", "2S", "2P"):
        for nu in (0.0, 1.0, 2.0):
            m = symbols.symbol_of(fam, nu)
            for u in np.linspace(0.05, 6.0, 20):
                assert abs(abs(m.eval(complex(0.5, u))) - 1.0) <= 1e-11, (fam, nu)


@pytest.mark.parametrize("fam", FAMILIES)
def test_diagnose_matches_norm_formula(fam):
    for nu in NUS:
        want = symbols.norm_formula(fam, nu)
        d = symbols.diagnose(symbols.symbol_of(fam, nu))
        if math.isinf(want):
            assert not d["bounded"], (fam, nu)
        else:
            assert d["norm"] == pytest.approx(want, abs=1e-6 * max(1.0, want)), \
                (fam, nu)


def test_unbounded_points():
    assert math.isinf(symbols.norm_formula("1S0+", 0.5))
    assert math.isinf(symbols.norm_formula("2P", -0.5))
    assert not symbols.diagnose(symbols.symbol_of("1S0+", 0.5))["bounded"]


def test_norm_formula_values():
    assert symbols.norm_formula("1P0+", -0.5) == pytest.approx(math.sqrt(2.0))
    assert symbols.norm_formula("2S", 0.5) == pytest.approx(math.sqrt(2.0))
    for fam in ("1S0+", "1P0+", "1S-", "1P-", "2S", "2P"):
        for nu in (0.0, 1.0, 2.0, -3.0):
            assert symbols.norm_formula(fam, nu) == 1.0


def test_hardy_symbols():
    h1 = symbols.symbol_of("Hardy_H1")
    h2 = symbols.symbol_of("Hardy_H2")
    for s in (complex(0.5, 0.8), complex(0.3, -0.4)):
        assert abs(h1.eval(s) - 1.0 / (1.0 - s)) < 1e-13
        assert abs(h2.eval(s) - 1.0 / s) < 1e-13
    # I - H1 has unit modulus on the critical line
    for u in (0.1, 0.9, 3.0):
        s = complex(0.5, u)
        assert abs(abs(1.0 - h1.eval(s)) - 1.0) < 1e-12
    assert symbols.diagnose(h1)["norm"] == pytest.approx(2.0, abs=1e-7)


def test_stieltjes_symbol():
    m = symbols.symbol_of("Stieltjes")
    s = complex(0.5, 1.1)
    assert abs(m.eval(s) - math.pi / np.sin(math.pi * s)) < 1e-13
    assert symbols.diagnose(m)["norm"] == pytest.approx(math.pi, abs=1e-8)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(["1S0+", "1S-"]),
       st.floats(-1.2, 2.2).filter(lambda v: abs(specfun.sinpi(v) - 1.0) > 1e-6))
def test_periodicity_functional_equation(fam, nu):
    r = symbols.periodicity_check(fam, nu)
    assert r["functional_eq_residual"] <= 1e-10
    assert r["norm_period_defect"] <= 1e-12


def test_unknown_family_raises():
    with pytest.raises(DomainError):
        symbols.symbol_of("nope", 0.1)
