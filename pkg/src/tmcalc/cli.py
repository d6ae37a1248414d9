"""Command-line driver: verification suites with machine-readable reports.

    tmcalc --suite symbols --format json --out report.json
    tmcalc --op-eval "BE0:1S0+:nu=1" --bump 1,2 --x 1.2,1.5
    tmcalc --kernel-export landis --lam 1.0 --W 1.0 --out kernel.csv

Reports are deterministic for a fixed seed; the process exits nonzero iff
any requested check fails. Config files are plain "key = value" lines.
"""

from __future__ import annotations

import argparse
import concurrent.futures
import json
import math
import sys
import time

import numpy as np

from . import fracops, perturbed, quad, sigmatrace, specfun, symbols, transforms, transmute
from .errors import DomainError, TmcalcError

SUITES = ("specfun", "quad", "transforms", "fracops", "transmute",
          "symbols", "perturbed", "sigmatrace")

REPORT_FIELDS = ("id", "ref", "inputs", "expected", "got", "abs_err",
                 "rel_err", "tol", "passed")


class RunConfig:
    def __init__(self, tol_scale: float = 1.0, grid_points: int = 257,
                 nu_sweep=(-0.25, 0.3, 1.0), mu_sweep=(0.4,), alpha_sweep=(0.5,),
                 seed: int = 1234, jobs: int = 1, out=None, fmt: str = "json"):
        if tol_scale <= 0:
            raise DomainError("tolerance scale must be positive")
        for name, sweep in (("nu", nu_sweep), ("mu", mu_sweep), ("alpha", alpha_sweep)):
            if len(tuple(sweep)) == 0:
                raise DomainError(f"{name} sweep must be nonempty")
        self.tol_scale = tol_scale
        self.grid_points = grid_points
        self.nu_sweep = tuple(nu_sweep)
        self.mu_sweep = tuple(mu_sweep)
        self.alpha_sweep = tuple(alpha_sweep)
        self.seed = seed
        self.jobs = jobs
        self.out = out
        self.fmt = fmt

    @staticmethod
    def from_file(path: str, **overrides) -> "RunConfig":
        kw = {}
        with open(path) as fh:
            for line in fh:
                line = line.split("#", 1)[0].strip()
                if not line:
                    continue
                if "=" not in line:
                    raise DomainError(f"bad config line: {line!r}")
                key, val = (s.strip() for s in line.split("=", 1))
                if key in ("nu_sweep", "mu_sweep", "alpha_sweep"):
                    kw[key] = tuple(float(t) for t in val.split(",") if t.strip())
                elif key in ("seed", "jobs", "grid_points"):
                    kw[key] = int(val)
                elif key == "tol_scale":
                    kw[key] = float(val)
                else:
                    raise DomainError(f"unknown config key {key!r}")
        kw.update(overrides)
        return RunConfig(**kw)


def _check(cid, ref, inputs, expected, got, tol):
    expected_f = float(expected)
    got_f = float(got)
    abs_err = abs(got_f - expected_f)
    rel = abs_err / max(abs(expected_f), 1e-300)
    passed = abs_err <= tol or rel <= tol
    return {
        "id": cid, "ref": ref, "inputs": inputs,
        "expected": expected_f, "got": got_f,
        "abs_err": abs_err, "rel_err": rel, "tol": tol,
        "passed": bool(passed),
    }


def _bound_check(cid, ref, inputs, value, bound, slack=0.0):
    passed = value <= bound + slack
    return {
        "id": cid, "ref": ref, "inputs": inputs,
        "expected": bound, "got": float(value),
        "abs_err": max(0.0, float(value) - bound),
        "rel_err": max(0.0, float(value) - bound) / max(abs(bound), 1e-300),
        "tol": slack, "passed": bool(passed),
    }


# --------------------------------------------------------------------------
# suite builders: each returns a list of (check_id, thunk)
# --------------------------------------------------------------------------


def _suite_specfun(cfg: RunConfig):
    rng = np.random.default_rng(cfg.seed)
    checks = []

    def gamma_recurrence():
        worst = 0.0
        for _ in range(200):
            z = complex(rng.uniform(0.05, 10.0), rng.uniform(-10.0, 10.0))
            lhs = specfun.gamma(z + 1.0)
            rhs = z * specfun.gamma(z)
            worst = max(worst, abs(lhs - rhs) / abs(rhs))
        return _check("specfun.gamma.recurrence", "gamma-recurrence",
                      {"samples": 200}, 0.0, worst, 1e-12 * cfg.tol_scale)

    def gamma_duplication():
        worst = 0.0
        for _ in range(100):
            z = complex(rng.uniform(0.1, 8.0), rng.uniform(-6.0, 6.0))
            lhs = specfun.gamma(2.0 * z)
            rhs = 2.0 ** (2.0 * z - 1.0) / math.sqrt(math.pi) \
                * specfun.gamma(z) * specfun.gamma(z + 0.5)
            worst = max(worst, abs(lhs - rhs) / abs(rhs))
        return _check("specfun.gamma.duplication", "gamma-duplication",
                      {"samples": 100}, 0.0, worst, 1e-11 * cfg.tol_scale)

    def gamma_half():
        return _check("specfun.gamma.half", "gamma-at-one-half", {"z": 0.5},
                      math.sqrt(math.pi), specfun.gamma(0.5).real, 1e-13)

    def bessel_halforder():
        x = math.pi
        got = specfun.bessel("J", 0.5, x)
        return _check("specfun.bessel.j_half_pi", "half-order-closed-form",
                      {"nu": 0.5, "x": x},
                      math.sqrt(2.0 / (math.pi * x)) * math.sin(x), got, 1e-12)

    def normalized_j_zero():
        return _check("specfun.normalized_j.at0", "normalized-at-zero",
                      {"nu": 0.7}, 1.0, specfun.normalized_j(0.7, 0.0), 0.0)

    def legendre_unit():
        return _check("specfun.legendre.p_at_1", "first-kind-at-unity",
                      {"nu": 0.77}, 1.0, specfun.legendre_p(0.77, 0.0, 1.0), 1e-13)

    def legendre_q_closed():
        z = 3.0
        return _check("specfun.legendre.q0_log", "second-kind-log-form",
                      {"z": z}, 0.5 * math.log(2.0),
                      specfun.legendre_q(0.0, 0.0, z), 1e-12)

    def hyp_binomial():
        got = specfun.gauss_2f1(-3.0, 2.0, 2.0, -0.5).real
        return _check("specfun.2f1.binomial", "terminating-series",
                      {"n": 3, "x": 0.5}, 3.375, got, 1e-13)

    def kummer_exp():
        got = specfun.kummer_phi(2.0, 2.0, 1.0).real
        return _check("specfun.kummer.exp", "coincident-parameters",
                      {"z": 1.0}, math.e, got, 1e-13)

    checks += [
        ("specfun.gamma.recurrence", gamma_recurrence),
        ("specfun.gamma.duplication", gamma_duplication),
        ("specfun.gamma.half", gamma_half),
        ("specfun.bessel.j_half_pi", bessel_halforder),
        ("specfun.normalized_j.at0", normalized_j_zero),
        ("specfun.legendre.p_at_1", legendre_unit),
        ("specfun.legendre.q0_log", legendre_q_closed),
        ("specfun.2f1.binomial", hyp_binomial),
        ("specfun.kummer.exp", kummer_exp),
    ]
    return checks


def _suite_quad(cfg: RunConfig):
    checks = []

    def inv_sqrt():
        v, _ = quad.integrate(lambda t: 1.0 / np.sqrt(t), 0.0, 1.0,
                              singularity=(-0.5, 0.0))
        return _check("quad.singular.inv_sqrt", "endpoint-exponent",
                      {}, 2.0, v, 1e-11)

    def beta_kernel():
        nu, x = 0.3, 1.5
        v, _ = quad.integrate(lambda t: (x * x - t * t) ** (nu - 0.5), 0.0, x,
                              singularity=(0.0, nu - 0.5))
        exact = x ** (2 * nu) * math.sqrt(math.pi) / 2.0 * float(
            np.real(specfun.gamma(nu + 0.5) / specfun.gamma(nu + 1.0)))
        return _check("quad.singular.beta", "beta-kernel", {"nu": nu, "x": x},
                      exact, v, 1e-10)

    def semiinf():
        v, _ = quad.integrate_semiinfinite(lambda t: np.exp(-t), 0.0, "exponential")
        return _check("quad.semiinfinite.exp", "exponential-tail", {}, 1.0, v, 1e-10)

    def pv_odd():
        v = quad.principal_value(lambda t: 1.0 / t, 0.0, -1.0, 1.0)
        return _check("quad.pv.odd", "odd-symmetry", {}, 0.0, v, 1e-10)

    def diff2():
        v, _ = quad.differentiate(lambda t: t ** 3, 2.0, 2)
        return _check("quad.diff.cubic", "second-derivative", {}, 12.0, v, 1e-7)

    checks += [(c[0], c[1]) for c in [
        ("quad.singular.inv_sqrt", inv_sqrt),
        ("quad.singular.beta", beta_kernel),
        ("quad.semiinfinite.exp", semiinf),
        ("quad.pv.odd", pv_odd),
        ("quad.diff.cubic", diff2),
    ]]
    return checks


def _suite_transforms(cfg: RunConfig):
    checks = []
    g = quad.Grid.uniform(1e-6, 40.0, cfg.grid_points)
    fexp = quad.GridFunction.from_callable(lambda t: np.exp(-t), g)
    bump = quad.BumpSpec(1.0, 2.0).to_grid_function()

    def cos_lorentz():
        got = transforms.fourier_cos(fexp, 1.0)
        return _check("transforms.cos.exp", "lorentzian-image",
                      {"eta": 1.0}, 0.5, got, 1e-9)

    def sin_lorentz():
        got = transforms.fourier_sin(fexp, 1.0)
        return _check("transforms.sin.exp", "lorentzian-image",
                      {"eta": 1.0}, 0.5, got, 1e-9)

    def hankel_parseval():
        nu = 1.0
        lhs_sq, _ = quad.integrate(
            lambda e: np.array([transforms.hankel(nu, bump, float(t)) for t in np.atleast_1d(e)]) ** 2
            * np.asarray(e) ** (2 * nu + 1),
            0.0, 40.0, abs_tol=1e-11, rel_tol=1e-9)
        rhs_sq, _ = quad.integrate(lambda t: np.asarray(bump(t)) ** 2 * np.asarray(t) ** (2 * nu + 1),
                                   1.0, 2.0, abs_tol=1e-13)
        c = 2.0 ** nu * float(np.real(specfun.gamma(nu + 1.0)))
        return _check("transforms.hankel.parseval", "weighted-parseval",
                      {"nu": nu}, c ** 2 * rhs_sq, lhs_sq, 1e-6 * c ** 2 * rhs_sq)

    def mellin_gamma():
        got = transforms.mellin(fexp, 2.0)
        return _check("transforms.mellin.exp", "mellin-of-exponential",
                      {"s": 2.0}, 1.0, float(np.real(got)), 1e-9)

    def stieltjes_log():
        gg = quad.Grid.uniform(0.9, 2.1, 65)
        ind = quad.GridFunction.from_callable(
            lambda t: np.where((np.asarray(t) >= 1.0) & (np.asarray(t) <= 2.0), 1.0, 0.0),
            gg, support=(1.0, 2.0))
        got = transforms.stieltjes(ind, 1.0)
        return _check("transforms.stieltjes.log", "elementary-log",
                      {"x": 1.0}, math.log(1.5), got, 1e-9)

    checks += [
        ("transforms.cos.exp", cos_lorentz),
        ("transforms.sin.exp", sin_lorentz),
        ("transforms.hankel.parseval", hankel_parseval),
        ("transforms.mellin.exp", mellin_gamma),
        ("transforms.stieltjes.log", stieltjes_log),
    ]
    return checks


def _suite_fracops(cfg: RunConfig):
    checks = []
    g = quad.Grid.uniform(0.05, 40.0, cfg.grid_points)
    fexp = quad.GridFunction.from_callable(lambda t: np.exp(-t), g)
    bump = quad.BumpSpec(1.0, 2.0).to_grid_function()

    def rl_exp():
        got = fracops.riemann_liouville("right", 0.5, fexp, 1.0)
        return _check("fracops.rl.exp", "exponential-eigenvalue",
                      {"alpha": 0.5, "x": 1.0}, math.exp(-1.0), got, 1e-9)

    def rl_semigroup():
        grid = quad.Grid.uniform(0.9, 2.1, 160)
        inner = quad.GridFunction.from_callable(
            lambda t: np.array([fracops.riemann_liouville("right", 0.5, bump, float(u))
                                for u in np.atleast_1d(t)]), grid)
        worst = 0.0
        for x in (1.2, 1.5, 1.8):
            two = fracops.riemann_liouville("right", 0.5, inner, x)
            one = fracops.riemann_liouville("right", 1.0, bump, x)
            worst = max(worst, abs(two - one))
        return _check("fracops.rl.semigroup", "order-additivity",
                      {"alpha": 0.5, "beta": 0.5}, 0.0, worst, 1e-7)

    def ek_const():
        gg = quad.Grid.uniform(1e-6, 3.0, 65)
        one = quad.GridFunction.from_callable(
            lambda t: np.ones_like(np.asarray(t, dtype=float)), gg)
        got = fracops.erdelyi_kober("left", 0.5, 0.25, one, 2.0)
        exact = float(np.real(specfun.gamma(1.25) / specfun.gamma(1.75)))
        return _check("fracops.ek.constant", "constant-mapping",
                      {"alpha": 0.5, "y": 0.25}, exact, got, 1e-9)

    def ie_exp():
        got = fracops.i_e(0.5, fexp, 1.0)
        return _check("fracops.ie.exp", "exponential-eigenvalue",
                      {"mu": 0.5}, math.exp(-1.0) * 2 ** -0.5, got, 1e-9)

    def bessel_p1():
        v1 = fracops.frac_bessel(0.0, 0.5, bump, 1.3)
        v2 = fracops.riemann_liouville("right", 1.0, bump, 1.3)
        return _check("fracops.fbessel.p1", "order-zero-reduction",
                      {"alpha": 0.5, "x": 1.3}, v2, v1, 1e-9)

    checks += [
        ("fracops.rl.exp", rl_exp),
        ("fracops.rl.semigroup", rl_semigroup),
        ("fracops.ek.constant", ek_const),
        ("fracops.ie.exp", ie_exp),
        ("fracops.fbessel.p1", bessel_p1),
    ]
    return checks


def _suite_transmute(cfg: RunConfig):
    checks = []
    gcos = quad.Grid.uniform(1e-9, 4.0, 65)
    fcos = quad.GridFunction.from_callable(np.cos, gcos)
    bump = quad.BumpSpec(1.0, 2.0)
    f = bump.to_grid_function()

    def poisson_cos():
        worst = 0.0
        for nu in cfg.nu_sweep:
            if nu <= -0.5:
                continue
            for x in (0.5, 1.0, 3.0):
                got = transmute.poisson_classic(nu, fcos, x)
                exact = math.sqrt(math.pi) * float(np.real(
                    specfun.gamma(nu + 0.5) / specfun.gamma(nu + 1.0))) / 2.0 \
                    * x ** (-nu) * specfun.bessel("J", nu, x)
                worst = max(worst, abs(got - exact) / abs(exact))
        return _check("transmute.poisson.cos", "bessel-image",
                      {"nu_sweep": cfg.nu_sweep}, 0.0, worst, 1e-7)

    def be0_identity():
        got = transmute.be0("1S0+", 0.0, f, 1.3)
        return _check("transmute.be0.identity", "order-zero-is-identity",
                      {"x": 1.3}, float(f(1.3)), got, 1e-10)

    def hardy_unitary():
        r = transmute.verify_inverse_pair(
            transmute.TransmutationSpec("Hardy", kind="U1"),
            transmute.TransmutationSpec("Hardy", kind="U2"), f,
            profile_range=(0.02, 300.0), n_profile=400)
        return _check("transmute.hardy.inverse", "hardy-pair",
                      {}, 0.0, r["sup_err"], 1e-6)

    def translation_product():
        nu = 0.7
        gj = quad.Grid.uniform(1e-9, 8.0, 65)
        fj = quad.GridFunction.from_callable(
            lambda t: specfun.normalized_j(nu, t), gj)
        worst = 0.0
        for (x, y) in ((0.6, 0.9), (1.2, 0.4)):
            got = transmute.generalized_translation(nu, y, fj, x)
            exact = specfun.normalized_j(nu, x) * specfun.normalized_j(nu, y)
            worst = max(worst, abs(got - exact) / abs(exact))
        return _check("transmute.translation.product", "eigenfunction-product",
                      {"nu": nu}, 0.0, worst, 1e-6)

    def sonin_intertwine():
        r = transmute.verify_intertwining(
            transmute.TransmutationSpec("SoninClassic", nu=0.25), bump,
            probe_grid=(1.2, 1.5, 1.8))
        return _check("transmute.sonin.intertwine", "generator-swap",
                      {"nu": 0.25}, 0.0, r["normalized"], 1e-5)

    checks += [
        ("transmute.poisson.cos", poisson_cos),
        ("transmute.be0.identity", be0_identity),
        ("transmute.hardy.inverse", hardy_unitary),
        ("transmute.translation.product", translation_product),
        ("transmute.sonin.intertwine", sonin_intertwine),
    ]
    return checks


def _suite_symbols(cfg: RunConfig):
    checks = []

    def critline(nu, u):
        def run():
            v = abs(symbols.symbol_of("1S0+", nu).eval(complex(0.5, u)))
            ref = math.sqrt(math.cosh(math.pi * u)
                            / (math.cosh(math.pi * u) - specfun.sinpi(nu)))
            return _check(f"symbols.critline.nu{nu}_u{u}", "cosh-ratio-modulus",
                          {"nu": nu, "u": u}, ref, v, 1e-10)
        return run

    for nu in (-0.5, -0.25, 0.3, 1.0):
        for u in (0.0, 0.5, 2.0):
            checks.append((f"symbols.critline.nu{nu}_u{u}", critline(nu, u)))

    def unitary_su(nu):
        def run():
            worst = 0.0
            for u in np.linspace(0.0, 6.0, 13):
                worst = max(worst, abs(abs(
                    symbols.symbol_of("SU", nu).eval(complex(0.5, u))) - 1.0))
            return _check(f"symbols.su.unitary.nu{nu}", "unit-modulus",
                          {"nu": nu}, 0.0, worst, 1e-10)
        return run

    for nu in (0.3, 1.0):
        checks.append((f"symbols.su.unitary.nu{nu}", unitary_su(nu)))

    def norms(fam, nu):
        def run():
            nf = symbols.norm_formula(fam, nu)
            d = symbols.diagnose(symbols.symbol_of(fam, nu))
            if math.isinf(nf):
                return _check(f"symbols.norm.{fam}.nu{nu}", "unbounded-detected",
                              {"family": fam, "nu": nu}, 1.0,
                              1.0 if not d["bounded"] else 0.0, 0.0)
            return _check(f"symbols.norm.{fam}.nu{nu}", "norm-vs-formula",
                          {"family": fam, "nu": nu}, nf, d["norm"], 1e-6 * max(1, nf))
        return run

    for fam in ("1S0+", "1P0+", "2S", "2P"):
        for nu in (-0.5, 0.3, 1.0):
            checks.append((f"symbols.norm.{fam}.nu{nu}", norms(fam, nu)))

    def periodicity():
        r = symbols.periodicity_check("1S0+", 0.3)
        return _check("symbols.periodicity", "functional-equation", {"nu": 0.3},
                      0.0, r["functional_eq_residual"], 1e-10)

    checks.append(("symbols.periodicity", periodicity))
    return checks


def _suite_perturbed(cfg: RunConfig):
    checks = []

    def landis_closed(lam):
        def run():
            tbl = perturbed.solve_landis_kernel(
                lambda s: lam ** 2 * np.ones_like(np.asarray(s, dtype=float)), 1.0)
            w, v = np.meshgrid(tbl.w[1:], tbl.v[1:], indexing="ij")
            mask = v <= w
            i1 = np.array([specfun.bessel("I", 1.0, t) for t in
                           (2 * lam * np.sqrt(w * v))[mask]])
            closed = (lam / 3.0) * np.sqrt(w / v)[mask] * i1
            rel = np.max(np.abs(tbl.values[1:, 1:][mask] - closed) / np.abs(closed))
            return _check(f"perturbed.landis.lam{lam}", "constant-potential-identity",
                          {"lam": lam}, 0.0, float(rel), 1e-8)
        return run

    for lam in (0.5, 1.0):
        checks.append((f"perturbed.landis.lam{lam}", landis_closed(lam)))

    def riemann_consistency():
        args = (0.5, 4.0, 0.5, 2.0, 1.0)  # nu, s, tau, xi, eta
        a = perturbed.riemann_function(args[0], args[1], args[2], args[3], args[4])
        b = perturbed.riemann_function_hypergeometric(*args)
        return _check("perturbed.riemann.twopath", "legendre-vs-hypergeometric",
                      {"args": args}, float(np.asarray(b)), float(np.asarray(a)), 1e-8)

    checks.append(("perturbed.riemann.twopath", riemann_consistency))

    def bound_arithmetic():
        got = perturbed.kernel_bound("power_matched", 2.0, 1.0, 2.0, beta=1.0)
        return _check("perturbed.bound.matched", "elementary-bound-value",
                      {"beta": 1, "x": 1, "t": 2}, 1.25 * math.exp(0.3125), got, 1e-12)

    checks.append(("perturbed.bound.matched", bound_arithmetic))
    return checks


def _suite_sigmatrace(cfg: RunConfig):
    checks = []

    def roundtrip():
        psi = sigmatrace.TraceFunction(3, 6, {(0, 1): 1.0, (2, 3): 0.25, (5, 7): -0.03})
        u = sigmatrace.singular_harmonic_from_trace(psi)
        back = sigmatrace.sigma_trace(u)
        worst = max(abs(back.coeffs.get(k, 0.0) - v) for k, v in psi.coeffs.items())
        return _check("sigmatrace.roundtrip", "trace-of-singular-harmonic",
                      {}, 0.0, worst, 1e-12)

    def particular():
        f = sigmatrace.HarmonicExpansion(3, 2).with_term(
            0, 1, lambda r: np.ones_like(np.asarray(r, dtype=float)))
        v = sigmatrace.particular_solution(f, 1.0)
        r = 0.55
        got = float(np.ravel(v.terms[(0, 1)](r))[0])
        return _check("sigmatrace.particular", "radial-closed-form",
                      {"r": r}, (r * r - 1.0) / 6.0, got, 1e-9)

    def gram():
        basis = sigmatrace.SphereBasis(3, 8)
        G = basis.gram_matrix(8)
        worst = float(np.max(np.abs(G - np.eye(G.shape[0]))))
        return _check("sigmatrace.gram", "orthonormality", {"K": 8}, 0.0, worst, 1e-8)

    checks += [
        ("sigmatrace.roundtrip", roundtrip),
        ("sigmatrace.particular", particular),
        ("sigmatrace.gram", gram),
    ]
    return checks


_SUITE_BUILDERS = {
    "specfun": _suite_specfun,
    "quad": _suite_quad,
    "transforms": _suite_transforms,
    "fracops": _suite_fracops,
    "transmute": _suite_transmute,
    "symbols": _suite_symbols,
    "perturbed": _suite_perturbed,
    "sigmatrace": _suite_sigmatrace,
}


def run_suite(name: str, cfg: RunConfig) -> dict:
    """Run one suite (or 'all'); returns the report dictionary."""
    if name == "all":
        names = list(SUITES)
    elif name in _SUITE_BUILDERS:
        names = [name]
    else:
        raise DomainError(f"unknown suite {name!r}")
    checks = []
    for nm in names:
        checks.extend(_SUITE_BUILDERS[nm](cfg))
    t0 = time.time()
    results = {}

    def run_one(item):
        cid, thunk = item
        try:
            return cid, thunk()
        except TmcalcError as exc:
            return cid, {"id": cid, "ref": "error", "inputs": {},
                         "expected": 0.0, "got": math.nan,
                         "abs_err": math.inf, "rel_err": math.inf,
                         "tol": 0.0, "passed": False, "error": str(exc)}

    if cfg.jobs > 1:
        with concurrent.futures.ThreadPoolExecutor(max_workers=cfg.jobs) as ex:
            for cid, rec in ex.map(run_one, checks):
                results[cid] = rec
    else:
        for item in checks:
            cid, rec = run_one(item)
            results[cid] = rec
    ordered = [results[cid] for cid, _ in checks]
    return {
        "suite": name,
        "seed": cfg.seed,
        "checks": ordered,
        "n_checks": len(ordered),
        "n_failed": sum(0 if r["passed"] else 1 for r in ordered),
        "wall_time_s": round(time.time() - t0, 3),
    }


def _emit(report: dict, fmt: str, out) -> None:
    if fmt == "json":
        text = json.dumps(report, indent=1, sort_keys=True)
    elif fmt == "csv":
        lines = [",".join(REPORT_FIELDS)]
        for rec in report["checks"]:
            vals = []
            for field in REPORT_FIELDS:
                v = rec.get(field, "")
                if isinstance(v, dict):
                    v = ";".join(f"{k}={v[k]}" for k in sorted(v))
                vals.append(str(v))
            lines.append(",".join(vals))
        text = "\n".join(lines) + "\n"
    else:
        raise DomainError(f"unknown format {fmt!r}")
    if out:
        with open(out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text + ("\n" if not text.endswith("\n") else ""))


def _parse_bump(text: str) -> quad.BumpSpec:
    parts = [float(t) for t in text.split(",")]
    if len(parts) == 2:
        return quad.BumpSpec(parts[0], parts[1])
    return quad.BumpSpec(parts[0], parts[1], parts[2])


def _parse_opspec(text: str) -> transmute.TransmutationSpec:
    """family[:kind][:key=val,...] e.g. 'BE0:1S0+:nu=1' or 'PoissonClassic:nu=0.5'."""
    bits = text.split(":")
    family = bits[0]
    kind = ""
    params = {}
    for bit in bits[1:]:
        if "=" in bit:
            for pair in bit.split(","):
                k, v = pair.split("=")
                params[k.strip()] = float(v)
        else:
            kind = bit
    return transmute.TransmutationSpec(family, kind=kind, **params)


def op_eval(spec_text: str, bump_text: str, xs) -> list:
    spec = _parse_opspec(spec_text)
    f = _parse_bump(bump_text).to_grid_function()
    return [{"x": float(x), "value": transmute.apply(spec, f, float(x))} for x in xs]


def kernel_export(kind: str, out_path: str, lam: float = 1.0, alpha: float = 1.0,
                  W: float = 1.0) -> None:
    if kind == "landis":
        tbl = perturbed.solve_landis_kernel(
            lambda s: lam ** 2 * np.ones_like(np.asarray(s, dtype=float)), W)
        bound = lambda w, v: (lam / 3.0) * math.sqrt(w / max(v, 1e-300)) \
            * specfun.bessel("I", 1.0, 2.0 * lam * math.sqrt(w * v)) if w * v > 0 else 0.0
        tbl.to_csv(out_path, bound_fn=bound)
    elif kind == "bessel":
        pot = perturbed.Potential(q=lambda s: np.asarray(s, dtype=float) ** -2.0,
                                  majorant_p=lambda s: np.asarray(s, dtype=float) ** -2.0)
        tbl = perturbed.solve_perturbed_kernel(alpha, pot, W)
        with open(out_path, "w", newline="") as fh:
            fh.write("xi,eta,u\n")
            for i, xv in enumerate(tbl.xi):
                for j, ev in enumerate(tbl.eta):
                    fh.write(f"{xv:.12g},{ev:.12g},{tbl.values[i, j]:.12g}\n")
    else:
        raise DomainError("kernel kind must be 'landis' or 'bessel'")


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(prog="tmcalc", description=__doc__,
                                 formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--suite", choices=SUITES + ("all",), default=None)
    ap.add_argument("--config", default=None)
    ap.add_argument("--format", dest="fmt", choices=("json", "csv"), default="json")
    ap.add_argument("--seed", type=int, default=None)
    ap.add_argument("--out", default=None)
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("--op-eval", default=None, metavar="SPEC",
                    help="evaluate an operator spec like 'BE0:1S0+:nu=1'")
    ap.add_argument("--bump", default="1,2", help="bump support 'a,b[,amp]'")
    ap.add_argument("--x", default="1.5", help="comma-separated sample points")
    ap.add_argument("--kernel-export", default=None, choices=("landis", "bessel"))
    ap.add_argument("--lam", type=float, default=1.0)
    ap.add_argument("--alpha", type=float, default=1.0)
    ap.add_argument("--W", type=float, default=1.0)
    args = ap.parse_args(argv)

    try:
        if args.op_eval:
            rows = op_eval(args.op_eval, args.bump,
                           [float(t) for t in args.x.split(",")])
            sys.stdout.write(json.dumps(rows, indent=1) + "\n")
            return 0
        if args.kernel_export:
            if not args.out:
                raise DomainError("--kernel-export needs --out PATH")
            kernel_export(args.kernel_export, args.out, lam=args.lam,
                          alpha=args.alpha, W=args.W)
            return 0
        overrides = {}
        if args.seed is not None:
            overrides["seed"] = args.seed
        if args.jobs:
            overrides["jobs"] = args.jobs
        cfg = RunConfig.from_file(args.config, **overrides) if args.config \
            else RunConfig(**overrides)
        report = run_suite(args.suite or "all", cfg)
        _emit(report, args.fmt, args.out)
        return 0 if report["n_failed"] == 0 else 1
    except TmcalcError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
