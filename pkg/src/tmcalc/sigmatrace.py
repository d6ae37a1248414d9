"""Sigma-traces and the singular Poisson solver on the unit ball (n = 2, 3).

Everything runs through spherical-harmonic expansions: the sigma-trace of
an expansion is the coefficient-wise limit of r^(n+k-2) f_kl(r) (with the
1/log r variant in the plane), the singular harmonic with a prescribed
trace is sum r^(2-n-k) psi_kl Y_kl, and the Poisson problem splits into a
radial particular solution, a harmonic extension matching the boundary
data, and that singular part.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from . import quad
from .errors import DomainError, NonconvergenceError

__all__ = [
    "SphereBasis",
    "HarmonicExpansion",
    "TraceFunction",
    "SigmaProblem",
    "sigma_trace",
    "singular_harmonic_from_trace",
    "particular_solution",
    "dirichlet_ball",
    "solve_poisson_sigma",
    "classify_singularity",
    "harmonic_count",
    "smooth_cutoff",
]


def harmonic_count(n: int, k: int) -> int:
    """Dimension of the degree-k spherical-harmonic space on S^(n-1)."""
    if n == 2:
        return 1 if k == 0 else 2
    if n == 3:
        return 2 * k + 1
    raise DomainError("only n in {2, 3} supported")


def _assoc_legendre_norm(k: int, m: int, x: np.ndarray) -> np.ndarray:
    """Orthonormalized associated Legendre bar-P_k^m(x), stable upward."""
    x = np.asarray(x, dtype=float)
    somx2 = np.sqrt(np.maximum(1.0 - x * x, 0.0))
    # bar-P_m^m
    pmm = np.full_like(x, math.sqrt(1.0 / (4.0 * math.pi)))
    for i in range(1, m + 1):
        pmm = -pmm * math.sqrt((2.0 * i + 1.0) / (2.0 * i)) * somx2
    if k == m:
        return pmm
    pm1 = x * math.sqrt(2.0 * m + 3.0) * pmm
    if k == m + 1:
        return pm1
    for ell in range(m + 2, k + 1):
        a = math.sqrt((4.0 * ell * ell - 1.0) / (ell * ell - m * m))
        b = math.sqrt(((ell - 1.0) ** 2 - m * m) / (4.0 * (ell - 1.0) ** 2 - 1.0))
        pmm, pm1 = pm1, a * (x * pm1 - b * pmm)
    return pm1


class SphereBasis:
    """Real orthonormal spherical harmonics up to degree K, with quadrature.

    n = 3: Y_{k,l} indexed l = 1..2k+1 (l=1 is the zonal m=0 harmonic, then
    cosine/sine pairs); n = 2: the Fourier basis on the circle.
    """

    def __init__(self, n: int, K: int):
        if n not in (2, 3):
            raise DomainError("only n in {2, 3} supported")
        self.n = n
        self.K = K
        if n == 3:
            n_theta = 2 * K + 6
            n_phi = 4 * K + 8
            gl_x, gl_w = np.polynomial.legendre.leggauss(n_theta)
            phi = 2.0 * math.pi * np.arange(n_phi) / n_phi
            ct, ph = np.meshgrid(gl_x, phi, indexing="ij")
            st = np.sqrt(1.0 - ct ** 2)
            self.quad_points = np.stack(
                [st * np.cos(ph), st * np.sin(ph), ct * np.ones_like(ph)], axis=-1
            ).reshape(-1, 3)
            w = np.repeat(gl_w[:, None], n_phi, axis=1) * (2.0 * math.pi / n_phi)
            self.quad_weights = w.reshape(-1)
        else:
            n_phi = max(4 * K + 8, 16)
            phi = 2.0 * math.pi * np.arange(n_phi) / n_phi
            self.quad_points = np.stack([np.cos(phi), np.sin(phi)], axis=-1)
            self.quad_weights = np.full(n_phi, 2.0 * math.pi / n_phi)

    def eval(self, k: int, l: int, points: np.ndarray) -> np.ndarray:
        """Y_{k,l} at unit vectors (rows of points)."""
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        if self.n == 2:
            phi = np.arctan2(pts[:, 1], pts[:, 0])
            if k == 0:
                return np.full(pts.shape[0], 1.0 / math.sqrt(2.0 * math.pi))
            if l == 1:
                return np.cos(k * phi) / math.sqrt(math.pi)
            if l == 2:
                return np.sin(k * phi) / math.sqrt(math.pi)
            raise DomainError("n=2 has l in {1, 2}")
        ct = np.clip(pts[:, 2], -1.0, 1.0)
        phi = np.arctan2(pts[:, 1], pts[:, 0])
        if l == 1:
            m = 0
            return _assoc_legendre_norm(k, 0, ct)
        j = l - 2
        m = j // 2 + 1
        if m > k:
            raise DomainError(f"l={l} out of range for degree k={k}")
        base = _assoc_legendre_norm(k, m, ct) * math.sqrt(2.0)
        return base * (np.cos(m * phi) if j % 2 == 0 else np.sin(m * phi))

    def expand(self, fn_on_sphere, K: int | None = None) -> dict:
        """Coefficients c_{k,l} = int fn Y_{k,l} for k <= K."""
        K = self.K if K is None else K
        out = {}
        vals = np.asarray(fn_on_sphere(self.quad_points), dtype=float)
        for k in range(K + 1):
            for l in range(1, harmonic_count(self.n, k) + 1):
                y = self.eval(k, l, self.quad_points)
                out[(k, l)] = float(np.sum(self.quad_weights * vals * y))
        return out

    def gram_matrix(self, K: int | None = None) -> np.ndarray:
        K = self.K if K is None else K
        ys = []
        for k in range(K + 1):
            for l in range(1, harmonic_count(self.n, k) + 1):
                ys.append(self.eval(k, l, self.quad_points))
        ys = np.asarray(ys)
        return (ys * self.quad_weights) @ ys.T


@dataclass
class RadialTerm:
    """One radial coefficient: a callable plus optional closed-form tag."""

    fn: callable
    tag: str = "sampled"

    def __call__(self, r):
        return self.fn(np.asarray(r, dtype=float))


@dataclass
class HarmonicExpansion:
    """Coefficients f_{k,l}(r) over spherical harmonics up to degree K."""

    n: int
    K: int
    terms: dict = field(default_factory=dict)  # (k, l) -> RadialTerm
    log_term: callable | None = None  # n=2 only: coefficient of Y_0 * log r

    def with_term(self, k: int, l: int, fn, tag: str = "sampled"):
        self.terms[(k, l)] = RadialTerm(fn, tag)
        return self

    def radial(self, k: int, l: int):
        term = self.terms.get((k, l))
        return term

    def eval(self, points: np.ndarray, basis: SphereBasis) -> np.ndarray:
        """Evaluate at Cartesian points (rows), away from the origin."""
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        r = np.linalg.norm(pts, axis=1)
        if np.any(r == 0.0):
            raise DomainError("evaluation at the origin is undefined")
        unit = pts / r[:, None]
        out = np.zeros(pts.shape[0])
        for (k, l), term in self.terms.items():
            out += np.asarray(term(r), dtype=float) * basis.eval(k, l, unit)
        if self.log_term is not None:
            out += np.asarray(self.log_term(r), dtype=float) * np.log(r) \
                * basis.eval(0, 1, unit)
        return out

    def to_json(self) -> str:
        payload = {
            "n": self.n, "K": self.K,
            "terms": [
                {"k": k, "l": l, "tag": t.tag,
                 "samples_r": list(np.geomspace(1e-3, 1.0, 17)),
                 "samples_v": [float(v) for v in t(np.geomspace(1e-3, 1.0, 17))]}
                for (k, l), t in sorted(self.terms.items())
            ],
            "has_log_term": self.log_term is not None,
        }
        return json.dumps(payload, indent=1)


@dataclass
class TraceFunction:
    """Trace coefficients psi_{k,l} up to degree K."""

    n: int
    K: int
    coeffs: dict = field(default_factory=dict)

    def get(self, k: int, l: int) -> float:
        return float(self.coeffs.get((k, l), 0.0))

    def norm_h(self, h: float) -> float:
        total = 0.0
        for (k, _), c in self.coeffs.items():
            total += c * c * h ** (-2 * k)
        return math.sqrt(total)

    def decay_ok(self, h: float, c: float | None = None) -> bool:
        """|psi_k| <= C h^k for the stored degrees."""
        mags = {}
        for (k, _), v in self.coeffs.items():
            mags[k] = max(mags.get(k, 0.0), abs(v))
        if not mags:
            return True
        if c is None:
            c = max(v / h ** k for k, v in mags.items() if v > 0) if any(
                v > 0 for v in mags.values()) else 1.0
        return all(v <= c * h ** k * (1 + 1e-12) for k, v in mags.items())


@dataclass
class SigmaProblem:
    n: int
    f: HarmonicExpansion          # right-hand side
    g: dict                        # boundary coefficients {(k,l): value}
    psi: TraceFunction
    r_outer: float = 1.0
    r_cut: float = 0.25            # cutoff scale R0 (chi = 1 on [0, R0])


def _richardson_limit(fn, r0: float = 0.25, levels: int = 9) -> float:
    """lim_{r->0} fn(r) over r_j = r0 2^-j, eliminating integer powers."""
    vals = [float(fn(r0 * 0.5 ** j)) for j in range(levels)]
    tab = [vals]
    for p in range(1, levels):
        prev = tab[-1]
        fac = 2.0 ** p
        tab.append([(fac * prev[i + 1] - prev[i]) / (fac - 1.0)
                    for i in range(len(prev) - 1)])
    best, second = tab[-1][0], tab[-2][0]
    scale = max(1.0, abs(best))
    if abs(best - second) > 1e-6 * scale:
        raise NonconvergenceError(
            f"radial limit did not settle ({best:.6g} vs {second:.6g})")
    return best


def _log_limit(fn, r0: float = 0.25, levels: int = 10) -> float:
    """lim fn(r)/log r via polynomial extrapolation in 1/log r."""
    xs, ys = [], []
    for j in range(levels):
        r = r0 * 0.5 ** (2 * j)
        xs.append(1.0 / math.log(r))
        ys.append(float(fn(r)) / math.log(r))
    # Neville to x -> 0
    tab = list(ys)
    for m in range(1, len(xs)):
        for i in range(len(xs) - m):
            tab[i] = (tab[i] * xs[i + m] - tab[i + 1] * xs[i]) / (xs[i + m] - xs[i])
    return tab[0]


def sigma_trace(u: HarmonicExpansion, n: int | None = None,
                r0: float = 0.25) -> TraceFunction:
    """Coefficient-wise trace psi_kl = lim r^(n+k-2) f_kl(r).

    n = 2 uses lim f_0(r)/log r for the zonal term and lim r^k f_k for the
    rest. Raises when the Richardson table oscillates instead of settling.
    """
    n = u.n if n is None else n
    out = TraceFunction(n, u.K)
    for (k, l), term in u.terms.items():
        if n == 3:
            val = _richardson_limit(lambda r: r ** (n + k - 2) * float(term(r)), r0)
        else:
            if k == 0:
                val = _log_limit(lambda r: float(term(r)), r0)
            else:
                val = _richardson_limit(lambda r: r ** k * float(term(r)), r0)
        if abs(val) > 1e-13:
            out.coeffs[(k, l)] = val
    if n == 2 and u.log_term is not None:
        val = _richardson_limit(lambda r: float(u.log_term(r)), r0)
        out.coeffs[(0, 1)] = out.coeffs.get((0, 1), 0.0) + val
    return out


def singular_harmonic_from_trace(psi: TraceFunction, n: int | None = None) -> HarmonicExpansion:
    """u = sum r^(2-n-k) psi_kl Y_kl (n=3); psi_0 log r + sum r^-k ... (n=2)."""
    n = psi.n if n is None else n
    out = HarmonicExpansion(n, psi.K)
    for (k, l), c in psi.coeffs.items():
        if n == 3:
            out.with_term(k, l, _power_radial(c, 2 - n - k), tag=f"c*r^{2 - n - k}")
        else:
            if k == 0:
                out.log_term = _power_radial(c, 0)
            else:
                out.with_term(k, l, _power_radial(c, -k), tag=f"c*r^{-k}")
    return out


def _power_radial(c: float, p: int):
    def fn(r):
        r = np.asarray(r, dtype=float)
        return c * r ** p
    return fn


def particular_solution(f: HarmonicExpansion, r_outer: float,
                        inner_exponent: dict | None = None,
                        abs_tol: float = 1e-12) -> HarmonicExpansion:
    """Radial particular solution of Delta v = f with zero sigma-trace.

    v_kl(r) = -r^k int_r^R t^(1-2k-n) int_0^t tau^(n+k-1) f_kl(tau) dtau dt,
    coefficient by coefficient. inner_exponent optionally declares the
    power behavior of f_kl at 0 (for the singular inner quadrature).
    """
    n = f.n
    out = HarmonicExpansion(n, f.K)
    for (k, l), term in f.terms.items():
        exp0 = 0.0 if inner_exponent is None else float(inner_exponent.get((k, l), 0.0))
        if n + k - 1 + exp0 <= -1.0:
            raise DomainError("inner integral diverges for this coefficient")

        def make(term=term, k=k, exp0=exp0):
            def inner(t: float) -> float:
                if t <= 0.0:
                    return 0.0
                v, _ = quad.integrate(
                    lambda tau: tau ** (n + k - 1.0) * np.asarray(term(tau)),
                    0.0, t, singularity=(exp0 + n + k - 1.0, 0.0), abs_tol=abs_tol)
                return v

            grid = np.geomspace(1e-4 * r_outer, r_outer, 200)
            inner_vals = np.array([inner(float(t)) for t in grid])
            gf = quad.GridFunction.from_samples(
                quad.Grid(grid), inner_vals)

            def v_of(r):
                r = np.atleast_1d(np.asarray(r, dtype=float))
                res = np.empty_like(r)
                for i, rr in enumerate(r):
                    if rr >= r_outer:
                        res[i] = 0.0
                        continue
                    val, _ = quad.integrate(
                        lambda t: t ** (1.0 - 2.0 * k - n) * np.asarray(gf(t)),
                        max(rr, grid[0]), r_outer, abs_tol=abs_tol, rel_tol=1e-10)
                    if rr < grid[0]:
                        # below the cached grid the inner integral is ~t^(n+k+exp0)
                        val2, _ = quad.integrate(
                            lambda t: t ** (1.0 - 2.0 * k - n) * np.array(
                                [inner(float(tt)) for tt in np.atleast_1d(t)]),
                            rr, grid[0], abs_tol=abs_tol)
                        val += val2
                    res[i] = -rr ** k * val
                return res

            return v_of

        out.with_term(k, l, make(), tag="particular")
    return out


def dirichlet_ball(g_coeffs: dict, n: int, K: int) -> HarmonicExpansion:
    """Harmonic extension u = sum g_kl r^k Y_kl into the unit ball."""
    out = HarmonicExpansion(n, K)
    for (k, l), c in g_coeffs.items():
        if c != 0.0:
            out.with_term(k, l, _power_radial(c, k), tag=f"c*r^{k}")
    return out


def smooth_cutoff(r_cut: float):
    """chi(r): 1 on [0, r_cut], 0 beyond 2 r_cut, smooth monotone between."""
    def chi(r):
        r = np.asarray(r, dtype=float)
        t = (r - r_cut) / r_cut  # 0..1 over the transition
        t = np.clip(t, 0.0, 1.0)
        with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
            a = np.where(t > 0, np.exp(-1.0 / np.where(t > 0, t, 1.0)), 0.0)
            b = np.where(t < 1, np.exp(-1.0 / np.where(t < 1, 1.0 - t, 1.0)), 0.0)
        return b / (a + b)
    return chi


def _radial_laplace_residual(vterm, fterm, n: int, k: int, rs) -> float:
    """sup |v'' + (n-1)/r v' - k(n+k-2)/r^2 v - f| by Richardson FD."""
    worst = 0.0
    for r in rs:
        r = float(r)
        d2, _ = quad.differentiate(lambda t: np.asarray(vterm(t)), r, 2, h=1e-2 * r, levels=4)
        d1, _ = quad.differentiate(lambda t: np.asarray(vterm(t)), r, 1, h=1e-2 * r, levels=4)
        v0 = float(np.asarray(vterm(r)))
        lhs = d2 + (n - 1.0) / r * d1 - k * (n + k - 2.0) / (r * r) * v0
        worst = max(worst, abs(lhs - float(np.asarray(fterm(r)))))
    return worst


def solve_poisson_sigma(problem: SigmaProblem, residual_points=None) -> dict:
    """Assemble u = u1 + u2 + u3 for the ball problem with a sigma-trace.

    u1: radial particular solution for the cut-off source (zero trace);
    u2: particular part of the remaining source plus the harmonic
        extension matching the boundary data;
    u3: singular harmonic carrying the prescribed trace.
    Returns the expansion and the per-part residual report.
    """
    n, K = problem.n, problem.f.K
    chi = smooth_cutoff(problem.r_cut)
    f_near = HarmonicExpansion(n, K)
    f_far = HarmonicExpansion(n, K)
    for (k, l), term in problem.f.terms.items():
        f_near.with_term(k, l, (lambda t: (lambda r: np.asarray(t(r)) * chi(r)))(term))
        f_far.with_term(k, l, (lambda t: (lambda r: np.asarray(t(r)) * (1.0 - chi(r))))(term))
    u1 = particular_solution(f_near, problem.r_outer)
    u2p = particular_solution(f_far, problem.r_outer)
    u3 = singular_harmonic_from_trace(problem.psi, n)
    # boundary correction at r = 1
    g_corr = {}
    keys = set(problem.g) | set(u1.terms) | set(u2p.terms) | set(u3.terms)
    for key in keys:
        k, l = key
        val = problem.g.get(key, 0.0)
        for part in (u1, u2p, u3):
            term = part.terms.get(key)
            if term is not None:
                val -= float(np.asarray(term(1.0)))
        if u3.log_term is not None and key == (0, 1):
            val -= 0.0  # log r vanishes at r = 1
        if abs(val) > 1e-15:
            g_corr[key] = val
    u2h = dirichlet_ball(g_corr, n, K)

    total = HarmonicExpansion(n, K)
    total.log_term = u3.log_term
    for key in keys:
        parts = [p.terms[key] for p in (u1, u2p, u3, u2h) if key in p.terms]
        def combined(parts=parts):
            def fn(r):
                r = np.asarray(r, dtype=float)
                out = np.zeros_like(r)
                for p in parts:
                    out = out + np.asarray(p(r), dtype=float)
                return out
            return fn
        total.with_term(key[0], key[1], combined())

    # residual report
    if residual_points is None:
        residual_points = np.linspace(0.35, 0.8, 5)
    pde_resid = 0.0
    for (k, l), term in problem.f.terms.items():
        vterm = total.terms[(k, l)]
        pde_resid = max(pde_resid, _radial_laplace_residual(
            vterm, term, n, k, residual_points))
    # harmonic pieces of the solution contribute zero to the radial operator,
    # so checking against f covers the full equation
    boundary_resid = 0.0
    for key in keys:
        want = problem.g.get(key, 0.0)
        got = float(np.asarray(total.terms[key](1.0))) if key in total.terms else 0.0
        boundary_resid = max(boundary_resid, abs(got - want))
    trace = sigma_trace(total, n)
    trace_resid = 0.0
    for key in set(trace.coeffs) | set(problem.psi.coeffs):
        trace_resid = max(trace_resid, abs(trace.coeffs.get(key, 0.0)
                                           - problem.psi.coeffs.get(key, 0.0)))
    return {
        "solution": total,
        "pde_residual": pde_resid,
        "boundary_residual": boundary_resid,
        "trace_residual": trace_resid,
    }


def classify_singularity(u: HarmonicExpansion, threshold: float = 1e-8) -> dict:
    """removable / pole(order) / essential from the trace coefficients."""
    psi = sigma_trace(u)
    mags = {}
    for (k, _), v in psi.coeffs.items():
        mags[k] = max(mags.get(k, 0.0), abs(v))
    nonzero = [k for k, v in mags.items() if v > threshold]
    if not nonzero:
        return {"kind": "removable"}
    kmax = max(nonzero)
    if kmax >= u.K:
        return {"kind": "essential", "warning":
                "coefficients persist up to the truncation degree"}
    # pole if the top stored degrees are all silent
    return {"kind": "pole", "order": kmax}
