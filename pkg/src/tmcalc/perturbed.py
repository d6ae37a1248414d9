"""Kernels for perturbed Bessel / Schroedinger transmutations.

Two kernel problems are solved by successive approximation:

* the half-line Schroedinger kernel in characteristic variables (w, v),
   d2K/dwdv = q(w+v) K,  K(w, 0) = (1/3) int_0^w q,
  iterated on a square grid with cumulative fourth-order quadrature; and

* the perturbed-Bessel kernel u(xi, eta) on 0 < eta < xi, driven by the
  Riemann function of the singular Goursat problem, with the semi-infinite
  integrals truncated by the declared majorant tail.

Tables interpolate bilinearly and export to CSV.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import quad, specfun
from .errors import DomainError, NonconvergenceError, ToleranceError

__all__ = [
    "Potential",
    "KernelTable",
    "riemann_function",
    "riemann_function_hypergeometric",
    "solve_landis_kernel",
    "solve_perturbed_kernel",
    "kernel_bound",
    "transmute_solution",
]


@dataclass
class Potential:
    """Potential with a declared decreasing majorant |q(s+t)| <= p(s)."""

    q: callable
    majorant_p: callable | None = None
    lambda_bound: float | None = None

    def __post_init__(self):
        if self.majorant_p is not None:
            # spot-check the majorant property on a crude sample
            s = np.linspace(0.3, 6.0, 12)
            for tau in (0.0, 0.4, 1.7):
                qv = np.abs(np.asarray(self.q(s + tau), dtype=float))
                pv = np.abs(np.asarray(self.majorant_p(s), dtype=float))
                if np.any(qv > pv * (1.0 + 1e-9) + 1e-300):
                    raise DomainError("majorant_p fails |q(s+tau)| <= p(s) on samples")

    def tail_integral(self, s0: float, s1: float) -> float:
        p = self.majorant_p if self.majorant_p is not None else self.q
        v, _ = quad.integrate(lambda t: np.abs(np.asarray(p(t), dtype=float)),
                              s0, s1, abs_tol=1e-12, rel_tol=1e-10)
        return v


@dataclass
class KernelTable:
    """Kernel values on a rectangular (w, v) grid with bilinear queries."""

    w: np.ndarray
    v: np.ndarray
    values: np.ndarray  # shape (len(w), len(v))
    iteration_count: int = 0
    last_term_sup: float = 0.0

    @property
    def W(self) -> float:
        return float(self.w[-1])

    def __call__(self, wq, vq):
        wq = np.atleast_1d(np.asarray(wq, dtype=float))
        vq = np.atleast_1d(np.asarray(vq, dtype=float))
        if np.any(wq > self.w[-1] + 1e-12) or np.any(vq > self.v[-1] + 1e-12):
            raise DomainError("query outside the tabulated kernel range")
        iw = np.clip(np.searchsorted(self.w, wq) - 1, 0, len(self.w) - 2)
        iv = np.clip(np.searchsorted(self.v, vq) - 1, 0, len(self.v) - 2)
        tw = (wq - self.w[iw]) / (self.w[iw + 1] - self.w[iw])
        tv = (vq - self.v[iv]) / (self.v[iv + 1] - self.v[iv])
        z = self.values
        out = (
            z[iw, iv] * (1 - tw) * (1 - tv)
            + z[iw + 1, iv] * tw * (1 - tv)
            + z[iw, iv + 1] * (1 - tw) * tv
            + z[iw + 1, iv + 1] * tw * tv
        )
        return out if out.size > 1 else float(out[0])

    def to_csv(self, path: str, bound_fn=None) -> None:
        """Write 'w,v,K[,bound,slack]' rows over the triangle v <= w."""
        with open(path, "w", newline="") as fh:
            header = "w,v,K" + (",bound,slack" if bound_fn is not None else "")
            fh.write(header + "\n")
            for i, wv in enumerate(self.w):
                for j, vv in enumerate(self.v):
                    if vv > wv + 1e-12:
                        continue
                    row = f"{wv:.12g},{vv:.12g},{self.values[i, j]:.12g}"
                    if bound_fn is not None:
                        bd = bound_fn(wv, vv)
                        row += f",{bd:.12g},{bd - abs(self.values[i, j]):.12g}"
                    fh.write(row + "\n")


def _cumulative_integral(y: np.ndarray, x: np.ndarray, axis: int) -> np.ndarray:
    """Cumulative integral along an axis, 4th order on a uniform grid."""
    y = np.moveaxis(y, axis, 0)
    n = y.shape[0]
    h = x[1] - x[0]
    out = np.zeros_like(y)
    if n >= 4:
        # panel [k, k+1] via the cubic through the four nearest nodes
        for k in range(n - 1):
            if k == 0:
                inc = h * (y[0] * 3 / 8 + y[1] * 19 / 24 - y[2] * 5 / 24 + y[3] * 1 / 24)
            elif k == n - 2:
                inc = h * (y[n - 1] * 3 / 8 + y[n - 2] * 19 / 24
                           - y[n - 3] * 5 / 24 + y[n - 4] * 1 / 24)
            else:
                inc = h * (-y[k - 1] + 13 * y[k] + 13 * y[k + 1] - y[k + 2]) / 24.0
            out[k + 1] = out[k] + inc
    else:
        for k in range(n - 1):
            out[k + 1] = out[k] + 0.5 * h * (y[k] + y[k + 1])
    return np.moveaxis(out, 0, axis)


def solve_landis_kernel(q, W: float, n: int = 129, boundary_factor: float = 1.0 / 3.0,
                        tol: float = 1e-12, max_iter: int = 200) -> KernelTable:
    """Neumann-series solution of the characteristic kernel equation.

    K(w,v) = c int_0^w q + int_0^w da int_0^v q(a+b) K(a,b) db on the full
    square [0, W]^2 (the iteration needs values above the diagonal too).
    boundary_factor is the printed 1/3; pass 1/2 for the variant whose
    operator identity closes exactly.
    """
    w = np.linspace(0.0, W, n)
    v = np.linspace(0.0, W, n)
    wg, vg = np.meshgrid(w, v, indexing="ij")
    qs = np.asarray(q(wg + vg), dtype=float)
    qw = np.asarray(q(w), dtype=float) * np.ones_like(w)
    k0 = boundary_factor * _cumulative_integral(qw, w, 0)
    k0 = np.repeat(k0[:, None], n, axis=1)
    total = k0.copy()
    term = k0
    sup_k = float(np.max(np.abs(total)))
    it = 0
    for it in range(1, max_iter + 1):
        g = qs * term
        inner = _cumulative_integral(g, v, 1)
        term = _cumulative_integral(inner, w, 0)
        total += term
        sup_t = float(np.max(np.abs(term)))
        sup_k = float(np.max(np.abs(total)))
        if sup_t < tol * (1.0 + sup_k):
            break
    else:
        raise NonconvergenceError(
            "Landis kernel iteration exceeded the budget; the potential "
            "violates its stated bound")
    return KernelTable(w, v, total, iteration_count=it, last_term_sup=sup_t)


def landis_neumann_terms(q, W: float, n: int = 129, count: int = 6,
                         boundary_factor: float = 1.0 / 3.0) -> list:
    """First Neumann terms as tables (for the factorial-bound checks)."""
    w = np.linspace(0.0, W, n)
    v = np.linspace(0.0, W, n)
    wg, vg = np.meshgrid(w, v, indexing="ij")
    qs = np.asarray(q(wg + vg), dtype=float)
    qw = np.asarray(q(w), dtype=float) * np.ones_like(w)
    k0 = boundary_factor * _cumulative_integral(qw, w, 0)
    term = np.repeat(k0[:, None], n, axis=1)
    out = [KernelTable(w, v, term.copy())]
    for _ in range(count - 1):
        inner = _cumulative_integral(qs * term, v, 1)
        term = _cumulative_integral(inner, w, 0)
        out.append(KernelTable(w, v, term.copy()))
    return out


# ---------------------------------------------------------------------------
# Riemann function and the singular (Bessel) kernel problem
# ---------------------------------------------------------------------------


def riemann_function(nu: float, s, tau, xi, eta):
    """R_nu = P_nu((1+A)/(1-A)), the Goursat Riemann function.

    A = (eta^2-tau^2)/(xi^2-tau^2) * (s^2-xi^2)/(s^2-eta^2); the arguments
    must satisfy 0 <= tau <= eta <= xi <= s (A in [0, 1)).
    """
    s = np.asarray(s, dtype=float)
    tau = np.asarray(tau, dtype=float)
    xi = np.asarray(xi, dtype=float)
    eta = np.asarray(eta, dtype=float)
    if np.any(tau > eta) or np.any(eta > xi) or np.any(xi > s):
        raise DomainError("riemann_function needs tau <= eta <= xi <= s")
    a = (eta ** 2 - tau ** 2) / (xi ** 2 - tau ** 2) * (s ** 2 - xi ** 2) / (s ** 2 - eta ** 2)
    z = (1.0 + a) / (1.0 - a)
    return specfun.legendre_p(nu, 0.0, z)


def riemann_function_hypergeometric(nu: float, s, tau, xi, eta):
    """The equivalent 2F1 form (independent evaluation path)."""
    s = np.asarray(s, dtype=float)
    tau = np.asarray(tau, dtype=float)
    xi = np.asarray(xi, dtype=float)
    eta = np.asarray(eta, dtype=float)
    a = (s ** 2 - xi ** 2) / (s ** 2 - eta ** 2) * (eta ** 2 - tau ** 2) / (xi ** 2 - tau ** 2)
    pref = ((s ** 2 - eta ** 2) / (s ** 2 - tau ** 2)
            * (xi ** 2 - tau ** 2) / (xi ** 2 - eta ** 2)) ** nu
    return pref * np.real(specfun.hyp2f1_series(-nu, -nu, 1.0, a))


@dataclass
class BesselKernelTable:
    """u(xi, eta) on a rectangle, with the (x, t)-space accessor."""

    alpha: float
    xi: np.ndarray
    eta: np.ndarray
    values: np.ndarray
    iteration_count: int = 0
    last_term_sup: float = 0.0
    s_star: float = 0.0

    def u(self, xiq, etaq):
        xiq = np.atleast_1d(np.asarray(xiq, dtype=float))
        etaq = np.atleast_1d(np.asarray(etaq, dtype=float))
        ix = np.clip(np.searchsorted(self.xi, xiq) - 1, 0, len(self.xi) - 2)
        ie = np.clip(np.searchsorted(self.eta, etaq) - 1, 0, len(self.eta) - 2)
        tx = (xiq - self.xi[ix]) / (self.xi[ix + 1] - self.xi[ix])
        te = (etaq - self.eta[ie]) / (self.eta[ie + 1] - self.eta[ie])
        z = self.values
        out = (
            z[ix, ie] * (1 - tx) * (1 - te)
            + z[ix + 1, ie] * tx * (1 - te)
            + z[ix, ie + 1] * (1 - tx) * te
            + z[ix + 1, ie + 1] * tx * te
        )
        return out if out.size > 1 else float(out[0])

    def kernel_xt(self, x, t):
        """K(x,t) = u((t+x)/2, (t-x)/2); P(x,t) = (t/x)^alpha K(x,t)."""
        x = np.asarray(x, dtype=float)
        t = np.asarray(t, dtype=float)
        return self.u(0.5 * (t + x), 0.5 * (t - x))

    def p_kernel(self, x, t):
        x = np.asarray(x, dtype=float)
        t = np.asarray(t, dtype=float)
        return (t / x) ** self.alpha * self.kernel_xt(x, t)


def solve_perturbed_kernel(alpha: float, pot: Potential, xi_max: float,
                           eta_max: float | None = None, n_xi: int = 33,
                           n_eta: int = 17, tol: float = 1e-10,
                           max_iter: int = 80, tail_tol: float = 1e-12,
                           n_quad_s: int = 24, n_quad_tau: int = 12) -> BesselKernelTable:
    """Successive approximations for the singular Goursat kernel.

    u(xi,eta) = -1/2 int_xi^S R(s,0;xi,eta) q(s) ds
                - int_xi^S ds int_0^eta q(s+t) R(s,t;xi,eta) u(s,t) dt,
    with S chosen so the majorant tail is below tail_tol. The iteration
    runs on a product grid; evaluation between nodes is bilinear.
    """
    nu = alpha - 1.0
    if eta_max is None:
        eta_max = 0.6 * xi_max
    # truncation point from the majorant tail
    s_star = xi_max + 1.0
    for _ in range(200):
        if pot.tail_integral(s_star, 8.0 * s_star) < tail_tol and \
           pot.tail_integral(8.0 * s_star, 64.0 * s_star) < tail_tol:
            break
        s_star *= 1.5
    else:
        raise ToleranceError("majorant tail bound not reached")
    # the iteration reads u(s, tau) for s up to the truncation point, so the
    # xi-grid must span all of it: dense up to xi_max, geometric beyond
    n_far = max(8, n_xi // 2)
    xi = np.unique(np.concatenate([
        np.linspace(1e-3, xi_max, n_xi),
        np.geomspace(xi_max, s_star, n_far),
    ]))
    eta = np.linspace(0.0, eta_max, n_eta)
    gl_s, glw_s = quad.gauss_legendre_panel(n_quad_s)
    gl_t, glw_t = quad.gauss_legendre_panel(n_quad_tau)

    def s_nodes(lo, hi):
        mid = 0.5 * (lo + hi)
        half = 0.5 * (hi - lo)
        return mid + half * gl_s, half * glw_s

    def s_edges(xv):
        top = min(xv + 2.0, s_star)
        parts = [np.linspace(xv, top, 5)]
        if top < s_star:
            parts.append(np.geomspace(top, s_star, 6))
        return np.unique(np.concatenate(parts))

    # eta arguments are clamped at the xi = eta diagonal; values in the
    # unphysical corner continue the diagonal limit, keeping bilinear
    # queries near the diagonal unbiased
    def eta_clamp(xv, ev):
        return min(ev, xv * (1.0 - 1e-12))

    u0 = np.zeros((len(xi), len(eta)))
    for i, xv in enumerate(xi):
        edges = s_edges(xv)
        for j, ev in enumerate(eta):
            acc = 0.0
            for a, bnd in zip(edges[:-1], edges[1:]):
                sn, sw = s_nodes(a, bnd)
                r = riemann_function(nu, sn, 0.0, xv, eta_clamp(xv, ev))
                acc += float(np.sum(sw * r * np.asarray(pot.q(sn), dtype=float)))
            u0[i, j] = -0.5 * acc

    total = u0.copy()
    term = u0.copy()
    for it in range(1, max_iter + 1):
        new = np.zeros_like(total)
        cur = BesselKernelTable(alpha, xi, eta, term, s_star=s_star)
        for i, xv in enumerate(xi):
            edges = s_edges(xv)
            for j, ev in enumerate(eta):
                evc = eta_clamp(xv, ev)
                if evc <= 0.0:
                    continue
                acc = 0.0
                tn = 0.5 * evc + 0.5 * evc * gl_t
                tw = 0.5 * evc * glw_t
                for a, bnd in zip(edges[:-1], edges[1:]):
                    sn, sw = s_nodes(a, bnd)
                    sg, tg = np.meshgrid(sn, tn, indexing="ij")
                    r = riemann_function(nu, sg.ravel(), tg.ravel(),
                                         xv, evc).reshape(sg.shape)
                    uv = cur.u(sg.ravel(), tg.ravel()).reshape(sg.shape)
                    qv = np.asarray(pot.q(sg + tg), dtype=float)
                    acc += float(np.einsum("i,j,ij->", sw, tw, qv * r * uv))
                new[i, j] = -acc
        term = new
        total += term
        sup_t = float(np.max(np.abs(term)))
        if sup_t < tol * (1.0 + float(np.max(np.abs(total)))):
            break
    else:
        raise NonconvergenceError("perturbed kernel iteration did not settle")
    return BesselKernelTable(alpha, xi, eta, total, iteration_count=it,
                             last_term_sup=sup_t, s_star=s_star)


def kernel_bound(variant: str, alpha: float, x: float, t: float,
                 pot: Potential | None = None, beta: float | None = None) -> float:
    """Closed-form kernel estimates for |P(x, t)|, t >= x > 0.

    variant "general" uses the Legendre-weighted majorant integral;
    "power" is the p(y) = y^-(2 beta+1) specialization with the negative-
    order Legendre function; "power_matched" is its beta = alpha-1
    elementary form.
    """
    if t < x or x <= 0.0:
        raise DomainError("kernel_bound needs t >= x > 0")
    z = (t * t + x * x) / (2.0 * t * x)
    if variant == "general":
        if pot is None:
            raise DomainError("general bound needs the potential majorant")
        pl = specfun.legendre_p(alpha - 1.0, 0.0, max(z, 1.0))
        tail = pot.tail_integral(x, pot_tail_hi(pot, x))
        c = 0.5 * pl * tail
        return (t / x) ** alpha * c * math.exp(0.5 * (t - x) * c)
    if variant == "power":
        if beta is None or beta <= 0.0:
            raise DomainError("power bound needs beta > 0")
        g = float(np.real(specfun.gamma(beta)))
        if t == x:
            return math.inf
        pl = specfun.legendre_p(alpha - 1.0, -beta, z)
        c = g * 4.0 ** (beta - 1.0) / (t * t - x * x) ** beta * pl
        return (t / x) ** alpha * c * math.exp(0.5 * (t - x) * c)
    if variant == "power_matched":
        if beta is None:
            beta = alpha - 1.0
        if beta <= 0.0:
            raise DomainError("matched bound needs beta = alpha - 1 > 0")
        c = 2.0 ** (beta - 2.0) / beta * z ** beta
        return (1.0 / (4.0 * beta)) * x ** (-(2.0 * beta + 1.0)) * (t * t + x * x) ** beta \
            * math.exp(0.5 * (t - x) * c)
    raise DomainError(f"unknown bound variant {variant!r}")


def pot_tail_hi(pot: Potential, x: float) -> float:
    hi = max(10.0 * x, 50.0)
    for _ in range(60):
        if pot.tail_integral(hi, 4.0 * hi) < 1e-13:
            return 4.0 * hi
        hi *= 2.0
    return hi


def transmute_solution(table, h, x: float, upper: float | None = None,
                       kind: str = "bessel", abs_tol: float = 1e-10) -> float:
    """u(x) = h(x) + int_x^T P(x, t) h(t) dt with P read off the table.

    For kind="landis" the table is a characteristic-square KernelTable and
    P(x,t) = K((t+x)/2, (t-x)/2); for kind="bessel" the table carries the
    (x, t) back-map itself.
    """
    if kind == "landis":
        top = 2.0 * table.W - x if upper is None else upper
        if top < x:
            raise DomainError("kernel table does not cover the requested x")

        def p_of(t):
            t = np.atleast_1d(np.asarray(t, dtype=float))
            return np.asarray(table(0.5 * (t + x), 0.5 * (t - x)))
    elif kind == "bessel":
        top = (2.0 * float(table.xi[-1]) - x) if upper is None else upper

        def p_of(t):
            t = np.atleast_1d(np.asarray(t, dtype=float))
            return np.asarray(table.p_kernel(x, t))
    else:
        raise DomainError("kind must be 'landis' or 'bessel'")
    v, _ = quad.integrate(lambda t: p_of(t) * np.asarray(h(t), dtype=float),
                          x, top, abs_tol=abs_tol, rel_tol=1e-9)
    return float(h(x)) + v
