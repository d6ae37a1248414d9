"""Adaptive quadrature, differentiation, and the grid-function containers.

Integrands are callables that accept and return numpy arrays. Algebraic
endpoint singularities (x-a)^la, (b-x)^lb with exponents > -1 are removed
by the power substitution before the adaptive pass, so e.g. the
(x^2-t^2)^(nu-1/2) kernels integrate cleanly for nu > -1/2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, NonconvergenceError, ToleranceError

__all__ = [
    "Grid",
    "GridFunction",
    "BumpSpec",
    "integrate",
    "integrate_semiinfinite",
    "principal_value",
    "differentiate",
    "gauss_legendre_panel",
]

DEFAULT_ABS_TOL = 1e-10
DEFAULT_REL_TOL = 1e-10

# 7-point Gauss / 15-point Kronrod pair on [-1, 1]
_KRONROD_X = np.array([
    -0.991455371120813, -0.949107912342759, -0.864864423359769,
    -0.741531185599394, -0.586087235467691, -0.405845151377397,
    -0.207784955007898, 0.0, 0.207784955007898, 0.405845151377397,
    0.586087235467691, 0.741531185599394, 0.864864423359769,
    0.949107912342759, 0.991455371120813,
])
_KRONROD_W = np.array([
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728, 0.204432940075298,
    0.190350578064785, 0.169004726639267, 0.140653259715525,
    0.104790010322250, 0.063092092629979, 0.022935322010529,
])
_GAUSS_W = np.array([
    0.129484966168870, 0.279705391489277, 0.381830050505119,
    0.417959183673469, 0.381830050505119, 0.279705391489277,
    0.129484966168870,
])
_GAUSS_IDX = np.arange(1, 15, 2)

_gl_cache: dict[int, tuple[np.ndarray, np.ndarray]] = {}


def gauss_legendre_panel(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Cached Gauss-Legendre nodes/weights on [-1, 1]."""
    if n not in _gl_cache:
        _gl_cache[n] = np.polynomial.legendre.leggauss(n)
    return _gl_cache[n]


def _gk_segment(f, a: float, b: float) -> tuple[float, float]:
    mid = 0.5 * (a + b)
    half = 0.5 * (b - a)
    x = mid + half * _KRONROD_X
    y = np.asarray(f(x), dtype=float)
    gk = half * float(np.dot(_KRONROD_W, y))
    g = half * float(np.dot(_GAUSS_W, y[_GAUSS_IDX]))
    err = (200.0 * abs(gk - g)) ** 1.5 if gk != g else 0.0
    # never report less than a few ulps of the segment magnitude
    err = max(err, 2e-16 * half * float(np.sum(np.abs(y))))
    return gk, err


def _adaptive(f, a: float, b: float, abs_tol: float, rel_tol: float,
              max_segments: int) -> tuple[float, float]:
    segs = []
    val, err = _gk_segment(f, a, b)
    segs.append((err, a, b, val))
    while True:
        total = sum(s[3] for s in segs)
        toterr = sum(s[0] for s in segs)
        if toterr <= max(abs_tol, rel_tol * abs(total)):
            return total, toterr
        if len(segs) >= max_segments:
            raise ToleranceError(
                f"quadrature stalled at error {toterr:.3e}",
                value=total, error=toterr,
            )
        segs.sort(key=lambda s: s[0])
        _, aa, bb, _ = segs.pop()
        mm = 0.5 * (aa + bb)
        v1, e1 = _gk_segment(f, aa, mm)
        v2, e2 = _gk_segment(f, mm, bb)
        segs.append((e1, aa, mm, v1))
        segs.append((e2, mm, bb, v2))


def integrate(f, a: float, b: float, singularity=None,
              abs_tol: float = DEFAULT_ABS_TOL, rel_tol: float = DEFAULT_REL_TOL,
              max_segments: int = 600) -> tuple[float, float]:
    """Integrate f over (a, b) with optional endpoint exponents (la, lb).

    With singularity=(la, lb), the integrand is assumed to behave like
    (x-a)^la near a and (b-x)^lb near b (exponents > -1, 0 means regular);
    each singular end is removed by the substitution x = a + h*u^(1/(1+la)).
    Returns (value, error_estimate).
    """
    if not (b > a):
        raise DomainError("integrate needs b > a")
    la, lb = (0.0, 0.0) if singularity is None else singularity
    if la <= -1.0 or lb <= -1.0:
        raise DomainError("endpoint exponents must be > -1")
    if la == 0.0 and lb == 0.0:
        return _adaptive(f, a, b, abs_tol, rel_tol, max_segments)
    mid = 0.5 * (a + b)
    total, toterr = 0.0, 0.0
    if la != 0.0:
        h = mid - a
        p = 1.0 / (1.0 + la)
        # below d_min the user integrand would lose (x - a) to rounding;
        # evaluate at the clamp and rescale by the declared power instead
        d_min = 1e-9 * (abs(a) + h)

        def left(u):
            u = np.asarray(u, dtype=float)
            d = h * u ** p
            small = d < d_min
            x = a + np.where(small, d_min, d)
            vals = np.asarray(f(x), dtype=float)
            with np.errstate(invalid="ignore"):
                vals = np.where(small, vals * (d / d_min) ** la, vals)
            return vals * h * p * u ** (p - 1.0)

        # u^(p-1) * (x-a)^la = u^(p-1+la*p) = u^0: the substitution is exact
        v, e = _adaptive(left, 0.0, 1.0, abs_tol / 2, rel_tol, max_segments)
        total += v
        toterr += e
    else:
        v, e = _adaptive(f, a, mid, abs_tol / 2, rel_tol, max_segments)
        total += v
        toterr += e
    if lb != 0.0:
        h = b - mid
        p = 1.0 / (1.0 + lb)
        d_min = 1e-9 * (abs(b) + h)

        def right(u):
            u = np.asarray(u, dtype=float)
            d = h * u ** p
            small = d < d_min
            x = b - np.where(small, d_min, d)
            vals = np.asarray(f(x), dtype=float)
            with np.errstate(invalid="ignore"):
                vals = np.where(small, vals * (d / d_min) ** lb, vals)
            return vals * h * p * u ** (p - 1.0)

        v, e = _adaptive(right, 0.0, 1.0, abs_tol / 2, rel_tol, max_segments)
        total += v
        toterr += e
    else:
        v, e = _adaptive(f, mid, b, abs_tol / 2, rel_tol, max_segments)
        total += v
        toterr += e
    return total, toterr


def integrate_semiinfinite(f, a: float, decay, abs_tol: float = DEFAULT_ABS_TOL,
                           rel_tol: float = DEFAULT_REL_TOL) -> tuple[float, float]:
    """Integrate f over (a, infinity) given a truthful decay hint.

    decay is "exponential", ("algebraic", p) with p > 1, or
    ("compact_support", b). The truncation point is pushed until the tail
    bound drops below a tenth of the tolerance.
    """
    if isinstance(decay, str):
        kind, par = decay, None
    else:
        kind, par = decay
    if kind == "compact_support":
        if par <= a:
            return 0.0, 0.0
        return integrate(f, a, par, abs_tol=abs_tol, rel_tol=rel_tol)
    total, toterr = 0.0, 0.0
    lo = a
    width = max(1.0, abs(a))
    for _ in range(200):
        hi = lo + width
        v, e = integrate(f, lo, hi, abs_tol=abs_tol / 4, rel_tol=rel_tol)
        total += v
        toterr += e
        # tail estimate from the current endpoint magnitude
        fm = float(np.max(np.abs(np.asarray(f(np.array([hi, hi + 0.37 * width]))))))
        if kind == "exponential":
            tail = fm * width  # |f| ~ C e^{-c t}: crude but honest bound scale
        elif kind == "algebraic":
            p = float(par)
            if p <= 1.0:
                raise DomainError("algebraic decay needs p > 1")
            tail = fm * hi / (p - 1.0)
        else:
            raise DomainError(f"unknown decay hint {kind!r}")
        if tail < max(abs_tol, rel_tol * abs(total)) / 10.0:
            return total, toterr + tail
        lo = hi
        width *= 1.6
    raise ToleranceError("semi-infinite tail bound not reached",
                         value=total, error=toterr)


def principal_value(f, c: float, a: float, b: float,
                    abs_tol: float = DEFAULT_ABS_TOL,
                    levels: int = 6) -> float:
    """Cauchy principal value of f over (a, b) with a simple pole at c.

    Symmetric excision with radii eps_k = eps0 / 2^k, Richardson-extrapolated
    in the odd powers of eps. Detects non-simple poles by a diverging
    extrapolation tableau.
    """
    if not (a < c < b):
        raise DomainError("principal_value needs a < c < b")
    eps0 = (b - a) / 16.0
    eps0 = min(eps0, 0.9 * (c - a), 0.9 * (b - c))
    vals = []
    epss = []
    for k in range(levels):
        eps = eps0 * 0.5 ** k
        v1, _ = integrate(f, a, c - eps, abs_tol=abs_tol / 4)
        v2, _ = integrate(f, c + eps, b, abs_tol=abs_tol / 4)
        vals.append(v1 + v2)
        epss.append(eps)
    # Neville elimination of eps^1, eps^3, eps^5, ...
    tab = [list(vals)]
    powers = [1, 3, 5, 7, 9]
    for j, p in enumerate(powers[: levels - 1]):
        prev = tab[-1]
        ratio = 2.0 ** p
        cur = [
            (ratio * prev[i + 1] - prev[i]) / (ratio - 1.0)
            for i in range(len(prev) - 1)
        ]
        tab.append(cur)
    best = tab[-1][0]
    second = tab[-2][0] if len(tab) >= 2 else vals[-1]
    scale = max(1.0, abs(best))
    if abs(best - second) > 1e-4 * scale + 10 * abs_tol * scale:
        raise NonconvergenceError(
            f"principal value extrapolation unstable ({best:.6g} vs {second:.6g}); "
            "pole is not simple?"
        )
    return best


def differentiate(f, x: float, order: int = 1, h: float | None = None,
                  levels: int = 5) -> tuple[float, float]:
    """Derivative of callable (or GridFunction) f at x by Richardson FD.

    Returns (value, error_estimate). Use fewer levels when f itself is only
    known to quadrature accuracy, so the finest step does not amplify noise.
    """
    if order not in (1, 2):
        raise DomainError("differentiate supports order 1 or 2")
    fn = f
    if h is None:
        h = 1e-2 * max(1.0, abs(x))
    tab = []
    for k in range(levels):
        hh = h * 0.5 ** k
        if order == 1:
            v = (fn(x + hh) - fn(x - hh)) / (2.0 * hh)
        else:
            v = (fn(x + hh) - 2.0 * fn(x) + fn(x - hh)) / (hh * hh)
        tab.append(float(np.ravel(v)[0]))
    rows = [tab]
    for j in range(1, levels):
        prev = rows[-1]
        fac = 4.0 ** j
        rows.append([(fac * prev[i + 1] - prev[i]) / (fac - 1.0)
                     for i in range(len(prev) - 1)])
    best = rows[-1][0]
    err = abs(rows[-1][0] - rows[-2][0]) if len(rows) >= 2 else math.inf
    return best, err


# ---------------------------------------------------------------------------
# Grids, grid functions, bumps
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Grid:
    """Strictly increasing positive nodes; spacing is metadata only."""

    nodes: np.ndarray
    spacing: str = "uniform"

    def __post_init__(self):
        nodes = np.asarray(self.nodes, dtype=float)
        object.__setattr__(self, "nodes", nodes)
        if nodes.ndim != 1 or nodes.size < 2:
            raise DomainError("Grid needs at least 2 nodes")
        if np.any(nodes <= 0.0) or np.any(np.diff(nodes) <= 0.0):
            raise DomainError("Grid nodes must be positive, strictly increasing")

    @staticmethod
    def uniform(a: float, b: float, n: int) -> "Grid":
        return Grid(np.linspace(a, b, n), "uniform")

    @staticmethod
    def logarithmic(a: float, b: float, n: int) -> "Grid":
        return Grid(np.geomspace(a, b, n), "logarithmic")


def _spline_coeffs(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Not-a-knot cubic spline second derivatives at the nodes."""
    n = x.size
    if n < 4:
        return np.zeros(n)
    h = np.diff(x)
    A = np.zeros((n, n))
    rhs = np.zeros(n)
    for i in range(1, n - 1):
        A[i, i - 1] = h[i - 1]
        A[i, i] = 2.0 * (h[i - 1] + h[i])
        A[i, i + 1] = h[i]
        rhs[i] = 6.0 * ((y[i + 1] - y[i]) / h[i] - (y[i] - y[i - 1]) / h[i - 1])
    # not-a-knot end conditions
    A[0, 0], A[0, 1], A[0, 2] = h[1], -(h[0] + h[1]), h[0]
    A[-1, -3], A[-1, -2], A[-1, -1] = h[-1], -(h[-2] + h[-1]), h[-2]
    return np.linalg.solve(A, rhs)


class GridFunction:
    """A sampled (or exactly known) function on a positive grid.

    Either wraps the generating callable (exact evaluation) or interpolates
    the samples with a cubic spline. Values vanish outside the declared
    support interval.
    """

    def __init__(self, grid: Grid, values: np.ndarray, support=None,
                 even_extension: bool = False, fn=None, dfn=None):
        self.grid = grid
        self.values = np.asarray(values)
        if self.values.shape != grid.nodes.shape:
            raise DomainError("values must match grid nodes")
        self.support = support
        self.even_extension = even_extension
        self._fn = fn
        self._dfn = dfn
        self._m2 = None
        if support is not None:
            a, b = support
            if not (0.0 < a < b):
                raise DomainError("support must satisfy 0 < a < b")
            scale = float(np.max(np.abs(self.values))) or 1.0
            outside = (grid.nodes < a) | (grid.nodes > b)
            if np.any(np.abs(self.values[outside]) > 1e-14 * scale):
                raise DomainError("values must vanish outside the support")

    @staticmethod
    def from_callable(fn, grid: Grid, support=None, even_extension=False,
                      dfn=None) -> "GridFunction":
        vals = np.asarray(fn(grid.nodes))
        return GridFunction(grid, vals, support, even_extension, fn=fn, dfn=dfn)

    @staticmethod
    def from_samples(grid: Grid, values, support=None,
                     even_extension=False) -> "GridFunction":
        return GridFunction(grid, values, support, even_extension)

    def __call__(self, x):
        scalar = np.isscalar(x)
        xa = np.atleast_1d(np.asarray(x, dtype=float))
        if self.even_extension:
            xa = np.abs(xa)
        if self._fn is not None:
            out = np.asarray(self._fn(xa), dtype=self.values.dtype) * np.ones_like(xa)
        else:
            out = self._spline_eval(xa)
        if self.support is not None:
            a, b = self.support
            out = np.where((xa < a) | (xa > b), 0.0, out)
        return out[0] if scalar else out

    def _spline_eval(self, xa: np.ndarray) -> np.ndarray:
        xg = self.grid.nodes
        if self._m2 is None:
            self._m2 = _spline_coeffs(xg, self.values.astype(float))
        m2 = self._m2
        idx = np.clip(np.searchsorted(xg, xa) - 1, 0, xg.size - 2)
        h = xg[idx + 1] - xg[idx]
        t = (xa - xg[idx]) / h
        y0, y1 = self.values[idx], self.values[idx + 1]
        a0, a1 = m2[idx], m2[idx + 1]
        out = (
            y0 * (1 - t) + y1 * t
            + h * h / 6.0 * ((1 - t) ** 3 - (1 - t)) * a0
            + h * h / 6.0 * (t ** 3 - t) * a1
        )
        inside = (xa >= xg[0]) & (xa <= xg[-1])
        return np.where(inside, out, 0.0)

    def derivative(self, x):
        """First derivative: exact if the generator supplied one, else the
        spline's own derivative (samples), else finite differences."""
        if self._dfn is not None:
            d = np.asarray(self._dfn(np.atleast_1d(np.asarray(x, dtype=float))))
            if self.support is not None:
                a, b = self.support
                xa = np.atleast_1d(np.asarray(x, dtype=float))
                d = np.where((xa < a) | (xa > b), 0.0, d)
            return d[0] if np.isscalar(x) else d
        if self._fn is None:
            xa = np.atleast_1d(np.asarray(x, dtype=float))
            if self.even_extension:
                xa = np.abs(xa)
            d = self._spline_deriv(xa)
            if self.support is not None:
                a, b = self.support
                d = np.where((xa < a) | (xa > b), 0.0, d)
            return d[0] if np.isscalar(x) else d
        if np.isscalar(x):
            return differentiate(self, float(x), 1)[0]
        return np.array([differentiate(self, float(t), 1)[0]
                         for t in np.atleast_1d(x)])

    def _spline_deriv(self, xa: np.ndarray) -> np.ndarray:
        xg = self.grid.nodes
        if self._m2 is None:
            self._m2 = _spline_coeffs(xg, self.values.astype(float))
        m2 = self._m2
        idx = np.clip(np.searchsorted(xg, xa) - 1, 0, xg.size - 2)
        h = xg[idx + 1] - xg[idx]
        t = (xa - xg[idx]) / h
        y0, y1 = self.values[idx], self.values[idx + 1]
        a0, a1 = m2[idx], m2[idx + 1]
        out = (
            (y1 - y0) / h
            + h / 6.0 * (-3.0 * (1 - t) ** 2 + 1.0) * a0
            + h / 6.0 * (3.0 * t ** 2 - 1.0) * a1
        )
        inside = (xa >= xg[0]) & (xa <= xg[-1])
        return np.where(inside, out, 0.0)

    def l2_norm(self) -> float:
        if self.support is not None:
            a, b = self.support
        else:
            a, b = float(self.grid.nodes[0]), float(self.grid.nodes[-1])
        v, _ = integrate(lambda t: np.abs(np.asarray(self(t))) ** 2, a, b,
                         abs_tol=1e-13, rel_tol=1e-12)
        return math.sqrt(max(v, 0.0))


@dataclass(frozen=True)
class BumpSpec:
    """Smooth bump amplitude * exp(-1/((x-a)(b-x))) supported on (a, b)."""

    a: float
    b: float
    amplitude: float = 1.0

    def __post_init__(self):
        if not (0.0 < self.a < self.b):
            raise DomainError("BumpSpec needs 0 < a < b")

    @staticmethod
    def normalized(a: float, b: float) -> "BumpSpec":
        """Bump whose peak value is 1 (narrow supports otherwise underflow
        every absolute quadrature tolerance)."""
        return BumpSpec(a, b, amplitude=math.exp(4.0 / (b - a) ** 2))

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        h = (x - self.a) * (self.b - x)
        with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
            out = np.where(h > 0.0, np.exp(-1.0 / np.where(h > 0, h, 1.0)), 0.0)
        return self.amplitude * out

    def derivative(self, x):
        x = np.asarray(x, dtype=float)
        h = (x - self.a) * (self.b - x)
        hp = self.a + self.b - 2.0 * x
        with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
            g = np.where(h > 0.0, hp / np.where(h > 0, h * h, 1.0), 0.0)
        return self(x) * g

    def second_derivative(self, x):
        x = np.asarray(x, dtype=float)
        h = (x - self.a) * (self.b - x)
        hp = self.a + self.b - 2.0 * x
        with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
            safe = np.where(h > 0, h, 1.0)
            g1 = hp / safe ** 2          # g' where g = -1/h
            g2 = -2.0 / safe ** 2 - 2.0 * hp * hp / safe ** 3
        out = self(x) * (g2 + g1 * g1)
        return np.where(h > 0.0, out, 0.0)

    def to_grid_function(self, n: int = 257) -> GridFunction:
        pad = 0.02 * (self.b - self.a)
        grid = Grid.uniform(max(self.a - pad, 1e-12), self.b + pad, n)
        return GridFunction.from_callable(
            self, grid, support=(self.a, self.b), dfn=self.derivative
        )
