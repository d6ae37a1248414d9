"""Fourier sine/cosine, Hankel, Mellin, and Stieltjes transforms.

Transforms are evaluated pointwise in the dual variable by quadrature.
Grids are small and nonuniform and the kernels are Bessel-type, so O(N^2)
is the right trade-off here; there is no FFT path.

Conventions (fixed across the package):
    F+ f(eta) = int_0^inf f(y) cos(y eta) dy,   inverse carries 2/pi
    F- f(eta) = int_0^inf f(y) sin(y eta) dy,   inverse carries 2/pi
    Fnu f(eta) = int_0^inf f(y) j_nu(y eta) y^(2nu+1) dy,
        inverse carries 2^(-2nu)/Gamma(nu+1)^2 and the same kernel
    M f(s) = int_0^inf x^(s-1) f(x) dx, critical line Re s = 1/2
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import quad, specfun
from .errors import DomainError

__all__ = [
    "TransformSpec",
    "fourier_cos",
    "fourier_sin",
    "hankel",
    "inverse_fourier_cos",
    "inverse_fourier_sin",
    "inverse_hankel",
    "mellin",
    "modified_mellin",
    "stieltjes",
    "forward_transform",
    "inverse_transform",
]


@dataclass(frozen=True)
class TransformSpec:
    """One of the generalized Fourier transforms, with optional order."""

    kind: str  # FourierCos | FourierSin | Hankel | Mellin | ModifiedMellin | Stieltjes
    parameter: float | None = None

    def __post_init__(self):
        if self.kind == "Hankel":
            if self.parameter is None or self.parameter < -0.5:
                raise DomainError("Hankel transform needs nu >= -1/2")


def _support(f: quad.GridFunction) -> tuple[float, float]:
    if f.support is not None:
        return f.support
    return float(f.grid.nodes[0]), float(f.grid.nodes[-1])


def fourier_cos(f: quad.GridFunction, eta: float, abs_tol: float = 1e-12) -> float:
    a, b = _support(f)
    v, _ = quad.integrate(lambda y: f(y) * np.cos(y * eta), a, b, abs_tol=abs_tol)
    return v


def fourier_sin(f: quad.GridFunction, eta: float, abs_tol: float = 1e-12) -> float:
    a, b = _support(f)
    v, _ = quad.integrate(lambda y: f(y) * np.sin(y * eta), a, b, abs_tol=abs_tol)
    return v


def hankel(nu: float, f: quad.GridFunction, eta: float, abs_tol: float = 1e-12) -> float:
    if nu < -0.5:
        raise DomainError("hankel needs nu >= -1/2")
    a, b = _support(f)
    v, _ = quad.integrate(
        lambda y: f(y) * specfun.normalized_j(nu, y * eta) * y ** (2.0 * nu + 1.0),
        a, b, abs_tol=abs_tol,
    )
    return v


def _invert(g, y: float, weight, eta_max: float, abs_tol: float) -> float:
    """Common inverse loop: integrate g(eta) * weight(eta) over (0, eta_max)."""
    v, _ = quad.integrate(lambda e: np.asarray(g(e)) * weight(e), 0.0, eta_max,
                          abs_tol=abs_tol, max_segments=2000)
    return v


def inverse_fourier_cos(g, y: float, eta_max: float = 60.0,
                        abs_tol: float = 1e-10) -> float:
    """(2/pi) int_0^H g(eta) cos(y eta) d eta for a decaying transform g."""
    return (2.0 / math.pi) * _invert(g, y, lambda e: np.cos(y * e), eta_max, abs_tol)


def inverse_fourier_sin(g, y: float, eta_max: float = 60.0,
                        abs_tol: float = 1e-10) -> float:
    return (2.0 / math.pi) * _invert(g, y, lambda e: np.sin(y * e), eta_max, abs_tol)


def inverse_hankel(nu: float, g, y: float, eta_max: float = 60.0,
                   abs_tol: float = 1e-10) -> float:
    c = 2.0 ** (-2.0 * nu) / float(np.real(specfun.gamma(nu + 1.0))) ** 2
    return c * _invert(
        g, y,
        lambda e: specfun.normalized_j(nu, y * e) * e ** (2.0 * nu + 1.0),
        eta_max, abs_tol,
    )


def forward_transform(spec: TransformSpec, f: quad.GridFunction, eta: float) -> float:
    if spec.kind == "FourierCos":
        return fourier_cos(f, eta)
    if spec.kind == "FourierSin":
        return fourier_sin(f, eta)
    if spec.kind == "Hankel":
        return hankel(spec.parameter, f, eta)
    raise DomainError(f"forward_transform unsupported for {spec.kind}")


def inverse_transform(spec: TransformSpec, g, y: float, eta_max: float = 60.0,
                      abs_tol: float = 1e-10) -> float:
    if spec.kind == "FourierCos":
        return inverse_fourier_cos(g, y, eta_max, abs_tol)
    if spec.kind == "FourierSin":
        return inverse_fourier_sin(g, y, eta_max, abs_tol)
    if spec.kind == "Hankel":
        return inverse_hankel(spec.parameter, g, y, eta_max, abs_tol)
    raise DomainError(f"inverse_transform unsupported for {spec.kind}")


def mellin(f: quad.GridFunction, s: complex, abs_tol: float = 1e-12) -> complex:
    """int_0^inf x^(s-1) f(x) dx on the support of f."""
    a, b = _support(f)
    s = complex(s)
    vr, _ = quad.integrate(
        lambda x: np.real(x ** (s - 1.0) * f(x)), a, b, abs_tol=abs_tol)
    vi, _ = quad.integrate(
        lambda x: np.imag(x ** (s - 1.0) * f(x)), a, b, abs_tol=abs_tol)
    return complex(vr, vi)


def modified_mellin(g: quad.GridFunction, p: float, abs_tol: float = 1e-12) -> complex:
    """(1/sqrt(2 pi)) int_0^inf y^(i p - 1/2) g(y) dy (an L2 isometry)."""
    return mellin(g, complex(0.5, p), abs_tol) / math.sqrt(2.0 * math.pi)


def stieltjes(f: quad.GridFunction, x: float, abs_tol: float = 1e-12) -> float:
    """(S f)(x) = int_0^inf f(t) / (x + t) dt."""
    if x <= 0.0:
        raise DomainError("stieltjes needs x > 0")
    a, b = _support(f)
    v, _ = quad.integrate(lambda t: f(t) / (x + t), a, b, abs_tol=abs_tol)
    return v
