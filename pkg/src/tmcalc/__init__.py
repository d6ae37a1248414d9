"""Transmutation-operator calculus toolkit.

Submodules:
    specfun    special functions (gamma, Bessel, Legendre, hypergeometric)
    quad       quadrature/differentiation engine and grid functions
    transforms Fourier sine/cosine, Hankel, Mellin, Stieltjes transforms
    fracops    fractional integrals (Riemann-Liouville, Erdelyi-Kober, ...)
    transmute  the transmutation operator families and verifiers
    symbols    closed-form Mellin symbols, norms, boundedness diagnostics
    perturbed  kernels for perturbed Bessel / Schroedinger equations
    sigmatrace sigma-traces and the singular Poisson solver on the ball
    cli        verification-suite driver
"""

__version__ = "0.1.0"

from . import (  # noqa: F401
    errors,
    fracops,
    perturbed,
    quad,
    sigmatrace,
    specfun,
    symbols,
    transforms,
    transmute,
)
