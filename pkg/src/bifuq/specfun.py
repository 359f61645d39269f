"""Special functions used throughout the package.

Thin, domain-checked wrappers around scipy.special. The wrappers fix the
conventions used everywhere else (lower regularized incomplete gamma,
regularized incomplete beta, modified Bessel function of the second kind
for arbitrary real order).
"""

from __future__ import annotations

import numpy as np
import scipy.special as sc

__all__ = ["log_gamma", "erf", "reg_inc_beta", "reg_inc_gamma", "bessel_k"]


def log_gamma(x):
    """ln Gamma(x) for x > 0."""
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0):
        raise ValueError("log_gamma requires x > 0")
    out = sc.gammaln(x)
    return float(out) if out.ndim == 0 else out


def erf(x):
    """Error function; odd, bounded in [-1, 1]."""
    out = sc.erf(np.asarray(x, dtype=float))
    return float(out) if out.ndim == 0 else out


def reg_inc_beta(a, b, x):
    """Regularized incomplete beta I_x(a, b) for a, b > 0 and x in [0, 1]."""
    if a <= 0 or b <= 0:
        raise ValueError("reg_inc_beta requires a > 0 and b > 0")
    x = np.asarray(x, dtype=float)
    if np.any((x < 0) | (x > 1)):
        raise ValueError("reg_inc_beta requires x in [0, 1]")
    out = sc.betainc(a, b, x)
    return float(out) if out.ndim == 0 else out


def reg_inc_gamma(a, x):
    """Lower regularized incomplete gamma P(a, x) for a > 0 and x >= 0."""
    if a <= 0:
        raise ValueError("reg_inc_gamma requires a > 0")
    x = np.asarray(x, dtype=float)
    if np.any(x < 0):
        raise ValueError("reg_inc_gamma requires x >= 0")
    out = sc.gammainc(a, x)
    return float(out) if out.ndim == 0 else out


def bessel_k(nu, z):
    """Modified Bessel function of the second kind K_nu(z), z > 0.

    Even in the order: K_{-nu}(z) = K_nu(z).
    """
    z = np.asarray(z, dtype=float)
    if np.any(z <= 0):
        raise ValueError("bessel_k requires z > 0")
    out = sc.kv(nu, z)
    return float(out) if out.ndim == 0 else out
