"""Registry of reduced normal-form coefficient models.

Each model exposes the scalar coefficient map, the sign convention that
marks a bifurcation as subcritical, and (where available) a factorization
of the coefficient into Mellin-composable parts.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .distributions import Distribution, Uniform
from .mellin import MellinFactor, ProductExpression
from .pce import collect_powers, project

__all__ = [
    "BifurcationModel",
    "lorenz_reduced",
    "pitchfork_product",
    "watt_governor_sign",
    "watt_governor_lyapunov",
    "lorenz_decomposition",
    "get_model",
    "MODELS",
]


def lorenz_reduced(r1, r2):
    """Reduced cubic coefficient r1 / (r2 (1 + r1)) of the Lorenz system.

    Subcritical pitchfork when the coefficient is negative.
    """
    r1 = np.asarray(r1, dtype=float)
    r2 = np.asarray(r2, dtype=float)
    if np.any(r1 == -1.0):
        raise ZeroDivisionError("coefficient is singular at r1 = -1")
    if np.any(r2 <= 0.0):
        raise ValueError("r2 must be positive")
    out = r1 / (r2 * (1.0 + r1))
    return float(out) if out.ndim == 0 else out


def pitchfork_product(r1, r2):
    """Cubic coefficient r1 * r2; subcritical when the product is negative."""
    out = np.asarray(r1, dtype=float) * np.asarray(r2, dtype=float)
    return float(out) if out.ndim == 0 else out


def watt_governor_sign(beta, alpha):
    """Sign proxy -(3 + (alpha^2 - 5) beta^2 + alpha^4 beta^6).

    Shares its sign with the first Lyapunov coefficient; the Hopf
    bifurcation is subcritical when the value is positive.
    """
    beta = np.asarray(beta, dtype=float)
    alpha = np.asarray(alpha, dtype=float)
    out = -(3.0 + (alpha**2 - 5.0) * beta**2 + alpha**4 * beta**6)
    return float(out) if out.ndim == 0 else out


def watt_governor_lyapunov(beta, alpha):
    """First Lyapunov coefficient of the Watt governor Hopf point."""
    beta = np.asarray(beta, dtype=float)
    alpha = np.asarray(alpha, dtype=float)
    num = (
        alpha
        * beta**1.5
        * (1.0 - beta**2)
        * (3.0 + (alpha**2 - 5.0) * beta**2 + alpha**4 * beta**6)
    )
    den = (1.0 - beta**2 + alpha**2 * beta**4) * (
        1.0 - beta**2 + 4.0 * alpha**2 * beta**4
    )
    out = -0.5 * num / den
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class BifurcationModel:
    """A scalar coefficient map with its criticality convention.

    Attributes
    ----------
    name : str
        Registry key.
    input_names : tuple of str
        Input parameters in call order.
    func : callable
        Vectorized map from the input arrays to the coefficient.
    subcritical_when : str
        ``"negative"`` or ``"positive"``: sign of the coefficient that
        marks the bifurcation as subcritical. Exact zeros count as
        neither.
    decomposition : callable, optional
        Builds a Mellin product expression from the input laws.
    """

    name: str
    input_names: tuple
    func: Callable
    subcritical_when: str
    decomposition: Optional[Callable] = None

    @property
    def dim(self) -> int:
        return len(self.input_names)

    def eval(self, *args):
        if len(args) != self.dim:
            raise TypeError(f"{self.name} takes {self.dim} inputs")
        return self.func(*args)

    def is_subcritical(self, value, zero_tol: float = 1e-12):
        """Sign test with a tolerance band so exact zeros never count."""
        value = np.asarray(value, dtype=float)
        if self.subcritical_when == "positive":
            out = value > zero_tol
        else:
            out = value < -zero_tol
        return bool(out) if out.ndim == 0 else out


def lorenz_decomposition(
    zeta: Distribution,
    theta: Distribution,
    N: int = 2,
    germ: Distribution | None = None,
    n_quad: int | None = None,
) -> ProductExpression:
    """Factorize the Lorenz coefficient as (1/theta) * (zeta/(1+zeta)).

    The first factor has a closed-form Mellin transform; the second is a
    degree-N chaos expansion of r/(1+r) under the law of zeta.
    """
    if germ is None:
        germ = Uniform(0.0, 1.0)
    coeffs, basis = project(lambda r: r / (1.0 + r), zeta, germ, N, n_quad=n_quad)
    poly = collect_powers(coeffs, basis)
    return ProductExpression(
        factors=(MellinFactor(theta, exponent=-1), MellinFactor(poly)),
    )


MODELS = {
    "lorenz": BifurcationModel(
        name="lorenz",
        input_names=("zeta", "theta"),
        func=lorenz_reduced,
        subcritical_when="negative",
        decomposition=lorenz_decomposition,
    ),
    "pitchfork_product": BifurcationModel(
        name="pitchfork_product",
        input_names=("r1", "r2"),
        func=pitchfork_product,
        subcritical_when="negative",
    ),
    "watt_governor": BifurcationModel(
        name="watt_governor",
        input_names=("beta", "alpha"),
        func=watt_governor_sign,
        subcritical_when="positive",
    ),
}


def get_model(name: str) -> BifurcationModel:
    try:
        return MODELS[name]
    except KeyError:
        raise ValueError(f"unknown model {name!r}; known: {sorted(MODELS)}")
