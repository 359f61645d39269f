"""Moment sequences of bifurcation coefficients.

Composes analytic Mellin factors and chaos-expansion factors into exact
raw moments, and provides the seeded Monte Carlo moment oracle used for
validation.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .mellin import ProductExpression, mellin_eval
from .pce import PowerPolynomial

__all__ = ["MomentSequence", "coefficient_moments", "mc_moments"]


@dataclass(frozen=True)
class MomentSequence:
    """Ordered raw moments mu_1..mu_n with a provenance tag.

    Provenance is one of ``"mellin_exact"``, ``"mellin_pce"``,
    ``"monte_carlo"``. ``hankel_ok`` records whether the leading 2x2
    Hankel matrix [[1, mu1], [mu1, mu2]] is positive semidefinite; a
    violation marks approximation error, not an invalid object.
    """

    mu: tuple
    provenance: str

    _PROVENANCES = ("mellin_exact", "mellin_pce", "monte_carlo")

    def __post_init__(self):
        object.__setattr__(self, "mu", tuple(float(m) for m in self.mu))
        if len(self.mu) < 1:
            raise ValueError("a moment sequence needs at least mu_1")
        if self.provenance not in self._PROVENANCES:
            raise ValueError(f"provenance must be one of {self._PROVENANCES}")

    @property
    def n_moms(self) -> int:
        return len(self.mu)

    @property
    def hankel_ok(self) -> bool:
        if self.n_moms < 2:
            return True
        return self.mu[1] - self.mu[0] ** 2 >= -1e-12

    def moment(self, n: int) -> float:
        if n == 0:
            return 1.0
        return self.mu[n - 1]

    def to_json(self) -> dict:
        return {"mu": list(self.mu), "provenance": self.provenance}


def coefficient_moments(e: ProductExpression, n_moms: int) -> MomentSequence:
    """Raw moments mu_1..mu_n of a product expression via its Mellin transform.

    mu_{s-1} is the transform at argument s, so s runs over 2..n_moms+1.
    """
    if not 1 <= n_moms <= 10:
        raise ValueError("n_moms must lie in 1..10")
    mu = tuple(mellin_eval(e, s) for s in range(2, n_moms + 2))
    has_pce = any(isinstance(f.base, PowerPolynomial) for f in e.factors)
    return MomentSequence(mu, "mellin_pce" if has_pce else "mellin_exact")


def mc_moments(model, inputs, n_moms: int, n_samples: int, seed: int) -> MomentSequence:
    """Sample raw moments of the model coefficient; deterministic per seed."""
    if n_samples < 1_000:
        raise ValueError("mc_moments needs at least 10^3 samples")
    from .montecarlo import sample_coefficient

    values = sample_coefficient(model, inputs, n_samples, seed)
    mu = tuple(float(np.mean(values**n)) for n in range(1, n_moms + 1))
    return MomentSequence(mu, "monte_carlo")
