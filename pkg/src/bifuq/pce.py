"""Polynomial chaos expansion of a scalar transform of one input parameter.

The expansion lives in an orthonormal polynomial family of a stochastic
germ (uniform or beta). Collecting the basis polynomials into the power
basis gives a PowerPolynomial, whose integer-order Mellin transform
follows from the cumulated coefficients of its polynomial powers.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial import legendre as npleg
from numpy.polynomial import polynomial as nppoly
import scipy.special as sc

from .distributions import Beta, Distribution, Uniform

__all__ = [
    "OrthoBasis",
    "PowerPolynomial",
    "OverflowGuardError",
    "make_basis",
    "germ_gauss_rule",
    "project",
    "collect_powers",
    "chat_coefficients",
    "mellin_of_pce",
]


class OverflowGuardError(ArithmeticError):
    """Cumulated coefficients left the numerically trustworthy range."""


@dataclass(frozen=True)
class OrthoBasis:
    """Orthonormal polynomial family of a germ.

    Evaluation goes through stable recurrence-based routines; ``rows``
    additionally stores the ascending power-basis coefficients of each
    orthonormal polynomial for collecting an expansion into powers.

    Attributes
    ----------
    kind : str
        One of ``"legendre"``, ``"shifted_legendre"``, ``"jacobi"``.
    germ : Distribution
        The germ whose density is the orthogonality weight.
    rows : ndarray of shape (N+1, N+1)
        ``rows[n]`` holds the power coefficients of the degree-n
        orthonormal polynomial, so every h_n equals 1.
    norms : ndarray of shape (N+1,)
        Norms of the raw (unnormalized) recurrence polynomials under the
        germ weight.
    """

    kind: str
    germ: Distribution
    rows: np.ndarray = field(repr=False)
    norms: np.ndarray = field(repr=False)

    @property
    def degree(self) -> int:
        return self.rows.shape[0] - 1

    def _raw_eval(self, n: int, x: np.ndarray) -> np.ndarray:
        e_n = np.zeros(n + 1)
        e_n[n] = 1.0
        if self.kind == "shifted_legendre":
            return npleg.legval(2.0 * x - 1.0, e_n)
        if self.kind == "legendre":
            return npleg.legval(x, e_n)
        return sc.eval_jacobi(
            n, self.germ.beta - 1.0, self.germ.alpha - 1.0, 2.0 * x - 1.0
        )

    def eval(self, n: int, x):
        return self._raw_eval(n, np.asarray(x, dtype=float)) / self.norms[n]


def _power_row(kind: str, germ, n: int, width: int) -> np.ndarray:
    if kind == "jacobi":
        coeffs = sc.jacobi(n, germ.beta - 1.0, germ.alpha - 1.0).coef[::-1]
    else:
        coeffs = npleg.leg2poly(np.eye(n + 1)[n])
    if kind != "legendre":
        comp = nppoly.Polynomial(coeffs)(nppoly.Polynomial([-1.0, 2.0]))
        coeffs = comp.coef
    pad = np.zeros(width)
    pad[: len(coeffs)] = coeffs
    return pad


def make_basis(germ: Distribution, N: int) -> OrthoBasis:
    """Orthonormal basis of degree N for a uniform or beta germ."""
    if N < 0:
        raise ValueError("basis degree must be >= 0")
    if isinstance(germ, Uniform) and germ.a == 0.0 and germ.b == 1.0:
        kind = "shifted_legendre"
    elif isinstance(germ, Uniform) and germ.a == -1.0 and germ.b == 1.0:
        kind = "legendre"
    elif isinstance(germ, Beta):
        kind = "jacobi"
    else:
        raise ValueError(
            "germ must be Uniform(0,1), Uniform(-1,1), or Beta; got " + repr(germ)
        )
    if kind == "jacobi":
        nodes, weights = germ_gauss_rule(germ, max(N + 1, 2))
        norms = np.empty(N + 1)
        for n in range(N + 1):
            raw = sc.eval_jacobi(
                n, germ.beta - 1.0, germ.alpha - 1.0, 2.0 * nodes - 1.0
            )
            norms[n] = np.sqrt(np.sum(weights * raw * raw))
    else:
        # Legendre polynomials have norm 1/sqrt(2n+1) under the uniform
        # probability weight
        norms = 1.0 / np.sqrt(2.0 * np.arange(N + 1) + 1.0)
    rows = np.array(
        [_power_row(kind, germ, n, N + 1) / norms[n] for n in range(N + 1)]
    )
    return OrthoBasis(kind, germ, rows, norms)


def germ_gauss_rule(germ: Distribution, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Gauss nodes and probability weights for integrals against the germ."""
    if n < 1:
        raise ValueError("quadrature order must be >= 1")
    if isinstance(germ, Uniform) and germ.a == 0.0 and germ.b == 1.0:
        x, w = np.polynomial.legendre.leggauss(n)
        return (x + 1.0) / 2.0, w / 2.0
    if isinstance(germ, Uniform) and germ.a == -1.0 and germ.b == 1.0:
        x, w = np.polynomial.legendre.leggauss(n)
        return x, w / 2.0
    if isinstance(germ, Beta):
        x, w = sc.roots_jacobi(n, germ.beta - 1, germ.alpha - 1)
        return (x + 1.0) / 2.0, w / np.sum(w)
    raise ValueError("unsupported germ " + repr(germ))


@dataclass(frozen=True)
class PowerPolynomial:
    """Truncated chaos expansion collected into the power basis.

    ``coeffs`` are ascending power-basis coefficients of the polynomial in
    the germ variable; ``germ`` carries the distribution of that variable.
    """

    coeffs: tuple
    germ: Distribution

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(float(c) for c in self.coeffs))
        if len(self.coeffs) == 0:
            raise ValueError("PowerPolynomial needs at least one coefficient")

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, x):
        return nppoly.polyval(np.asarray(x, dtype=float), np.array(self.coeffs))

    def to_json(self) -> dict:
        return {"coeffs": list(self.coeffs), "germ": self.germ.to_json()}


def project(
    g,
    input: Distribution,
    germ: Distribution,
    N: int,
    n_quad: int | None = None,
) -> tuple[np.ndarray, OrthoBasis]:
    """Chaos coefficients of g(r) with r distributed as `input`.

    The input variable is coupled to the germ isoprobabilistically,
    r = F_input^{-1}(F_germ(u)), and each coefficient is the Gauss
    inner product of the composed map with an orthonormal basis
    polynomial. The quadrature order defaults to N+1, the collocation
    order at which the stated reference coefficients are reproduced.

    Parameters
    ----------
    g : callable
        Scalar function of the input parameter (vectorized over arrays).
    input : Distribution
        Law of the physical parameter r.
    germ : Distribution
        Uniform(0,1), Uniform(-1,1), or Beta germ.
    N : int
        Truncation degree, at most 16.
    n_quad : int, optional
        Gauss quadrature order; default N+1.

    Returns
    -------
    coeffs : ndarray of shape (N+1,)
    basis : OrthoBasis
    """
    if N > 16:
        raise ValueError("truncation degree limited to N <= 16")
    if n_quad is None:
        n_quad = N + 1
    basis = make_basis(germ, N)
    nodes, weights = germ_gauss_rule(germ, n_quad)
    if input == germ:
        r = nodes
    else:
        p = np.clip(germ.cdf(nodes), 1e-15, 1 - 1e-15)
        r = input.quantile(p)
    vals = np.asarray(g(r), dtype=float)
    if not np.all(np.isfinite(vals)):
        raise ArithmeticError("g produced non-finite values at quadrature nodes")
    coeffs = np.array(
        [np.sum(weights * vals * basis.eval(n, nodes)) for n in range(N + 1)]
    )
    return coeffs, basis


def collect_powers(coeffs, basis: OrthoBasis) -> PowerPolynomial:
    """Collapse chaos coefficients onto the power basis of the germ."""
    coeffs = np.asarray(coeffs, dtype=float)
    if len(coeffs) > basis.degree + 1:
        raise ValueError("more coefficients than basis polynomials")
    power = coeffs @ basis.rows[: len(coeffs)]
    return PowerPolynomial(tuple(power), basis.germ)


def chat_coefficients(p: PowerPolynomial, s: int) -> np.ndarray:
    """Power-basis coefficients of p(x)^(s-1), the cumulated coefficients.

    Computed by repeated polynomial multiplication; for s = 1 the result
    is the single coefficient 1.
    """
    if int(s) != s or s < 1:
        raise ValueError("s must be an integer >= 1")
    if s > 12:
        raise ValueError("s limited to <= 12 (scaling guard)")
    if p.degree * (s - 1) > 48:
        raise ValueError("polynomial power degree guard N(s-1) <= 48 exceeded")
    out = np.array([1.0])
    base = np.array(p.coeffs)
    for _ in range(int(s) - 1):
        out = np.convolve(out, base)
    if np.any(np.abs(out) > 1e15):
        raise OverflowGuardError(
            "cumulated coefficients exceed 1e15; result would be badly scaled"
        )
    return out


def mellin_of_pce(p: PowerPolynomial, s: int) -> float:
    """E[p(xi)^(s-1)] with xi distributed as the germ.

    Pairs each cumulated coefficient with the germ raw moment of matching
    order; valid also for germs taking negative values, since polynomial
    powers carry the sign information themselves.
    """
    chat = chat_coefficients(p, s)
    return float(sum(c * p.germ.raw_moment(i) for i, c in enumerate(chat)))
