"""Density recovery from a finite moment sequence.

Three nonparametric polynomial approximants (shifted-Legendre series,
monic-orthogonal series against a weight, transformed moments) and a
semi-parametric Gaussian-mixture fit by the generalized method of
moments. The polynomial approximants can go locally negative; they
report that as a diagnostic instead of hiding it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from numpy.polynomial import legendre as npleg
from numpy.polynomial import polynomial as nppoly
import scipy.optimize as opt

from . import specfun
from .distributions import Distribution
from .mellin import PiecewisePdf
from .moments import MomentSequence

__all__ = [
    "PdfApproximant",
    "GaussianMixture",
    "WeightMatrix",
    "GmmFit",
    "legendre_pdf_approx",
    "monic_pdf_approx",
    "transformed_moments_pdf_approx",
    "gmm_moment",
    "gmm_cdf",
    "fit_gmm",
    "default_weight_matrix",
]


@dataclass(frozen=True)
class PdfApproximant:
    """A tabulated density approximant that may carry negative lobes.

    ``min_value`` and ``negative_mass`` quantify how far the raw
    approximant strays below zero; ``clipped()`` converts to a proper
    renormalized PiecewisePdf.
    """

    grid: np.ndarray = field(repr=False)
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        object.__setattr__(self, "grid", np.asarray(self.grid, dtype=float))
        object.__setattr__(self, "values", np.asarray(self.values, dtype=float))

    @property
    def min_value(self) -> float:
        return float(np.min(self.values))

    @property
    def negative_mass(self) -> float:
        return float(np.trapezoid(np.minimum(self.values, 0.0), self.grid))

    def mass(self) -> float:
        return float(np.trapezoid(self.values, self.grid))

    def pdf(self, x):
        x = np.asarray(x, dtype=float)
        out = np.interp(x, self.grid, self.values, left=0.0, right=0.0)
        return float(out) if out.ndim == 0 else out

    def clipped(self) -> PiecewisePdf:
        clip = np.maximum(self.values, 0.0)
        total = np.trapezoid(clip, self.grid)
        if total <= 0:
            raise ValueError("approximant carries no positive mass")
        return PiecewisePdf(self.grid, clip / total)

    def to_csv(self) -> str:
        lines = ["x,density"]
        lines += [f"{x:.12g},{v:.12g}" for x, v in zip(self.grid, self.values)]
        return "\n".join(lines) + "\n"


def _moments_with_one(m: MomentSequence) -> np.ndarray:
    return np.concatenate([[1.0], np.array(m.mu)])


def _default_grid(a: float, b: float, n_grid: int) -> np.ndarray:
    return np.linspace(a, b, n_grid)


def legendre_pdf_approx(
    m: MomentSequence,
    support: tuple[float, float],
    degree: int,
    n_grid: int = 1001,
) -> PdfApproximant:
    """Shifted-Legendre series density approximant on [a, b].

    Each term projects the moment sequence onto a Legendre polynomial
    mapped affinely onto the support:
    rho(y) = sum_k (2k+1)/(b-a) (sum_j c_j^k mu_j) P_k((2y-(a+b))/(b-a)),
    where c_j^k are the power coefficients of the mapped polynomial.
    """
    a, b = support
    if not a < b:
        raise ValueError("support requires a < b")
    if degree > m.n_moms:
        raise ValueError("degree must not exceed the number of moments")
    mu = _moments_with_one(m)
    grid = _default_grid(a, b, n_grid)
    t = (2.0 * grid - (a + b)) / (b - a)
    vals = np.zeros_like(grid)
    # affine map y -> t as a polynomial in y
    affine = nppoly.Polynomial([-(a + b) / (b - a), 2.0 / (b - a)])
    for k in range(degree + 1):
        pk = nppoly.Polynomial(npleg.leg2poly(np.eye(degree + 1)[k]))
        cj = pk(affine).coef
        proj = float(np.dot(cj, mu[: len(cj)]))
        vals += (2 * k + 1) / (b - a) * proj * npleg.legval(t, np.eye(degree + 1)[k])
    return PdfApproximant(grid, vals)


def _monic_polys(weight_moments: np.ndarray, degree: int):
    """Monic orthogonal polynomials and their squared norms by Gram-Schmidt.

    Inner products reduce to linear combinations of the weight's raw
    moments; returns (rows, norms) with rows[i] the ascending power
    coefficients of pi_i.
    """
    rows = np.zeros((degree + 1, degree + 1))
    norms = np.zeros(degree + 1)

    def inner(p, q):
        conv = np.convolve(p, q)
        return float(np.dot(conv, weight_moments[: len(conv)]))

    for i in range(degree + 1):
        p = np.zeros(degree + 1)
        p[i] = 1.0
        for k in range(i):
            coef = inner(p[: i + 1], rows[k, : k + 1]) / norms[k]
            p[: k + 1] -= coef * rows[k, : k + 1]
        rows[i] = p
        norms[i] = inner(p[: i + 1], p[: i + 1])
        if norms[i] <= 0 or not math.isfinite(norms[i]):
            raise ArithmeticError(
                f"Gram matrix ill-conditioned at degree {i}; lower the degree"
            )
    return rows, norms


def monic_pdf_approx(
    m: MomentSequence,
    weight: Distribution,
    degree: int,
    n_grid: int = 1001,
) -> PdfApproximant:
    """Monic-orthogonal series approximant rho(y) = w(y)(1 + sum lambda_i pi_i(y)).

    The pi_i are monic orthogonal polynomials of the weight distribution
    w, built by Gram-Schmidt on the weight's raw moments, and
    lambda_i = (sum_k d_{i,k} mu_k) / <pi_i, pi_i>_w with d_{i,k} the
    power coefficients of pi_i.
    """
    if degree > 12:
        raise ArithmeticError("monic approximant limited to degree <= 12")
    if degree > m.n_moms:
        raise ValueError("degree must not exceed the number of moments")
    a, b = weight.support
    if not (math.isfinite(a) and math.isfinite(b)):
        raise ValueError("weight must have bounded support")
    wmom = np.array([weight.raw_moment(j) for j in range(2 * degree + 1)])
    rows, norms = _monic_polys(wmom, degree)
    mu = _moments_with_one(m)
    grid = _default_grid(a, b, n_grid)
    series = np.zeros_like(grid)
    for i in range(1, degree + 1):
        lam = float(np.dot(rows[i, : i + 1], mu[: i + 1])) / norms[i]
        series += lam * nppoly.polyval(grid, rows[i])
    vals = np.asarray(weight.pdf(grid), dtype=float) * (1.0 + series)
    return PdfApproximant(grid, vals)


def transformed_moments_pdf_approx(
    m: MomentSequence,
    b: float,
    N: int,
    n_grid: int = 1001,
) -> PdfApproximant:
    """Transformed-moment approximant on (0, b).

    With k = floor(N y / b),
    rho(y) = Gamma(N+2)/Gamma(k+1) b^-(k+1)
             sum_{j=0}^{N-k} (-1/b)^j mu_{j+k} / (j! (N-k-j)!).
    """
    if b <= 0:
        raise ValueError("support bound b must be positive")
    if N > m.n_moms:
        raise ValueError("N must not exceed the number of moments")
    mu = _moments_with_one(m)
    grid = np.linspace(0.0, b, n_grid, endpoint=False) + b / (2.0 * n_grid)
    vals = np.zeros_like(grid)
    for idx, y in enumerate(grid):
        k = int(math.floor(N * y / b))
        if k > N:
            continue
        total = 0.0
        for j in range(N - k + 1):
            total += (
                (-1.0 / b) ** j
                * mu[j + k]
                / (math.factorial(j) * math.factorial(N - k - j))
            )
        pref = math.exp(
            specfun.log_gamma(N + 2) - specfun.log_gamma(k + 1) - (k + 1) * math.log(b)
        )
        vals[idx] = pref * total
    return PdfApproximant(grid, vals)


@dataclass(frozen=True)
class GaussianMixture:
    """Finite mixture of normal densities.

    ``pi`` are mixing proportions summing to one; ``mu`` and ``sigma``
    the component means and standard deviations.
    """

    pi: tuple
    mu: tuple
    sigma: tuple

    def __post_init__(self):
        pi = tuple(float(p) for p in self.pi)
        mu = tuple(float(v) for v in self.mu)
        sigma = tuple(float(s) for s in self.sigma)
        if not len(pi) == len(mu) == len(sigma):
            raise ValueError("pi, mu, sigma must share a length")
        if any(p < 0 for p in pi) or abs(sum(pi) - 1.0) > 1e-9:
            raise ValueError("mixing proportions must be nonnegative and sum to 1")
        if any(s <= 0 for s in sigma):
            raise ValueError("component standard deviations must be positive")
        object.__setattr__(self, "pi", pi)
        object.__setattr__(self, "mu", mu)
        object.__setattr__(self, "sigma", sigma)

    @property
    def k(self) -> int:
        return len(self.pi)

    def pdf(self, y):
        y = np.asarray(y, dtype=float)
        out = np.zeros_like(y)
        for p, m, s in zip(self.pi, self.mu, self.sigma):
            z = (y - m) / s
            out = out + p * np.exp(-0.5 * z * z) / (s * math.sqrt(2 * math.pi))
        return float(out) if out.ndim == 0 else out

    def cdf(self, y):
        return gmm_cdf(self, y)

    def moment(self, n: int) -> float:
        return gmm_moment(self, n)

    def sample(self, rng: np.random.Generator, n: int) -> np.ndarray:
        comp = rng.choice(self.k, size=n, p=self.pi)
        return rng.normal(np.take(self.mu, comp), np.take(self.sigma, comp))

    def to_json(self) -> dict:
        return {"pi": list(self.pi), "mu": list(self.mu), "sigma": list(self.sigma)}


def gmm_moment(gm: GaussianMixture, n: int) -> float:
    """Raw moment of the mixture from the normal central-moment closed form."""
    if not 1 <= n <= 20:
        raise ValueError("moment order limited to 1..20")
    total = 0.0
    for p, m, s in zip(gm.pi, gm.mu, gm.sigma):
        comp = 0.0
        for k in range(0, n + 1, 2):
            comp += math.comb(n, k) * m ** (n - k) * s**k * _dfact(k - 1)
        total += p * comp
    return float(total)


def _dfact(m: int) -> int:
    out = 1
    while m > 1:
        out *= m
        m -= 2
    return out


def gmm_cdf(gm: GaussianMixture, y):
    """Mixture CDF as the pi-weighted sum of normal CDFs via erf."""
    y = np.asarray(y, dtype=float)
    out = np.zeros_like(y)
    for p, m, s in zip(gm.pi, gm.mu, gm.sigma):
        out = out + p * 0.5 * (1.0 + specfun.erf((y - m) / (s * math.sqrt(2.0))))
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class WeightMatrix:
    """Diagonal weighting of the moment-condition residuals."""

    diag: tuple

    def __post_init__(self):
        diag = tuple(float(d) for d in self.diag)
        if any(not math.isfinite(d) or d <= 0 for d in diag):
            raise ValueError("weight entries must be finite and positive")
        object.__setattr__(self, "diag", diag)


def default_weight_matrix(m: MomentSequence) -> WeightMatrix:
    """Inverse-absolute-moment weights, identity entries where a moment is ~0."""
    diag = tuple(1.0 / abs(mu) if abs(mu) > 1e-12 else 1.0 for mu in m.mu)
    return WeightMatrix(diag)


@dataclass(frozen=True)
class GmmFit:
    """Result of a method-of-moments mixture fit."""

    mixture: GaussianMixture
    objective: float
    converged: bool
    n_restarts: int

    def residuals(self, m: MomentSequence) -> np.ndarray:
        return np.array(
            [gmm_moment(self.mixture, n + 1) - mu for n, mu in enumerate(m.mu)]
        )


def _theta_to_mixture(theta: np.ndarray, k: int) -> GaussianMixture:
    logits = theta[:k]
    mu = theta[k : 2 * k]
    logsig = np.clip(theta[2 * k :], -30.0, 30.0)
    w = np.exp(logits - np.max(logits))
    w = w / np.sum(w)
    return GaussianMixture(tuple(w), tuple(mu), tuple(np.exp(logsig)))


def fit_gmm(
    m: MomentSequence,
    k: int,
    W: Optional[WeightMatrix] = None,
    init: Optional[np.ndarray] = None,
    support: Optional[tuple[float, float]] = None,
    n_restarts: int = 5,
    max_fev: int = 10_000,
    seed: int = 0,
) -> GmmFit:
    """Fit a k-component Gaussian mixture to a moment sequence.

    Minimizes the weighted quadratic form sum_n W_nn (m_n(eta) - mu_n)^2
    with a derivative-free simplex search over an unconstrained
    reparameterization (softmax mixing weights, log standard
    deviations). Runs ``n_restarts`` perturbed restarts and keeps the
    best; component means initialize near the support boundaries.

    Parameters
    ----------
    m : MomentSequence
        Target raw moments; needs n_moms >= 3k - 1.
    k : int
        Component count.
    W : WeightMatrix, optional
        Defaults to inverse-absolute-moment weights.
    init : ndarray, optional
        Explicit start vector (logits, means, log sigmas), length 3k.
    support : (float, float), optional
        Approximate support of the target variable used for
        initialization; defaults to a mean +- 3 std band.
    """
    if k < 1:
        raise ValueError("need at least one component")
    if m.n_moms < 3 * k - 1:
        raise ValueError("need n_moms >= 3k - 1 moment conditions")
    if W is None:
        W = default_weight_matrix(m)
    diag = np.array(W.diag)
    mu_target = np.array(m.mu)

    def objective(theta):
        gm = _theta_to_mixture(theta, k)
        try:
            resid = np.array(
                [gmm_moment(gm, n) for n in range(1, m.n_moms + 1)]
            ) - mu_target
        except (OverflowError, ValueError):
            return 1e30
        val = float(np.dot(diag, resid * resid))
        return val if math.isfinite(val) else 1e30

    if support is None:
        mean = m.mu[0]
        var = max(m.moment(2) - mean**2, 1e-12)
        std = math.sqrt(var)
        support = (mean - 3.0 * std, mean + 3.0 * std)
    lo, hi = support
    width = hi - lo
    if init is None:
        means0 = np.linspace(lo + 0.1 * width, hi - 0.1 * width, k)
        init = np.concatenate(
            [np.zeros(k), means0, np.full(k, math.log(max(width / 4.0, 1e-8)))]
        )
    init = np.asarray(init, dtype=float)
    if init.shape != (3 * k,):
        raise ValueError("init must have length 3k")

    rng = np.random.default_rng(seed)
    best = None
    any_ok = False
    for r in range(n_restarts):
        start = init.copy()
        if r > 0:
            start[:k] += rng.normal(0.0, 0.3, k)
            start[k : 2 * k] += rng.normal(0.0, 0.15 * width, k)
            start[2 * k :] += rng.normal(0.0, 0.5, k)
        res = opt.minimize(
            objective,
            start,
            method="Nelder-Mead",
            options={"maxfev": max_fev // n_restarts, "xatol": 1e-12, "fatol": 1e-16},
        )
        any_ok = any_ok or bool(res.success)
        if best is None or res.fun < best.fun:
            best = res
    return GmmFit(
        mixture=_theta_to_mixture(best.x, k),
        objective=float(best.fun),
        converged=any_ok,
        n_restarts=n_restarts,
    )
