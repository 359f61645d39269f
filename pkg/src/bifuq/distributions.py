"""Parametric univariate input distributions.

Each distribution is an immutable value carrying closed-form PDF, CDF,
quantile, raw moments, and the Mellin transform at integer arguments
s >= 1 (the (s-1)-th raw moment of an a.s. nonnegative variable).
Sampling takes an explicit numpy Generator owned by the caller.

JSON literals use fixed field names, e.g.::

    {"kind": "uniform", "a": -1, "b": 3}
    {"kind": "gamma", "shape": 8, "rate": 1}
    {"kind": "beta", "alpha": 2, "beta": 2}
    {"kind": "genbeta", "alpha": 2, "beta": 5, "a": -0.5, "b": 0.5}
    {"kind": "gaussian", "mu": 0, "sigma": 1}
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.special as sc

__all__ = [
    "Distribution",
    "Uniform",
    "Gamma",
    "Beta",
    "GenBeta",
    "Gaussian",
    "UnsupportedMellinError",
    "MomentExistenceError",
    "parse_distribution",
]


class UnsupportedMellinError(ValueError):
    """Mellin transform requested for a distribution with negative support."""


class MomentExistenceError(ValueError):
    """A required (possibly negative-order) moment diverges."""


@dataclass(frozen=True)
class Distribution:
    """Base class; concrete laws implement the abstract hooks below."""

    @property
    def support(self) -> tuple[float, float]:
        raise NotImplementedError

    def pdf(self, x):
        raise NotImplementedError

    def cdf(self, x):
        raise NotImplementedError

    def quantile(self, p):
        raise NotImplementedError

    def raw_moment(self, n: int) -> float:
        """E[X^n] for integer n >= 0."""
        raise NotImplementedError

    def sample(self, rng: np.random.Generator, n: int) -> np.ndarray:
        raise NotImplementedError

    def to_json(self) -> dict:
        raise NotImplementedError

    # -- shared behavior -------------------------------------------------

    @property
    def mean(self) -> float:
        return self.raw_moment(1)

    @property
    def variance(self) -> float:
        m1 = self.raw_moment(1)
        return self.raw_moment(2) - m1 * m1

    def mellin(self, s: int) -> float:
        """E[X^(s-1)] for integer s >= 1; requires a.s. nonnegative support."""
        if int(s) != s or s < 1:
            raise ValueError("mellin is defined for integer s >= 1")
        if self.support[0] < 0:
            raise UnsupportedMellinError(
                f"{self!r} takes negative values; sign-decompose the density first"
            )
        return self.raw_moment(int(s) - 1)

    def mellin_analytic(self, s: float) -> float:
        """Closed-form extension of the Mellin transform to real s.

        Needed for negative powers of a factor (e.g. the inverse of a
        gamma variable). Only laws with a known closed form implement it.
        """
        raise UnsupportedMellinError(
            f"{type(self).__name__} has no closed-form Mellin transform at non-integer s"
        )

    def _check_p(self, p):
        p = np.asarray(p, dtype=float)
        if np.any((p <= 0) | (p >= 1)):
            raise ValueError("quantile requires p in (0, 1)")
        return p


def _scalarize(x):
    x = np.asarray(x, dtype=float)
    return x, x.ndim == 0


def _ret(x, scalar):
    return float(x) if scalar else x


@dataclass(frozen=True)
class Uniform(Distribution):
    a: float
    b: float

    def __post_init__(self):
        if not self.a < self.b:
            raise ValueError("Uniform requires a < b")

    @property
    def support(self):
        return (self.a, self.b)

    def pdf(self, x):
        x, scalar = _scalarize(x)
        out = np.where((x >= self.a) & (x <= self.b), 1.0 / (self.b - self.a), 0.0)
        return _ret(out, scalar)

    def cdf(self, x):
        x, scalar = _scalarize(x)
        out = np.clip((x - self.a) / (self.b - self.a), 0.0, 1.0)
        return _ret(out, scalar)

    def quantile(self, p):
        p = self._check_p(p)
        return _ret(self.a + p * (self.b - self.a), p.ndim == 0)

    def raw_moment(self, n):
        # (b^{n+1} - a^{n+1}) / ((n+1)(b-a))
        return float(
            sum(self.a**k * self.b ** (n - k) for k in range(n + 1)) / (n + 1)
        )

    def mellin_analytic(self, s):
        if self.a < 0:
            raise UnsupportedMellinError("Uniform with negative support")
        if self.a == 0 and s <= 0:
            raise MomentExistenceError("E[U^(s-1)] diverges for s <= 0 on [0, b]")
        if self.a == 0:
            return self.b ** (s - 1) / s
        return (self.b**s - self.a**s) / ((self.b - self.a) * s)

    def sample(self, rng, n):
        return rng.uniform(self.a, self.b, size=n)

    def to_json(self):
        return {"kind": "uniform", "a": self.a, "b": self.b}


@dataclass(frozen=True)
class Gamma(Distribution):
    shape: float
    rate: float

    def __post_init__(self):
        if self.shape <= 0 or self.rate <= 0:
            raise ValueError("Gamma requires shape > 0 and rate > 0")

    @property
    def support(self):
        return (0.0, math.inf)

    def pdf(self, x):
        x, scalar = _scalarize(x)
        out = np.zeros_like(x)
        pos = x > 0
        xv = np.atleast_1d(x)[np.atleast_1d(pos)]
        val = np.exp(
            self.shape * math.log(self.rate)
            + (self.shape - 1) * np.log(xv)
            - self.rate * xv
            - sc.gammaln(self.shape)
        )
        if scalar:
            return float(val[0]) if pos else 0.0
        out[pos] = val
        return out

    def cdf(self, x):
        x, scalar = _scalarize(x)
        out = sc.gammainc(self.shape, self.rate * np.maximum(x, 0.0))
        return _ret(out, scalar)

    def quantile(self, p):
        p = self._check_p(p)
        return _ret(sc.gammaincinv(self.shape, p) / self.rate, p.ndim == 0)

    def raw_moment(self, n):
        return float(
            math.exp(sc.gammaln(self.shape + n) - sc.gammaln(self.shape))
            / self.rate**n
        )

    def mellin_analytic(self, s):
        # Gamma(shape - 1 + s) / Gamma(shape) / rate^(s-1), for s > 1 - shape
        if s <= 1 - self.shape:
            raise MomentExistenceError(
                f"E[X^(s-1)] of Gamma(shape={self.shape}) diverges at s={s}"
            )
        return float(
            math.exp(sc.gammaln(self.shape - 1 + s) - sc.gammaln(self.shape))
            / self.rate ** (s - 1)
        )

    def sample(self, rng, n):
        return rng.gamma(self.shape, 1.0 / self.rate, size=n)

    def to_json(self):
        return {"kind": "gamma", "shape": self.shape, "rate": self.rate}


@dataclass(frozen=True)
class Beta(Distribution):
    alpha: float
    beta: float

    def __post_init__(self):
        if self.alpha <= 0 or self.beta <= 0:
            raise ValueError("Beta requires alpha > 0 and beta > 0")

    @property
    def support(self):
        return (0.0, 1.0)

    def pdf(self, x):
        x, scalar = _scalarize(x)
        inside = (x > 0) & (x < 1)
        out = np.zeros_like(x)
        lognorm = (
            sc.gammaln(self.alpha + self.beta)
            - sc.gammaln(self.alpha)
            - sc.gammaln(self.beta)
        )
        with np.errstate(divide="ignore", invalid="ignore"):
            val = np.exp(
                lognorm
                + (self.alpha - 1) * np.log(x)
                + (self.beta - 1) * np.log1p(-x)
            )
        out = np.where(inside, val, 0.0)
        # endpoint densities for alpha or beta == 1
        if self.alpha == 1:
            out = np.where(x == 0, math.exp(lognorm), out)
        if self.beta == 1:
            out = np.where(x == 1, math.exp(lognorm), out)
        return _ret(out, scalar)

    def cdf(self, x):
        x, scalar = _scalarize(x)
        out = sc.betainc(self.alpha, self.beta, np.clip(x, 0.0, 1.0))
        return _ret(out, scalar)

    def quantile(self, p):
        p = self._check_p(p)
        return _ret(sc.betaincinv(self.alpha, self.beta, p), p.ndim == 0)

    def raw_moment(self, n):
        return float(
            math.exp(
                sc.gammaln(self.alpha + n)
                + sc.gammaln(self.alpha + self.beta)
                - sc.gammaln(self.alpha)
                - sc.gammaln(self.alpha + self.beta + n)
            )
        )

    def mellin_analytic(self, s):
        if s <= 1 - self.alpha:
            raise MomentExistenceError(
                f"E[X^(s-1)] of Beta(alpha={self.alpha}) diverges at s={s}"
            )
        return float(
            math.exp(
                sc.gammaln(self.alpha + self.beta)
                + sc.gammaln(self.alpha - 1 + s)
                - sc.gammaln(self.alpha)
                - sc.gammaln(self.alpha + self.beta - 1 + s)
            )
        )

    def sample(self, rng, n):
        return rng.beta(self.alpha, self.beta, size=n)

    def to_json(self):
        return {"kind": "beta", "alpha": self.alpha, "beta": self.beta}


@dataclass(frozen=True)
class GenBeta(Distribution):
    """Beta(alpha, beta) pushed affinely onto the support [a, b]."""

    alpha: float
    beta: float
    a: float
    b: float

    def __post_init__(self):
        if self.alpha <= 0 or self.beta <= 0:
            raise ValueError("GenBeta requires alpha > 0 and beta > 0")
        if not self.a < self.b:
            raise ValueError("GenBeta requires a < b")

    @property
    def _base(self):
        return Beta(self.alpha, self.beta)

    @property
    def support(self):
        return (self.a, self.b)

    def _to_unit(self, x):
        return (x - self.a) / (self.b - self.a)

    def pdf(self, x):
        x, scalar = _scalarize(x)
        out = self._base.pdf(self._to_unit(x)) / (self.b - self.a)
        return _ret(np.asarray(out), scalar)

    def cdf(self, x):
        x, scalar = _scalarize(x)
        out = self._base.cdf(self._to_unit(x))
        return _ret(np.asarray(out), scalar)

    def quantile(self, p):
        p = self._check_p(p)
        q = self._base.quantile(p)
        return _ret(self.a + (self.b - self.a) * np.asarray(q), p.ndim == 0)

    def raw_moment(self, n):
        # binomial expansion of E[(a + (b-a) B)^n]
        w = self.b - self.a
        return float(
            sum(
                math.comb(n, k) * self.a ** (n - k) * w**k * self._base.raw_moment(k)
                for k in range(n + 1)
            )
        )

    def sample(self, rng, n):
        return self.a + (self.b - self.a) * rng.beta(self.alpha, self.beta, size=n)

    def to_json(self):
        return {
            "kind": "genbeta",
            "alpha": self.alpha,
            "beta": self.beta,
            "a": self.a,
            "b": self.b,
        }


@dataclass(frozen=True)
class Gaussian(Distribution):
    mu: float
    sigma: float

    def __post_init__(self):
        if self.sigma <= 0:
            raise ValueError("Gaussian requires sigma > 0")

    @property
    def support(self):
        return (-math.inf, math.inf)

    def pdf(self, x):
        x, scalar = _scalarize(x)
        z = (x - self.mu) / self.sigma
        out = np.exp(-0.5 * z * z) / (self.sigma * math.sqrt(2 * math.pi))
        return _ret(out, scalar)

    def cdf(self, x):
        x, scalar = _scalarize(x)
        out = sc.ndtr((x - self.mu) / self.sigma)
        return _ret(out, scalar)

    def quantile(self, p):
        p = self._check_p(p)
        return _ret(self.mu + self.sigma * sc.ndtri(p), p.ndim == 0)

    def raw_moment(self, n):
        # E[X^n] = sum_k C(n, 2k) mu^(n-2k) sigma^(2k) (2k-1)!!
        total = 0.0
        for k in range(n // 2 + 1):
            total += (
                math.comb(n, 2 * k)
                * self.mu ** (n - 2 * k)
                * self.sigma ** (2 * k)
                * _double_factorial_odd(2 * k - 1)
            )
        return float(total)

    def sample(self, rng, n):
        return rng.normal(self.mu, self.sigma, size=n)

    def to_json(self):
        return {"kind": "gaussian", "mu": self.mu, "sigma": self.sigma}


def _double_factorial_odd(m: int) -> int:
    """(m)!! for odd m >= -1, with (-1)!! = 1."""
    out = 1
    while m > 1:
        out *= m
        m -= 2
    return out


_KINDS = {
    "uniform": lambda d: Uniform(float(d["a"]), float(d["b"])),
    "gamma": lambda d: Gamma(float(d["shape"]), float(d["rate"])),
    "beta": lambda d: Beta(float(d["alpha"]), float(d["beta"])),
    "genbeta": lambda d: GenBeta(
        float(d["alpha"]), float(d["beta"]), float(d["a"]), float(d["b"])
    ),
    "gaussian": lambda d: Gaussian(float(d["mu"]), float(d["sigma"])),
}


def parse_distribution(obj: dict) -> Distribution:
    """Build a Distribution from its JSON literal."""
    try:
        kind = obj["kind"]
    except (TypeError, KeyError):
        raise ValueError(f"distribution literal needs a 'kind' field: {obj!r}")
    try:
        ctor = _KINDS[kind]
    except KeyError:
        raise ValueError(f"unknown distribution kind {kind!r}")
    try:
        return ctor(obj)
    except KeyError as exc:
        raise ValueError(f"distribution literal {obj!r} is missing field {exc}")
