"""Sigma-point sets of precision 3 and 5 for independent inputs.

The sets discretize a vector of independent input laws into a handful of
deterministic points; propagating them through a coefficient model gives
an exact-rational estimate of the subcritical-bifurcation probability by
counting propagated signs.
"""

from __future__ import annotations

import io
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

__all__ = [
    "SigmaPointSet",
    "sigma_points_p3",
    "sigma_points_p5",
    "ut_sign_probability",
    "sigma_values_csv",
]


@dataclass(frozen=True)
class SigmaPointSet:
    """Deterministic evaluation points of an unscented transformation.

    ``weights`` carry the mean/covariance-matching weights for the
    precision-3 scheme; probability counting is unweighted either way.
    """

    points: np.ndarray
    precision: int
    kappa: Optional[float] = None
    weights: Optional[np.ndarray] = None

    def __post_init__(self):
        pts = np.atleast_2d(np.asarray(self.points, dtype=float))
        object.__setattr__(self, "points", pts)
        if self.precision not in (3, 5):
            raise ValueError("precision must be 3 or 5")

    @property
    def n_points(self) -> int:
        return self.points.shape[0]

    @property
    def dim(self) -> int:
        return self.points.shape[1]


def _mean_std(inputs):
    mean = np.array([d.mean for d in inputs])
    std = np.array([np.sqrt(d.variance) for d in inputs])
    return mean, std


def sigma_points_p3(inputs, kappa: Optional[float] = None) -> SigmaPointSet:
    """Precision-3 sigma points: the mean plus 2n symmetric offsets.

    Offsets are sqrt((n + kappa) var_i) along each coordinate axis; the
    default kappa = 3 - n. With weights W0 = kappa/(n+kappa) and
    Wi = 1/(2(n+kappa)) the set matches the input mean and covariance
    exactly.
    """
    n = len(inputs)
    if n < 1:
        raise ValueError("need at least one input")
    if kappa is None:
        kappa = 3.0 - n
    if n + kappa <= 0:
        raise ValueError("requires n + kappa > 0")
    mean, std = _mean_std(inputs)
    scale = np.sqrt(n + kappa) * std
    points = [mean]
    for i in range(n):
        e = np.zeros(n)
        e[i] = 1.0
        points.append(mean + scale[i] * e)
        points.append(mean - scale[i] * e)
    weights = np.concatenate(
        [[kappa / (n + kappa)], np.full(2 * n, 1.0 / (2 * (n + kappa)))]
    )
    return SigmaPointSet(np.array(points), 3, kappa=float(kappa), weights=weights)


def sigma_points_p5(inputs) -> SigmaPointSet:
    """Precision-5 sigma points: mean, 2n axial, and 2n(n-1) paired corners.

    The axial offset in coordinate i is d_i = sqrt(3) std_i; corner
    points combine the offsets of two distinct coordinates, for a total
    of 2n^2 + 1 points.
    """
    n = len(inputs)
    if n < 1:
        raise ValueError("need at least one input")
    mean, std = _mean_std(inputs)
    d = np.sqrt(3.0) * std
    points = [mean]
    for i in range(n):
        e = np.zeros(n)
        e[i] = 1.0
        points.append(mean + d[i] * e)
        points.append(mean - d[i] * e)
    for i in range(n):
        for j in range(i + 1, n):
            ei = np.zeros(n)
            ei[i] = 1.0
            ej = np.zeros(n)
            ej[j] = 1.0
            for si in (1.0, -1.0):
                for sj in (1.0, -1.0):
                    points.append(mean + si * d[i] * ei + sj * d[j] * ej)
    return SigmaPointSet(np.array(points), 5)


def ut_sign_probability(model, sp: SigmaPointSet):
    """Subcritical probability as an exact count over propagated points.

    Each point is pushed through the model; the probability is the
    unweighted fraction of points whose coefficient has the model's
    subcritical sign, with exact zeros counted as neither sign.

    Returns
    -------
    prob : Fraction
    values : ndarray
        Propagated coefficient values, one per sigma point.
    """
    if sp.dim != model.dim:
        raise ValueError(
            f"model {model.name} has {model.dim} inputs, set has {sp.dim}"
        )
    values = np.array([model.eval(*pt) for pt in sp.points])
    count = int(np.count_nonzero(model.is_subcritical(values)))
    return Fraction(count, sp.n_points), values


def sigma_values_csv(sp: SigmaPointSet, values: np.ndarray, subcritical) -> str:
    """CSV of sigma points, propagated coefficient, and subcritical flag."""
    buf = io.StringIO()
    cols = ",".join(f"x{i+1}" for i in range(sp.dim))
    buf.write(f"{cols},coefficient,subcritical\n")
    for pt, v, s in zip(sp.points, values, subcritical):
        coords = ",".join(f"{c:.12g}" for c in pt)
        buf.write(f"{coords},{v:.12g},{int(bool(s))}\n")
    return buf.getvalue()
