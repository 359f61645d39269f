"""Uncertainty quantification of bifurcations in random ODEs.

Propagates input-parameter distributions through reduced normal-form
coefficients via Mellin-transform algebra, polynomial chaos moment
extraction, moment-based density reconstruction, and sigma-point
estimation, validated against a Monte Carlo oracle.
"""

from .distributions import (
    Beta,
    Distribution,
    Gamma,
    Gaussian,
    GenBeta,
    Uniform,
    parse_distribution,
)
from .mellin import (
    MellinFactor,
    PiecewisePdf,
    ProductExpression,
    example31_closed_form,
    gamma_gamma_pdf,
    mellin_eval,
    product_pdf_convolution,
)
from .models import BifurcationModel, get_model
from .moments import MomentSequence, coefficient_moments, mc_moments
from .montecarlo import McResult, mc_run
from .pce import (
    OrthoBasis,
    PowerPolynomial,
    chat_coefficients,
    collect_powers,
    mellin_of_pce,
    project,
)
from .reconstruct import (
    GaussianMixture,
    GmmFit,
    WeightMatrix,
    default_weight_matrix,
    fit_gmm,
    gmm_cdf,
    gmm_moment,
    legendre_pdf_approx,
    monic_pdf_approx,
    transformed_moments_pdf_approx,
)
from .unscented import (
    SigmaPointSet,
    sigma_points_p3,
    sigma_points_p5,
    ut_sign_probability,
)

__version__ = "0.1.0"
