"""Concentration bounds, Orlicz norms and Monte Carlo tail verification for
alpha-subexponential (sub-Weibull) random variables, alpha in (0, 2].

Submodules:

    distributions  seedable mean-zero samplers, rank-1 tensors, truncation
    orlicz         Orlicz quasi-norms (empirical and analytic), L^p norms, constant chains
    specnorms      matrix norms, centered quadratic forms, chaos-norm optimizers
    bounds         every tail/moment bound as an explicit clamped function
    montecarlo     statistic kernels and the deterministic tail-estimation harness
    calibrate      minimal dominating constants and domination verdicts
    cli            configured experiments and utility subcommands
"""

from . import bounds, calibrate, cli, distributions, montecarlo, orlicz, specnorms
from .bounds import TailBoundCurve, make_curve, knobbed_family
from .calibrate import CalibrationResult, domination_report, min_dominating_constant
from .distributions import DistributionSpec, TensorSpec, sample, sample_tensor, truncate, truncation_level
from .montecarlo import StatisticSpec, TailEstimate, binomial_ci, center_estimate, empirical_tail
from .orlicz import (
    AlphaParam,
    OrliczValue,
    equivalence_constants,
    lp_norm,
    orlicz_norm_analytic,
    orlicz_norm_empirical,
    psi_functional,
    quasi_triangle_factor,
)
from .specnorms import (
    NormBundle,
    SymMatrix,
    al12_norm_coupled,
    al12_norm_decoupled,
    norm_bundle,
    operator_norm,
    quadratic_form_centered,
)

__version__ = "0.1.0"
