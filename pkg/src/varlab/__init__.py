"""Exact VaR subadditivity and comonotonicity analysis on finite discrete
loss distributions, plus the Gaussian closed-form counterpart.

The discrete core works in exact rational arithmetic: quantiles, stop-loss
transforms, couplings, and the all-levels subadditivity decision are computed
without tolerances. The Gaussian module is floating point with explicit
error bounds.
"""

__version__ = "0.1.0"

from .comonotonicity import (
    ComonotoneVerdict,
    comonotonic_coupling,
    convex_order_max_check,
    is_comonotonic,
    is_comonotonic_support,
    min_copula_check,
)
from .distributions import (
    MAX_JOINT_POINTS,
    DiscreteDistribution,
    JointDiscreteDistribution,
    Rational,
    independent_product,
)
from .gaussian import (
    GaussianSpec,
    gaussian_comonotone_condition,
    gaussian_portfolio_var,
    gaussian_subadditivity_gap,
    gaussian_var,
    std_normal_cdf,
    std_normal_quantile,
)
from .risk import ConvexOrderVerdict, convex_order_leq, stop_loss, var
from .subadditivity import (
    BernoulliCaseVerdict,
    GeneratorSpec,
    IntervalVerdict,
    SubadditivityReport,
    TrialVerdict,
    bernoulli_counterexample,
    critical_alphas,
    equivalence_trial,
    random_comonotonic,
    random_coupling,
    subadditivity_report,
)

__all__ = [
    "BernoulliCaseVerdict",
    "ComonotoneVerdict",
    "ConvexOrderVerdict",
    "DiscreteDistribution",
    "GaussianSpec",
    "GeneratorSpec",
    "IntervalVerdict",
    "JointDiscreteDistribution",
    "MAX_JOINT_POINTS",
    "Rational",
    "SubadditivityReport",
    "TrialVerdict",
    "bernoulli_counterexample",
    "comonotonic_coupling",
    "convex_order_leq",
    "convex_order_max_check",
    "critical_alphas",
    "equivalence_trial",
    "gaussian_comonotone_condition",
    "gaussian_portfolio_var",
    "gaussian_subadditivity_gap",
    "gaussian_var",
    "independent_product",
    "is_comonotonic",
    "is_comonotonic_support",
    "min_copula_check",
    "random_comonotonic",
    "random_coupling",
    "std_normal_cdf",
    "std_normal_quantile",
    "stop_loss",
    "subadditivity_report",
    "var",
]
