"""ellhyp: elliptic hypergeometric special functions and identity certification.

The package evaluates q-Pochhammer symbols, theta functions, the elliptic
gamma family (standard, second-order, modified, hyperbolic, rarefied),
terminating very-well-poised series, and the contour integrals built from
them, and certifies the exact identities these objects satisfy by comparing
independent quadrature against closed-form products.
"""

from .bases import BaseParams, QuasiPeriods
from .budget import DEFAULT_BUDGET, DEFAULT_POLE_GUARD, SeriesBudget
from .errors import (
    AuditFailure,
    BudgetExhausted,
    DomainError,
    EllhypError,
    InvalidArgument,
    InvalidBase,
    NearPole,
    NoConvergence,
    NoConvergentRepresentation,
    PoleOnContour,
    SchemaError,
    UnknownFunction,
    WindowViolation,
)
from .gammas import (
    bernoulli_b22,
    bernoulli_b33,
    elliptic_gamma,
    elliptic_gamma2,
    elliptic_gamma_log,
    gamma_prod,
    hyperbolic_gamma,
    modified_gamma_g,
    rarefied_gamma,
)
from .qseries import elliptic_pochhammer, q_pochhammer_inf, theta, theta_series

__version__ = "0.1.0"

__all__ = [
    "BaseParams",
    "QuasiPeriods",
    "SeriesBudget",
    "DEFAULT_BUDGET",
    "DEFAULT_POLE_GUARD",
    "q_pochhammer_inf",
    "theta",
    "theta_series",
    "elliptic_pochhammer",
    "elliptic_gamma",
    "elliptic_gamma_log",
    "elliptic_gamma2",
    "gamma_prod",
    "bernoulli_b22",
    "bernoulli_b33",
    "modified_gamma_g",
    "hyperbolic_gamma",
    "rarefied_gamma",
    "EllhypError",
    "InvalidBase",
    "InvalidArgument",
    "BudgetExhausted",
    "NearPole",
    "DomainError",
    "NoConvergentRepresentation",
    "PoleOnContour",
    "NoConvergence",
    "WindowViolation",
    "AuditFailure",
    "UnknownFunction",
    "SchemaError",
]
