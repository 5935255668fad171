"""Weighted comparison geometry for collars around a boundary.

Model-space functions, principal eigenvalues of the weighted one-dimensional
p-Laplacian, warped-product manifolds with radial weights, and an executable
verification suite for the comparison inequalities and their equality cases.
"""

from . import kernels
from .densities import DensityProfile
from .eigen import (
    EigenResult,
    fd_oracle_p2,
    free_eigenvalue,
    model_eigenvalue,
    principal_eigenvalue,
    rayleigh_quotient,
    shoot,
)
from .models import (
    CurvatureClass,
    ModelParams,
    ball_condition,
    ball_radius,
    c_bar,
    classify,
    collar_model_volume,
    dirichlet_p2_lower_bound,
    first_zero,
    flat_degenerate,
    kasue_constant,
    model_condition,
    model_critical,
    s_kappa_lambda,
    sc_kappa,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "kernels",
    "DensityProfile",
    "EigenResult",
    "fd_oracle_p2",
    "free_eigenvalue",
    "model_eigenvalue",
    "principal_eigenvalue",
    "rayleigh_quotient",
    "shoot",
    "CurvatureClass",
    "ModelParams",
    "ball_condition",
    "ball_radius",
    "c_bar",
    "classify",
    "collar_model_volume",
    "dirichlet_p2_lower_bound",
    "first_zero",
    "flat_degenerate",
    "kasue_constant",
    "model_condition",
    "model_critical",
    "s_kappa_lambda",
    "sc_kappa",
]
