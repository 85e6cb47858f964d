"""Numerical SLE observables: passage probabilities, contact densities, and a
Monte Carlo Loewner-flow simulator to validate them."""

from .params import SLEParams, integer_alpha_order
from .quadrature import QuadResult, QuadratureError, integrate_interval, integrate_segment, tanh_sinh
from .contour import ArcSeg, Factor, LineSeg, integrate_contour, polyline
from .special import (
    c_alpha,
    c_hat,
    c_star,
    c_tilde,
    constants,
    gauss_2f1,
    h_n,
    principal_pow,
)
from .schramm import (
    PassageSplit,
    PDEResidual,
    fused_schramm,
    passage_split,
    pde_residual_schramm,
    schramm_integrand,
    schramm_kappa4,
    schramm_probability,
)
from .green import (
    AngleArgs,
    ContinuationData,
    bichordal_green,
    chordal_green,
    continuation_coefficients,
    fused_h,
    green_G,
    h_angles,
    h_closed_form,
    h_integer,
    pde_residual_green,
    pochhammer_I,
    pochhammer_loop,
    zeroth_coefficient,
)

__all__ = [
    "SLEParams",
    "integer_alpha_order",
    "QuadResult",
    "QuadratureError",
    "integrate_interval",
    "integrate_segment",
    "tanh_sinh",
    "ArcSeg",
    "Factor",
    "LineSeg",
    "integrate_contour",
    "polyline",
    "c_alpha",
    "c_hat",
    "c_star",
    "c_tilde",
    "constants",
    "gauss_2f1",
    "h_n",
    "principal_pow",
    "PassageSplit",
    "PDEResidual",
    "fused_schramm",
    "passage_split",
    "pde_residual_schramm",
    "schramm_integrand",
    "schramm_kappa4",
    "schramm_probability",
    "AngleArgs",
    "ContinuationData",
    "bichordal_green",
    "chordal_green",
    "continuation_coefficients",
    "fused_h",
    "green_G",
    "h_angles",
    "h_closed_form",
    "h_integer",
    "pde_residual_green",
    "pochhammer_I",
    "pochhammer_loop",
    "zeroth_coefficient",
]

__version__ = "0.1.0"
