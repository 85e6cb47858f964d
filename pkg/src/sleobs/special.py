"""Special-function kernels and normalization constants.

Principal-branch powers, the Gauss hypergeometric function on the cut plane,
and the Gamma-function constants that normalize the passage and contact
observables.  All constants are plain functions of the exponent parameters so
they can be unit-tested against high-precision references.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.special import gamma as _gamma
from scipy.special import hyp2f1 as _hyp2f1

from .params import SLEParams, integer_alpha_order

__all__ = [
    "principal_pow",
    "gauss_2f1",
    "c_alpha",
    "c_hat",
    "c_hat_is_degenerate",
    "c_star",
    "c_tilde",
    "h_n",
    "constants",
]


def principal_pow(base, exponent: float):
    """base**exponent via the principal branch, exp(e*(ln|b| + i Arg b)).

    Accepts scalars or arrays.  Zero base is a domain error for negative
    exponent and gives 0 for positive exponent.
    """
    b = np.asarray(base, dtype=complex)
    if np.any(b == 0):
        if exponent < 0:
            raise ValueError("principal_pow: zero base with negative exponent")
        if exponent == 0:
            out = np.ones_like(b)
            return out.item() if np.isscalar(base) or b.ndim == 0 else out
    out = np.exp(exponent * np.log(b, where=(b != 0), out=np.zeros_like(b)))
    out = np.where(b == 0, 0.0 if exponent != 0 else 1.0, out)
    if np.isscalar(base) or b.ndim == 0:
        return complex(out)
    return out


def real_gamma(x: float) -> float:
    """Gamma on the real line; poles at nonpositive integers raise."""
    if x <= 0 and x == round(x):
        raise ValueError(f"Gamma pole at argument {x}")
    return float(_gamma(x))


def gauss_2f1(a: float, b: float, c: float, w):
    """Principal-branch Gauss 2F1(a, b, c; w) on the plane cut along [1, inf).

    Scalar or array ``w``; values on the cut raise a domain error.
    """
    if c <= 0 and c == round(c):
        raise ValueError(f"gauss_2f1: c = {c} is a nonpositive integer")
    warr = np.asarray(w, dtype=complex)
    on_cut = (warr.imag == 0) & (warr.real >= 1.0)
    if np.any(on_cut):
        raise ValueError("gauss_2f1: argument on the branch cut [1, inf)")
    out = _hyp2f1(a, b, c, warr)
    if not np.all(np.isfinite(out)):
        raise ArithmeticError("gauss_2f1: evaluation failed to converge")
    if np.isscalar(w) or warr.ndim == 0:
        return complex(out)
    return out


def c_alpha(alpha: float) -> float:
    """Normalization of the passage density; equals -2*pi^2 at alpha = 2."""
    if alpha <= 1:
        raise ValueError("c_alpha requires alpha > 1")
    num = -2.0 * math.pi ** 1.5 * real_gamma((alpha - 1) / 2) * real_gamma(
        1.5 * alpha - 1
    )
    return num / (real_gamma(alpha / 2) ** 2 * real_gamma(alpha))


def c_hat_is_degenerate(alpha: float) -> bool:
    return integer_alpha_order(alpha) is not None


def c_hat(alpha: float) -> float:
    """Normalization of the two-contact observable; 0 at integer alpha.

    The sine factors vanish at integer alpha faster than the Gamma pole grows,
    so the limit is exactly 0 there; that degenerate value is returned
    directly (callers use the dedicated integer-order evaluation instead of
    dividing by it).
    """
    if alpha <= 1:
        raise ValueError("c_hat requires alpha > 1")
    if c_hat_is_degenerate(alpha):
        return 0.0
    val = (
        4.0
        * math.sin(math.pi * alpha / 2) ** 2
        * math.sin(math.pi * alpha)
        * real_gamma(1 - alpha / 2)
        * real_gamma(1.5 * alpha - 1)
        / real_gamma(alpha)
    )
    return float(val)


def c_star(a: float) -> float:
    """Reciprocal mass of sin^(4a) on (0, pi), times 2; 4/pi at a = 1/2."""
    if a <= 0:
        raise ValueError("c_star requires a > 0")
    return 2.0 * real_gamma(1 + 2 * a) / (math.sqrt(math.pi) * real_gamma(0.5 + 2 * a))


def c_tilde(a: float, rho: float) -> float:
    """Constant in the boundary contact law for a weighted force point."""
    kappa = 2.0 / a
    if rho <= max(-2.0, kappa / 2 - 4.0):
        raise ValueError("c_tilde requires rho > max(-2, kappa/2 - 4)")
    return real_gamma(6 * a + a * rho) / (
        2 * a * real_gamma(2 * a) * real_gamma(4 * a + a * rho)
    )


def h_n(n: int) -> float:
    """Real weight replacing 1/c_hat at integer exponent order n >= 2."""
    if n < 2:
        raise ValueError("h_n requires n >= 2")
    core = real_gamma(n / 2) * real_gamma(n) / real_gamma(1.5 * n - 1)
    if n % 2 == 0:
        val = -((1j) ** n) * core / (2 * math.pi ** 3)
    else:
        val = -((1j) ** (n + 1)) * core / (4 * math.pi ** 2)
    assert abs(val.imag) < 1e-15 * max(1.0, abs(val.real))
    return float(val.real)


def constants(params: SLEParams) -> dict:
    """All normalization constants for the given parameter set.

    c_hat comes with a degeneracy flag (it vanishes at integer alpha); h_n is
    included only when alpha sits at an integer order.
    """
    alpha = params.alpha
    out = {
        "c_alpha": c_alpha(alpha),
        "c_hat": c_hat(alpha),
        "c_hat_degenerate": c_hat_is_degenerate(alpha),
        "c_star": c_star(params.a),
    }
    if params.rho is not None:
        out["c_tilde"] = c_tilde(params.a, params.rho)
    order = integer_alpha_order(alpha)
    if order is not None:
        out["h_n"] = h_n(order)
    return out
