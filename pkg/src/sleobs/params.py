"""Parameter bundle shared by every observable and simulator in the package.

All formulas in this package are written in the capacity normalization in
which the half-plane hull satisfies hcap(K_t) = a t with a = 2/kappa and the
chordal driving function is a standard Brownian motion (variance t).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = ["SLEParams", "INTEGER_ALPHA_TOL", "integer_alpha_order"]

# |alpha - n| below this is treated as exactly the integer-exponent case.
INTEGER_ALPHA_TOL = 1e-6


@dataclass(frozen=True)
class SLEParams:
    """SLE parameters and the derived exponents used throughout.

    Parameters
    ----------
    kappa : float
        Diffusivity, 0 < kappa < 8.  The closed-form observables additionally
        require kappa <= 4 (equivalently alpha >= 2); simulation does not.
    rho : float, optional
        Force-point weight for one-sided conditioned processes.  The weighted
        two-point observables in this package correspond to rho = 2.

    Attributes
    ----------
    a : float
        Loewner speed 2/kappa.
    alpha : float
        Integrand exponent 8/kappa = 4a.
    beta : float
        Boundary exponent 4a - 1.
    d : float
        Curve dimension 1 + kappa/8.
    r : float
        Drift ratio rho/kappa.  Raises if ``rho`` was not supplied.
    """

    kappa: float
    rho: float | None = None

    def __post_init__(self) -> None:
        if not (0.0 < self.kappa < 8.0):
            raise ValueError(f"kappa must lie in (0, 8), got {self.kappa}")
        if self.rho is not None:
            # domain of the one-sided conditioned process used here
            if self.rho <= max(-2.0, self.kappa / 2.0 - 4.0):
                raise ValueError(
                    f"rho={self.rho} outside (max(-2, kappa/2-4), inf) "
                    f"for kappa={self.kappa}"
                )

    @property
    def a(self) -> float:
        return 2.0 / self.kappa

    @property
    def alpha(self) -> float:
        return 8.0 / self.kappa

    @property
    def beta(self) -> float:
        return 4.0 * self.a - 1.0

    @property
    def d(self) -> float:
        return 1.0 + self.kappa / 8.0

    @property
    def r(self) -> float:
        if self.rho is None:
            raise ValueError("r requires rho; construct SLEParams with rho set")
        return self.rho / self.kappa

    def require_observable(self) -> None:
        """Raise unless the closed-form observables apply (alpha >= 2)."""
        if self.alpha < 2.0 - 1e-12:
            raise ValueError(
                f"observables require kappa <= 4 (alpha >= 2); got "
                f"kappa={self.kappa} (alpha={self.alpha:.6g})"
            )

    @property
    def integer_alpha(self) -> int | None:
        """The integer n with |alpha - n| <= tolerance, if any."""
        return integer_alpha_order(self.alpha)


def integer_alpha_order(alpha: float, tol: float = INTEGER_ALPHA_TOL) -> int | None:
    """Return n if alpha is within ``tol`` of the integer n >= 2, else None."""
    n = round(alpha)
    if n >= 2 and abs(alpha - n) <= tol:
        return int(n)
    return None
