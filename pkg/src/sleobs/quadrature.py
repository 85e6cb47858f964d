"""Quadrature engines for complex-valued integrands on real parameter ranges.

Two complementary rules back every integral in this package:

* an adaptive Gauss-Kronrod (G7/K15) bisection scheme for integrands that are
  smooth in the interior of the range, and
* a tanh-sinh (double-exponential) rule for ranges whose endpoints carry
  integrable algebraic singularities u^e with e > -1.

Both rules evaluate the integrand on node arrays (vectorized) and record the
number of evaluations in the result.  All nodes are strictly interior to the
range, so integrands may be singular (or lie on a branch cut) exactly at an
endpoint without being evaluated there.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

__all__ = [
    "QuadResult",
    "QuadratureError",
    "gauss_kronrod",
    "integrate_interval",
    "tanh_sinh",
    "integrate_segment",
]

DEFAULT_REL_TOL = 1e-10
DEFAULT_ABS_TOL = 1e-12


class QuadratureError(RuntimeError):
    """Raised when a quadrature rule cannot reach the requested tolerance."""


@dataclass(frozen=True)
class QuadResult:
    """Outcome of one integral: value, error estimate, evaluation count."""

    value: complex
    abs_error: float
    evaluations: int

    def __add__(self, other: "QuadResult") -> "QuadResult":
        return QuadResult(
            self.value + other.value,
            self.abs_error + other.abs_error,
            self.evaluations + other.evaluations,
        )

    def scaled(self, factor: complex) -> "QuadResult":
        return QuadResult(
            factor * self.value, abs(factor) * self.abs_error, self.evaluations
        )


# G7/K15 nodes and weights on [-1, 1] (positive half; rule is symmetric).
_KRONROD_NODES = np.array(
    [
        0.991455371120813,
        0.949107912342759,
        0.864864423359769,
        0.741531185599394,
        0.586087235467691,
        0.405845151377397,
        0.207784955007898,
        0.0,
    ]
)
_KRONROD_WEIGHTS = np.array(
    [
        0.022935322010529,
        0.063092092629979,
        0.104790010322250,
        0.140653259715525,
        0.169004726639267,
        0.190350578064785,
        0.204432940075298,
        0.209482141084728,
    ]
)
# Gauss-7 weights attach to Kronrod nodes with odd index (1, 3, 5, 7).
_GAUSS_WEIGHTS = np.array(
    [
        0.129484966168870,
        0.279705391489277,
        0.381830050505119,
        0.417959183673469,
    ]
)

# Full 15-point node/weight tables in ascending order.
K15_NODES = np.concatenate([-_KRONROD_NODES[:-1], _KRONROD_NODES[::-1]])
K15_WEIGHTS = np.concatenate([_KRONROD_WEIGHTS[:-1], _KRONROD_WEIGHTS[::-1]])
_G7_MASK = np.zeros(15, dtype=bool)
_G7_MASK[1:14:2] = True
_G7_WEIGHTS_FULL = np.concatenate([_GAUSS_WEIGHTS[:-1], _GAUSS_WEIGHTS[::-1]])


def gauss_kronrod(
    f: Callable[[np.ndarray], np.ndarray], lo: float, hi: float
) -> tuple[complex, float, int]:
    """One G7/K15 panel on [lo, hi]; returns (K15 value, error estimate, 15)."""
    mid = 0.5 * (lo + hi)
    half = 0.5 * (hi - lo)
    x = mid + half * K15_NODES
    y = np.asarray(f(x))
    k15 = half * np.sum(K15_WEIGHTS * y)
    g7 = half * np.sum(_G7_WEIGHTS_FULL * y[_G7_MASK])
    # QUADPACK-style rescaled error estimate
    diff = abs(k15 - g7)
    resk = abs(half) * float(np.sum(K15_WEIGHTS * np.abs(y)))
    mean = k15 / (hi - lo) if hi != lo else 0.0
    resasc = abs(half) * float(np.sum(K15_WEIGHTS * np.abs(y - mean)))
    if not (math.isfinite(diff) and math.isfinite(resasc)):
        return complex(k15), float("inf"), 15
    if resasc != 0.0 and diff != 0.0:
        err = resasc * min(1.0, (200.0 * diff / resasc) ** 1.5)
    else:
        err = diff
    err = max(err, abs(resk) * 1e-16 * 50.0)
    return complex(k15), float(err), 15


def integrate_interval(
    f: Callable[[np.ndarray], np.ndarray],
    lo: float,
    hi: float,
    rel_tol: float = DEFAULT_REL_TOL,
    abs_tol: float = DEFAULT_ABS_TOL,
    max_panels: int = 2000,
) -> QuadResult:
    """Adaptive G7/K15 bisection of a complex integrand over [lo, hi].

    ``f`` receives an ndarray of parameter values and returns the integrand
    values (complex ndarray of the same shape).
    """
    if lo == hi:
        return QuadResult(0.0j, 0.0, 0)
    val, err, n = gauss_kronrod(f, lo, hi)
    # heap of (-error, counter, lo, hi, value, error)
    heap = [(-err, 0, lo, hi, val, err)]
    total_val, total_err = val, err
    evals, counter, panels = n, 0, 1
    while True:
        target = max(abs_tol, rel_tol * abs(total_val))
        if total_err <= target or panels >= max_panels:
            break
        neg_err, _, a, b, v, e = heapq.heappop(heap)
        m = 0.5 * (a + b)
        v1, e1, n1 = gauss_kronrod(f, a, m)
        v2, e2, n2 = gauss_kronrod(f, m, b)
        evals += n1 + n2
        total_val += v1 + v2 - v
        total_err += e1 + e2 - e
        counter += 1
        heapq.heappush(heap, (-e1, counter, a, m, v1, e1))
        counter += 1
        heapq.heappush(heap, (-e2, counter, m, b, v2, e2))
        panels += 1
    target = max(abs_tol, rel_tol * abs(total_val))
    if total_err > 1e3 * max(target, abs_tol):
        raise QuadratureError(
            f"adaptive Gauss-Kronrod stalled: error {total_err:.3e} "
            f"after {panels} panels (target {target:.3e})"
        )
    return QuadResult(complex(total_val), float(total_err), evals)


def _tanh_sinh_nodes(h: float, w_max: float, odd_only: bool) -> np.ndarray:
    k_max = int(math.floor(w_max / h))
    if odd_only:
        k = np.arange(-k_max, k_max + 1)
        k = k[k % 2 != 0]
    else:
        k = np.arange(-k_max, k_max + 1)
    return k * h


def _tanh_sinh_level(
    f: Callable[[np.ndarray, np.ndarray], np.ndarray],
    h: float,
    w_max: float,
    odd_only: bool,
) -> tuple[complex, int]:
    """Weighted sum of f over one level's nodes, computed overflow-safely."""
    w = _tanh_sinh_nodes(h, w_max, odd_only)
    x = 0.5 * math.pi * np.sinh(w)
    # q = exp(-2|x|) stays in [0, 1]; every node quantity is a ratio of it, so
    # nothing overflows no matter how far out in w the node sits.
    q = np.exp(-2.0 * np.abs(x))
    keep = q > 0.0  # q underflow would alias the node onto an endpoint
    w, x, q = w[keep], x[keep], q[keep]
    qp1 = 1.0 + q
    s = np.where(x >= 0.0, 1.0 / qp1, q / qp1)
    sm1 = np.where(x >= 0.0, -q / qp1, -1.0 / qp1)
    dsdw = math.pi * np.cosh(w) * q / qp1**2
    vals = np.asarray(f(s, sm1)) * dsdw
    return complex(np.sum(vals)), len(w)


def tanh_sinh(
    f: Callable[[np.ndarray, np.ndarray], np.ndarray],
    rel_tol: float = DEFAULT_REL_TOL,
    abs_tol: float = DEFAULT_ABS_TOL,
    max_level: int = 10,
    w_max: float = 6.1,
) -> QuadResult:
    """Tanh-sinh rule for integral over s in (0, 1) with endpoint singularities.

    ``f(s, sm1)`` receives the node positions ``s`` and the exactly computed
    offsets ``sm1 = s - 1`` (so distances to both endpoints are available at
    full precision) and returns complex integrand values.  Admits algebraic
    endpoint behavior s^e and (1-s)^e with e > -1; the default tail window
    resolves exponents down to about -0.95 before truncation bites.
    """
    h = 0.5
    level_sum, evals = _tanh_sinh_level(f, h, w_max, odd_only=False)
    total = h * level_sum
    prev = None
    for level in range(1, max_level + 1):
        h *= 0.5
        level_sum, n = _tanh_sinh_level(f, h, w_max, odd_only=True)
        prev = total
        total = 0.5 * total + h * level_sum
        evals += n
        diff = abs(total - prev)
        if diff <= max(abs_tol, rel_tol * abs(total)) and level >= 3:
            return QuadResult(complex(total), float(diff), evals)
    diff = abs(total - prev) if prev is not None else float("nan")
    if not (diff <= 1e3 * max(abs_tol, rel_tol * abs(total), abs_tol)):
        raise QuadratureError(
            f"tanh-sinh did not converge: last correction {diff:.3e}"
        )
    return QuadResult(complex(total), float(diff), evals)


def integrate_segment(
    f: Callable[[np.ndarray], np.ndarray],
    start: complex,
    end: complex,
    rel_tol: float = DEFAULT_REL_TOL,
    abs_tol: float = DEFAULT_ABS_TOL,
    singular_endpoints: bool = False,
) -> QuadResult:
    """Integrate ``f(u) du`` along the straight segment from start to end.

    ``f`` receives complex position arrays.  ``singular_endpoints`` selects the
    tanh-sinh rule, which tolerates integrable algebraic endpoint
    singularities (exponent > -1); otherwise adaptive Gauss-Kronrod is used.
    Nodes are strictly interior, so ``f`` is never called at the endpoints.
    """
    p = complex(start)
    q = complex(end)
    span = q - p
    if span == 0:
        return QuadResult(0.0j, 0.0, 0)
    if singular_endpoints:
        res = tanh_sinh(
            lambda s, sm1: f(p + span * s),
            rel_tol=rel_tol,
            abs_tol=abs_tol / max(abs(span), 1e-300),
        )
    else:
        res = integrate_interval(
            lambda t: f(p + span * t),
            0.0,
            1.0,
            rel_tol=rel_tol,
            abs_tol=abs_tol / max(abs(span), 1e-300),
        )
    return res.scaled(span)
