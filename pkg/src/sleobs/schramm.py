"""Left-passage observables for a two-curve system grown from the real line.

The probability that a point lies to the left of the curve started at 0 (with
its partner anchored at xi > 0) is a normalized tail integral of a screening
density M(z, xi).  This module evaluates M by contour quadrature, integrates
it to the passage probability, provides the kappa=4 closed form, the fused
(xi -> 0) limit, the left/middle/right decomposition for two seeds, and
finite-difference residuals of the pair of second-order PDEs the observable
must satisfy.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np

from .contour import Factor, integrate_contour, polyline
from .params import SLEParams
from .quadrature import integrate_interval, tanh_sinh
from .special import c_alpha, gauss_2f1, principal_pow, real_gamma

__all__ = [
    "PassageSplit",
    "PDEResidual",
    "schramm_integrand",
    "schramm_probability",
    "schramm_kappa4",
    "passage_split",
    "fused_schramm",
    "pde_residual_schramm",
]

# xi below this fraction of |z| is treated as fully fused
_FUSED_XI_CUTOFF = 1e-6


@dataclass(frozen=True)
class PassageSplit:
    """Raw probabilities that a point is left of, between, or right of the
    two curves.  Values are unclamped; they sum to 1 by construction."""

    left: float
    middle: float
    right: float


@dataclass(frozen=True)
class PDEResidual:
    """Finite-difference residuals of the two passage PDEs at one point."""

    residual_1: float
    residual_2: float
    step: float


def _check_point(z: complex, xi: float) -> None:
    if z.imag <= 0.0:
        raise ValueError(f"z must lie in the open upper half-plane, got {z}")
    if xi <= 0.0:
        raise ValueError(f"xi must be positive, got {xi}")


# ---------------------------------------------------------------------------
# the contour integral J and the integrand M


def _j_factors(z: complex, xi: float, alpha: float) -> list[Factor]:
    return [
        Factor(z, alpha),
        Factor(z.conjugate(), alpha - 2.0),
        Factor(0.0, -0.5 * alpha),
        Factor(xi, -0.5 * alpha),
    ]


def _crossing_abscissa(x, y: float, xi: float):
    # Real-axis crossing strictly right of xi; any such crossing gives the
    # same value by contour deformation.
    return (
        np.maximum(x, xi)
        + y
        + 0.5 * np.maximum(0.0, xi - x)
        + 0.5 * np.maximum(0.0, -x)
    )


def _box_depth(x, y: float, xi: float):
    return y + xi + np.maximum(0.0, -x)


def _box_nodes(z: complex, xi: float) -> list[complex]:
    """Axis-aligned contour from conj(z) to z crossing the real axis right
    of xi.

    Dipping to depth ~max(|Re z|, xi) keeps each leg's length comparable to
    its clearance from the branch points at 0 and xi, so no leg sees a
    narrow interior feature; a direct two-leg crossing degrades badly once
    Re z sits far left of the seeds.
    """
    x, y = z.real, z.imag
    c = float(_crossing_abscissa(x, y, xi))
    d = float(_box_depth(x, y, xi))
    return [
        z.conjugate(),
        complex(x, -d),
        complex(c, -d),
        complex(c, d),
        complex(x, d),
        z,
    ]


def _j_reference(
    z: complex,
    xi: float,
    alpha: float,
    crossings: Sequence[complex] | None = None,
    rel_tol: float = 1e-11,
) -> complex:
    """J(z, xi) by the general contour engine along conj(z) -> ... -> z."""
    if crossings is None:
        nodes = _box_nodes(z, xi)
    else:
        nodes = [z.conjugate()]
        nodes.extend(complex(c) for c in crossings)
        nodes.append(z)
    scale = max(abs(z - z.conjugate()), 1.0) ** (alpha - 1.0)
    res, _ = integrate_contour(
        _j_factors(z, xi, alpha),
        polyline(nodes),
        rel_tol=rel_tol,
        abs_tol=1e-14 * scale,
    )
    return res.value


def schramm_integrand(z: complex, xi: float, params: SLEParams) -> complex:
    """The screening density M(z, xi) whose real part integrates to the
    passage probability."""
    z = complex(z)
    _check_point(z, xi)
    params.require_observable()
    alpha = params.alpha
    y = z.imag
    zb = z.conjugate()
    pref = (
        y ** (alpha - 2.0)
        * principal_pow(z, -0.5 * alpha)
        * principal_pow(z - xi, -0.5 * alpha)
        * principal_pow(zb, 1.0 - 0.5 * alpha)
        * principal_pow(zb - xi, 1.0 - 0.5 * alpha)
    )
    return pref * _j_reference(z, xi, alpha)


@lru_cache(maxsize=32)
def _ts_rule(level: int, w_max: float):
    # interior tanh-sinh nodes (s, s-1, weights) at spacing 0.5/2^level
    h = 0.5 / 2**level
    k_max = int(math.floor(w_max / h))
    w = np.arange(-k_max, k_max + 1) * h
    x = 0.5 * math.pi * np.sinh(w)
    q = np.exp(-2.0 * np.abs(x))
    keep = q > 0.0
    w, x, q = w[keep], x[keep], q[keep]
    qp1 = 1.0 + q
    s = np.where(x >= 0.0, 1.0 / qp1, q / qp1)
    sm1 = np.where(x >= 0.0, -q / qp1, -1.0 / qp1)
    wts = h * math.pi * np.cosh(w) * q / qp1**2
    for arr in (s, sm1, wts):
        arr.setflags(write=False)
    return s, sm1, wts


def _log_off(off: np.ndarray) -> np.ndarray:
    return np.log(np.abs(off)) + 1j * np.angle(off)


def _m_batch_fixed(
    xp: np.ndarray, y: float, xi: float, alpha: float, level: int
) -> np.ndarray:
    """M(x'+iy, xi) for an array of abscissas at one fixed quadrature level.

    Works entirely in log space so that far-tail abscissas (up to ~1e280)
    underflow to exactly zero instead of overflowing.  The contour is the
    axis-aligned box of _box_nodes; along it no u - root offset ever meets
    the negative real axis, so the principal argument of each offset is
    already the continuous branch and no correction terms are needed.  The
    two vertical legs through conj(z) and z use exact component forms for
    their endpoint-root offsets to avoid cancellation.
    """
    s, sm1, wts = _ts_rule(level, 3.75)
    sc = s[None, :]
    smc = sm1[None, :]
    z = xp + 1j * y
    zb = xp - 1j * y
    # run = c - xp and rise = d - y computed without subtraction so they
    # survive xp large enough that xp + y rounds back to xp
    run = y + 1.5 * np.maximum(0.0, xi - xp) + 0.5 * np.maximum(0.0, -xp)
    rise = xi + np.maximum(0.0, -xp)
    d = y + rise
    c = xp + run
    ea = alpha
    eb = alpha - 2.0
    ec = -0.5 * alpha
    ep = 1.0 - 0.5 * alpha
    pref = (
        eb * math.log(y)
        + ec * (np.log(z) + np.log(z - xi))
        + ep * (np.log(zb) + np.log(zb - xi))
    )[:, None]
    xc = xp[:, None]
    cc = c[:, None]
    dc = d[:, None]
    run_c = run[:, None]
    rise_c = rise[:, None]
    half_pi = 0.5 * math.pi

    # leg 1: conj(z) -> (x, -d); off_zb = -i rise s and off_z = -i (t + y)
    # exactly, with t = y + rise s
    t = y + rise_c * sc
    u = xc - 1j * t
    log1 = (
        ea * (np.log(t + y) - 1j * half_pi)
        + eb * (np.log(rise_c) + np.log(sc) - 1j * half_pi)
        + ec * _log_off(u)
        + ec * _log_off(u - xi)
    )
    out = (-1j * rise) * (np.exp(pref + log1) @ wts)

    # leg 2: (x, -d) -> (c, -d)
    re2 = xc + run_c * sc
    log2 = (
        ea * _log_off(run_c * sc - 1j * (dc + y))
        + eb * _log_off(run_c * sc - 1j * rise_c)
        + ec * _log_off(re2 - 1j * dc)
        + ec * _log_off((re2 - xi) - 1j * dc)
    )
    out = out + run * (np.exp(pref + log2) @ wts)

    # leg 3: (c, -d) -> (c, d), crossing the real axis right of xi
    im3 = dc * (2.0 * sc - 1.0)
    cxi = (xp - xi) + run
    log3 = (
        ea * _log_off(run_c + 1j * (im3 - y))
        + eb * _log_off(run_c + 1j * (im3 + y))
        + ec * _log_off(cc + 1j * im3)
        + ec * _log_off(cxi[:, None] + 1j * im3)
    )
    out = out + 2j * d * (np.exp(pref + log3) @ wts)

    # leg 4: (c, d) -> (x, d)
    re4 = cc + (xc - cc) * sc
    log4 = (
        ea * _log_off(run_c * (-smc) + 1j * rise_c)
        + eb * _log_off(run_c * (-smc) + 1j * (dc + y))
        + ec * _log_off(re4 + 1j * dc)
        + ec * _log_off((re4 - xi) + 1j * dc)
    )
    out = out - run * (np.exp(pref + log4) @ wts)

    # leg 5: (x, d) -> z; off_z = i rise (1-s) exactly, t5 = y + rise (1-s)
    t5 = y + rise_c * (-smc)
    u5 = xc + 1j * t5
    log5 = (
        ea * (np.log(rise_c) + np.log(-smc) + 1j * half_pi)
        + eb * (np.log(t5 + y) + 1j * half_pi)
        + ec * _log_off(u5)
        + ec * _log_off(u5 - xi)
    )
    out = out + (-1j * rise) * (np.exp(pref + log5) @ wts)
    return out


def _m_batch(
    xp,
    y: float,
    xi: float,
    alpha: float,
    tol: float = 5e-11,
    max_level: int = 8,
) -> np.ndarray:
    """Vectorized M over abscissas, refining the fixed rule until the
    elementwise change is below ``tol`` relative."""
    xp = np.asarray(xp, dtype=float)
    prev = _m_batch_fixed(xp, y, xi, alpha, 3)
    for level in range(4, max_level + 1):
        cur = _m_batch_fixed(xp, y, xi, alpha, level)
        gap = np.abs(cur - prev)
        floor = 1e-13 * (np.max(np.abs(cur)) if cur.size else 0.0) + 1e-300
        if np.all(gap <= tol * np.abs(cur) + floor):
            return cur
        prev = cur
    return prev


def schramm_probability(
    z: complex, xi: float, params: SLEParams, *, tol: float = 1e-9
) -> float:
    """Probability that z lies to the left of the curve seeded at 0.

    Computed as the normalized tail integral of Re M along the horizontal
    ray through z, with the rational substitution x' = x + y s/(1-s).
    Returns the raw value; clamping to [0, 1] is left to reporting layers.
    For xi below 1e-6 |z| the coalesced-seed limit is returned instead,
    since the integrand factors merge and quadrature degrades.
    """
    z = complex(z)
    _check_point(z, xi)
    params.require_observable()
    if xi < _FUSED_XI_CUTOFF * abs(z):
        return fused_schramm(z, params)
    alpha = params.alpha
    # scale invariance: normalize to |z| = 1 so the substituted abscissas
    # stay far from overflow at every tail node
    lam = abs(z)
    z = z / lam
    xi = xi / lam
    x, y = z.real, z.imag
    ca = c_alpha(alpha)
    abs_tol = 0.25 * tol * abs(ca)

    def gre(xp):
        return _m_batch(np.asarray(xp, dtype=float), y, xi, alpha).real

    # split at the seed abscissas: Re M varies on the scale of Im z near 0
    # and xi, and those features are only resolvable when they sit at a
    # segment endpoint
    total = 0.0
    lo = x
    for cut in (0.0, xi):
        if cut > lo:
            seg = integrate_interval(gre, lo, cut, rel_tol=1e-10, abs_tol=abs_tol)
            total += seg.value.real
            lo = cut

    # tail beyond max(x, xi) via x' = lo + Y s/(1-s); the substituted
    # integrand has endpoint exponent alpha - 2 >= 0 at s = 1, and w_max = 4
    # keeps s/(1-s) <= ~2e37 so the abscissas stay far from overflow
    y_sc = y + xi + max(0.0, lo)

    def gtail(s, sm1):
        xp = lo + y_sc * (s / (-sm1))
        return _m_batch(xp, y, xi, alpha).real * (y_sc / sm1**2)

    res = tanh_sinh(gtail, rel_tol=1e-10, abs_tol=abs_tol, w_max=4.0)
    total += res.value.real
    return float(total) / ca


def schramm_kappa4(z: complex, xi: float) -> float:
    """Closed form of the passage probability at kappa = 4."""
    z = complex(z)
    _check_point(z, xi)
    x, y = z.real, z.imag
    a1 = math.atan(x / y)
    a2 = math.atan((x - xi) / y)
    return (
        -2.0 * a1 * (math.pi * xi - 2.0 * xi * a2 + 2.0 * y)
        + math.pi**2 * xi
        + (4.0 * y - 2.0 * math.pi * xi) * a2
    ) / (4.0 * math.pi**2 * xi)


def passage_split(
    z: complex, xi1: float, xi2: float, params: SLEParams
) -> PassageSplit:
    """Left/middle/right decomposition for curves seeded at xi1 < xi2."""
    if not xi1 < xi2:
        raise ValueError(f"need xi1 < xi2, got {xi1} >= {xi2}")
    z = complex(z)
    gap = xi2 - xi1
    left = schramm_probability(z - xi1, gap, params)
    right = schramm_probability(-z.conjugate() + xi2, gap, params)
    return PassageSplit(left, 1.0 - left - right, right)


# ---------------------------------------------------------------------------
# fused (coalesced-seed) limit

_TAIL_CUT = 1e8


def fused_schramm(z: complex, params: SLEParams) -> float:
    """Passage probability in the limit of coalesced seeds.

    Depends on z only through x/y.  The density is integrated over
    t = sinh(lambda) out to t = 1e8; the remaining pure power tail
    (density ~ t^-alpha) is added in closed form from its measured
    coefficient, which is accurate to O(t^-2) relative.
    """
    z = complex(z)
    if z.imag <= 0.0:
        raise ValueError(f"z must lie in the open upper half-plane, got {z}")
    params.require_observable()
    alpha = params.alpha
    ratio = z.real / z.imag
    pref = (
        real_gamma(0.5 * alpha)
        * real_gamma(alpha)
        / (2.0 ** (2.0 - alpha) * math.pi * real_gamma(1.5 * alpha - 1.0))
    )
    c2 = (
        2.0
        * real_gamma(1.0 + 0.5 * alpha)
        * real_gamma(0.5 * alpha)
        / (real_gamma(0.5 + 0.5 * alpha) * real_gamma(0.5 * alpha - 0.5))
    )

    def density(t):
        t = np.asarray(t, dtype=float)
        w = -t * t
        f1 = np.real(gauss_2f1(0.5 + 0.5 * alpha, 1.0 - 0.5 * alpha, 0.5, w))
        f2 = np.real(gauss_2f1(1.0 + 0.5 * alpha, 1.5 - 0.5 * alpha, 1.5, w))
        return (1.0 + t * t) ** (1.0 - alpha) * (f1 - c2 * t * f2)

    total = 0.0
    if ratio >= _TAIL_CUT:
        s_inf = float(density(np.array([ratio]))[0]) * ratio**alpha
        total = s_inf * ratio ** (1.0 - alpha) / (alpha - 1.0)
    else:
        lo = max(ratio, -_TAIL_CUT)
        res = integrate_interval(
            lambda lam: density(np.sinh(lam)) * np.cosh(lam),
            math.asinh(lo),
            math.asinh(_TAIL_CUT),
            rel_tol=1e-12,
            abs_tol=1e-14,
        )
        total += res.value.real
        total += float(density(np.array([_TAIL_CUT]))[0]) * _TAIL_CUT / (
            alpha - 1.0
        )
        if ratio < -_TAIL_CUT:
            s_inf = float(density(np.array([-_TAIL_CUT]))[0]) * _TAIL_CUT**alpha
            total += (
                s_inf
                * (_TAIL_CUT ** (1.0 - alpha) - abs(ratio) ** (1.0 - alpha))
                / (alpha - 1.0)
            )
    return pref * total


# ---------------------------------------------------------------------------
# PDE residuals


def _apply_pde_operator(
    f: Callable[[float, float, float, float], float],
    x: float,
    y: float,
    xi1: float,
    xi2: float,
    alpha: float,
    step: float,
) -> tuple[float, float]:
    """Central finite differences of both passage operators applied to f.

    The nine stencil evaluations are shared between the two operators.
    Applied to a constant, every difference cancels and both residuals are
    exactly zero.
    """
    h = step
    f0 = f(x, y, xi1, xi2)
    dx = (f(x + h, y, xi1, xi2) - f(x - h, y, xi1, xi2)) / (2.0 * h)
    dy = (f(x, y + h, xi1, xi2) - f(x, y - h, xi1, xi2)) / (2.0 * h)
    f1p = f(x, y, xi1 + h, xi2)
    f1m = f(x, y, xi1 - h, xi2)
    f2p = f(x, y, xi1, xi2 + h)
    f2m = f(x, y, xi1, xi2 - h)
    d1 = (f1p - f1m) / (2.0 * h)
    d2 = (f2p - f2m) / (2.0 * h)
    dd = {
        1: (f1p - 2.0 * f0 + f1m) / h**2,
        2: (f2p - 2.0 * f0 + f2m) / h**2,
    }
    out = []
    for j, xij in ((1, xi1), (2, xi2)):
        den = y**2 + (x - xij) ** 2
        out.append(
            (4.0 / alpha) * dd[j]
            + 2.0 * (x - xij) / den * dx
            - 2.0 * y / den * dy
            + 2.0 / (xi1 - xi2) * d1
            + 2.0 / (xi2 - xi1) * d2
        )
    return out[0], out[1]


def pde_residual_schramm(
    z: complex,
    xi1: float,
    xi2: float,
    params: SLEParams,
    step: float,
) -> PDEResidual:
    """Finite-difference residuals of the two passage PDEs at (z, xi1, xi2).

    At kappa = 4 the closed form backs the stencil (machine-precision
    evaluations, so the O(step^2) truncation is visible); otherwise the
    quadrature evaluator runs at tightened tolerance.
    """
    z = complex(z)
    params.require_observable()
    if step <= 0.0:
        raise ValueError(f"step must be positive, got {step}")
    if z.imag - step <= 0.0:
        raise ValueError("stencil leaves the upper half-plane")
    if xi1 + step >= xi2 - step:
        raise ValueError("stencil crosses the seed ordering xi1 < xi2")

    if params.integer_alpha == 2:

        def evaluator(x, y, x1, x2):
            return schramm_kappa4(complex(x - x1, y), x2 - x1)

    else:

        def evaluator(x, y, x1, x2):
            return schramm_probability(
                complex(x - x1, y), x2 - x1, params, tol=1e-12
            )

    r1, r2 = _apply_pde_operator(
        evaluator, z.real, z.imag, xi1, xi2, params.alpha, step
    )
    return PDEResidual(r1, r2, step)
