"""Two-seed Green's function for the conditioned pair of interfaces.

The density is evaluated along two routes that check each other: a loop
contour in the physical variable (`pochhammer_I` / `green_G`) and an
angular representation on the wedge 0 < theta1 < theta2 < pi (`h_angles`).
Integer exponent orders, where the generic normalization degenerates, are
handled by explicit continuation coefficients (`h_integer`,
`continuation_coefficients`); the collided-seed limit (`fused_h`), the
two-interface symmetrization (`bichordal_green`), the one-curve baseline
(`chordal_green`) and finite-difference PDE residuals round out the API.
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass

import numpy as np

from .contour import ArcSeg, Factor, LineSeg, integrate_contour, polyline
from .params import INTEGER_ALPHA_TOL, SLEParams
from .quadrature import integrate_interval
from .schramm import PDEResidual, _apply_pde_operator
from .special import c_hat, h_n

__all__ = [
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

_LOOP_TOL = 1e-12
# outer edge of the near-integer band and the dual-route disagreement level
# that triggers a diagnostic inside it
_BLEND_BAND = 1e-3
_BLEND_WARN = 1e-4
# sign-seam handling at theta2 = pi/2
_SEAM_WINDOW = 1e-10
_SEAM_OFFSET = 1e-9
_SEAM_AGREE = 1e-7
# relative clearance below which the loop geometry is declared degenerate
_CLEARANCE = 1e-12
# terms kept in the endpoint series of the finite part
_SERIES_TAIL = 60


@dataclass(frozen=True)
class AngleArgs:
    """Wedge coordinates theta1 = arg(z - xi1), theta2 = arg(z - xi2).

    Only the open wedge 0 < theta1 < theta2 < pi is admitted; boundary
    values are reached through the dedicated limit operations.
    """

    theta1: float
    theta2: float

    def __post_init__(self) -> None:
        if not (0.0 < self.theta1 < self.theta2 < math.pi):
            raise ValueError(
                f"angles must satisfy 0 < theta1 < theta2 < pi, got "
                f"({self.theta1}, {self.theta2})"
            )


@dataclass(frozen=True)
class ContinuationData:
    """Leading coefficients of the integer-order expansion of the loop integral.

    For even order the pair (F1, F2) enters the limit value; for odd order
    only F1 is needed and F2 is None.
    """

    F1: complex
    F2: complex | None
    n: int


# ---------------------------------------------------------------------------
# loop geometry


def _loop_chain(
    base: complex, loops: list[tuple[complex, float, int]]
) -> list[LineSeg | ArcSeg]:
    segs: list[LineSeg | ArcSeg] = []
    base = complex(base)
    for center, radius, sign in loops:
        center = complex(center)
        gap = abs(base - center)
        if gap <= radius:
            raise ValueError("loop base point must lie outside every loop circle")
        d = (base - center) / gap
        entry = center + radius * d
        phi = math.atan2(d.imag, d.real)
        segs += [
            LineSeg(base, entry),
            ArcSeg(center, radius, phi, phi + sign * 2.0 * math.pi),
            LineSeg(entry, base),
        ]
    return segs


def pochhammer_loop(
    base: complex,
    circle_a: tuple[complex, float],
    circle_b: tuple[complex, float],
) -> list[LineSeg | ArcSeg]:
    """Double-commutator chain from base: around a, around b, then both reversed.

    Each loop is a full circle reached by a straight spoke from the base
    point; traversing the whole chain returns every branch to its starting
    sheet.
    """
    ca, ra = circle_a
    cb, rb = circle_b
    return _loop_chain(
        base, [(ca, ra, +1), (cb, rb, +1), (ca, ra, -1), (cb, rb, -1)]
    )


# ---------------------------------------------------------------------------
# physical-variable route


def pochhammer_I(
    z: complex,
    xi1: float,
    xi2: float,
    params: SLEParams,
    *,
    radius_scale: float = 1.0,
) -> complex:
    """Loop integral from the midpoint of z and xi2 around those two points.

    The integrand carries exponents alpha-1 at z and its conjugate and
    -alpha/2 at the seeds; principal branches are fixed at the base point
    and continued along the chain.  ``radius_scale`` shrinks the loop
    circles (homotopy invariance makes the value independent of it).
    """
    z = complex(z)
    alpha = params.alpha
    if z.imag <= 0.0:
        raise ValueError(f"z must lie in the upper half-plane, got {z}")
    if not xi1 < xi2:
        raise ValueError(f"seeds must be ordered xi1 < xi2, got {xi1}, {xi2}")
    if abs(alpha - round(alpha)) <= INTEGER_ALPHA_TOL:
        raise ValueError(
            f"alpha={alpha} is within {INTEGER_ALPHA_TOL} of an integer; "
            "use h_integer"
        )
    base = (z + xi2) / 2.0
    r = radius_scale * min(
        abs(base - z), abs(base - xi2), z.imag, (xi2 - xi1) / 2.0
    ) / 4.0
    scale = max(1.0, abs(z), abs(xi1), abs(xi2))
    if r <= _CLEARANCE * scale:
        raise ValueError("loop clearance degenerate: z too close to xi2 or seeds collided")
    factors = [
        Factor(z, alpha - 1.0),
        Factor(z.conjugate(), alpha - 1.0),
        Factor(xi1, -alpha / 2.0),
        Factor(xi2, -alpha / 2.0, scale=-1.0),
    ]
    path = pochhammer_loop(base, (z, r), (xi2, r))
    res, _ = integrate_contour(factors, path, rel_tol=_LOOP_TOL)
    return res.value


def _direct_green(z: complex, xi1: float, xi2: float, alpha: float) -> float:
    y = z.imag
    val = pochhammer_I(z, xi1, xi2, SLEParams(8.0 / alpha))
    pref = (
        y ** (alpha + 1.0 / alpha - 2.0)
        * abs(z - xi1) ** (1.0 - alpha)
        * abs(z - xi2) ** (1.0 - alpha)
        / c_hat(alpha)
    )
    return pref * (cmath.exp(-1j * math.pi * alpha) * val).imag


def _wedge_angles(z: complex, xi1: float, xi2: float) -> AngleArgs:
    return AngleArgs(cmath.phase(z - xi1), cmath.phase(z - xi2))


def _angular_green(z: complex, xi1: float, xi2: float, alpha: float, n: int) -> float:
    # scale factor keeps the exact exponent; only the angular part is snapped
    return z.imag ** (1.0 / alpha - 1.0) * h_integer(_wedge_angles(z, xi1, xi2), n)


def green_G(z: complex, xi1: float, xi2: float, params: SLEParams) -> float:
    """Two-seed Green's function at z for seeds xi1 < xi2.

    Non-integer exponent orders use the loop route directly; integer orders
    are delegated to the continuation coefficients through the angular
    factorization.  In the narrow band around an integer both routes are
    blended linearly and a disagreement beyond the expected conditioning
    raises a RuntimeWarning.
    """
    z = complex(z)
    params.require_observable()
    if z.imag <= 0.0:
        raise ValueError(f"z must lie in the upper half-plane, got {z}")
    if not xi1 < xi2:
        raise ValueError(f"seeds must be ordered xi1 < xi2, got {xi1}, {xi2}")
    alpha = params.alpha
    n = params.integer_alpha
    if n is not None:
        return _angular_green(z, xi1, xi2, alpha, n)
    nearest = round(alpha)
    dist = abs(alpha - nearest)
    if nearest >= 2 and dist < _BLEND_BAND:
        near = _angular_green(z, xi1, xi2, alpha, nearest)
        away = _direct_green(z, xi1, xi2, alpha)
        if abs(near - away) > _BLEND_WARN:
            warnings.warn(
                f"near-integer routes disagree by {abs(near - away):.2e} "
                f"at alpha={alpha}",
                RuntimeWarning,
                stacklevel=2,
            )
        w = (dist - INTEGER_ALPHA_TOL) / (_BLEND_BAND - INTEGER_ALPHA_TOL)
        return (1.0 - w) * near + w * away
    return _direct_green(z, xi1, xi2, alpha)


# ---------------------------------------------------------------------------
# angular route


def _wedge_arguments(t1: float, t2: float) -> tuple[complex, complex]:
    w1 = 1.0 - cmath.exp(-2j * t2)
    w2 = (math.sin(t2) / math.sin(t1)) * cmath.exp(-1j * (t2 - t1))
    return w1, w2


def _loop_F(t1: float, t2: float, alpha: float) -> complex:
    # double commutator around 0 and 1 with both wedge arguments exterior
    w1, w2 = _wedge_arguments(t1, t2)
    base = 0.5
    r0 = min(base, abs(w1), abs(w2)) / 4.0
    r1 = min(1.0 - base, abs(w1 - 1.0), abs(w2 - 1.0)) / 4.0
    factors = [
        Factor(0.0, alpha - 1.0),
        Factor(w1, alpha - 1.0),
        Factor(w2, -alpha / 2.0),
        Factor(1.0, -alpha / 2.0, scale=-1.0),
    ]
    res, _ = integrate_contour(
        factors, pochhammer_loop(base, (0.0, r0), (1.0, r1)), rel_tol=_LOOP_TOL
    )
    return res.value


def _h_angles_at(t1: float, t2: float, alpha: float) -> float:
    sigma = cmath.exp(-1j * math.pi * alpha) if t2 >= math.pi / 2 else cmath.exp(
        1j * math.pi * alpha
    )
    rotation = cmath.exp((alpha - 1.0) * cmath.log(-cmath.exp(1j * t2)))
    val = (sigma * rotation * _loop_F(t1, t2, alpha)).imag
    return math.sin(t1) ** (alpha - 1.0) / c_hat(alpha) * val


def h_angles(theta: AngleArgs, params: SLEParams) -> float:
    """Angular form of the Green's function on the open wedge.

    Requires a non-integer exponent order; the representation has a sign
    seam at theta2 = pi/2, where the value is taken as the average of the
    two one-sided evaluations after asserting they agree.
    """
    params.require_observable()
    alpha = params.alpha
    if abs(alpha - round(alpha)) <= INTEGER_ALPHA_TOL:
        raise ValueError(
            f"alpha={alpha} is within {INTEGER_ALPHA_TOL} of an integer; "
            "use h_integer"
        )
    t1, t2 = theta.theta1, theta.theta2
    if abs(t2 - math.pi / 2) <= _SEAM_WINDOW:
        sides = []
        for t2s in (math.pi / 2 - _SEAM_OFFSET, math.pi / 2 + _SEAM_OFFSET):
            if t1 < t2s < math.pi:
                sides.append(_h_angles_at(t1, t2s, alpha))
        if len(sides) == 2 and abs(sides[0] - sides[1]) > _SEAM_AGREE:
            raise ArithmeticError(
                f"sign-seam evaluations disagree by {abs(sides[0] - sides[1]):.2e}"
            )
        return sum(sides) / len(sides)
    return _h_angles_at(t1, t2, alpha)


# ---------------------------------------------------------------------------
# integer orders


def _series_at_one(w1: complex, w2: complex, n: int, count: int) -> list[complex]:
    """Expansion coefficients of v^(n-1) (v-w1)^(n-1) (v-w2)^(-n/2) at v = 1.

    The first two factors are polynomials; the last is a binomial series
    with radius |1 - w2|, so ``count`` terms converge whenever the
    evaluation stays inside that disk.
    """
    m = n - 1
    half = n // 2
    p1 = [float(math.comb(m, j)) for j in range(m + 1)]
    p2 = [math.comb(m, j) * (1.0 - w1) ** (m - j) for j in range(m + 1)]
    poly = np.convolve(p1, p2)
    base = (1.0 - w2) ** (-half)
    tail = [base]
    coef = 1.0
    for j in range(1, count + 1):
        coef *= (-half - (j - 1)) / j
        tail.append(base * coef * (1.0 - w2) ** (-j))
    out: list[complex] = []
    for j in range(count + 1):
        s = 0.0j
        for i in range(min(j, len(poly) - 1) + 1):
            s += poly[i] * tail[j - i]
        out.append(s)
    return out


def _even_continuation(w1: complex, w2: complex, n: int) -> tuple[complex, complex]:
    half = n // 2
    delta = min(0.5, 0.25 * abs(w2 - 1.0))
    coeffs = _series_at_one(w1, w2, n, half + _SERIES_TAIL)

    def integrand(v: np.ndarray) -> np.ndarray:
        v = v.astype(complex)
        return (
            v ** (n - 1)
            * (v - w1) ** (n - 1)
            * (v - w2) ** (-half)
            * (1.0 - v) ** float(-half)
        )

    left = integrate_interval(
        integrand, 0.0, 1.0 - delta, rel_tol=1e-13, abs_tol=1e-15
    ).value

    # remove the expansion's pole part from the left piece in closed form
    pole = 0.0j
    for j in range(half):
        k = half - j
        if k == 1:
            piece = math.log(delta)
        else:
            piece = ((-delta) ** (1 - k) - (-1.0) ** (1 - k)) / (1 - k)
        pole += coeffs[j] * (-1.0) ** half * piece

    # and integrate the regular remainder across the endpoint by series
    tail = 0.0j
    for p in range(_SERIES_TAIL):
        tail += (
            (-1.0) ** half
            * (-1.0) ** p
            * coeffs[half + p]
            * delta ** (p + 1)
            / (p + 1)
        )
    regular = left - pole + tail

    a1 = coeffs[half - 1] * (-1.0) ** (half - 1)
    harmonic = sum(
        coeffs[half - k] * (-1.0) ** (half - k) / (k - 1) for k in range(2, half + 1)
    )
    # principal logarithm here keeps the value continuous across pi/2,
    # where the branch jump cancels the indicator jump in h_integer
    logs = [cmath.log(1.0 - w1) - cmath.log(1.0 - w2) / 2.0]
    for m in range(1, half):
        logs.append(
            ((-1.0) ** (m - 1) / m)
            * (1.0 + (1.0 - w1) ** (-m) - 0.5 * (1.0 - w2) ** (-m))
        )
    residue = (-1.0) ** half * sum(
        coeffs[half - 1 - m] * logs[m] for m in range(half)
    )

    F1 = 4.0 * math.pi**2 * (-1.0) ** (half + 1) * coeffs[half - 1]
    F2 = (
        -2.0 * math.pi**2 * regular
        + 2j * math.pi**3 * a1
        + 2.0 * math.pi**2 * harmonic
        - 4.0 * math.pi**2 * residue
    )
    return F1, F2


def _odd_leading(w1: complex, w2: complex, n: int) -> complex:
    # two mirrored polylines past v = 1; beyond that point the two branch
    # values of (1-v)^(-n/2) cancel for odd n, so the cut-off is exact.
    # only w2 and v = 1 carry branch points here (the w1 exponent is an
    # integer), so clearing w2's depth is the only geometric constraint.
    eta = min(0.37, abs(w2.imag) / 2.0)
    eps = 0.5
    factors = [
        Factor(0.0, float(n - 1)),
        Factor(w1, float(n - 1)),
        Factor(w2, -n / 2.0),
        Factor(1.0, -n / 2.0, scale=-1.0),
    ]
    below = polyline([0.0, -1j * eta, (1.0 + eps) - 1j * eta, 1.0 + eps])
    above = polyline([0.0, +1j * eta, (1.0 + eps) + 1j * eta, 1.0 + eps])
    rb, _ = integrate_contour(factors, below, rel_tol=_LOOP_TOL)
    ra, _ = integrate_contour(factors, above, rel_tol=_LOOP_TOL)
    return 2j * math.pi * (rb.value + ra.value)


def continuation_coefficients(theta: AngleArgs, n: int) -> ContinuationData:
    """Integer-order expansion coefficients of the wedge loop integral."""
    if not isinstance(n, int) or n < 2:
        raise ValueError(f"order must be an integer >= 2, got {n}")
    w1, w2 = _wedge_arguments(theta.theta1, theta.theta2)
    if n % 2 == 0:
        F1, F2 = _even_continuation(w1, w2, n)
        drift = abs((cmath.exp(1j * (n - 1) * theta.theta2) * F1).imag)
        if drift > 1e-9 * max(1.0, abs(F1)):
            raise ArithmeticError(
                f"even-order leading coefficient failed its reality check "
                f"({drift:.2e})"
            )
        return ContinuationData(F1, F2, n)
    return ContinuationData(_odd_leading(w1, w2, n), None, n)


def h_integer(theta: AngleArgs, n: int) -> float:
    """Angular Green's function at integer order n >= 2."""
    data = continuation_coefficients(theta, n)
    t1, t2 = theta.theta1, theta.theta2
    spin = cmath.exp(1j * (n - 1) * t2)
    if n % 2 == 0:
        shift = t2 - (2.0 * math.pi if t2 >= math.pi / 2 else 0.0)
        val = (spin * (data.F2 + 1j * shift * data.F1)).imag
    else:
        val = (spin * data.F1).imag
    return h_n(n) * math.sin(t1) ** (n - 1) * val


# ---------------------------------------------------------------------------
# solvable closed forms


def _closed_order_two(t1: float, t2: float) -> float:
    return (
        math.sin(2 * t1 - 2 * t2)
        + 2 * t1 * (1 - math.cos(2 * t2))
        + 2 * t2 * (math.cos(2 * t1) - 1)
        - math.sin(2 * t1)
        + math.sin(2 * t2)
    ) / (4 * math.pi * math.sin(t1 - t2))


def _closed_order_three(t1: float, t2: float) -> float:
    s = math.sqrt(math.sin(t1) * math.sin(t2))
    br1 = (
        -6 * math.cos((t1 - 3 * t2) / 2)
        + math.cos((3 * t1 - 5 * t2) / 2)
        + math.cos((5 * t1 - 3 * t2) / 2)
        - 6 * math.cos((3 * t1 - t2) / 2)
        - 38 * math.cos((t1 + t2) / 2)
        + 20 * math.cos((3 * t1 + 3 * t2) / 2)
        + 14 * math.cos((5 * t1 + t2) / 2)
        + 14 * math.cos((t1 + 5 * t2) / 2)
    )
    br2 = (
        -9 * math.sin(2 * t1) * math.sin(2 * t2)
        + (7 * math.cos(2 * t2) + 8) * math.cos(2 * t1)
        + 8 * math.cos(2 * t2)
        - 23
    )
    ang = math.atan2(s, math.cos((t1 + t2) / 2))
    return (s * br1 - 2 * math.cos((t1 - t2) / 2) ** 2 * br2 * ang) / (
        30 * math.pi * (math.cos(t1 - t2) + 1)
    )


def _closed_order_four(t1: float, t2: float) -> float:
    ct1, ct2 = 1 / math.tan(t1), 1 / math.tan(t2)
    csc1, csc2 = 1 / math.sin(t1), 1 / math.sin(t2)
    term1 = (
        72 * math.sin(t1) ** 5 * math.cos(t2) * math.cos(t1 - 3 * t2)
        / math.sin(t1 - t2) ** 3
    )
    inner1 = (
        96 * ((3 * t1 * ct2 + 2) * ct1 + t1 * (3 - 2 * csc1**2) - 3 * ct2)
        / math.sin(t1)
    )
    inner2 = csc2**6 * (
        3
        * (
            16 * t2 * (3 * math.sin(t1 - 2 * t2) + math.sin(t1)) * math.sin(t1)
            + 5 * math.sin(2 * t2)
            - 4 * math.sin(4 * t2)
        )
        * math.sin(t1)
        + 6 * math.cos(t1 - 6 * t2)
        - math.cos(3 * t1 - 6 * t2)
        + (75 * math.cos(2 * t2) - 30 * math.cos(4 * t2) - 33) * math.cos(t1)
        - 17 * math.cos(3 * t1)
    )
    return (
        term1 + math.sin(t2) ** 3 / (ct1 - ct2) ** 3 * (inner1 + inner2)
    ) / (192 * math.pi)


_CLOSED_FORMS = {
    4.0: _closed_order_two,
    8.0 / 3.0: _closed_order_three,
    2.0: _closed_order_four,
}


def h_closed_form(theta: AngleArgs, kappa: float) -> float:
    """Literal closed forms of the angular Green's function.

    Only the three solvable diffusivities 4, 8/3 and 2 are available; they
    serve as oracles for the continuation machinery.
    """
    for key, form in _CLOSED_FORMS.items():
        if abs(kappa - key) <= 1e-9:
            return form(theta.theta1, theta.theta2)
    raise ValueError(f"no closed form at kappa={kappa}; supported: 4, 8/3, 2")


# ---------------------------------------------------------------------------
# fused (collided-seed) limit


def _fused_series(z: complex, n: int) -> np.ndarray:
    # coefficients of v^(n-1) (1 - v z)^(n-1) around v = 1
    m = n - 1
    p1 = [float(math.comb(m, j)) for j in range(m + 1)]
    p2 = [math.comb(m, j) * (1.0 - z) ** (m - j) * (-z) ** j for j in range(m + 1)]
    return np.convolve(p1, p2)


def _fused_integer(t: float, n: int) -> float:
    z = (1.0 - 1j / math.tan(t)) / 2.0
    coeffs = _fused_series(z, n)
    lead = -4.0 * math.pi**2 * (-1.0) ** n * coeffs[n - 1]
    logs = [cmath.log(1.0 - z)] + [
        (-1.0) ** (m - 1) / m - (z / (1.0 - z)) ** m / m for m in range(1, n)
    ]
    residue = (-1.0) ** n * sum(coeffs[n - 1 - m] * logs[m] for m in range(n))
    across = sum(coeffs[j] * (-1.0) ** j / (j - n + 1) for j in range(n, 2 * n - 1))
    harmonic = sum(
        coeffs[n - k] * (-1.0) ** (n - k) / (k - 1) for k in range(2, n + 1)
    )
    second = -4.0 * math.pi**2 * (residue + across - harmonic)
    if n % 2 == 0:
        combined = (2.0 * second - 1j * math.pi * lead).real
    else:
        combined = (2.0 / math.pi) * (2j * second + math.pi * lead).real
    return 2.0 ** (n - 3) * h_n(n) * math.sin(t) ** (2 * n - 2) * combined


def _fused_generic(t: float, alpha: float) -> float:
    z = (1.0 - 1j / math.tan(t)) / 2.0
    inv = 1.0 / z
    base = 0.5
    r0 = min(base, abs(inv)) / 4.0
    r1 = min(1.0 - base, abs(inv - 1.0)) / 4.0
    factors = [
        Factor(0.0, alpha - 1.0),
        Factor(inv, alpha - 1.0, scale=-z),
        Factor(1.0, -alpha, scale=-1.0),
    ]
    res, _ = integrate_contour(
        factors, pochhammer_loop(base, (0.0, r0), (1.0, r1)), rel_tol=_LOOP_TOL
    )
    pref = -(math.pi * 2.0 ** (alpha + 1.0) / c_hat(alpha)) * math.sin(
        math.pi * alpha / 2.0
    )
    val = (
        cmath.exp(-1j * math.pi * alpha / 2.0)
        * res.value
        / (4.0 * math.pi * math.sin(math.pi * alpha))
    ).real
    return pref * math.sin(t) ** (2.0 * alpha - 2.0) * val


def fused_h(theta: float, params: SLEParams) -> float:
    """Angular Green's function in the collided-seed limit, 0 < theta < pi."""
    if not 0.0 < theta < math.pi:
        raise ValueError(f"theta must lie in (0, pi), got {theta}")
    params.require_observable()
    alpha = params.alpha
    n = params.integer_alpha
    if n is not None:
        return _fused_integer(theta, n)
    nearest = round(alpha)
    dist = abs(alpha - nearest)
    if nearest >= 2 and dist < _BLEND_BAND:
        near = _fused_integer(theta, nearest)
        away = _fused_generic(theta, alpha)
        if abs(near - away) > _BLEND_WARN:
            warnings.warn(
                f"near-integer routes disagree by {abs(near - away):.2e} "
                f"at alpha={alpha}",
                RuntimeWarning,
                stacklevel=2,
            )
        w = (dist - INTEGER_ALPHA_TOL) / (_BLEND_BAND - INTEGER_ALPHA_TOL)
        return (1.0 - w) * near + w * away
    return _fused_generic(theta, alpha)


# ---------------------------------------------------------------------------
# symmetrized and baseline densities


def bichordal_green(z: complex, xi1: float, xi2: float, params: SLEParams) -> float:
    """Density for the pair of interfaces: direct term plus its mirror.

    Seeds may collide, in which case the fused limit is used for both
    terms.  Translation invariance reduces everything to symmetric seeds.
    """
    z = complex(z)
    params.require_observable()
    if xi2 < xi1:
        raise ValueError(f"seeds must be ordered xi1 <= xi2, got {xi1}, {xi2}")
    mid = (xi1 + xi2) / 2.0
    w = z - mid
    half_gap = (xi2 - xi1) / 2.0
    if half_gap <= _CLEARANCE * max(1.0, abs(xi1), abs(xi2)):
        total = 0.0
        for point in (w, -w.conjugate()):
            total += point.imag ** (params.d - 2.0) * fused_h(
                cmath.phase(point), params
            )
        return total
    return green_G(w, -half_gap, half_gap, params) + green_G(
        -w.conjugate(), -half_gap, half_gap, params
    )


def chordal_green(z: complex, params: SLEParams) -> float:
    """One-curve baseline density (Im z)^(d-2) sin(arg z)^(4a-1)."""
    z = complex(z)
    if z.imag <= 0.0:
        raise ValueError(f"z must lie in the upper half-plane, got {z}")
    return z.imag ** (params.d - 2.0) * math.sin(cmath.phase(z)) ** params.beta


# ---------------------------------------------------------------------------
# PDE residuals


def zeroth_coefficient(x: float, y: float, xi: float, alpha: float) -> float:
    """Potential term of the passage operator; vanishes on |x - xi| = y."""
    den = y**2 + (x - xi) ** 2
    return 2.0 * (alpha - 1.0) * (y**2 - (x - xi) ** 2) / (alpha * den**2)


def pde_residual_green(
    z: complex,
    xi1: float,
    xi2: float,
    params: SLEParams,
    step: float,
) -> PDEResidual:
    """Finite-difference residuals of both interface PDEs at (z, xi1, xi2).

    The first-order stencil is shared with the passage observable; the
    Green's function adds the zeroth-order potential evaluated at the
    center.
    """
    z = complex(z)
    params.require_observable()
    if step <= 0.0:
        raise ValueError(f"step must be positive, got {step}")
    if z.imag - step <= 0.0:
        raise ValueError("stencil leaves the upper half-plane")
    if xi1 + step >= xi2 - step:
        raise ValueError("stencil crosses the seed ordering xi1 < xi2")

    def evaluator(x: float, y: float, x1: float, x2: float) -> float:
        return green_G(complex(x, y), x1, x2, params)

    r1, r2 = _apply_pde_operator(
        evaluator, z.real, z.imag, xi1, xi2, params.alpha, step
    )
    center = evaluator(z.real, z.imag, xi1, xi2)
    r1 += zeroth_coefficient(z.real, z.imag, xi1, params.alpha) * center
    r2 += zeroth_coefficient(z.real, z.imag, xi2, params.alpha) * center
    return PDEResidual(r1, r2, step)
