"""Oracles for the two-seed Green's function.

The angular closed forms at the three solvable diffusivities are transcribed
here independently of the module, the loop-contour normalization is pinned
against scipy's hypergeometric function, and the generic-exponent machinery
is cross-checked against the integer-order continuations by Richardson
extrapolation.  Every frozen literal below is plain arithmetic on those
oracles.
"""

import cmath
import math
import warnings

import numpy as np
import pytest
from scipy.special import hyp2f1

from sleobs import SLEParams
from sleobs.contour import Factor, integrate_contour
from sleobs.special import c_hat, real_gamma
from sleobs.green import (
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

K4 = SLEParams(4.0)
K83 = SLEParams(8.0 / 3.0)
K2 = SLEParams(2.0)
A25 = SLEParams(3.2)  # alpha = 2.5


def closed_h_kappa4(t1: float, t2: float) -> float:
    # independent transcription of the kappa=4 angular closed form
    return (
        math.sin(2 * t1 - 2 * t2)
        + 2 * t1 * (1 - math.cos(2 * t2))
        + 2 * t2 * (math.cos(2 * t1) - 1)
        - math.sin(2 * t1)
        + math.sin(2 * t2)
    ) / (4 * math.pi * math.sin(t1 - t2))


def closed_h_kappa83(t1: float, t2: float) -> float:
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
    # the angle of cos((t1+t2)/2) + i*s, continuous across Re = 0
    ang = math.atan2(s, math.cos((t1 + t2) / 2))
    return (s * br1 - 2 * math.cos((t1 - t2) / 2) ** 2 * br2 * ang) / (
        30 * math.pi * (math.cos(t1 - t2) + 1)
    )


def closed_h_kappa2(t1: float, t2: float) -> float:
    ct1, ct2 = 1 / math.tan(t1), 1 / math.tan(t2)
    csc1, csc2 = 1 / math.sin(t1), 1 / math.sin(t2)
    term1 = (
        72 * math.sin(t1) ** 5 * math.cos(t2) * math.cos(t1 - 3 * t2)
        / math.sin(t1 - t2) ** 3
    )
    inner1 = 96 * ((3 * t1 * ct2 + 2) * ct1 + t1 * (3 - 2 * csc1**2) - 3 * ct2) / math.sin(t1)
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


def closed_fused_kappa4(t: float) -> float:
    return (2 / math.pi) * (math.sin(t) - t * math.cos(t)) * math.sin(t)


def closed_fused_kappa83(t: float) -> float:
    return (
        (8 / (15 * math.pi))
        * (4 * t - 3 * math.sin(2 * t) + 2 * t * math.cos(2 * t))
        * math.sin(t) ** 2
    )


def closed_fused_kappa2(t: float) -> float:
    return (
        (1 / (12 * math.pi))
        * (27 * math.sin(t) + 11 * math.sin(3 * t) - 6 * t * (9 * math.cos(t) + math.cos(3 * t)))
        * math.sin(t) ** 3
    )


def fused_reference(t: float, alpha: float) -> float:
    """Collided-seed value through scipy's hypergeometric function.

    The argument has real part 1/2, so it never meets the [1, inf) cut and
    the library value is an independent oracle for the contour route.
    """
    w = 0.5 * (1 - 1j / math.tan(t))
    f = hyp2f1(1 - alpha, alpha, 1.0, w)
    pref = (math.pi * 2 ** (alpha + 1) / c_hat(alpha)) * math.sin(math.pi * alpha / 2)
    return pref * math.sin(t) ** (2 * alpha - 2) * (cmath.exp(-1j * math.pi * alpha / 2) * f).real


# interior angle pairs, ordered, away from the diagonal and both boundaries
PAIRS = [
    (0.3, 0.9),
    (0.3, 1.6),
    (0.3, 2.4),
    (0.8, 1.2),
    (0.8, 2.0),
    (0.8, 2.9),
    (1.4, 1.8),
    (1.4, 2.6),
    (2.0, 2.3),
    (2.0, 3.0),
    (2.6, 2.9),
    (0.5, 1.5707963),
]

# sampled (z, xi1, xi2) interior configurations
POINTS = [
    (0.3 + 1.1j, -0.7, 0.4),
    (-1.0 + 0.8j, -2.0, 1.5),
    (0.1 + 0.4j, -0.3, 0.2),
]

TWO_OVER_PI = 0.6366197723675814  # closed_fused_kappa4(pi/2)
FOUR_OVER_3PI = 0.4244131815783876  # closed_fused_kappa2(pi/2)


# ---------------------------------------------------------------------------
# oracle self-checks


def test_closed_forms_meet_boundary_powers():
    for t1 in (0.4, 1.1, 2.2):
        assert closed_h_kappa4(t1, math.pi) == pytest.approx(math.sin(t1), abs=1e-12)
        assert closed_h_kappa83(t1, math.pi - 1e-9) == pytest.approx(
            math.sin(t1) ** 2, abs=1e-8
        )
        assert closed_h_kappa2(t1, math.pi - 1e-7) == pytest.approx(
            math.sin(t1) ** 3, abs=5e-7
        )


def test_closed_forms_collapse_to_fused_diagonal():
    # midpoint comparison; the one-sided value is only first-order accurate
    for t in (0.7, 1.3, 2.0):
        gap = 1e-4
        assert closed_h_kappa4(t, t + gap) == pytest.approx(
            closed_fused_kappa4(t + gap / 2), abs=1e-7
        )
        assert closed_h_kappa83(t, t + gap) == pytest.approx(
            closed_fused_kappa83(t + gap / 2), abs=1e-7
        )
        # cubic difference denominators: keep the gap wide for kappa=2
        assert closed_h_kappa2(t, t + 1e-2) == pytest.approx(
            closed_fused_kappa2(t + 5e-3), abs=1e-3
        )


def test_fused_closed_forms_at_right_angle():
    assert closed_fused_kappa4(math.pi / 2) == pytest.approx(TWO_OVER_PI, abs=1e-15)
    assert closed_fused_kappa83(math.pi / 2) == pytest.approx(8.0 / 15.0, abs=1e-15)
    assert closed_fused_kappa2(math.pi / 2) == pytest.approx(FOUR_OVER_3PI, abs=1e-15)


def test_loop_convention_matches_library_hypergeometric():
    # the double-loop normalization that every representation here relies on
    a, b, c = 0.3, 0.6, 1.2
    w = 0.2 + 0.3j
    factors = [
        Factor(0.0, b - 1),
        Factor(1 / w, -a, scale=-w),
        Factor(1.0, c - b - 1, scale=-1.0),
    ]
    path = pochhammer_loop(0.4, (0.0, 0.1), (1.0, 0.15))
    res, args = integrate_contour(factors, path, rel_tol=1e-12)
    pref = (
        cmath.exp(-1j * math.pi * c)
        * real_gamma(c)
        * real_gamma(1 - b)
        * real_gamma(1 + b - c)
        / (4 * math.pi**2)
    )
    assert pref * res.value == pytest.approx(complex(hyp2f1(a, b, c, w)), abs=1e-12)
    # a full double commutator restores every principal branch
    start = path[0].start
    for k, f in enumerate(factors):
        assert args[k] == pytest.approx(np.angle(f.scale * (start - f.root)), abs=1e-9)


# ---------------------------------------------------------------------------
# pochhammer_I


class TestPochhammerI:
    def test_rejects_bad_geometry(self):
        with pytest.raises(ValueError):
            pochhammer_I(0.3 - 1.1j, -0.7, 0.4, A25)
        with pytest.raises(ValueError):
            pochhammer_I(0.3 + 1.1j, 0.4, -0.7, A25)
        with pytest.raises(ValueError):
            # collapsed seed pair leaves no loop clearance
            pochhammer_I(0.3 + 1.1j, 0.4, 0.4 + 1e-13, A25)

    def test_rejects_near_integer_exponent(self):
        with pytest.raises(ValueError):
            pochhammer_I(0.3 + 1.1j, -0.7, 0.4, SLEParams(8.0 / (3.0 + 1e-8)))

    def test_homotopy_invariance_under_radius_halving(self):
        z, x1, x2 = 0.3 + 1.1j, -0.7, 0.4
        full = pochhammer_I(z, x1, x2, A25)
        half = pochhammer_I(z, x1, x2, A25, radius_scale=0.5)
        assert half == pytest.approx(full, abs=1e-9)

    @pytest.mark.parametrize("z,x1,x2", POINTS)
    def test_imaginary_part_sign_pairs_with_normalizer(self, z, x1, x2):
        # the normalizer is negative at alpha=2.5, so positivity of the
        # observable forces the projected imaginary part negative too
        val = (cmath.exp(-1j * math.pi * A25.alpha) * pochhammer_I(z, x1, x2, A25)).imag
        assert c_hat(A25.alpha) < 0
        assert val < 0
        assert val / c_hat(A25.alpha) > 0


# ---------------------------------------------------------------------------
# green_G


class TestGreenG:
    @pytest.mark.parametrize("z,x1,x2", POINTS)
    def test_kappa4_matches_closed_form(self, z, x1, x2):
        t1, t2 = cmath.phase(z - x1), cmath.phase(z - x2)
        want = z.imag ** (K4.d - 2.0) * closed_h_kappa4(t1, t2)
        assert green_G(z, x1, x2, K4) == pytest.approx(want, abs=1e-8)

    @pytest.mark.parametrize("alpha", [2.3, 2.5, 3.7])
    @pytest.mark.parametrize("z,x1,x2", POINTS)
    def test_direct_and_angular_routes_agree(self, alpha, z, x1, x2):
        params = SLEParams(8.0 / alpha)
        theta = AngleArgs(cmath.phase(z - x1), cmath.phase(z - x2))
        want = z.imag ** (params.d - 2.0) * h_angles(theta, params)
        assert green_G(z, x1, x2, params) == pytest.approx(want, abs=1e-8)

    @pytest.mark.parametrize("params", [A25, K4])
    def test_scale_covariance(self, params):
        z, x1, x2 = 0.3 + 1.1j, -0.7, 0.4
        lam = 2.0
        got = green_G(lam * z, lam * x1, lam * x2, params)
        want = lam ** (params.d - 2.0) * green_G(z, x1, x2, params)
        assert got == pytest.approx(want, abs=1e-8)

    def test_nonnegative_on_grid(self):
        for x in np.linspace(-1.5, 1.5, 5):
            for y in (0.3, 0.8, 1.6):
                assert green_G(complex(x, y), -0.7, 0.4, K4) >= -1e-12
        for z, x1, x2 in POINTS:
            assert green_G(z, x1, x2, A25) >= -1e-12

    def test_integer_band_blends_continuously(self):
        z, x1, x2 = 0.3 + 1.1j, -0.7, 0.4
        exact = green_G(z, x1, x2, K4)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            near = green_G(z, x1, x2, SLEParams(8.0 / (2.0 + 2e-6)))
        assert near == pytest.approx(exact, abs=1e-5)

    def test_band_edge_raises_disagreement_diagnostic(self):
        z, x1, x2 = 0.3 + 1.1j, -0.7, 0.4
        with pytest.warns(RuntimeWarning):
            green_G(z, x1, x2, SLEParams(8.0 / (2.0 + 9e-4)))
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            green_G(z, x1, x2, SLEParams(8.0 / (2.0 + 2e-4)))
        assert not caught

    def test_rejects_bad_inputs(self):
        with pytest.raises(ValueError):
            green_G(1.0 + 0.0j, -0.7, 0.4, A25)
        with pytest.raises(ValueError):
            green_G(0.3 + 1.1j, 0.4, -0.7, A25)
        with pytest.raises(ValueError):
            green_G(0.3 + 1.1j, -0.7, 0.4, SLEParams(6.0))


# ---------------------------------------------------------------------------
# h_angles


class TestHAngles:
    def test_angle_domain_is_enforced(self):
        with pytest.raises(ValueError):
            AngleArgs(-0.1, 1.0)
        with pytest.raises(ValueError):
            AngleArgs(1.0, 1.0)
        with pytest.raises(ValueError):
            AngleArgs(0.5, math.pi)
        with pytest.raises(ValueError):
            AngleArgs(2.0, 1.0)

    def test_rejects_near_integer_exponent(self):
        with pytest.raises(ValueError):
            h_angles(AngleArgs(0.8, 2.0), K4)

    def test_boundary_limit_is_the_power_of_sine(self):
        # fit the linear-in-(pi - t2) coefficient at the wide offset, then
        # require the narrow offset to obey it
        beta = A25.beta
        coeffs = []
        for t1 in (0.6, 1.2, 2.2):
            wide = abs(
                h_angles(AngleArgs(t1, math.pi - 1e-2), A25) - math.sin(t1) ** beta
            ) / math.sin(t1) ** beta
            coeffs.append(wide * math.sin(t1) / 1e-2)
        C = 2.0 * max(coeffs)
        for t1 in (0.6, 1.2, 2.2):
            narrow = abs(
                h_angles(AngleArgs(t1, math.pi - 1e-3), A25) - math.sin(t1) ** beta
            ) / math.sin(t1) ** beta
            assert narrow <= C * 1e-3 / math.sin(t1)

    def test_bounded_by_power_of_sine(self):
        beta = A25.beta
        ratios = []
        for t1, t2 in PAIRS:
            h = h_angles(AngleArgs(t1, t2), A25)
            assert h >= -1e-12
            ratios.append(h / math.sin(t1) ** beta)
        # a single modest constant covers the sampled wedge
        assert max(ratios) < 10.0

    def test_sign_seam_is_averaged_and_continuous(self):
        t1 = 0.8
        at_seam = h_angles(AngleArgs(t1, math.pi / 2 + 1e-12), A25)
        below = h_angles(AngleArgs(t1, math.pi / 2 - 1e-6), A25)
        above = h_angles(AngleArgs(t1, math.pi / 2 + 1e-6), A25)
        assert at_seam == pytest.approx(below, abs=1e-5)
        assert at_seam == pytest.approx(above, abs=1e-5)

    def test_diagonal_limit_is_the_fused_value(self):
        gap = 1e-3
        for t in (0.8, 1.9):
            near = h_angles(AngleArgs(t, t + gap), A25)
            assert near == pytest.approx(fused_h(t + gap / 2, A25), abs=1e-6)


# ---------------------------------------------------------------------------
# integer orders


class TestHInteger:
    @pytest.mark.parametrize("t1,t2", PAIRS)
    def test_order_two_matches_closed_form(self, t1, t2):
        got = h_integer(AngleArgs(t1, t2), 2)
        assert got == pytest.approx(closed_h_kappa4(t1, t2), abs=1e-10)

    @pytest.mark.parametrize("t1,t2", PAIRS[:8])
    def test_order_three_matches_closed_form(self, t1, t2):
        got = h_integer(AngleArgs(t1, t2), 3)
        assert got == pytest.approx(closed_h_kappa83(t1, t2), abs=1e-8)

    @pytest.mark.parametrize("t1,t2", PAIRS[:8])
    def test_order_four_matches_closed_form(self, t1, t2):
        got = h_integer(AngleArgs(t1, t2), 4)
        assert got == pytest.approx(closed_h_kappa2(t1, t2), abs=1e-8)

    @pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
    def test_continuation_consistency_by_richardson(self, n):
        theta = AngleArgs(0.9, 2.1)
        d = 1e-3
        if n == 2:
            # the exponent domain stops at 2, so extrapolate from above
            extrap = 2.0 * h_angles(theta, SLEParams(8.0 / (n + d))) - h_angles(
                theta, SLEParams(8.0 / (n + 2 * d))
            )
        else:
            extrap = 0.5 * (
                h_angles(theta, SLEParams(8.0 / (n - d)))
                + h_angles(theta, SLEParams(8.0 / (n + d)))
            )
        assert h_integer(theta, n) == pytest.approx(extrap, abs=1e-4)

    @pytest.mark.parametrize("n", [2, 4, 6])
    @pytest.mark.parametrize("t1,t2", [(0.9, 2.1), (0.5, 1.0), (1.4, 1.8), (2.0, 2.9)])
    def test_even_leading_coefficient_is_real_after_rotation(self, n, t1, t2):
        data = continuation_coefficients(AngleArgs(t1, t2), n)
        assert data.n == n
        assert abs((cmath.exp(1j * (n - 1) * t2) * data.F1).imag) < 1e-9

    def test_odd_leading_coefficient_from_segment_pair(self):
        data = continuation_coefficients(AngleArgs(0.9, 2.1), 3)
        assert data.F2 is None
        assert np.isfinite(data.F1.real) and np.isfinite(data.F1.imag)

    def test_rejects_orders_below_two(self):
        with pytest.raises(ValueError):
            h_integer(AngleArgs(0.9, 2.1), 1)
        with pytest.raises(ValueError):
            continuation_coefficients(AngleArgs(0.9, 2.1), 0)


# ---------------------------------------------------------------------------
# h_closed_form


class TestHClosedForm:
    @pytest.mark.parametrize("t1,t2", PAIRS[:8])
    def test_transcriptions_match_continuations(self, t1, t2):
        theta = AngleArgs(t1, t2)
        assert h_closed_form(theta, 4.0) == pytest.approx(h_integer(theta, 2), abs=1e-10)
        assert h_closed_form(theta, 8.0 / 3.0) == pytest.approx(h_integer(theta, 3), abs=1e-8)
        assert h_closed_form(theta, 2.0) == pytest.approx(h_integer(theta, 4), abs=1e-8)

    def test_kappa4_boundary_bracket(self):
        # at t2 = pi the bracket collapses to -4 pi sin(t1)^2, leaving sin(t1)
        for t1 in (0.4, 1.1, 2.2):
            got = h_closed_form(AngleArgs(t1, math.pi - 1e-9), 4.0)
            assert got == pytest.approx(math.sin(t1), abs=1e-7)

    def test_kappa4_diagonal_meets_fused(self):
        gap = 1e-4
        for t in (0.7, 1.3, 2.0):
            got = h_closed_form(AngleArgs(t, t + gap), 4.0)
            assert got == pytest.approx(fused_h(t + gap / 2, K4), abs=1e-6)

    @pytest.mark.parametrize("kappa", [4.0, 8.0 / 3.0, 2.0])
    def test_nonnegative_on_dense_grid(self, kappa):
        t1s = np.linspace(0.02, math.pi - 0.04, 100)
        lows = []
        for t1 in t1s:
            t2s = np.linspace(t1 + 0.02, math.pi - 0.02, 100)
            vals = [h_closed_form(AngleArgs(t1, t2), kappa) for t2 in t2s]
            lows.append(min(vals))
        assert min(lows) >= -1e-10

    def test_rejects_unsupported_diffusivity(self):
        with pytest.raises(ValueError):
            h_closed_form(AngleArgs(0.9, 2.1), 3.0)


# ---------------------------------------------------------------------------
# fused_h


class TestFusedH:
    def test_kappa4_right_angle_value(self):
        assert fused_h(math.pi / 2, K4) == pytest.approx(TWO_OVER_PI, abs=1e-12)

    @pytest.mark.parametrize(
        "params,oracle",
        [
            (K4, closed_fused_kappa4),
            (K83, closed_fused_kappa83),
            (K2, closed_fused_kappa2),
        ],
    )
    def test_integer_orders_match_closed_forms(self, params, oracle):
        for t in (0.4, 0.9, math.pi / 2, 2.2, 2.9):
            assert fused_h(t, params) == pytest.approx(oracle(t), abs=1e-8)

    @pytest.mark.parametrize("alpha", [2.5, 3.3])
    def test_generic_orders_match_library_hypergeometric(self, alpha):
        params = SLEParams(8.0 / alpha)
        for t in (0.7, math.pi / 2, 1.9, 2.6):
            assert fused_h(t, params) == pytest.approx(fused_reference(t, alpha), abs=1e-8)

    def test_vanishes_toward_both_endpoints(self):
        # decay is linear at the pi end, so track decrease rather than a
        # single tiny threshold
        for params in (K4, A25):
            for edge in (lambda e: e, lambda e: math.pi - e):
                far, near = fused_h(edge(1e-2), params), fused_h(edge(1e-3), params)
                assert abs(near) < abs(far)
                assert abs(near) < 5e-3

    def test_integer_band_blends_continuously(self):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            near = fused_h(0.9, SLEParams(8.0 / (3.0 + 2e-6)))
        assert near == pytest.approx(fused_h(0.9, K83), abs=1e-5)


# ---------------------------------------------------------------------------
# bichordal and chordal


class TestBichordalGreen:
    def test_mirror_symmetry(self):
        for x, y in ((0.4, 0.9), (1.1, 0.5)):
            left = bichordal_green(complex(-x, y), -1.0, 1.0, K4)
            right = bichordal_green(complex(x, y), -1.0, 1.0, K4)
            assert left == pytest.approx(right, rel=1e-12)

    def test_translation_invariance(self):
        z, x1, x2 = 0.3 + 1.0j, -0.6, 0.8
        shifted = bichordal_green(z + 2.5, x1 + 2.5, x2 + 2.5, K4)
        assert shifted == pytest.approx(bichordal_green(z, x1, x2, K4), rel=1e-10)

    def test_collided_seeds_give_fused_axis_value(self):
        # both halves contribute the right-angle fused value at z = i
        got = bichordal_green(1j, 0.0, 0.0, K4)
        assert got == pytest.approx(2.0 * TWO_OVER_PI, abs=1e-10)

    def test_continuity_into_the_collision(self):
        z = 0.3 + 1.0j
        target = bichordal_green(z, 0.0, 0.0, K4)
        gaps = [1e-2, 1e-3, 1e-4]
        diffs = [abs(bichordal_green(z, -g, g, K4) - target) for g in gaps]
        assert diffs[1] < diffs[0] / 10
        assert diffs[2] < diffs[1] / 10
        assert diffs[2] < 1e-6

    def test_generic_exponent_is_finite_and_positive(self):
        assert bichordal_green(0.5 + 1.2j, -0.8, 0.6, A25) > 0


class TestChordalGreen:
    def test_unit_point_values(self):
        assert chordal_green(1j, K4) == pytest.approx(1.0, abs=1e-12)
        assert chordal_green(1j, K83) == pytest.approx(1.0, abs=1e-12)

    def test_radial_ratio_exposes_dimension_exponent(self):
        ratio = chordal_green(1j, K4) / chordal_green(2j, K4)
        assert ratio == pytest.approx(math.sqrt(2.0), abs=1e-12)

    def test_vanishes_toward_the_boundary(self):
        values = [chordal_green(x + 1j, K4) for x in (10.0, 100.0, 1000.0)]
        assert values[0] > values[1] > values[2]
        assert values[2] < 2e-3

    def test_rejects_lower_half_plane(self):
        with pytest.raises(ValueError):
            chordal_green(1.0 - 0.5j, K4)


# ---------------------------------------------------------------------------
# PDE residuals


class TestPDEResidualGreen:
    def test_closed_form_residual_is_small(self):
        res = pde_residual_green(0.4 + 1.1j, -0.6, 0.5, K4, 1e-3)
        assert abs(res.residual_1) < 1e-5
        assert abs(res.residual_2) < 1e-5

    def test_residual_shrinks_at_second_order(self):
        coarse = pde_residual_green(0.4 + 1.1j, -0.6, 0.5, K4, 4e-3)
        fine = pde_residual_green(0.4 + 1.1j, -0.6, 0.5, K4, 2e-3)
        for c, f in ((coarse.residual_1, fine.residual_1), (coarse.residual_2, fine.residual_2)):
            order = math.log2(abs(c) / abs(f))
            assert order > 1.8

    def test_generic_exponent_residual_is_small(self):
        res = pde_residual_green(0.4 + 1.1j, -0.6, 0.5, A25, 5e-3)
        assert abs(res.residual_1) < 1e-3
        assert abs(res.residual_2) < 1e-3

    def test_zeroth_coefficient_vanishes_on_diagonal_cone(self):
        # binary-exact offsets so y^2 - (x - xi)^2 cancels without rounding
        assert zeroth_coefficient(0.0, 1.25, -1.25, 2.5) == 0.0
        assert zeroth_coefficient(0.0, 1.25, 1.25, 2.5) == 0.0
        assert zeroth_coefficient(0.0, 1.25, 0.5, 2.5) != 0.0

    def test_rejects_stencil_leaving_domain(self):
        with pytest.raises(ValueError):
            pde_residual_green(0.4 + 0.05j, -0.6, 0.5, K4, 0.1)
        with pytest.raises(ValueError):
            pde_residual_green(0.4 + 1.1j, -0.01, 0.01, K4, 0.1)
