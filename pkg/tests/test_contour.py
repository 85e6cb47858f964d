import math

import numpy as np
import pytest

from sleobs.contour import ArcSeg, Factor, LineSeg, integrate_contour, polyline


def circle(center, radius, turns=1.0, start=0.0):
    return [ArcSeg(center, radius, start, start + 2 * math.pi * turns)]


def test_residue_of_inverse_power():
    # counterclockwise unit circle of u^{-1} -> 2*pi*i
    res, args = integrate_contour([Factor(0.0, -1.0)], circle(0.0, 1.0))
    assert abs(res.value - 2j * math.pi) < 1e-12
    # factor argument advanced by one full turn
    assert args[0] == pytest.approx(2 * math.pi, abs=1e-12)


def test_closed_loop_no_roots_is_zero():
    res, _ = integrate_contour(
        [Factor(3.0 + 3.0j, 0.7), Factor(-2.0, -1.3)], circle(0.0, 1.0)
    )
    assert abs(res.value) < 1e-11


def test_reversal_negates():
    factors = [Factor(0.5 + 0.2j, -1.0)]
    path = polyline([-1.0 - 1.0j, 2.0 - 1.0j, 2.0 + 2.0j])
    fwd, _ = integrate_contour(factors, path)
    rev, _ = integrate_contour(factors, polyline([2.0 + 2.0j, 2.0 - 1.0j, -1.0 - 1.0j]))
    assert abs(fwd.value + rev.value) < 1e-11


def test_line_segment_branch_tracking_matches_principal_region():
    # integrand analytic on the path and principal throughout: plain oracle
    f = [Factor(0.0, 0.5)]
    path = [LineSeg(1.0, 1.0 + 1.0j)]
    res, _ = integrate_contour(f, path)
    # antiderivative of u^{1/2}: (2/3) u^{3/2}, principal on right half-plane
    truth = (2.0 / 3.0) * ((1.0 + 1.0j) ** 1.5 - 1.0)
    assert abs(res.value - truth) < 1e-11


def test_winding_crosses_principal_cut():
    # integrate u^{1/2} once counterclockwise around the unit circle starting
    # at 1: after crossing the negative axis the continued branch differs from
    # the principal one.  oracle: parametrize u = e^{i t}, continued sqrt is
    # e^{i t/2}, integral = \int_0^{2pi} e^{3it/2} i dt = (e^{3pi i} - 1)*2/3
    res, args = integrate_contour([Factor(0.0, 0.5)], circle(0.0, 1.0))
    truth = 2.0 / 3.0 * (np.exp(3j * math.pi) - 1.0)
    assert abs(res.value - truth) < 1e-11
    assert args[0] == pytest.approx(2 * math.pi, abs=1e-12)


def pochhammer_path(r0, r1, root0=0.0, root1=1.0, first=0):
    """Double-commutator loop around root0 and root1 based midway.

    ``first`` selects which root the traversal visits first:
    0 -> (root0+, root1+, root0-, root1-), 1 -> the reverse role order.
    """
    A = 0.5 * (complex(root0) + complex(root1))
    loops = [
        (complex(root0), r0, +1),
        (complex(root1), r1, +1),
        (complex(root0), r0, -1),
        (complex(root1), r1, -1),
    ]
    if first == 1:
        loops = [loops[1], loops[0], loops[3], loops[2]]
    segs = []
    for center, radius, sign in loops:
        # approach point on the circle nearest to A, loop once, return
        direction = (A - center) / abs(A - center)
        entry = center + radius * direction
        phi = math.atan2(direction.imag, direction.real)
        segs.append(LineSeg(A, entry))
        segs.append(ArcSeg(center, radius, phi, phi + sign * 2 * math.pi))
        segs.append(LineSeg(entry, A))
    return segs


def test_pochhammer_beta_half_half():
    # Double loop around 0 and 1 of u^{-1/2}(1-u)^{-1/2}, based at A = 1/2
    # with principal branches there and retraced spokes.  Shrinking the loops
    # and tracking the sign flip (each half-loop winding multiplies the value
    # by e^{-+i pi} = -1 for exponent -1/2) turns the path into eight spoke
    # traversals with multipliers that all come out -1 for the visit order
    # (0+,1+,0-,1-), i.e. value -4(I1+I2) = -4*B(1/2,1/2) = -4*pi, and all +1
    # for (1+,0+,1-,0-), i.e. +4*pi.  (1-u)^{-1/2} = ((-1)(u-1))^{-1/2}.
    factors = [Factor(0.0, -0.5), Factor(1.0, -0.5, scale=-1.0)]
    res, args = integrate_contour(factors, pochhammer_path(0.25, 0.25))
    assert res.value.real == pytest.approx(-4.0 * math.pi, rel=1e-10)
    assert abs(res.value.imag) < 1e-10
    # full traversal restores every branch: net winding zero
    assert args[0] == pytest.approx(0.0, abs=1e-12)
    assert args[1] == pytest.approx(0.0, abs=1e-12)
    res2, _ = integrate_contour(factors, pochhammer_path(0.25, 0.25, first=1))
    assert res2.value.real == pytest.approx(4.0 * math.pi, rel=1e-10)
    assert abs(res2.value.imag) < 1e-10


def test_pochhammer_loop_radius_invariance():
    factors = [Factor(0.0, -0.3), Factor(1.0, -0.6, scale=-1.0)]
    res1, _ = integrate_contour(factors, pochhammer_path(0.2, 0.2))
    res2, _ = integrate_contour(factors, pochhammer_path(0.1, 0.35))
    assert abs(res1.value - res2.value) < 1e-9


def test_arc_rejects_interior_offcenter_root():
    with pytest.raises(ValueError):
        integrate_contour(
            [Factor(0.3, -1.0)], [ArcSeg(0.0, 1.0, 0.0, 2 * math.pi)]
        )


def test_root_on_segment_rejected():
    with pytest.raises(ValueError):
        integrate_contour(
            [Factor(0.5, -0.5)], [LineSeg(0.0 + 0.0j, 1.0 + 0.0j)]
        )


def test_disconnected_path_rejected():
    with pytest.raises(ValueError):
        integrate_contour(
            [Factor(5.0, 1.0)], [LineSeg(0.0, 1.0), LineSeg(2.0, 3.0)]
        )


def test_endpoint_root_singular_integration():
    # \int_{-i}^{i} (u+i)^{-1/2} du along the segment through the root-free
    # interior; root at the start point.  Substitute u = -i + 2i s:
    # = (2i)^{1/2} * \int_0^1 s^{-1/2} 2i/(2i)... direct antiderivative:
    # 2(u+i)^{1/2} with branch continued from the segment direction (i).
    res, _ = integrate_contour(
        [Factor(-1.0j, -0.5)], [LineSeg(-1.0j, 1.0j)]
    )
    truth = 2.0 * (2.0j) ** 0.5
    assert abs(res.value - truth) < 1e-10


def test_prefactor_combined():
    # residue with smooth prefactor: (1/u) * e^u -> 2*pi*i * e^0
    res, _ = integrate_contour(
        [Factor(0.0, -1.0)], circle(0.0, 0.7), prefactor=lambda u: np.exp(u)
    )
    assert abs(res.value - 2j * math.pi) < 1e-11
