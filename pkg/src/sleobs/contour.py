"""Contour integration of multi-valued algebraic integrands.

Integrands are products prod_k (scale_k * (u - root_k))**e_k times an optional
single-valued prefactor.  Each power factor is continued analytically along
the path: its argument starts at the principal value at the path start and is
then tracked continuously, so the contour may wind around roots and cross
principal-branch cuts freely.

Argument deltas are computed exactly, not sampled:

* along a straight segment the argument of u - root varies monotonically and
  its net change is the principal ``Arg`` of the endpoint ratio;
* along a circular arc centered at the root the change equals the sweep angle;
* along an arc with the root strictly outside the circle, u - root stays in a
  cone of opening < pi, so the endpoint-ratio ``Arg`` is again exact.

Roots strictly inside an arc's circle (other than at its center) are rejected.
Roots are allowed at the endpoints of the whole path (with exponent > -1);
integration there uses the tanh-sinh rule and exact endpoint offsets.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .quadrature import (
    DEFAULT_ABS_TOL,
    DEFAULT_REL_TOL,
    QuadResult,
    integrate_interval,
    tanh_sinh,
)

__all__ = [
    "Factor",
    "LineSeg",
    "ArcSeg",
    "integrate_contour",
    "polyline",
]

_ENDPOINT_TOL = 1e-13


@dataclass(frozen=True)
class Factor:
    """One algebraic factor (scale * (u - root)) ** exponent."""

    root: complex
    exponent: float
    scale: complex = 1.0 + 0.0j


@dataclass(frozen=True)
class LineSeg:
    start: complex
    end: complex


@dataclass(frozen=True)
class ArcSeg:
    """Circular arc center + radius * exp(i theta), theta from theta0 to theta1."""

    center: complex
    radius: float
    theta0: float
    theta1: float

    @property
    def start(self) -> complex:
        return self.center + self.radius * np.exp(1j * self.theta0)

    @property
    def end(self) -> complex:
        return self.center + self.radius * np.exp(1j * self.theta1)


def polyline(points: Sequence[complex]) -> list[LineSeg]:
    return [LineSeg(points[i], points[i + 1]) for i in range(len(points) - 1)]


def _is_same_point(a: complex, b: complex, scale: float) -> bool:
    return abs(a - b) <= _ENDPOINT_TOL * max(scale, 1.0)


def _path_scale(path: Sequence[LineSeg | ArcSeg]) -> float:
    m = 0.0
    for seg in path:
        m = max(m, abs(seg.start), abs(seg.end))
    return m


def _initial_args(
    factors: Sequence[Factor], path: Sequence[LineSeg | ArcSeg], scale: float
) -> np.ndarray:
    start = path[0].start
    if isinstance(path[0], LineSeg):
        direction = path[0].end - path[0].start
    else:
        seg = path[0]
        direction = 1j * np.exp(1j * seg.theta0) * (seg.theta1 - seg.theta0)
    args = np.empty(len(factors))
    for k, f in enumerate(factors):
        if _is_same_point(start, f.root, scale):
            # root at path start: argument is the limit along the outgoing leg
            args[k] = np.angle(f.scale * direction)
        else:
            args[k] = np.angle(f.scale * (start - f.root))
    return args


def _split_arc(seg: ArcSeg) -> list[ArcSeg]:
    sweep = seg.theta1 - seg.theta0
    n = max(1, int(math.ceil(abs(sweep) / (0.5 * math.pi))))
    thetas = np.linspace(seg.theta0, seg.theta1, n + 1)
    return [
        ArcSeg(seg.center, seg.radius, thetas[i], thetas[i + 1]) for i in range(n)
    ]


def _line_piece(
    factors: Sequence[Factor],
    args: np.ndarray,
    seg: LineSeg,
    prefactor: Callable[[np.ndarray], np.ndarray] | None,
    rel_tol: float,
    abs_tol: float,
    scale: float,
) -> tuple[QuadResult, np.ndarray]:
    p, q, span = complex(seg.start), complex(seg.end), complex(seg.end - seg.start)
    root_at_p = [_is_same_point(p, f.root, scale) for f in factors]
    root_at_q = [_is_same_point(q, f.root, scale) for f in factors]
    singular = any(
        (ap or aq) and f.exponent != 0.0
        for f, ap, aq in zip(factors, root_at_p, root_at_q)
    )
    for f in factors:
        if (
            not _is_same_point(p, f.root, scale)
            and not _is_same_point(q, f.root, scale)
        ):
            # reject roots in the open interior of the segment
            t = ((f.root - p) / span).real
            if 0.0 < t < 1.0 and abs(f.root - (p + t * span)) <= 1e-12 * max(
                scale, 1.0
            ):
                raise ValueError("factor root lies on a contour segment")

    def offsets(s: np.ndarray, sm1: np.ndarray, f: Factor, k: int) -> np.ndarray:
        if root_at_p[k]:
            return span * s
        if root_at_q[k]:
            return span * sm1
        return (p - f.root) + span * s

    def values(s: np.ndarray, sm1: np.ndarray) -> np.ndarray:
        u = p + span * s
        total = np.ones_like(s, dtype=complex)
        for k, f in enumerate(factors):
            if f.exponent == 0.0:
                continue
            w = f.scale * offsets(s, sm1, f, k)
            if root_at_p[k] or root_at_q[k]:
                # u - root keeps a fixed direction: argument is constant
                arg = args[k]
            else:
                w0 = f.scale * (p - f.root)
                arg = args[k] + np.angle(w / w0)
            total = total * np.exp(
                f.exponent * (np.log(np.abs(w)) + 1j * arg)
            )
        if prefactor is not None:
            total = total * prefactor(u)
        return total

    if singular:
        res = tanh_sinh(
            values,
            rel_tol=rel_tol,
            abs_tol=abs_tol / max(abs(span), 1e-300),
        )
    else:
        res = integrate_interval(
            lambda t: values(t, t - 1.0),
            0.0,
            1.0,
            rel_tol=rel_tol,
            abs_tol=abs_tol / max(abs(span), 1e-300),
        )
    # advance the tracked arguments to the segment end
    new_args = args.copy()
    for k, f in enumerate(factors):
        if root_at_p[k] or root_at_q[k]:
            continue
        w0 = f.scale * (p - f.root)
        w1 = f.scale * (q - f.root)
        new_args[k] = args[k] + np.angle(w1 / w0)
    return res.scaled(span), new_args


def _arc_piece(
    factors: Sequence[Factor],
    args: np.ndarray,
    seg: ArcSeg,
    prefactor: Callable[[np.ndarray], np.ndarray] | None,
    rel_tol: float,
    abs_tol: float,
    scale: float,
) -> tuple[QuadResult, np.ndarray]:
    c, r = complex(seg.center), float(seg.radius)
    th0, th1 = float(seg.theta0), float(seg.theta1)
    centered = [_is_same_point(c, f.root, scale) for f in factors]
    for k, f in enumerate(factors):
        if not centered[k] and abs(f.root - c) <= r * (1.0 + 1e-12):
            raise ValueError(
                "factor root inside an arc circle but not at its center"
            )
    u0 = c + r * np.exp(1j * th0)

    def values(theta: np.ndarray) -> np.ndarray:
        e_itheta = np.exp(1j * theta)
        u = c + r * e_itheta
        total = np.ones_like(theta, dtype=complex)
        for k, f in enumerate(factors):
            if f.exponent == 0.0:
                continue
            if centered[k]:
                mag = np.log(abs(f.scale) * r)
                arg = args[k] + (theta - th0)
                total = total * np.exp(f.exponent * (mag + 1j * arg))
            else:
                w = f.scale * (u - f.root)
                w0 = f.scale * (u0 - f.root)
                arg = args[k] + np.angle(w / w0)
                total = total * np.exp(
                    f.exponent * (np.log(np.abs(w)) + 1j * arg)
                )
        if prefactor is not None:
            total = total * prefactor(u)
        return total * 1j * r * e_itheta

    res = integrate_interval(
        lambda th: values(th),
        th0,
        th1,
        rel_tol=rel_tol,
        abs_tol=abs_tol / max(r, 1e-300),
    )
    u1 = c + r * np.exp(1j * th1)
    new_args = args.copy()
    for k, f in enumerate(factors):
        if centered[k]:
            new_args[k] = args[k] + (th1 - th0)
        else:
            w0 = f.scale * (u0 - f.root)
            w1 = f.scale * (u1 - f.root)
            new_args[k] = args[k] + np.angle(w1 / w0)
    return res, new_args


def integrate_contour(
    factors: Sequence[Factor],
    path: Sequence[LineSeg | ArcSeg],
    prefactor: Callable[[np.ndarray], np.ndarray] | None = None,
    rel_tol: float = DEFAULT_REL_TOL,
    abs_tol: float = DEFAULT_ABS_TOL,
) -> tuple[QuadResult, np.ndarray]:
    """Integrate the factor product along the path.

    Returns the quadrature result and the tracked factor arguments at the
    path end (start values are principal; the difference exposes the winding
    picked up along the way).
    """
    if not path:
        return QuadResult(0.0j, 0.0, 0), np.zeros(len(factors))
    scale = _path_scale(path)
    pieces: list[LineSeg | ArcSeg] = []
    for seg in path:
        if isinstance(seg, ArcSeg):
            pieces.extend(_split_arc(seg))
        else:
            pieces.append(seg)
    for a, b in zip(pieces[:-1], pieces[1:]):
        if not _is_same_point(a.end, b.start, scale):
            raise ValueError("contour path is not connected")
    args = _initial_args(factors, pieces, scale)
    total = QuadResult(0.0j, 0.0, 0)
    n = len(pieces)
    for seg in pieces:
        if isinstance(seg, LineSeg):
            res, args = _line_piece(
                factors, args, seg, prefactor, rel_tol, abs_tol / n, scale
            )
        else:
            res, args = _arc_piece(
                factors, args, seg, prefactor, rel_tol, abs_tol / n, scale
            )
        total = total + res
    return total, args
