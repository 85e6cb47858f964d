"""Tracking of interior points under a recorded Loewner flow.

The flow of an observation point z solves

    dZ = a dt / (Z - xi1),    d(log g') = -a dt / (Z - xi1)^2,

with the conformal radius proxy Upsilon = Im Z / |g'|.  Instead of an
Euler step, every substep applies the exact map of the vertical slit
grown in that substep around the midpoint driving value

    Z' = xh + sqrt((Z - xh)^2 + 2 a dt),     xh = (xi(t) + xi(t+dt)) / 2,

which keeps zero-driving flows exact to rounding and makes Upsilon
decrease monotonically step by step.

A point usually needs finer time resolution than the driving grid was
sampled on.  Cells of a sampled path are subdivided on demand, with the
missing driving values filled in by Brownian-bridge interpolation from
the bridge noise channel of the path's seed; cells of a "given" path
are subdivided linearly.  The refinement keyed to a fixed (path, point,
rule) triple is deterministic.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .driving import DrivingPath
from .rng import bridge_stream

__all__ = ["StopRule", "PointTrack", "StepInstabilityError", "track_point"]

_DIST_GUARD2 = 1e-14
_SUBSTEP_BUDGET = 5_000_000


class StepInstabilityError(RuntimeError):
    """Point approached the growth site with no stopping rule to fire."""


@dataclass(frozen=True)
class StopRule:
    """Termination rule for a track.

    Checks run in the order angle, upsilon, time.  With every field
    None the track runs to the end of the driving path.
    """

    angle_n: float | None = None      # stop once sin(theta1) <= 1/angle_n
    upsilon_floor: float | None = None
    t_max: float | None = None

    def __post_init__(self) -> None:
        if self.angle_n is not None and not (self.angle_n > 1.0):
            raise ValueError("angle_n must exceed 1")
        if self.upsilon_floor is not None and not (self.upsilon_floor > 0.0):
            raise ValueError("upsilon_floor must be positive")
        if self.t_max is not None and not (self.t_max > 0.0):
            raise ValueError("t_max must be positive")


@dataclass
class PointTrack:
    """States of one tracked point at the recorded knots.

    theta1 = arg(Z - xi1) and theta2 = arg(Z - xi2); theta2 is NaN for
    paths without a second mark.  terminated names the rule that ended
    the track: "angle", "upsilon", or "time".
    """

    times: np.ndarray
    Z: np.ndarray
    log_gprime: np.ndarray
    theta1: np.ndarray
    theta2: np.ndarray
    upsilon: np.ndarray
    terminated: str


def track_point(driving: DrivingPath, z: complex,
                stop: StopRule = StopRule()) -> PointTrack:
    """Integrate one observation point along a driving path."""
    z = complex(z)
    if not (z.imag > 0.0):
        raise ValueError("observation point must lie in the upper half-plane")
    if driving.a is None:
        raise ValueError("driving path does not record a growth rate")
    if driving.kind == "bichordal":
        raise ValueError("two-sided flows are not trackable point by point")
    a = driving.a
    c = driving.scheme.c
    dt_max = driving.scheme.dt_max
    bridged = driving.kind in ("chordal", "slekr")
    bridge = bridge_stream(driving.seed, 0) if bridged else None
    has_x2 = driving.xi2 is not None

    ts = driving.times
    xs = driving.xi1
    Z = z
    lg = 0.0
    x2 = float(driving.xi2[0]) if has_x2 else math.nan

    times = [0.0]
    zs = [Z]
    lgs = [0.0]
    th1 = [cmath.phase(z - xs[0])]
    th2 = [cmath.phase(z - x2) if has_x2 else math.nan]
    ups = [z.imag]

    budget = _SUBSTEP_BUDGET
    tag: str | None = None

    def record(t_abs: float, x_cur: float) -> None:
        times.append(t_abs)
        zs.append(Z)
        lgs.append(lg)
        th1.append(cmath.phase(Z - x_cur))
        th2.append(cmath.phase(Z - x2) if has_x2 else math.nan)
        ups.append(Z.imag * math.exp(-lg))

    def check(t_abs: float, x_cur: float) -> str | None:
        w = Z - x_cur
        if stop.angle_n is not None and abs(w.imag) <= abs(w) / stop.angle_n:
            return "angle"
        if stop.upsilon_floor is not None and \
                Z.imag * math.exp(-lg) <= stop.upsilon_floor:
            return "upsilon"
        if stop.t_max is not None and t_abs >= stop.t_max - 1e-15:
            return "time"
        return None

    for k in range(ts.size - 1):
        t0 = ts[k]
        dt_cell = ts[k + 1] - t0
        xa, xb = xs[k], xs[k + 1]
        x_cur = xa
        tau = 0.0
        while tau < dt_cell:
            rel = Z - x_cur
            dist2 = rel.real * rel.real + rel.imag * rel.imag
            if dist2 < _DIST_GUARD2:
                # discrete jump into the growth site: the continuum flow
                # ends such a track through its stopping rule, because
                # theta1 exits and Upsilon vanishes at the swallowing
                # time; resolve it with the rule that had to fire
                if stop.angle_n is not None:
                    tag = "angle"
                elif stop.upsilon_floor is not None:
                    tag = "upsilon"
                else:
                    raise StepInstabilityError(
                        "tracked point reached the growth site at t = %.6g "
                        "without a stopping rule" % (t0 + tau))
                record(t0 + tau, x_cur)
                return _finish(times, zs, lgs, th1, th2, ups, tag)
            rem = dt_cell - tau
            sub = (c / a) * min(dist2, dt_max)
            if stop.t_max is not None:
                # land on the time cap exactly instead of overshooting
                left = stop.t_max - (t0 + tau)
                if 0.0 < left < rem:
                    sub = min(sub, left)
            if sub >= rem * (1.0 - 1e-12):
                sub = rem
                x_next = xb
                tau = dt_cell
            else:
                frac = sub / rem
                x_next = x_cur + (xb - x_cur) * frac
                if bridged:
                    x_next += math.sqrt(sub * (rem - sub) / rem) * \
                        bridge.standard_normal()
                tau += sub
            xh = 0.5 * (x_cur + x_next)
            w = Z - xh
            s = cmath.sqrt(w * w + 2.0 * a * sub)
            if s.imag < 0.0:
                s = -s
            lg += 0.5 * (math.log(w.real * w.real + w.imag * w.imag)
                         - math.log(s.real * s.real + s.imag * s.imag))
            Z = xh + s
            if has_x2:
                d = x2 - xh
                x2 = xh + math.copysign(math.sqrt(d * d + 2.0 * a * sub), d)
            x_cur = x_next
            budget -= 1
            if budget <= 0:
                raise StepInstabilityError("substep budget exhausted")
            t_abs = t0 + tau if tau < dt_cell else ts[k + 1]
            tag = check(t_abs, x_cur)
            if tag is not None:
                record(t_abs, x_cur)
                return _finish(times, zs, lgs, th1, th2, ups, tag)
        record(ts[k + 1], xs[k + 1])
    return _finish(times, zs, lgs, th1, th2, ups, "time")


def _finish(times, zs, lgs, th1, th2, ups, tag) -> PointTrack:
    return PointTrack(
        times=np.array(times),
        Z=np.array(zs),
        log_gprime=np.array(lgs),
        theta1=np.array(th1),
        theta2=np.array(th2),
        upsilon=np.array(ups),
        terminated=tag,
    )
