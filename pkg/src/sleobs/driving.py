"""Samplers for the driving processes of the Loewner flow.

Three samplers share one step-size policy and one noise layout.  The
chordal driving term is a standard Brownian motion.  The one-sided
variant with a force point solves

    d xi1 = r / (xi1 - xi2) dt + dW,      r = rho / kappa,

with xi2 carried along as the image of the force point under the flow.
The two-sided variant drives both marks,

    d xi_j = (l1 + l2) / (xi_j - xi_other) dt + sqrt(kappa l_j / 2) dB_j,

with independent Brownian motions B_1, B_2 and growth speeds l_j >= 0.
Speeds are quoted in the same units as a = 2/kappa, so l1 = a, l2 = 0
reproduces the one-sided sampler with rho = 2 path by path.

Marks may sit in either order; the gap xi2 - xi1 keeps its initial sign
for the whole path or the sampler aborts with a step-size error.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .params import SLEParams
from .rng import CHANNEL_PRIMARY, CHANNEL_SECONDARY, NormalBlock

__all__ = [
    "StepScheme",
    "DrivingPath",
    "StepSizeError",
    "sample_driving_chordal",
    "sample_driving_slekr",
    "sample_driving_bichordal",
]

_KINDS = ("chordal", "slekr", "bichordal", "given")


class StepSizeError(RuntimeError):
    """Adaptive step fell through the guard without a stopping rule."""


@dataclass(frozen=True)
class StepScheme:
    """Adaptive step-size policy.

    A step is dt = (c / rate) * min(local squared scales, dt_max) where
    rate is the relevant growth speed and the local scales are squared
    distances to the active singularities.  c bounds the relative change
    per step of every tracked quantity; dt_max caps the step once all
    singularities are far away.
    """

    c: float = 0.01
    dt_max: float = 9.0
    gap_guard: float = 1e-9

    def __post_init__(self) -> None:
        if not (self.c > 0.0 and math.isfinite(self.c)):
            raise ValueError("c must be positive and finite")
        if not (self.dt_max > 0.0 and math.isfinite(self.dt_max)):
            raise ValueError("dt_max must be positive and finite")
        if not (self.gap_guard > 0.0):
            raise ValueError("gap_guard must be positive")


@dataclass
class DrivingPath:
    """Recorded driving process on its adaptive grid.

    xi2 is None for a chordal path.  When present, the gap xi2 - xi1 is
    nonzero with constant sign at every knot.  The growth rate a = 2/kappa
    of the flow the path was sampled for is recorded on the path; paths
    of kind "given" must set it explicitly to be trackable.
    """

    times: np.ndarray
    xi1: np.ndarray
    xi2: np.ndarray | None
    seed: int
    scheme: StepScheme
    kind: str
    a: float | None = None

    def __post_init__(self) -> None:
        self.times = np.asarray(self.times, dtype=float)
        self.xi1 = np.asarray(self.xi1, dtype=float)
        if self.kind not in _KINDS:
            raise ValueError(f"kind must be one of {_KINDS}")
        if self.times.ndim != 1 or self.times.size < 1:
            raise ValueError("times must be a nonempty 1-d array")
        if self.times[0] != 0.0:
            raise ValueError("times must start at 0")
        if np.any(np.diff(self.times) <= 0.0):
            raise ValueError("times must be strictly increasing")
        if self.xi1.shape != self.times.shape:
            raise ValueError("xi1 must match times")
        if self.xi2 is not None:
            self.xi2 = np.asarray(self.xi2, dtype=float)
            if self.xi2.shape != self.times.shape:
                raise ValueError("xi2 must match times")
            gap = self.xi2 - self.xi1
            if not (np.all(gap > 0.0) or np.all(gap < 0.0)):
                raise ValueError("gap xi2 - xi1 must keep one sign, nonzero")
        if self.a is not None and not (self.a > 0.0):
            raise ValueError("growth rate a must be positive")


def _horizon(T: float) -> float:
    if not (T > 0.0 and math.isfinite(T)):
        raise ValueError("T must be positive and finite")
    return float(T)


def sample_driving_chordal(params: SLEParams, T: float, seed: int,
                           scheme: StepScheme = StepScheme()) -> DrivingPath:
    """Brownian driving path on the policy grid.

    The driving law is kappa-free; kappa enters only through the growth
    rate a = 2/kappa used by the step-size policy and later by the flow.
    """
    T = _horizon(T)
    noise = NormalBlock(seed, np.array([0], dtype=np.uint64), CHANNEL_PRIMARY)
    step = (scheme.c / params.a) * scheme.dt_max
    times = [0.0]
    xs = [0.0]
    t, x = 0.0, 0.0
    while t < T:
        rem = T - t
        dt = min(step, rem)
        if dt >= rem * (1.0 - 1e-12):
            dt, t = rem, T
        else:
            t = t + dt
        x = x + math.sqrt(dt) * noise.column()[0]
        times.append(t)
        xs.append(x)
    return DrivingPath(np.array(times), np.array(xs), None, int(seed), scheme,
                       "chordal", a=params.a)


def sample_driving_slekr(params: SLEParams, xi1: float, xi2: float, T: float,
                         seed: int,
                         scheme: StepScheme = StepScheme()) -> DrivingPath:
    """One-sided driving with a force point, Euler on the seed mark.

    The force-point image advances through the exact cell map of the
    slit grown in that step, which preserves the mark ordering exactly;
    its first-order expansion is the usual image flow a dt/(xi2 - xi1).
    """
    T = _horizon(T)
    if params.rho is None:
        raise ValueError("params must carry rho for a force-point sampler")
    if xi1 == xi2:
        raise ValueError("marks must be distinct")
    a, r, c = params.a, params.r, scheme.c
    noise = NormalBlock(seed, np.array([0], dtype=np.uint64), CHANNEL_PRIMARY)
    times, xs1, xs2 = [0.0], [float(xi1)], [float(xi2)]
    t, x1, x2 = 0.0, float(xi1), float(xi2)
    sign0 = math.copysign(1.0, x2 - x1)
    while t < T:
        gap = x2 - x1
        if abs(gap) <= scheme.gap_guard or math.copysign(1.0, gap) != sign0:
            raise StepSizeError("gap collapsed at t = %.6g" % t)
        rem = T - t
        dt = min((c / a) * min(gap * gap, scheme.dt_max), rem)
        if dt >= rem * (1.0 - 1e-12):
            dt, t = rem, T
        else:
            t = t + dt
        x1n = x1 + r / (x1 - x2) * dt + math.sqrt(dt) * noise.column()[0]
        xh = 0.5 * (x1 + x1n)
        d = x2 - xh
        x2 = xh + math.copysign(math.sqrt(d * d + 2.0 * a * dt), d)
        x1 = x1n
        times.append(t)
        xs1.append(x1)
        xs2.append(x2)
    return DrivingPath(np.array(times), np.array(xs1), np.array(xs2),
                       int(seed), scheme, "slekr", a=params.a)


def sample_driving_bichordal(params: SLEParams, xi1: float, xi2: float,
                             lambda1: float, lambda2: float, T: float,
                             seed: int,
                             scheme: StepScheme = StepScheme()) -> DrivingPath:
    """Two-sided driving with growth speeds lambda1, lambda2.

    A mark with zero speed carries no noise; it then advances through
    the exact cell map of the other mark's slit, so the zero-speed
    reduction agrees with sample_driving_slekr path by path.
    """
    T = _horizon(T)
    if xi1 == xi2:
        raise ValueError("marks must be distinct")
    if lambda1 < 0.0 or lambda2 < 0.0:
        raise ValueError("growth speeds must be nonnegative")
    rate = max(lambda1, lambda2)
    if rate == 0.0:
        raise ValueError("at least one growth speed must be positive")
    c = scheme.c
    drift = lambda1 + lambda2
    s1 = math.sqrt(params.kappa * lambda1 / 2.0)
    s2 = math.sqrt(params.kappa * lambda2 / 2.0)
    n1 = NormalBlock(seed, np.array([0], dtype=np.uint64), CHANNEL_PRIMARY)
    n2 = NormalBlock(seed, np.array([0], dtype=np.uint64), CHANNEL_SECONDARY)
    times, xs1, xs2 = [0.0], [float(xi1)], [float(xi2)]
    t, x1, x2 = 0.0, float(xi1), float(xi2)
    sign0 = math.copysign(1.0, x2 - x1)
    while t < T:
        gap = x2 - x1
        if abs(gap) <= scheme.gap_guard or math.copysign(1.0, gap) != sign0:
            raise StepSizeError("gap collapsed at t = %.6g" % t)
        rem = T - t
        dt = min((c / rate) * min(gap * gap, scheme.dt_max), rem)
        if dt >= rem * (1.0 - 1e-12):
            dt, t = rem, T
        else:
            t = t + dt
        if lambda1 > 0.0:
            x1n = x1 + drift / (x1 - x2) * dt + s1 * (math.sqrt(dt) * n1.column()[0])
        else:
            x1n = None
        if lambda2 > 0.0:
            x2n = x2 + drift / (x2 - x1) * dt + s2 * (math.sqrt(dt) * n2.column()[0])
        else:
            x2n = None
        if x1n is None:
            xh = 0.5 * (x2 + x2n)
            d = x1 - xh
            x1n = xh + math.copysign(math.sqrt(d * d + 2.0 * lambda2 * dt), d)
        if x2n is None:
            xh = 0.5 * (x1 + x1n)
            d = x2 - xh
            x2n = xh + math.copysign(math.sqrt(d * d + 2.0 * lambda1 * dt), d)
        x1, x2 = x1n, x2n
        times.append(t)
        xs1.append(x1)
        xs2.append(x2)
    return DrivingPath(np.array(times), np.array(xs1), np.array(xs2),
                       int(seed), scheme, "bichordal", a=params.a)
