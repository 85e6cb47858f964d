"""Monte Carlo estimators for the passage, Green, and radial observables.

Every estimator is a pure function of (config, seed): lanes draw from
counter-keyed streams, so results do not depend on block size or thread
count.  Standard errors are binomial or delta-method with the shared
driving covariance; ratio estimates of two points always reuse one flow
per lane, which cancels most of the common noise.

The martingale drift test freezes each lane's observable along the flow
and reports the largest pairwise discrepancy between checkpoint means
in units of its standard error.  The Green observable is evaluated on
the flow stopped at an Upsilon floor; without the stop the discrete
observable decays near swallowing and the test would read a spurious
drift.
"""

from __future__ import annotations

import math
import multiprocessing
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import InterpolatedUnivariateSpline, RectBivariateSpline
from scipy.special import betainc

from . import engine
from .driving import StepScheme, StepSizeError
from .green import AngleArgs, chordal_green, green_G, h_angles, h_integer
from .params import SLEParams
from .schramm import schramm_kappa4, schramm_probability
from .special import c_star

__all__ = [
    "ApproachExponentConfig",
    "DriftTestResult",
    "EstimatorResult",
    "GreenRatioConfig",
    "InsufficientSamplesError",
    "MartingaleConfig",
    "PassageConfig",
    "QualityWarning",
    "RadialStationaryResult",
    "estimate_approach_exponent",
    "estimate_green_ratio",
    "estimate_left_passage",
    "martingale_drift_test",
    "radial_bessel_stationary",
]

# unterminated-lane fraction above which an estimate gets a warning
_UNTERMINATED_WARN = 0.01
# boundary-reflection events per lane step above which radial warns
_REFLECTION_WARN = 1e-3
# surrogate splines must reproduce direct values this closely at probes
_SURROGATE_TOL = 5e-4
_SURROGATE_GRID = 64
# the passage integrand is costly near the box edges, so its surrogate
# uses a coarser grid; the probe check still gates the accuracy
_SCHRAMM_GRID = 48
_SURROGATE_PROBES = 16


class QualityWarning(UserWarning):
    """An estimate was produced but a quality indicator is degraded."""


class InsufficientSamplesError(RuntimeError):
    """No qualifying samples; the estimate would be degenerate."""


@dataclass(frozen=True)
class EstimatorResult:
    estimate: float
    std_error: float
    n_samples: int
    seed: int
    extras: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        if not self.std_error >= 0.0:
            raise ValueError("std_error must be nonnegative")


@dataclass(frozen=True)
class DriftTestResult:
    checkpoints: tuple
    results: tuple
    max_pairwise_z: float
    discarded: int
    n_samples: int
    seed: int


@dataclass(frozen=True)
class RadialStationaryResult:
    ks_distance: float
    histogram: tuple
    mean_theta: float
    reflections: int
    reflection_fraction: float
    n_samples: int
    seed: int
    warnings: tuple


def _check_common(params: SLEParams, kind: str, n_samples: int,
                  xi1: float, xi2: float | None) -> None:
    if kind not in ("chordal", "slekr"):
        raise ValueError(f"kind must be 'chordal' or 'slekr', got {kind!r}")
    if kind == "slekr":
        if params.rho is None:
            raise ValueError("slekr runs need params.rho")
        if xi2 is None or xi2 == xi1:
            raise ValueError("slekr runs need distinct xi1, xi2")
    elif xi2 is not None:
        raise ValueError("chordal runs take no second mark")
    if n_samples < 1:
        raise ValueError("n_samples must be positive")


@dataclass(frozen=True)
class PassageConfig:
    """Left-passage estimate of one interior point."""

    params: SLEParams
    kind: str
    z: complex
    n_samples: int
    xi1: float = 0.0
    xi2: float | None = None
    angle_n: float = 100.0
    t_max: float = 256.0
    scheme: StepScheme = StepScheme()

    def __post_init__(self) -> None:
        _check_common(self.params, self.kind, self.n_samples,
                      self.xi1, self.xi2)
        if complex(self.z).imag <= 0.0:
            raise ValueError("z must lie in the open upper half-plane")
        if not self.angle_n > 1.0:
            raise ValueError("angle_n must exceed 1")
        if not self.t_max > 0.0:
            raise ValueError("t_max must be positive")


@dataclass(frozen=True)
class GreenRatioConfig:
    """Ratio of Upsilon-hit frequencies of two points on one flow."""

    params: SLEParams
    kind: str
    z1: complex
    z2: complex
    eps: float
    n_samples: int
    xi1: float = 0.0
    xi2: float | None = None
    angle_n: float = 100.0
    t_max: float = 64.0
    scheme: StepScheme = StepScheme()

    def __post_init__(self) -> None:
        _check_common(self.params, self.kind, self.n_samples,
                      self.xi1, self.xi2)
        for z in (self.z1, self.z2):
            if complex(z).imag <= 0.0:
                raise ValueError("points must lie in the upper half-plane")
        if not self.eps > 0.0:
            raise ValueError("eps must be positive")
        min_im = min(complex(self.z1).imag, complex(self.z2).imag)
        # the hit asymptotics need eps well below the initial Upsilon
        if self.eps > 0.1 * min_im:
            raise ValueError("eps must not exceed a tenth of min Im z")
        if not self.angle_n > 1.0:
            raise ValueError("angle_n must exceed 1")
        if not self.t_max > 0.0:
            raise ValueError("t_max must be positive")


@dataclass(frozen=True)
class MartingaleConfig:
    """Flow and evaluation settings for the drift test."""

    params: SLEParams
    kind: str
    z: complex
    n_samples: int
    xi1: float = 0.0
    xi2: float | None = None
    upsilon_floor_frac: float = 0.05
    evaluator: str = "auto"
    scheme: StepScheme = StepScheme()

    def __post_init__(self) -> None:
        _check_common(self.params, self.kind, self.n_samples,
                      self.xi1, self.xi2)
        if complex(self.z).imag <= 0.0:
            raise ValueError("z must lie in the open upper half-plane")
        if not 0.0 < self.upsilon_floor_frac < 1.0:
            raise ValueError("upsilon_floor_frac must lie in (0, 1)")
        if self.evaluator not in ("auto", "direct", "surrogate"):
            raise ValueError("evaluator must be auto, direct, or surrogate")


@dataclass(frozen=True)
class ApproachExponentConfig:
    """Decay of the conformal gap width below small thresholds."""

    params: SLEParams
    n_samples: int
    xi1: float = 0.0
    xi2: float = 1.0
    eps_values: tuple = (0.1, 0.05, 0.025)
    T: float = 64.0
    scheme: StepScheme = StepScheme()

    def __post_init__(self) -> None:
        if self.params.rho is None:
            raise ValueError("exponent runs need params.rho")
        if not self.xi2 > self.xi1:
            raise ValueError("exponent runs expect xi1 < xi2")
        if len(self.eps_values) < 2:
            raise ValueError("need at least two eps levels")
        if any(not e > 0.0 for e in self.eps_values):
            raise ValueError("eps levels must be positive")
        if len(set(self.eps_values)) != len(self.eps_values):
            raise ValueError("eps levels must be distinct")
        if not self.T > 0.0:
            raise ValueError("T must be positive")
        if self.n_samples < 1:
            raise ValueError("n_samples must be positive")


# ---------------------------------------------------------------------------
# passage


def estimate_left_passage(config: PassageConfig, seed: int, *,
                          threads: int = 1) -> EstimatorResult:
    """Frequency of lanes whose point ends left of the trace.

    Lanes stop at angle convergence or at t_max; lanes still open at
    t_max classify by their current angle and are reported (and, above
    one percent, warned about) as unterminated.
    """
    p = config.params
    r = p.r if config.kind == "slekr" else None
    out = engine.run_passage(p.a, r, complex(config.z), config.xi1,
                             config.xi2, config.n_samples, seed,
                             config.scheme, config.angle_n, config.t_max,
                             threads=threads)
    if out["guard_hits"]:
        raise StepSizeError(
            f"force-point gap collapsed in {out['guard_hits']} lanes; "
            "reduce the step constant or the horizon")
    n = config.n_samples
    left = out["left"]
    if left == 0 or left == n:
        raise InsufficientSamplesError(
            f"all {n} lanes classified the same way; no variance estimate")
    est = left / n
    se = math.sqrt(est * (1.0 - est) / n)
    unterm = out["unterminated"] / n
    warns = []
    if unterm > _UNTERMINATED_WARN:
        warns.append(
            f"{100.0 * unterm:.2f}% of lanes unterminated at t_max="
            f"{config.t_max:g}; estimate may carry classification bias")
    for w in warns:
        warnings.warn(w, QualityWarning, stacklevel=2)
    extras = {
        "left": left,
        "unterminated": out["unterminated"],
        "unterminated_fraction": unterm,
        "warnings": tuple(warns),
    }
    return EstimatorResult(est, se, n, seed, extras)


# ---------------------------------------------------------------------------
# Green ratio


def estimate_green_ratio(config: GreenRatioConfig, seed: int, *,
                         threads: int = 1) -> EstimatorResult:
    """Ratio of the eps-hit frequencies of z1 and z2.

    Both points ride the same flow, and the delta-method error uses
    their joint hit counts, so the shared-noise covariance is kept.
    As eps -> 0 the ratio converges to the ratio of Green values.
    """
    p = config.params
    r = p.r if config.kind == "slekr" else None
    out = engine.run_hits(p.a, r, (complex(config.z1), complex(config.z2)),
                          (config.eps, config.eps), config.xi1, config.xi2,
                          config.n_samples, seed, config.scheme,
                          config.angle_n, config.t_max, threads=threads)
    if out["guard_hits"]:
        raise StepSizeError(
            f"force-point gap collapsed in {out['guard_hits']} lanes; "
            "reduce the step constant or the horizon")
    n = config.n_samples
    c1, c2 = (int(v) for v in out["counts"])
    if c1 == 0 or c2 == 0:
        raise InsufficientSamplesError(
            f"hit counts ({c1}, {c2}) at eps={config.eps:g}; "
            "increase n_samples or eps")
    p1, p2 = c1 / n, c2 / n
    p12 = int(out["joint"][0, 1]) / n
    est = p1 / p2
    var = (p1 * (1.0 - p1) / p2**2
           + p1**2 * p2 * (1.0 - p2) / p2**4
           - 2.0 * p1 * (p12 - p1 * p2) / p2**3) / n
    se = math.sqrt(max(0.0, var))
    # absolute normalizations, informational: P ~ c_* G eps^(2-d)
    scale = config.eps ** (2.0 - p.d) * c_star(p.a)
    extras = {
        "counts": (c1, c2),
        "joint": p12,
        "p1": p1,
        "p2": p2,
        "G1_absolute": p1 / scale,
        "G2_absolute": p2 / scale,
        "warnings": (),
    }
    return EstimatorResult(est, se, n, seed, extras)


# ---------------------------------------------------------------------------
# observable evaluators for the drift test


def _mirror_states(Z: np.ndarray, x1: np.ndarray,
                   x2: np.ndarray) -> tuple[np.ndarray, np.ndarray, bool]:
    """Reduce to a positive gap; returns (w, gap, flipped)."""
    gap = x2 - x1
    if gap[0] > 0.0:
        return Z - x1, gap, False
    return -np.conj(Z - x1), -gap, True


def _graded_axis(lo: float, hi: float, n: int) -> np.ndarray:
    """Strictly increasing axis clustered at both ends (cosine spacing)."""
    s = np.linspace(0.0, np.pi, n)
    return lo + (hi - lo) * 0.5 * (1.0 - np.cos(s))


def _wedge_coords(w: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Map scaled states (marks at 0 and 1) to rectangle coordinates.

    theta1 = arg(w), theta2 = arg(w - 1) satisfy theta1 < theta2; the
    fraction q = (theta2 - theta1)/(pi - theta1) unfolds the wedge into
    a rectangle, with the mark corners on resolvable edges.
    """
    t1 = np.angle(w)
    t2 = np.angle(w - 1.0)
    q = (t2 - t1) / (np.pi - t1)
    return t1, q


# states are clipped this far inside the admissible open rectangle; at
# the clip the observables are saturated to well below target accuracy
_WEDGE_CLIP = 1e-3


def _h_node(args: tuple) -> float:
    """Angular Green factor at one grid node; module level so a worker
    pool can pickle it."""
    tt, qq, kappa, rho = args
    p = SLEParams(kappa, rho)
    a = AngleArgs(tt, tt + qq * (math.pi - tt))
    n = p.integer_alpha
    return h_integer(a, n) if n is not None else h_angles(a, p)


def _schramm_node(args: tuple) -> float:
    """Passage probability at one grid node, with the point recovered
    from the angle chart: |w| = sin(theta2)/sin(theta2 - theta1)."""
    tt, qq, kappa, rho = args
    th2 = tt + qq * (math.pi - tt)
    rad = math.sin(th2) / math.sin(th2 - tt)
    return schramm_probability(rad * complex(math.cos(tt), math.sin(tt)),
                               1.0, SLEParams(kappa, rho))


class _WedgeSurrogate:
    """Cubic spline of a two-point observable over the angle rectangle.

    The grid spans the (theta1, q) bounding box of the states that will
    be evaluated, so no extrapolation occurs; the fitted spline is then
    checked against direct values at states drawn from the data.  Node
    evaluation fans out to a process pool when workers > 1; the result
    never depends on the pool size.
    """

    def __init__(self, worker, extra: tuple, t1: np.ndarray, q: np.ndarray,
                 *, grid: int = _SURROGATE_GRID, workers: int = 1):
        t1 = np.clip(t1, _WEDGE_CLIP, np.pi - _WEDGE_CLIP)
        q = np.clip(q, _WEDGE_CLIP, 1.0 - _WEDGE_CLIP)
        pad_t = 0.01 * (t1.max() - t1.min() + 0.1)
        pad_q = 0.01 * (q.max() - q.min() + 0.1)
        self.t_lo = max(_WEDGE_CLIP, t1.min() - pad_t)
        self.t_hi = min(np.pi - _WEDGE_CLIP, t1.max() + pad_t)
        self.q_lo = max(_WEDGE_CLIP, q.min() - pad_q)
        self.q_hi = min(1.0 - _WEDGE_CLIP, q.max() + pad_q)
        tg = _graded_axis(self.t_lo, self.t_hi, grid)
        qg = _graded_axis(self.q_lo, self.q_hi, grid)
        stride = max(1, t1.size // _SURROGATE_PROBES)
        pt = t1[::stride][:_SURROGATE_PROBES]
        pq = q[::stride][:_SURROGATE_PROBES]
        node_args = [(tt, qq) + extra for tt in tg for qq in qg]
        probe_args = [(a, b) + extra for a, b in zip(pt, pq)]
        if workers > 1:
            ctx = multiprocessing.get_context("spawn")
            with ctx.Pool(workers) as pool:
                flat = pool.map(worker, node_args, chunksize=4)
                direct = pool.map(worker, probe_args)
        else:
            flat = [worker(ar) for ar in node_args]
            direct = [worker(ar) for ar in probe_args]
        vals = np.array(flat).reshape(tg.size, qg.size)
        self.spline = RectBivariateSpline(tg, qg, vals, kx=3, ky=3)
        self.probe_error = float(np.max(np.abs(
            self.spline.ev(pt, pq) - np.array(direct))))
        if self.probe_error > _SURROGATE_TOL:
            raise RuntimeError(
                f"surrogate probe error {self.probe_error:.2e} exceeds "
                f"{_SURROGATE_TOL:.0e}; refine the grid")

    def __call__(self, t1: np.ndarray, q: np.ndarray) -> np.ndarray:
        return self.spline.ev(np.clip(t1, self.t_lo, self.t_hi),
                              np.clip(q, self.q_lo, self.q_hi))


class _Surrogate1D:
    """Cubic spline of a chordal observable over the angle."""

    def __init__(self, fn, n_nodes: int = 128):
        th = np.linspace(1e-4, np.pi - 1e-4, n_nodes)
        vals = np.array([fn(t) for t in th])
        self.lo, self.hi = th[0], th[-1]
        self.spline = InterpolatedUnivariateSpline(th, vals, k=3)
        rng = np.random.default_rng(0)
        probes = rng.uniform(self.lo, self.hi, _SURROGATE_PROBES)
        direct = np.array([fn(t) for t in probes])
        self.probe_error = float(np.max(np.abs(self.spline(probes) - direct)))
        if self.probe_error > _SURROGATE_TOL:
            raise RuntimeError(
                f"surrogate probe error {self.probe_error:.2e} exceeds "
                f"{_SURROGATE_TOL:.0e}; refine the grid")

    def __call__(self, th: np.ndarray) -> np.ndarray:
        return self.spline(np.clip(th, self.lo, self.hi))


# a chordal observable is evaluated as the two-point one with the far
# mark pushed out to this distance
_FAR_MARK = 1e8


def _schramm_values(cfg: MartingaleConfig, snaps: list[dict],
                    workers: int = 1) -> list[np.ndarray]:
    p = cfg.params
    mode = cfg.evaluator
    if mode == "auto":
        mode = "direct" if p.kappa == 4.0 else "surrogate"
    out = []
    if cfg.kind == "chordal":
        if p.kappa == 4.0 and mode != "surrogate":
            for s in snaps:
                out.append(np.angle(s["Z"] - s["xi1"]) / np.pi)
            return out
        chordal_p = SLEParams(p.kappa, 0.0)

        def fn(th: float) -> float:
            return schramm_probability(complex(math.cos(th), math.sin(th)),
                                       _FAR_MARK, chordal_p)

        if mode == "direct":
            for s in snaps:
                th = np.angle(s["Z"] - s["xi1"])
                out.append(np.array([fn(t) for t in th]))
            return out
        sur = _Surrogate1D(fn)
        for s in snaps:
            out.append(sur(np.angle(s["Z"] - s["xi1"])))
        return out

    reduced = [_mirror_states(s["Z"], s["xi1"], s["xi2"]) for s in snaps]
    if p.kappa == 4.0 and mode != "surrogate":
        for w, gap, flipped in reduced:
            vals = np.array([schramm_kappa4(complex(wi), gi)
                             for wi, gi in zip(w, gap)])
            out.append(1.0 - vals if flipped else vals)
        return out
    if mode == "direct":
        for w, gap, flipped in reduced:
            vals = np.array([schramm_probability(complex(wi), gi, p)
                             for wi, gi in zip(w, gap)])
            out.append(1.0 - vals if flipped else vals)
        return out
    t1s, qs = _wedge_coords(np.concatenate([w / gap
                                            for w, gap, _ in reduced]))
    sur = _WedgeSurrogate(_schramm_node, (p.kappa, p.rho), t1s, qs,
                          grid=_SCHRAMM_GRID, workers=workers)
    for w, gap, flipped in reduced:
        vals = sur(*_wedge_coords(w / gap))
        out.append(1.0 - vals if flipped else vals)
    return out


def _green_values(cfg: MartingaleConfig, snaps: list[dict],
                  workers: int = 1) -> list[np.ndarray]:
    p = cfg.params
    mode = cfg.evaluator
    if mode == "auto":
        mode = "direct" if p.kappa == 4.0 else "surrogate"
    weight_exp = 2.0 - p.d
    out = []
    if cfg.kind == "chordal":
        if mode == "direct":
            for s in snaps:
                w = s["Z"] - s["xi1"]
                g = np.array([chordal_green(complex(wi), p) for wi in w])
                out.append(np.exp(weight_exp * s["lg"]) * g)
            return out
        sur = _Surrogate1D(
            lambda th: chordal_green(complex(math.cos(th), math.sin(th)), p))
        for s in snaps:
            w = s["Z"] - s["xi1"]
            rad = np.abs(w)
            g = rad ** (p.d - 2.0) * sur(np.angle(w))
            out.append(np.exp(weight_exp * s["lg"]) * g)
        return out

    reduced = [_mirror_states(s["Z"], s["xi1"], s["xi2"]) for s in snaps]
    if mode == "direct":
        for (w, gap, _), s in zip(reduced, snaps):
            g = np.array([green_G(complex(wi), 0.0, gi, p)
                          for wi, gi in zip(w, gap)])
            out.append(np.exp(weight_exp * s["lg"]) * g)
        return out
    # G factors as Im(z)**(d-2) * h(theta1, theta2), so the weighted
    # observable is Upsilon**(d-2) * h; with the Upsilon floor active
    # the prefactor is bounded and absolute accuracy on h suffices
    t1s, qs = _wedge_coords(np.concatenate([w / gap
                                            for w, gap, _ in reduced]))
    sur = _WedgeSurrogate(_h_node, (p.kappa, p.rho), t1s, qs,
                          workers=workers)
    for (w, gap, _), s in zip(reduced, snaps):
        ups = w.imag * np.exp(-s["lg"])
        out.append(ups ** (p.d - 2.0) * sur(*_wedge_coords(w / gap)))
    return out


def martingale_drift_test(kind: str, config: MartingaleConfig,
                          checkpoints: tuple, seed: int, *,
                          threads: int = 1) -> DriftTestResult:
    """Checkpoint means of a conditioned observable along the flow.

    kind 'schramm' evaluates the passage probability of the evolved
    configuration; kind 'green' the derivative-weighted Green value on
    the flow stopped at upsilon_floor_frac times the initial Upsilon.
    The statistic is the largest |mean_i - mean_j| over checkpoint
    pairs in units of sqrt(se_i^2 + se_j^2).
    """
    if kind not in ("schramm", "green"):
        raise ValueError(f"kind must be 'schramm' or 'green', got {kind!r}")
    cps = tuple(float(t) for t in checkpoints)
    if not cps:
        raise ValueError("need at least one checkpoint")
    if any(t < 0.0 for t in cps) or any(
            b < a for a, b in zip(cps, cps[1:])):
        raise ValueError("checkpoints must be nondecreasing and >= 0")
    p = config.params
    r = p.r if config.kind == "slekr" else None
    floor = (config.upsilon_floor_frac * complex(config.z).imag
             if kind == "green" else None)
    out = engine.run_snapshots(p.a, r, complex(config.z), config.xi1,
                               config.xi2, cps, config.n_samples, seed,
                               config.scheme, floor, threads=threads)
    if out["guard_hits"]:
        raise StepSizeError(
            f"force-point gap collapsed in {out['guard_hits']} lanes; "
            "reduce the step constant or the horizon")
    snaps = out["snapshots"]
    values = (_schramm_values(config, snaps) if kind == "schramm"
              else _green_values(config, snaps))
    stacked = np.vstack(values)
    valid = np.all(np.isfinite(stacked), axis=0)
    discarded = int(config.n_samples - valid.sum())
    if not valid.any():
        raise InsufficientSamplesError("every lane failed evaluation")
    kept = stacked[:, valid]
    nv = kept.shape[1]
    results = []
    for i, tk in enumerate(cps):
        m = float(kept[i].mean())
        sd = float(kept[i].std(ddof=1)) if nv > 1 else 0.0
        results.append(EstimatorResult(m, sd / math.sqrt(nv), nv, seed,
                                       {"t": tk, "discarded": discarded,
                                        "warnings": ()}))
    max_z = 0.0
    for i in range(len(cps)):
        for j in range(i + 1, len(cps)):
            diff = abs(results[i].estimate - results[j].estimate)
            denom = math.hypot(results[i].std_error, results[j].std_error)
            if diff > 0.0 and denom == 0.0:
                max_z = math.inf
            elif denom > 0.0:
                max_z = max(max_z, diff / denom)
    return DriftTestResult(cps, tuple(results), max_z, discarded,
                           config.n_samples, seed)


# ---------------------------------------------------------------------------
# radial stationarity


def _radial_cdf(a: float, theta: np.ndarray) -> np.ndarray:
    """Stationary law of d Theta = 2a cot(Theta) dt + dB on (0, pi)."""
    s2 = np.sin(theta) ** 2
    half = 0.5 * betainc(2.0 * a + 0.5, 0.5, s2)
    return np.where(theta <= 0.5 * np.pi, half, 1.0 - half)


def radial_bessel_stationary(params: SLEParams, T: float, dt: float,
                             n_samples: int, seed: int, *,
                             theta0: float = 0.5 * math.pi, bins: int = 50,
                             threads: int = 1) -> RadialStationaryResult:
    """Endpoint histogram of the radial angle and its KS distance.

    The angle diffuses under the exact drift flow split around the
    noise kick; excursions outside (0, pi) re-enter by reflection and
    are counted, with a warning above one event per thousand steps.
    """
    if not T > 0.0 or not dt > 0.0 or dt > T:
        raise ValueError("need 0 < dt <= T")
    if not 0.0 < theta0 < math.pi:
        raise ValueError("theta0 must lie in (0, pi)")
    if bins < 4:
        raise ValueError("bins must be at least 4")
    if n_samples < 1:
        raise ValueError("n_samples must be positive")
    out = engine.run_radial(params.a, theta0, T, dt, n_samples, seed,
                            threads=threads)
    th = np.sort(out["theta"])
    n = th.size
    cdf = _radial_cdf(params.a, th)
    grid = np.arange(1, n + 1) / n
    ks = float(np.max(np.maximum(np.abs(cdf - grid),
                                 np.abs(cdf - (grid - 1.0 / n)))))
    frac = out["reflections"] / (n_samples * out["n_steps"])
    warns = []
    if frac > _REFLECTION_WARN:
        warns.append(
            f"boundary reflections at {frac:.2e} per lane step exceed "
            f"{_REFLECTION_WARN:.0e}; reduce dt")
    for w in warns:
        warnings.warn(w, QualityWarning, stacklevel=2)
    counts, edges = np.histogram(out["theta"], bins=bins,
                                 range=(0.0, math.pi))
    return RadialStationaryResult(ks, (counts, edges),
                                  float(out["theta"].mean()),
                                  int(out["reflections"]), float(frac),
                                  n_samples, seed, tuple(warns))


# ---------------------------------------------------------------------------
# approach exponent


def estimate_approach_exponent(config: ApproachExponentConfig, seed: int, *,
                               threads: int = 1) -> EstimatorResult:
    """Log-log slope of the gap-width tail P(C_T <= eps) over eps.

    The tail events are nested across eps levels, so the slope error
    propagates the full binomial covariance of the level frequencies.
    """
    p = config.params
    out = engine.run_gap_hits(p.a, p.r, config.xi1, config.xi2,
                              tuple(config.eps_values), config.n_samples,
                              seed, config.scheme, config.T,
                              threads=threads)
    n = config.n_samples
    eps = np.asarray(out["eps"])
    counts = out["counts"].astype(float)
    if np.any(counts == 0.0):
        raise InsufficientSamplesError(
            f"zero hits at eps={eps[counts == 0.0]}; "
            "increase n_samples, T, or the eps levels")
    warns = []
    if out["guard_hits"]:
        warns.append(
            f"{out['guard_hits']} lanes collapsed onto the force point "
            "and were counted as full approaches")
    ph = counts / n
    x = np.log(eps)
    y = np.log(ph)
    xc = x - x.mean()
    sxx = float(xc @ xc)
    slope = float(xc @ y) / sxx
    # nested events: cov(ph_i, ph_j) = (p_min - p_i p_j)/n
    k = eps.size
    cov = np.empty((k, k))
    for i in range(k):
        for j in range(k):
            cov[i, j] = (min(ph[i], ph[j]) - ph[i] * ph[j]) / n
    grad = xc / sxx
    var = float(grad @ (cov / np.outer(ph, ph)) @ grad)
    se = math.sqrt(max(0.0, var))
    for w in warns:
        warnings.warn(w, QualityWarning, stacklevel=2)
    extras = {
        "eps": tuple(float(e) for e in eps),
        "counts": tuple(int(c) for c in out["counts"]),
        "p": tuple(float(v) for v in ph),
        "guard_hits": int(out["guard_hits"]),
        "warnings": tuple(warns),
    }
    return EstimatorResult(slope, se, n, seed, extras)
