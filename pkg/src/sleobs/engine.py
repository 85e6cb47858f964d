"""Vectorized sample loops behind the Monte Carlo estimators.

Each loop advances a block of independent lanes in lockstep.  Lane i of
a run with seed s consumes the noise stream keyed by (s, i) regardless
of block size or thread count, and finished lanes are compacted away
without disturbing the survivors, so every aggregate below is a pure
function of (seed, configuration).

The flow update is the exact map of the vertical slit grown in one step
around the midpoint driving value; real marks advance through the same
map, which preserves their ordering exactly.  Step sizes follow
dt = (c/a) * min(squared distances to the active singularities, dt_max),
so each step changes log Upsilon of a tracked point by at most 2c.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .driving import StepScheme
from .rng import CHANNEL_PRIMARY, CHANNEL_SEGMENT_BASE, NormalBlock

__all__ = [
    "run_passage",
    "run_hits",
    "run_snapshots",
    "run_radial",
    "run_gap_hits",
]

BLOCK = 100_000
_COMPACT_MIN = 4096


def _block_ranges(n: int, block: int) -> list[tuple[int, int]]:
    return [(lo, min(lo + block, n)) for lo in range(0, n, block)]


def _run_blocks(job, n: int, block: int, threads: int) -> list:
    """Run job(lo, hi) over lane ranges; results in block order."""
    ranges = _block_ranges(n, block)
    if threads <= 1 or len(ranges) == 1:
        return [job(lo, hi) for lo, hi in ranges]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        futures = [pool.submit(job, lo, hi) for lo, hi in ranges]
        return [f.result() for f in futures]


def _slit(Z: np.ndarray, xh: np.ndarray, two_a_dt: np.ndarray) -> np.ndarray:
    """Image of interior points under one slit cell, upper branch."""
    w = Z - xh
    s = np.sqrt(w * w + two_a_dt)
    np.copyto(s, -s, where=s.imag < 0.0)
    return xh + s


def _slit_real(x: np.ndarray, xh: np.ndarray, two_a_dt: np.ndarray) -> np.ndarray:
    """Image of real marks; keeps the side of the growth site."""
    d = x - xh
    return xh + np.copysign(np.sqrt(d * d + two_a_dt), d)


def run_passage(a: float, r: float | None, z: complex, xi1: float,
                xi2: float | None, n_samples: int, seed: int,
                scheme: StepScheme, angle_n: float, t_max: float,
                block: int = BLOCK, threads: int = 1) -> dict:
    """Left-passage classification counts.

    A lane stops once sin(theta1) <= 1/angle_n and classifies left iff
    theta1 > pi/2 there.  Lanes still open at t_max classify by their
    current angle and are counted as unterminated.
    """
    one_sided = r is not None

    def job(lo: int, hi: int) -> tuple[int, int, int]:
        n = hi - lo
        nb = NormalBlock(seed, np.arange(lo, hi, dtype=np.uint64),
                         CHANNEL_PRIMARY)
        Z = np.full(n, complex(z))
        x1 = np.full(n, float(xi1))
        x2 = np.full(n, float(xi2)) if one_sided else None
        t = np.zeros(n)
        alive = np.ones(n, dtype=bool)
        left = unterm = guard_hits = 0
        sin_cut = 1.0 / angle_n
        c, dt_max, guard = scheme.c, scheme.dt_max, scheme.gap_guard
        orient = 1.0 if one_sided and xi2 > xi1 else -1.0
        while alive.any():
            rel = Z - x1
            d2 = rel.real * rel.real + rel.imag * rel.imag
            if one_sided:
                gap = x2 - x1
                collapsed = alive & (gap * orient <= guard)
                if collapsed.any():
                    # contract says this cannot happen at the target
                    # parameters; classify what is there and report it
                    guard_hits += int(collapsed.sum())
                    left += int((rel.real[collapsed] < 0.0).sum())
                    alive &= ~collapsed
                dt = (c / a) * np.minimum(np.minimum(d2, gap * gap), dt_max)
            else:
                dt = (c / a) * np.minimum(d2, dt_max)
            np.minimum(dt, t_max - t, out=dt)
            dt[~alive] = 0.0
            dW = np.sqrt(dt) * nb.column()
            if one_sided:
                x1n = x1 + (r * dt) / (x1 - x2) + dW
            else:
                x1n = x1 + dW
            xh = 0.5 * (x1 + x1n)
            two_a_dt = 2.0 * a * dt
            Z = _slit(Z, xh, two_a_dt)
            if one_sided:
                x2 = _slit_real(x2, xh, two_a_dt)
            x1 = x1n
            t = t + dt
            rel = Z - x1
            angle_hit = np.abs(rel.imag) <= sin_cut * np.abs(rel)
            timed = t >= t_max * (1.0 - 1e-15)
            done = alive & (angle_hit | timed)
            if done.any():
                left += int((rel.real[done] < 0.0).sum())
                unterm += int((done & timed & ~angle_hit).sum())
                alive &= ~done
                gone = alive.size - int(alive.sum())
                if gone >= max(_COMPACT_MIN, alive.size >> 2):
                    Z, x1, t = Z[alive], x1[alive], t[alive]
                    if one_sided:
                        x2 = x2[alive]
                    nb.keep(alive)
                    alive = np.ones(Z.size, dtype=bool)
        return left, unterm, guard_hits

    parts = _run_blocks(job, n_samples, block, threads)
    return {
        "left": sum(p[0] for p in parts),
        "unterminated": sum(p[1] for p in parts),
        "guard_hits": sum(p[2] for p in parts),
    }


def run_hits(a: float, r: float | None, zs: tuple[complex, ...],
             floors: tuple[float, ...], xi1: float, xi2: float | None,
             n_samples: int, seed: int, scheme: StepScheme, angle_n: float,
             t_max: float, block: int = BLOCK, threads: int = 1) -> dict:
    """Counts of lanes whose point j reaches Upsilon_j <= floors[j].

    All points ride one shared flow per lane (common random numbers).
    A point freezes at its first crossing, or without one as soon as
    sin(theta) <= 1/angle_n: past that angle the curve has gone by and
    the remaining decrease of Upsilon is O(sin^2 theta).  Joint counts
    are returned for every point pair.
    """
    one_sided = r is not None
    k = len(zs)

    def job(lo: int, hi: int):
        n = hi - lo
        nb = NormalBlock(seed, np.arange(lo, hi, dtype=np.uint64),
                         CHANNEL_PRIMARY)
        Z = [np.full(n, complex(zj)) for zj in zs]
        lg = [np.zeros(n) for _ in range(k)]
        hit = [np.zeros(n, dtype=bool) for _ in range(k)]
        open_pt = [np.ones(n, dtype=bool) for _ in range(k)]
        x1 = np.full(n, float(xi1))
        x2 = np.full(n, float(xi2)) if one_sided else None
        t = np.zeros(n)
        alive = np.ones(n, dtype=bool)
        guard_hits = 0
        sin_cut = 1.0 / angle_n
        c, dt_max, guard = scheme.c, scheme.dt_max, scheme.gap_guard
        orient = 1.0 if one_sided and xi2 > xi1 else -1.0
        counts = np.zeros(k, dtype=np.int64)
        joint = np.zeros((k, k), dtype=np.int64)
        while alive.any():
            stiff = np.full(x1.size, dt_max)
            for j in range(k):
                relj = Z[j] - x1
                d2 = relj.real * relj.real + relj.imag * relj.imag
                np.minimum(stiff, np.where(open_pt[j], d2, np.inf),
                           out=stiff)
            if one_sided:
                gap = x2 - x1
                collapsed = alive & (gap * orient <= guard)
                if collapsed.any():
                    guard_hits += int(collapsed.sum())
                    alive &= ~collapsed
                np.minimum(stiff, gap * gap, out=stiff)
            dt = (c / a) * stiff
            np.minimum(dt, t_max - t, out=dt)
            dt[~alive] = 0.0
            dW = np.sqrt(dt) * nb.column()
            if one_sided:
                x1n = x1 + (r * dt) / (x1 - x2) + dW
            else:
                x1n = x1 + dW
            xh = 0.5 * (x1 + x1n)
            two_a_dt = 2.0 * a * dt
            for j in range(k):
                live_j = open_pt[j]
                w = Z[j] - xh
                s = np.sqrt(w * w + two_a_dt)
                np.copyto(s, -s, where=s.imag < 0.0)
                lg_new = lg[j] + 0.5 * (
                    np.log(w.real * w.real + w.imag * w.imag)
                    - np.log(s.real * s.real + s.imag * s.imag))
                Z[j] = np.where(live_j, xh + s, Z[j])
                lg[j] = np.where(live_j, lg_new, lg[j])
                ups = Z[j].imag * np.exp(-lg[j])
                hit[j] |= live_j & (ups <= floors[j])
                rel = Z[j] - x1n
                passed = np.abs(rel.imag) <= sin_cut * np.abs(rel)
                open_pt[j] &= ~(hit[j] | passed)
            if one_sided:
                x2 = _slit_real(x2, xh, two_a_dt)
            x1 = x1n
            t = t + dt
            any_open = open_pt[0].copy()
            for j in range(1, k):
                any_open |= open_pt[j]
            done = alive & (~any_open | (t >= t_max * (1.0 - 1e-15)))
            if done.any():
                alive &= ~done
                gone = alive.size - int(alive.sum())
                if gone >= max(_COMPACT_MIN, alive.size >> 2):
                    for j in range(k):
                        counts[j] += int(hit[j][~alive].sum())
                        for l in range(j + 1, k):
                            joint[j, l] += int(
                                (hit[j] & hit[l])[~alive].sum())
                    keep = alive
                    Z = [zj[keep] for zj in Z]
                    lg = [lgj[keep] for lgj in lg]
                    hit = [hj[keep] for hj in hit]
                    open_pt = [oj[keep] for oj in open_pt]
                    x1, t = x1[keep], t[keep]
                    if one_sided:
                        x2 = x2[keep]
                    nb.keep(keep)
                    alive = np.ones(x1.size, dtype=bool)
        for j in range(k):
            counts[j] += int(hit[j].sum())
            for l in range(j + 1, k):
                joint[j, l] += int((hit[j] & hit[l]).sum())
        return counts, joint, guard_hits

    parts = _run_blocks(job, n_samples, block, threads)
    counts = sum((p[0] for p in parts), np.zeros(k, dtype=np.int64))
    joint = sum((p[1] for p in parts), np.zeros((k, k), dtype=np.int64))
    return {
        "counts": counts,
        "joint": joint,
        "guard_hits": sum(p[2] for p in parts),
    }


def run_snapshots(a: float, r: float | None, z: complex, xi1: float,
                  xi2: float | None, checkpoints: tuple[float, ...],
                  n_samples: int, seed: int, scheme: StepScheme,
                  floor: float | None,
                  block: int = BLOCK, threads: int = 1) -> list[dict]:
    """Lane states (Z, xi1, xi2, log g') at each checkpoint time.

    With a floor, a lane freezes at its first time Upsilon <= floor and
    later checkpoints record the frozen state.  Checkpoints must be
    nondecreasing and start at or after 0.

    Each checkpoint segment draws from its own noise channel.  Lanes
    that arrive early idle until the block finishes the segment, and a
    per-segment channel keeps that idling from shifting their stream.
    """
    one_sided = r is not None
    cps = tuple(float(tk) for tk in checkpoints)

    def job(lo: int, hi: int):
        n = hi - lo
        lanes = np.arange(lo, hi, dtype=np.uint64)
        Z = np.full(n, complex(z))
        lg = np.zeros(n)
        x1 = np.full(n, float(xi1))
        x2 = np.full(n, float(xi2)) if one_sided else None
        t = np.zeros(n)
        frozen = np.zeros(n, dtype=bool)
        guard_hits = 0
        c, dt_max, guard = scheme.c, scheme.dt_max, scheme.gap_guard
        orient = 1.0 if one_sided and xi2 > xi1 else -1.0
        snaps = []
        for si, tk in enumerate(cps):
            nb = NormalBlock(seed, lanes, CHANNEL_SEGMENT_BASE + si)
            t[frozen] = tk
            while True:
                open_ = t < tk * (1.0 - 1e-15) if tk > 0.0 else t < -1.0
                if not open_.any():
                    break
                rel = Z - x1
                d2 = rel.real * rel.real + rel.imag * rel.imag
                if one_sided:
                    gap = x2 - x1
                    collapsed = open_ & (gap * orient <= guard)
                    if collapsed.any():
                        guard_hits += int(collapsed.sum())
                        frozen |= collapsed
                        t[collapsed] = tk
                        open_ &= ~collapsed
                    dt = (c / a) * np.minimum(np.minimum(d2, gap * gap),
                                              dt_max)
                else:
                    dt = (c / a) * np.minimum(d2, dt_max)
                np.minimum(dt, tk - t, out=dt)
                dt[~open_] = 0.0
                dW = np.sqrt(dt) * nb.column()
                if one_sided:
                    x1n = x1 + (r * dt) / (x1 - x2) + dW
                else:
                    x1n = x1 + dW
                xh = 0.5 * (x1 + x1n)
                two_a_dt = 2.0 * a * dt
                w = Z - xh
                s = np.sqrt(w * w + two_a_dt)
                np.copyto(s, -s, where=s.imag < 0.0)
                lg_new = lg + 0.5 * (
                    np.log(w.real * w.real + w.imag * w.imag)
                    - np.log(s.real * s.real + s.imag * s.imag))
                Z = np.where(open_, xh + s, Z)
                lg = np.where(open_, lg_new, lg)
                if one_sided:
                    x2 = np.where(open_, _slit_real(x2, xh, two_a_dt), x2)
                x1 = np.where(open_, x1n, x1)
                t = t + dt
                if floor is not None:
                    newly = open_ & (Z.imag * np.exp(-lg) <= floor)
                    if newly.any():
                        frozen |= newly
                        t[newly] = tk
            snaps.append({
                "Z": Z.copy(),
                "xi1": x1.copy(),
                "xi2": x2.copy() if one_sided else None,
                "lg": lg.copy(),
            })
        return snaps, guard_hits

    parts = _run_blocks(job, n_samples, block, threads)
    out = []
    for i, tk in enumerate(cps):
        entry = {"t": tk}
        for key in ("Z", "xi1", "xi2", "lg"):
            if parts[0][0][i][key] is None:
                entry[key] = None
            else:
                entry[key] = np.concatenate([p[0][i][key] for p in parts])
        out.append(entry)
    return {"snapshots": out, "guard_hits": sum(p[1] for p in parts)}


def run_radial(a: float, theta0: float, T: float, dt: float, n_samples: int,
               seed: int, block: int = BLOCK, threads: int = 1) -> dict:
    """Endpoint samples of the radial angle diffusion.

    Strang splitting: the drift 2a cot(theta) flows exactly through
    cos(theta(t)) = cos(theta(0)) exp(-2at) for half a step on each side
    of the noise kick.  Angles leaving (0, pi) re-enter by reflection
    and each such event is counted.
    """
    n_steps = max(1, int(round(T / dt)))
    contr = math.exp(-a * dt)
    root = math.sqrt(dt)

    def job(lo: int, hi: int):
        n = hi - lo
        nb = NormalBlock(seed, np.arange(lo, hi, dtype=np.uint64),
                         CHANNEL_PRIMARY)
        th = np.full(n, float(theta0))
        refl = 0
        for _ in range(n_steps):
            th = np.arccos(np.cos(th) * contr)
            th += root * nb.column()
            refl += int(((th <= 0.0) | (th >= np.pi)).sum())
            th = np.arccos(np.cos(th) * contr)
        return th, refl

    parts = _run_blocks(job, n_samples, block, threads)
    return {
        "theta": np.concatenate([p[0] for p in parts]),
        "reflections": sum(p[1] for p in parts),
        "n_steps": n_steps,
    }


def run_gap_hits(a: float, r: float, xi1: float, xi2: float,
                 eps_values: tuple[float, ...], n_samples: int, seed: int,
                 scheme: StepScheme, T: float,
                 block: int = BLOCK, threads: int = 1) -> dict:
    """Counts of lanes whose conformal gap width C_T falls below eps.

    C_t = (xi2_t - O_t) / g_t'(xi2) with O_t the image of the right edge
    of the hull; all three pieces advance through exact cell maps, and
    C_t decreases, so only the final value is needed.  Lanes freeze once
    C <= min(eps).
    """
    if not xi2 > xi1:
        raise ValueError("exponent run expects xi1 < xi2")
    eps = tuple(sorted(float(e) for e in eps_values))
    eps_min = eps[0]

    def job(lo: int, hi: int):
        n = hi - lo
        nb = NormalBlock(seed, np.arange(lo, hi, dtype=np.uint64),
                         CHANNEL_PRIMARY)
        x1 = np.full(n, float(xi1))
        x2 = np.full(n, float(xi2))
        O = np.full(n, float(xi1))
        lg2 = np.zeros(n)
        t = np.zeros(n)
        guard_hits = 0
        c, dt_max, guard = scheme.c, scheme.dt_max, scheme.gap_guard
        while True:
            open_ = t < T * (1.0 - 1e-15)
            if not open_.any():
                break
            gap = x2 - x1
            collapsed = open_ & (gap <= guard)
            if collapsed.any():
                guard_hits += int(collapsed.sum())
                t[collapsed] = T
                open_ &= ~collapsed
            dt = (c / a) * np.minimum(gap * gap, dt_max)
            np.minimum(dt, T - t, out=dt)
            dt[~open_] = 0.0
            dW = np.sqrt(dt) * nb.column()
            x1n = x1 + (r * dt) / (x1 - x2) + dW
            xh = 0.5 * (x1 + x1n)
            two_a_dt = 2.0 * a * dt
            d2o = x2 - xh
            x2n = xh + np.copysign(np.sqrt(d2o * d2o + two_a_dt), d2o)
            lg2n = lg2 + 0.5 * (np.log(d2o * d2o)
                                - np.log(d2o * d2o + two_a_dt))
            dO = np.maximum(O - xh, 0.0)
            On = xh + np.sqrt(dO * dO + two_a_dt)
            x1 = np.where(open_, x1n, x1)
            x2 = np.where(open_, x2n, x2)
            O = np.where(open_, On, O)
            lg2 = np.where(open_, lg2n, lg2)
            t = t + dt
            # C decreases, so a lane under the smallest level is decided
            C = (x2 - O) * np.exp(-lg2)
            t[open_ & (C <= eps_min)] = T
        C = (x2 - O) * np.exp(-lg2)
        return np.array([(C <= e).sum() for e in eps], dtype=np.int64), \
            guard_hits

    parts = _run_blocks(job, n_samples, block, threads)
    counts = sum((p[0] for p in parts),
                 np.zeros(len(eps), dtype=np.int64))
    return {"eps": eps, "counts": counts,
            "guard_hits": sum(p[1] for p in parts)}
