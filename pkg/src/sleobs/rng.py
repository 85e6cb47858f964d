"""Counter-based normal streams for reproducible parallel sampling.

Every sample lane owns an independent stream addressed by the triple
(seed, lane, channel).  Streams are realized with the Philox counter
generator, so any lane can be opened at any point without generating
its predecessors, and results do not depend on how lanes are grouped
into blocks or threads.

Address layout of the 256-bit Philox counter for a draw chunk:

    key     = (seed, lane)
    counter = (0, channel, chunk_index, 0)

Channel 0 carries the primary driving noise, channel 1 the secondary
driving noise of a two-sided sampler, channel 2 the bridge refinement
noise consumed by the point tracker.  Chunks are blocks of consecutive
draws; successive chunks sit 2**64 counter ticks apart and can never
overlap.
"""

from __future__ import annotations

import numpy as np
from numpy.random import Generator, Philox

__all__ = [
    "CHANNEL_PRIMARY",
    "CHANNEL_SECONDARY",
    "CHANNEL_BRIDGE",
    "CHANNEL_SEGMENT_BASE",
    "NormalBlock",
    "chunk_normals",
    "bridge_stream",
]

CHANNEL_PRIMARY = 0
CHANNEL_SECONDARY = 1
CHANNEL_BRIDGE = 2
# Checkpointed runs draw segment k from channel SEGMENT_BASE + k, so a
# lane's path to a checkpoint never depends on when its blockmates got
# there (idle lanes burn draws only on the segment's own channel).
CHANNEL_SEGMENT_BASE = 16

# Draws per addressed chunk.  Large enough to amortize stream setup,
# small enough that a 10^5-lane block keeps its buffer around 200 MB.
CHUNK = 256


def _check_index(name: str, value: int) -> int:
    value = int(value)
    if value < 0 or value >= 2**63:
        raise ValueError(f"{name} must lie in [0, 2**63)")
    return value


def chunk_normals(seed: int, lane: int, channel: int, chunk_index: int,
                  count: int = CHUNK) -> np.ndarray:
    """Standard normals of one addressed chunk, from a fresh generator.

    Reference implementation of the addressing contract.  `NormalBlock`
    produces identical values chunk by chunk; the equality is asserted
    in the test suite.
    """
    seed = _check_index("seed", seed)
    lane = _check_index("lane", lane)
    bg = Philox(key=np.array([seed, lane], dtype=np.uint64))
    state = bg.state
    state["state"]["counter"][:] = (0, channel, chunk_index, 0)
    bg.state = state
    return Generator(bg).standard_normal(count)


def bridge_stream(seed: int, lane: int = 0) -> Generator:
    """Sequential generator on the bridge channel of one lane.

    The tracker consumes refinement noise strictly in order, so this
    channel is exposed as a plain generator rather than in chunks.
    """
    seed = _check_index("seed", seed)
    lane = _check_index("lane", lane)
    bg = Philox(key=np.array([seed, lane], dtype=np.uint64))
    state = bg.state
    state["state"]["counter"][:] = (0, CHANNEL_BRIDGE, 0, 0)
    bg.state = state
    return Generator(bg)


class NormalBlock:
    """One column of standard normals per step for a block of lanes.

    Lanes are identified by absolute indices, which key their streams;
    dropping finished lanes with `keep` does not disturb the draws of
    the survivors.  All lanes advance in lockstep, one draw per call.
    """

    def __init__(self, seed: int, lanes: np.ndarray, channel: int = CHANNEL_PRIMARY):
        self._seed = _check_index("seed", seed)
        self._channel = int(channel)
        self._lanes = np.ascontiguousarray(lanes, dtype=np.uint64)
        if self._lanes.ndim != 1:
            raise ValueError("lanes must be one-dimensional")
        self._chunk_index = 0
        self._pos = CHUNK
        self._buf = np.empty((CHUNK, self._lanes.size))
        # One reusable bit generator; its state is rewritten per fill.
        self._bg = Philox(key=np.zeros(2, dtype=np.uint64))
        self._template = self._bg.state
        self._gen = Generator(self._bg)

    @property
    def lanes(self) -> np.ndarray:
        return self._lanes

    def _fill(self) -> None:
        counter = self._template["state"]["counter"]
        key = self._template["state"]["key"]
        counter[0] = 0
        counter[1] = self._channel
        counter[2] = self._chunk_index
        counter[3] = 0
        key[0] = self._seed
        for k in range(self._lanes.size):
            key[1] = self._lanes[k]
            self._bg.state = self._template
            self._buf[:, k] = self._gen.standard_normal(CHUNK)
        self._chunk_index += 1
        self._pos = 0

    def column(self) -> np.ndarray:
        """Next draw for every current lane, in lane order."""
        if self._pos >= CHUNK:
            self._fill()
        out = self._buf[self._pos]
        self._pos += 1
        return out

    def keep(self, mask: np.ndarray) -> None:
        """Drop lanes where mask is False; their streams simply end."""
        self._lanes = np.ascontiguousarray(self._lanes[mask])
        self._buf = np.ascontiguousarray(self._buf[:, mask])
