"""Portable counter-based random number streams.

Synthetic data generation must reproduce bit-for-bit across platforms and
across independent implementations, so instead of a stateful generator we use
a pure function of (seed, stream label, counter):

    raw(i) = mix64(base + (i + 1) * GAMMA)        arithmetic mod 2**64
    base   = mix64(mix64(seed) ^ fnv1a64(label))

where ``mix64`` is the SplitMix64 finalizer (constants 0xBF58476D1CE4E5B9 and
0x94D049BB133111EB, shifts 30/27/31), ``GAMMA`` is the 64-bit golden ratio
0x9E3779B97F4A7C15, and ``fnv1a64`` is FNV-1a over the UTF-8 label (offset
basis 0xCBF29CE484222325, prime 0x100000001B3).

Streams are keyed by label, so adding a stream (e.g. a new graph node) never
perturbs draws from existing streams.

Derived values:
  * uniforms: u_i = ((raw(i) >> 11) + 1) * 2**-53, in (0, 1]
  * normals:  Box-Muller pairs; draw 2k of the uniforms above, then
    z_{2j} = sqrt(-2 ln u_{2j}) * cos(2 pi u_{2j+1}) and the matching sine
    term for z_{2j+1}.
"""

from __future__ import annotations

import numpy as np

_GAMMA = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)
_FNV_OFFSET = 0xCBF29CE484222325
_FNV_PRIME = 0x100000001B3
_MASK64 = 0xFFFFFFFFFFFFFFFF


def fnv1a64(data: bytes) -> int:
    """64-bit FNV-1a hash."""
    h = _FNV_OFFSET
    for b in data:
        h ^= b
        h = (h * _FNV_PRIME) & _MASK64
    return h


def _mix64(z: np.ndarray) -> np.ndarray:
    with np.errstate(over="ignore"):  # wrap-around is the whole point
        z = (z ^ (z >> np.uint64(30))) * _MIX1
        z = (z ^ (z >> np.uint64(27))) * _MIX2
        return z ^ (z >> np.uint64(31))


class CounterStream:
    """One labeled stream of reproducible draws.

    Draw ``i`` is a pure function of (seed, label, i); there is no hidden
    state beyond the precomputed stream base.
    """

    def __init__(self, seed: int, label: str):
        self.seed = int(seed)
        self.label = label
        seed_word = _mix64(np.uint64(self.seed & _MASK64))
        self._base = _mix64(seed_word ^ np.uint64(fnv1a64(label.encode("utf-8"))))

    def raw(self, start: int, count: int) -> np.ndarray:
        """uint64 words for counters start..start+count-1."""
        idx = np.arange(start + 1, start + count + 1, dtype=np.uint64)
        with np.errstate(over="ignore"):
            return _mix64(self._base + idx * _GAMMA)

    def uniforms(self, count: int, start: int = 0) -> np.ndarray:
        """Uniform draws in (0, 1], 53-bit resolution."""
        words = self.raw(start, count)
        return ((words >> np.uint64(11)).astype(np.float64) + 1.0) * 2.0**-53

    def normals(self, count: int, start: int = 0) -> np.ndarray:
        """Standard normal draws via Box-Muller on consecutive uniform pairs.

        Draw ``i`` consumes counters 2*floor(i/2) and 2*floor(i/2)+1, so a
        prefix of a longer request equals the shorter request.
        """
        pairs = (count + 1) // 2
        u = self.uniforms(2 * pairs, start=start)
        u1, u2 = u[0::2], u[1::2]
        radius = np.sqrt(-2.0 * np.log(u1))
        angle = 2.0 * np.pi * u2
        out = np.empty(2 * pairs, dtype=np.float64)
        out[0::2] = radius * np.cos(angle)
        out[1::2] = radius * np.sin(angle)
        return out[:count]
