"""Deterministic discrete-event core: clock, event queue, seeded RNG streams.

Simulated time is an integer number of picoseconds throughout the package.
At 12.5 Gbps one bit takes exactly 80 ps, so all serialization times used by
the protocol are exact integers and runs are bit-reproducible.
"""

from __future__ import annotations

import heapq
import math

SimTime = int  # picoseconds

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


class SchedulingError(Exception):
    """An event was scheduled in the simulated past (a protocol bug)."""


class EventQueue:
    """Min-heap of (time, seq, payload); equal times pop FIFO by insertion."""

    def __init__(self) -> None:
        self._heap: list[tuple[SimTime, int, object]] = []
        self._seq = 0
        self.now: SimTime = 0

    def __len__(self) -> int:
        return len(self._heap)

    def schedule(self, time: SimTime, payload) -> int:
        if time < self.now:
            raise SchedulingError(
                f"event at t={time} scheduled while clock is at t={self.now}"
            )
        seq = self._seq
        self._seq += 1
        heapq.heappush(self._heap, (time, seq, payload))
        return seq

    def next_event(self):
        """Pop the minimum (time, seq) event and advance the clock, or None."""
        if not self._heap:
            return None
        time, _seq, payload = heapq.heappop(self._heap)
        self.now = time
        return time, payload


def _mix64(z: int) -> int:
    # splitmix64 finalizer (Steele, Lea & Flood)
    z &= _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


class RngStream:
    """One splitmix64 stream, derived deterministically from (seed, index).

    The initial state is mix(seed XOR mix((index + 1) * golden)), where mix is
    the splitmix64 finalizer and golden is 2^64/phi.  Pure integer arithmetic,
    so the byte sequence is identical on every platform.
    """

    def __init__(self, master_seed: int, index: int) -> None:
        self._state = _mix64((master_seed & _MASK64) ^ _mix64((index + 1) * _GOLDEN))

    def next_u64(self) -> int:
        self._state = (self._state + _GOLDEN) & _MASK64
        return _mix64(self._state)

    def uniform01(self) -> float:
        """Uniform float in (0, 1] with 53-bit resolution."""
        return ((self.next_u64() >> 11) + 1) * 2.0**-53

    def sample_exponential(self, mean: float) -> SimTime:
        """Exponential sample with the given mean, rounded to integer ps."""
        if mean <= 0:
            raise ValueError(f"exponential mean must be positive, got {mean}")
        return round(-mean * math.log(self.uniform01()))

    def sample_uniform_int(self, n: int) -> int:
        """Unbiased integer in [0, n) via rejection sampling."""
        if n < 1:
            raise ValueError(f"n must be >= 1, got {n}")
        bound = ((1 << 64) // n) * n
        while True:
            x = self.next_u64()
            if x < bound:
                return x % n


def derive_stream(master_seed: int, index: int) -> RngStream:
    return RngStream(master_seed, index)
