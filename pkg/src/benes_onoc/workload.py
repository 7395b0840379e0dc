"""Poisson traffic calibrated to offered load, and delay/throughput statistics.

Offered load lam is the fraction of time a source would spend transmitting:
lam = T_trans / (T_trans + T_interval).  We realize it by drawing the idle
gap T_interval from an exponential with mean T_trans * (1 - lam) / lam, so
the expected generation period is T_trans / lam and lam = 1 means
back-to-back transmission.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .engine import RngStream, SimTime

PS_PER_SECOND = 10**12
DEFAULT_BANDWIDTH_BPS = 12_500_000_000


def transmission_time_ps(nbytes: int, bandwidth_bps: int = DEFAULT_BANDWIDTH_BPS) -> SimTime:
    """Serialization time of nbytes at the channel bandwidth, in integer ps."""
    if bandwidth_bps <= 0:
        raise ValueError(f"bandwidth must be positive, got {bandwidth_bps}")
    if nbytes < 0:
        raise ValueError(f"byte count must be >= 0, got {nbytes}")
    num = nbytes * 8 * PS_PER_SECOND
    return (num + bandwidth_bps // 2) // bandwidth_bps


def mean_interval_ps(lam: float, t_trans: SimTime) -> float:
    """Mean idle gap between messages for offered load lam."""
    if not 0.0 < lam <= 1.0:
        raise ValueError(f"offered load must be in (0, 1], got {lam}")
    return t_trans * (1.0 - lam) / lam


@dataclass(frozen=True)
class TrafficParams:
    lam: float
    msg_bytes: int
    bandwidth_bps: int = DEFAULT_BANDWIDTH_BPS

    @property
    def t_trans(self) -> SimTime:
        return transmission_time_ps(self.msg_bytes, self.bandwidth_bps)

    @property
    def mean_interval(self) -> float:
        return mean_interval_ps(self.lam, self.t_trans)


def next_arrival(stream: RngStream, params: TrafficParams) -> SimTime:
    """Gap to the next message: busy time plus an exponential idle interval."""
    mean = params.mean_interval
    gap = params.t_trans
    if mean > 0:
        gap += stream.sample_exponential(mean)
    return gap


def sample_destination(stream: RngStream, src: int, n: int) -> int:
    """Uniform over the n - 1 terminals other than src."""
    if n < 2:
        raise ValueError(f"need at least 2 terminals, got {n}")
    d = stream.sample_uniform_int(n - 1)
    return d if d < src else d + 1


@dataclass
class RunStats:
    """Raw counters; warmup messages are excluded from all of them."""

    sent: int = 0
    received: int = 0
    dropped: int = 0
    sum_delay_ps: int = 0
    per_dest_received: dict[int, int] = field(default_factory=dict)

    def record_sent(self) -> None:
        self.sent += 1

    def record_delivery(self, dest: int, delay_ps: SimTime) -> None:
        self.received += 1
        self.sum_delay_ps += delay_ps
        self.per_dest_received[dest] = self.per_dest_received.get(dest, 0) + 1

    def record_drop(self) -> None:
        self.dropped += 1


@dataclass(frozen=True)
class RunResult:
    sent: int
    received: int
    dropped: int
    mean_delay_ps: float | None
    throughput: float


def finalize(stats: RunStats, lam: float) -> RunResult:
    """Mean delay and throughput = lam * received / sent from raw counters."""
    mean_delay = stats.sum_delay_ps / stats.received if stats.received else None
    throughput = lam * stats.received / stats.sent if stats.sent else 0.0
    return RunResult(
        sent=stats.sent,
        received=stats.received,
        dropped=stats.dropped,
        mean_delay_ps=mean_delay,
        throughput=throughput,
    )
