"""Circuit-switched setup/ACK protocol over the Benes network.

Each message reserves a path hop by hop with a setup packet routed by DRA or
BCRA.  On success an ACK returns to the source along the reserved circuit,
the payload is transmitted, and a teardown sweep releases the links.  A
blocked setup releases its reserved prefix and the message is dropped (or
retried, when a retry budget is configured).

The control plane (setup forwarding, ACK, release sweeps) contends only for
data-link reservations, never for control bandwidth; every control hop costs
control_hop_latency.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field

from .engine import EventQueue, RngStream, SimTime, derive_stream
from .routing import PortAvailability, bcra_select, dra_select
from .topology import (
    BenesNetwork,
    LinkId,
    Port,
    injection_link,
    output_link,
    switch_for_line,
)
from .workload import (
    RunStats,
    TrafficParams,
    next_arrival,
    sample_destination,
    transmission_time_ps,
)

TIE_BREAK_STREAM = 1 << 32  # rng stream index reserved for DRA tie-breaks

QUEUED = "queued"
SETTING_UP = "setting-up"
ACTIVE = "active"
TEARING_DOWN = "tearing-down"
DELIVERED = "delivered"
DROPPED = "dropped"


@dataclass(frozen=True)
class ProtocolParams:
    setup_bytes: int = 32
    control_hop_latency_ps: SimTime = 1000
    data_hop_latency_ps: SimTime = 0
    retry_limit: int = 0
    retry_backoff_ps: SimTime = 0


@dataclass
class Message:
    id: int
    src: int
    dest: int
    size_bytes: int
    t_gen: SimTime
    warmup: bool
    state: str = QUEUED
    retries_used: int = 0
    reserved: list[LinkId] = field(default_factory=list)


class LinkAuditError(AssertionError):
    """A link reservation rule was violated (double reserve / foreign free)."""


class CircuitSwitchedSim:
    """One deterministic simulation run at a single (algorithm, load) point."""

    def __init__(
        self,
        net: BenesNetwork,
        algorithm: str,
        traffic: TrafficParams,
        protocol: ProtocolParams,
        master_seed: int,
        messages_target: int = 10_000,
        warmup_fraction: float = 0.1,
        trace: bool = False,
    ) -> None:
        if algorithm not in ("dra", "bcra"):
            raise ValueError(f"unknown algorithm {algorithm!r}")
        if not 0.0 <= warmup_fraction < 1.0:
            raise ValueError(f"warmup fraction must be in [0, 1), got {warmup_fraction}")
        self.net = net
        self.algorithm = algorithm
        self.traffic = traffic
        self.protocol = protocol
        self.messages_target = messages_target
        self.queue = EventQueue()
        self.stats = RunStats()
        self.trace_lines: list[str] | None = [] if trace else None

        self.link_owner: dict[LinkId, int] = {}
        self.source_queue: list[deque[Message]] = [deque() for _ in range(net.n)]
        self.source_current: list[Message | None] = [None] * net.n
        self.messages: dict[int, Message] = {}

        self.source_streams = [derive_stream(master_seed, s) for s in range(net.n)]
        self.tie_break: RngStream = derive_stream(master_seed, TIE_BREAK_STREAM)

        # the first warmup_per_source messages of every source are excluded
        if warmup_fraction > 0:
            self.warmup_per_source = math.ceil(
                messages_target * warmup_fraction / ((1.0 - warmup_fraction) * net.n)
            )
        else:
            self.warmup_per_source = 0
        self.generated_per_source = [0] * net.n
        self.generated_total = 0
        self.counted_generated = 0
        self.generation_stopped = False

        self.setup_serialization = transmission_time_ps(
            protocol.setup_bytes, traffic.bandwidth_bps
        )
        self._next_msg_id = 0

    # -- link bookkeeping ---------------------------------------------------

    def _reserve(self, link: LinkId, msg: Message) -> None:
        if link in self.link_owner:
            raise LinkAuditError(
                f"link {link} already owned by message {self.link_owner[link]}"
            )
        self.link_owner[link] = msg.id
        msg.reserved.append(link)

    def _free(self, link: LinkId, msg: Message) -> None:
        owner = self.link_owner.get(link)
        if owner != msg.id:
            raise LinkAuditError(f"message {msg.id} freeing link {link} owned by {owner}")
        del self.link_owner[link]

    def _link_free(self, link: LinkId) -> bool:
        return link not in self.link_owner

    def _log(self, kind: str, msg: Message, detail: str = "") -> None:
        if self.trace_lines is not None:
            extra = f" {detail}" if detail else ""
            self.trace_lines.append(f"{self.queue.now} {kind} msg={msg.id}{extra}")

    # -- event handlers -----------------------------------------------------

    def _on_arrival(self, src: int) -> None:
        if self.generation_stopped:
            return
        stream = self.source_streams[src]
        dest = sample_destination(stream, src, self.net.n)
        warmup = self.generated_per_source[src] < self.warmup_per_source
        msg = Message(
            id=self._next_msg_id,
            src=src,
            dest=dest,
            size_bytes=self.traffic.msg_bytes,
            t_gen=self.queue.now,
            warmup=warmup,
        )
        self._next_msg_id += 1
        self.messages[msg.id] = msg
        self.generated_per_source[src] += 1
        self.generated_total += 1
        if not warmup:
            self.counted_generated += 1
            self.stats.record_sent()
            if self.counted_generated >= self.messages_target:
                self.generation_stopped = True
        self._log("gen", msg, f"src={src} dest={dest}")

        self.source_queue[src].append(msg)
        if self.source_current[src] is None:
            self._start_next(src)
        if not self.generation_stopped:
            gap = next_arrival(stream, self.traffic)
            self.queue.schedule(self.queue.now + gap, ("arrival", src))

    def _start_next(self, src: int) -> None:
        if not self.source_queue[src]:
            return
        msg = self.source_queue[src].popleft()
        self.source_current[src] = msg
        self._begin_setup(msg)

    def _begin_setup(self, msg: Message) -> None:
        msg.state = SETTING_UP
        self._reserve(injection_link(self.net, msg.src), msg)
        t = self.queue.now + self.setup_serialization + self.protocol.control_hop_latency_ps
        self.queue.schedule(t, ("setup_hop", msg.id, 1))
        self._log("setup", msg)

    def _on_setup_hop(self, msg: Message, j: int) -> None:
        line = msg.reserved[-1].line
        switch, _ = switch_for_line(self.net, j, line)
        upper = output_link(self.net, j, switch, Port.UPPER)
        lower = output_link(self.net, j, switch, Port.LOWER)
        avail = PortAvailability(self._link_free(upper), self._link_free(lower))
        if self.algorithm == "dra":
            port = dra_select(self.net, j, msg.dest, avail, self.tie_break)
        else:
            port = bcra_select(self.net, j, msg.dest, avail)
        if port is None:
            self._log("block", msg, f"stage={j} switch={switch}")
            self._start_release(msg, reason="block")
            return
        self._reserve(upper if port is Port.UPPER else lower, msg)
        chl = self.protocol.control_hop_latency_ps
        if j == self.net.stage_count:
            self.queue.schedule(self.queue.now + chl, ("setup_complete", msg.id))
        else:
            self.queue.schedule(self.queue.now + chl, ("setup_hop", msg.id, j + 1))

    def _on_setup_complete(self, msg: Message) -> None:
        msg.state = ACTIVE
        self._log("path", msg)
        ack_delay = 2 * self.net.k * self.protocol.control_hop_latency_ps
        self.queue.schedule(self.queue.now + ack_delay, ("ack", msg.id))

    def _on_ack(self, msg: Message) -> None:
        self._log("ack", msg)
        t_data = transmission_time_ps(msg.size_bytes, self.traffic.bandwidth_bps)
        flight = 2 * self.net.k * self.protocol.data_hop_latency_ps
        self.queue.schedule(self.queue.now + t_data + flight, ("delivery", msg.id))

    def _on_delivery(self, msg: Message) -> None:
        msg.state = TEARING_DOWN
        if not msg.warmup:
            self.stats.record_delivery(msg.dest, self.queue.now - msg.t_gen)
        self._log("recv", msg, f"delay={self.queue.now - msg.t_gen}")
        self._start_release(msg, reason="teardown")

    def _start_release(self, msg: Message, reason: str) -> None:
        # backward sweep: last reserved link first, one hop latency per link
        chl = self.protocol.control_hop_latency_ps
        self.queue.schedule(
            self.queue.now + chl, ("release", msg.id, len(msg.reserved) - 1, reason)
        )

    def _on_release(self, msg: Message, idx: int, reason: str) -> None:
        self._free(msg.reserved[idx], msg)
        if idx > 0:
            chl = self.protocol.control_hop_latency_ps
            self.queue.schedule(self.queue.now + chl, ("release", msg.id, idx - 1, reason))
            return
        msg.reserved.clear()
        if reason == "teardown":
            msg.state = DELIVERED
            self.source_current[msg.src] = None
            self._start_next(msg.src)
        elif msg.retries_used < self.protocol.retry_limit:
            msg.retries_used += 1
            self.queue.schedule(
                self.queue.now + self.protocol.retry_backoff_ps, ("retry", msg.id)
            )
        else:
            msg.state = DROPPED
            if not msg.warmup:
                self.stats.record_drop()
            self._log("drop", msg)
            self.source_current[msg.src] = None
            self._start_next(msg.src)

    # -- driver -------------------------------------------------------------

    def inject_message(self, src: int, dest: int, warmup: bool = False) -> Message:
        """Hand-place a message at a source (scenario tests); bypasses traffic."""
        if dest == src:
            raise ValueError("destination must differ from source")
        msg = Message(
            id=self._next_msg_id,
            src=src,
            dest=dest,
            size_bytes=self.traffic.msg_bytes,
            t_gen=self.queue.now,
            warmup=warmup,
        )
        self._next_msg_id += 1
        self.messages[msg.id] = msg
        if not warmup:
            self.stats.record_sent()
        self.source_queue[src].append(msg)
        if self.source_current[src] is None:
            self._start_next(src)
        return msg

    def run(self) -> RunStats:
        for src in range(self.net.n):
            gap = next_arrival(self.source_streams[src], self.traffic)
            self.queue.schedule(gap, ("arrival", src))
        return self.drain()

    def step(self) -> bool:
        """Consume one event; False when the queue is empty."""
        item = self.queue.next_event()
        if item is None:
            return False
        _, payload = item
        kind = payload[0]
        if kind == "arrival":
            self._on_arrival(payload[1])
        elif kind == "setup_hop":
            self._on_setup_hop(self.messages[payload[1]], payload[2])
        elif kind == "setup_complete":
            self._on_setup_complete(self.messages[payload[1]])
        elif kind == "ack":
            self._on_ack(self.messages[payload[1]])
        elif kind == "delivery":
            self._on_delivery(self.messages[payload[1]])
        elif kind == "release":
            self._on_release(self.messages[payload[1]], payload[2], payload[3])
        elif kind == "retry":
            self._begin_setup(self.messages[payload[1]])
        else:  # pragma: no cover
            raise RuntimeError(f"unknown event {payload!r}")
        return True

    def drain(self) -> RunStats:
        """Consume events until the queue empties."""
        while self.step():
            pass
        return self.stats

    def all_links_free(self) -> bool:
        return not self.link_owner

    def message_counts(self) -> dict[str, int]:
        counts = {"generated": self.generated_total, DELIVERED: 0, DROPPED: 0, "other": 0}
        for msg in self.messages.values():
            if msg.state in (DELIVERED, DROPPED):
                counts[msg.state] += 1
            else:
                counts["other"] += 1
        return counts
