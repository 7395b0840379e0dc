"""Port selection: adaptive (DRA), bit-controlled baseline (BCRA), path oracle.

Both algorithms force the destination's bit p(j) in stages k..2k-1 (that bit
is what steers the message onto the correct ejection line).  They differ in
the first half: DRA takes any free port (random when both are free), BCRA
follows a fixed destination-derived label and ignores network state.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .engine import RngStream
from .topology import (
    BenesNetwork,
    LinkId,
    Port,
    injection_link,
    output_link,
    switch_for_line,
)


@dataclass(frozen=True)
class PortAvailability:
    upper_free: bool
    lower_free: bool

    def is_free(self, port: Port) -> bool:
        return self.upper_free if port is Port.UPPER else self.lower_free


@dataclass(frozen=True)
class Path:
    """One full source-to-destination route: 2k-1 switch hops plus the links."""

    src: int
    dest: int
    hops: tuple[tuple[tuple[int, int], Port], ...]  # ((switch, stage), out port)
    links: tuple[LinkId, ...]  # injection, inter-stage..., ejection


def routing_bit(dest: int, b: int, n: int) -> int:
    """Destination bit steering stage 2k - b: floor(dest / 2^(b-1)) mod 2."""
    if not 0 <= dest < n:
        raise ValueError(f"destination {dest} out of range [0, {n})")
    if not 1 <= b <= n.bit_length() - 1:
        raise ValueError(f"b = {b} out of range [1, k]")
    return (dest >> (b - 1)) & 1


def deterministic_port(net: BenesNetwork, j: int, dest: int) -> Port:
    """Port selected by destination bit p(j): 0 -> upper, 1 -> lower."""
    p = net.pair_bits[j - 1]
    return Port((dest >> p) & 1)


def dra_select(
    net: BenesNetwork,
    j: int,
    dest: int,
    avail: PortAvailability,
    rng: RngStream,
) -> Port | None:
    """Adaptive selection; None means blocked.

    Stages 1..k-1: any free port, rng tie-break when both are free.
    Stages k..2k-1: the destination-forced port, blocked if it is busy.
    """
    if j < net.k:
        if avail.upper_free and avail.lower_free:
            return Port(rng.sample_uniform_int(2))
        if avail.upper_free:
            return Port.UPPER
        if avail.lower_free:
            return Port.LOWER
        return None
    port = deterministic_port(net, j, dest)
    return port if avail.is_free(port) else None


def bcra_select(
    net: BenesNetwork, j: int, dest: int, avail: PortAvailability
) -> Port | None:
    """Label-driven selection: destination bit p(j) at every stage; None if busy."""
    port = deterministic_port(net, j, dest)
    return port if avail.is_free(port) else None


def bcra_label(net: BenesNetwork, dest: int) -> tuple[int, ...]:
    """The 2k-1 label bits, one per stage."""
    return tuple(int(deterministic_port(net, j, dest)) for j in range(1, 2 * net.k))


def trace_path(
    net: BenesNetwork, src: int, dest: int, choices: tuple[int, ...]
) -> Path:
    """Walk the network taking `choices` in stages 1..k-1, forced ports after."""
    if len(choices) != net.k - 1:
        raise ValueError(
            f"expected {net.k - 1} first-half choices, got {len(choices)}"
        )
    line = src
    hops = []
    links = [injection_link(net, src)]
    for j in range(1, net.stage_count + 1):
        switch, _in = switch_for_line(net, j, line)
        if j < net.k:
            port = Port(choices[j - 1])
        else:
            port = deterministic_port(net, j, dest)
        link = output_link(net, j, switch, port)
        hops.append(((switch, j), port))
        links.append(link)
        line = link.line
    assert line == dest, f"path ended at {line}, expected {dest}"
    return Path(src=src, dest=dest, hops=tuple(hops), links=tuple(links))


def enumerate_paths(net: BenesNetwork, src: int, dest: int) -> list[Path]:
    """All 2^(k-1) routes DRA can realize for (src, dest)."""
    return [
        trace_path(net, src, dest, choices)
        for choices in itertools.product((0, 1), repeat=net.k - 1)
    ]


def bcra_path(net: BenesNetwork, src: int, dest: int) -> Path:
    """The unique BCRA route: choices equal the destination's low bits."""
    choices = tuple((dest >> (j - 1)) & 1 for j in range(1, net.k))
    return trace_path(net, src, dest, choices)
