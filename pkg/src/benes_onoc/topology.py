"""Benes network wiring algebra.

An N x N Benes network (N = 2^k) has 2k - 1 stages of N/2 two-by-two
switches.  We use a flat "bit-pairing" model: at stage j the two lines that
share a switch differ only in address bit p(j), and inter-stage wires are
straight (line x at one stage boundary is line x at the next).  The pairing
bits run (0, 1, ..., k-1, ..., 1, 0) across the stages, the standard
butterfly / inverse-butterfly realization, so destination-bit routing in the
second half literally writes the destination's bits into the current line
number.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import IntEnum
from typing import NamedTuple

MAX_K = 16  # desk-scale guard: N = 65536 is already far beyond useful


class Port(IntEnum):
    UPPER = 0
    LOWER = 1


class LinkId(NamedTuple):
    """A channel at a stage boundary.

    boundary 0 is source injection, boundary 2k-1 is destination ejection,
    boundary b in between carries stage b's outputs into stage b+1.
    """

    boundary: int
    line: int


@dataclass(frozen=True)
class BenesNetwork:
    k: int
    pair_bits: tuple[int, ...] = field(repr=False)

    @property
    def n(self) -> int:
        return 1 << self.k

    @property
    def stage_count(self) -> int:
        return 2 * self.k - 1

    @property
    def switches_per_stage(self) -> int:
        return self.n // 2


def build_network(k: int) -> BenesNetwork:
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if k > MAX_K:
        raise ValueError(f"k = {k} exceeds the supported maximum of {MAX_K}")
    bits = tuple(j - 1 if j <= k else 2 * k - 1 - j for j in range(1, 2 * k))
    return BenesNetwork(k=k, pair_bits=bits)


def pair_bit(net: BenesNetwork, j: int) -> int:
    """Bit position in which the two lines sharing a stage-j switch differ."""
    _check_stage(net, j)
    return net.pair_bits[j - 1]


def switch_for_line(net: BenesNetwork, j: int, line: int) -> tuple[int, Port]:
    """Switch index and input port occupied by `line` entering stage j."""
    _check_stage(net, j)
    _check_line(net, line)
    p = net.pair_bits[j - 1]
    # delete bit p from the line number; the removed bit selects the port
    switch = ((line >> (p + 1)) << p) | (line & ((1 << p) - 1))
    return switch, Port((line >> p) & 1)


def line_for_switch(net: BenesNetwork, j: int, switch: int, port: Port) -> int:
    """Inverse of switch_for_line: insert the port bit at position p(j)."""
    _check_stage(net, j)
    if not 0 <= switch < net.switches_per_stage:
        raise ValueError(f"switch index {switch} out of range for N={net.n}")
    p = net.pair_bits[j - 1]
    return ((switch >> p) << (p + 1)) | (int(port) << p) | (switch & ((1 << p) - 1))


def output_link(net: BenesNetwork, j: int, switch: int, port: Port) -> LinkId:
    """Link driven by (switch, port) at stage j; input of stage j+1 or ejection."""
    return LinkId(j, line_for_switch(net, j, switch, port))


def injection_link(net: BenesNetwork, src: int) -> LinkId:
    _check_line(net, src)
    return LinkId(0, src)


def all_links(net: BenesNetwork):
    for b in range(2 * net.k):
        for line in range(net.n):
            yield LinkId(b, line)


def dump_wiring(net: BenesNetwork) -> str:
    """Text adjacency listing, one line per LinkId, for golden-file tests."""
    out = [f"benes k={net.k} N={net.n} stages={net.stage_count}"]
    for src in range(net.n):
        out.append(f"link(0,{src}): inject S{src} -> stage 1 switch "
                   f"{switch_for_line(net, 1, src)[0]}")
    for j in range(1, net.stage_count):
        for sw in range(net.switches_per_stage):
            for port in Port:
                link = output_link(net, j, sw, port)
                nsw, nport = switch_for_line(net, j + 1, link.line)
                out.append(f"link({link.boundary},{link.line}): "
                           f"R{sw}{j}.{port.name.lower()} -> R{nsw}{j + 1}"
                           f".{nport.name.lower()}")
    j = net.stage_count
    for sw in range(net.switches_per_stage):
        for port in Port:
            link = output_link(net, j, sw, port)
            out.append(f"link({link.boundary},{link.line}): "
                       f"R{sw}{j}.{port.name.lower()} -> eject D{link.line}")
    return "\n".join(out) + "\n"


def _check_stage(net: BenesNetwork, j: int) -> None:
    if not 1 <= j <= net.stage_count:
        raise ValueError(f"stage {j} out of range [1, {net.stage_count}]")


def _check_line(net: BenesNetwork, line: int) -> None:
    if not 0 <= line < net.n:
        raise ValueError(f"line {line} out of range [0, {net.n})")
