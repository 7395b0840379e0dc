import pytest
from hypothesis import given
from hypothesis import strategies as st

from benes_onoc.topology import (
    LinkId,
    Port,
    build_network,
    dump_wiring,
    line_for_switch,
    output_link,
    pair_bit,
    switch_for_line,
)


def test_build_k4():
    net = build_network(4)
    assert net.n == 16
    assert net.stage_count == 7
    assert net.switches_per_stage == 8


def test_build_k1_smallest():
    net = build_network(1)
    assert net.n == 2
    assert net.stage_count == 1
    assert net.switches_per_stage == 1


def test_pair_bit_table_k3():
    net = build_network(3)
    assert net.pair_bits == (0, 1, 2, 1, 0)


def test_build_rejects_bad_k():
    with pytest.raises(ValueError):
        build_network(0)
    with pytest.raises(ValueError):
        build_network(17)


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_pair_bit_palindrome(k):
    net = build_network(k)
    for j in range(1, 2 * k):
        assert pair_bit(net, j) == pair_bit(net, 2 * k - j)


def test_pair_bit_spec_points():
    net = build_network(4)
    assert pair_bit(net, 7) == 0   # last stage steers on the LSB
    assert pair_bit(net, 4) == 3   # middle stage steers on the MSB
    assert pair_bit(net, 1) == 0   # mirror of the last stage
    with pytest.raises(ValueError):
        pair_bit(net, 0)
    with pytest.raises(ValueError):
        pair_bit(net, 8)


def test_switch_for_line_examples():
    net = build_network(4)
    assert switch_for_line(net, 4, 13) == (5, Port.LOWER)   # 1101: drop bit 3
    assert switch_for_line(net, 7, 13) == (6, Port.LOWER)   # 1101: drop bit 0
    for j in range(1, 8):
        assert switch_for_line(net, j, 0) == (0, Port.UPPER)


def test_line_for_switch_examples():
    net = build_network(4)
    assert line_for_switch(net, 4, 5, Port.LOWER) == 13
    for j in range(1, 8):
        assert line_for_switch(net, j, 0, Port.UPPER) == 0


def test_out_of_range_rejected():
    net = build_network(3)
    with pytest.raises(ValueError):
        switch_for_line(net, 2, 8)
    with pytest.raises(ValueError):
        line_for_switch(net, 2, 4, Port.UPPER)


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_switch_line_roundtrip_exhaustive(k):
    net = build_network(k)
    for j in range(1, net.stage_count + 1):
        seen = set()
        for line in range(net.n):
            sw, port = switch_for_line(net, j, line)
            assert 0 <= sw < net.switches_per_stage
            assert line_for_switch(net, j, sw, port) == line
            seen.add((sw, port))
        assert len(seen) == net.n  # bijection per stage


def test_output_link_example():
    net = build_network(4)
    assert output_link(net, 4, 5, Port.LOWER) == LinkId(4, 13)


@pytest.mark.parametrize("k", [2, 3, 4])
def test_output_links_distinct_per_stage(k):
    net = build_network(k)
    for j in range(1, net.stage_count + 1):
        links = {
            output_link(net, j, sw, port)
            for sw in range(net.switches_per_stage)
            for port in Port
        }
        assert len(links) == net.n


@pytest.mark.parametrize("k", [2, 3, 4])
def test_second_half_destination_bit_walk(k):
    # from any line at stage k, picking destination bit p(j) at each remaining
    # stage must land on the destination's ejection line
    net = build_network(k)
    for dest in range(net.n):
        for line in range(net.n):
            cur = line
            for j in range(k, net.stage_count + 1):
                sw, _ = switch_for_line(net, j, cur)
                port = Port((dest >> pair_bit(net, j)) & 1)
                cur = output_link(net, j, sw, port).line
            assert cur == dest


@given(st.integers(1, 6), st.data())
def test_roundtrip_property(k, data):
    net = build_network(k)
    j = data.draw(st.integers(1, net.stage_count))
    line = data.draw(st.integers(0, net.n - 1))
    sw, port = switch_for_line(net, j, line)
    assert line_for_switch(net, j, sw, port) == line


def test_dump_wiring_k1_golden():
    assert dump_wiring(build_network(1)) == (
        "benes k=1 N=2 stages=1\n"
        "link(0,0): inject S0 -> stage 1 switch 0\n"
        "link(0,1): inject S1 -> stage 1 switch 0\n"
        "link(1,0): R01.upper -> eject D0\n"
        "link(1,1): R01.lower -> eject D1\n"
    )


def test_dump_wiring_line_count():
    net = build_network(3)
    lines = dump_wiring(net).strip().split("\n")
    assert len(lines) == 1 + 2 * net.k * net.n
