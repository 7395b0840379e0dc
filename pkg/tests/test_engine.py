import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from benes_onoc.engine import EventQueue, SchedulingError, derive_stream


class TestEventQueue:
    def test_pop_order_by_time(self):
        q = EventQueue()
        q.schedule(10, "A")
        q.schedule(10, "B")
        q.schedule(5, "C")
        assert [q.next_event()[1] for _ in range(3)] == ["C", "A", "B"]

    def test_empty_queue_returns_none(self):
        assert EventQueue().next_event() is None

    def test_equal_times_pop_fifo(self):
        q = EventQueue()
        for name in "abcde":
            q.schedule(3, name)
        assert [q.next_event()[1] for _ in range(5)] == list("abcde")

    def test_single_event(self):
        q = EventQueue()
        q.schedule(7, "X")
        assert q.next_event() == (7, "X")
        assert q.now == 7

    def test_scheduling_in_past_raises(self):
        q = EventQueue()
        q.schedule(10, "A")
        q.next_event()
        with pytest.raises(SchedulingError):
            q.schedule(9, "B")

    @given(st.lists(st.tuples(st.integers(0, 100), st.booleans()), max_size=60))
    def test_clock_never_decreases(self, ops):
        q = EventQueue()
        last = 0
        for delta, pop in ops:
            q.schedule(q.now + delta, None)
            if pop:
                t, _ = q.next_event()
                assert t >= last
                last = t

    @given(st.lists(st.integers(0, 50), max_size=40))
    def test_delivery_equals_sorted_order(self, times):
        q = EventQueue()
        for i, t in enumerate(times):
            q.schedule(t, i)
        popped = []
        while (item := q.next_event()) is not None:
            popped.append(item)
        expected = [(t, i) for t, i in sorted(zip(times, range(len(times))))]
        assert popped == expected


class TestRngStream:
    def test_same_seed_index_identical(self):
        a = derive_stream(123, 0)
        b = derive_stream(123, 0)
        assert [a.next_u64() for _ in range(100)] == [b.next_u64() for _ in range(100)]

    def test_distinct_indices_differ(self):
        clashes = sum(
            derive_stream(s, 0).next_u64() == derive_stream(s, 1).next_u64()
            for s in range(1000)
        )
        assert clashes == 0

    def test_golden_values(self):
        # frozen from the documented splitmix64 derivation; guards platform drift
        s = derive_stream(42, 0)
        assert [s.next_u64() for _ in range(5)] == [
            0xCA685846B557F0FC,
            0x0D5EC61FA641D02E,
            0x45D46229CC936C2B,
            0x53504DFD2059B835,
            0x80D8A6DA0635A6E2,
        ]
        assert derive_stream(42, 1).next_u64() == 0x0B80371C89E23AA6
        assert derive_stream(0, 0).next_u64() == 0x568A9B0B1A2C05EC

    def test_exponential_empirical_mean(self):
        stream = derive_stream(7, 0)
        mean = 5000.0
        n = 10**6
        total = sum(stream.sample_exponential(mean) for _ in range(n))
        assert abs(total / n - mean) / mean < 0.01

    def test_exponential_nonnegative_and_deterministic(self):
        a = derive_stream(3, 9)
        b = derive_stream(3, 9)
        for _ in range(1000):
            x = a.sample_exponential(100.0)
            assert x >= 0
            assert x == b.sample_exponential(100.0)

    def test_exponential_rejects_bad_mean(self):
        with pytest.raises(ValueError):
            derive_stream(1, 0).sample_exponential(0)
        with pytest.raises(ValueError):
            derive_stream(1, 0).sample_exponential(-1.0)

    def test_uniform_int_n1_always_zero(self):
        s = derive_stream(1, 2)
        assert all(s.sample_uniform_int(1) == 0 for _ in range(100))

    def test_uniform_int_rejects_zero(self):
        with pytest.raises(ValueError):
            derive_stream(1, 0).sample_uniform_int(0)

    def test_uniform_int_chi_square(self):
        from scipy.stats import chisquare

        s = derive_stream(99, 0)
        n, draws = 15, 10**6
        counts = [0] * n
        for _ in range(draws):
            counts[s.sample_uniform_int(n)] += 1
        assert chisquare(counts).pvalue > 0.001

    def test_uniform01_in_half_open_interval(self):
        s = derive_stream(5, 5)
        for _ in range(10000):
            u = s.uniform01()
            assert 0.0 < u <= 1.0
