"""Port-selection rules and their dominance properties."""

import math

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra import numpy as hnp

from fama_idet.channel import PortStatistics
from fama_idet.strategy import select_wdt_port, select_wet_port


def stats_from(x, y):
    return PortStatistics(np.asarray(x, dtype=float), np.asarray(y, dtype=float))


class TestWdtSelection:
    def test_picks_best_ratio(self):
        s = stats_from([1.0, 4.0, 2.0], [2.0, 2.0, 0.5])
        assert select_wdt_port(s).port == 2
        assert select_wdt_port(s).criterion_value == 4.0

    def test_zero_interference_wins(self):
        s = stats_from([0.5, 10.0], [0.0, 1.0])
        choice = select_wdt_port(s)
        assert choice.port == 0
        assert math.isinf(choice.criterion_value)

    def test_zero_over_zero_loses(self):
        s = stats_from([0.0, 1.0], [0.0, 100.0])
        assert select_wdt_port(s).port == 1

    def test_tie_lowest_index(self):
        s = stats_from([2.0, 2.0], [1.0, 1.0])
        assert select_wdt_port(s).port == 0


class TestWetSelection:
    def test_picks_best_total(self):
        s = stats_from([1.0, 0.5], [0.2, 3.0])
        choice = select_wet_port(s)
        assert choice.port == 1
        assert choice.criterion_value == 3.5

    def test_tie_lowest_index(self):
        s = stats_from([1.0, 2.0], [2.0, 1.0])
        assert select_wet_port(s).port == 0


positive_arrays = hnp.arrays(
    float, st.integers(1, 12),
    elements=st.floats(1e-6, 1e6, allow_nan=False, allow_infinity=False),
)


class TestDominance:
    @given(x=positive_arrays, y=positive_arrays)
    @settings(max_examples=100, deadline=None)
    def test_each_rule_maximizes_its_criterion(self, x, y):
        k = min(len(x), len(y))
        s = stats_from(x[:k], y[:k])
        wdt = select_wdt_port(s)
        wet = select_wet_port(s)
        ratios = s.x / s.y
        totals = s.x + s.y
        assert ratios[wdt.port] >= ratios.max() - 1e-12 * abs(ratios.max())
        assert totals[wet.port] >= totals.max() - 1e-12 * abs(totals.max())
        # cross-dominance: each selection is no better on the other criterion
        assert ratios[wdt.port] >= ratios[wet.port]
        assert totals[wet.port] >= totals[wdt.port]
