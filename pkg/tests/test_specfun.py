"""Special-function layer against frozen high-precision oracle values.

Oracle values were computed independently with mpmath at 40 digits.
"""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fama_idet.specfun import (
    SeriesConvergenceError,
    Tolerance,
    bessel_i,
    bessel_i_ln,
    bessel_j1,
    gamma_lower_reg,
    gamma_upper_reg,
    hyp1f1,
    hyp1f2,
    marcum_q,
    marcum_q_outer,
    mu_from_w,
    pochhammer,
)

# (order, a, b, Q_order(a, b)) from mpmath's Poisson-gamma representation
MARCUM_ORACLE = [
    (1, 0.5, 1.0, 0.64271423027254377),
    (1, 2.0, 3.0, 0.21436208816264946),
    (2, 1.5, 0.7, 0.99093907398933029),
    (4, 3.0, 2.5, 0.96387808095274243),
    (5, 0.3, 4.0, 0.10378528201163275),
    (3, 6.0, 5.5, 0.82569955206336653),
    (1, 0.0, 2.0, 0.13533528323661269),
    (2, 10.0, 9.0, 0.87663838145763797),
]

HYP1F1_ORACLE = [
    (2.5, 3.5, 1.2, 2.4296304350551779),
    (1.0, 2.0, -4.0, 0.24542109027781645),
    (0.5, 1.5, 10.0, 1168.2304635794389),
    (3.0, 1.0, -0.5, 0.075816332464079178),
]

HYP1F2_ORACLE = [
    (0.5, 1.0, 1.5, -2.0, 0.50448087093965966),
    (0.5, 1.0, 1.5, -246.74011002723395, 0.028566694755893891),
    (0.5, 1.0, 1.5, -9.869604401089358, 0.12082588336451558),
    (1.5, 2.0, 2.5, 5.0, 3.7506747354565833),
]

BESSEL_I_LN_ORACLE = [
    (0, 0.5, 0.061549719185481304),
    (0, 50.0, 47.127575501871805),
    (1, 700.0, 695.80498520185565),
    (4, 3.0, -1.1217626566701268),
]

MU_ORACLE = [
    (0.1, 0.991822593868641),
    (0.5, 0.82259962358347),
    (1.0, 0.556107207024928),
    (2.0, 0.396664784074122),
    (5.0, 0.251924182354),
    (20.0, 0.126131590659995),
]


class TestPochhammer:
    def test_base_cases(self):
        assert pochhammer(3.0, 0) == 1.0
        assert pochhammer(2.0, 3) == 2.0 * 3.0 * 4.0
        assert pochhammer(0.5, 2) == 0.5 * 1.5

    def test_negative_k_rejected(self):
        with pytest.raises(ValueError):
            pochhammer(1.0, -1)


class TestMarcumQ:
    @pytest.mark.parametrize("order,a,b,want", MARCUM_ORACLE)
    def test_oracle_values(self, order, a, b, want):
        got = float(marcum_q(order, a, b))
        assert got == pytest.approx(want, rel=1e-10)

    def test_b_zero_is_one(self):
        for order in (1, 2, 5):
            for a in (0.0, 0.5, 3.0, 20.0):
                assert float(marcum_q(order, a, 0.0)) == pytest.approx(1.0, abs=1e-12)

    def test_a_zero_is_upper_gamma(self):
        for order in (1, 2, 4, 7):
            for b in (0.2, 1.0, 3.0, 8.0):
                want = gamma_upper_reg(order, b * b / 2.0)
                assert float(marcum_q(order, 0.0, b)) == pytest.approx(want, rel=1e-12)

    def test_outer_matches_elementwise(self):
        a = np.array([0.0, 0.7, 2.0])
        b = np.array([0.5, 1.5, 4.0, 9.0])
        outer = marcum_q_outer(2, a, b)
        assert outer.shape == (3, 4)
        for i, ai in enumerate(a):
            for j, bj in enumerate(b):
                assert outer[i, j] == pytest.approx(float(marcum_q(2, ai, bj)), rel=1e-12)

    @given(
        a=st.floats(0.0, 15.0),
        b=st.floats(0.0, 15.0),
        order=st.integers(1, 6),
    )
    @settings(max_examples=60, deadline=None)
    def test_is_probability(self, a, b, order):
        q = float(marcum_q(order, a, b))
        assert -1e-12 <= q <= 1.0 + 1e-12

    @given(a=st.floats(0.0, 10.0), order=st.integers(1, 5))
    @settings(max_examples=40, deadline=None)
    def test_decreasing_in_b(self, a, order):
        bs = np.array([0.5, 1.0, 2.0, 4.0, 8.0])
        q = marcum_q(order, a, bs)
        assert np.all(np.diff(q) <= 1e-12)

    @given(b=st.floats(0.1, 10.0), order=st.integers(1, 5))
    @settings(max_examples=40, deadline=None)
    def test_increasing_in_a(self, b, order):
        qs = marcum_q(order, np.array([0.0, 0.5, 1.0, 2.0, 5.0]), b)
        assert np.all(np.diff(qs) >= -1e-12)


class TestHypergeometric:
    @pytest.mark.parametrize("a,b,x,want", HYP1F1_ORACLE)
    def test_1f1_oracle(self, a, b, x, want):
        assert hyp1f1(a, b, x) == pytest.approx(want, rel=1e-10)

    @given(x=st.floats(-5.0, 20.0), a=st.floats(0.3, 5.0))
    @settings(max_examples=50, deadline=None)
    def test_1f1_a_equals_b_is_exp(self, x, a):
        # below x ~ -5 the alternating series cancellation exceeds the gate
        assert hyp1f1(a, a, x) == pytest.approx(math.exp(x), rel=1e-10)

    def test_1f1_bad_b(self):
        with pytest.raises(ValueError):
            hyp1f1(1.0, 0.0, 1.0)
        with pytest.raises(ValueError):
            hyp1f1(1.0, -2.0, 1.0)

    @pytest.mark.parametrize("a,b1,b2,x,want", HYP1F2_ORACLE)
    def test_1f2_oracle(self, a, b1, b2, x, want):
        assert hyp1f2(a, b1, b2, x) == pytest.approx(want, rel=1e-10)

    def test_series_cap_raises(self):
        tol = Tolerance(rel_tol=1e-10, max_terms=16)
        with pytest.raises(SeriesConvergenceError):
            hyp1f1(0.5, 1.5, 100.0, tol=tol)


class TestBessel:
    @pytest.mark.parametrize("n,x,want", BESSEL_I_LN_ORACLE)
    def test_i_ln_oracle(self, n, x, want):
        assert float(bessel_i_ln(n, x)) == pytest.approx(want, rel=1e-12)

    def test_i_matches_ln(self):
        for n, x in [(0, 0.5), (2, 4.0), (1, 30.0)]:
            assert float(bessel_i(n, x)) == pytest.approx(
                math.exp(float(bessel_i_ln(n, x))), rel=1e-12
            )

    def test_j1_small_argument(self):
        # J1(x) ~ x/2 for small x
        assert float(bessel_j1(1e-8)) == pytest.approx(0.5e-8, rel=1e-6)


class TestGamma:
    @given(s=st.floats(0.5, 20.0), x=st.floats(0.0, 50.0))
    @settings(max_examples=60, deadline=None)
    def test_complement(self, s, x):
        assert gamma_lower_reg(s, x) + gamma_upper_reg(s, x) == pytest.approx(
            1.0, abs=1e-12
        )


class TestMuFromW:
    @pytest.mark.parametrize("w,want", MU_ORACLE)
    def test_oracle_values(self, w, want):
        assert mu_from_w(w) == pytest.approx(want, rel=1e-10)

    def test_decreasing_in_w(self):
        vals = [mu_from_w(w) for w in (0.2, 0.5, 1.0, 2.0, 5.0, 10.0, 20.0)]
        assert all(a > b for a, b in zip(vals, vals[1:]))

    def test_range(self):
        for w in (0.05, 0.3, 1.0, 7.0, 15.0):
            assert 0.0 < mu_from_w(w) < 1.0
