import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ccdp import bounds_ccdp_es as es
from ccdp import bounds_wrdp as wr
from ccdp.channel_model import cov_ccdp_es
from ccdp.errors import FeasibilityError, ParameterRangeError, RegimeError
from ccdp.rates import CANONICAL, PRINTED

lg = math.log2
powers = st.floats(0.01, 1e6)
gains2 = st.floats(0.0, 1e7)


def feasible_rho(M, u):
    lo = -1.0 / (M - 1)
    return lo + u * (1.0 - lo)


class TestTwoReceivers:
    @pytest.mark.parametrize("c", [0.0, 1.0, 30.0])
    def test_full_correlation(self, c):
        for form in (CANONICAL, PRINTED, es.SUBSTITUTED):
            assert es.ccdpes_outer_2(11, c, 1.0, form).value == pytest.approx(0.5 * lg(12))
        assert es.ccdpes_inner_2(11, c, 1.0).value == pytest.approx(0.5 * lg(12))

    def test_substituted_example(self):
        b = es.ccdpes_outer_2(11, 2, 0.5, es.SUBSTITUTED)
        assert b.value == pytest.approx(0.5 * lg(14) - 0.25 * lg(2) + 0.5, abs=1e-12)

    def test_inner_example(self):
        inner = es.ccdpes_inner_2(11, 2, 0.5).value
        assert inner == pytest.approx(0.5 * lg(14) - 0.25 * lg(2) - 0.5, abs=1e-12)
        assert es.ccdpes_outer_2(11, 2, 0.5, es.SUBSTITUTED).value - inner == pytest.approx(1.0, abs=1e-12)

    def test_canonical_is_independent_state_bound_at_effective_gain(self):
        b = es.ccdpes_outer_2(11, 2, 0.5)
        assert b.value == wr.wrdp_outer_2(11, math.sqrt(2)).value
        assert b.source == CANONICAL

    def test_inner_strong_state(self):
        assert es.ccdpes_inner_2(15, 8, 0.5).value == pytest.approx(1.0)

    @given(P=powers, c2=gains2, rho=st.floats(-1.0, 0.0))
    def test_nonpositive_correlation_is_independent(self, P, c2, rho):
        c = math.sqrt(c2)
        assert es.ccdpes_outer_2(P, c, rho).value == wr.wrdp_outer_2(P, c).value
        assert es.ccdpes_inner_2(P, c, rho).value == wr.wrdp_inner_2(P, c).value

    @given(P=powers, c2=gains2, rho=st.floats(-1.0, 1.0))
    def test_canonical_gap(self, P, c2, rho):
        c = math.sqrt(c2)
        gap = es.ccdpes_outer_2(P, c, rho).value - es.ccdpes_inner_2(P, c, rho).value
        assert -1e-9 <= gap <= 1.0 + 1e-9

    def test_printed_counterexample(self):
        c = math.sqrt(2000)
        gap = es.ccdpes_outer_2(15, c, 0.999, PRINTED).value - es.ccdpes_inner_2(15, c, 0.999).value
        assert gap == pytest.approx(1.91, abs=0.01)

    def test_infeasible(self):
        with pytest.raises(FeasibilityError):
            es.ccdpes_outer_2(1, 1, -1.5)

    def test_unknown_form(self):
        with pytest.raises(ParameterRangeError):
            es.ccdpes_outer_2(1, 1, 0.5, "other")


class TestManyReceivers:
    def test_printed_first_branch(self):
        b = es.ccdpes_outer_M(15, math.sqrt(3), 0.0, 4, PRINTED)
        assert b.value == pytest.approx(0.5 * lg(1 + 15 / 4) + 2.25, abs=1e-12)

    @given(P=powers, c2=gains2, M=st.integers(2, 16))
    def test_uncorrelated_slice(self, P, c2, M):
        c = math.sqrt(c2)
        assert es.ccdpes_outer_M(P, c, 0.0, M).value == wr.wrdp_outer_M(P, c, M).value
        assert es.ccdpes_inner_M(P, c, 0.0, M).value == wr.wrdp_inner_M(P, c, M).value

    def test_full_correlation(self):
        assert es.ccdpes_outer_M(15, math.sqrt(3), 1.0, 4).value == pytest.approx(2.0)

    @given(P=powers, c2=gains2, M=st.integers(2, 16), u=st.floats(0.0, 1.0))
    def test_canonical_gap(self, P, c2, M, u):
        c = math.sqrt(c2)
        rho = feasible_rho(M, u)
        gap = es.ccdpes_outer_M(P, c, rho, M).value - es.ccdpes_inner_M(P, c, rho, M).value
        assert -1e-9 <= gap <= 2.25 + 1e-9

    def test_spec_object(self):
        s = es.EsSpec(M=3, P=4.0, c=2.0, rho=0.75)
        assert s.rho_bar_plus == 0.25 and s.c_eff == pytest.approx(1.0)
        with pytest.raises(FeasibilityError):
            es.EsSpec(M=3, P=4.0, c=2.0, rho=-0.6)


class TestUnequalVariances:
    def test_strong_branch(self):
        assert es.ccdp_unequal_outer_2(15, 4, 1.0).value == pytest.approx(3.0)

    def test_middle_branch_unit_ratio(self):
        P, c2 = 15.0, 4.0
        expected = 0.5 * lg(1 + P + c2) - 0.25 * lg(2 * c2 + 1) + 1.5
        assert es.ccdp_unequal_outer_2(P, 2, 1.0).value == pytest.approx(expected, abs=1e-12)

    def test_stateless(self):
        assert es.ccdp_unequal_outer_2(15, 0, 4.0).value == pytest.approx(2.0)

    def test_Q_range(self):
        with pytest.raises(ParameterRangeError):
            es.ccdp_unequal_outer_2(15, 1, 0.5)

    @given(P=powers, c2=gains2, Q=st.floats(1.0, 1e4))
    def test_gap_where_claimed(self, P, c2, Q):
        c = math.sqrt(c2)
        inner = es.ccdp_unequal_inner_2(P, c, Q).value
        outer = es.ccdp_unequal_outer_2(P, c, Q).value
        assert inner <= outer + 1e-9
        if c2 * math.sqrt(Q) >= P + 1:
            assert outer - inner <= 2 + 1e-9


class TestDecompositions:
    def test_common_example(self):
        d = es.decompose_common(0.25, kappa=0.5)
        assert (d.k1c, d.k1p) == pytest.approx((0.5, math.sqrt(0.75)))
        np.testing.assert_allclose(d.covariance, [[1.0, 0.25], [0.25, 1.0]], atol=1e-12)

    def test_common_uncorrelated(self):
        d = es.decompose_common(0.0)
        assert d.k2c == 0.0
        np.testing.assert_allclose(d.covariance, np.eye(2), atol=1e-12)

    def test_common_full(self):
        d = es.decompose_common(1.0, Q=1.0, kappa=1.0)
        assert d.k1p == 0.0 and d.k2p == 0.0
        np.testing.assert_allclose(d.covariance, np.ones((2, 2)))

    @given(rho=st.floats(0.0, 1.0), Q=st.floats(1.0, 100.0), v=st.floats(0.0, 1.0))
    def test_common_reconstructs(self, rho, Q, v):
        kappa = max(rho, math.sqrt(rho)) if v == 0 else rho + v * (1 - rho)
        d = es.decompose_common(rho, Q, kappa)
        sq = math.sqrt(Q)
        expected = np.array([[1.0, rho * sq], [rho * sq, Q]])
        np.testing.assert_allclose(d.covariance, expected, atol=1e-9 * Q)

    def test_common_ranges(self):
        with pytest.raises(RegimeError):
            es.decompose_common(-0.1)
        with pytest.raises(ParameterRangeError):
            es.decompose_common(0.5, kappa=0.4)

    def test_negative_two_receivers(self):
        d = es.decompose_negative(2, -0.5)
        r = math.sqrt(0.5)
        np.testing.assert_allclose(d.coeffs, [[r, r, 0.0], [-r, 0.0, r]], atol=1e-15)
        np.testing.assert_allclose(d.covariance, [[1.0, -0.5], [-0.5, 1.0]], atol=1e-12)

    def test_negative_boundary_has_no_private_terms(self):
        M = 4
        d = es.decompose_negative(M, -1.0 / (M - 1))
        diag_cols = [i for i, (p, q) in enumerate(d.pairs) if p == q]
        assert np.all(d.coeffs[:, diag_cols] == 0.0)

    @pytest.mark.parametrize("M", [2, 3, 4, 6])
    def test_negative_reconstructs(self, M):
        for u in (0.1, 0.5, 1.0):
            rho = -u / (M - 1)
            np.testing.assert_allclose(es.decompose_negative(M, rho).covariance, cov_ccdp_es(M, rho), atol=1e-12)

    def test_negative_needs_negative(self):
        with pytest.raises(RegimeError):
            es.decompose_negative(3, 0.2)
