from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from seqlab.errors import ConfigError, DuplicateRatio, RatioOutOfRange
from seqlab.lineability import (
    GeometricCombination,
    certified_zero_bound,
    dominance_holds,
    geometric_generator,
    independence_rank,
    lineability_certificate,
    zero_scan,
)

ratio_st = st.fractions(min_value=Fraction(1, 30), max_value=Fraction(29, 30),
                        max_denominator=30)
coeff_st = st.fractions(min_value=Fraction(-8), max_value=Fraction(8),
                        max_denominator=8).filter(lambda c: c != 0)


def comb(ratios, coeffs):
    return GeometricCombination(tuple(Fraction(r) for r in ratios),
                                tuple(Fraction(c) for c in coeffs))


class TestGenerator:
    def test_half_powers(self):
        g = geometric_generator(Fraction(1, 2), 4)
        assert g.coords == (Fraction(1, 2), Fraction(1, 4), Fraction(1, 8),
                            Fraction(1, 16))

    def test_decimal_powers(self):
        g = geometric_generator(Fraction(1, 10), 3)
        assert g.coords == (Fraction(1, 10), Fraction(1, 100), Fraction(1, 1000))

    def test_ratio_out_of_range(self):
        with pytest.raises(RatioOutOfRange):
            geometric_generator(Fraction(2), 4)
        with pytest.raises(RatioOutOfRange):
            geometric_generator(Fraction(0), 4)

    @given(p=ratio_st, q=ratio_st)
    @settings(max_examples=200, deadline=None)
    def test_hadamard_closure_randomized(self, p, q):
        from seqlab.core import hadamard
        t = 48
        assert hadamard(geometric_generator(p, t),
                        geometric_generator(q, t)).coords \
            == geometric_generator(p * q, t).coords


class TestZeroBound:
    def test_single_term_never_zero(self):
        assert certified_zero_bound(comb(["1/2"], [1])) == 0

    def test_known_single_zero(self):
        # -2*x_{1/4} + x_{1/2}: coordinate j is (1/2)^j (1 - 2 (1/2)^j),
        # zero exactly at j = 1; dominance fails only there
        c = comb(["1/4", "1/2"], [-2, 1])
        assert zero_scan(c, 200) == [1]
        assert certified_zero_bound(c) == 1

    def test_no_zero_small_bound(self):
        c = comb(["1/4", "1/2"], [-1, 1])
        assert zero_scan(c, 200) == []
        m = certified_zero_bound(c)
        assert m == 0  # dominance holds from j = 1 on

    @given(st.data())
    @settings(max_examples=60, deadline=None)
    def test_soundness_randomized(self, data):
        n = data.draw(st.integers(min_value=1, max_value=5))
        ratios = sorted(set(data.draw(
            st.lists(ratio_st, min_size=n, max_size=n, unique=True))))
        # keep adjacent top ratios separated so the envelope bound stays small
        if len(ratios) >= 2 and ratios[-2] / ratios[-1] > Fraction(19, 20):
            ratios[-1] = min(Fraction(63, 64),
                             ratios[-2] / Fraction(19, 20) + Fraction(1, 64))
            if ratios[-1] <= ratios[-2]:
                ratios = ratios[:-1]
        coeffs = data.draw(st.lists(coeff_st, min_size=len(ratios),
                                    max_size=len(ratios)))
        c = comb(ratios, coeffs)
        m = certified_zero_bound(c)
        zeros = zero_scan(c, 500)
        assert all(j <= m for j in zeros)
        assert len(zeros) <= m
        for j in range(m + 1, min(m + 50, 501)):
            assert dominance_holds(c, j)


class TestIndependenceRank:
    def test_singleton(self):
        assert independence_rank([Fraction(1, 2)], 1) == 1

    def test_three_by_three_determinant_oracle(self):
        ratios = [Fraction(1, 2), Fraction(1, 3), Fraction(1, 5)]
        # independent oracle: exact 3x3 determinant of [r_i^j]
        m = [[r ** j for j in range(1, 4)] for r in ratios]
        det = (m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
               - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
               + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]))
        assert det != 0
        assert independence_rank(ratios, 3) == 3

    def test_duplicate_rejected(self):
        with pytest.raises(DuplicateRatio):
            independence_rank([Fraction(1, 2), Fraction(1, 2)], 4)

    def test_truncation_too_small(self):
        with pytest.raises(ConfigError):
            independence_rank([Fraction(1, 2), Fraction(1, 3)], 1)

    @given(ratios=st.lists(ratio_st, min_size=1, max_size=20, unique=True))
    @settings(max_examples=40, deadline=None)
    def test_full_rank_randomized(self, ratios):
        assert independence_rank(ratios, len(ratios)) == len(ratios)


class TestCombinationValidation:
    def test_sorted_distinct_required(self):
        with pytest.raises(DuplicateRatio):
            comb(["1/2", "1/2"], [1, 1])
        with pytest.raises(ConfigError):
            comb(["1/2", "1/3"], [1, 1])  # not increasing
        with pytest.raises(ConfigError):
            comb(["1/3", "1/2"], [1, 0])  # zero coefficient
        with pytest.raises(RatioOutOfRange):
            comb(["1/2", "3/2"], [1, 1])

    @given(st.data())
    @settings(max_examples=40, deadline=None)
    def test_membership_evidence_zero_sets_finite(self, data):
        ratios = sorted(set(data.draw(
            st.lists(ratio_st, min_size=2, max_size=4, unique=True))))
        coeffs = data.draw(st.lists(coeff_st, min_size=len(ratios),
                                    max_size=len(ratios)))
        c = comb(ratios, coeffs)
        m = certified_zero_bound(c)
        assert len(zero_scan(c, 300)) <= m


class TestCertificate:
    def test_certificate_shape_and_status(self):
        c = comb(["1/3", "1/2"], [1, 1])
        doc = lineability_certificate(c, 64, scan_upto=200)
        assert doc["kind"] == "lineability"
        assert doc["status"] == "pass"
        assert doc["data"]["rank"] == 2
        assert doc["data"]["zero_set"] == []
