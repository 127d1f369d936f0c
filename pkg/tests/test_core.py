"""Unit tests for half-integers, segments, multisegments and formal sums."""
import json

import pytest

from cuspline.core import (
    EmptySegmentError,
    FormalSum,
    Multisegment,
    NonIntegralLengthError,
    ms,
    seg,
    seg_opt,
    linked_union,
)
from cuspline.halfint import HalfInt, hi


class TestHalfInt:
    def test_arithmetic_stays_exact(self):
        assert hi("1/2") + hi(1) == hi("3/2")
        assert hi("3/2") - hi("1/2") == hi(1)
        assert -hi("1/2") == hi("-1/2")
        assert 2 * hi("1/2") == hi(1)

    def test_parse_and_str_roundtrip(self):
        for text in ["0", "2", "-3", "1/2", "-5/2"]:
            assert str(HalfInt.parse(text)) == text
        with pytest.raises(ValueError):
            HalfInt.parse("1/3")

    def test_ordering(self):
        assert hi("-1/2") < hi(0) < hi("1/2") < hi(1)

    def test_integrality(self):
        assert hi(2).is_integer
        assert not hi("3/2").is_integer

    def test_json_form_has_no_floats(self):
        payload = json.dumps(hi("3/2").to_jsonable())
        assert payload == '{"num2": 3}'


class TestSegment:
    def test_center_and_length(self):
        s = seg("-1/2", "3/2")
        assert s.length == 3
        assert s.center == hi("1/2")
        assert s.exponents() == (hi("-1/2"), hi("1/2"), hi("3/2"))

    def test_empty_literal_rejected(self):
        with pytest.raises(EmptySegmentError):
            seg(1, 0)
        assert seg_opt(1, 0) is None

    def test_non_integer_length_rejected(self):
        with pytest.raises(NonIntegralLengthError):
            seg(0, "1/2")

    def test_trim_and_dual(self):
        assert seg(0, 2).trimmed_top() == seg(0, 1)
        assert seg(1, 1).trimmed_top() is None
        assert seg("-1/2", "3/2").dual() == seg("-3/2", "1/2")

    def test_linked_union(self):
        assert linked_union(seg(0, 1), seg(2, 3)) == seg(0, 3)
        assert linked_union(seg(0, 1), seg(3, 4)) is None
        assert linked_union(seg(0, 2), seg(1, 3)) == seg(0, 3)
        assert linked_union(seg(0, 1), seg(0, 1, "other")) is None


class TestMultisegment:
    def test_canonical_order_by_center_then_length_then_line(self):
        a = seg(2, 3)        # center 5/2
        b = seg(0, 4)        # center 2, length 5
        c = seg(1, 3)        # center 2, length 3
        d = seg(1, 3, "tau")  # center 2, length 3, later line id
        m = Multisegment([d, c, b, a])
        assert m.segments == (a, b, c, d)

    def test_multiset_semantics(self):
        m = ms(seg(0, 1), seg(0, 1), seg(2, 2))
        assert len(m) == 3
        assert m.size == 5
        assert m.support()[("rho", hi(0))] == 2

    def test_add_and_remove(self):
        m = ms(seg(0, 1)) + ms(seg(2, 2))
        assert m == ms(seg(2, 2), seg(0, 1))
        assert m.remove(seg(2, 2)) == ms(seg(0, 1))
        with pytest.raises(KeyError):
            m.remove(seg(5, 5))

    def test_empty_markers_vanish(self):
        assert ms(None, seg(0, 0), None) == ms(seg(0, 0))


class TestFormalSum:
    def test_zero_coefficients_dropped(self):
        s = FormalSum({"a": 1}) - FormalSum({"a": 1})
        assert not s
        assert len(s) == 0

    def test_linear_ops(self):
        s = FormalSum({"a": 1, "b": 2})
        t = FormalSum({"b": -2, "c": 1})
        assert (s + t).coeffs == {"a": 1, "c": 1}
        assert (3 * s).coeffs == {"a": 3, "b": 6}
        assert (s - s) == FormalSum.zero()

    def test_coefficientwise_le(self):
        s = FormalSum({"a": 1})
        t = FormalSum({"a": 2, "b": 1})
        assert s.le(t)
        assert not t.le(s)

    def test_bind_and_combine_are_bilinear(self):
        s = FormalSum({1: 2})
        t = FormalSum({10: 3})
        assert s.combine(t, lambda a, b: a + b).coeffs == {11: 6}
        assert s.bind(lambda k: FormalSum({k: 1, k + 1: 1})).coeffs == {1: 2, 2: 2}

    def test_non_int_coefficients_rejected(self):
        with pytest.raises(TypeError):
            FormalSum({"a": 1.5})
