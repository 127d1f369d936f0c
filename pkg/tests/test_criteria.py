"""Tests for the generic-unitarizability decision procedure."""
from fractions import Fraction as F

import pytest

from cuspline.core import Context, Line, Segment
from cuspline.classical import CuspSymbol, IndTemp, StGenSymbol, TempBase
from cuspline.halfint import hi
from cuspline.criteria import (
    GenericDatum,
    GenericDescription,
    MalformedDatumError,
    PASS,
    SKIP,
    generic_line_factor,
    generic_unitarizable,
    half_point_reducible,
    half_point_reducible_on_line,
)

CTX = Context(
    lines={
        "rho": Line("rho", True, hi("1/2")),
        "tau": Line("tau", True, hi(1)),
    }
)


def D(label, exps, sd=True, hr=False, tr=False, partner=None, line=None):
    return GenericDatum(
        label, tuple(F(e) for e in exps), sd, hr, tr, partner, line
    )


# (name, data, expected verdict, condition expected to fail first or None)
TRUTH_TABLE = [
    ("empty-collection", [], True, None),
    ("tempered", [D("a", [])], True, None),
    ("hermitian-missing-partner", [D("a", ["1/4"], sd=False)], False, "hermitian"),
    (
        "hermitian-matched-pair",
        [
            D("a", ["1/4"], sd=False, partner="b"),
            D("b", ["1/4"], sd=False, partner="a"),
        ],
        True,
        None,
    ),
    (
        "hermitian-mismatched-pair",
        [
            D("a", ["1/4"], sd=False, partner="b"),
            D("b", ["1/3"], sd=False, partner="a"),
        ],
        False,
        "hermitian",
    ),
    ("strict-window-violation", [D("a", ["3/4"], hr=True)], False, "strict-window"),
    ("strict-window-ok", [D("a", ["1/4", "2/5"], hr=True)], True, None),
    ("two-window-ok", [D("a", ["1/4", "3/5"])], True, None),
    ("complementary-sum", [D("a", ["2/5", "3/5"])], False, "pair-sum"),
    ("doubled-half", [D("a", ["1/2", "1/2"])], False, "half-multiplicity"),
    ("top-parity-odd", [D("a", ["1/2", "3/5"])], False, "top-parity"),
    ("interval-parity-ok", [D("a", ["1/4", "3/5", "4/5"])], True, None),
    (
        "interval-parity-even",
        [D("a", ["1/4", "3/10", "3/5", "4/5"])],
        False,
        "interval-parity",
    ),
    ("length-parity-odd", [D("a", ["1/4"], tr=True)], False, "length-parity"),
    ("length-parity-even", [D("a", ["1/4", "1/3"], tr=True)], True, None),
    ("exponent-at-one", [D("a", ["5/4"])], False, "normal-form"),
    ("repeated-high-exponent", [D("a", ["3/5", "3/5"])], False, "normal-form"),
]


class TestTruthTable:
    @pytest.mark.parametrize(
        "name,data,expected,failing",
        TRUTH_TABLE,
        ids=[row[0] for row in TRUTH_TABLE],
    )
    def test_case(self, name, data, expected, failing):
        result = generic_unitarizable(data)
        assert result.unitarizable is expected
        if failing is None:
            assert result.first_failure is None
        else:
            assert result.first_failure is not None
            assert result.first_failure.condition == failing

    def test_trace_is_deterministic(self):
        data = [D("b", ["1/4"]), D("a", ["1/3"], hr=True)]
        r1 = generic_unitarizable(data)
        r2 = generic_unitarizable(list(reversed(data)))
        assert r1 == r2
        assert [s.label for s in r1.steps][:2] == ["a", "a"]

    def test_skip_statuses_present(self):
        result = generic_unitarizable([D("a", ["1/4", "3/5"])])
        by_condition = {s.condition: s.status for s in result.steps}
        assert by_condition["interval-parity"] == SKIP
        assert by_condition["length-parity"] == SKIP
        assert by_condition["top-parity"] == PASS

    def test_render_lines(self):
        lines = generic_unitarizable([D("a", [])]).render_lines()
        assert lines[-1] == "verdict: unitarizable"

    def test_jsonable(self):
        data = generic_unitarizable([D("a", ["1/4"])]).to_jsonable()
        assert data["unitarizable"] is True
        assert all("condition" in s for s in data["steps"])


class TestValidation:
    def test_nonpositive_exponent(self):
        with pytest.raises(MalformedDatumError):
            D("a", ["-1/4"])
        with pytest.raises(MalformedDatumError):
            D("a", [0])

    def test_selfdual_with_partner(self):
        with pytest.raises(MalformedDatumError):
            D("a", [], sd=True, partner="b")

    def test_nonselfdual_self_partner(self):
        with pytest.raises(MalformedDatumError):
            D("a", [], sd=False, partner="a")

    def test_duplicate_labels(self):
        with pytest.raises(MalformedDatumError):
            generic_unitarizable([D("a", []), D("a", [])])

    def test_inconsistent_partner_links(self):
        with pytest.raises(MalformedDatumError):
            generic_unitarizable(
                [
                    D("a", [], sd=False, partner="b"),
                    D("b", [], sd=False, partner="c"),
                    D("c", [], sd=False, partner="b"),
                ]
            )

    def test_exponents_sorted_on_construction(self):
        d = D("a", ["3/5", "1/4"])
        assert d.exponents == (F(1, 4), F(3, 5))


class TestLineIndependence:
    def test_verdict_ignores_line_and_label_names(self):
        base = [D("a", ["1/4", "3/5"], line="rho")]
        moved = [D("zz", ["1/4", "3/5"], line="tau")]
        v1 = generic_unitarizable(base)
        v2 = generic_unitarizable(moved)
        assert v1.unitarizable == v2.unitarizable
        assert [s.status for s in v1.steps] == [s.status for s in v2.steps]

    def test_half_point_parity_rule(self):
        a_half, a_int = hi("1/2"), hi(1)
        assert half_point_reducible(1, a_half) is True
        assert half_point_reducible(2, a_half) is False
        assert half_point_reducible(3, a_half) is True
        assert half_point_reducible(1, a_int) is False
        assert half_point_reducible(2, a_int) is True
        assert half_point_reducible(4, hi(0)) is True

    def test_half_point_on_line(self):
        assert half_point_reducible_on_line(3, "rho", CTX) is True
        assert half_point_reducible_on_line(3, "tau", CTX) is False
        with pytest.raises(MalformedDatumError):
            half_point_reducible_on_line(3, "unknown", CTX)
        with pytest.raises(MalformedDatumError):
            half_point_reducible(0, hi("1/2"))


class TestLineFactor:
    def test_groups_and_biconditional(self):
        desc = GenericDescription(
            (
                D("a", ["1/4"], line="rho"),
                D("b", ["1/3", "1/4"], hr=True, line="tau"),
                D("c", ["2/5"], line="rho"),
            )
        )
        groups = generic_line_factor(desc, CTX)
        assert sorted(groups) == ["rho", "tau"]
        assert [d.label for d in groups["rho"].data] == ["a", "c"]
        whole = desc.decide().unitarizable
        parts = all(g.decide().unitarizable for g in groups.values())
        assert whole is parts is True

    def test_one_line_failing_fails_whole(self):
        desc = GenericDescription(
            (
                D("a", ["1/4"], line="rho"),
                D("b", ["3/4"], hr=True, line="tau"),
            )
        )
        groups = generic_line_factor(desc, CTX)
        assert desc.decide().unitarizable is False
        assert groups["rho"].decide().unitarizable is True
        assert groups["tau"].decide().unitarizable is False

    def test_single_line_identity(self):
        desc = GenericDescription((D("a", ["1/4"], line="rho"),))
        groups = generic_line_factor(desc, CTX)
        assert list(groups) == ["rho"]
        assert groups["rho"].data == desc.data

    def test_tempered_part_projected(self):
        temp = IndTemp(
            (Segment(hi(-1), hi(1), "tau"),),
            TempBase(StGenSymbol("rho", hi("1/2"), 1)),
        )
        desc = GenericDescription(
            (D("a", [], line="rho"), D("b", [], line="tau")), temp
        )
        groups = generic_line_factor(desc, CTX)
        assert groups["rho"].temp == TempBase(StGenSymbol("rho", hi("1/2"), 1))
        assert groups["tau"].temp == IndTemp(
            (Segment(hi(-1), hi(1), "tau"),), TempBase(CuspSymbol())
        )

    def test_missing_line_rejected(self):
        desc = GenericDescription((D("a", []),))
        with pytest.raises(MalformedDatumError):
            generic_line_factor(desc, CTX)

    def test_partners_split_across_lines_rejected(self):
        desc = GenericDescription(
            (
                D("a", [], sd=False, partner="b", line="rho"),
                D("b", [], sd=False, partner="a", line="tau"),
            )
        )
        with pytest.raises(MalformedDatumError):
            generic_line_factor(desc, CTX)


class TestFactorDecideCommutes:
    @pytest.mark.parametrize("case", range(6))
    def test_random_bundles(self, case):
        import random

        rng = random.Random(500 + case)
        data = []
        for i in range(rng.randint(1, 4)):
            line = rng.choice(["rho", "tau"])
            exps = [
                F(rng.randint(1, 9), 10) for _ in range(rng.randint(0, 3))
            ]
            data.append(
                GenericDatum(
                    f"d{i}",
                    tuple(exps),
                    True,
                    rng.random() < 0.5,
                    rng.random() < 0.5,
                    None,
                    line,
                )
            )
        desc = GenericDescription(tuple(data))
        groups = generic_line_factor(desc, CTX)
        whole = desc.decide().unitarizable
        parts = all(g.decide().unitarizable for g in groups.values())
        assert whole == parts
