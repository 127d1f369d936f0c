"""Acceptance suite: one test per criterion, each with a wall-time budget.

Every test prints a single ``acceptance N: PASS`` line (visible with -s) and
enforces its time budget with ``time.monotonic``.  All checks are exact
integer / half-integer computations; there are no tolerances.
"""

import dataclasses
import random
import time

from cuspline.core import Context, Line, Segment, EMPTY_MS, ms
from cuspline.classical import (
    ClassElt,
    CoStGenSymbol,
    CuspSymbol,
    StGenSymbol,
    induced,
    module_comult,
    identify_point_of_reducibility,
    rtimes,
)
from cuspline.criteria import GenericDatum, generic_unitarizable
from cuspline.glhopf import (
    comult,
    delta_key,
    mw_dual,
    twisted_comult,
    twisted_comult_segment_closed,
    zeta_key,
)
from cuspline.halfint import HalfInt, hi
from cuspline.jantzen import (
    SplitDatum,
    LinePartition,
    combine_data,
    filtered_identity_sides,
    transport_line,
)
from cuspline.sampling import (
    random_langlands_datum,
    random_multisegment,
)
from cuspline.subquotients import (
    VERIFIED,
    CaseTag,
    aubert_pair,
    check_prop41,
    classify,
    enumerate_subquotients,
    verify_hd_identity,
)


def seg(b, e, line="rho"):
    return Segment(hi(b), hi(e), line)


def halfint_range(lo, hi_, step2=1):
    """All half-integers from lo to hi_ inclusive, stepping by step2/2."""
    out = []
    x = hi(lo).num2
    stop = hi(hi_).num2
    while x <= stop:
        out.append(HalfInt(x))
        x += step2
    return out


def window_segments(lo, hi_, max_length, line="rho"):
    """All segments with endpoints in [lo, hi_] of each parity, bounded length."""
    out = []
    for parity in (0, 1):
        points = [
            x
            for x in halfint_range(lo, hi_)
            if x.num2 % 2 == parity
        ]
        for i, b in enumerate(points):
            for e in points[i:]:
                length = (e - b).num2 // 2 + 1
                if length <= max_length:
                    out.append(Segment(b, e, line))
    return out


def multisegments_up_to(pool, max_size):
    """All multisets from the pool with total support size <= max_size."""
    out = [EMPTY_MS]
    # Depth-first over the pool with nondecreasing indices (multisets).
    def extend(start, current, size):
        for i in range(start, len(pool)):
            s = pool[i]
            new_size = size + s.length
            if new_size > max_size:
                continue
            nxt = current + [s]
            out.append(ms(*nxt))
            extend(i, nxt, new_size)

    extend(0, [], 0)
    return out


def report_line(number, elapsed, detail=""):
    suffix = f" — {detail}" if detail else ""
    print(f"acceptance {number}: PASS ({elapsed:.2f}s){suffix}")


class TestAcceptance:
    def test_criterion_01_twisted_restriction_closed_form(self):
        """Closed one-segment formula equals the compositional route."""
        start = time.monotonic()
        checked = 0
        for s in window_segments("-3", "3", max_length=6):
            assert twisted_comult(delta_key(ms(s))) == \
                twisted_comult_segment_closed(s), f"mismatch at {s}"
            checked += 1
        elapsed = time.monotonic() - start
        assert checked == 48
        assert elapsed < 5.0, f"budget exceeded: {elapsed:.2f}s"
        report_line(1, elapsed, f"{checked} segments")

    def test_criterion_02_restriction_coassociative(self):
        """(split (x) id) after split equals (id (x) split) after split."""
        start = time.monotonic()
        pool = window_segments("0", "4", max_length=5)
        keys = multisegments_up_to(pool, max_size=5)
        checked = 0
        for make in (delta_key, zeta_key):
            for m in keys:
                step = comult(make(m)).terms.coeffs
                # Accumulate both triple expansions in plain dicts; building
                # intermediate formal sums would dominate the runtime.
                left: dict = {}
                right: dict = {}
                for (a, b), c in step.items():
                    for (q1, q2), c2 in comult(make(a)).terms.coeffs.items():
                        k = (q1, q2, b)
                        left[k] = left.get(k, 0) + c * c2
                    for (q1, q2), c2 in comult(make(b)).terms.coeffs.items():
                        k = (a, q1, q2)
                        right[k] = right.get(k, 0) + c * c2
                left = {k: v for k, v in left.items() if v}
                right = {k: v for k, v in right.items() if v}
                assert left == right, f"coassociativity broken at {m}"
                checked += 1
        elapsed = time.monotonic() - start
        assert checked == 2 * len(keys) and len(keys) > 500
        assert elapsed < 10.0, f"budget exceeded: {elapsed:.2f}s"
        report_line(2, elapsed, f"{checked} multisegment keys")

    def test_criterion_03_witness_unit_coefficient_two(self):
        """The symmetric witness pairs with the unit with coefficient 2."""
        start = time.monotonic()
        for a in ("1/2", "1", "3/2", "2", "5/2", "3"):
            witness = ms(seg(f"-{a}", a))
            t = twisted_comult(delta_key(witness))
            coeff = t.terms.coeffs.get((witness, EMPTY_MS), 0)
            assert coeff == 2, f"coefficient at {a} is {coeff}"
        elapsed = time.monotonic() - start
        assert elapsed < 1.0, f"budget exceeded: {elapsed:.2f}s"
        report_line(3, elapsed, "6 symmetric segments")

    def test_criterion_04_point_identity(self):
        """Restriction of the point equals the sum of its two length-two
        constituents, after identifying the point term on the right."""
        start = time.monotonic()
        for a_txt in ("1/2", "1", "3/2"):
            a = hi(a_txt)
            point = rtimes(delta_key(ms(seg(a_txt, a_txt))), ClassElt.cusp())
            lhs = identify_point_of_reducibility(
                module_comult(point), "rho", a
            )
            rhs = module_comult(
                induced(EMPTY_MS, StGenSymbol("rho", a, 0))
                + induced(EMPTY_MS, CoStGenSymbol("rho", a, 0))
            )
            assert lhs.terms == rhs.terms, f"identity fails at alpha={a_txt}"
        elapsed = time.monotonic() - start
        assert elapsed < 1.0, f"budget exceeded: {elapsed:.2f}s"
        report_line(4, elapsed, "3 reducibility points")

    def test_criterion_05_counting_sweep(self):
        """Every eligible subquotient certifies >= 5 distinct constituents,
        all support/exponent exclusion steps machine-verified, and a
        Jacquet multiplicity bound of at most 4 < 5."""
        start = time.monotonic()
        fact_labels = (
            "exponent-dominance exclusion",
            "top-merge exclusion",
            "down-merge exclusion",
            "double-point exclusion",
        )
        checked = 0
        for a_txt in ("1/2", "1", "3/2"):
            for n in (1, 2, 3):
                for d in enumerate_subquotients(a_txt, n):
                    if classify(d) in (
                        CaseTag.GEN_STEINBERG,
                        CaseTag.CO_GEN_STEINBERG,
                    ):
                        continue
                    report = check_prop41(d)
                    assert report.ok, f"check failed on {d}"
                    assert len(set(report.certificates)) >= 5, d
                    assert report.length_bound >= 5, d
                    assert report.mult_bound <= 4, d
                    assert report.length_bound > report.mult_bound, d
                    for step in report.steps:
                        base = step.label.split("dual·")[-1]
                        if base in fact_labels:
                            assert step.status == VERIFIED, (d, step.label)
                    checked += 1
        elapsed = time.monotonic() - start
        assert checked == 3 * (2 + 6 + 14)
        assert elapsed < 60.0, f"budget exceeded: {elapsed:.2f}s"
        report_line(5, elapsed, f"{checked} subquotient data")

    def test_criterion_06_enumeration_and_involution(self):
        """2^(n+1) labels per chain; the dual pairing is an involution
        exchanging the two bottom halves."""
        start = time.monotonic()
        for n in range(0, 9):
            data = enumerate_subquotients("1/2", n)
            assert len(data) == 2 ** (n + 1)
            assert len(set(data)) == len(data)
            plain = [d for d in data if not d.bottom]
            starred = [d for d in data if d.bottom]
            assert len(plain) == len(starred) == 2 ** n
            for d in data:
                pair = aubert_pair(d)
                assert aubert_pair(pair) == d
                assert pair.bottom != d.bottom
        elapsed = time.monotonic() - start
        assert elapsed < 5.0, f"budget exceeded: {elapsed:.2f}s"
        report_line(6, elapsed, "chains up to n=8")

    def test_criterion_07_involution_on_random_multisegments(self):
        """The multisegment involution squares to the identity and preserves
        the cuspidal support; a single segment maps to its singletons."""
        start = time.monotonic()
        rng = random.Random(20260823)
        for _ in range(1000):
            m = random_multisegment(
                rng, ("rho",), max_segments=4, window=4, max_length=2
            )
            assert m.size <= 8
            dual = mw_dual(m)
            assert mw_dual(dual) == m, f"involution broken at {m}"
            assert dual.support() == m.support(), f"support moved at {m}"
        for s in window_segments("-2", "2", max_length=4):
            singles = ms(*(Segment(x, x, s.line) for x in s.exponents()))
            assert mw_dual(ms(s)) == singles, f"single segment at {s}"
        elapsed = time.monotonic() - start
        assert elapsed < 5.0, f"budget exceeded: {elapsed:.2f}s"
        report_line(7, elapsed, "1000 seeded multisegments")

    def test_criterion_08_highest_derivative(self):
        """Top derivative trims every segment; the derivative identification
        step verifies on every singleton-bottom datum with n <= 3."""
        from cuspline.glhopf import highest_derivative

        start = time.monotonic()
        pool = window_segments("0", "4", max_length=5)
        keys = multisegments_up_to(pool, max_size=5)
        for m in keys:
            trimmed = m.map_segments(Segment.trimmed_top)
            assert highest_derivative(zeta_key(m)) == zeta_key(trimmed), m
        checked_b = 0
        for a_txt in ("1/2", "1", "3/2", "2"):
            for n in (2, 3):
                for d in enumerate_subquotients(a_txt, n):
                    if classify(d) is CaseTag.CASE_B:
                        step = verify_hd_identity(d)
                        assert step.status == VERIFIED, d
                        checked_b += 1
        elapsed = time.monotonic() - start
        assert checked_b == 4 * (1 + 3)
        assert elapsed < 5.0, f"budget exceeded: {elapsed:.2f}s"
        report_line(
            8, elapsed, f"{len(keys)} trim keys, {checked_b} identifications"
        )

    def test_criterion_09_split_combine_round_trips(self):
        """Splitting then combining is the identity in both directions,
        splitting is associative across three lines, and the filtered
        restriction identity holds for every small ring element."""
        start = time.monotonic()
        ctx2 = Context(
            "sigma",
            {
                "rho": Line("rho", True, hi("1/2")),
                "tau": Line("tau", True, hi(1)),
            },
        )
        rng = random.Random(912)
        for _ in range(100):
            d = random_langlands_datum(rng, ("rho", "tau"))
            split = SplitDatum.split(d, ctx2)
            assert split.combine() == d, f"round trip broke at {d}"
        for _ in range(100):
            d1 = random_langlands_datum(rng, ("rho",), core_line="rho")
            d2 = random_langlands_datum(
                rng, ("tau",), core_line="tau", allow_core=False
            )
            combined = combine_data(d1, d2)
            split = SplitDatum.split(combined, ctx2)
            assert split.part("rho") == d1, (d1, d2)
            assert split.part("tau") == d2, (d1, d2)

        ctx3 = ctx2.with_line(Line("ups", True, hi("3/2")))
        for _ in range(50):
            d = random_langlands_datum(rng, ("rho", "tau", "ups"))
            split = SplitDatum.split(d, ctx3)
            # Combine in two different association orders.
            left_first = combine_data(
                combine_data(split.part("rho"), split.part("tau")),
                split.part("ups"),
            )
            right_first = combine_data(
                split.part("rho"),
                combine_data(split.part("tau"), split.part("ups")),
            )
            assert left_first == right_first == d, d

        part = LinePartition(frozenset({"rho"}), frozenset({"tau"}))
        y = induced(ms(seg(1, 1, "tau")), CuspSymbol())
        pool = window_segments("-2", "2", max_length=4)
        checked = 0
        for m in multisegments_up_to(pool, max_size=4):
            x = delta_key(m)
            lhs, rhs = filtered_identity_sides(x, y, part, ctx2)
            assert lhs.terms == rhs.terms, f"filtered identity at {m}"
            checked += 1
        elapsed = time.monotonic() - start
        assert elapsed < 10.0, f"budget exceeded: {elapsed:.2f}s"
        report_line(
            9, elapsed, f"250 seeded round trips, {checked} filtered identities"
        )

    def test_criterion_10_generic_truth_table(self):
        """Ten hand-derived verdicts, then invariance under line transport."""
        start = time.monotonic()
        table = [
            # (name, data, unitarizable, failing condition or None)
            (
                "hermitian-fail",
                [
                    GenericDatum(
                        "a", ("1/4",), selfdual=False, halfred=False,
                        partner="b",
                    ),
                    GenericDatum(
                        "b", ("1/3",), selfdual=False, halfred=False,
                        partner="a",
                    ),
                ],
                False,
                "hermitian",
            ),
            (
                "window-fail",
                [
                    GenericDatum(
                        "a", ("3/5",), selfdual=False, halfred=False,
                        partner="b",
                    ),
                    GenericDatum(
                        "b", ("3/5",), selfdual=False, halfred=False,
                        partner="a",
                    ),
                ],
                False,
                "strict-window",
            ),
            (
                "pair-sum-fail",
                [GenericDatum("a", ("2/5", "3/5"), selfdual=True,
                              halfred=False)],
                False,
                "pair-sum",
            ),
            (
                "half-multiplicity-fail",
                [GenericDatum("a", ("1/2", "1/2"), selfdual=True,
                              halfred=False)],
                False,
                "half-multiplicity",
            ),
            (
                "top-parity-fail",
                [GenericDatum("a", ("1/2", "3/5"), selfdual=True,
                              halfred=False)],
                False,
                "top-parity",
            ),
            (
                "interval-parity-fail",
                [GenericDatum("a", ("1/4", "3/10", "3/5", "4/5"),
                              selfdual=True, halfred=False)],
                False,
                "interval-parity",
            ),
            (
                "length-parity-fail",
                [GenericDatum("a", ("3/5",), selfdual=True, halfred=False,
                              tau_red=True)],
                False,
                "length-parity",
            ),
            (
                "normal-form-fail",
                [GenericDatum("a", ("3/5", "3/5"), selfdual=True,
                              halfred=False)],
                False,
                "normal-form",
            ),
            (
                "pass-parity",
                [GenericDatum("a", ("1/4", "3/5", "4/5"), selfdual=True,
                              halfred=False)],
                True,
                None,
            ),
            (
                "pass-window",
                [
                    GenericDatum(
                        "a", ("1/4",), selfdual=False, halfred=False,
                        partner="b",
                    ),
                    GenericDatum(
                        "b", ("1/4",), selfdual=False, halfred=False,
                        partner="a",
                    ),
                ],
                True,
                None,
            ),
        ]
        assert len(table) == 10
        for name, data, expect, failing in table:
            result = generic_unitarizable(data)
            assert result.unitarizable is expect, name
            if failing is None:
                assert result.first_failure is None, name
            else:
                assert result.first_failure is not None, name
                assert result.first_failure.condition == failing, (
                    name,
                    result.first_failure.condition,
                )
            # Verdicts only see exponents: relabeling every datum onto
            # another line must not change any step status.
            moved = [
                dataclasses.replace(d, line="tau") for d in data
            ]
            moved_result = generic_unitarizable(moved)
            assert moved_result.unitarizable is result.unitarizable, name
            assert [
                (s.condition, s.status) for s in moved_result.steps
            ] == [(s.condition, s.status) for s in result.steps], name

        # Transport on the datum level: a relabeled single-line datum keeps
        # its exponent vector, so the decision input is unchanged.
        ctx = Context(
            "sigma",
            {
                "rho": Line("rho", True, hi("1/2")),
                "tau": Line("tau", True, hi("1/2")),
            },
        )
        rng = random.Random(5)
        from cuspline.classical import exponent_vector

        for _ in range(20):
            d = random_langlands_datum(rng, ("rho",), core_line="rho")
            moved = transport_line(d, "rho", "tau", ctx)
            assert exponent_vector(moved.gl, moved.degree) == \
                exponent_vector(d.gl, d.degree)
        elapsed = time.monotonic() - start
        assert elapsed < 1.0, f"budget exceeded: {elapsed:.2f}s"
        report_line(10, elapsed, "10 verdicts + transport invariance")


def test_acceptance_suite_is_complete():
    """One criterion per numbered test above."""
    names = [n for n in dir(TestAcceptance) if n.startswith("test_criterion")]
    assert len(names) == 10
