#!/usr/bin/env python3
"""Tabulate the generic unitarizability verdict over a grid of exponents.

The experiment enumerates every multiset of at most ``--max-size`` exponents
drawn from the grid { p/q : 0 < p/q < 1, q <= --denominator }, runs the
decision procedure on a single selfdual label carrying that multiset, and
prints the distribution of outcomes: how many multisets pass, and how many
fail first at each condition.  With ``--show-passing`` the passing multisets
themselves are listed.

The same grid can be rerun with the label's flags toggled (``--halfred``,
``--tau-red``) to see how the verdict shifts between the strict-window
branch and the parity branch.
"""
from __future__ import annotations

import argparse
import itertools
import sys
import time
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Tuple

from cuspline.criteria import GenericDatum, generic_unitarizable


@dataclass(frozen=True)
class TableConfig:
    """Grid bounds and label flags for one tabulation run."""

    max_size: int
    denominator: int
    halfred: bool
    tau_red: bool
    show_passing: bool


def parse_args(argv: Optional[Sequence[str]] = None) -> TableConfig:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument(
        "--max-size", type=int, default=3,
        help="largest exponent multiset size (default: 3)",
    )
    parser.add_argument(
        "--denominator", type=int, default=6,
        help="largest denominator in the exponent grid (default: 6)",
    )
    parser.add_argument(
        "--halfred", action="store_true",
        help="flag the label so the strict-window branch applies",
    )
    parser.add_argument(
        "--tau-red", action="store_true",
        help="flag the label as reducing against the tempered part",
    )
    parser.add_argument("--show-passing", action="store_true")
    args = parser.parse_args(argv)
    if args.max_size < 1:
        parser.error("--max-size must be at least 1")
    if args.denominator < 2:
        parser.error("--denominator must be at least 2")
    return TableConfig(
        max_size=args.max_size,
        denominator=args.denominator,
        halfred=args.halfred,
        tau_red=args.tau_red,
        show_passing=args.show_passing,
    )


def exponent_grid(denominator: int) -> Tuple[Fraction, ...]:
    values = {
        Fraction(p, q)
        for q in range(2, denominator + 1)
        for p in range(1, q)
    }
    return tuple(sorted(values))


def run(config: TableConfig) -> int:
    grid = exponent_grid(config.denominator)
    start = time.monotonic()
    outcomes: Counter = Counter()
    passing = []
    total = 0
    for size in range(1, config.max_size + 1):
        for exps in itertools.combinations_with_replacement(grid, size):
            d = GenericDatum(
                "a",
                exps,
                selfdual=True,
                halfred=config.halfred,
                tau_red=config.tau_red,
            )
            result = generic_unitarizable([d])
            total += 1
            if result.unitarizable:
                outcomes["unitarizable"] += 1
                if config.show_passing:
                    passing.append(exps)
            else:
                outcomes[f"fails {result.first_failure.condition}"] += 1
    elapsed = time.monotonic() - start

    print(
        f"grid: {len(grid)} exponents with denominator <= "
        f"{config.denominator}, multisets of size <= {config.max_size}, "
        f"halfred={config.halfred} tau_red={config.tau_red}"
    )
    width = max(len(k) for k in outcomes)
    for key in sorted(outcomes, key=lambda k: (-outcomes[k], k)):
        share = outcomes[key] / total
        print(f"  {key:<{width}}  {outcomes[key]:>6}  ({share:6.2%})")
    print(f"total multisets: {total} ({elapsed:.2f}s)")
    if config.show_passing:
        for exps in passing:
            print("  passes: {" + ", ".join(str(e) for e in exps) + "}")
    return 0


def main(argv: Optional[Sequence[str]] = None) -> int:
    return run(parse_args(argv))


if __name__ == "__main__":
    sys.exit(main())
