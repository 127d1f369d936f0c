#!/usr/bin/env python3
"""Randomized round-trip experiment for the line-splitting decomposition.

Three seeded experiments, all exact:

1. split-then-combine: a random datum supported on several declared lines is
   split into its per-line parts and reassembled; the result must equal the
   input structurally.
2. combine-then-split: independently drawn single-line data are combined and
   split again; each part must equal the original it came from.
3. filtered restriction: for random ring elements x and a fixed induced
   module element y, the two sides of the partition-filtered restriction
   identity are computed and compared term by term.

Any mismatch is printed and counted; the exit status is 0 only when every
trial agrees.  Seeds are explicit, so runs are reproducible.
"""
from __future__ import annotations

import argparse
import random
import sys
import time
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

from cuspline.core import Context, Line, Segment, ms
from cuspline.halfint import hi
from cuspline.classical import CuspSymbol, induced
from cuspline.glhopf import delta_key
from cuspline.jantzen import (
    LinePartition,
    SplitDatum,
    combine_data,
    filtered_identity_sides,
)
from cuspline.sampling import random_langlands_datum, random_multisegment


@dataclass(frozen=True)
class RoundTripConfig:
    """Trial counts and sampling bounds for one experiment run."""

    seed: int
    trials: int
    filtered_trials: int
    lines: Tuple[Tuple[str, str], ...]  # (line id, reducibility point)
    max_segments: int
    verbose: bool

    def context(self) -> Context:
        return Context(
            "sigma",
            {
                name: Line(name, True, hi(alpha))
                for name, alpha in self.lines
            },
        )


def parse_args(argv: Optional[Sequence[str]] = None) -> RoundTripConfig:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--seed", type=int, default=20260823)
    parser.add_argument(
        "--trials", type=int, default=200,
        help="round-trip trials per direction (default: 200)",
    )
    parser.add_argument(
        "--filtered-trials", type=int, default=200,
        help="filtered-identity trials (default: 200)",
    )
    parser.add_argument(
        "--lines", default="rho:1/2,tau:1",
        help="comma-separated id:alpha declarations (default: rho:1/2,tau:1)",
    )
    parser.add_argument("--max-segments", type=int, default=3)
    parser.add_argument("--verbose", action="store_true")
    args = parser.parse_args(argv)
    lines = []
    for part in args.lines.split(","):
        name, _, alpha = part.strip().partition(":")
        if not name or not alpha:
            parser.error(f"bad line declaration {part!r}; expected id:alpha")
        lines.append((name, alpha))
    if len(lines) < 2:
        parser.error("need at least two lines to split across")
    return RoundTripConfig(
        seed=args.seed,
        trials=args.trials,
        filtered_trials=args.filtered_trials,
        lines=tuple(lines),
        max_segments=args.max_segments,
        verbose=args.verbose,
    )


def run(config: RoundTripConfig) -> int:
    ctx = config.context()
    ids = [name for name, _ in config.lines]
    rng = random.Random(config.seed)
    mismatches = 0
    start = time.monotonic()

    for k in range(config.trials):
        d = random_langlands_datum(
            rng, ids, max_segments=config.max_segments
        )
        split = SplitDatum.split(d, ctx)
        back = split.combine()
        if back != d:
            mismatches += 1
            print(f"split-then-combine mismatch at trial {k}: {d}")
        elif config.verbose:
            print(f"split-then-combine ok: {d}")
    print(f"split-then-combine: {config.trials} trials")

    for k in range(config.trials):
        parts = [
            random_langlands_datum(
                rng,
                (name,),
                max_segments=config.max_segments,
                core_line=name,
                # At most one core survives a combine; only the first part
                # may carry one.
                allow_core=(i == 0),
            )
            for i, name in enumerate(ids)
        ]
        combined = parts[0]
        for p in parts[1:]:
            combined = combine_data(combined, p)
        split = SplitDatum.split(combined, ctx)
        for name, original in zip(ids, parts):
            if split.part(name) != original:
                mismatches += 1
                print(
                    f"combine-then-split mismatch at trial {k}, line {name}: "
                    f"{original} became {split.part(name)}"
                )
    print(f"combine-then-split: {config.trials} trials")

    first, rest = ids[0], ids[1:]
    p = LinePartition(frozenset({first}), frozenset(rest))
    y = induced(ms(Segment(hi(1), hi(1), rest[0])), CuspSymbol())
    for k in range(config.filtered_trials):
        x = delta_key(
            random_multisegment(rng, (first,), max_segments=3, max_length=2)
        )
        lhs, rhs = filtered_identity_sides(x, y, p, ctx)
        if lhs.terms != rhs.terms:
            mismatches += 1
            print(f"filtered-identity mismatch at trial {k}: {x}")
    print(f"filtered-identity: {config.filtered_trials} trials")

    elapsed = time.monotonic() - start
    print(f"mismatches: {mismatches} ({elapsed:.2f}s, seed {config.seed})")
    return 0 if mismatches == 0 else 1


def main(argv: Optional[Sequence[str]] = None) -> int:
    return run(parse_args(argv))


if __name__ == "__main__":
    sys.exit(main())
