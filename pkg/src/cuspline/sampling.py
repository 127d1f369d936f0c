"""Seeded pseudorandom symbol generators for tests and experiment scripts.

All generators take an explicit :class:`random.Random` so runs are
reproducible; nothing here touches the global RNG state.
"""
from __future__ import annotations

import random
from typing import Optional, Sequence, Tuple

from .core import Multisegment, Segment
from .halfint import HalfInt, hi
from .classical import (
    CuspSymbol,
    DeltaPM,
    IndTemp,
    LanglandsDatum,
    StGenSymbol,
    TauPM,
    TempBase,
    TemperedSymbol,
)


def random_halfint(rng: random.Random, low, high) -> HalfInt:
    """Uniform on the half-integer grid between ``low`` and ``high``."""
    lo, hi_ = hi(low), hi(high)
    return HalfInt(rng.randint(lo.num2, hi_.num2))


def random_segment(
    rng: random.Random,
    line: str = "rho",
    window: int = 3,
    max_length: int = 3,
    half_integral: Optional[bool] = None,
) -> Segment:
    """A segment with endpoints inside ``[-window, window]``."""
    if half_integral is None:
        half_integral = rng.random() < 0.5
    length = rng.randint(1, max_length)
    lo = -2 * window + (1 if half_integral else 0)
    hi2 = 2 * window - 2 * (length - 1) - (1 if half_integral else 0)
    b2 = rng.randrange(lo, hi2 + 1, 2)
    b = HalfInt(b2)
    return Segment(b, b + (length - 1), line)


def random_multisegment(
    rng: random.Random,
    lines: Sequence[str] = ("rho",),
    max_segments: int = 4,
    window: int = 3,
    max_length: int = 3,
) -> Multisegment:
    count = rng.randint(0, max_segments)
    return Multisegment(
        random_segment(rng, rng.choice(list(lines)), window, max_length)
        for _ in range(count)
    )


def random_positive_segment(
    rng: random.Random, line: str, window: int = 3, max_length: int = 3
) -> Segment:
    """A segment with strictly positive center (usable in a Langlands list)."""
    while True:
        s = random_segment(rng, line, window, max_length)
        if s.center > hi(0):
            return s


def random_symmetric_segment(
    rng: random.Random, line: str, max_half: int = 2
) -> Segment:
    """A segment of the form [-h, h] on the half-integer grid."""
    h = HalfInt(rng.randint(0, 2 * max_half))
    return Segment(-h, h, line)


def random_tempered_core(
    rng: random.Random, line: str, sigma: str = "sigma"
) -> TemperedSymbol:
    """A one-line tempered core symbol (never the bare sigma)."""
    kind = rng.randrange(3)
    if kind == 0:
        a = random_halfint(rng, "1/2", 1)
        return TempBase(StGenSymbol(line, a, rng.randint(0, 2), sigma))
    if kind == 1:
        return TauPM(
            line, random_halfint(rng, "1/2", 2), rng.choice((1, -1)), sigma
        )
    return DeltaPM(random_symmetric_segment(rng, line), rng.choice((1, -1)), sigma)


def random_langlands_datum(
    rng: random.Random,
    lines: Sequence[str] = ("rho",),
    sigma: str = "sigma",
    max_segments: int = 3,
    core_line: Optional[str] = None,
    allow_core: bool = True,
) -> LanglandsDatum:
    """A datum in canonical (flattened) form supported on the given lines.

    The tempered part is a flat induction label whose symmetric segments may
    use any of the lines; at most one line carries a nontrivial core (chosen
    from ``core_line`` when given).
    """
    line_list = list(lines)
    gl = Multisegment(
        random_positive_segment(rng, rng.choice(line_list))
        for _ in range(rng.randint(0, max_segments))
    )
    segs: Tuple[Segment, ...] = tuple(
        random_symmetric_segment(rng, rng.choice(line_list))
        for _ in range(rng.randint(0, 2))
    )
    if allow_core and rng.random() < 0.6:
        core: TemperedSymbol = random_tempered_core(
            rng, core_line if core_line is not None else rng.choice(line_list), sigma
        )
    else:
        core = TempBase(CuspSymbol(sigma))
    temp = IndTemp(segs, core) if segs else core
    return LanglandsDatum(gl, temp)
