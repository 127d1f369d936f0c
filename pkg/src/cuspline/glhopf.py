"""The graded ring of general-linear blocks with its two rigid bases.

Elements are integer combinations of multisegment keys.  A key denotes a
product of generators, one per segment: in the ``delta`` basis the generator
attached to a segment is the essentially-square-integrable representation of
that segment, in the ``zeta`` basis it is the fully-degenerate one.  The two
bases are kept rigid: sums and products never mix them, and no basis-change
matrix is provided (deliberately out of scope).

Operations:

* ``comult`` -- the coproduct, extended multiplicatively from the closed
  per-segment formulas (top parts on the left in the delta basis, bottom
  parts on the left in the zeta basis);
* ``contragredient`` -- segmentwise [b,e] -> [-e,-b] (selfdual lines only);
* ``twisted_comult`` -- the composite (mult x id)(contragredient x comult)
  (swap) comult used for classical-group restriction bookkeeping, together
  with an independent closed form for a single segment;
* ``gl_twisted_part`` -- the "everything moved to the GL side" sum;
* ``derivative`` / ``highest_derivative`` -- the positive ring endomorphism
  on the zeta basis and its lowest nonzero graded part;
* ``mw_dual`` -- the chain-selection involution on multisegments.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Iterable, List, Optional, Tuple

from .core import (
    Context,
    DEFAULT_CONTEXT,
    EMPTY_MS,
    FormalSum,
    MixedBasisError,
    Multisegment,
    Segment,
    ms,
)
from .halfint import HalfInt

DELTA = "delta"
ZETA = "zeta"
_BASES = (DELTA, ZETA)

GLTerms = FormalSum  # FormalSum[Multisegment]
PairTerms = FormalSum  # FormalSum[Tuple[Multisegment, Multisegment]]


def _check_basis(basis: str) -> None:
    if basis not in _BASES:
        raise ValueError(f"unknown basis {basis!r}")


@dataclass(frozen=True)
class GLElt:
    """An element of the graded ring, expressed in one rigid basis."""

    basis: str
    terms: GLTerms

    def __post_init__(self):
        _check_basis(self.basis)

    @staticmethod
    def zero(basis: str) -> "GLElt":
        return GLElt(basis, FormalSum.zero())

    @staticmethod
    def one(basis: str) -> "GLElt":
        return GLElt(basis, FormalSum.lift(EMPTY_MS))

    @staticmethod
    def key(basis: str, m: Multisegment, coeff: int = 1) -> "GLElt":
        return GLElt(basis, FormalSum.lift(m, coeff))

    def _require_same_basis(self, other: "GLElt") -> None:
        if self.basis != other.basis:
            raise MixedBasisError(
                f"cannot combine {self.basis}-basis and {other.basis}-basis elements"
            )

    def __add__(self, other: "GLElt") -> "GLElt":
        self._require_same_basis(other)
        return GLElt(self.basis, self.terms + other.terms)

    def __sub__(self, other: "GLElt") -> "GLElt":
        self._require_same_basis(other)
        return GLElt(self.basis, self.terms - other.terms)

    def __rmul__(self, scalar: int) -> "GLElt":
        return GLElt(self.basis, scalar * self.terms)

    def __mul__(self, other: "GLElt") -> "GLElt":
        """Product = multiset concatenation of keys (bilinear)."""
        self._require_same_basis(other)
        return GLElt(self.basis, self.terms.combine(other.terms, lambda a, b: a + b))

    def map_keys(self, f: Callable[[Multisegment], Multisegment]) -> "GLElt":
        return GLElt(self.basis, self.terms.map_keys(f))

    def graded_parts(self) -> dict:
        """Split into homogeneous components keyed by total support size."""
        parts: dict = {}
        for key, c in self.terms.coeffs.items():
            parts.setdefault(key.size, {})[key] = c
        return {n: GLElt(self.basis, FormalSum(d)) for n, d in sorted(parts.items())}

    def __str__(self) -> str:
        tag = "d" if self.basis == DELTA else "z"
        return f"{tag}:{self.terms}"

    def to_jsonable(self) -> dict:
        return {"basis": self.basis, **self.terms.to_jsonable()}


def delta_key(m: Multisegment, coeff: int = 1) -> GLElt:
    return GLElt.key(DELTA, m, coeff)


def zeta_key(m: Multisegment, coeff: int = 1) -> GLElt:
    return GLElt.key(ZETA, m, coeff)


@dataclass(frozen=True)
class TensorGL:
    """An element of (ring) x (ring), same rigid basis on both sides."""

    basis: str
    terms: PairTerms  # keys are (left multisegment, right multisegment)

    def __post_init__(self):
        _check_basis(self.basis)

    @staticmethod
    def zero(basis: str) -> "TensorGL":
        return TensorGL(basis, FormalSum.zero())

    @staticmethod
    def unit(basis: str) -> "TensorGL":
        return TensorGL(basis, FormalSum.lift((EMPTY_MS, EMPTY_MS)))

    def _require_same_basis(self, other: "TensorGL") -> None:
        if self.basis != other.basis:
            raise MixedBasisError(
                f"cannot combine {self.basis}-basis and {other.basis}-basis tensors"
            )

    def __add__(self, other: "TensorGL") -> "TensorGL":
        self._require_same_basis(other)
        return TensorGL(self.basis, self.terms + other.terms)

    def __sub__(self, other: "TensorGL") -> "TensorGL":
        self._require_same_basis(other)
        return TensorGL(self.basis, self.terms - other.terms)

    def __mul__(self, other: "TensorGL") -> "TensorGL":
        """Componentwise product (concatenate left keys, concatenate right keys)."""
        self._require_same_basis(other)
        return TensorGL(
            self.basis,
            self.terms.combine(other.terms, lambda a, b: (a[0] + b[0], a[1] + b[1])),
        )

    def swap(self) -> "TensorGL":
        return TensorGL(self.basis, self.terms.map_keys(lambda k: (k[1], k[0])))

    def map_left(self, f: Callable[[Multisegment], Multisegment]) -> "TensorGL":
        return TensorGL(self.basis, self.terms.map_keys(lambda k: (f(k[0]), k[1])))

    def coefficient(self, left: Multisegment, right: Multisegment) -> int:
        return self.terms[(left, right)]

    def left_part(self, right: Multisegment) -> GLTerms:
        """The coefficient sum of all terms with the given right key."""
        out = {}
        for (l, r), c in self.terms.coeffs.items():
            if r == right:
                out[l] = out.get(l, 0) + c
        return FormalSum(out)

    def __str__(self) -> str:
        tag = "d" if self.basis == DELTA else "z"
        return f"{tag}:{self.terms}"

    def to_jsonable(self) -> dict:
        return {"basis": self.basis, **self.terms.to_jsonable()}


# ---------------------------------------------------------------------------
# Coproduct
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def comult_segment(s: Segment, basis: str) -> TensorGL:
    """Closed coproduct of a single generator.

    delta basis: sum over cut points of (top part) x (bottom part);
    zeta basis:  sum over cut points of (bottom part) x (top part).

    The result is immutable and memoized; the same generators recur in
    every multiplicative expansion.
    """
    _check_basis(basis)
    terms = {}
    for cut in range(s.length + 1):
        # bottom part: first `cut` exponents; top part: the rest
        bottom = None if cut == 0 else Segment(s.b, s.b + (cut - 1), s.line)
        top = None if cut == s.length else Segment(s.b + cut, s.e, s.line)
        if basis == DELTA:
            key = (ms(top), ms(bottom))
        else:
            key = (ms(bottom), ms(top))
        terms[key] = terms.get(key, 0) + 1
    return TensorGL(basis, FormalSum(terms))


@lru_cache(maxsize=65536)
def comult_key(m: Multisegment, basis: str) -> TensorGL:
    out = TensorGL.unit(basis)
    for s in m:
        out = out * comult_segment(s, basis)
    return out


def comult(x: GLElt) -> TensorGL:
    """The coproduct, extended multiplicatively to all keys and linearly."""
    total = TensorGL.zero(x.basis)
    for key, c in x.terms.coeffs.items():
        piece = comult_key(key, x.basis)
        total = total + TensorGL(x.basis, c * piece.terms)
    return total


# ---------------------------------------------------------------------------
# Contragredient
# ---------------------------------------------------------------------------

def contragredient_key(m: Multisegment, ctx: Context = DEFAULT_CONTEXT) -> Multisegment:
    for line in m.lines():
        ctx.require_selfdual(line)
    return m.map_segments(Segment.dual)


def contragredient(x: GLElt, ctx: Context = DEFAULT_CONTEXT) -> GLElt:
    return x.map_keys(lambda m: contragredient_key(m, ctx))


# ---------------------------------------------------------------------------
# Twisted coproduct
# ---------------------------------------------------------------------------

def twisted_comult(x: GLElt, ctx: Context = DEFAULT_CONTEXT) -> TensorGL:
    """(mult x id) o (contragredient x comult) o swap o comult.

    The normative definition; the closed per-segment formula below is the
    independent cross-check.
    """
    first = comult(x)
    out = {}
    for (left, right), c in first.terms.coeffs.items():
        dual_right = contragredient_key(right, ctx)
        inner = comult_key(left, x.basis)
        for (u, v), c2 in inner.terms.coeffs.items():
            key = (dual_right + u, v)
            out[key] = out.get(key, 0) + c * c2
    return TensorGL(x.basis, FormalSum(out))


def twisted_comult_segment_closed(s: Segment, ctx: Context = DEFAULT_CONTEXT) -> TensorGL:
    """Closed form of the twisted coproduct on a single delta generator.

    For [a, c]: sum over a-1 <= s0 <= c and s0 <= t <= c of
    (dual of bottom through s0) * (top above t)  (x)  (middle s0+1..t),
    with out-of-range pieces understood as empty.
    """
    ctx.require_selfdual(s.line)
    a, c = s.b, s.e
    out = {}
    s0 = a - 1
    while s0 <= c:
        t = s0
        while t <= c:
            left_parts = []
            if s0 >= a:  # dual of [a, s0]
                left_parts.append(Segment(-s0, -a, s.line))
            if t < c:  # [t+1, c]
                left_parts.append(Segment(t + 1, c, s.line))
            middle = None if t < s0 + 1 else Segment(s0 + 1, t, s.line)
            key = (ms(*left_parts), ms(middle))
            out[key] = out.get(key, 0) + 1
            t = t + 1
        s0 = s0 + 1
    return TensorGL(DELTA, FormalSum(out))


def gl_twisted_part(x: GLElt, ctx: Context = DEFAULT_CONTEXT) -> GLElt:
    """Sum of (left) * (contragredient of right) over the coproduct terms.

    Equals the sum of left keys of the twisted coproduct paired with the
    empty right key (a tested identity).
    """
    first = comult(x)
    out = {}
    for (left, right), c in first.terms.coeffs.items():
        key = left + contragredient_key(right, ctx)
        out[key] = out.get(key, 0) + c
    return GLElt(x.basis, FormalSum(out))


# ---------------------------------------------------------------------------
# Base change between the two rigid bases, one segment at a time
# ---------------------------------------------------------------------------

def segment_tilings(s: Segment) -> Iterable[Tuple[Segment, ...]]:
    """All ways to cut a segment into consecutive non-empty blocks."""
    exps = s.exponents()
    n = len(exps)
    for mask in range(1 << (n - 1)):
        parts = []
        start = 0
        for i in range(n - 1):
            if (mask >> i) & 1:
                parts.append(Segment(exps[start], exps[i], s.line))
                start = i + 1
        parts.append(Segment(exps[start], exps[n - 1], s.line))
        yield tuple(parts)


def _segment_tiling_expansion(s: Segment) -> FormalSum:
    """Sum over tilings with sign (-1)^(length - blocks), as multisegment keys.

    This is the base-change of a one-segment class into the keys of the
    opposite rigid basis; the same alternating formula works in both
    directions (the two triangular matrices are mutually inverse).
    """
    out: dict = {}
    for parts in segment_tilings(s):
        key = Multisegment(parts)
        sign = -1 if (s.length - len(parts)) % 2 else 1
        out[key] = out.get(key, 0) + sign
    return FormalSum(out)


def _convert_key(m: Multisegment) -> FormalSum:
    """Product of per-segment tiling expansions (a key is a product of
    one-segment classes, so this is exact)."""
    total = FormalSum.lift(EMPTY_MS)
    for s in m:
        total = total.combine(_segment_tiling_expansion(s), lambda a, b: a + b)
    return total


def zeta_as_delta(x: GLElt) -> GLElt:
    """Rewrite a zeta-basis element exactly in delta-basis keys."""
    if x.basis != ZETA:
        raise MixedBasisError("zeta_as_delta needs a zeta-basis element")
    total = FormalSum.zero()
    for m, c in x.terms.coeffs.items():
        total = total + c * _convert_key(m)
    return GLElt(DELTA, total)


def delta_as_zeta(x: GLElt) -> GLElt:
    """Rewrite a delta-basis element exactly in zeta-basis keys."""
    if x.basis != DELTA:
        raise MixedBasisError("delta_as_zeta needs a delta-basis element")
    total = FormalSum.zero()
    for m, c in x.terms.coeffs.items():
        total = total + c * _convert_key(m)
    return GLElt(ZETA, total)


def zeta_segment_delta_expansion(s: Segment) -> FormalSum:
    """The one-segment zeta class written in delta-basis multisegment keys."""
    return _segment_tiling_expansion(s)


# ---------------------------------------------------------------------------
# Derivative on the zeta basis
# ---------------------------------------------------------------------------

def trim_key(m: Multisegment) -> Multisegment:
    """Entrywise top-trim with empties dropped."""
    return m.map_segments(Segment.trimmed_top)


def derivative(x: GLElt) -> GLElt:
    """The positive ring endomorphism generated by s -> s + s-trimmed.

    Defined on the zeta basis only; delta-basis input is a typed error.
    """
    if x.basis != ZETA:
        raise MixedBasisError("the derivative is defined on the zeta basis only")
    total = FormalSum.zero()
    for key, c in x.terms.coeffs.items():
        expanded = FormalSum.lift(EMPTY_MS, c)
        for s in key:
            factor_terms = {ms(s): 1}
            trimmed = s.trimmed_top()
            trimmed_key = ms(trimmed) if trimmed else EMPTY_MS
            factor_terms[trimmed_key] = factor_terms.get(trimmed_key, 0) + 1
            expanded = expanded.combine(FormalSum(factor_terms), lambda a, b: a + b)
        total = total + expanded
    return GLElt(ZETA, total)


def highest_derivative(x: GLElt) -> GLElt:
    """Lowest nonzero graded part of the derivative."""
    d = derivative(x)
    parts = d.graded_parts()
    if not parts:
        return GLElt.zero(ZETA)
    lowest = min(parts)
    return parts[lowest]


# ---------------------------------------------------------------------------
# The multisegment involution
# ---------------------------------------------------------------------------

def mw_dual(m: Multisegment) -> Multisegment:
    """Chain-selection involution on multisegments (per line independently).

    Repeatedly: take the maximal end e present; grow a chain downward picking,
    for each end e, e-1, ..., a segment with that end whose begin is maximal
    among those strictly below the previous pick's begin; emit the dual
    segment [e - len(chain) + 1, e]; top-trim the chain members; recurse.
    """
    by_line: dict = {}
    for s in m:
        by_line.setdefault(s.line, []).append(s)
    out: List[Segment] = []
    for line in sorted(by_line):
        out.extend(_mw_dual_line(by_line[line]))
    return Multisegment(out)


def _mw_dual_line(segments: List[Segment]) -> List[Segment]:
    pool: List[Segment] = list(segments)
    result: List[Segment] = []
    while pool:
        end = max(s.e for s in pool)
        chain_idx: List[int] = []
        cur_end = end
        prev_begin: Optional[HalfInt] = None
        while True:
            best = -1
            for i, s in enumerate(pool):
                if i in chain_idx or s.e != cur_end:
                    continue
                if prev_begin is not None and not (s.b < prev_begin):
                    continue
                if best < 0 or s.b > pool[best].b:
                    best = i
            if best < 0:
                break
            chain_idx.append(best)
            prev_begin = pool[best].b
            cur_end = cur_end - 1
        length = len(chain_idx)
        result.append(Segment(end - (length - 1), end, pool[chain_idx[0]].line))
        new_pool = []
        for i, s in enumerate(pool):
            if i in chain_idx:
                t = s.trimmed_top()
                if t is not None:
                    new_pool.append(t)
            else:
                new_pool.append(s)
        pool = new_pool
    return result
