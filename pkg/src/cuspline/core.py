"""Core combinatorial carriers: lines, segments, multisegments, formal sums.

A *line* names a cuspidal family {nu^x rho : x in (1/2)Z}; only the label, a
selfduality flag and (optionally) the point of reducibility alpha are tracked.
A *segment* [b, e] on a line is a nonempty interval of half-integer exponents
with integer length e - b + 1.  The empty segment is represented by ``None``
(a marker, never a value stored inside multisegments).  A *multisegment* is a
finite multiset of segments kept in a canonical order, and a ``FormalSum`` is
a finitely supported Z-linear combination of hashable keys with no explicit
zero coefficients.
"""
from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from typing import Callable, Dict, Generic, Iterable, Iterator, Mapping, Optional, Tuple, TypeVar

from .halfint import HalfInt, hi

DEFAULT_LINE = "rho"


class CusplineError(Exception):
    """Base class for all typed errors raised by this package."""


class EmptySegmentError(CusplineError):
    """A segment literal [b, e] with e < b was used where a value is required."""


class NonIntegralLengthError(CusplineError):
    """Segment endpoints must differ by an integer."""


class MixedBasisError(CusplineError):
    """Arithmetic attempted between elements expressed in different rigid bases."""


class LineError(CusplineError):
    """Unknown line, non-selfdual line where selfduality is required, etc."""


# ---------------------------------------------------------------------------
# Lines and contexts
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Line:
    """A cuspidal line: identifier, selfduality, optional reducibility point."""

    id: str
    selfdual: bool = True
    alpha: Optional[HalfInt] = None

    def to_jsonable(self) -> dict:
        out: dict = {"id": self.id, "selfdual": self.selfdual}
        if self.alpha is not None:
            out["alpha"] = self.alpha.to_jsonable()
        return out


@dataclass(frozen=True)
class Context:
    """Ambient data for classical-side computations.

    ``sigma`` is an opaque label for the fixed cuspidal representation of the
    classical group tower; ``lines`` maps line ids to their metadata.  Lines
    never referenced in ``lines`` are treated as selfdual with unknown alpha.
    """

    sigma: str = "sigma"
    lines: Mapping[str, Line] = field(default_factory=dict)

    def line(self, line_id: str) -> Line:
        return self.lines.get(line_id, Line(line_id))

    def require_selfdual(self, line_id: str) -> Line:
        ln = self.line(line_id)
        if not ln.selfdual:
            raise LineError(f"line {line_id!r} is not selfdual")
        return ln

    def alpha_of(self, line_id: str) -> HalfInt:
        ln = self.line(line_id)
        if ln.alpha is None:
            raise LineError(f"line {line_id!r} has no reducibility point configured")
        return ln.alpha

    def with_line(self, line: Line) -> "Context":
        lines = dict(self.lines)
        lines[line.id] = line
        return Context(self.sigma, lines)

    def to_jsonable(self) -> dict:
        return {
            "sigma": self.sigma,
            "lines": [self.lines[k].to_jsonable() for k in sorted(self.lines)],
        }


DEFAULT_CONTEXT = Context()


# ---------------------------------------------------------------------------
# Segments
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Segment:
    """A nonempty segment [b, e] of exponents on a line (b <= e, e - b integer)."""

    b: HalfInt
    e: HalfInt
    line: str = DEFAULT_LINE

    def __post_init__(self):
        if not isinstance(self.b, HalfInt) or not isinstance(self.e, HalfInt):
            raise TypeError("segment endpoints must be HalfInt")
        if self.e < self.b:
            raise EmptySegmentError(f"empty segment literal [{self.b},{self.e}]")
        if not (self.e - self.b).is_integer:
            raise NonIntegralLengthError(f"[{self.b},{self.e}] has non-integer length")

    # -- basic invariants -------------------------------------------------
    @property
    def length(self) -> int:
        return (self.e - self.b).num2 // 2 + 1

    @property
    def center(self) -> HalfInt:
        return HalfInt((self.b.num2 + self.e.num2) // 2)

    def exponents(self) -> Tuple[HalfInt, ...]:
        return tuple(self.b + k for k in range(self.length))

    def __contains__(self, x: HalfInt) -> bool:
        return self.b <= x <= self.e

    # -- derived segments (None encodes the empty marker) -----------------
    def trimmed_top(self) -> Optional["Segment"]:
        """[b, e-1]; None when the segment is a singleton."""
        if self.length == 1:
            return None
        return Segment(self.b, self.e - 1, self.line)

    def dual(self) -> "Segment":
        """Contragredient [-e, -b] on the same (selfdual) line."""
        return Segment(-self.e, -self.b, self.line)

    def relabel(self, line: str) -> "Segment":
        return Segment(self.b, self.e, line)

    # -- ordering / presentation ------------------------------------------
    def sort_key(self) -> tuple:
        # canonical multisegment order: descending center, then descending
        # length, then line id
        key = self.__dict__.get("_sort_key")
        if key is None:  # cached: sorting dominates multisegment assembly
            key = (-self.center.num2, -self.length, self.line)
            self.__dict__["_sort_key"] = key
        return key

    def __str__(self) -> str:
        return f"[{self.b},{self.e}]@{self.line}"

    def to_jsonable(self) -> dict:
        return {"line": self.line, "b": self.b.to_jsonable(), "e": self.e.to_jsonable()}


def seg(b, e, line: str = DEFAULT_LINE) -> Segment:
    """Convenience constructor accepting ints / strings for endpoints."""
    return Segment(hi(b), hi(e), line)


def seg_opt(b, e, line: str = DEFAULT_LINE) -> Optional[Segment]:
    """Like :func:`seg` but returns the empty marker None when e = b - 1."""
    b, e = hi(b), hi(e)
    if e == b - 1:
        return None
    return Segment(b, e, line)


def linked_union(s1: Segment, s2: Segment) -> Optional[Segment]:
    """Union of two segments when they are linked or overlapping on one line.

    Returns None when the union is not a segment (different lines, gap > 1,
    or one contains the other with no extension -- containment still yields
    the bigger one, which is the union).
    """
    if s1.line != s2.line:
        return None
    lo, hia = (s1, s2) if (s1.b, s1.e) <= (s2.b, s2.e) else (s2, s1)
    if hia.b > lo.e + 1:
        return None
    return Segment(lo.b, max(lo.e, hia.e), s1.line)


# ---------------------------------------------------------------------------
# Multisegments
# ---------------------------------------------------------------------------

class Multisegment:
    """A finite multiset of segments in canonical order (immutable, hashable)."""

    __slots__ = ("segments", "_hash")

    def __init__(self, segments: Iterable[Segment] = ()):
        segs = []
        for s in segments:
            if s is None:
                continue  # empty markers vanish silently on assembly
            if not isinstance(s, Segment):
                raise TypeError(f"not a segment: {s!r}")
            segs.append(s)
        segs.sort(key=Segment.sort_key)
        object.__setattr__(self, "segments", tuple(segs))
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, *a):  # immutable
        raise AttributeError("Multisegment is immutable")

    def __reduce__(self):  # immutability breaks default pickling
        return (Multisegment, (self.segments,))

    @staticmethod
    def _from_sorted(segments: Tuple[Segment, ...]) -> "Multisegment":
        """Trusted constructor: segments already canonically sorted."""
        out = object.__new__(Multisegment)
        object.__setattr__(out, "segments", segments)
        object.__setattr__(out, "_hash", None)
        return out

    # -- container protocol ------------------------------------------------
    def __iter__(self) -> Iterator[Segment]:
        return iter(self.segments)

    def __len__(self) -> int:
        return len(self.segments)

    def __eq__(self, other) -> bool:
        return isinstance(other, Multisegment) and self.segments == other.segments

    def __hash__(self) -> int:
        h = self._hash
        if h is None:  # cached: keys are rehashed millions of times
            h = hash(("ms",) + self.segments)
            object.__setattr__(self, "_hash", h)
        return h

    def __add__(self, other: "Multisegment") -> "Multisegment":
        if not other.segments:
            return self
        if not self.segments:
            return other
        merged = tuple(
            heapq.merge(self.segments, other.segments, key=Segment.sort_key)
        )
        return Multisegment._from_sorted(merged)

    def remove(self, s: Segment) -> "Multisegment":
        """Multiset-remove one copy of s (KeyError if absent)."""
        segs = list(self.segments)
        try:
            segs.remove(s)
        except ValueError:
            raise KeyError(f"segment {s} not in {self}")
        return Multisegment._from_sorted(tuple(segs))

    # -- invariants --------------------------------------------------------
    @property
    def size(self) -> int:
        """Total support size (the grading degree)."""
        return sum(s.length for s in self.segments)

    def support(self) -> Dict[Tuple[str, HalfInt], int]:
        """Multiset of cuspidal points (line, exponent) -> multiplicity."""
        out: Dict[Tuple[str, HalfInt], int] = {}
        for s in self.segments:
            for x in s.exponents():
                key = (s.line, x)
                out[key] = out.get(key, 0) + 1
        return out

    def lines(self) -> frozenset:
        return frozenset(s.line for s in self.segments)

    def restrict_lines(self, keep: Iterable[str]) -> "Multisegment":
        keep = frozenset(keep)
        return Multisegment(s for s in self.segments if s.line in keep)

    def map_segments(self, f: Callable[[Segment], Optional[Segment]]) -> "Multisegment":
        return Multisegment(f(s) for s in self.segments)

    def relabel(self, old: str, new: str) -> "Multisegment":
        return self.map_segments(lambda s: s.relabel(new) if s.line == old else s)

    # -- ordering / presentation ------------------------------------------
    def sort_key(self) -> tuple:
        return tuple(s.sort_key() + (s.b.num2,) for s in self.segments)

    def __str__(self) -> str:
        if not self.segments:
            return "1"
        return "{" + ", ".join(str(s) for s in self.segments) + "}"

    def __repr__(self) -> str:
        return f"Multisegment({list(self.segments)!r})"

    def to_jsonable(self) -> dict:
        return {"segments": [s.to_jsonable() for s in self.segments]}


EMPTY_MS = Multisegment()


def ms(*segments: Optional[Segment]) -> Multisegment:
    return Multisegment(s for s in segments if s is not None)


# ---------------------------------------------------------------------------
# Formal sums
# ---------------------------------------------------------------------------

K = TypeVar("K")


class FormalSum(Generic[K]):
    """Finitely supported Z-linear combination of hashable keys.

    Keys are expected to expose ``sort_key()`` for canonical iteration order
    (tuples of such keys are handled structurally).  Zero coefficients are
    never stored.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Optional[Mapping[K, int]] = None):
        clean: Dict[K, int] = {}
        if coeffs:
            for k, c in coeffs.items():
                if not isinstance(c, int) or isinstance(c, bool):
                    raise TypeError(f"coefficient {c!r} is not an int")
                if c != 0:
                    clean[k] = clean.get(k, 0) + c
                    if clean[k] == 0:
                        del clean[k]
        object.__setattr__(self, "coeffs", clean)

    def __setattr__(self, *a):
        raise AttributeError("FormalSum is immutable")

    def __reduce__(self):  # immutability breaks default pickling
        return (FormalSum, (self.coeffs,))

    @staticmethod
    def _raw(coeffs: Dict[K, int]) -> "FormalSum[K]":
        """Trusted constructor: int coefficients, zeros already stripped."""
        out = object.__new__(FormalSum)
        object.__setattr__(out, "coeffs", coeffs)
        return out

    @staticmethod
    def _clean(coeffs: Dict[K, int]) -> "FormalSum[K]":
        """Trusted except for zeros, which are stripped here."""
        return FormalSum._raw({k: c for k, c in coeffs.items() if c != 0})

    # -- constructors ------------------------------------------------------
    @staticmethod
    def zero() -> "FormalSum[K]":
        return FormalSum()

    @staticmethod
    def lift(key: K, coeff: int = 1) -> "FormalSum[K]":
        return FormalSum({key: coeff})

    @staticmethod
    def from_terms(terms: Iterable[Tuple[K, int]]) -> "FormalSum[K]":
        out: Dict[K, int] = {}
        for k, c in terms:
            out[k] = out.get(k, 0) + c
        return FormalSum(out)

    # -- linear structure --------------------------------------------------
    def __add__(self, other: "FormalSum[K]") -> "FormalSum[K]":
        out = dict(self.coeffs)
        for k, c in other.coeffs.items():
            out[k] = out.get(k, 0) + c
        return FormalSum._clean(out)

    def __sub__(self, other: "FormalSum[K]") -> "FormalSum[K]":
        return self + (-1) * other

    def __neg__(self) -> "FormalSum[K]":
        return (-1) * self

    def __rmul__(self, scalar: int) -> "FormalSum[K]":
        if not isinstance(scalar, int) or isinstance(scalar, bool):
            raise TypeError("scalars must be ints")
        if scalar == 0:
            return FormalSum._raw({})
        return FormalSum._raw({k: scalar * c for k, c in self.coeffs.items()})

    def __eq__(self, other) -> bool:
        return isinstance(other, FormalSum) and self.coeffs == other.coeffs

    def __hash__(self):
        raise TypeError("FormalSum is not hashable")

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __len__(self) -> int:
        return len(self.coeffs)

    def __getitem__(self, key: K) -> int:
        return self.coeffs.get(key, 0)

    def le(self, other: "FormalSum[K]") -> bool:
        """Coefficientwise <= (used for positivity arguments)."""
        keys = set(self.coeffs) | set(other.coeffs)
        return all(self[k] <= other[k] for k in keys)

    # -- structural transforms --------------------------------------------
    def map_keys(self, f: Callable[[K], K]) -> "FormalSum":
        out: Dict = {}
        for k, c in self.coeffs.items():
            nk = f(k)
            out[nk] = out.get(nk, 0) + c
        return FormalSum._clean(out)

    def filter_keys(self, pred: Callable[[K], bool]) -> "FormalSum[K]":
        return FormalSum._raw(
            {k: c for k, c in self.coeffs.items() if pred(k)}
        )

    def bind(self, f: Callable[[K], "FormalSum"]) -> "FormalSum":
        """Linear extension of a key -> FormalSum map."""
        out: Dict = {}
        for k, c in self.coeffs.items():
            for nk, nc in f(k).coeffs.items():
                out[nk] = out.get(nk, 0) + c * nc
        return FormalSum._clean(out)

    def combine(self, other: "FormalSum", f: Callable[[K, K], K]) -> "FormalSum":
        """Bilinear extension of a (key, key) -> key map."""
        out: Dict = {}
        for k1, c1 in self.coeffs.items():
            for k2, c2 in other.coeffs.items():
                nk = f(k1, k2)
                out[nk] = out.get(nk, 0) + c1 * c2
        return FormalSum._clean(out)

    # -- canonical iteration / presentation --------------------------------
    def terms(self) -> Iterable[Tuple[K, int]]:
        return sorted(self.coeffs.items(), key=lambda kc: _key_sort(kc[0]))

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for k, c in self.terms():
            label = _key_str(k)
            if c == 1:
                parts.append(label)
            elif c == -1:
                parts.append(f"-{label}")
            else:
                parts.append(f"{c}*{label}")
        return " + ".join(parts).replace("+ -", "- ")

    def __repr__(self) -> str:
        return f"FormalSum({self.coeffs!r})"

    def to_jsonable(self) -> dict:
        items = []
        for k, c in self.terms():
            items.append({"coeff": c, "key": _key_jsonable(k)})
        return {"terms": items}


def _key_sort(key) -> tuple:
    if isinstance(key, tuple):
        return tuple(_key_sort(k) for k in key)
    sk = getattr(key, "sort_key", None)
    if sk is not None:
        return sk()
    return (repr(key),)


def _key_str(key) -> str:
    if isinstance(key, tuple):
        return "(" + " (x) ".join(_key_str(k) for k in key) + ")"
    return str(key)


def _key_jsonable(key):
    if isinstance(key, tuple):
        return [_key_jsonable(k) for k in key]
    f = getattr(key, "to_jsonable", None)
    if f is not None:
        return f()
    return str(key)
