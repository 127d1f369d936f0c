"""Subquotient data on a cuspidal line and the counting certificates.

The ambient object is the induced chain
``nu^(alpha+n) x ... x nu^alpha |x| sigma`` on a selfdual line with
reducibility point alpha.  Its irreducible subquotients are labeled by

* a tiling of the exponent interval [alpha, alpha+n] into consecutive
  blocks (a cut bitmask), and
* a flag telling whether the lowest block is attached to sigma as a
  square-integrable atom (``bottom=True``) or stays in the general-linear
  Langlands list (``bottom=False``).

That gives ``2^(n+1)`` data.  The duality involution toggles the flag and
complements the cut set.

For every datum other than the two extremes (the full square-integrable
atom and the fully-split Langlands quotient) the module produces a
*witness*: a selfdual product factor pi such that ``pi |x| gamma`` has
length at least 5 while the Jacquet-module multiplicity of
``pi (x) gamma`` is at most 4.  The checks emit auditable step lists; a
step is either VERIFIED (a finite computation done here) or AXIOM (an
input fact of representation theory, with its citation tag).
"""
from __future__ import annotations

import enum
from collections import Counter
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from .core import (
    Context,
    CusplineError,
    DEFAULT_CONTEXT,
    EMPTY_MS,
    LineError,
    Multisegment,
    Segment,
    linked_union,
    ms,
)
from .classical import (
    ClassElt,
    CoStGenSymbol,
    CuspSymbol,
    DatumError,
    DeltaPM,
    LanglandsDatum,
    StGenSymbol,
    TauPM,
    TempBase,
    dominates,
    exponent_vector,
    induced,
    module_comult_base,
)
from .glhopf import (
    GLElt,
    delta_key,
    gl_twisted_part,
    highest_derivative,
    trim_key,
    twisted_comult,
    zeta_key,
)
from .halfint import HalfInt, hi


class UnsupportedDatumError(CusplineError):
    """Raised when a check is asked about one of the two excluded extremes."""


class CertificateError(CusplineError):
    """A mechanical certificate step failed unexpectedly."""


class CaseTag(enum.Enum):
    GEN_STEINBERG = "gen-steinberg"
    CO_GEN_STEINBERG = "co-gen-steinberg"
    CASE_A = "case-a"
    CASE_B = "case-b"
    CASE_C = "case-c"


VERIFIED = "VERIFIED"
AXIOM = "AXIOM"
FAILED = "FAILED"


@dataclass(frozen=True)
class CertStep:
    label: str
    status: str
    detail: str
    citation: Optional[str] = None

    def render(self) -> str:
        cite = f" ({self.citation})" if self.citation else ""
        return f"[{self.status}]{cite} {self.label}: {self.detail}"

    def to_jsonable(self) -> dict:
        out = {"label": self.label, "status": self.status, "detail": self.detail}
        if self.citation:
            out["citation"] = self.citation
        return out


@dataclass(frozen=True)
class CertReport:
    case: CaseTag
    datum: "SubqDatum"
    witness: GLElt
    certificates: Tuple[LanglandsDatum, ...]
    steps: Tuple[CertStep, ...]
    length_bound: Optional[int]
    mult_bound: Optional[int]
    ok: bool
    transported_from: Optional["SubqDatum"] = None

    def render_lines(self) -> List[str]:
        head = f"{self.case.value}: {self.datum}"
        out = [head]
        if self.transported_from is not None:
            out.append(f"  transported from dual datum {self.transported_from}")
        out.append(f"  witness: {self.witness}")
        for cert in self.certificates:
            out.append(f"  certificate: {cert}")
        for step in self.steps:
            out.append(f"  {step.render()}")
        if self.length_bound is not None:
            out.append(f"  length >= {self.length_bound}")
        if self.mult_bound is not None:
            out.append(f"  jacquet multiplicity <= {self.mult_bound}")
        out.append(f"  result: {'PASS' if self.ok else 'FAIL'}")
        return out

    def to_jsonable(self) -> dict:
        out = {
            "case": self.case.value,
            "datum": self.datum.to_jsonable(),
            "witness": self.witness.to_jsonable(),
            "certificates": [c.to_jsonable() for c in self.certificates],
            "steps": [s.to_jsonable() for s in self.steps],
            "ok": self.ok,
        }
        if self.length_bound is not None:
            out["length_bound"] = self.length_bound
        if self.mult_bound is not None:
            out["mult_bound"] = self.mult_bound
        if self.transported_from is not None:
            out["transported_from"] = self.transported_from.to_jsonable()
        return out


# ---------------------------------------------------------------------------
# Subquotient data
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SubqDatum:
    """Tiling-plus-flag label for a subquotient of the exponent chain."""

    line: str
    sigma: str
    alpha: HalfInt
    n: int
    cuts: Tuple[bool, ...]  # cuts[i]: split between alpha+i and alpha+i+1
    bottom: bool

    def __post_init__(self):
        if not (self.alpha > hi(0)):
            raise DatumError("the reducibility exponent must be positive")
        if self.n < 0:
            raise DatumError("chain length n must be >= 0")
        if len(self.cuts) != self.n:
            raise DatumError(f"need exactly {self.n} cut flags")
        object.__setattr__(self, "cuts", tuple(bool(c) for c in self.cuts))

    # -- block structure ---------------------------------------------------
    def blocks(self) -> Tuple[Segment, ...]:
        """Blocks of the tiling, top block first."""
        out = []
        start = self.alpha
        for i in range(self.n):
            if self.cuts[i]:
                out.append(Segment(start, self.alpha + i, self.line))
                start = self.alpha + i + 1
        out.append(Segment(start, self.alpha + self.n, self.line))
        return tuple(reversed(out))

    def bottom_block(self) -> Segment:
        return self.blocks()[-1]

    def gl_blocks(self) -> Tuple[Segment, ...]:
        """The Langlands-list blocks (the bottom one is dropped when it is
        attached to sigma)."""
        blocks = self.blocks()
        return blocks[:-1] if self.bottom else blocks

    def full_key(self) -> Multisegment:
        return Multisegment(self.blocks())

    def langlands_datum(self) -> LanglandsDatum:
        gl = Multisegment(self.gl_blocks())
        if self.bottom:
            bot = self.bottom_block()
            temp = TempBase(
                StGenSymbol(self.line, bot.b, bot.length - 1, self.sigma)
            )
        else:
            temp = TempBase(CuspSymbol(self.sigma))
        return LanglandsDatum(gl, temp)

    def __str__(self) -> str:
        body = ",".join(str(b) for b in self.blocks())
        flag = "St" if self.bottom else "L"
        return f"subq({body};{flag};{self.sigma})"

    def to_jsonable(self) -> dict:
        return {
            "line": self.line,
            "sigma": self.sigma,
            "alpha": self.alpha.to_jsonable(),
            "n": self.n,
            "cuts": list(self.cuts),
            "bottom": self.bottom,
        }


def enumerate_subquotients(
    alpha, n: int, line: str = "rho", sigma: str = "sigma"
) -> Tuple[SubqDatum, ...]:
    """All 2^(n+1) subquotient labels of the exponent chain, in a fixed order."""
    a = hi(alpha)
    out = []
    for mask in range(1 << n):
        cuts = tuple(bool((mask >> i) & 1) for i in range(n))
        for bottom in (False, True):
            out.append(SubqDatum(line, sigma, a, n, cuts, bottom))
    return tuple(out)


def classify(d: SubqDatum) -> CaseTag:
    blocks = d.blocks()
    if d.bottom:
        if len(blocks) == 1:
            return CaseTag.GEN_STEINBERG
        return CaseTag.CASE_C
    if all(b.length == 1 for b in blocks):
        return CaseTag.CO_GEN_STEINBERG
    if blocks[-1].length > 1:
        return CaseTag.CASE_A
    return CaseTag.CASE_B


def aubert_pair(d: SubqDatum) -> SubqDatum:
    """The duality-involution partner: complement the cuts, toggle the flag."""
    return SubqDatum(
        d.line,
        d.sigma,
        d.alpha,
        d.n,
        tuple(not c for c in d.cuts),
        not d.bottom,
    )


def chain_product(alpha, n: int, line: str = "rho", sigma: str = "sigma") -> ClassElt:
    """The ambient induced chain as a single induced-symbol key."""
    a = hi(alpha)
    singles = Multisegment(Segment(a + i, a + i, line) for i in range(n + 1))
    return induced(singles, CuspSymbol(sigma))


def induced_split(d: SubqDatum) -> Tuple[SubqDatum, SubqDatum]:
    """The two-term expansion of (full Langlands list) |x| sigma.

    Inducing the general-linear class of the full tiling against sigma has
    exactly the two constituents given by the two flag states of the same
    tiling: the all-in-the-list label and the bottom-attached label.
    """
    return (
        SubqDatum(d.line, d.sigma, d.alpha, d.n, d.cuts, False),
        SubqDatum(d.line, d.sigma, d.alpha, d.n, d.cuts, True),
    )


# ---------------------------------------------------------------------------
# Support utilities (single line)
# ---------------------------------------------------------------------------

def _supp(*segments: Optional[Segment]) -> Counter:
    out: Counter = Counter()
    for s in segments:
        if s is None:
            continue
        for x in s.exponents():
            out[x] += 1
    return out


def _supp_ms(m: Multisegment) -> Counter:
    return _supp(*m)


def _pm(c: Counter) -> Counter:
    """Support closed under sign flip (counts added)."""
    out: Counter = Counter()
    for x, k in c.items():
        out[x] += k
        out[-x] += k
    return out


def _is_multiplicity_free(c: Counter) -> bool:
    return all(v == 1 for v in c.values())


def _counter_le(small: Counter, big: Counter) -> bool:
    return all(big[x] >= k for x, k in small.items())


# ---------------------------------------------------------------------------
# Case accessors
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class _CaseFrame:
    """Resolved geometry shared by the two bottom-empty cases.

    ``aa`` is the reflection radius (alpha for the long-bottom case, the
    shifted alpha' for the singleton-bottom case), ``pivot`` the block whose
    begin is ``aa``, ``upper`` everything above it, ``lower`` the singleton
    tail below it (empty in the long-bottom case).
    """

    d: SubqDatum
    aa: HalfInt            # reflection radius
    c: HalfInt             # end of the pivot block
    pivot: Segment         # [aa, c]
    upper: Tuple[Segment, ...]   # blocks above the pivot (descending)
    lower: Tuple[Segment, ...]   # singleton blocks below the pivot (descending)

    @property
    def sym(self) -> Segment:
        """The symmetric witness segment [-aa, aa]."""
        return Segment(-self.aa, self.aa, self.d.line)

    @property
    def merged(self) -> Segment:
        """The pivot extended across the symmetric segment: [-aa, c]."""
        return Segment(-self.aa, self.c, self.d.line)

    def upper_ms(self) -> Multisegment:
        return Multisegment(self.upper)

    def lower_ms(self) -> Multisegment:
        return Multisegment(self.lower)


def _frame(d: SubqDatum) -> _CaseFrame:
    tag = classify(d)
    blocks = d.blocks()
    if tag == CaseTag.CASE_A:
        pivot = blocks[-1]
        return _CaseFrame(d, pivot.b, pivot.e, pivot, blocks[:-1], ())
    if tag == CaseTag.CASE_B:
        idx = max(i for i, b in enumerate(blocks) if b.length > 1)
        pivot = blocks[idx]
        return _CaseFrame(d, pivot.b, pivot.e, pivot, blocks[:idx], blocks[idx + 1:])
    raise UnsupportedDatumError(f"no case frame for {tag.value}")


def witness(d: SubqDatum, ctx: Context = DEFAULT_CONTEXT) -> GLElt:
    """The selfdual product factor used by the counting argument."""
    tag = classify(d)
    if tag in (CaseTag.GEN_STEINBERG, CaseTag.CO_GEN_STEINBERG):
        raise UnsupportedDatumError(
            "the two extreme subquotients carry no counting witness"
        )
    if tag == CaseTag.CASE_C:
        f = _frame(aubert_pair(d))
        return zeta_key(ms(f.sym))
    f = _frame(d)
    return delta_key(ms(f.sym))


# ---------------------------------------------------------------------------
# Certificates
# ---------------------------------------------------------------------------

def _certificates_bottom_empty(f: _CaseFrame) -> Tuple[LanglandsDatum, ...]:
    d = f.d
    base_list = f.upper_ms() + ms(f.pivot) + f.lower_ms()
    tau_list = base_list
    merged_list = f.upper_ms() + ms(f.merged) + f.lower_ms() + ms(
        Segment(f.aa, f.aa, d.line)
    )
    point_list = f.upper_ms() + ms(Segment(f.aa, f.aa, d.line)) + f.lower_ms()
    return (
        LanglandsDatum(tau_list, TauPM(d.line, f.aa, +1, d.sigma)),
        LanglandsDatum(tau_list, TauPM(d.line, f.aa, -1, d.sigma)),
        LanglandsDatum(merged_list, TempBase(CuspSymbol(d.sigma))),
        LanglandsDatum(point_list, DeltaPM(f.merged, +1, d.sigma)),
        LanglandsDatum(point_list, DeltaPM(f.merged, -1, d.sigma)),
    )


# ---------------------------------------------------------------------------
# Mechanical exclusion checks
# ---------------------------------------------------------------------------

def _check_exponent_sum_exclusion(f: _CaseFrame) -> CertStep:
    """The third certificate cannot sit under the bottom-attached branch:
    its exponent vector fails the dominance bound of that branch's standard
    datum."""
    d = f.d
    total = f.sym.length + (d.n + 1)
    lhs_ms = (
        f.upper_ms()
        + ms(f.merged)
        + f.lower_ms()
        + ms(Segment(f.aa, f.aa, d.line))
    )
    if classify(d) == CaseTag.CASE_A:
        rhs_ms = f.upper_ms()
    else:
        shaved = [
            Segment(s.b, s.e, s.line)
            for s in f.lower
            if s.b != d.alpha
        ]
        rhs_ms = f.upper_ms() + ms(f.pivot) + Multisegment(shaved)
    lhs = exponent_vector(lhs_ms, total)
    rhs = exponent_vector(rhs_ms, total)
    if dominates(lhs, rhs):
        return CertStep(
            "exponent-dominance exclusion",
            FAILED,
            "merged-list certificate unexpectedly dominated by the "
            "bottom-attached branch",
        )
    return CertStep(
        "exponent-dominance exclusion",
        VERIFIED,
        "exponent vector of the merged-list certificate is not dominated by "
        "the bottom-attached branch's standard datum "
        f"(common length {total})",
    )


def _check_top_merge_exclusion(f: _CaseFrame, ctx: Context) -> CertStep:
    """Marker exponents c (present) and c+1 (absent) rule out the branch
    that merges the pivot with the block above it."""
    d = f.d
    if not f.upper:
        return CertStep(
            "top-merge exclusion",
            VERIFIED,
            "no block above the pivot, so the merge branch does not exist",
        )
    c = f.c
    c1 = c + 1
    # marker: dual(upper) + point -aa + lower-dual + merged segment support
    marker = (
        _supp(*(s.dual() for s in f.upper))
        + _supp(Segment(-f.aa, -f.aa, d.line))
        + _supp(*(s.dual() for s in f.lower))
        + _supp(f.merged)
    )
    if not (marker[c] == 1 and marker[c1] == 0):
        return CertStep(
            "top-merge exclusion",
            FAILED,
            f"marker support does not show {c} exactly once without {c1}",
        )
    top = f.upper[-1]  # block directly above the pivot (descending order)
    d_top = top.e
    if not (c1 <= d_top):
        return CertStep(
            "top-merge exclusion",
            FAILED,
            "merged block does not reach past the marker exponent",
        )
    merged_block = Segment(f.aa, d_top, d.line)
    expansion = gl_twisted_part(delta_key(ms(merged_block)), ctx)
    for key in expansion.terms.coeffs:
        supp = _supp_ms(key)
        if supp[c] > 0 and supp[c1] == 0:
            return CertStep(
                "top-merge exclusion",
                FAILED,
                f"a term of the GL restriction of the merged block has {c} "
                f"without {c1}: {key}",
            )
    rest_upper = _pm(_supp(*f.upper[:-1]))
    side = rest_upper + _pm(_supp(f.sym)) + _pm(_supp(*f.lower))
    if side[c] > 0 or side[c1] > 0:
        return CertStep(
            "top-merge exclusion",
            FAILED,
            "side factors can reach the marker exponents",
        )
    return CertStep(
        "top-merge exclusion",
        VERIFIED,
        f"marker has {c} once and never {c1}; every GL-restriction term of "
        f"the merged block {merged_block} carrying {c} also carries {c1}; "
        "side factors reach neither",
    )


def _check_double_point_exclusion(f: _CaseFrame, ctx: Context) -> CertStep:
    """Marker exponent -alpha occurs twice in the embedded certificate but at
    most once in any term of the bottom-attached branch."""
    d = f.d
    neg = -d.alpha
    marker = (
        _supp(*(s.dual() for s in f.upper))
        + _supp(Segment(-f.aa, -f.aa, d.line))
        + _supp(*(s.dual() for s in f.lower))
        + _supp(f.merged)
    )
    if marker[neg] != 2:
        return CertStep(
            "double-point exclusion",
            FAILED,
            f"marker support does not contain {neg} exactly twice",
        )
    # every left term of the twisted coproduct of the witness has -alpha
    # at most once
    tw = twisted_comult(delta_key(ms(f.sym)), ctx)
    for (left, _right) in tw.terms.coeffs:
        if _supp_ms(left)[neg] > 1:
            return CertStep(
                "double-point exclusion",
                FAILED,
                f"witness restriction term {left} carries {neg} twice",
            )
    # the general-linear list of the bottom-attached branch misses -alpha
    if classify(d) == CaseTag.CASE_A:
        branch_list = f.upper_ms()
        bot = StGenSymbol(d.line, d.alpha, (f.c - d.alpha).num2 // 2, d.sigma)
    else:
        shaved = [s for s in f.lower if s.b != d.alpha]
        branch_list = f.upper_ms() + ms(f.pivot) + Multisegment(shaved)
        bot = StGenSymbol(d.line, d.alpha, 0, d.sigma)
    if _pm(_supp_ms(branch_list))[neg] > 0:
        return CertStep(
            "double-point exclusion",
            FAILED,
            "branch list support reaches the doubled point",
        )
    for (left, _right) in module_comult_base(bot).terms.coeffs:
        if _supp_ms(left)[neg] > 0:
            return CertStep(
                "double-point exclusion",
                FAILED,
                "bottom atom restriction reaches the doubled point",
            )
    return CertStep(
        "double-point exclusion",
        VERIFIED,
        f"marker shows {neg} twice; witness restriction terms carry it at "
        "most once and no other factor of the bottom-attached branch "
        "carries it",
    )


def _check_second_merge_exclusion(f: _CaseFrame, ctx: Context) -> CertStep:
    """Singleton-bottom case only: the branch merging the pivot downward is
    ruled out because no factor can produce a segment ending at -alpha'."""
    d = f.d
    neg_end = -f.aa
    # required Jacquet term contains the singleton [-alpha'], a segment
    # ending at -alpha'
    # factor 1: the stretched Speh tail on [alpha, alpha'-2]; support only
    tail_lo, tail_hi = d.alpha, f.aa - 2
    tail_supp: Counter = Counter()
    if tail_lo <= tail_hi:
        tail_supp = _pm(_supp(Segment(tail_lo, tail_hi, d.line)))
    if tail_supp[neg_end] > 0:
        return CertStep(
            "down-merge exclusion",
            FAILED,
            "stretched tail support reaches the forbidden end",
        )
    # factor 2: witness terms end at alpha' only
    tw_part = gl_twisted_part(delta_key(ms(f.sym)), ctx)
    for key in tw_part.terms.coeffs:
        for s in key:
            if s.e == neg_end:
                return CertStep(
                    "down-merge exclusion",
                    FAILED,
                    f"witness restriction segment {s} ends at {neg_end}",
                )
    # factor 3: the downward-merged block [alpha'-1, c]
    merged_low = Segment(f.aa - 1, f.c, d.line)
    low_part = gl_twisted_part(delta_key(ms(merged_low)), ctx)
    for key in low_part.terms.coeffs:
        for s in key:
            if s.e == neg_end:
                return CertStep(
                    "down-merge exclusion",
                    FAILED,
                    f"merged-down restriction segment {s} ends at {neg_end}",
                )
    # factor 4: the upper list cannot supply it either
    if _pm(_supp(*f.upper))[neg_end] > 0:
        return CertStep(
            "down-merge exclusion",
            FAILED,
            "upper list support reaches the forbidden end",
        )
    return CertStep(
        "down-merge exclusion",
        VERIFIED,
        f"the required Jacquet term has a segment ending at {neg_end}, but "
        "no factor of the downward-merge branch can produce that end "
        f"(tail support misses it; witness and {merged_low} restriction "
        "segments end elsewhere)",
    )


def verify_hd_identity(d: SubqDatum, ctx: Context = DEFAULT_CONTEXT) -> CertStep:
    """Singleton-bottom case: identify the third certificate through top
    derivatives, two routes."""
    f = _frame(d)
    if classify(d) != CaseTag.CASE_B:
        raise UnsupportedDatumError("derivative identification is for the "
                                    "singleton-bottom case")
    product_key = ms(f.sym) + f.upper_ms() + ms(f.pivot) + f.lower_ms()
    route1 = highest_derivative(zeta_key(product_key))
    route2 = zeta_key(trim_key(product_key))
    if route1 != route2:
        return CertStep(
            "derivative identification",
            FAILED,
            "the two top-derivative routes disagree",
        )
    trimmed_sym = f.sym.trimmed_top()
    trimmed_pivot = f.pivot.trimmed_top()
    if trimmed_sym is None or trimmed_pivot is None:
        return CertStep(
            "derivative identification", FAILED, "degenerate trim"
        )
    union = linked_union(trimmed_sym, trimmed_pivot)
    expected_union = f.merged.trimmed_top()
    if union is None or union != expected_union:
        return CertStep(
            "derivative identification",
            FAILED,
            "trimmed witness and trimmed pivot do not merge to the trimmed "
            "stretched segment",
        )
    candidate_key = (
        f.upper_ms()
        + ms(f.merged)
        + f.lower_ms()
        + ms(Segment(f.aa, f.aa, d.line))
    )
    expected_hd = ms(union) + trim_key(f.upper_ms())
    if trim_key(candidate_key) != expected_hd:
        return CertStep(
            "derivative identification",
            FAILED,
            "candidate top derivative does not match",
        )
    if _supp_ms(candidate_key) != _supp_ms(product_key):
        return CertStep(
            "derivative identification",
            FAILED,
            "candidate support differs from the product support",
        )
    return CertStep(
        "derivative identification",
        VERIFIED,
        "top derivative of the witness-times-list product equals the "
        "entrywise trim; trimmed witness and trimmed pivot merge to the "
        "trimmed stretched segment; the merged-list candidate has the same "
        "support and the same top derivative",
    )


def _check_distinct(certs: Sequence[LanglandsDatum]) -> CertStep:
    if len(set(certs)) != len(certs):
        return CertStep(
            "distinctness", FAILED, "certificates are not pairwise distinct"
        )
    return CertStep(
        "distinctness",
        VERIFIED,
        f"{len(certs)} certificates are pairwise distinct Langlands data",
    )


def _check_witness_window(f: _CaseFrame, w: GLElt) -> CertStep:
    lo, hi_ = -(f.d.alpha + f.d.n), f.d.alpha + f.d.n
    for key in w.terms.coeffs:
        for x in _supp_ms(key):
            if not (lo <= x <= hi_):
                return CertStep(
                    "witness window",
                    FAILED,
                    f"witness support leaves [{lo}, {hi_}]",
                )
    dual_terms = {
        tuple(sorted(str(s) for s in key.map_segments(Segment.dual)))
        for key in w.terms.coeffs
    }
    own_terms = {
        tuple(sorted(str(s) for s in key)) for key in w.terms.coeffs
    }
    if dual_terms != own_terms:
        return CertStep("witness window", FAILED, "witness is not selfdual")
    return CertStep(
        "witness window",
        VERIFIED,
        f"witness is selfdual with support inside [{lo}, {hi_}]",
    )


# ---------------------------------------------------------------------------
# Length check
# ---------------------------------------------------------------------------

def _length_steps_bottom_empty(
    f: _CaseFrame, ctx: Context
) -> Tuple[Tuple[LanglandsDatum, ...], List[CertStep]]:
    d = f.d
    tag = classify(d)
    certs = _certificates_bottom_empty(f)
    steps: List[CertStep] = []
    steps.append(
        CertStep(
            "tempered split",
            AXIOM,
            f"delta({f.sym}) |x| {d.sigma} reduces into two inequivalent "
            "tempered summands (the two signed tau certificates)",
            citation="[T-irr] Thm. 13.2",
        )
    )
    steps.append(
        CertStep(
            "tempered certificates embed",
            AXIOM,
            "both signed tau certificates occur in the ambient product",
            citation="[T-CJM] Prop. 5.3",
        )
    )
    if tag == CaseTag.CASE_A:
        steps.append(
            CertStep(
                "stretched product bound",
                AXIOM,
                f"L(list + stretched {f.merged}) x point {f.aa} sits under "
                f"delta({f.sym}) x L(list + pivot {f.pivot}) "
                "(pivot longer than a point)",
                citation="[HTd] Lemma 4.2",
            )
        )
        steps.append(
            CertStep(
                "merged certificate embeds",
                AXIOM,
                "the merged-list certificate occurs in that product "
                "induced against sigma",
                citation="[T-CJM] Prop. 4.2",
            )
        )
    else:
        steps.append(verify_hd_identity(d, ctx))
        steps.append(
            CertStep(
                "derivative transport",
                AXIOM,
                "support plus top derivative determine the class, and the "
                "product of the two linked trimmed pieces contains their "
                "union class; the merged-list certificate therefore occurs "
                "in the witness product",
                citation="[Z] §8",
            )
        )
    steps.append(_check_exponent_sum_exclusion(f))
    steps.append(
        CertStep(
            "square-integrable split",
            AXIOM,
            f"delta({f.merged}) |x| {d.sigma} has two inequivalent "
            "square-integrable subsymbols (the two signed delta "
            "certificates)",
            citation="[T-seg] Thm.",
        )
    )
    steps.append(
        CertStep(
            "signed delta certificates embed",
            AXIOM,
            "both signed delta certificates occur under the unmerged "
            "product with the witness",
            citation="[T-CJM] Prop. 5.3",
        )
    )
    steps.append(_check_top_merge_exclusion(f, ctx))
    if tag == CaseTag.CASE_B:
        steps.append(_check_second_merge_exclusion(f, ctx))
    steps.append(_check_double_point_exclusion(f, ctx))
    steps.append(_check_distinct(certs))
    return certs, steps


def check_length_ge5(d: SubqDatum, ctx: Context = DEFAULT_CONTEXT) -> CertReport:
    """Produce five distinct certificates under the witness product."""
    return _run_check(d, ctx, want_length=True, want_mult=False)


# ---------------------------------------------------------------------------
# Multiplicity check
# ---------------------------------------------------------------------------

def _mult_steps_bottom_empty(
    f: _CaseFrame, ctx: Context
) -> List[CertStep]:
    d = f.d
    tag = classify(d)
    steps: List[CertStep] = []
    tw = twisted_comult(delta_key(ms(f.sym)), ctx)
    full_coeff = tw.terms[(ms(f.sym), EMPTY_MS)]
    if full_coeff != 2:
        steps.append(
            CertStep(
                "unit pairing",
                FAILED,
                f"coefficient of (witness, unit) is {full_coeff}, not 2",
            )
        )
        return steps
    steps.append(
        CertStep(
            "unit pairing",
            VERIFIED,
            "the (witness, unit) term of the witness restriction has "
            "coefficient exactly 2; pairing with the counit term "
            "contributes multiplicity 2",
        )
    )
    # enumerate candidate terms other than (witness, unit)
    target = _supp(f.sym)
    alpha_mod = d.alpha
    candidates = []
    blocked: List[Tuple[Multisegment, Multisegment, Counter]] = []
    for (left, right), coeff in tw.terms.coeffs.items():
        if (left, right) == (ms(f.sym), EMPTY_MS):
            continue
        lsupp = _supp_ms(left)
        if not _counter_le(lsupp, target):
            continue
        need = target - lsupp
        if not need:
            continue
        if any(abs(x.num2) < alpha_mod.num2 for x in need):
            continue  # outside the factor alphabet of the right tensorand
        if coeff != 1:
            steps.append(
                CertStep(
                    "candidate enumeration",
                    FAILED,
                    f"candidate ({left}, {right}) has coefficient {coeff}",
                )
            )
            return steps
        if sum(need.values()) == 1:
            candidates.append((left, right, need))
        else:
            blocked.append((left, right, need))
    expected_left = ms(Segment(-f.aa + 1, f.aa, d.line))
    expected = {
        (expected_left, ms(Segment(-f.aa, -f.aa, d.line))),
        (expected_left, ms(Segment(f.aa, f.aa, d.line))),
    }
    got = {(l, r) for (l, r, _need) in candidates}
    if got != expected:
        steps.append(
            CertStep(
                "candidate enumeration",
                FAILED,
                f"single-point candidates are {sorted(map(str, got))}, "
                "not the expected pair",
            )
        )
        return steps
    steps.append(
        CertStep(
            "candidate enumeration",
            VERIFIED,
            "besides (witness, unit), exactly two witness-restriction terms "
            "can complete to the witness support with one missing exponent: "
            f"{expected_left} paired with the two signed points",
        )
    )
    # multi-point completions
    if blocked:
        if tag == CaseTag.CASE_A:
            ok = _exclude_multi_need_case_a(f, ctx, blocked)
            if not ok:
                steps.append(
                    CertStep(
                        "multi-point exclusion",
                        FAILED,
                        "a multi-exponent completion could carry both "
                        "signed endpoints",
                    )
                )
                return steps
            steps.append(
                CertStep(
                    "multi-point exclusion",
                    VERIFIED,
                    "completions needing several exponents would require "
                    "one restriction factor of the right tensorand to carry "
                    "both signed endpoints, and no term of the pivot or "
                    "upper-list restrictions does",
                )
            )
        else:
            steps.append(
                CertStep(
                    "tail restriction bound",
                    AXIOM,
                    "the right tensorand sits under (upper part) |x| "
                    "(stretched singleton tail attached to sigma), so "
                    "candidate left factors from it are the tail "
                    "restriction's left factors",
                    citation="[HTd] Lemma 3.1",
                )
            )
            singleton_left, speh_lefts = _tail_left_factors(f)
            if not singleton_left:
                steps.append(
                    CertStep(
                        "multi-point exclusion",
                        FAILED,
                        "expected singleton left factor missing from the "
                        "tail restriction",
                    )
                )
                return steps
            steps.append(
                CertStep(
                    "multi-point exclusion",
                    AXIOM,
                    "left factors of the tail restriction longer than a "
                    "point are Speh classes; a Speh class cannot complete "
                    "the non-degenerate witness on the left of the tensor "
                    f"sign ({len(speh_lefts)} such factors excluded)",
                    citation="[Z] §9",
                )
            )
    # regularity of the two surviving candidates
    for left, right, _need in candidates:
        if not (_is_multiplicity_free(_supp_ms(left))
                and _is_multiplicity_free(_supp_ms(right))):
            steps.append(
                CertStep(
                    "regularity",
                    FAILED,
                    f"candidate ({left}, {right}) is not multiplicity-free",
                )
            )
            return steps
    steps.append(
        CertStep(
            "regularity",
            VERIFIED,
            "both surviving candidates have multiplicity-free support on "
            "each side of the tensor sign, so each contributes at most 1",
        )
    )
    steps.append(
        CertStep(
            "multiplicity bound",
            VERIFIED,
            "total multiplicity is at most 2 + 1 + 1 = 4",
        )
    )
    return steps


def _exclude_multi_need_case_a(
    f: _CaseFrame, ctx: Context, blocked
) -> bool:
    """A completion needing both signed endpoints would need one factor of
    the right tensorand's restriction to carry -alpha and +alpha together."""
    d = f.d
    neg, pos = -d.alpha, d.alpha
    for need in (b[2] for b in blocked):
        if not (need[neg] > 0 and need[pos] > 0):
            return False  # unexpected shape; be conservative
    pivot_part = gl_twisted_part(delta_key(ms(f.pivot)), ctx)
    for key in pivot_part.terms.coeffs:
        supp = _supp_ms(key)
        if supp[neg] > 0 and supp[pos] > 0:
            return False
    upper_pm = _pm(_supp(*f.upper))
    if upper_pm[neg] > 0 or upper_pm[pos] > 0:
        return False
    return True


def _tail_left_factors(f: _CaseFrame):
    """Left factors of the restriction of the stretched singleton tail
    (the interval [alpha, alpha'] attached to sigma in co-Steinberg form)."""
    d = f.d
    tail_n = (f.aa - d.alpha).num2 // 2
    atom = CoStGenSymbol(d.line, d.alpha, tail_n, d.sigma)
    singleton_left = False
    speh_lefts = set()
    for (left, _right), _c in module_comult_base(atom).terms.coeffs.items():
        if not len(left):
            continue
        if left == ms(Segment(-f.aa, -f.aa, d.line)):
            singleton_left = True
        else:
            speh_lefts.add(left)
    return singleton_left, speh_lefts


def check_mult_le4(d: SubqDatum, ctx: Context = DEFAULT_CONTEXT) -> CertReport:
    """Bound the Jacquet multiplicity of (witness (x) subquotient) by 4."""
    return _run_check(d, ctx, want_length=False, want_mult=True)


def check_prop41(d: SubqDatum, ctx: Context = DEFAULT_CONTEXT) -> CertReport:
    """Both bounds together with the 5 > 4 conclusion."""
    return _run_check(d, ctx, want_length=True, want_mult=True)


# ---------------------------------------------------------------------------
# Orchestration
# ---------------------------------------------------------------------------

def _validate_line(d: SubqDatum, ctx: Context) -> None:
    line = ctx.line(d.line)
    ctx.require_selfdual(d.line)
    if line.alpha is not None and line.alpha != d.alpha:
        raise LineError(
            f"line {d.line} has reducibility exponent {line.alpha}, datum "
            f"says {d.alpha}"
        )


def _run_check(
    d: SubqDatum, ctx: Context, want_length: bool, want_mult: bool
) -> CertReport:
    tag = classify(d)
    if tag in (CaseTag.GEN_STEINBERG, CaseTag.CO_GEN_STEINBERG):
        raise UnsupportedDatumError(
            f"{tag.value} is one of the two excluded extreme subquotients"
        )
    _validate_line(d, ctx)
    if tag == CaseTag.CASE_C:
        return _run_check_dualized(d, ctx, want_length, want_mult)
    f = _frame(d)
    w = witness(d, ctx)
    steps: List[CertStep] = [_check_witness_window(f, w)]
    certs: Tuple[LanglandsDatum, ...] = ()
    if want_length:
        certs, length_steps = _length_steps_bottom_empty(f, ctx)
        steps.extend(length_steps)
    if want_mult:
        steps.extend(_mult_steps_bottom_empty(f, ctx))
    ok = all(s.status != FAILED for s in steps)
    if want_length and want_mult and ok:
        steps.append(
            CertStep(
                "counting conclusion",
                VERIFIED,
                "length at least 5 exceeds the Jacquet multiplicity bound 4, "
                "so five copies of (witness (x) subquotient) cannot all "
                "appear; the subquotient is not unitarizable",
            )
        )
    return CertReport(
        case=tag,
        datum=d,
        witness=w,
        certificates=certs,
        steps=tuple(steps),
        length_bound=5 if (want_length and ok) else None,
        mult_bound=4 if (want_mult and ok) else None,
        ok=ok,
    )


def _run_check_dualized(
    d: SubqDatum, ctx: Context, want_length: bool, want_mult: bool
) -> CertReport:
    pair = aubert_pair(d)
    pair_tag = classify(pair)
    steps: List[CertStep] = []
    if pair_tag not in (CaseTag.CASE_A, CaseTag.CASE_B):
        raise CertificateError(
            f"dual partner of {d} classifies as {pair_tag.value}; expected a "
            "bottom-empty case"
        )
    blocks = pair.blocks()
    if not any(b.length > 1 for b in blocks):
        raise CertificateError("dual partner has no long block")
    steps.append(
        CertStep(
            "dual partner",
            VERIFIED,
            f"the involution partner {pair} is bottom-empty with a long "
            "block, so the bottom-empty machinery applies to it",
        )
    )
    steps.append(
        CertStep(
            "involution transport",
            AXIOM,
            "the duality involution preserves lengths and Jacquet "
            "multiplicities, and carries the partner's witness product to "
            "the witness product of this datum",
            citation="[Au] Cor. 3.9",
        )
    )
    inner = _run_check(pair, ctx, want_length, want_mult)
    steps.extend(
        CertStep("dual·" + s.label, s.status, s.detail, s.citation)
        for s in inner.steps
    )
    certs = tuple(
        LanglandsDatum(c.gl, c.temp, dualized=True) for c in inner.certificates
    )
    ok = inner.ok
    return CertReport(
        case=CaseTag.CASE_C,
        datum=d,
        witness=witness(d, ctx),
        certificates=certs,
        steps=tuple(steps),
        length_bound=inner.length_bound,
        mult_bound=inner.mult_bound,
        ok=ok,
        transported_from=pair,
    )
