"""Expression language for ring and module elements.

Grammar (whitespace-insensitive)::

    expr     := product ( '|x|' expr )?          induction, right-assoc
    product  := unary ( '*' unary )*             ring product, left-assoc
    unary    := FUNC '(' expr ')' | atom
    atom     := 'sigma'
              | ('d' | 'z') '[' half ( ',' half )? ']' '@' NAME
              | ('St' | 'CoSt') '(' half ',' INT ')' '@' NAME
              | '(' expr ')'
    half     := INT | FRACTION                   e.g. 2, -1, 1/2, -3/2

``d[b,e]@line`` / ``z[b,e]@line`` are one-segment classes in the two rigid
bases (``d[b]`` abbreviates ``d[b,b]``); ``St``/``CoSt`` are the two families
of base atoms over sigma.  Functions: ``mstar`` (ring restriction), ``Mstar``
(twisted ring restriction), ``mustar`` (module restriction), ``mw``
(multisegment involution), ``dual`` (contragredient), ``D`` (derivative,
zeta basis), ``hd`` (highest derivative).  ``*`` binds tighter than ``|x|``.

Parse problems raise :class:`DslSyntaxError` with a character position;
ill-typed operations (mixed bases, wrong side of ``|x|``) raise
:class:`DslTypeError`.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import List, Tuple, Union

from .core import Context, CusplineError, DEFAULT_CONTEXT, EMPTY_MS, Segment, ms
from .halfint import HalfInt
from .glhopf import (
    GLElt,
    MixedBasisError,
    TensorGL,
    comult,
    contragredient,
    delta_key,
    derivative,
    highest_derivative,
    mw_dual,
    twisted_comult,
    zeta_key,
)
from .classical import (
    ClassElt,
    CoStGenSymbol,
    DatumError,
    NotCuspidalBaseError,
    StGenSymbol,
    TensorClass,
    induced,
    module_comult,
    rtimes,
)


class DslSyntaxError(CusplineError):
    def __init__(self, message: str, pos: int, expected: Tuple[str, ...] = ()):
        self.pos = pos
        self.expected = expected
        suffix = f" (expected {' or '.join(expected)})" if expected else ""
        super().__init__(f"at position {pos}: {message}{suffix}")


class DslTypeError(CusplineError):
    pass


# ---------------------------------------------------------------------------
# Tokens
# ---------------------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<induce>\|x\|)
  | (?P<number>-?\d+(?:/2)?)
  | (?P<name>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<punct>[\[\](),@*])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str  # 'number' | 'name' | 'induce' | one of the punct chars | 'eof'
    text: str
    pos: int


def _tokenize(text: str) -> List[Token]:
    out: List[Token] = []
    i = 0
    while i < len(text):
        m = _TOKEN_RE.match(text, i)
        if not m:
            raise DslSyntaxError(f"unexpected character {text[i]!r}", i)
        i = m.end()
        if m.lastgroup == "ws":
            continue
        kind = m.lastgroup
        if kind == "punct":
            kind = m.group()
        out.append(Token(kind, m.group(), m.start()))
    out.append(Token("eof", "", len(text)))
    return out


# ---------------------------------------------------------------------------
# Abstract syntax
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SegAtom:
    basis: str  # 'd' | 'z'
    b: HalfInt
    e: HalfInt
    line: str
    pos: int


@dataclass(frozen=True)
class BaseAtom:
    kind: str  # 'St' | 'CoSt'
    a: HalfInt
    n: int
    line: str
    pos: int


@dataclass(frozen=True)
class SigmaAtom:
    pos: int


@dataclass(frozen=True)
class Prod:
    left: "Expr"
    right: "Expr"
    pos: int


@dataclass(frozen=True)
class Induce:
    left: "Expr"
    right: "Expr"
    pos: int


@dataclass(frozen=True)
class Call:
    fn: str
    arg: "Expr"
    pos: int


Expr = Union[SegAtom, BaseAtom, SigmaAtom, Prod, Induce, Call]

FUNCTIONS = ("mstar", "Mstar", "mustar", "mw", "dual", "D", "hd")


class _Parser:
    def __init__(self, tokens: List[Token]):
        self.tokens = tokens
        self.i = 0

    @property
    def cur(self) -> Token:
        return self.tokens[self.i]

    def advance(self) -> Token:
        tok = self.cur
        self.i += 1
        return tok

    def expect(self, kind: str, expected: Tuple[str, ...] = ()) -> Token:
        if self.cur.kind != kind:
            raise DslSyntaxError(
                f"found {self.cur.text or 'end of input'!r}",
                self.cur.pos,
                expected or (kind,),
            )
        return self.advance()

    def parse_expr(self) -> Expr:
        left = self.parse_product()
        if self.cur.kind == "induce":
            pos = self.advance().pos
            right = self.parse_expr()
            return Induce(left, right, pos)
        return left

    def parse_product(self) -> Expr:
        left = self.parse_unary()
        while self.cur.kind == "*":
            pos = self.advance().pos
            right = self.parse_unary()
            left = Prod(left, right, pos)
        return left

    def parse_unary(self) -> Expr:
        tok = self.cur
        if tok.kind == "name" and tok.text in FUNCTIONS:
            self.advance()
            self.expect("(", ("'('",))
            arg = self.parse_expr()
            self.expect(")", ("')'",))
            return Call(tok.text, arg, tok.pos)
        return self.parse_atom()

    def parse_half(self) -> HalfInt:
        tok = self.expect("number", ("a number",))
        return HalfInt.parse(tok.text)

    def parse_int(self) -> int:
        tok = self.expect("number", ("an integer",))
        if "/" in tok.text:
            raise DslSyntaxError(
                f"found fraction {tok.text!r}", tok.pos, ("an integer",)
            )
        return int(tok.text)

    def parse_line(self) -> str:
        self.expect("@", ("'@'",))
        return self.expect("name", ("a line id",)).text

    def parse_atom(self) -> Expr:
        tok = self.cur
        if tok.kind == "(":
            self.advance()
            inner = self.parse_expr()
            self.expect(")", ("')'",))
            return inner
        if tok.kind != "name":
            raise DslSyntaxError(
                f"found {tok.text or 'end of input'!r}",
                tok.pos,
                ("an atom", "a function"),
            )
        if tok.text == "sigma":
            self.advance()
            return SigmaAtom(tok.pos)
        if tok.text in ("d", "z"):
            self.advance()
            self.expect("[", ("'['",))
            b = self.parse_half()
            e = b
            if self.cur.kind == ",":
                self.advance()
                e = self.parse_half()
            self.expect("]", ("']'",))
            line = self.parse_line()
            return SegAtom(tok.text, b, e, line, tok.pos)
        if tok.text in ("St", "CoSt"):
            self.advance()
            self.expect("(", ("'('",))
            a = self.parse_half()
            self.expect(",", ("','",))
            n = self.parse_int()
            self.expect(")", ("')'",))
            line = self.parse_line()
            return BaseAtom(tok.text, a, n, line, tok.pos)
        raise DslSyntaxError(
            f"unknown name {tok.text!r}",
            tok.pos,
            ("sigma", "d", "z", "St", "CoSt") + FUNCTIONS,
        )


def parse(text: str) -> Expr:
    """Parse an expression; raise :class:`DslSyntaxError` with a position."""
    parser = _Parser(_tokenize(text))
    expr = parser.parse_expr()
    if parser.cur.kind != "eof":
        raise DslSyntaxError(
            f"trailing input {parser.cur.text!r}", parser.cur.pos, ("end of input",)
        )
    return expr


# ---------------------------------------------------------------------------
# Evaluation
# ---------------------------------------------------------------------------

Value = Union[GLElt, ClassElt, TensorGL, TensorClass]


def _type_name(v: Value) -> str:
    return {
        GLElt: "ring element",
        ClassElt: "module element",
        TensorGL: "ring tensor",
        TensorClass: "module tensor",
    }[type(v)]


def _eval(node: Expr, ctx: Context) -> Value:
    if isinstance(node, SigmaAtom):
        return ClassElt.cusp(ctx.sigma)
    if isinstance(node, SegAtom):
        if node.e < node.b:
            raise DslTypeError(
                f"segment [{node.b},{node.e}] is empty (end below begin)"
            )
        if (node.e - node.b).num2 % 2 != 0:
            raise DslTypeError(
                f"segment [{node.b},{node.e}] mixes integer and half-integer "
                "exponents"
            )
        key = ms(Segment(node.b, node.e, node.line))
        return delta_key(key) if node.basis == "d" else zeta_key(key)
    if isinstance(node, BaseAtom):
        try:
            sym = (StGenSymbol if node.kind == "St" else CoStGenSymbol)(
                node.line, node.a, node.n, ctx.sigma
            )
        except DatumError as exc:
            raise DslTypeError(str(exc)) from exc
        return induced(EMPTY_MS, sym)
    if isinstance(node, Prod):
        left = _eval(node.left, ctx)
        right = _eval(node.right, ctx)
        if not isinstance(left, GLElt) or not isinstance(right, GLElt):
            raise DslTypeError(
                f"'*' needs ring elements on both sides, got "
                f"{_type_name(left)} and {_type_name(right)}"
            )
        try:
            return left * right
        except MixedBasisError as exc:
            raise DslTypeError(str(exc)) from exc
    if isinstance(node, Induce):
        left = _eval(node.left, ctx)
        right = _eval(node.right, ctx)
        if not isinstance(left, GLElt):
            raise DslTypeError(
                f"left of '|x|' must be a ring element, got {_type_name(left)}"
            )
        if not isinstance(right, ClassElt):
            raise DslTypeError(
                f"right of '|x|' must be a module element, got "
                f"{_type_name(right)}"
            )
        try:
            return rtimes(left, right)
        except (MixedBasisError, NotCuspidalBaseError) as exc:
            raise DslTypeError(str(exc)) from exc
    if isinstance(node, Call):
        arg = _eval(node.arg, ctx)
        return _apply(node.fn, arg, ctx)
    raise AssertionError(f"unhandled node {node!r}")  # pragma: no cover


def _apply(fn: str, arg: Value, ctx: Context) -> Value:
    if fn == "mustar":
        if not isinstance(arg, ClassElt):
            raise DslTypeError(
                f"mustar needs a module element, got {_type_name(arg)}"
            )
        return module_comult(arg, ctx)
    if isinstance(arg, (TensorGL, TensorClass)):
        raise DslTypeError(f"{fn} cannot be applied to a {_type_name(arg)}")
    if not isinstance(arg, GLElt):
        raise DslTypeError(f"{fn} needs a ring element, got {_type_name(arg)}")
    try:
        if fn == "mstar":
            return comult(arg)
        if fn == "Mstar":
            return twisted_comult(arg, ctx)
        if fn == "mw":
            return arg.map_keys(mw_dual)
        if fn == "dual":
            return contragredient(arg, ctx)
        if fn == "D":
            return derivative(arg)
        if fn == "hd":
            return highest_derivative(arg)
    except (MixedBasisError, CusplineError) as exc:
        raise DslTypeError(str(exc)) from exc
    raise AssertionError(f"unhandled function {fn}")  # pragma: no cover


def evaluate(text: str, ctx: Context = DEFAULT_CONTEXT) -> Value:
    """Parse and evaluate; syntax and typing problems raise typed errors."""
    return _eval(parse(text), ctx)
