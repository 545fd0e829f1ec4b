"""Parser and evaluator for noncommutative expressions in x and ring constants.

Grammar (products are ordered; adjacency never denotes multiplication):

    expr   := term (('+' | '-') term)*
    term   := factor ('*' factor)*
    factor := atom ['^' nat]
    atom   := literal | 'x' | '(' expr ')' | '-' atom

Literals are nonnegative integers (reduced into the coefficient ring) plus
any ring-specific named generators such as ``t`` for the truncated
polynomial presets.  Errors carry a 1-based source column.
"""

from __future__ import annotations

from dataclasses import dataclass

from .rings import RingContext
from .series import series_from_poly
from .skewpoly import SkewPoly

MAX_EXPONENT = 512


class ExprError(ValueError):
    """Parse-time failure with a 1-based column position."""

    def __init__(self, message: str, column: int):
        super().__init__(f"{message} at column {column}")
        self.message = message
        self.column = column


@dataclass(frozen=True)
class Const:
    payload: object


@dataclass(frozen=True)
class Var:
    pass


@dataclass(frozen=True)
class Add:
    left: object
    right: object


@dataclass(frozen=True)
class Sub:
    left: object
    right: object


@dataclass(frozen=True)
class Mul:
    left: object
    right: object


@dataclass(frozen=True)
class Pow:
    base: object
    exponent: int


@dataclass(frozen=True)
class Neg:
    child: object


@dataclass(frozen=True)
class _Token:
    kind: str  # "num", "name", "op", "end"
    text: str
    column: int


def _tokenize(text: str):
    tokens = []
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        col = i + 1
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            tokens.append(_Token("num", text[i:j], col))
            i = j
        elif ch.isalpha():
            j = i
            while j < n and text[j].isalnum():
                j += 1
            tokens.append(_Token("name", text[i:j], col))
            i = j
        elif ch in "+-*^()":
            tokens.append(_Token("op", ch, col))
            i += 1
        else:
            raise ExprError(f"unexpected character {ch!r}", col)
    tokens.append(_Token("end", "", n + 1))
    return tokens


class _Parser:
    def __init__(self, tokens, ctx: RingContext):
        self.tokens = tokens
        self.pos = 0
        self.ctx = ctx
        self.literals = ctx.named_literals()

    @property
    def current(self) -> _Token:
        return self.tokens[self.pos]

    def advance(self) -> _Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect_op(self, text):
        tok = self.current
        if tok.kind != "op" or tok.text != text:
            raise ExprError(f"expected {text!r}", tok.column)
        return self.advance()

    def parse(self):
        node = self.expr()
        tok = self.current
        if tok.kind != "end":
            raise ExprError(f"unexpected token {tok.text!r}", tok.column)
        return node

    def expr(self):
        node = self.term()
        while self.current.kind == "op" and self.current.text in "+-":
            op = self.advance().text
            rhs = self.term()
            node = Add(node, rhs) if op == "+" else Sub(node, rhs)
        return node

    def term(self):
        node = self.factor()
        while self.current.kind == "op" and self.current.text == "*":
            self.advance()
            node = Mul(node, self.factor())
        return node

    def factor(self):
        node = self.atom()
        if self.current.kind == "op" and self.current.text == "^":
            self.advance()
            tok = self.current
            if tok.kind != "num":
                raise ExprError("expected exponent", tok.column)
            self.advance()
            exponent = int(tok.text)
            if exponent > MAX_EXPONENT:
                raise ExprError("exponent overflow", tok.column)
            node = Pow(node, exponent)
        return node

    def atom(self):
        tok = self.current
        if tok.kind == "num":
            self.advance()
            return Const(self.ctx.from_int(int(tok.text)))
        if tok.kind == "name":
            self.advance()
            if tok.text == "x":
                return Var()
            if tok.text in self.literals:
                return Const(self.literals[tok.text])
            raise ExprError(f"unknown literal {tok.text!r}", tok.column)
        if tok.kind == "op" and tok.text == "(":
            self.advance()
            node = self.expr()
            self.expect_op(")")
            return node
        if tok.kind == "op" and tok.text == "-":
            self.advance()
            return Neg(self.atom())
        raise ExprError(f"syntax error near {tok.text!r}" if tok.text else
                        "unexpected end of input", tok.column)


def parse_expression(text: str, ctx: RingContext):
    """Parse an expression over the given ring; raises ExprError with a
    1-based column on bad input."""
    if not text.strip():
        raise ExprError("empty expression", 1)
    return _Parser(_tokenize(text), ctx).parse()


_PREC_ADD, _PREC_MUL, _PREC_POW, _PREC_ATOM = 1, 2, 3, 4


def _render(node, ctx, parent_prec):
    if isinstance(node, Const):
        s = ctx.render(node.payload)
        if parent_prec > _PREC_ADD and (" + " in s or " - " in s):
            return f"({s})"
        return s
    if isinstance(node, Var):
        return "x"
    if isinstance(node, (Add, Sub)):
        op = " + " if isinstance(node, Add) else " - "
        s = _render(node.left, ctx, _PREC_ADD) + op + _render(node.right, ctx, _PREC_MUL)
        return f"({s})" if parent_prec > _PREC_ADD else s
    if isinstance(node, Mul):
        s = _render(node.left, ctx, _PREC_MUL) + "*" + _render(node.right, ctx, _PREC_POW)
        return f"({s})" if parent_prec > _PREC_MUL else s
    if isinstance(node, Pow):
        return _render(node.base, ctx, _PREC_ATOM) + f"^{node.exponent}"
    if isinstance(node, Neg):
        inner = _render(node.child, ctx, _PREC_ATOM)
        # '-' binds to a whole atom, so a power must keep its parentheses
        if isinstance(node.child, Pow):
            inner = f"({inner})"
        return "-" + inner
    raise TypeError(f"not an expression node: {node!r}")


def render_expression(node, ctx: RingContext) -> str:
    """Canonical text that reparses to the identical tree."""
    return _render(node, ctx, _PREC_ADD)


def eval_expression(node, ctx: RingContext, precision: int | None = None):
    """Evaluate to a SkewPoly, or to its class in S/G_N when a precision is
    given."""
    poly = _eval_poly(node, ctx)
    if precision is None:
        return poly
    return series_from_poly(poly, precision)


def _eval_poly(node, ctx) -> SkewPoly:
    if isinstance(node, Const):
        return SkewPoly.from_scalar(ctx, node.payload)
    if isinstance(node, Var):
        return SkewPoly.var(ctx)
    if isinstance(node, Add):
        return _eval_poly(node.left, ctx) + _eval_poly(node.right, ctx)
    if isinstance(node, Sub):
        return _eval_poly(node.left, ctx) - _eval_poly(node.right, ctx)
    if isinstance(node, Mul):
        return _eval_poly(node.left, ctx) * _eval_poly(node.right, ctx)
    if isinstance(node, Pow):
        return _eval_poly(node.base, ctx) ** node.exponent
    if isinstance(node, Neg):
        return -_eval_poly(node.child, ctx)
    raise TypeError(f"not an expression node: {node!r}")
