"""Expression syntax for coefficients and (noncommutative) algebra elements.

Grammar::

    expr    := term (('+' | '-') term)*
    term    := factor (('*' | '/')? factor)*        juxtaposition = product
    factor  := '-' factor | power
    power   := atom ('^' '-'? INT)?
    atom    := INT | NAME | '(' expr ')'

Names ``q p r s`` are parameters; ``x xinv th dx dth w u`` are generators.
Sub-expressions free of generators are folded into a single coefficient as
they are parsed, and ``g^k`` is expanded into a k-fold product.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import List, Optional, Tuple, Union

from .coeffs import PARAMS, ONE, ParamRational

GENERATOR_TOKENS = ("x", "xinv", "th", "dx", "dth", "w", "u")
_INVERSE_TOKEN = {"x": "xinv", "xinv": "x"}


class ExprSyntaxError(ValueError):
    def __init__(self, message: str, line: int, column: int, expected: Tuple[str, ...] = ()):
        self.line, self.column, self.expected = line, column, tuple(expected)
        detail = f" (expected one of: {', '.join(expected)})" if expected else ""
        super().__init__(f"{message} at line {line}, column {column}{detail}")


class UnknownTokenError(ExprSyntaxError):
    pass


Span = Tuple[int, int]


@dataclass(frozen=True)
class Scalar:
    value: ParamRational
    span: Span = field(default=(0, 0), compare=False)


@dataclass(frozen=True)
class Gen:
    name: str
    span: Span = field(default=(0, 0), compare=False)


@dataclass(frozen=True)
class Product:
    items: Tuple["Expr", ...]
    span: Span = field(default=(0, 0), compare=False)


@dataclass(frozen=True)
class Sum:
    items: Tuple["Expr", ...]
    span: Span = field(default=(0, 0), compare=False)


@dataclass(frozen=True)
class Neg:
    item: "Expr"
    span: Span = field(default=(0, 0), compare=False)


Expr = Union[Scalar, Gen, Product, Sum, Neg]

_TOKEN_RE = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(.))", re.S)


@dataclass
class _Tok:
    kind: str  # INT NAME OP END
    text: str
    pos: int


def _tokenize(src: str) -> List[_Tok]:
    toks = []
    pos = 0
    while pos < len(src):
        if not src[pos:].strip():
            break
        m = _TOKEN_RE.match(src, pos)
        start = m.start(m.lastindex)
        if m.group(1):
            toks.append(_Tok("INT", m.group(1), start))
        elif m.group(2):
            toks.append(_Tok("NAME", m.group(2), start))
        else:
            ch = m.group(3)
            if ch not in "+-*/^()":
                line, col = _line_col(src, start)
                raise UnknownTokenError(f"unexpected character {ch!r}", line, col,
                                        ("+", "-", "*", "/", "^", "(", ")"))
            toks.append(_Tok("OP", ch, start))
        pos = m.end()
    toks.append(_Tok("END", "", len(src)))
    return toks


def _line_col(src: str, pos: int) -> Tuple[int, int]:
    line = src.count("\n", 0, pos) + 1
    col = pos - (src.rfind("\n", 0, pos) + 1) + 1
    return line, col


_ATOM_START = ("INT", "NAME", "(", "-")


class _Parser:
    def __init__(self, src: str, allow_generators: bool = True):
        self.src = src
        self.toks = _tokenize(src)
        self.i = 0
        self.allow_generators = allow_generators

    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def error(self, message: str, expected=()) -> ExprSyntaxError:
        line, col = _line_col(self.src, self.tok.pos)
        return ExprSyntaxError(message, line, col, expected)

    def take(self) -> _Tok:
        t = self.tok
        self.i += 1
        return t

    def is_op(self, ch: str) -> bool:
        return self.tok.kind == "OP" and self.tok.text == ch

    def parse(self) -> Expr:
        if self.tok.kind == "END":
            raise self.error("empty expression", _ATOM_START)
        node = self.expr()
        if self.tok.kind != "END":
            raise self.error(f"unexpected {self.tok.text!r}", ("+", "-", "*", "/", "^", ")", "end"))
        return node

    def expr(self) -> Expr:
        start = self.tok.pos
        items = [self.term()]
        while self.is_op("+") or self.is_op("-"):
            op = self.take().text
            t = self.term()
            items.append(_negate(t) if op == "-" else t)
        return _make_sum(items, (start, self.tok.pos))

    def _starts_factor(self) -> bool:
        t = self.tok
        return t.kind in ("INT", "NAME") or (t.kind == "OP" and t.text == "(")

    def term(self) -> Expr:
        start = self.tok.pos
        items = [self.factor()]
        while True:
            if self.is_op("*"):
                self.take()
                items.append(self.factor())
            elif self.is_op("/"):
                self.take()
                pos = self.tok.pos
                d = self.factor()
                if not isinstance(d, Scalar):
                    line, col = _line_col(self.src, pos)
                    raise ExprSyntaxError("division by a non-scalar", line, col, ("INT", "q", "p", "r", "s"))
                if d.value.is_zero():
                    line, col = _line_col(self.src, pos)
                    raise ExprSyntaxError("division by zero", line, col)
                items.append(Scalar(d.value.inverse(), d.span))
            elif self._starts_factor():
                items.append(self.factor())
            else:
                break
        return _make_product(items, (start, self.tok.pos))

    def factor(self) -> Expr:
        if self.is_op("-"):
            start = self.take().pos
            return _negate(self.factor(), (start, self.tok.pos))
        return self.power()

    def power(self) -> Expr:
        start = self.tok.pos
        base = self.atom()
        if not self.is_op("^"):
            return base
        self.take()
        neg = False
        if self.is_op("-"):
            self.take()
            neg = True
        if self.tok.kind != "INT":
            raise self.error("expected an integer exponent", ("INT", "-"))
        k = int(self.take().text)
        k = -k if neg else k
        span = (start, self.tok.pos)
        if isinstance(base, Scalar):
            if k < 0 and base.value.is_zero():
                raise self.error("zero raised to a negative power")
            return Scalar(base.value ** k, span)
        if k < 0:
            if isinstance(base, Gen) and base.name in _INVERSE_TOKEN:
                base = Gen(_INVERSE_TOKEN[base.name], base.span)
                k = -k
            else:
                raise self.error("negative powers are only defined for x and xinv")
        if k == 0:
            return Scalar(ONE, span)
        return _make_product([base] * k, span)

    def atom(self) -> Expr:
        t = self.tok
        if t.kind == "INT":
            self.take()
            return Scalar(ParamRational.const(int(t.text)), (t.pos, t.pos + len(t.text)))
        if t.kind == "NAME":
            self.take()
            span = (t.pos, t.pos + len(t.text))
            if t.text in PARAMS:
                return Scalar(ParamRational.param(t.text), span)
            if t.text in GENERATOR_TOKENS and self.allow_generators:
                return Gen(t.text, span)
            line, col = _line_col(self.src, t.pos)
            allowed = PARAMS + (GENERATOR_TOKENS if self.allow_generators else ())
            raise UnknownTokenError(f"unknown token {t.text!r}", line, col, allowed)
        if self.is_op("("):
            self.take()
            node = self.expr()
            if not self.is_op(")"):
                raise self.error("missing ')'", (")",))
            self.take()
            return node
        raise self.error(f"unexpected {t.text or 'end of input'!r}", ("INT", "NAME", "(", "-"))


def _negate(node: Expr, span: Optional[Span] = None) -> Expr:
    span = span or node.span
    if isinstance(node, Scalar):
        return Scalar(-node.value, span)
    if isinstance(node, Neg):
        return node.item
    return Neg(node, span)


def _make_product(items: List[Expr], span: Span) -> Expr:
    flat: List[Expr] = []
    for it in items:
        flat.extend(it.items if isinstance(it, Product) else [it])
    merged: List[Expr] = []
    for it in flat:
        if isinstance(it, Scalar) and merged and isinstance(merged[-1], Scalar):
            merged[-1] = Scalar(merged[-1].value * it.value, merged[-1].span)
        else:
            merged.append(it)
    if len(merged) == 1:
        return merged[0]
    if all(isinstance(it, Scalar) for it in merged):
        v = ONE
        for it in merged:
            v = v * it.value
        return Scalar(v, span)
    return Product(tuple(merged), span)


def _make_sum(items: List[Expr], span: Span) -> Expr:
    flat: List[Expr] = []
    for it in items:
        flat.extend(it.items if isinstance(it, Sum) else [it])
    if len(flat) == 1:
        return flat[0]
    if all(isinstance(it, Scalar) for it in flat):
        v = ParamRational.const(0)
        for it in flat:
            v = v + it.value
        return Scalar(v, span)
    return Sum(tuple(flat), span)


def parse_expression(src: str) -> Expr:
    return _Parser(src).parse()


def parse_coefficient(src: str) -> ParamRational:
    node = _Parser(src, allow_generators=False).parse()
    assert isinstance(node, Scalar)
    return node.value


# --------------------------------------------------------------------------

def pretty(node: Expr) -> str:
    if isinstance(node, Scalar):
        text = str(node.value)
        return text if node.value.is_atomic() else f"({text})"
    if isinstance(node, Gen):
        return node.name
    if isinstance(node, Neg):
        inner = pretty(node.item)
        if isinstance(node.item, Sum):
            inner = f"({inner})"
        return f"-{inner}"
    if isinstance(node, Product):
        parts = []
        for it in node.items:
            t = pretty(it)
            if isinstance(it, (Sum, Neg)) or (isinstance(it, Scalar) and t.startswith("-")):
                t = f"({t})"
            parts.append(t)
        return "*".join(parts)
    if isinstance(node, Sum):
        out = []
        for i, it in enumerate(node.items):
            t = pretty(it)
            if i == 0:
                out.append(t)
            elif t.startswith("-"):
                out.append(" - " + t[1:])
            else:
                out.append(" + " + t)
        return "".join(out)
    raise TypeError(node)


def evaluate(node: Expr, algebra):
    """Turn a parse tree into a raw Element of ``algebra`` (written order kept)."""
    from .algebra import Element, multiply
    if isinstance(node, Scalar):
        return Element(algebra, {(): node.value}, normalized=False)
    if isinstance(node, Gen):
        if node.name not in algebra.order:
            raise ValueError(f"generator {node.name!r} is not available in {algebra.name}")
        return Element(algebra, {(node.name,): ONE}, normalized=False)
    if isinstance(node, Neg):
        return -evaluate(node.item, algebra)
    if isinstance(node, Product):
        out = evaluate(node.items[0], algebra)
        for it in node.items[1:]:
            out = multiply(out, evaluate(it, algebra))
        return out
    if isinstance(node, Sum):
        out = evaluate(node.items[0], algebra)
        for it in node.items[1:]:
            out = out + evaluate(it, algebra)
        return out
    raise TypeError(node)


def parse_element(src: str, algebra):
    return evaluate(parse_expression(src), algebra)
