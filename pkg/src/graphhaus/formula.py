"""Boolean formula language over numerical invariant values.

Grammar (public, versioned):

    formula    := or_expr
    or_expr    := and_expr ("OR" and_expr)*
    and_expr   := not_expr ("AND" not_expr)*
    not_expr   := ["NOT"] atom
    atom       := comparison | "(" formula ")"
    comparison := expr cmp expr          cmp in { < <= = != >= > }
    expr       := term (("+"|"-") term)*
    term       := factor (("*"|"/") factor)*
    factor     := number | invariant_id | "(" expr ")"

Numbers are integer or decimal literals; arithmetic is exact rational.
Only numerical (integer or rational) invariants may appear; boolean
invariants have their own dedicated search constraint.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Optional, Set, Union

from . import invariants
from .invariants import Status, UnknownInvariant


class FormulaSyntaxError(Exception):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class NonNumericalInvariant(Exception):
    pass


@dataclass(frozen=True)
class Num:
    value: Fraction


@dataclass(frozen=True)
class Inv:
    id: str


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Expr"
    right: "Expr"


Expr = Union[Num, Inv, BinOp]


@dataclass(frozen=True)
class Cmp:
    op: str
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Not:
    operand: "Node"


@dataclass(frozen=True)
class And:
    left: "Node"
    right: "Node"


@dataclass(frozen=True)
class Or:
    left: "Node"
    right: "Node"


Node = Union[Cmp, Not, And, Or]

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<number>\d+(?:\.\d+)?)|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)"
    r"|(?P<op><=|>=|!=|<|>|=|\+|-|\*|/|\(|\)))"
)
_KEYWORDS = {"AND", "OR", "NOT"}
_CMP_OPS = {"<", "<=", "=", "!=", ">=", ">"}


def _tokenize(text: str):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m or m.end() == pos:
            stripped = text[pos:].lstrip()
            if not stripped:
                break
            raise FormulaSyntaxError(
                f"unexpected character {stripped[0]!r}", len(text) - len(stripped)
            )
        kind = m.lastgroup
        tokens.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0
        self._numeric_ids = {
            d.id
            for d in invariants.registry(include_extended=True)
            if d.kind in (invariants.Kind.INTEGER, invariants.Kind.RATIONAL)
        }
        self._all_ids = {d.id for d in invariants.registry(include_extended=True)}

    def peek(self):
        return self.tokens[self.i]

    def advance(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect_op(self, op: str):
        kind, value, pos = self.peek()
        if kind != "op" or value != op:
            raise FormulaSyntaxError(f"expected {op!r}", pos)
        return self.advance()

    def parse(self) -> Node:
        node = self.or_expr()
        kind, value, pos = self.peek()
        if kind != "end":
            raise FormulaSyntaxError(f"unexpected trailing input {value!r}", pos)
        return node

    def or_expr(self) -> Node:
        node = self.and_expr()
        while self.peek()[:2] == ("ident", "OR"):
            self.advance()
            node = Or(node, self.and_expr())
        return node

    def and_expr(self) -> Node:
        node = self.not_expr()
        while self.peek()[:2] == ("ident", "AND"):
            self.advance()
            node = And(node, self.not_expr())
        return node

    def not_expr(self) -> Node:
        if self.peek()[:2] == ("ident", "NOT"):
            self.advance()
            return Not(self.atom())
        return self.atom()

    def atom(self) -> Node:
        # a comparison and a parenthesized formula can both start with "(";
        # try the comparison first and rewind if no comparison operator follows
        mark = self.i
        try:
            return self.comparison()
        except FormulaSyntaxError as cmp_err:
            self.i = mark
            try:
                self.expect_op("(")
                node = self.or_expr()
                self.expect_op(")")
                return node
            except FormulaSyntaxError as paren_err:
                # report whichever alternative got further
                raise cmp_err if cmp_err.position >= paren_err.position else paren_err

    def comparison(self) -> Cmp:
        left = self.expr()
        kind, value, pos = self.peek()
        if kind != "op" or value not in _CMP_OPS:
            raise FormulaSyntaxError("expected comparison operator", pos)
        self.advance()
        right = self.expr()
        return Cmp(value, left, right)

    def expr(self) -> Expr:
        node = self.term()
        while self.peek()[0] == "op" and self.peek()[1] in "+-":
            op = self.advance()[1]
            node = BinOp(op, node, self.term())
        return node

    def term(self) -> Expr:
        node = self.factor()
        while self.peek()[0] == "op" and self.peek()[1] in "*/":
            op = self.advance()[1]
            node = BinOp(op, node, self.factor())
        return node

    def factor(self) -> Expr:
        kind, value, pos = self.advance()
        if kind == "number":
            return Num(Fraction(value))
        if kind == "ident":
            if value in _KEYWORDS:
                raise FormulaSyntaxError(f"unexpected keyword {value}", pos)
            if value not in self._all_ids:
                raise UnknownInvariant(value)
            if value not in self._numeric_ids:
                raise NonNumericalInvariant(
                    f"{value} is boolean; use a class constraint instead"
                )
            return Inv(value)
        if kind == "op" and value == "(":
            node = self.expr()
            self.expect_op(")")
            return node
        raise FormulaSyntaxError("expected number, invariant, or '('", pos)


def parse_formula(text: str) -> Node:
    return _Parser(text).parse()


def referenced_invariants(node) -> Set[str]:
    if isinstance(node, Inv):
        return {node.id}
    if isinstance(node, Num):
        return set()
    if isinstance(node, (BinOp, Cmp, And, Or)):
        return referenced_invariants(node.left) | referenced_invariants(node.right)
    if isinstance(node, Not):
        return referenced_invariants(node.operand)
    raise TypeError(type(node))


def _eval_expr(node: Expr, values: Mapping[str, Fraction]) -> Fraction:
    if isinstance(node, Num):
        return node.value
    if isinstance(node, Inv):
        return values[node.id]
    a = _eval_expr(node.left, values)
    b = _eval_expr(node.right, values)
    if node.op == "+":
        return a + b
    if node.op == "-":
        return a - b
    if node.op == "*":
        return a * b
    return a / b  # ZeroDivisionError handled by the caller


def _eval_bool(node: Node, values: Mapping[str, Fraction]) -> bool:
    if isinstance(node, Cmp):
        a = _eval_expr(node.left, values)
        b = _eval_expr(node.right, values)
        return {
            "<": a < b,
            "<=": a <= b,
            "=": a == b,
            "!=": a != b,
            ">=": a >= b,
            ">": a > b,
        }[node.op]
    if isinstance(node, Not):
        return not _eval_bool(node.operand, values)
    if isinstance(node, And):
        return _eval_bool(node.left, values) and _eval_bool(node.right, values)
    if isinstance(node, Or):
        return _eval_bool(node.left, values) or _eval_bool(node.right, values)
    raise TypeError(type(node))


def eval_formula(node: Node, values: Mapping[str, "invariants.InvariantValue"]) -> Optional[bool]:
    """True/False, or None (undefined) when any referenced invariant is not
    Computed or a division by zero occurs. Undefined graphs never match."""
    numeric: dict = {}
    for inv_id in referenced_invariants(node):
        iv = values.get(inv_id)
        if iv is None or iv.status is not Status.COMPUTED:
            return None
        numeric[inv_id] = Fraction(iv.value)
    try:
        return _eval_bool(node, numeric)
    except ZeroDivisionError:
        return None


def _format_number(value: Fraction) -> str:
    if value.denominator == 1:
        return str(value.numerator)
    # literals are always decimal-exact; non-decimal fractions only arise
    # from programmatic ASTs and fall back to a fraction (non-reparsable)
    den = value.denominator
    scale = 0
    while den % 2 == 0:
        den //= 2
        scale += 1
    fives = 0
    while den % 5 == 0:
        den //= 5
        fives += 1
    if den != 1:
        return f"{value.numerator}/{value.denominator}"
    digits = max(scale, fives)
    scaled = value * 10**digits
    text = str(scaled.numerator).rjust(digits + 1, "0")
    return f"{text[:-digits]}.{text[-digits:]}"


def pretty(node) -> str:
    """Formula text that reparses to an identical AST."""
    if isinstance(node, Num):
        return _format_number(node.value)
    if isinstance(node, Inv):
        return node.id
    if isinstance(node, BinOp):
        return f"({pretty(node.left)} {node.op} {pretty(node.right)})"
    if isinstance(node, Cmp):
        return f"{pretty(node.left)} {node.op} {pretty(node.right)}"
    if isinstance(node, Not):
        inner = pretty(node.operand)
        if isinstance(node.operand, (And, Or, Not)):
            inner = f"({inner})"
        return f"NOT {inner}"
    if isinstance(node, And):
        left = pretty(node.left)
        if isinstance(node.left, Or):
            left = f"({left})"
        right = pretty(node.right)
        if isinstance(node.right, (Or, And)):
            right = f"({right})"
        return f"{left} AND {right}"
    if isinstance(node, Or):
        left = pretty(node.left)
        right = pretty(node.right)
        if isinstance(node.right, Or):
            right = f"({right})"
        return f"{left} OR {right}"
    raise TypeError(type(node))
