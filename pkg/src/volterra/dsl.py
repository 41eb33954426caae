"""Interconnection-expression language over named series.

Grammar (whitespace insensitive)::

    expr   := term ('+' term)*
    term   := factor ('*' factor)*
    factor := atom ('<|' atom)*
    atom   := identifier | '(' expr ')'

``<|`` is series composition (left associative, binds tightest; safe to
chain because composition is associative), ``*`` the pointwise product,
``+`` the sum.  ``x <| y`` feeds y's output into x.
"""

from __future__ import annotations

from dataclasses import dataclass

from .algebra import compose_series, product_series, sum_series
from .errors import ParseError, ResolutionError
from .kernels import DEFAULT_MAX_ORDER, VolterraSeries

__all__ = ["ExprNode", "Name", "Sum", "Product", "Compose", "parse", "pretty", "build"]


class ExprNode:
    """Base class for expression-tree nodes."""


@dataclass(frozen=True)
class Name(ExprNode):
    value: str


@dataclass(frozen=True)
class Sum(ExprNode):
    left: ExprNode
    right: ExprNode


@dataclass(frozen=True)
class Product(ExprNode):
    left: ExprNode
    right: ExprNode


@dataclass(frozen=True)
class Compose(ExprNode):
    outer: ExprNode
    inner: ExprNode


_TOKEN_KINDS = {"+": "'+'", "*": "'*'", "<|": "'<|'", "(": "'('", ")": "')'"}


def _tokenize(text: str):
    tokens = []  # (kind, value, offset)
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch in "+*()":
            tokens.append((ch, ch, i))
            i += 1
            continue
        if ch == "<":
            if i + 1 < n and text[i + 1] == "|":
                tokens.append(("<|", "<|", i))
                i += 2
                continue
            raise ParseError(f"stray '<' at offset {i}", i, {"'<|'"})
        if ch.isalpha() or ch == "_":
            start = i
            while i < n and (text[i].isalnum() or text[i] == "_"):
                i += 1
            tokens.append(("name", text[start:i], start))
            continue
        raise ParseError(f"unexpected character {ch!r} at offset {i}", i, {"identifier", "'('"})
    tokens.append(("end", "", n))
    return tokens


def parse(text: str) -> ExprNode:
    """Parse an interconnection expression; raises ParseError with offset."""
    tokens = _tokenize(text)
    pos = 0

    def peek():
        return tokens[pos]

    def take(kind):
        nonlocal pos
        tok = tokens[pos]
        if tok[0] != kind:
            raise ParseError(
                f"expected {_TOKEN_KINDS.get(kind, kind)} at offset {tok[2]}, found {tok[1] or 'end of input'!r}",
                tok[2],
                {_TOKEN_KINDS.get(kind, kind)},
            )
        pos += 1
        return tok

    def atom():
        tok = peek()
        if tok[0] == "name":
            take("name")
            return Name(tok[1])
        if tok[0] == "(":
            take("(")
            node = expr()
            take(")")
            return node
        raise ParseError(
            f"expected identifier or '(' at offset {tok[2]}, found {tok[1] or 'end of input'!r}",
            tok[2],
            {"identifier", "'('"},
        )

    def factor():
        node = atom()
        while peek()[0] == "<|":
            take("<|")
            node = Compose(node, atom())
        return node

    def term():
        node = factor()
        while peek()[0] == "*":
            take("*")
            node = Product(node, factor())
        return node

    def expr():
        node = term()
        while peek()[0] == "+":
            take("+")
            node = Sum(node, term())
        return node

    node = expr()
    tok = peek()
    if tok[0] != "end":
        raise ParseError(
            f"unexpected {tok[1]!r} at offset {tok[2]}", tok[2], {"'+'", "'*'", "'<|'", "end"}
        )
    return node


_LEVEL = {Sum: 0, Product: 1, Compose: 2}


def pretty(node: ExprNode) -> str:
    """Minimal-parenthesis rendering; parse(pretty(node)) == node."""

    def render(n: ExprNode, level: int) -> str:
        if isinstance(n, Name):
            return n.value
        if isinstance(n, Sum):
            text = f"{render(n.left, 0)} + {render(n.right, 1)}"
            own = 0
        elif isinstance(n, Product):
            text = f"{render(n.left, 1)} * {render(n.right, 2)}"
            own = 1
        elif isinstance(n, Compose):
            text = f"{render(n.outer, 2)} <| {render(n.inner, 3)}"
            own = 2
        else:
            raise TypeError(f"not an expression node: {n!r}")
        return f"({text})" if own < level else text

    return render(node, 0)


def build(
    node: ExprNode,
    bindings: dict[str, VolterraSeries],
    max_order: int | None = DEFAULT_MAX_ORDER,
) -> VolterraSeries:
    """Evaluate an expression tree against named series."""
    if isinstance(node, Name):
        try:
            return bindings[node.value]
        except KeyError:
            raise ResolutionError(f"name {node.value!r} is not bound to a series") from None
    if isinstance(node, Sum):
        return sum_series(build(node.left, bindings, max_order), build(node.right, bindings, max_order))
    if isinstance(node, Product):
        return product_series(
            build(node.left, bindings, max_order), build(node.right, bindings, max_order), max_order
        )
    if isinstance(node, Compose):
        return compose_series(
            build(node.outer, bindings, max_order), build(node.inner, bindings, max_order), max_order
        )
    raise TypeError(f"not an expression node: {node!r}")
