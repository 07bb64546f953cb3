"""Tokenizer and expression parser shared by polynomial relations and ring-spec files.

Expressions parse into small tuples::

    ("int", n) ("name", s) ("tuple", [e, ...]) ("neg", e)
    ("add", a, b) ("sub", a, b) ("mul", a, b) ("pow", a, k)

Each node is wrapped in :class:`Node` so that evaluation errors can report a column.
"""
import re
from dataclasses import dataclass

from .errors import RingSpecSyntaxError

_TOKEN_RE = re.compile(r"\s*(?:(?P<int>\d+)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<sym>[\[\](),+*^=-]))")


@dataclass(frozen=True)
class Token:
    kind: str  # "int", "name", "sym", "end"
    text: str
    col: int  # 1-based


@dataclass(frozen=True)
class Node:
    op: str
    args: tuple
    col: int


def tokenize(text, line=None):
    tokens = []
    pos = 0
    stripped = text.rstrip()
    while pos < len(stripped):
        m = _TOKEN_RE.match(stripped, pos)
        if m is None or m.end() == pos:
            bad = pos + len(stripped[pos:]) - len(stripped[pos:].lstrip())
            raise RingSpecSyntaxError(f"unexpected character {stripped[bad]!r}", line, bad + 1)
        kind = m.lastgroup
        tokens.append(Token(kind, m.group(kind), m.start(kind) + 1))
        pos = m.end()
    tokens.append(Token("end", "", len(stripped) + 1))
    return tokens


class TokenStream:
    def __init__(self, tokens, line=None):
        self.tokens = tokens
        self.i = 0
        self.line = line

    def peek(self):
        return self.tokens[self.i]

    def next(self):
        tok = self.tokens[self.i]
        if tok.kind != "end":
            self.i += 1
        return tok

    def at(self, text):
        tok = self.peek()
        return tok.kind in ("sym", "name") and tok.text == text

    def expect(self, text, what=None):
        tok = self.peek()
        if not self.at(text):
            found = tok.text or "end of line"
            raise RingSpecSyntaxError(f"expected {what or repr(text)}, found {found!r}", self.line, tok.col)
        return self.next()

    def expect_kind(self, kind, what):
        tok = self.peek()
        if tok.kind != kind:
            found = tok.text or "end of line"
            raise RingSpecSyntaxError(f"expected {what}, found {found!r}", self.line, tok.col)
        return self.next()

    def error(self, message):
        raise RingSpecSyntaxError(message, self.line, self.peek().col)


def parse_expr(ts):
    left = _parse_term(ts)
    while ts.at("+") or ts.at("-"):
        tok = ts.next()
        right = _parse_term(ts)
        left = Node("add" if tok.text == "+" else "sub", (left, right), tok.col)
    return left


def _parse_term(ts):
    left = _parse_unary(ts)
    while ts.at("*"):
        tok = ts.next()
        left = Node("mul", (left, _parse_unary(ts)), tok.col)
    return left


def _parse_unary(ts):
    if ts.at("-"):
        tok = ts.next()
        return Node("neg", (_parse_unary(ts),), tok.col)
    return _parse_power(ts)


def _parse_power(ts):
    base = _parse_atom(ts)
    if ts.at("^"):
        tok = ts.next()
        exp = ts.expect_kind("int", "integer exponent")
        return Node("pow", (base, int(exp.text)), tok.col)
    return base


def _parse_atom(ts):
    tok = ts.peek()
    if tok.kind == "int":
        ts.next()
        return Node("int", (int(tok.text),), tok.col)
    if tok.kind == "name":
        ts.next()
        return Node("name", (tok.text,), tok.col)
    if ts.at("("):
        ts.next()
        items = [parse_expr(ts)]
        trailing = False
        while ts.at(","):
            ts.next()
            if ts.at(")"):
                trailing = True
                break
            items.append(parse_expr(ts))
        ts.expect(")")
        if len(items) == 1 and not trailing:
            return items[0]
        return Node("tuple", tuple(items), tok.col)
    ts.error(f"expected an element expression, found {tok.text or 'end of line'!r}")


def parse_expression(text):
    """Parse a standalone expression string."""
    ts = TokenStream(tokenize(text))
    node = parse_expr(ts)
    if ts.peek().kind != "end":
        ts.error(f"unexpected {ts.peek().text!r}")
    return node


def evaluate(node, ctx):
    """Evaluate ``node`` with a context object providing the arithmetic hooks
    ``const``, ``name``, ``tuple``, ``add``, ``sub``, ``mul``, ``neg``, ``pow``."""
    op = node.op
    if op == "int":
        return ctx.const(node.args[0], node)
    if op == "name":
        return ctx.name(node.args[0], node)
    if op == "tuple":
        return ctx.tuple(node.args, node)
    if op == "neg":
        return ctx.neg(evaluate(node.args[0], ctx))
    if op == "pow":
        return ctx.pow(evaluate(node.args[0], ctx), node.args[1])
    a = evaluate(node.args[0], ctx)
    b = evaluate(node.args[1], ctx)
    return getattr(ctx, op)(a, b)
