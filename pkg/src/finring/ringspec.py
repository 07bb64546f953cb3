"""Line-oriented ring-spec documents.

Grammar (``#`` starts a comment)::

    ring NAME = zmod INT
    ring NAME = gf INT INT
    ring NAME = polyquot BASE [var, ...] (poly, ...)
    ring NAME = product NAME NAME ...
    ring NAME = quot NAME (elem, ...)
    ext  NAME = extension AMBIENT gens(elem, ...)

Element expressions use integers, generator names, tuples for product rings
and ``+ - * ^`` with the usual precedence.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .errors import ElementNotInRing, RingError, RingSpecSyntaxError, UndefinedName
from .expr import TokenStream, evaluate, parse_expr, tokenize
from .extension import Extension, make_extension
from .polyquot import construct_polyquot
from .ring import FiniteRing, construct_gf, construct_product, construct_zmod, product_index, quotient_by_ideal
from .spectrum import ideal_generated


@dataclass
class RingSpecDocument:
    rings: dict = field(default_factory=dict)
    extensions: dict = field(default_factory=dict)
    order: list = field(default_factory=list)    # (kind, name) in declaration order

    def extension(self, name) -> Extension:
        if name not in self.extensions:
            raise UndefinedName(f"no extension named {name!r}")
        return self.extensions[name]


def _at(line, col):
    return f"line {line}, column {col}: "


class _ElementContext:
    def __init__(self, ring: FiniteRing, line):
        self.ring = ring
        self.line = line

    def const(self, n, node):
        return self.ring.from_int(n)

    def name(self, s, node):
        try:
            return self.ring.gen(s)
        except KeyError:
            raise UndefinedName(_at(self.line, node.col) + f"{s!r} is not a generator of the ring") from None

    def tuple(self, items, node):
        R = self.ring
        if R.factors is None or len(items) != len(R.factors):
            arity = "not a product ring" if R.factors is None else f"{len(R.factors)} factors"
            raise ElementNotInRing(_at(self.line, node.col) + f"tuple of length {len(items)} ({arity})")
        comps = [evaluate(item, _ElementContext(F, self.line)) for item, F in zip(items, R.factors)]
        return product_index(R, comps)

    def add(self, a, b):
        return int(self.ring.add[a, b])

    def sub(self, a, b):
        return int(self.ring.sub(a, b))

    def mul(self, a, b):
        return int(self.ring.mul[a, b])

    def neg(self, a):
        return int(self.ring.neg[a])

    def pow(self, a, k):
        return self.ring.power(a, k)


def evaluate_element(ring, node, line=None):
    return evaluate(node, _ElementContext(ring, line))


def _expr_list(ts, what):
    ts.expect("(", f"'(' opening the {what} list")
    items = []
    if not ts.at(")"):
        items.append(parse_expr(ts))
        while ts.at(","):
            ts.next()
            items.append(parse_expr(ts))
    ts.expect(")", f"',' or ')' in the {what} list")
    return items


def _name_list(ts):
    ts.expect("[", "'[' opening the variable list")
    names = [ts.expect_kind("name", "variable name").text]
    while ts.at(","):
        ts.next()
        names.append(ts.expect_kind("name", "variable name").text)
    ts.expect("]", "',' or ']' in the variable list")
    return names


def _int(ts, what):
    return int(ts.expect_kind("int", what).text)


class _Parser:
    def __init__(self):
        self.doc = RingSpecDocument()

    def ring_ref(self, ts):
        tok = ts.expect_kind("name", "ring name")
        if tok.text not in self.doc.rings:
            raise UndefinedName(_at(ts.line, tok.col) + f"ring {tok.text!r} is not declared")
        return self.doc.rings[tok.text]

    def ctor(self, ts):
        tok = ts.peek()
        if tok.kind != "name":
            ts.error(f"expected a ring constructor, found {tok.text or 'end of line'!r}")
        ts.next()
        kind = tok.text
        if kind == "zmod":
            return construct_zmod(_int(ts, "modulus"))
        if kind == "gf":
            p = _int(ts, "prime")
            return construct_gf(p, _int(ts, "degree"))
        if kind == "polyquot":
            base = self.ring_ref(ts)
            variables = _name_list(ts)
            relations = _expr_list(ts, "relation")
            return construct_polyquot(base, variables, relations)
        if kind == "product":
            factors = [self.ring_ref(ts)]
            while ts.peek().kind == "name":
                factors.append(self.ring_ref(ts))
            return construct_product(factors)
        if kind == "quot":
            R = self.ring_ref(ts)
            gens = [evaluate_element(R, n, ts.line) for n in _expr_list(ts, "ideal generator")]
            return quotient_by_ideal(R, ideal_generated(R, gens))[0]
        raise RingSpecSyntaxError(f"unknown ring constructor {kind!r}", ts.line, tok.col)

    def declaration(self, ts):
        head = ts.expect_kind("name", "'ring' or 'ext'")
        if head.text not in ("ring", "ext"):
            raise RingSpecSyntaxError(f"expected 'ring' or 'ext', found {head.text!r}", ts.line, head.col)
        name_tok = ts.expect_kind("name", "declaration name")
        name = name_tok.text
        if name in self.doc.rings or name in self.doc.extensions:
            raise RingSpecSyntaxError(f"{name!r} is already declared", ts.line, name_tok.col)
        ts.expect("=")
        if head.text == "ring":
            ring = self.ctor(ts)
            self.doc.rings[name] = ring
        else:
            ts.expect("extension", "'extension'")
            S = self.ring_ref(ts)
            ts.expect("gens", "'gens'")
            gens = [evaluate_element(S, n, ts.line) for n in _expr_list(ts, "generator")]
            self.doc.extensions[name] = make_extension(S, gens)
        if ts.peek().kind != "end":
            ts.error(f"unexpected {ts.peek().text!r} after the declaration")
        self.doc.order.append((head.text, name))


def parse_ringspec(text: str) -> RingSpecDocument:
    parser = _Parser()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        ts = TokenStream(tokenize(line, lineno), lineno)
        try:
            parser.declaration(ts)
        except RingSpecSyntaxError:
            raise
        except RingError as exc:
            if str(exc).find("line ") < 0:
                exc.args = (_at(lineno, 1) + (exc.args[0] if exc.args else ""),)
            raise
    return parser.doc
