"""Finitely presented congruences on N^n and their file format.

A presentation file is UTF-8 text: a ``vars x, y, z;`` header followed by
one generator per ``;``-terminated statement.  A statement is either
``MONO - MONO`` (a pair), ``MONO`` (a nil generator), or the sugar
``MONO * (U - 1)`` which expands to the pair (MONO + U, MONO).  Monomials
look like ``x^2*y``; ``1`` denotes the origin.  ``#`` starts a comment.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .errors import PresentationSyntaxError

Exponent = tuple[int, ...]


def add(a: Exponent, b: Exponent) -> Exponent:
    return tuple(x + y for x, y in zip(a, b))


def sub(a: Exponent, b: Exponent) -> Exponent:
    return tuple(x - y for x, y in zip(a, b))


def leq(a: Exponent, b: Exponent) -> bool:
    """Componentwise divisibility of monomials."""
    return all(x <= y for x, y in zip(a, b))


def zero(n: int) -> Exponent:
    return (0,) * n


def unit(n: int, i: int) -> Exponent:
    return tuple(1 if j == i else 0 for j in range(n))


def support(a: Exponent) -> frozenset[int]:
    return frozenset(i for i, x in enumerate(a) if x)


@dataclass(frozen=True)
class CongruencePresentation:
    """Pair and nil generators of a congruence on N^n."""

    n: int
    names: tuple[str, ...]
    pairs: tuple[tuple[Exponent, Exponent], ...]
    nils: tuple[Exponent, ...] = ()

    def __post_init__(self):
        if len(self.names) != self.n:
            raise ValueError("need one name per variable")
        for a, b in self.pairs:
            if len(a) != self.n or len(b) != self.n:
                raise ValueError("pair generator of wrong length")
            if min(a + b) < 0:
                raise ValueError("negative exponent in generator")
        for m in self.nils:
            if len(m) != self.n or min(m, default=0) < 0:
                raise ValueError("bad nil generator")

    @staticmethod
    def make(n, names, pairs, nils=()) -> "CongruencePresentation":
        """Normalize: drop self-pairs and duplicates, sort deterministically."""
        seen = set()
        keep = []
        for a, b in pairs:
            a, b = tuple(a), tuple(b)
            if a == b:
                continue
            key = (min(a, b), max(a, b))
            if key not in seen:
                seen.add(key)
                keep.append(key)
        keep.sort()
        nil_set = sorted(set(tuple(m) for m in nils))
        return CongruencePresentation(n, tuple(names), tuple(keep), tuple(nil_set))

    def monomial(self, a: Exponent) -> str:
        parts = []
        for name, e in zip(self.names, a):
            if e == 1:
                parts.append(name)
            elif e > 1:
                parts.append(f"{name}^{e}")
        return "*".join(parts) if parts else "1"


_NAME = re.compile(r"[A-Za-z_][A-Za-z_0-9]*")
_INT = re.compile(r"[0-9]+")


class _Parser:
    """Recursive-descent parser over the raw text, tracking line/column."""

    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def error(self, message: str):
        line = self.text.count("\n", 0, self.pos) + 1
        col = self.pos - self.text.rfind("\n", 0, self.pos)
        raise PresentationSyntaxError(message, line, col)

    def skip_ws(self):
        while self.pos < len(self.text):
            c = self.text[self.pos]
            if c == "#":
                nl = self.text.find("\n", self.pos)
                self.pos = len(self.text) if nl < 0 else nl
            elif c.isspace():
                self.pos += 1
            else:
                break

    def at_end(self) -> bool:
        self.skip_ws()
        return self.pos >= len(self.text)

    def expect(self, literal: str):
        self.skip_ws()
        if not self.text.startswith(literal, self.pos):
            self.error(f"expected {literal!r}")
        self.pos += len(literal)

    def peek(self, literal: str) -> bool:
        self.skip_ws()
        return self.text.startswith(literal, self.pos)

    def take(self, literal: str) -> bool:
        if self.peek(literal):
            self.pos += len(literal)
            return True
        return False

    def name(self) -> str:
        self.skip_ws()
        m = _NAME.match(self.text, self.pos)
        if not m:
            self.error("expected a variable name")
        self.pos = m.end()
        return m.group()

    def integer(self) -> int:
        self.skip_ws()
        m = _INT.match(self.text, self.pos)
        if not m:
            self.error("expected an integer")
        self.pos = m.end()
        return int(m.group())

    def monomial(self, index: dict[str, int], n: int) -> Exponent:
        """MONO = 1 | factor (* factor)*, factor = name(^int)?"""
        self.skip_ws()
        coords = [0] * n
        if self.take("1"):
            save = self.pos
            if self.take("*") and not self.peek("("):
                self.error("coefficient other than ±1: non-unital binomial")
            self.pos = save
            return tuple(coords)
        m = _INT.match(self.text, self.pos)
        if m:
            self.error("coefficient other than ±1: non-unital binomial")
        while True:
            name = self.name()
            if name not in index:
                self.error(f"undeclared variable {name!r}")
            e = 1
            if self.take("^"):
                e = self.integer()
            coords[index[name]] += e
            save = self.pos
            if not self.take("*"):
                break
            if self.peek("("):
                self.pos = save  # leave "* (" for the unit-sugar rule
                break
        return tuple(coords)


def parse_presentation(text: str) -> CongruencePresentation:
    """Parse a presentation file into its generators."""
    p = _Parser(text)
    p.expect("vars")
    names = [p.name()]
    while p.take(","):
        names.append(p.name())
    p.expect(";")
    if len(set(names)) != len(names):
        p.error("duplicate variable name")
    index = {name: i for i, name in enumerate(names)}
    n = len(names)

    pairs: list[tuple[Exponent, Exponent]] = []
    nils: list[Exponent] = []
    while not p.at_end():
        # Statement: MONO [* (U - 1)] [- MONO] ;
        p.skip_ws()
        start = p.pos
        lhs = p.monomial(index, n)
        if p.take("*"):
            # only reachable as MONO * ( ... ): plain products were consumed
            p.expect("(")
            u = p.monomial(index, n)
            p.expect("-")
            p.skip_ws()
            if not p.take("1"):
                p.pos = start
                p.error("unit sugar must have the form MONO * (U - 1)")
            p.expect(")")
            pairs.append((add(lhs, u), lhs))
        elif p.take("-"):
            rhs = p.monomial(index, n)
            pairs.append((lhs, rhs))
        else:
            nils.append(lhs)
        p.expect(";")
    return CongruencePresentation.make(n, names, pairs, nils)


def parse_presentation_file(path) -> CongruencePresentation:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_presentation(fh.read())


def serialize_presentation(pres: CongruencePresentation) -> str:
    """Inverse of parse_presentation up to generator normalization."""
    lines = [f"vars {', '.join(pres.names)};"]
    for a, b in pres.pairs:
        lines.append(f"{pres.monomial(a)} - {pres.monomial(b)};")
    for m in pres.nils:
        lines.append(f"{pres.monomial(m)};")
    return "\n".join(lines) + "\n"
