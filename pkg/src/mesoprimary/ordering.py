"""Monomial orders on N^n.

Only degree-compatible base orders are used (graded lexicographic with a
declared variable precedence); block elimination orders are layered on top
for restriction computations.  Both are total well-orders compatible with
addition, which is what completion needs for termination.
"""

from __future__ import annotations

from dataclasses import dataclass

Exponent = tuple[int, ...]


@dataclass(frozen=True)
class GrlexOrder:
    """Graded lexicographic order; ``precedence`` lists coordinate indices
    from most to least significant."""

    n: int
    precedence: tuple[int, ...]

    def __post_init__(self):
        if sorted(self.precedence) != list(range(self.n)):
            raise ValueError("precedence must be a permutation of coordinates")

    def key(self, v: Exponent):
        return (sum(v), tuple(v[i] for i in self.precedence))

    def gt(self, a: Exponent, b: Exponent) -> bool:
        return self.key(a) > self.key(b)

    def extend(self, extra: int) -> "GrlexOrder":
        """Append ``extra`` fresh coordinates with lowest precedence."""
        return GrlexOrder(self.n + extra,
                          self.precedence + tuple(range(self.n, self.n + extra)))


@dataclass(frozen=True)
class BlockOrder:
    """Elimination order: ``eliminated`` coordinates dominate the rest.

    Any monomial containing an eliminated coordinate is larger than any
    monomial free of them, so completed rules whose left side avoids the
    eliminated block have right sides that avoid it too.
    """

    n: int
    eliminated: tuple[int, ...]
    precedence: tuple[int, ...]

    def __post_init__(self):
        if sorted(self.precedence) != list(range(self.n)):
            raise ValueError("precedence must be a permutation of coordinates")
        elim = set(self.eliminated)
        object.__setattr__(self, "_hi", tuple(i for i in self.precedence if i in elim))
        object.__setattr__(self, "_lo", tuple(i for i in self.precedence if i not in elim))

    def key(self, v: Exponent):
        hi = tuple(v[i] for i in self._hi)
        lo = tuple(v[i] for i in self._lo)
        return (sum(hi), hi, sum(lo), lo)

    def gt(self, a: Exponent, b: Exponent) -> bool:
        return self.key(a) > self.key(b)


MonomialOrder = GrlexOrder | BlockOrder


def default_order(n: int) -> GrlexOrder:
    return GrlexOrder(n, tuple(range(n)))
