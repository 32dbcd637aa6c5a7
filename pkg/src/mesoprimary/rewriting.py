"""Completion of congruence presentations to confluent rewriting systems.

Generators are oriented into rules ``lhs -> rhs`` with ``lhs`` larger in a
degree-compatible monomial order; nil generators become ``lhs -> NIL``.
Critical-pair completion stabilizes by Dickson's lemma: every overlap of
two unital pair/nil rules is again a pair of monomials or a monomial, so
the procedure is Buchberger's algorithm specialized to exponent vectors.

The completed system answers the word problem exactly: two exponents are
congruent iff their normal forms agree (NIL counting as a class).  A class
is nil iff some rewrite reaches a multiple of a nil-staircase monomial.
"""

from __future__ import annotations

import heapq
import itertools
from dataclasses import dataclass

from .config import Bounds, DEFAULT_BOUNDS
from .errors import CompletionCapExceeded
from .ordering import BlockOrder, GrlexOrder, MonomialOrder, default_order
from .presentation import (CongruencePresentation, Exponent, add, leq, sub,
                           support, zero)


class _Nil:
    """Absorbing class label; not an exponent."""

    __slots__ = ()

    def __repr__(self):
        return "NIL"


NIL = _Nil()


def _mask(v: Exponent) -> int:
    m = 0
    for i, x in enumerate(v):
        if x:
            m |= 1 << i
    return m


def _lcm(a: Exponent, b: Exponent) -> Exponent:
    return tuple(max(x, y) for x, y in zip(a, b))


@dataclass(frozen=True)
class Rule:
    lhs: Exponent
    rhs: Exponent | None  # None encodes NIL
    peak: int             # degree peak of the justifying derivation

    @property
    def is_nil(self) -> bool:
        return self.rhs is None

    @property
    def excess(self) -> int:
        return self.peak - sum(self.lhs)


class NormalFormSystem:
    """Confluent terminating rewriting data for one congruence.

    Immutable after construction; all queries are pure and cached, so a
    system is safe to share across concurrent readers.
    """

    def __init__(self, presentation: CongruencePresentation,
                 order: MonomialOrder, rules: list[Rule], bounds: Bounds):
        self.presentation = presentation
        self.n = presentation.n
        self.names = presentation.names
        self.order = order
        self.bounds = bounds
        self.rules = tuple(sorted(rules, key=lambda r: (order.key(r.lhs), r.rhs is None,
                                                        order.key(r.rhs) if r.rhs is not None else ())))
        self._masks = tuple(_mask(r.lhs) for r in self.rules)
        self._nf_cache: dict[Exponent, Exponent | _Nil] = {}
        self._div_cache: dict[Exponent, "NormalFormSystem"] = {}

    # -- basic queries -----------------------------------------------------

    @property
    def pair_rules(self) -> list[Rule]:
        return [r for r in self.rules if not r.is_nil]

    @property
    def nil_staircase(self) -> tuple[Exponent, ...]:
        """Minimal exponents of the nil monomial ideal."""
        return tuple(r.lhs for r in self.rules if r.is_nil)

    @property
    def max_excess(self) -> int:
        return max((r.excess for r in self.rules), default=0)

    def reduce_once(self, v: Exponent):
        vm = _mask(v)
        for rule, m in zip(self.rules, self._masks):
            if m & vm == m and leq(rule.lhs, v):
                if rule.is_nil:
                    return NIL
                return add(sub(v, rule.lhs), rule.rhs)
        return None

    def normal_form(self, a: Exponent):
        """Canonical representative of a's class, or NIL."""
        v = tuple(a)
        seen: list[Exponent] = []
        while True:
            cached = self._nf_cache.get(v)
            if cached is not None:
                break
            step = self.reduce_once(v)
            if step is None:
                cached = v
                break
            if step is NIL:
                cached = NIL
                break
            seen.append(v)
            v = step
        for u in seen:
            self._nf_cache[u] = cached
        self._nf_cache[v] = cached
        return cached

    def is_nil(self, a: Exponent) -> bool:
        return self.normal_form(a) is NIL

    def equivalent(self, a: Exponent, b: Exponent) -> bool:
        na, nb = self.normal_form(a), self.normal_form(b)
        return na is nb if (na is NIL or nb is NIL) else na == nb

    def divides(self, b: Exponent, a: Exponent, bounds: Bounds | None = None) -> bool:
        """Ideal membership in the quotient: a-bar lies in <b-bar>.

        Decided by completing the presentation augmented with b as a nil
        generator and testing nil-ness of a.
        """
        aug = self.with_nil(b, bounds)
        return aug.is_nil(a)

    def with_nil(self, b: Exponent, bounds: Bounds | None = None) -> "NormalFormSystem":
        key = self.normal_form(b)
        if key is NIL:
            return self
        cached = self._div_cache.get(key)
        if cached is None:
            pres = CongruencePresentation.make(
                self.n, self.names, self.presentation.pairs,
                self.presentation.nils + (key,))
            cached = complete(pres, self.order, bounds or self.bounds)
            self._div_cache[key] = cached
        return cached

    def rule_bound(self, coords=None) -> tuple[int, ...]:
        """Componentwise max of rule sides over the given coordinates."""
        coords = range(self.n) if coords is None else coords
        out = []
        for i in coords:
            best = 0
            for r in self.rules:
                best = max(best, r.lhs[i])
                if r.rhs is not None:
                    best = max(best, r.rhs[i])
            out.append(best)
        return tuple(out)

    def as_presentation(self) -> CongruencePresentation:
        """Canonical presentation: the completed rules themselves."""
        pairs = [(r.lhs, r.rhs) for r in self.pair_rules]
        return CongruencePresentation.make(self.n, self.names, pairs,
                                           self.nil_staircase)


def complete(pres: CongruencePresentation,
             order: MonomialOrder | None = None,
             bounds: Bounds = DEFAULT_BOUNDS) -> NormalFormSystem:
    """Critical-pair completion of a presentation.

    Returns a confluent, terminating, interreduced system.  Deterministic
    for a fixed presentation and order.
    """
    order = order or default_order(pres.n)
    builder = _Completion(pres.n, order, bounds)
    for a, b in pres.pairs:
        builder.push_pair(a, b, max(sum(a), sum(b)))
    for m in pres.nils:
        builder.push_nil(m, sum(m))
    builder.run()
    return NormalFormSystem(pres, order, builder.rules(), bounds)


class _Completion:
    """Worklist state for one completion run."""

    def __init__(self, n: int, order: MonomialOrder, bounds: Bounds):
        self.n = n
        self.order = order
        self.bounds = bounds
        self._rules: dict[Exponent, Rule] = {}
        self._rmasks: dict[Exponent, int] = {}
        self._queue: list = []
        self._tick = itertools.count()
        self._added = 0

    # queue entries: (sortkey, tick, a, b_or_None, peak)
    def push_pair(self, a: Exponent, b: Exponent, peak: int):
        key = max(self.order.key(a), self.order.key(b))
        heapq.heappush(self._queue, (key, next(self._tick), a, b, peak))

    def push_nil(self, m: Exponent, peak: int):
        heapq.heappush(self._queue, (self.order.key(m), next(self._tick), m, None, peak))

    def rules(self) -> list[Rule]:
        return list(self._rules.values())

    # -- reduction against the current (possibly incomplete) rule set ------

    def _reduce(self, v: Exponent, peak: int):
        """Return (normal form or NIL, updated derivation peak)."""
        rules = self._rules
        masks = self._rmasks
        while True:
            vm = _mask(v)
            hit = None
            for lhs, m in masks.items():
                if m & vm == m and leq(lhs, v):
                    hit = rules[lhs]
                    break
            if hit is None:
                return v, peak
            peak = max(peak, sum(v) - sum(hit.lhs) + hit.peak)
            if hit.is_nil:
                return NIL, peak
            v = add(sub(v, hit.lhs), hit.rhs)

    def _process(self, a, b, peak):
        a, peak = self._reduce(a, peak)
        if b is None:
            b = NIL
        elif b is not NIL:
            b, peak = self._reduce(b, peak)
        if a is NIL and b is NIL:
            return
        if a is NIL or b is NIL:
            survivor = b if a is NIL else a
            self._add_rule(Rule(survivor, None, max(peak, sum(survivor))))
            return
        if a == b:
            return
        if self.order.gt(b, a):
            a, b = b, a
        self._add_rule(Rule(a, b, max(peak, sum(a))))

    def _add_rule(self, rule: Rule):
        self._added += 1
        if self._added > self.bounds.completion_cap:
            raise CompletionCapExceeded(
                f"completion cap exceeded ({self.bounds.completion_cap} rules)")
        # Interreduce: displaced rules re-enter the queue as plain pairs.
        displaced = []
        for lhs, other in self._rules.items():
            if leq(rule.lhs, lhs):
                displaced.append(lhs)
            elif other.rhs is not None and leq(rule.lhs, other.rhs):
                displaced.append(lhs)
        for lhs in displaced:
            other = self._rules.pop(lhs)
            self._rmasks.pop(lhs)
            if other.is_nil:
                self.push_nil(other.lhs, other.peak)
            else:
                self.push_pair(other.lhs, other.rhs, other.peak)
        existing = list(self._rules.values())
        self._rules[rule.lhs] = rule
        self._rmasks[rule.lhs] = _mask(rule.lhs)
        for other in existing:
            self._critical(rule, other)

    def _critical(self, r1: Rule, r2: Rule):
        if _mask(r1.lhs) & _mask(r2.lhs) == 0:
            return  # product criterion: disjoint overlaps resolve
        big = _lcm(r1.lhs, r2.lhs)
        peak = sum(big) + max(r1.excess, r2.excess)
        left = None if r1.is_nil else add(sub(big, r1.lhs), r1.rhs)
        right = None if r2.is_nil else add(sub(big, r2.lhs), r2.rhs)
        if left is None and right is None:
            return
        if left is None:
            self.push_nil(right, peak)
        elif right is None:
            self.push_nil(left, peak)
        else:
            self.push_pair(left, right, peak)

    def run(self):
        while self._queue:
            _, _, a, b, peak = heapq.heappop(self._queue)
            self._process(a, b, peak)
