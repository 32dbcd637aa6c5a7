"""Localization of congruences at monoid primes.

For a prime P given by a coordinate subset S, the localization inverts the
coordinates outside S.  Inversion is modeled exactly: each inverted
coordinate u gets a fresh inverse coordinate u' with the relation
u + u' ~ 0, and the extended presentation is completed.  The localized
word problem, divisibility, nil testing and unit orbits are then ordinary
queries against extended systems; nothing is approximated.

Stabilizers of classes under the unit group are computed as lattices and
certified exact: candidate generators come from completed rules with pure
unit displacement, collisions found by a bounded orbit walk extend the
candidate, and a final certificate either proves the lattice is the full
stabilizer (coset enumeration when the quotient is finite, a normal-form
window argument for free directions) or the computation fails loudly.
"""

from __future__ import annotations

from dataclasses import dataclass

from .config import Bounds, DEFAULT_BOUNDS
from .errors import (MixedPrimesError, NilElementError, StabilizerNotCertified)
from .lattices import Lattice, cone_has_nonzero_nonneg, intersect_all_lattices
from .ordering import BlockOrder, GrlexOrder
from .presentation import CongruencePresentation, Exponent, support, unit, zero
from .rewriting import NIL, NormalFormSystem, complete

LocalExponent = tuple[int, ...]  # length n; negatives allowed on inverted coords


@dataclass(frozen=True)
class MonoidPrime:
    """The monoid prime P_S = {v : v_i > 0 for some i in S}."""

    n: int
    supp: frozenset[int]

    @staticmethod
    def of(n: int, indices) -> "MonoidPrime":
        idx = frozenset(indices)
        if any(i < 0 or i >= n for i in idx):
            raise ValueError("prime support out of range")
        return MonoidPrime(n, idx)

    @property
    def generators(self) -> list[int]:
        return sorted(self.supp)

    @property
    def complement(self) -> list[int]:
        return [i for i in range(self.n) if i not in self.supp]

    def contains(self, v: Exponent) -> bool:
        return any(v[i] > 0 for i in self.supp)

    def label(self, names) -> str:
        return "{" + ",".join(names[i] for i in sorted(self.supp)) + "}"


@dataclass(frozen=True)
class PrimeCongruence:
    """A monoid prime together with a unit lattice in Z^(complement).

    As a relation on N^n: a ~ b iff both supports meet S, or neither does
    and the complement parts differ by a lattice element.
    """

    prime: MonoidPrime
    lattice: Lattice

    def relates(self, a: Exponent, b: Exponent) -> bool:
        ha, hb = self.prime.contains(a), self.prime.contains(b)
        if ha or hb:
            return ha and hb
        comp = self.prime.complement
        return self.lattice.contains(tuple(a[i] - b[i] for i in comp))

    @property
    def is_total(self) -> bool:
        return not self.prime.supp and self.lattice.rank == self.lattice.d


def refines(pc1: PrimeCongruence, pc2: PrimeCongruence) -> bool:
    """Relation-level refinement: every pc1-related pair is pc2-related."""
    if pc1.prime.n != pc2.prime.n:
        raise ValueError("ambient dimension mismatch")
    if pc2.is_total:
        return True
    s1, s2 = pc1.prime.supp, pc2.prime.supp
    if s1 and not s1 <= s2:
        return False
    comp1 = pc1.prime.complement
    comp2 = pc2.prime.complement
    # split K1 by its projection to the coordinates of S2 \ S1
    mid = [i for i, c in enumerate(comp1) if c in s2]
    low = [i for i, c in enumerate(comp1) if c not in s2]
    axis_low = Lattice.from_vectors(
        len(comp1), [unit(len(comp1), i) for i in low])
    k1_low = pc1.lattice.intersect(axis_low) if low else Lattice.zero(len(comp1))
    # (a) the part of K1 invisible to S2 must refine K2
    pos = {c: j for j, c in enumerate(comp2)}
    for row in k1_low.basis:
        projected = [0] * len(comp2)
        for i, c in enumerate(comp1):
            if row[i]:
                projected[pos[c]] = row[i]
        if not pc2.lattice.contains(tuple(projected)):
            return False
    # (b) no K1 vector may be one-signed and nonzero on S2 \ S1
    if mid and cone_has_nonzero_nonneg(list(pc1.lattice.basis), mid):
        return False
    return True


def prime_congruences_equal(pc1: PrimeCongruence, pc2: PrimeCongruence) -> bool:
    return refines(pc1, pc2) and refines(pc2, pc1)


def common_refinement_same_prime(pcs: list[PrimeCongruence]) -> PrimeCongruence:
    """Greatest lower bound of prime congruences over one prime."""
    if not pcs:
        raise ValueError("empty testimony has no common refinement")
    prime = pcs[0].prime
    if any(pc.prime != prime for pc in pcs):
        raise MixedPrimesError("mixed primes in common refinement")
    return PrimeCongruence(prime, intersect_all_lattices([pc.lattice for pc in pcs]))


class LocalizedContext:
    """Exact localized word problem and unit-group data for one prime."""

    def __init__(self, base: NormalFormSystem, prime: MonoidPrime,
                 bounds: Bounds | None = None):
        if prime.n != base.n:
            raise ValueError("prime does not match the ambient monoid")
        self.base = base
        self.prime = prime
        self.bounds = bounds or base.bounds
        self.units = prime.complement          # inverted original coordinates
        self.d = len(self.units)
        n, d = base.n, self.d
        self.m = n + d
        ext_names = base.names + tuple(f"{base.names[u]}~" for u in self.units)
        pairs = [(a + (0,) * d, b + (0,) * d) for a, b in base.presentation.pairs]
        for k, u in enumerate(self.units):
            lhs = [0] * self.m
            lhs[u] = 1
            lhs[n + k] = 1
            pairs.append((tuple(lhs), zero(self.m)))
        nils = [m + (0,) * d for m in base.presentation.nils]
        pres = CongruencePresentation.make(self.m, ext_names, pairs, nils)
        order = base.order
        if isinstance(order, GrlexOrder):
            ext_order = order.extend(d)
        else:
            ext_order = GrlexOrder(self.m, tuple(range(self.m)))
        self.ext = complete(pres, ext_order, self.bounds)
        self._orbit_sys: NormalFormSystem | None = None
        self._stab_cache: dict = {}
        self._delta_cache: dict = {}

    # -- coordinate plumbing ------------------------------------------------

    def lift(self, a: LocalExponent) -> Exponent:
        """Embed a localized exponent into the extended nonnegative model."""
        if len(a) != self.base.n:
            raise ValueError("exponent of wrong length")
        for i in self.prime.supp:
            if a[i] < 0:
                raise ValueError("negative exponent on a non-inverted coordinate")
        out = list(a) + [0] * self.d
        for k, u in enumerate(self.units):
            if a[u] < 0:
                out[u] = 0
                out[self.base.n + k] = -a[u]
        return tuple(out)

    def unlift(self, v: Exponent) -> LocalExponent:
        """Collapse an extended exponent back to a localized one."""
        out = list(v[:self.base.n])
        for k, u in enumerate(self.units):
            out[u] -= v[self.base.n + k]
        return tuple(out)

    def shift(self, a: LocalExponent, delta) -> LocalExponent:
        """Translate a by a unit-group element delta in Z^units."""
        out = list(a)
        for k, u in enumerate(self.units):
            out[u] += delta[k]
        return tuple(out)

    # -- word problem --------------------------------------------------------

    def class_nf(self, a: LocalExponent):
        return self.ext.normal_form(self.lift(a))

    def equivalent(self, a: LocalExponent, b: LocalExponent) -> bool:
        na, nb = self.class_nf(a), self.class_nf(b)
        return na is nb if (na is NIL or nb is NIL) else na == nb

    def is_nil(self, a: LocalExponent) -> bool:
        return self.class_nf(a) is NIL

    def divides(self, b: LocalExponent, a: LocalExponent) -> bool:
        """Green's preorder: the class of a lies in the ideal of b."""
        return self.ext.divides(self.lift(b), self.lift(a))

    def greens_equal(self, a: LocalExponent, b: LocalExponent) -> bool:
        if self.is_nil(a) or self.is_nil(b):
            return self.is_nil(a) and self.is_nil(b)
        return self.divides(b, a) and self.divides(a, b)

    def strictly_below(self, a: LocalExponent, b: LocalExponent) -> bool:
        """a's class strictly divides b's in the localized Green preorder."""
        return self.divides(a, b) and not self.divides(b, a)

    @property
    def orbit_sys(self) -> NormalFormSystem:
        """Extended system with the unit action collapsed (orbit classes)."""
        if self._orbit_sys is None:
            pairs = list(self.ext.presentation.pairs)
            for k, u in enumerate(self.units):
                pairs.append((unit(self.m, u), zero(self.m)))
                pairs.append((unit(self.m, self.base.n + k), zero(self.m)))
            pres = CongruencePresentation.make(
                self.m, self.ext.names, pairs, self.ext.presentation.nils)
            self._orbit_sys = complete(pres, self.ext.order, self.bounds)
        return self._orbit_sys

    def orbit_equal(self, a: LocalExponent, b: LocalExponent) -> bool:
        """Same class up to translation by a unit-group element."""
        na = self.orbit_sys.normal_form(self.lift(a))
        nb = self.orbit_sys.normal_form(self.lift(b))
        return na is nb if (na is NIL or nb is NIL) else na == nb

    def find_delta(self, a: LocalExponent, b: LocalExponent):
        """Concrete unit delta with a + delta ~ b, or None.

        Only called after orbit_equal confirms existence; bounded walk, so
        a miss raises rather than guessing.
        """
        target = self.class_nf(b)
        if target is NIL:
            raise NilElementError("orbit walk from a nil class")
        key = (self.class_nf(a), target)
        if key in self._delta_cache:
            return self._delta_cache[key]
        radius = self.bounds.orbit_radius
        start = (0,) * self.d
        seen = {start}
        frontier = [start]
        found = None
        while frontier and found is None:
            nxt = []
            for delta in frontier:
                nf = self.class_nf(self.shift(a, delta))
                if nf == target:
                    found = delta
                    break
                if sum(abs(x) for x in delta) >= radius:
                    continue
                for k in range(self.d):
                    for sgn in (1, -1):
                        cand = tuple(x + (sgn if i == k else 0)
                                     for i, x in enumerate(delta))
                        if cand not in seen:
                            seen.add(cand)
                            nxt.append(cand)
            frontier = nxt
        if found is None:
            raise StabilizerNotCertified(
                "orbit walk exhausted without reaching the target class")
        self._delta_cache[key] = found
        return found

    # -- stabilizers ----------------------------------------------------------

    def stabilizer(self, q: LocalExponent) -> Lattice:
        """The unit lattice {delta : q + delta ~ q}, exact.

        Computed from the colon congruence by the class monomial of q: the
        extended system is intersected with the principal monomial ideal at
        q (tag-variable trick, all generators stay unital), the quotient by
        the monomial is re-presented, and a block completion eliminating
        the non-unit coordinates exposes the unit-supported rules.  Their
        displacements generate exactly the stabilizer.  A bounded orbit
        walk then double-checks the result and refuses to return on any
        disagreement.
        """
        nf = self.class_nf(q)
        if nf is NIL:
            raise NilElementError("stabilizer of a nil class")
        if self.d == 0:
            return Lattice.zero(0)
        cached = self._stab_cache.get(nf)
        if cached is not None:
            return cached
        lat = self._stabilizer_exact(nf)
        self._stab_verify(q, lat)
        self._stab_cache[nf] = lat
        return lat

    def _pi(self, v: Exponent):
        """Unit-group displacement of an extended exponent."""
        n = self.base.n
        return tuple(v[u] - v[n + k] for k, u in enumerate(self.units))

    def _stabilizer_exact(self, q_nf: Exponent) -> Lattice:
        m = self.m
        tag = m  # fresh tag variable, highest elimination block
        pairs = []
        nils = []
        for r in self.ext.rules:
            lhs = r.lhs + (1,)
            if r.is_nil:
                nils.append(lhs)
            else:
                pairs.append((lhs, r.rhs + (1,)))
        pairs.append((q_nf + (0,), q_nf + (1,)))
        names = self.ext.names + ("#",)
        pres = CongruencePresentation.make(m + 1, names, pairs, nils)
        order = BlockOrder(m + 1, (tag,), (tag,) + tuple(range(m)))
        inter = complete(pres, order, self.bounds)
        colon_pairs = []
        colon_nils = []
        for r in inter.rules:
            if r.lhs[tag] or (r.rhs is not None and r.rhs[tag]):
                continue
            lhs = r.lhs[:m]
            if any(x < y for x, y in zip(lhs, q_nf)):
                continue  # not a multiple of the class monomial
            shifted = tuple(x - y for x, y in zip(lhs, q_nf))
            if r.is_nil:
                colon_nils.append(shifted)
            else:
                rhs = r.rhs[:m]
                if any(x < y for x, y in zip(rhs, q_nf)):
                    continue
                colon_pairs.append((shifted, tuple(x - y for x, y in zip(rhs, q_nf))))
        colon = CongruencePresentation.make(m, self.ext.names, colon_pairs, colon_nils)
        non_unit = tuple(sorted(self.prime.supp))
        unit_block = tuple(self.units) + tuple(range(self.base.n, m))
        order2 = BlockOrder(m, non_unit, non_unit + unit_block)
        local = complete(colon, order2, self.bounds)
        gens = []
        unit_set = set(unit_block)
        for r in local.pair_rules:
            if support(r.lhs) <= unit_set and support(r.rhs) <= unit_set:
                disp = tuple(a - b for a, b in zip(self._pi(r.lhs), self._pi(r.rhs)))
                if any(disp):
                    gens.append(disp)
        return Lattice.from_vectors(self.d, gens)

    def _stab_verify(self, q: LocalExponent, lat: Lattice):
        """Certificate pass: generators must stabilize q and a bounded
        orbit walk must not reveal any collision outside the lattice."""
        for g in lat.basis:
            if not self.equivalent(q, self.shift(q, g)):
                raise StabilizerNotCertified(
                    "computed stabilizer generator does not stabilize")
        radius = min(4, self.bounds.orbit_radius)
        start = lat.reduce((0,) * self.d)
        seen_class = {self.class_nf(self.shift(q, start)): start}
        seen = {start}
        frontier = [start]
        while frontier:
            nxt = []
            for delta in frontier:
                if sum(abs(x) for x in delta) >= radius:
                    continue
                for k in range(self.d):
                    for sgn in (1, -1):
                        cand = tuple(x + (sgn if i == k else 0)
                                     for i, x in enumerate(delta))
                        cand = lat.reduce(cand)
                        if cand in seen:
                            continue
                        seen.add(cand)
                        if len(seen) > self.bounds.orbit_nodes:
                            return
                        nf = self.class_nf(self.shift(q, cand))
                        other = seen_class.get(nf)
                        if other is not None and other != cand:
                            raise StabilizerNotCertified(
                                "orbit walk found a class the lattice misses")
                        seen_class[nf] = cand
                        nxt.append(cand)
            frontier = nxt

    # -- prime congruences ----------------------------------------------------

    def prime_congruence_at(self, q: LocalExponent) -> PrimeCongruence:
        if self.is_nil(q):
            raise NilElementError("nil element has no prime congruence")
        return PrimeCongruence(self.prime, self.stabilizer(q))


def localize(sys: NormalFormSystem, prime: MonoidPrime,
             bounds: Bounds | None = None) -> LocalizedContext:
    """Build (and cache on the system) the localized context for a prime."""
    cache = getattr(sys, "_localize_cache", None)
    if cache is None:
        cache = {}
        sys._localize_cache = cache
    key = (prime.supp, bounds)
    if key not in cache:
        cache[key] = LocalizedContext(sys, prime, bounds)
    return cache[key]
