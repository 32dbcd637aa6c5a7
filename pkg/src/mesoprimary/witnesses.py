"""Witness taxonomy: aides, key witnesses, cogenerators, testimony,
suspicion, true witnesses, and the associated prime data they induce.

All aide conditions are decided against the localized quotient: an aide q
for w and a prime generator p needs (i) distinct classes, (ii) equal
classes after adding p, (iii) q's class not strictly below w's in the
localized Green preorder.  The nil class is allowed as an aide exactly
when w + p is nil; a key aide may be nil only when every translate is.

Enumeration runs over a finite region of unit-orbit seeds whose prime-part
is bounded by the completed rules; a margin shell is classified as well
and any genuinely new witness class there fails certification loudly.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .config import Bounds
from .errors import PreconditionError, RegionNotCertified, SeparatorSearchExhausted
from .lattices import Lattice, affine_intersection, intersect_all_lattices, lattice_equal
from .localization import (LocalizedContext, MonoidPrime, PrimeCongruence,
                           common_refinement_same_prime, localize,
                           prime_congruences_equal)
from .presentation import Exponent, add, unit, zero
from .rewriting import NIL, NormalFormSystem


@dataclass
class WitnessRecord:
    """Classification of one Green's class in the localized quotient."""

    element: tuple[int, ...]             # orbit-seed representative
    prime: MonoidPrime
    aides: dict[int, object]             # generator index -> aide exponent or NIL
    key_aides: list                      # concrete key aides (exponents or NIL)
    is_witness: bool = False
    is_key: bool = False
    is_cogenerator: bool = False
    is_maximal: bool = False
    is_true: bool = False
    suspicious: bool = False
    testimony: tuple[PrimeCongruence, ...] = ()
    prime_congruence: PrimeCongruence | None = None
    true_via: str | None = None

    def tier(self, name: str) -> bool:
        return {"witness": self.is_witness, "key": self.is_key,
                "true": self.is_true, "cogenerator": self.is_cogenerator}[name]


def is_aide(ctx: LocalizedContext, q, w, i: int) -> bool:
    """Direct test of the aide conditions for a given candidate q.

    ``q`` may be NIL, which is an aide exactly when w + p is nil.
    """
    if i not in ctx.prime.supp:
        raise PreconditionError("index not in prime")
    p = unit(ctx.base.n, i)
    wp = add(w, p)
    if q is NIL:
        return ctx.is_nil(wp)
    if ctx.is_nil(q):
        return False
    if ctx.equivalent(q, w):
        return False
    qp = add(q, p)
    if ctx.is_nil(wp) or ctx.is_nil(qp):
        if not (ctx.is_nil(wp) and ctx.is_nil(qp)):
            return False
    elif not ctx.equivalent(qp, wp):
        return False
    return not ctx.strictly_below(q, w)


class WitnessScan:
    """Witness enumeration and classification for one localized prime."""

    def __init__(self, ctx: LocalizedContext, bounds: Bounds | None = None):
        self.ctx = ctx
        self.bounds = bounds or ctx.bounds
        self.gens = ctx.prime.generators
        self._records: dict = {}
        self._aide_memo: dict = {}
        self._candidates: list | None = None
        self._witnesses: list | None = None
        self._seed_box = self._compute_seed_box()
        self.seeds = self._collect_seeds(self._seed_box)

    # -- region ---------------------------------------------------------------

    def _compute_seed_box(self) -> dict[int, int]:
        bound = {}
        for i in self.gens:
            best = 0
            for r in self.ctx.ext.rules:
                best = max(best, r.lhs[i])
                if r.rhs is not None:
                    best = max(best, r.rhs[i])
            bound[i] = best
        return bound

    def _collect_seeds(self, box: dict[int, int], extra: int = 0):
        """Distinct non-nil classes with prime-part inside the box, as
        orbit-seed representatives (unit coordinates zero)."""
        n = self.ctx.base.n
        ranges = [range(box[i] + 1 + extra) if i in box else range(1)
                  for i in range(n)]
        seen = {}
        for point in itertools.product(*ranges):
            if any(point[i] for i in range(n) if i not in box):
                continue
            nf = self.ctx.class_nf(point)
            if nf is NIL or nf in seen:
                continue
            seen[nf] = point
        return [seen[k] for k in sorted(seen, key=self.ctx.ext.order.key)]

    def aide_candidates(self):
        """Seed pool for aide searches: witness box plus one extra layer."""
        if self._candidates is None:
            self._candidates = self._collect_seeds(
                self._seed_box, extra=1 + self.bounds.region_margin)
        return self._candidates

    # -- per-class classification ---------------------------------------------

    def _aide_for(self, w, i: int):
        """A concrete aide for generator i, or NIL, or None."""
        ctx = self.ctx
        memo_key = (ctx.class_nf(w), i)
        if memo_key in self._aide_memo:
            return self._aide_memo[memo_key]
        result = self._aide_search(w, i)
        self._aide_memo[memo_key] = result
        return result

    def _aide_search(self, w, i: int):
        ctx = self.ctx
        p = unit(ctx.base.n, i)
        wp = add(w, p)
        if ctx.is_nil(wp):
            return NIL
        k_wp = ctx.stabilizer(wp)
        k_w = ctx.stabilizer(w)
        for s in self.aide_candidates():
            sp = add(s, p)
            if ctx.is_nil(sp) or not ctx.orbit_equal(sp, wp):
                continue
            if ctx.strictly_below(s, w):
                continue
            same_orbit = ctx.orbit_equal(s, w)
            if same_orbit and lattice_equal(k_wp, k_w):
                continue
            delta = ctx.find_delta(sp, wp)
            q = ctx.shift(s, delta)
            if ctx.equivalent(q, w):
                kappa = next(v for v in k_wp.basis if not k_w.contains(v))
                q = ctx.shift(q, kappa)
            return q
        return None

    def _key_aides_for(self, w):
        """Concrete key aides (one per viable seed orbit), possibly [NIL]."""
        ctx = self.ctx
        n = ctx.base.n
        translates = [(i, add(w, unit(n, i))) for i in self.gens]
        nil_gens = [i for i, wp in translates if ctx.is_nil(wp)]
        live = [(i, wp) for i, wp in translates if not ctx.is_nil(wp)]
        if not live:
            return [NIL]
        k_w = ctx.stabilizer(w)
        found = []
        for s in self.aide_candidates():
            ok = all(ctx.is_nil(add(s, unit(n, i))) for i in nil_gens)
            if not ok or ctx.strictly_below(s, w):
                continue
            cosets = []
            for i, wp in live:
                sp = add(s, unit(n, i))
                if ctx.is_nil(sp) or not ctx.orbit_equal(sp, wp):
                    ok = False
                    break
                delta = ctx.find_delta(sp, wp)
                cosets.append((delta, ctx.stabilizer(wp)))
            if not ok:
                continue
            meet = affine_intersection(cosets)
            if meet is None:
                continue
            delta, joint = meet
            if ctx.orbit_equal(s, w):
                # solutions through w's own orbit must dodge w's class
                kappa = next((v for v in joint.basis if not k_w.contains(v)), None)
                if kappa is None:
                    continue
                base = ctx.find_delta(s, w)
                found.append(ctx.shift(s, tuple(a + b for a, b in zip(base, kappa))))
            else:
                q = ctx.shift(s, delta)
                if ctx.equivalent(q, w):
                    continue
                found.append(q)
        return found

    def classify(self, w, witness_set=None) -> WitnessRecord:
        """Full witness record for the class of w."""
        ctx = self.ctx
        nf = ctx.class_nf(w)
        if nf is NIL:
            raise PreconditionError("nil element cannot be classified")
        cached = self._records.get(nf)
        if cached is not None:
            return cached
        aides = {i: self._aide_for(w, i) for i in self.gens}
        rec = WitnessRecord(element=w, prime=ctx.prime, aides=aides, key_aides=[])
        rec.is_witness = (all(a is not None for a in aides.values())
                          if self.gens else True)
        if rec.is_witness:
            rec.key_aides = self._key_aides_for(w)
        rec.is_key = bool(rec.key_aides) if self.gens else rec.is_witness
        rec.is_cogenerator = rec.is_key and all(
            ctx.is_nil(add(w, unit(ctx.base.n, i))) for i in self.gens)
        rec.prime_congruence = ctx.prime_congruence_at(w)
        testimony = []
        for i in self.gens:
            wp = add(w, unit(ctx.base.n, i))
            if not ctx.is_nil(wp):
                testimony.append(ctx.prime_congruence_at(wp))
        rec.testimony = tuple(testimony)
        if testimony:
            meet = common_refinement_same_prime(list(testimony))
            rec.suspicious = lattice_equal(meet.lattice, rec.prime_congruence.lattice)
        else:
            rec.suspicious = False
        if witness_set is None:
            witness_set = self.witness_classes()
        rec.is_maximal = rec.is_witness and not any(
            ctx.strictly_below(w, other) for other in witness_set
            if not ctx.equivalent(other, w))
        rec.is_true = rec.is_key and (rec.is_maximal or not rec.suspicious)
        rec.true_via = self._true_via(rec)
        self._records[nf] = rec
        return rec

    def _true_via(self, rec: WitnessRecord) -> str:
        if not rec.is_key:
            return "not_true"
        ctx = self.ctx
        if any(a is NIL for a in rec.key_aides):
            return "via_key_aide_nil"
        if any(a is not NIL and ctx.orbit_equal(a, rec.element)
               for a in rec.key_aides):
            return "via_key_aide_greens"
        if rec.is_maximal:
            return "via_maximality"
        return "not_true"

    # -- enumeration ----------------------------------------------------------

    def witness_classes(self):
        """Seeds of all witness classes in the region (plus shell check)."""
        if self._witnesses is not None:
            return self._witnesses
        witnesses = []
        for s in self.seeds:
            if not self.gens or all(self._aide_for(s, i) is not None
                                    for i in self.gens):
                witnesses.append(s)
        self._witnesses = witnesses
        # shell certification: a genuinely new witness class just outside the
        # region means the bound was too tight
        margin = self.bounds.region_margin
        shell = [s for s in self._collect_seeds(self._seed_box, extra=margin)
                 if any(s[i] > self._seed_box[i] for i in self.gens)]
        interior_nfs = {self.ctx.class_nf(s) for s in self.seeds}
        for s in shell:
            if self.ctx.class_nf(s) in interior_nfs:
                continue
            if any(self.ctx.greens_equal(s, w) for w in witnesses):
                continue
            if self.gens and all(self._aide_for(s, i) is not None
                                 for i in self.gens):
                i = next(i for i in self.gens if s[i] > self._seed_box[i])
                self._witnesses = None
                raise RegionNotCertified(
                    "witness region not certified finite", self.ctx.base.names[i])
        return witnesses

    def records(self, tier: str = "witness") -> list[WitnessRecord]:
        """One record per Green's class meeting the tier, ordered by the
        monomial order on normal forms."""
        witnesses = self.witness_classes()
        greens_reps = []
        for w in witnesses:
            if not any(self.ctx.greens_equal(w, r) for r in greens_reps):
                greens_reps.append(w)
        out = []
        for w in greens_reps:
            rec = self.classify(w, witness_set=witnesses)
            if rec.tier(tier):
                out.append(rec)
        return out


def enumerate_witnesses(sys: NormalFormSystem, prime: MonoidPrime,
                        tier: str = "witness",
                        bounds: Bounds | None = None) -> list[WitnessRecord]:
    ctx = localize(sys, prime, bounds)
    return _scan(ctx, bounds).records(tier)


def _scan(ctx: LocalizedContext, bounds: Bounds | None = None) -> WitnessScan:
    cached = getattr(ctx, "_witness_scan", None)
    if cached is None:
        cached = WitnessScan(ctx, bounds)
        ctx._witness_scan = cached
    return cached


def classify_witness(ctx: LocalizedContext, w,
                     bounds: Bounds | None = None) -> WitnessRecord:
    scan = _scan(ctx, bounds)
    return scan.classify(w, witness_set=scan.witness_classes())


def is_maximal_witness(ctx: LocalizedContext, w, witness_set) -> bool:
    return not any(ctx.strictly_below(w, other) for other in witness_set
                   if not ctx.equivalent(other, w))


def true_witness_equiv_check(ctx: LocalizedContext, w) -> str:
    """Which clause makes w a true witness (or ``not_true``)."""
    rec = classify_witness(ctx, w)
    return rec.true_via or "not_true"


def associated_primes(sys: NormalFormSystem,
                      bounds: Bounds | None = None) -> list[MonoidPrime]:
    """Primes with at least one key witness."""
    out = []
    n = sys.n
    for size in range(n + 1):
        for combo in itertools.combinations(range(n), size):
            prime = MonoidPrime.of(n, combo)
            ctx = localize(sys, prime, bounds)
            if ctx.is_nil(zero(n)):
                continue  # localization collapsed everything
            if _scan(ctx, bounds).records("key"):
                out.append(prime)
    return out


def associated_prime_congruences(sys: NormalFormSystem, tier: str = "key",
                                 bounds: Bounds | None = None
                                 ) -> list[PrimeCongruence]:
    """Prime congruences at key (or true) witnesses, deduplicated."""
    out: list[PrimeCongruence] = []
    for prime in associated_primes(sys, bounds):
        ctx = localize(sys, prime, bounds)
        for rec in _scan(ctx, bounds).records(tier):
            pc = rec.prime_congruence
            if not any(prime_congruences_equal(pc, seen) for seen in out):
                out.append(pc)
    return out


def separator_witness(sys: NormalFormSystem, a: Exponent, b: Exponent,
                      bounds: Bounds | None = None):
    """A prime P, translate u and orientation making one element a key
    witness with the other (translated) as key aide."""
    bounds = bounds or sys.bounds
    if sys.equivalent(a, b):
        raise PreconditionError("elements are related")
    n = sys.n
    box = bounds.separator_box
    translates = sorted(itertools.product(range(box + 1), repeat=n),
                        key=lambda u: (sum(u), u))
    primes = sorted((frozenset(c) for size in range(n + 1)
                     for c in itertools.combinations(range(n), size)),
                    key=lambda s: (-len(s), sorted(s)))
    for supp in primes:
        prime = MonoidPrime.of(n, supp)
        ctx = localize(sys, prime, bounds)
        for u in translates:
            for (w0, q0) in ((a, b), (b, a)):
                w, q = add(w0, u), add(q0, u)
                if ctx.is_nil(w):
                    continue
                if _is_key_aide_pair(ctx, w, q):
                    return prime, u, (w, q)
    raise SeparatorSearchExhausted("separator search exhausted")


def _is_key_aide_pair(ctx: LocalizedContext, w, q) -> bool:
    """Is q (or the nil class, when q is nil) a key aide for w?"""
    gens = ctx.prime.generators
    if not gens:
        return False
    n = ctx.base.n
    if ctx.is_nil(q):
        return all(ctx.is_nil(add(w, unit(n, i))) for i in gens)
    return all(is_aide(ctx, q, w, i) for i in gens)
