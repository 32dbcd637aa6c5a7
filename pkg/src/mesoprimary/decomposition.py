"""Coprincipal components, mesoprimary decompositions, verification,
redundancy analysis, and cogenerator coverage reports.

A coprincipal component at a witness w for a prime P collapses every
class whose ideal misses w's class to nil and identifies divisor classes
that differ by a stabilizer element of w.  Decompositions are common
refinements of such components over the key (or true) witnesses of all
associated primes; verification checks refinement generator by generator
and separation through an exact intersection congruence, falling back to
a bounded region check when the intersection completion is capped.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .config import Bounds
from .errors import (BoundExceeded, CompletionCapExceeded, EmbeddedPrimeError,
                     PreconditionError)
from .intersection import intersection_presentation
from .lattices import lattice_equal
from .localization import (LocalizedContext, MonoidPrime, PrimeCongruence,
                           localize, prime_congruences_equal)
from .presentation import CongruencePresentation, Exponent, add, leq, sub, unit, zero
from .regions import box_points, enumerate_classes
from .rewriting import NIL, NormalFormSystem, complete
from .witnesses import WitnessRecord, _scan, associated_primes


@dataclass
class CoprincipalComponent:
    """One coprincipal component with its provenance."""

    cogenerator: tuple[int, ...]
    prime: MonoidPrime
    presentation: CongruencePresentation
    associated: PrimeCongruence
    system: NormalFormSystem = field(repr=False)


@dataclass
class MesoprimaryDecomposition:
    target: NormalFormSystem
    components: list[CoprincipalComponent]
    tier: str
    induced: bool = True
    key: bool = True


def _component_seeds(ctx: LocalizedContext, w, bounds: Bounds):
    """Orbit seeds of the divisor classes of w's class, plus the minimal
    non-divisor exponents (the component's nil staircase)."""
    gens = ctx.prime.generators
    n = ctx.base.n
    bound = {}
    for i in gens:
        best = max(w[i], 1)
        for r in ctx.ext.rules:
            best = max(best, r.lhs[i])
            if r.rhs is not None:
                best = max(best, r.rhs[i])
        bound[i] = best + 1
    ranges = [range(bound[i] + 1) if i in gens else range(1) for i in range(n)]
    divisors, non_divisors = [], []
    seen = set()
    for point in itertools.product(*ranges):
        nf = ctx.class_nf(point) if not ctx.is_nil(point) else NIL
        if ctx.divides(point, w):
            if nf not in seen:
                seen.add(nf)
                divisors.append(point)
        else:
            non_divisors.append(point)
    minimal_nils = []
    for v in sorted(non_divisors, key=lambda v: (sum(v), v)):
        if not any(leq(m, v) for m in minimal_nils):
            minimal_nils.append(v)
    # certificate: the scan box must see past every minimal non-divisor
    for m in minimal_nils:
        if any(m[i] > bound[i] for i in gens):
            raise BoundExceeded("divisor region not finite")
    return divisors, minimal_nils


def coprincipal_component(sys: NormalFormSystem, prime: MonoidPrime, w,
                          bounds: Bounds | None = None) -> CoprincipalComponent:
    """The coprincipal component of the congruence cogenerated by w.

    Emitted as a presentation: the ambient generators (the component is
    coarser), nil generators for the minimal classes whose ideal misses
    w's class, and unit pairs identifying each divisor seed with its
    stabilizer translates.
    """
    bounds = bounds or sys.bounds
    ctx = localize(sys, prime, bounds)
    if ctx.is_nil(w):
        raise PreconditionError("cogenerator must be non-nil")
    n = sys.n
    stab = ctx.stabilizer(w)
    divisors, nils = _component_seeds(ctx, w, bounds)
    pairs = list(sys.presentation.pairs)
    for seed in divisors:
        for g in stab.basis:
            lo, hi = list(seed), list(seed)
            for k, u in enumerate(ctx.units):
                if g[k] > 0:
                    hi[u] += g[k]
                else:
                    lo[u] += -g[k]
            pairs.append((tuple(lo), tuple(hi)))
    pres = CongruencePresentation.make(n, sys.names, pairs,
                                       list(sys.presentation.nils) + nils)
    system = complete(pres, sys.order, bounds)
    clean = system.as_presentation()
    associated = PrimeCongruence(prime, stab)
    comp = CoprincipalComponent(w, prime, clean, associated, system)
    _check_component_consistency(sys, comp, ctx, bounds)
    return comp


def _check_component_consistency(sys, comp, ctx, bounds):
    """Definition-level validity: the prime congruence of the component at
    its cogenerator matches the ambient one (lattice equality)."""
    comp_ctx = localize(comp.system, comp.prime, bounds)
    k_comp = comp_ctx.stabilizer(comp.cogenerator)
    if not lattice_equal(k_comp, comp.associated.lattice):
        raise PreconditionError(
            "component prime congruence disagrees with the ambient one")


def decompose(sys: NormalFormSystem, tier: str = "true",
              bounds: Bounds | None = None) -> MesoprimaryDecomposition:
    """Induced decomposition over key or true witnesses of all primes."""
    if tier not in ("key", "true"):
        raise ValueError("tier must be 'key' or 'true'")
    bounds = bounds or sys.bounds
    components = []
    for prime in associated_primes(sys, bounds):
        ctx = localize(sys, prime, bounds)
        for rec in _scan(ctx, bounds).records(tier):
            components.append(coprincipal_component(sys, prime, rec.element, bounds))
    return MesoprimaryDecomposition(sys, components, tier)


# -- verification --------------------------------------------------------------


@dataclass(frozen=True)
class VerificationResult:
    status: str                      # verified_exact | verified_bounded | refuted
    box: tuple[int, ...] | None = None
    refutation: tuple | None = None

    @property
    def ok(self) -> bool:
        return self.status.startswith("verified")


def verify_decomposition(sys: NormalFormSystem, components,
                         bounds: Bounds | None = None) -> VerificationResult:
    """Check that the components' common refinement is the congruence.

    Direction one (refinement) is generator by generator.  Direction two
    (separation) is exact when the intersection congruence of the
    components completes within bounds: the intersection is presented and
    every generating pair must already hold in the congruence; a failing
    pair refutes the decomposition.  When the intersection completion
    blows the cap the check runs on a bounded class region instead.
    """
    bounds = bounds or sys.bounds
    systems = [c.system if isinstance(c, CoprincipalComponent) else c
               for c in components]
    if not systems:
        return VerificationResult("refuted", refutation=(zero(sys.n), zero(sys.n)))
    for comp in systems:
        for a, b in sys.presentation.pairs:
            if not comp.equivalent(a, b):
                return VerificationResult("refuted", refutation=(a, b))
        for m in sys.presentation.nils:
            if not comp.is_nil(m):
                return VerificationResult("refuted", refutation=(m, None))
    try:
        acc = systems[0]
        for nxt in systems[1:]:
            pres = intersection_presentation(acc, nxt, bounds)
            acc = complete(pres, sys.order, bounds)
        for a, b in acc.presentation.pairs:
            if not sys.equivalent(a, b):
                return VerificationResult("refuted", refutation=(a, b))
        for m in acc.presentation.nils:
            if not sys.is_nil(m):
                return VerificationResult("refuted", refutation=(m, None))
        return VerificationResult("verified_exact")
    except CompletionCapExceeded:
        pass
    box = (bounds.verify_box,) * sys.n
    for a, b in itertools.combinations(box_points(box), 2):
        if sys.equivalent(a, b):
            continue
        if all(comp.equivalent(a, b) for comp in systems):
            return VerificationResult("refuted", box=box, refutation=(a, b))
    return VerificationResult("verified_bounded", box=box)


def find_redundant(sys: NormalFormSystem, decomp: MesoprimaryDecomposition,
                   bounds: Bounds | None = None) -> list[int]:
    """Indices of components that can be dropped individually."""
    bounds = bounds or sys.bounds
    redundant = []
    for i in range(len(decomp.components)):
        rest = decomp.components[:i] + decomp.components[i + 1:]
        if rest and verify_decomposition(sys, rest, bounds).ok:
            redundant.append(i)
    return redundant


# -- structural predicates ------------------------------------------------------


def check_primary(sys: NormalFormSystem, prime: MonoidPrime,
                  bounds: Bounds | None = None) -> bool:
    """Every prime generator nilpotent, everything outside cancellative."""
    bounds = bounds or sys.bounds
    staircase = sys.nil_staircase
    for i in prime.generators:
        if not any(support(m) == {i} for m in map(tuple, staircase)):
            return False
    comp = prime.complement
    if not comp:
        return True
    ctx = localize(sys, prime, bounds)
    # cancellativity: the localization must not coarsen the global relation
    from .ordering import BlockOrder
    n, m = sys.n, ctx.m
    inverse_block = tuple(range(n, m))
    order = BlockOrder(m, inverse_block, inverse_block + tuple(range(n)))
    saturated = complete(ctx.ext.presentation, order, bounds)
    for r in saturated.rules:
        if any(r.lhs[n:]):
            continue
        if r.is_nil:
            if not sys.is_nil(r.lhs[:n]):
                return False
        elif any(r.rhs[n:]):
            continue
        elif not sys.equivalent(r.lhs[:n], r.rhs[:n]):
            return False
    return True


def support(v) -> set[int]:
    return {i for i, x in enumerate(v) if x}


def check_mesoprimary(sys: NormalFormSystem, prime: MonoidPrime,
                      bounds: Bounds | None = None) -> bool:
    """Primary with one prime congruence at every non-nil class."""
    bounds = bounds or sys.bounds
    if not check_primary(sys, prime, bounds):
        return False
    ctx = localize(sys, prime, bounds)
    scan = _scan(ctx, bounds)
    lattices = [ctx.stabilizer(s) for s in scan.seeds]
    return all(lattice_equal(lattices[0], k) for k in lattices[1:])


def check_coprincipal(sys: NormalFormSystem, prime: MonoidPrime,
                      bounds: Bounds | None = None) -> bool:
    """Mesoprimary with a single Green's class of cogenerators."""
    bounds = bounds or sys.bounds
    if not check_mesoprimary(sys, prime, bounds):
        return False
    ctx = localize(sys, prime, bounds)
    cogens = [r.element for r in _scan(ctx, bounds).records("cogenerator")]
    if not cogens:
        return False
    return all(ctx.greens_equal(cogens[0], c) for c in cogens[1:])


def is_cogenerator_of(comp_sys: NormalFormSystem, prime: MonoidPrime, w,
                      bounds: Bounds | None = None) -> bool:
    """Is w a cogenerator of the given congruence for the given prime?

    For a witness with every prime translate nil the nil class is the key
    aide, so the test reduces to nil checks.
    """
    ctx = localize(comp_sys, prime, bounds)
    if ctx.is_nil(w):
        return False
    n = comp_sys.n
    return all(ctx.is_nil(add(w, unit(n, i))) for i in prime.generators)


# -- coverage reports -----------------------------------------------------------


@dataclass
class CoverageReport:
    entries: list
    violations: list

    @property
    def ok(self) -> bool:
        return not self.violations


def check_cogenerator_cover(sys: NormalFormSystem,
                            decomp: MesoprimaryDecomposition,
                            bounds: Bounds | None = None) -> CoverageReport:
    """Witness-to-cogenerator coverage required of any valid decomposition:

    (a) every non-suspicious witness cogenerates some component;
    (b) every maximal key witness w with key aide w' has a component
        cogenerated by w or w';
    (c) for minimal associated primes, every true witness cogenerates
        some component.
    """
    bounds = bounds or sys.bounds
    entries, violations = [], []
    primes = associated_primes(sys, bounds)
    minimal = [p for p in primes
               if not any(q.supp < p.supp for q in primes)]
    for prime in primes:
        ctx = localize(sys, prime, bounds)
        scan = _scan(ctx, bounds)
        for rec in scan.records("witness"):
            label = (tuple(sorted(prime.supp)), rec.element)
            covering = [i for i, comp in enumerate(decomp.components)
                        if comp.prime == prime
                        and is_cogenerator_of(comp.system, prime, rec.element, bounds)]
            if not rec.suspicious and rec.is_witness:
                if covering:
                    entries.append(("non_suspicious", label, covering[0]))
                else:
                    violations.append(("non_suspicious", label))
            if rec.is_maximal and rec.is_key:
                hit = covering[:]
                for aide in rec.key_aides:
                    if aide is NIL:
                        continue
                    hit += [i for i, comp in enumerate(decomp.components)
                            if comp.prime == prime
                            and is_cogenerator_of(comp.system, prime,
                                                  _globalize(ctx, aide), bounds)]
                if hit:
                    entries.append(("maximal_key", label, hit[0]))
                else:
                    violations.append(("maximal_key", label))
            if prime in minimal and rec.is_true:
                if covering:
                    entries.append(("true_minimal", label, covering[0]))
                else:
                    violations.append(("true_minimal", label))
    return CoverageReport(entries, violations)


def _globalize(ctx: LocalizedContext, a):
    """Shift a localized exponent into the nonnegative orthant."""
    out = list(a)
    for u in ctx.units:
        if out[u] < 0:
            out[u] = 0
    return tuple(out)


def check_truly_associated_cover(sys: NormalFormSystem,
                                 decomp: MesoprimaryDecomposition,
                                 bounds: Bounds | None = None) -> CoverageReport:
    """Every truly associated prime congruence must be associated to some
    component; components with a non-truly-associated prime congruence are
    flagged (and must be confirmed redundant by find_redundant)."""
    from .witnesses import associated_prime_congruences
    bounds = bounds or sys.bounds
    truly = associated_prime_congruences(sys, "true", bounds)
    entries, violations = [], []
    comp_pcs = [c.associated for c in decomp.components]
    for pc in truly:
        hit = [i for i, cpc in enumerate(comp_pcs)
               if prime_congruences_equal(pc, cpc)]
        if hit:
            entries.append(("truly_covered", _pc_label(pc), hit[0]))
        else:
            violations.append(("truly_missing", _pc_label(pc)))
    flagged = [i for i, cpc in enumerate(comp_pcs)
               if not any(prime_congruences_equal(cpc, pc) for pc in truly)]
    for i in flagged:
        entries.append(("flagged_redundant", _pc_label(comp_pcs[i]), i))
    return CoverageReport(entries, violations)


def _pc_label(pc: PrimeCongruence):
    return (tuple(sorted(pc.prime.supp)), pc.lattice.basis)


def redundant_flags_confirmed(sys, decomp, bounds=None) -> bool:
    """Theorem-level cross-check: flagged components are indeed omissible."""
    report = check_truly_associated_cover(sys, decomp, bounds)
    flagged = [e[2] for e in report.entries if e[0] == "flagged_redundant"]
    if not flagged:
        return True
    omissible = set(find_redundant(sys, decomp, bounds))
    return all(i in omissible for i in flagged)


# -- irredundant decomposition --------------------------------------------------


def irredundant_decomposition(sys: NormalFormSystem,
                              bounds: Bounds | None = None
                              ) -> MesoprimaryDecomposition:
    """The unique irredundant induced decomposition, for congruences with
    no embedded associated primes: true-tier components, merged by common
    refinement when they share an associated prime congruence."""
    bounds = bounds or sys.bounds
    primes = associated_primes(sys, bounds)
    for p, q in itertools.permutations(primes, 2):
        if p.supp < q.supp:
            raise EmbeddedPrimeError(p.label(sys.names), q.label(sys.names))
    decomp = decompose(sys, "true", bounds)
    groups: list[list[int]] = []
    for i, comp in enumerate(decomp.components):
        for group in groups:
            if prime_congruences_equal(comp.associated,
                                       decomp.components[group[0]].associated):
                group.append(i)
                break
        else:
            groups.append([i])
    merged = []
    for group in groups:
        if len(group) == 1:
            merged.append(decomp.components[group[0]])
            continue
        systems = [decomp.components[i].system for i in group]
        acc = systems[0]
        for nxt in systems[1:]:
            pres = intersection_presentation(acc, nxt, bounds)
            acc = complete(pres, sys.order, bounds)
        first = decomp.components[group[0]]
        merged.append(CoprincipalComponent(
            first.cogenerator, first.prime, acc.as_presentation(),
            first.associated, acc))
    return MesoprimaryDecomposition(sys, merged, "true")
