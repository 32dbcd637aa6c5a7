"""Exact intersection (common refinement) of presented congruences.

The relation-level intersection of two congruences is again finitely
generated (congruences on N^n satisfy the ascending chain condition), and
it is computable: present both congruences on disjoint variable blocks,
simulate each block's nil class with an absorbing slack variable, adjoin a
diagonal block t with t_i identified with e_i + e_i', and complete under a
block order eliminating everything but t.  The completed rules supported
entirely on the t block present exactly

    a ~ b  iff  a ~_1 b and a ~_2 b,

with "both nil" appearing as one ordinary class.  Nil generators for the
intersection itself are the pairwise lcms of the two nil staircases.
"""

from __future__ import annotations

from .config import Bounds, DEFAULT_BOUNDS
from .ordering import BlockOrder
from .presentation import CongruencePresentation, Exponent
from .rewriting import NormalFormSystem, Rule, complete


def _embed(v: Exponent, total: int, offset: int) -> Exponent:
    out = [0] * total
    for i, x in enumerate(v):
        out[offset + i] = x
    return tuple(out)


def intersection_presentation(s1: NormalFormSystem, s2: NormalFormSystem,
                              bounds: Bounds = DEFAULT_BOUNDS) -> CongruencePresentation:
    """Present the common refinement of two congruences on the same N^n."""
    if s1.n != s2.n or s1.names != s2.names:
        raise ValueError("congruences must share an ambient variable set")
    n = s1.n
    total = 3 * n + 2          # t block, A block + slack, B block + slack
    t0, a0, b0 = 0, n, 2 * n + 1
    slack_a, slack_b = a0 + n, b0 + n

    pairs = []
    nils: list[Exponent] = []

    def block_pairs(sys: NormalFormSystem, offset: int, slack: int):
        for r in sys.pair_rules:
            pairs.append((_embed(r.lhs, total, offset), _embed(r.rhs, total, offset)))
        for m in sys.nil_staircase:
            lifted = _embed(m, total, offset)
            with_slack = list(lifted)
            with_slack[slack] += 1
            pairs.append((lifted, tuple(with_slack)))
        # slack absorbs its own block: slack ~ slack + e for every block var
        for i in range(n):
            lo = [0] * total
            lo[slack] = 1
            hi = list(lo)
            hi[offset + i] += 1
            pairs.append((tuple(lo), tuple(hi)))
        lo = [0] * total
        lo[slack] = 1
        hi = list(lo)
        hi[slack] += 1
        pairs.append((tuple(lo), tuple(hi)))

    block_pairs(s1, a0, slack_a)
    block_pairs(s2, b0, slack_b)
    for i in range(n):
        diag = [0] * total
        diag[a0 + i] = 1
        diag[b0 + i] = 1
        pairs.append((_embed_unit(total, t0 + i), tuple(diag)))

    names = tuple(f"t{i}" for i in range(n)) \
        + tuple(f"a{i}" for i in range(n)) + ("sa",) \
        + tuple(f"b{i}" for i in range(n)) + ("sb",)
    pres = CongruencePresentation.make(total, names, pairs, nils)
    order = BlockOrder(total, tuple(range(n, total)), tuple(range(n, total)) + tuple(range(n)))
    big = complete(pres, order, bounds)

    gen_pairs = []
    for r in big.pair_rules:
        if _pure_t(r, n):
            gen_pairs.append((r.lhs[:n], r.rhs[:n]))
    both_nils = _staircase_lcm(s1.nil_staircase, s2.nil_staircase)
    gen_pairs = [p for p in gen_pairs
                 if not (_above_any(p[0], both_nils) and _above_any(p[1], both_nils))]
    return CongruencePresentation.make(n, s1.names, gen_pairs, both_nils)


def _embed_unit(total: int, i: int) -> Exponent:
    out = [0] * total
    out[i] = 1
    return tuple(out)


def _pure_t(rule: Rule, n: int) -> bool:
    if any(rule.lhs[n:]):
        return False
    return rule.rhs is not None and not any(rule.rhs[n:])


def _above_any(v: Exponent, mins) -> bool:
    return any(all(x >= y for x, y in zip(v, m)) for m in mins)


def _staircase_lcm(m1, m2) -> tuple[Exponent, ...]:
    """Minimal generators of the intersection of two nil monomial ideals."""
    raw = {tuple(max(x, y) for x, y in zip(a, b)) for a in m1 for b in m2}
    minimal = []
    for v in sorted(raw, key=lambda v: (sum(v), v)):
        if not _above_any(v, minimal):
            minimal.append(v)
    return tuple(minimal)


def intersect_all(systems: list[NormalFormSystem],
                  bounds: Bounds = DEFAULT_BOUNDS) -> NormalFormSystem:
    """Left fold of pairwise intersections; returns a completed system."""
    if not systems:
        raise ValueError("need at least one congruence")
    acc = systems[0]
    for nxt in systems[1:]:
        pres = intersection_presentation(acc, nxt, bounds)
        acc = complete(pres, acc.order, bounds)
    return acc
