"""Bounded class enumeration: the substrate for figures and bounded checks."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .presentation import Exponent, add, leq, sub
from .rewriting import NIL, NormalFormSystem


@dataclass(frozen=True)
class ClassRegion:
    """Partition of the lattice points of a box by normal form.

    ``classes`` maps each class label (a normal form, or NIL) to the sorted
    tuple of box points carrying it.  ``saturated`` certifies that the box
    is closed under rewriting: no rule moves a box point outside and no
    outside point of bounded degree rewrites in.
    """

    box: tuple[int, ...]
    labels: tuple
    classes: dict
    saturated: bool

    def label_of(self, point: Exponent):
        for label, points in self.classes.items():
            if point in points:
                return label
        raise KeyError(point)


def box_points(box: tuple[int, ...]):
    return itertools.product(*(range(b + 1) for b in box))


def enumerate_classes(sys: NormalFormSystem, box: tuple[int, ...]) -> ClassRegion:
    """Group box points by normal form and compute the saturation flag."""
    if len(box) != sys.n or min(box, default=0) < 0:
        raise ValueError("box must give a nonnegative bound per variable")
    classes: dict = {}
    for p in box_points(box):
        label = sys.normal_form(p)
        key = "NIL" if label is NIL else label
        classes.setdefault(key, []).append(p)

    saturated = _saturation_flag(sys, box)
    ordered = {}
    for key in sorted(classes, key=lambda k: (k == "NIL", k if k != "NIL" else ())):
        ordered[NIL if key == "NIL" else key] = tuple(sorted(classes[key]))
    return ClassRegion(tuple(box), tuple(ordered.keys()), ordered, saturated)


def _saturation_flag(sys: NormalFormSystem, box: tuple[int, ...]) -> bool:
    inside = lambda p: all(x <= b for x, b in zip(p, box))
    # No rule may rewrite a box point to an outside point.
    for rule in sys.pair_rules:
        # the worst case per rule is the box corner shifted by rhs - lhs
        for p in box_points(box):
            if leq(rule.lhs, p) and not inside(add(sub(p, rule.lhs), rule.rhs)):
                return False
    # No outside point of bounded degree may rewrite into the box.
    max_rule_deg = max((sum(r.lhs) for r in sys.rules), default=0)
    degree_cap = sum(box) + max_rule_deg
    for rule in sys.pair_rules:
        shift = sub(rule.rhs, rule.lhs)
        for p in box_points(box):
            q = sub(p, shift)
            if min(q) < 0 or inside(q):
                continue
            if sum(q) <= degree_cap and leq(rule.lhs, q):
                return False
    return True
