"""Exact integer lattice arithmetic backing stabilizer computations.

Lattices are subgroups of Z^d given by row bases; the row-style Hermite
normal form is the canonical representative, so equality is basis
equality.  Everything is integer-exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

Vector = tuple[int, ...]


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    x, nx, y, ny, g, ng = 1, 0, 0, 1, a, b
    while ng:
        q = g // ng
        x, nx = nx, x - q * nx
        y, ny = ny, y - q * ny
        g, ng = ng, g - q * ng
    return g, x, y


def hnf_rows(vectors, d: int) -> tuple[Vector, ...]:
    """Row Hermite normal form of the lattice spanned by ``vectors``.

    Returns rows with positive pivots, entries above each pivot reduced to
    the range [0, pivot).  Zero rows are dropped.
    """
    rows = [list(v) for v in vectors if any(v)]
    basis: list[list[int]] = []
    for vec in rows:
        vec = vec[:]
        for row in basis:
            j = next(i for i, x in enumerate(row) if x)
            if vec[j] == 0:
                continue
            g, s, t = _xgcd(row[j], vec[j])
            rj, vj = row[j] // g, vec[j] // g
            row[:], vec[:] = (
                [s * a + t * b for a, b in zip(row, vec)],
                [-vj * a + rj * b for a, b in zip(row, vec)],
            )
        if any(vec):
            basis.append(vec)
            basis.sort(key=lambda r: next(i for i, x in enumerate(r) if x))
    # normalize pivots positive and reduce above-pivot entries
    for i in reversed(range(len(basis))):
        row = basis[i]
        j = next(k for k, x in enumerate(row) if x)
        if row[j] < 0:
            basis[i] = row = [-x for x in row]
        for upper in basis[:i]:
            q = upper[j] // row[j]
            if q:
                upper[:] = [a - q * b for a, b in zip(upper, row)]
    return tuple(tuple(r) for r in basis)


@dataclass(frozen=True)
class Lattice:
    """A sublattice of Z^d in Hermite normal form."""

    d: int
    basis: tuple[Vector, ...]

    @staticmethod
    def from_vectors(d: int, vectors) -> "Lattice":
        for v in vectors:
            if len(v) != d:
                raise ValueError("vector of wrong dimension")
        return Lattice(d, hnf_rows(vectors, d))

    @staticmethod
    def zero(d: int) -> "Lattice":
        return Lattice(d, ())

    @staticmethod
    def full(d: int) -> "Lattice":
        return Lattice.from_vectors(d, [tuple(1 if j == i else 0 for j in range(d))
                                        for i in range(d)])

    @property
    def rank(self) -> int:
        return len(self.basis)

    def contains(self, v: Vector) -> bool:
        v = list(v)
        for row in self.basis:
            j = next(i for i, x in enumerate(row) if x)
            if v[j] % row[j]:
                return False
            q = v[j] // row[j]
            v = [a - q * b for a, b in zip(v, row)]
        return not any(v)

    def contains_lattice(self, other: "Lattice") -> bool:
        return all(self.contains(v) for v in other.basis)

    def add(self, *vectors) -> "Lattice":
        return Lattice.from_vectors(self.d, list(self.basis) + list(vectors))

    def join(self, other: "Lattice") -> "Lattice":
        return self.add(*other.basis)

    def index_in(self, other: "Lattice") -> int | None:
        """[other : self] when finite and self <= other, else None."""
        if not other.contains_lattice(self):
            return None
        if self.rank != other.rank:
            return None
        det_self = _pivot_product(self.basis)
        det_other = _pivot_product(other.basis)
        return det_self // det_other if det_other else None

    def reduce(self, v: Vector) -> Vector:
        """Canonical coset representative of v modulo the lattice."""
        v = list(v)
        for row in self.basis:
            j = next(i for i, x in enumerate(row) if x)
            q = v[j] // row[j]
            v = [a - q * b for a, b in zip(v, row)]
        return tuple(v)

    def intersect(self, other: "Lattice") -> "Lattice":
        """Lattice intersection via the kernel of the stacked basis."""
        if self.d != other.d:
            raise ValueError("dimension mismatch")
        rows = list(self.basis) + list(other.basis)
        if not self.basis or not other.basis:
            return Lattice.zero(self.d)
        # kernel of the map (x, y) -> x*B1 - y*B2 over Z, then push through B1
        m1, m2 = len(self.basis), len(other.basis)
        cols = self.d
        stacked = [list(self.basis[i]) for i in range(m1)] + \
                  [[-x for x in other.basis[i]] for i in range(m2)]
        kernel = _integer_kernel(stacked, m1 + m2, cols)
        vecs = []
        for k in kernel:
            combo = [0] * self.d
            for c, row in zip(k[:m1], self.basis):
                for i, x in enumerate(row):
                    combo[i] += c * x
            vecs.append(tuple(combo))
        return Lattice.from_vectors(self.d, vecs)

    def coset_reps(self, other: "Lattice") -> list[Vector] | None:
        """All representatives of other/self when the index is finite."""
        if self.index_in(other) is None:
            return None
        reps = {(0,) * self.d}
        frontier = [(0,) * self.d]
        gens = [v for v in other.basis]
        while frontier:
            cur = frontier.pop()
            for g in gens:
                for sgn in (1, -1):
                    nxt = tuple(a + sgn * b for a, b in zip(cur, g))
                    nxt = self.reduce(nxt)
                    if nxt not in reps:
                        reps.add(nxt)
                        frontier.append(nxt)
        return sorted(reps)


def _pivot_product(basis) -> int:
    out = 1
    for row in basis:
        out *= next(x for x in row if x)
    return abs(out)


def _integer_kernel(rows: list[list[int]], m: int, cols: int) -> list[Vector]:
    """Z-basis of the left kernel {x in Z^m : x * rows = 0}."""
    # column-style HNF on the transpose with unimodular row bookkeeping
    work = [rows[i][:] + [1 if j == i else 0 for j in range(m)] for i in range(m)]
    # eliminate column by column
    pivot_row = 0
    for col in range(cols):
        pivot = None
        for r in range(pivot_row, m):
            if work[r][col]:
                pivot = r
                break
        if pivot is None:
            continue
        work[pivot_row], work[pivot] = work[pivot], work[pivot_row]
        for r in range(pivot_row + 1, m):
            while work[r][col]:
                q = work[r][col] // work[pivot_row][col]
                if q:
                    work[r] = [a - q * b for a, b in zip(work[r], work[pivot_row])]
                if work[r][col]:
                    work[pivot_row], work[r] = work[r], work[pivot_row]
        pivot_row += 1
    kernel = []
    for r in range(m):
        if not any(work[r][:cols]):
            kernel.append(tuple(work[r][cols:]))
    return kernel


def lattice_equal(a: Lattice, b: Lattice) -> bool:
    return a.d == b.d and a.basis == b.basis


def intersect_all_lattices(lattices: list[Lattice]) -> Lattice:
    if not lattices:
        raise ValueError("need at least one lattice")
    acc = lattices[0]
    for nxt in lattices[1:]:
        acc = acc.intersect(nxt)
    return acc


def affine_intersection(offsets_and_lattices: list[tuple[Vector, Lattice]]
                        ) -> tuple[Vector, Lattice] | None:
    """Intersect affine lattices (v_i + L_i); None when empty.

    Pairwise rule: (v1 + L1) n (v2 + L2) is nonempty iff v2 - v1 lies in
    L1 + L2, and then equals w + (L1 n L2) for any witness w.
    """
    v_acc, l_acc = offsets_and_lattices[0]
    for v2, l2 in offsets_and_lattices[1:]:
        diff = tuple(b - a for a, b in zip(v_acc, v2))
        joined = l_acc.join(l2)
        if not joined.contains(diff):
            return None
        coeffs = _express(joined, l_acc, l2, diff)
        if coeffs is None:
            return None
        w = tuple(a + b for a, b in zip(v_acc, coeffs))
        l_acc = l_acc.intersect(l2)
        v_acc = w
    return v_acc, l_acc


def _express(joined: Lattice, l1: Lattice, l2: Lattice, diff: Vector) -> Vector | None:
    """Find p in L1 with diff - p in L2 (exists when diff in L1 + L2)."""
    # brute force over small combinations of l1's basis, guided by reduction
    # through l2: diff - p must reduce to zero mod l2.
    from itertools import product as iproduct
    basis = l1.basis
    if not basis:
        return (0,) * l1.d if l2.contains(diff) else None
    span = range(-6, 7)
    for combo in iproduct(span, repeat=len(basis)):
        p = [0] * l1.d
        for c, row in zip(combo, basis):
            for i, x in enumerate(row):
                p[i] += c * x
        if l2.contains(tuple(d - x for d, x in zip(diff, p))):
            return tuple(p)
    return None


def cone_has_nonzero_nonneg(basis: list[Vector], coords: list[int]) -> bool:
    """Does the lattice spanned by ``basis`` contain a nonzero vector that is
    componentwise nonnegative on ``coords`` and zero elsewhere is NOT
    required; only the listed coordinates are sign-constrained and at least
    one of them must be positive.

    Decided exactly over the rationals (scaling preserves integrality), via
    Fourier-Motzkin feasibility on the coefficient space.
    """
    if not basis or not coords:
        return False
    m = len(basis)
    for target in coords:
        # seek x in Q^m with sum x_i basis_i[c] >= 0 for c in coords and >= 1 at target
        constraints = []
        for c in coords:
            row = [Fraction(b[c]) for b in basis]
            bound = Fraction(1 if c == target else 0)
            constraints.append((row, bound))  # row . x >= bound
        if _fm_feasible(constraints, m):
            return True
    return False


def _fm_feasible(constraints: list[tuple[list[Fraction], Fraction]], dim: int) -> bool:
    """Fourier-Motzkin elimination for systems row.x >= bound."""
    system = [(row[:], bound) for row, bound in constraints]
    for var in range(dim):
        lower, upper, rest = [], [], []
        for row, bound in system:
            coeff = row[var]
            if coeff > 0:
                lower.append(([x / coeff for x in row], bound / coeff))
            elif coeff < 0:
                upper.append(([x / coeff for x in row], bound / coeff))
            else:
                rest.append((row, bound))
        new_system = rest
        for lo_row, lo_bound in lower:
            for up_row, up_bound in upper:
                # combined: (lo_rest - up_rest).y >= lo_bound - up_bound
                row = [a - b for a, b in zip(lo_row, up_row)]
                row[var] = Fraction(0)
                new_system.append((row, lo_bound - up_bound))
        system = new_system
    return all(bound <= 0 for row, bound in system)
