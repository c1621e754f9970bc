"""Affine monoids cut out by integer inequalities, and their monoid ideals.

An ideal is stored by its minimal generators. Ideals ordered by inclusion form
an idempotent semiring: ``join`` is the ideal sum and ``plus`` the ideal
product (Minkowski sum of generators).

>>> N2 = AffineMonoid.orthant(2)
>>> I = MonoidIdeal(N2, [(1, 0), (0, 1)])
>>> plus(I, I).generators
((0, 2), (1, 1), (2, 0))
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Sequence

import sympy

from .errors import MonoidMismatch, NotMember, NotPointed, RankTooLarge

Point = tuple[int, ...]

MAX_HILBERT_RANK = 4


def _dot(g: Sequence[int], m: Sequence[int]) -> int:
    return sum(a * b for a, b in zip(g, m))


def _add(m: Sequence[int], n: Sequence[int]) -> Point:
    return tuple(a + b for a, b in zip(m, n))


def _sub(m: Sequence[int], n: Sequence[int]) -> Point:
    return tuple(a - b for a, b in zip(m, n))


@dataclass(frozen=True)
class AffineMonoid:
    """Lattice points m of Z^rank with <g, m> >= 0 for every inequality g."""

    rank: int
    inequalities: tuple[Point, ...]

    def __init__(self, rank: int, inequalities: Iterable[Sequence[int]]):
        ineqs = tuple(tuple(int(x) for x in g) for g in inequalities)
        for g in ineqs:
            if len(g) != rank:
                raise ValueError(f"inequality {g} has wrong length for rank {rank}")
        object.__setattr__(self, "rank", rank)
        object.__setattr__(self, "inequalities", ineqs)

    @classmethod
    def orthant(cls, d: int) -> AffineMonoid:
        return cls(d, [tuple(int(i == j) for j in range(d)) for i in range(d)])

    @property
    def pointed(self) -> bool:
        if self.rank == 0:
            return True
        if not self.inequalities:
            return False
        return sympy.Matrix(self.inequalities).rank() == self.rank

    def contains(self, m: Sequence[int]) -> bool:
        return len(m) == self.rank and all(_dot(g, m) >= 0 for g in self.inequalities)

    def check(self, m: Sequence[int]):
        if not self.contains(m):
            raise NotMember(f"{tuple(m)} is not in the monoid", point=tuple(m))

    def grading(self) -> Point:
        """A covector positive on every nonzero member (when pointed)."""
        return tuple(sum(col) for col in zip(*self.inequalities)) or (0,) * self.rank

    def to_json(self) -> dict:
        return {"rank": self.rank, "inequalities": [list(g) for g in self.inequalities]}

    @classmethod
    def from_json(cls, data: dict) -> AffineMonoid:
        return cls(data["rank"], data["inequalities"])


def divides(m: Sequence[int], n: Sequence[int], M: AffineMonoid) -> bool:
    """True iff n - m lies in M."""
    M.check(m)
    M.check(n)
    return M.contains(_sub(n, m))


def _minimal(points: Iterable[Point], M: AffineMonoid) -> tuple[Point, ...]:
    pts = sorted(set(points))

    def beaten(p, q):
        # q divides p; if they divide each other (units present) the least wins
        return M.contains(_sub(p, q)) and (not M.contains(_sub(q, p)) or q < p)

    return tuple(p for p in pts if not any(q != p and beaten(p, q) for q in pts))


class MonoidIdeal:
    """A finitely generated ideal of an affine monoid, kept in normal form."""

    __slots__ = ("monoid", "generators")

    def __init__(self, monoid: AffineMonoid, generators: Iterable[Sequence[int]] = ()):
        gens = [tuple(int(x) for x in g) for g in generators]
        for g in gens:
            monoid.check(g)
        self.monoid = monoid
        self.generators = _minimal(gens, monoid)

    @classmethod
    def neg_inf(cls, monoid: AffineMonoid) -> MonoidIdeal:
        return cls(monoid, ())

    @classmethod
    def unit(cls, monoid: AffineMonoid) -> MonoidIdeal:
        return cls(monoid, [(0,) * monoid.rank])

    @property
    def is_neg_inf(self) -> bool:
        return not self.generators

    def contains(self, m: Sequence[int]) -> bool:
        return any(self.monoid.contains(_sub(m, g)) for g in self.generators)

    def __eq__(self, other):
        if not isinstance(other, MonoidIdeal):
            return NotImplemented
        return self.monoid == other.monoid and self.generators == other.generators

    def __hash__(self):
        return hash((self.monoid, self.generators))

    def __repr__(self):
        return f"MonoidIdeal({list(self.generators)})"

    def to_json(self) -> dict:
        return {"generators": [list(g) for g in self.generators]}

    @classmethod
    def from_json(cls, monoid: AffineMonoid, data: dict) -> MonoidIdeal:
        return cls(monoid, data["generators"])


def minimalize(points: Iterable[Sequence[int]], M: AffineMonoid) -> MonoidIdeal:
    return MonoidIdeal(M, points)


def _same(a: MonoidIdeal, b: MonoidIdeal):
    if a.monoid != b.monoid:
        raise MonoidMismatch("ideals belong to different monoids")


def join(a: MonoidIdeal, b: MonoidIdeal) -> MonoidIdeal:
    _same(a, b)
    return MonoidIdeal(a.monoid, a.generators + b.generators)


def plus(a: MonoidIdeal, b: MonoidIdeal) -> MonoidIdeal:
    _same(a, b)
    return MonoidIdeal(a.monoid, (_add(g, h) for g in a.generators for h in b.generators))


def shift(a: MonoidIdeal, m: Sequence[int]) -> MonoidIdeal:
    """Translate by a monoid element (the principal product with (m))."""
    return MonoidIdeal(a.monoid, (_add(g, m) for g in a.generators))


def scale(a: MonoidIdeal, n: int) -> MonoidIdeal:
    """n-fold ideal product; scale(a, 0) is the unit ideal."""
    out = MonoidIdeal.unit(a.monoid)
    for _ in range(n):
        out = plus(out, a)
    return out


def leq(a: MonoidIdeal, b: MonoidIdeal) -> bool:
    """Ideal inclusion a within b."""
    _same(a, b)
    return all(b.contains(g) for g in a.generators)


# -- Hilbert bases --------------------------------------------------------


def _primitive(v: Sequence) -> Point:
    fr = [Fraction(int(sympy.Rational(x).p), int(sympy.Rational(x).q)) for x in v]
    den = lcm(*(f.denominator for f in fr))
    ints = [int(f * den) for f in fr]
    g = gcd(*ints)
    return tuple(x // g for x in ints) if g else tuple(ints)


def extreme_rays(M: AffineMonoid) -> list[Point]:
    """Primitive generators of the extreme rays of a pointed cone."""
    d = M.rank
    rays = set()
    rows = M.inequalities
    for subset in itertools.combinations(range(len(rows)), d - 1):
        A = sympy.Matrix([rows[i] for i in subset]) if subset else sympy.zeros(0, d)
        ns = A.nullspace() if subset else [sympy.eye(d)[:, i] for i in range(d)]
        if len(ns) != 1:
            continue
        r = _primitive(list(ns[0]))
        for cand in (r, tuple(-x for x in r)):
            if any(cand) and M.contains(cand):
                rays.add(cand)
    return sorted(rays)


def _box_points(M: AffineMonoid, bound: Sequence[int]) -> list[Point]:
    ranges = [range(-b, b + 1) for b in bound]
    return [p for p in itertools.product(*ranges) if any(p) and M.contains(p)]


def hilbert_basis(M: AffineMonoid) -> list[Point]:
    """Irreducible elements of a pointed affine monoid (rank at most 4).

    Every irreducible element lies in the half-open zonotope spanned by the
    extreme rays, so enumerating its bounding box suffices.
    """
    if M.rank > MAX_HILBERT_RANK:
        raise RankTooLarge(f"rank {M.rank} > {MAX_HILBERT_RANK}", rank=M.rank)
    if not M.pointed:
        raise NotPointed("cone is not pointed")
    if M.rank == 0:
        return []
    rays = extreme_rays(M)
    bound = [sum(abs(r[i]) for r in rays) for i in range(M.rank)]
    pts = _box_points(M, bound)
    grade = M.grading()
    pts.sort(key=lambda p: (_dot(grade, p), p))
    basis = []
    for p in pts:
        # any decomposition can be refined to start with a basis element
        if not any(M.contains(_sub(p, h)) for h in basis):
            basis.append(p)
    return sorted(basis)


def fractional(M: AffineMonoid, points: Iterable[Sequence[int]]) -> MonoidIdeal:
    """An M-submodule of the ambient lattice, generated by arbitrary points.

    Ordering, join and plus work exactly as for ideals; only the membership
    check on generators is skipped.
    """
    ideal = MonoidIdeal.__new__(MonoidIdeal)
    ideal.monoid = M
    ideal.generators = _minimal((tuple(int(x) for x in p) for p in points), M)
    return ideal


# -- cones given by generators ---------------------------------------------


def _int_rows(vectors) -> list[Point]:
    return [_primitive(list(v)) for v in vectors]


def cone_hrep(gens: Sequence[Sequence[int]], d: int) -> tuple[list[Point], list[Point]]:
    """Equations and facet inequalities of the real cone spanned by ``gens``.

    The cone is {x : <e, x> = 0 for e in equations, <f, x> >= 0 for f in facets}.
    Facets are found by brute force over spanning subsets, which is fine at the
    ranks used here.
    """
    gens = [tuple(g) for g in gens if any(g)]
    if not gens:
        return [tuple(int(i == j) for j in range(d)) for i in range(d)], []
    A = sympy.Matrix(gens)
    equations = _int_rows(A.nullspace())
    r = A.rank()
    facets = set()
    for subset in itertools.combinations(range(len(gens)), r - 1):
        rows = [gens[i] for i in subset] + list(equations)
        B = sympy.Matrix(rows) if rows else sympy.zeros(0, d)
        ns = B.nullspace() if rows else [sympy.eye(d)[:, i] for i in range(d)]
        if len(ns) != 1:
            continue
        f = _primitive(list(ns[0]))
        vals = [_dot(f, g) for g in gens]
        if all(v >= 0 for v in vals) and any(v > 0 for v in vals):
            facets.add(f)
        elif all(v <= 0 for v in vals) and any(v < 0 for v in vals):
            facets.add(tuple(-x for x in f))
    return equations, sorted(facets)


def lattice_projection(kernel: Sequence[Sequence[int]], d: int) -> tuple[list[Point], bool]:
    """Rows of an integer map Z^d -> Z^(d-r) whose kernel is the saturation of
    the lattice spanned by ``kernel`` (rank r).

    Also reports whether ``kernel`` already spans a saturated lattice.
    """
    kernel = [tuple(v) for v in kernel if any(v)]
    if not kernel:
        return [tuple(int(i == j) for j in range(d)) for i in range(d)], True
    from sympy.matrices.normalforms import smith_normal_decomp

    A = sympy.Matrix(kernel)
    D, _, V = smith_normal_decomp(A, domain=sympy.ZZ)
    r = A.rank()
    saturated = all(abs(D[i, i]) == 1 for i in range(r))
    # x V = y; the first r coordinates of y span the kernel directions
    rows = [tuple(int(V[i, j]) for i in range(d)) for j in range(r, d)]
    return rows, saturated


def in_span(target: Sequence[int], gens: Sequence[Point], grade: Sequence[int]) -> bool:
    """Is ``target`` an N-combination of ``gens``?  Needs ``grade`` > 0 on gens."""
    gens = sorted({tuple(g) for g in gens if any(g)}, key=lambda g: -_dot(grade, g))
    seen = set()

    def rec(t: Point) -> bool:
        if not any(t):
            return True
        if t in seen or _dot(grade, t) <= 0:
            return False
        seen.add(t)
        return any(rec(_sub(t, g)) for g in gens)

    return rec(tuple(target))
