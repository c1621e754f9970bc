"""Tropicalization of polynomials over Q((t)) and plane tropical curves.

A polynomial sum c_ik t^k x^i goes to the join of the affine functions
<i, X> - k over its nonzero terms.

>>> f = parse_tpoly("x + y + t")
>>> format_affine_join(tropical_terms(f))
'X v Y v -1'
>>> curve = corner_locus("X v Y v -1", RationalPolytope(2, [((1, 0), 0), ((0, 1), 0)]))
>>> curve.vertices
[(Fraction(-1, 1), Fraction(-1, 1))]
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence, Union

import sympy

from .errors import RankUnsupported, TooFewTerms, ZeroPolynomial
from .polytope import (PolytopeSemiring, RationalPolytope, _dot, _frac, format_affine,
                       parse_affine, polytope_semiring)
from .presentation import Presentation, Relation, TropPoly

Affine = tuple[tuple[int, ...], Fraction]
Point = tuple[Fraction, ...]


# -- polynomials over Q[t] -------------------------------------------------


@dataclass(frozen=True)
class TPoly:
    """sum of coeff * t^k * x^i; terms keyed by (i, k)."""

    variables: tuple[str, ...]
    terms: tuple[tuple[tuple[int, ...], int, Fraction], ...]

    def __post_init__(self):
        merged: dict = {}
        for exps, k, c in self.terms:
            exps = tuple(int(e) for e in exps)
            if len(exps) != len(self.variables) or any(e < 0 for e in exps) or k < 0:
                raise ValueError("exponents must be natural numbers, one per variable")
            merged[(exps, int(k))] = merged.get((exps, int(k)), Fraction(0)) + Fraction(c)
        clean = tuple(sorted((e, k, c) for (e, k), c in merged.items() if c != 0))
        object.__setattr__(self, "variables", tuple(self.variables))
        object.__setattr__(self, "terms", clean)

    @property
    def rank(self) -> int:
        return len(self.variables)

    def is_zero(self) -> bool:
        return not self.terms

    def __mul__(self, other: TPoly) -> TPoly:
        if self.variables != other.variables:
            raise ValueError("variables differ")
        out = []
        for (e1, k1, c1), (e2, k2, c2) in itertools.product(self.terms, other.terms):
            out.append((tuple(a + b for a, b in zip(e1, e2)), k1 + k2, c1 * c2))
        return TPoly(self.variables, tuple(out))

    def scaled(self, c, k: int = 0) -> TPoly:
        """c * t^k * f."""
        return TPoly(self.variables, tuple((e, kk + k, cc * Fraction(c)) for e, kk, cc in self.terms))

    def __str__(self):
        if not self.terms:
            return "0"
        syms = sympy.symbols(self.variables + ("t",))
        expr = sum(sympy.Rational(c.numerator, c.denominator) * syms[-1] ** k
                   * sympy.Mul(*(s ** e for s, e in zip(syms, exps))) for exps, k, c in self.terms)
        return str(expr)


def parse_tpoly(text: str, variables: Optional[Sequence[str]] = None) -> TPoly:
    """Read a polynomial in x, y, ... and t with rational coefficients."""
    expr = sympy.sympify(text, locals={"t": sympy.Symbol("t")})
    t = sympy.Symbol("t")
    if variables is None:
        names = sorted(str(s) for s in expr.free_symbols if s != t)
        order = {"x": 0, "y": 1, "z": 2}
        variables = sorted(names, key=lambda n: (order.get(n, 3), n))
    syms = [sympy.Symbol(v) for v in variables]
    poly = sympy.Poly(sympy.expand(expr), *syms, t, domain="QQ")
    terms = []
    for monom, c in poly.terms():
        terms.append((monom[:-1], monom[-1], Fraction(int(c.numerator), int(c.denominator))))
    return TPoly(tuple(variables), tuple(terms))


def tropical_terms(f: TPoly) -> list[Affine]:
    """Affine functions <i, X> - k, one per nonzero term, in a stable order."""
    if f.is_zero():
        raise ZeroPolynomial("the zero polynomial has no tropicalization")
    return [(exps, Fraction(-k)) for exps, k, _ in f.terms]


def format_affine_join(terms: Sequence[Affine]) -> str:
    return " v ".join(format_affine(m, c) for m, c in _prune(terms))


def _prune(terms: Sequence[Affine]) -> list[Affine]:
    """Drop terms dominated by a term with the same slope, keep first-seen order."""
    best: dict = {}
    for m, c in terms:
        if m not in best or c > best[m]:
            best[m] = c
    return sorted(best.items(), key=lambda mc: (tuple(-x for x in mc[0]), -mc[1]))


def tropicalize_poly(f: TPoly, delta: Union[RationalPolytope, PolytopeSemiring]) -> TropPoly:
    """The tropicalization as an element of the polytope semiring of delta."""
    PS = delta if isinstance(delta, PolytopeSemiring) else polytope_semiring(delta)
    if f.rank != PS.rank:
        raise ValueError("polynomial variables do not match the polytope rank")
    return PS.affine_terms(tropical_terms(f))


@dataclass
class TropRelations:
    presentation: Presentation
    relations: list[Relation]
    inconsistent: list[int] = field(default_factory=list)  # generators with a single term

    @property
    def consistent(self) -> bool:
        return not self.inconsistent


def trop_relations(generators: Sequence[TPoly], delta: Union[RationalPolytope, PolytopeSemiring]) -> TropRelations:
    """F = (join of the other terms), for each generator F and each of its terms.

    A single-term generator is a unit times a monomial, so its vanishing locus
    is empty; such generators are reported instead of producing -inf relations.
    """
    PS = delta if isinstance(delta, PolytopeSemiring) else polytope_semiring(delta)
    rels, bad = [], []
    for gi, f in enumerate(generators):
        terms = tropical_terms(f)
        if len(terms) == 1:
            bad.append(gi)
            continue
        F = PS.affine_terms(terms)
        for j in range(len(terms)):
            rest = PS.affine_terms([t for i, t in enumerate(terms) if i != j])
            rels.append(Relation("Eq", F, rest))
    P = PS.presentation.with_relations(rels)
    return TropRelations(P, rels, bad)


# -- corner loci ------------------------------------------------------------


@dataclass(frozen=True)
class Edge:
    """The set {p + s d : lo <= s <= hi} where the two terms tie and are maximal."""

    terms: tuple[Affine, Affine]
    base: Point
    direction: tuple[int, int]
    lo: Optional[Fraction]  # None for -infinity
    hi: Optional[Fraction]

    def at(self, s) -> Point:
        return tuple(b + s * d for b, d in zip(self.base, self.direction))

    @property
    def start(self) -> Optional[Point]:
        return None if self.lo is None else self.at(self.lo)

    @property
    def end(self) -> Optional[Point]:
        return None if self.hi is None else self.at(self.hi)


@dataclass
class TropCurve:
    vertices: list[Point]
    edges: list[Edge]
    isolated: list[Point] = field(default_factory=list)  # two-term ties touching the domain in one point

    def _is_vertex(self, p: Optional[Point]) -> bool:
        return p is not None and p in self.vertices

    @property
    def segments(self) -> list[tuple[Point, Point]]:
        return [(e.start, e.end) for e in self.edges if self._is_vertex(e.start) and self._is_vertex(e.end)]

    @property
    def rays(self) -> list[tuple[Point, tuple[int, int]]]:
        """Edges leaving a vertex and not ending at one (possibly clipped by the domain)."""
        out = []
        for e in self.edges:
            a, b = self._is_vertex(e.start), self._is_vertex(e.end)
            if a and not b:
                out.append((e.start, e.direction))
            elif b and not a:
                out.append((e.end, tuple(-d for d in e.direction)))
        return sorted(out)

    @property
    def lines(self) -> list[Edge]:
        return [e for e in self.edges if not self._is_vertex(e.start) and not self._is_vertex(e.end)]

    def to_json(self) -> dict:
        pt = lambda p: None if p is None else [str(x) for x in p]
        return {
            "vertices": [pt(v) for v in self.vertices],
            "segments": [[pt(a), pt(b)] for a, b in self.segments],
            "rays": [{"origin": pt(o), "direction": list(d)} for o, d in self.rays],
            "lines": [{"start": pt(e.start), "end": pt(e.end), "direction": list(e.direction)} for e in self.lines],
            "isolated": [pt(p) for p in self.isolated],
            "edges": [{"terms": [format_affine(*t) for t in e.terms], "start": pt(e.start), "end": pt(e.end),
                       "direction": list(e.direction)} for e in self.edges],
        }


def _affine_input(F, delta: RationalPolytope, PS: Optional[PolytopeSemiring]) -> list[Affine]:
    if isinstance(F, str):
        return parse_affine(F, delta.rank)
    if isinstance(F, TropPoly):
        PS = PS or polytope_semiring(delta)
        return [PS.function_of(e, c) for e, c in F.terms.items()]
    return [(tuple(int(x) for x in m), _frac(c)) for m, c in F]


def _interval(constraints, lo=None, hi=None):
    """Intersect {s : a s <= b} over the constraints with [lo, hi]."""
    for a, b in constraints:
        if a == 0:
            if b < 0:
                return None
        elif a > 0:
            v = b / a
            hi = v if hi is None else min(hi, v)
        else:
            v = b / a
            lo = v if lo is None else max(lo, v)
    if lo is not None and hi is not None and lo > hi:
        return None
    return lo, hi


def _value(t: Affine, x) -> Fraction:
    return _dot(t[0], x) + t[1]


def corner_locus(F, delta: RationalPolytope, PS: Optional[PolytopeSemiring] = None,
                 strict: bool = False) -> TropCurve:
    """Exact non-differentiability locus of F inside a rank-2 polytope.

    With fewer than two distinct slopes the locus is empty; ``strict`` turns
    that case into TooFewTerms.
    """
    if delta.rank != 2:
        raise RankUnsupported("corner loci are computed in rank 2", rank=delta.rank)
    terms = _prune(_affine_input(F, delta, PS))
    if len(terms) < 2:
        if strict:
            raise TooFewTerms("need at least two terms with different slopes", terms=len(terms))
        return TropCurve([], [])
    verts = set()
    for a, b, c in itertools.combinations(terms, 3):
        rows = [tuple(x - y for x, y in zip(a[0], b[0])), tuple(x - y for x, y in zip(a[0], c[0]))]
        det = rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0]
        if det == 0:
            continue
        r0, r1 = b[1] - a[1], c[1] - a[1]
        x = (Fraction(r0 * rows[1][1] - r1 * rows[0][1], det), Fraction(rows[0][0] * r1 - rows[1][0] * r0, det))
        v = _value(a, x)
        if delta.contains(x) and all(_value(t, x) <= v for t in terms):
            verts.add(x)
    edges, isolated = set(), set()
    for a, b in itertools.combinations(terms, 2):
        n = tuple(x - y for x, y in zip(a[0], b[0]))
        g = math.gcd(*n)
        d = (-n[1] // g, n[0] // g)
        if d < (0, 0):
            d = (-d[0], -d[1])
        # base point on <n, x> = b_c - a_c
        rhs = b[1] - a[1]
        base = (rhs / n[0], Fraction(0)) if n[0] else (Fraction(0), rhs / n[1])
        cons = []
        for t in terms:
            if t in (a, b):
                continue
            dm = tuple(x - y for x, y in zip(t[0], a[0]))
            cons.append((_dot(dm, d), -(_dot(dm, base) + t[1] - a[1])))
        for f, lam in delta.halfspaces:
            cons.append((_dot(f, d), lam - _dot(f, base)))
        iv = _interval(cons)
        if iv is None:
            continue
        if iv[0] is not None and iv[0] == iv[1]:
            p = tuple(x + iv[0] * y for x, y in zip(base, d))
            if p not in verts:
                isolated.add(p)
            continue
        edges.add(Edge((a, b), base, d, iv[0], iv[1]))
    # the same segment can come from several pairs when slopes are collinear
    seen, out = set(), []
    for e in sorted(edges, key=lambda e: (e.direction, str(e.start), str(e.end), str(e.terms))):
        key = (e.direction, e.start, e.end)
        if key not in seen:
            seen.add(key)
            out.append(e)
    ends = {p for e in out for p in (e.start, e.end)}
    return TropCurve(sorted(verts), out, sorted(isolated - ends))


# -- sampling oracle --------------------------------------------------------


@dataclass
class GridResult:
    h: Fraction
    origin: Point
    shape: tuple[int, int]
    marked: set[tuple[int, int]]
    cells: set[tuple[int, int]]  # cells lying inside the domain

    def box(self, cell) -> tuple[Point, Point]:
        i, j = cell
        lo = (self.origin[0] + i * self.h, self.origin[1] + j * self.h)
        return lo, (lo[0] + self.h, lo[1] + self.h)


def grid_oracle(F, delta: RationalPolytope, h, clip: Optional[tuple[Point, Point]] = None,
                PS: Optional[PolytopeSemiring] = None) -> GridResult:
    """Mark the h-grid cells in which no single term is the strict maximum at every corner.

    Only cells lying inside delta are considered. Unbounded domains need a
    compact ``clip`` window (lower corner, upper corner).
    """
    h = _frac(h)
    terms = _prune(_affine_input(F, delta, PS))
    if clip is None:
        if not delta.bounded:
            raise ValueError("an unbounded domain needs a clip window")
        lo = tuple(min(v[i] for v in delta.vertices) for i in range(2))
        hi = tuple(max(v[i] for v in delta.vertices) for i in range(2))
    else:
        lo, hi = tuple(_frac(x) for x in clip[0]), tuple(_frac(x) for x in clip[1])
    shape = (math.floor((hi[0] - lo[0]) / h), math.floor((hi[1] - lo[1]) / h))
    res = GridResult(h, lo, shape, set(), set())
    cache = {}
    # scaled to integers: D * value at node (i, j) is a i + b j + c
    D = math.lcm(h.denominator, lo[0].denominator, lo[1].denominator, *(c.denominator for _, c in terms))
    lin = [(m[0] * int(D * h), m[1] * int(D * h), int(D * (m[0] * lo[0] + m[1] * lo[1] + c))) for m, c in terms]

    def node(i, j):
        if (i, j) not in cache:
            if not lin:
                cache[(i, j)] = frozenset({0})
            else:
                vals = [a * i + b * j + c for a, b, c in lin]
                top = max(vals)
                cache[(i, j)] = frozenset(k for k, v in enumerate(vals) if v == top)
        return cache[(i, j)]

    inside = {(i, j): delta.contains((lo[0] + i * h, lo[1] + j * h))
              for i in range(shape[0] + 1) for j in range(shape[1] + 1)}
    for i in range(shape[0]):
        for j in range(shape[1]):
            corners = [(i, j), (i + 1, j), (i, j + 1), (i + 1, j + 1)]
            if not all(inside[c] for c in corners):
                continue
            res.cells.add((i, j))
            sets = [node(a, b) for a, b in corners]
            unique = [s for s in sets if len(s) == 1]
            if len(unique) < 4 or len(set(unique)) > 1:
                res.marked.add((i, j))
    return res


def _edge_meets_box(e: Edge, lo: Point, hi: Point) -> bool:
    cons = []
    for k in range(2):
        cons.append((e.direction[k], hi[k] - e.base[k]))
        cons.append((-e.direction[k], e.base[k] - lo[k]))
    return _interval(cons, e.lo, e.hi) is not None


def _candidate_cells(e: Edge, grid: GridResult):
    """Cells whose closure might meet e, found column by column."""
    h, (ox, oy) = grid.h, grid.origin
    nx_, ny = grid.shape
    dx, dy = e.direction
    for i in range(nx_):
        x0 = ox + i * h
        if dx == 0:
            if not x0 <= e.base[0] <= x0 + h:
                continue
            iv = _interval([(dy, oy + ny * h - e.base[1]), (-dy, e.base[1] - oy)], e.lo, e.hi)
        else:
            iv = _interval([(dx, x0 + h - e.base[0]), (-dx, e.base[0] - x0)], e.lo, e.hi)
        if iv is None:
            continue
        ys = [e.base[1] + s * dy for s in iv]
        y1, y2 = min(ys), max(ys)
        for j in range(max(0, math.ceil((y1 - oy) / h) - 1), min(ny - 1, math.floor((y2 - oy) / h)) + 1):
            yield i, j


def cells_meeting(curve: TropCurve, grid: GridResult) -> set[tuple[int, int]]:
    """Exactly which grid cells (closed squares) the curve passes through."""
    out = set()
    for e in curve.edges:
        for cell in _candidate_cells(e, grid):
            if cell in grid.cells and cell not in out and _edge_meets_box(e, *grid.box(cell)):
                out.add(cell)
    h, o = grid.h, grid.origin
    for v in curve.vertices + curve.isolated:
        # a point on a grid line lies in the closed cells on both sides
        ranges = [range(math.ceil((v[k] - o[k]) / h) - 1, math.floor((v[k] - o[k]) / h) + 1) for k in range(2)]
        out |= {(i, j) for i in ranges[0] for j in ranges[1] if (i, j) in grid.cells}
    return out


def agrees(curve: TropCurve, grid: GridResult) -> bool:
    return cells_meeting(curve, grid) == grid.marked


# -- drawing ----------------------------------------------------------------


def curve_svg(curve: TropCurve, window: tuple[Point, Point], size: int = 320) -> str:
    lo, hi = window
    sx = size / float(hi[0] - lo[0])
    sy = size / float(hi[1] - lo[1])
    tx = lambda p: (float(p[0] - lo[0]) * sx, size - float(p[1] - lo[1]) * sy)
    lines = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}">',
             f'  <rect x="0" y="0" width="{size}" height="{size}" fill="none" stroke="gray"/>']
    for e in curve.edges:
        cons = []
        for k in range(2):
            cons.append((e.direction[k], hi[k] - e.base[k]))
            cons.append((-e.direction[k], e.base[k] - lo[k]))
        iv = _interval(cons, e.lo, e.hi)
        if iv is None or iv[0] is None or iv[1] is None:
            continue
        (x1, y1), (x2, y2) = tx(e.at(iv[0])), tx(e.at(iv[1]))
        lines.append(f'  <line x1="{x1:.1f}" y1="{y1:.1f}" x2="{x2:.1f}" y2="{y2:.1f}" stroke="black" stroke-width="2"/>')
    for v in curve.vertices + curve.isolated:
        x, y = tx(v)
        lines.append(f'  <circle cx="{x:.1f}" cy="{y:.1f}" r="4" fill="black"/>')
    lines.append("</svg>")
    return "\n".join(lines) + "\n"

