"""Cell complexes glued from polytope charts.

A chart is a polytope semiring, optionally with a few elements made
invertible (a subdivision); its points are the faces of the resulting cells.
Gluings identify a face (or whole cell) of one chart with one of another
through an integral affine change of coordinates, and are checked to be
isomorphisms of the corresponding cellular localizations.

>>> C = elliptic_ks_skeleton(3)
>>> C.counts()
{'vertices': 3, 'edges': 3}
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Optional, Sequence, Union

import networkx as nx
import sympy

from .errors import (CoverFails, GluingNotIso, InconsistentSections, NoVertex, NotBounded,
                     PointOutside, SkeletaError, TooSmall)
from .polytope import (Face, PolytopeSemiring, RationalPolytope, _affine_dim, _dot, _frac, affine_hom,
                       face_localization, polytope_semiring, spectrum_faces)
from .presentation import (CONTRACTING, FREE, Generator, Presentation, Relation, SemiringHom,
                           TropPoly, eq, is_inverse_pair, poly_plus)
from .semifield import SemifieldValue

SCHEMA = "skeleta/1"


# -- dual intersection charts ---------------------------------------------


@dataclass(frozen=True)
class SNCStratum:
    """Local equation t = prod x_i^(n_i) in n ambient variables."""

    n: int
    multiplicities: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "multiplicities", tuple(int(m) for m in self.multiplicities))
        if len(self.multiplicities) > self.n:
            raise ValueError("more components than ambient variables")
        if any(m < 1 for m in self.multiplicities):
            raise ValueError("multiplicities must be positive")


def dual_intersection_chart(s: SNCStratum) -> Presentation:
    """Z{X_1..X_n} / (-1 = sum n_i X_i)."""
    gens = tuple(Generator(f"X{i + 1}", CONTRACTING) for i in range(s.n))
    if not s.multiplicities:
        return Presentation("Int", gens)
    exps = tuple(s.multiplicities) + (0,) * (s.n - len(s.multiplicities))
    rel = Relation("Eq", TropPoly.const(-1, s.n), TropPoly([(exps, Fraction(0))], s.n))
    return Presentation("Int", gens, (rel,))


def chart_real_vertices(s: SNCStratum) -> list[tuple[Fraction, ...]]:
    """Vertices of the real points: -1/n_i on the i-th axis."""
    out = []
    for i, m in enumerate(s.multiplicities):
        out.append(tuple(Fraction(-1, m) if j == i else Fraction(0) for j in range(s.n)))
    return out


# -- charts ---------------------------------------------------------------


FaceKey = tuple  # (vertices, rays)


def _key(F: Face) -> FaceKey:
    return (F.vertices, F.rays)


def _trim(P: RationalPolytope) -> RationalPolytope:
    """Drop halfspaces that are not facets."""
    d = P.rank
    keep = []
    for f, lam in P.halfspaces:
        V = [v for v in P.vertices if _dot(f, v) == lam]
        R = [r for r in P.rays if _dot(f, r) == 0]
        if V and _affine_dim(tuple(V), tuple(R)) == d - 1 and (f, lam) not in keep:
            keep.append((f, lam))
    return RationalPolytope(d, keep)


def _maximal_term(PS: PolytopeSemiring, e: TropPoly, x) -> tuple:
    best = None
    for exps, c in sorted(e.terms.items()):
        m, k = PS.function_of(exps, c)
        v = _dot(m, x) + k
        if best is None or v > best[0]:
            best = (v, (m, k))
    return best[1]


def linearity_cells(P: RationalPolytope, PS: PolytopeSemiring, elements: Sequence[TropPoly]) -> list[RationalPolytope]:
    """Full-dimensional pieces of P on which every element is affine."""
    funcs = [[PS.function_of(x, c) for x, c in sorted(e.terms.items())] for e in elements]
    cells = {}
    for choice in itertools.product(*(range(len(f)) for f in funcs)):
        hs = list(P.halfspaces)
        for fs, j in zip(funcs, choice):
            mj, cj = fs[j]
            for mk, ck in fs:
                if (mk, ck) != (mj, cj):
                    # <mk - mj, x> <= cj - ck
                    hs.append((tuple(a - b for a, b in zip(mk, mj)), cj - ck))
        hs = [(f, lam) for f, lam in hs if any(f)] + [(f, lam) for f, lam in hs if not any(f) and lam < 0]
        if any(not any(f) for f, _ in hs):
            continue
        try:
            Q = RationalPolytope(P.rank, hs)
        except NoVertex:
            continue
        if Q.dimension() < P.rank:
            continue
        Q = _trim(Q)
        cells.setdefault((Q.vertices, Q.rays), Q)
    return [cells[k] for k in sorted(cells)]


@dataclass
class Chart:
    label: str
    base: PolytopeSemiring
    inverted: tuple[TropPoly, ...] = ()

    def __post_init__(self):
        self.inverted = tuple(self.inverted)
        self._cell_semirings = {}

    @property
    def polytope(self) -> RationalPolytope:
        return self.base.polytope

    @property
    def rank(self) -> int:
        return self.base.rank

    @cached_property
    def cells(self) -> list[RationalPolytope]:
        if not self.inverted:
            return [self.polytope]
        return linearity_cells(self.polytope, self.base, self.inverted)

    @cached_property
    def presentation(self) -> Presentation:
        """The base presentation with a generator Y_k = -B_k for each inverted B_k."""
        P = self.base.presentation
        k = len(self.inverted)
        n = P.n + k
        pad = lambda e: TropPoly([(x + (0,) * k, c) for x, c in e.terms.items()], n)
        gens = P.generators + tuple(Generator(f"Y{j + 1}", FREE) for j in range(k))
        rels = [Relation(r.kind, pad(r.lhs), pad(r.rhs)) for r in P.relations]
        for j, B in enumerate(self.inverted):
            rels.append(Relation("Eq", poly_plus(pad(B), TropPoly.var(P.n + j, n)), TropPoly.const(0, n)))
        return Presentation(P.base, gens, tuple(rels))

    @cached_property
    def faces(self) -> list[Face]:
        """Faces of all cells, shared faces listed once."""
        seen = {}
        for Q in self.cells:
            for F in Q.faces():
                seen.setdefault(_key(F), F)
        return sorted(seen.values(), key=lambda F: (F.dim, F.vertices, F.rays))

    def cell_semiring(self, i: int) -> PolytopeSemiring:
        if i not in self._cell_semirings:
            self._cell_semirings[i] = polytope_semiring(self.cells[i])
        return self._cell_semirings[i]

    def locate(self, region: Union[Face, RationalPolytope]) -> tuple[int, Face]:
        """A cell containing the region, and the region as a face of that cell."""
        key = (region.vertices, region.rays)
        for i, Q in enumerate(self.cells):
            for F in Q.faces():
                if _key(F) == key:
                    return i, F
        raise GluingNotIso(f"region is not a face of any cell of chart {self.label}")

    def restriction(self, i: int) -> SemiringHom:
        """Chart presentation -> semiring of cell i (inverted elements become affine there)."""
        cell = self.cell_semiring(i)
        Q = self.cells[i]
        x0 = Q.faces()[-1].barycenter
        images = [cell.to_term(m, c) for m, c in self.base.functions()]
        for B in self.inverted:
            m, c = _maximal_term(self.base, B, x0)
            images.append(cell.to_term(tuple(-v for v in m), -c))
        return SemiringHom(self.presentation, cell.presentation, images)

    def values_at(self, x) -> list[Fraction]:
        vals = [_dot(m, x) + c for m, c in self.base.functions()]
        for B in self.inverted:
            vals.append(-max(_dot(m, x) + c for m, c in (self.base.function_of(e, k) for e, k in B.terms.items())))
        return vals

    def evaluate(self, e: TropPoly, x) -> Optional[Fraction]:
        x = tuple(_frac(v) for v in x)
        if len(x) != self.rank or not self.polytope.contains(x):
            raise PointOutside(f"point is not in chart {self.label}", chart=self.label)
        vals = self.values_at(x)
        best = None
        for exps, c in e.terms.items():
            v = c + sum(k * a for k, a in zip(exps, vals))
            best = v if best is None else max(best, v)
        return best

    def element(self, text: str) -> TropPoly:
        """Coordinate-language element, written over the chart presentation."""
        e = self.base.element(text)
        k = len(self.inverted)
        return TropPoly([(x + (0,) * k, c) for x, c in e.terms.items()], self.presentation.n)

    def to_json(self) -> dict:
        return {
            "label": self.label,
            "polytope": self.polytope.to_json(),
            "generators": {g: self.base.describe(i) for i, g in enumerate(self.base.presentation.names)},
            "inverted": [self.base.presentation.format(B) for B in self.inverted],
            "presentation": self.presentation.to_dsl(),
            "cells": [[[str(x) for x in v] for v in Q.vertices] for Q in self.cells],
        }


# -- gluings --------------------------------------------------------------


@dataclass
class Gluing:
    """Identify the region of chart b with the region of chart a via x_a = linear x_b + shift."""

    a: int
    b: int
    region_a: Union[Face, RationalPolytope]
    region_b: Union[Face, RationalPolytope]
    linear: Optional[list[list[int]]] = None
    shift: Optional[tuple] = None
    face_a: Optional[TropPoly] = None  # element of chart a vanishing exactly on the region
    face_b: Optional[TropPoly] = None

    def transition(self, rank: int):
        L = self.linear or [[int(i == j) for j in range(rank)] for i in range(rank)]
        s = tuple(_frac(x) for x in (self.shift or (0,) * rank))
        return L, s

    def to_a(self, x, rank: int) -> tuple:
        L, s = self.transition(rank)
        return tuple(sum(L[i][j] * x[j] for j in range(rank)) + s[i] for i in range(rank))

    def to_a_dir(self, r, rank: int) -> tuple:
        L, _ = self.transition(rank)
        return tuple(sum(L[i][j] * r[j] for j in range(rank)) for i in range(rank))

    def inverse(self, rank: int):
        L, s = self.transition(rank)
        if rank == 0:
            return [], ()
        M = sympy.Matrix(L)
        if abs(M.det()) != 1:
            return None
        Mi = M.inv()
        Li = [[int(Mi[i, j]) for j in range(rank)] for i in range(rank)]
        si = tuple(-sum(Fraction(int(Mi[i, j])) * s[j] for j in range(rank)) for i in range(rank))
        return Li, si


@dataclass
class CellComplex:
    charts: list[Chart]
    gluings: list[Gluing]
    points: list[tuple[int, FaceKey]] = field(default_factory=list)  # representative per point
    members: dict = field(default_factory=dict)  # (chart, key) -> point index
    names: list[str] = field(default_factory=list)
    refines: dict = field(default_factory=dict)  # new chart -> (old chart, restriction hom)
    parent: Optional[CellComplex] = None

    def face(self, p: int) -> Face:
        ci, key = self.points[p]
        return next(F for F in self.charts[ci].faces if _key(F) == key)

    def dim(self, p: int) -> int:
        return self.face(p).dim

    def specialization_pairs(self) -> list[tuple[int, int]]:
        """(p, q) when the face of p lies in the face of q inside some chart."""
        pairs = set()
        for (ci, key), p in self.members.items():
            F = next(G for G in self.charts[ci].faces if _key(G) == key)
            for G in self.charts[ci].faces:
                if G.contains_face(F):
                    pairs.add((p, self.members[(ci, _key(G))]))
        return sorted(pairs)

    def incidence_graph(self) -> nx.Graph:
        """Vertices joined through the 1-dimensional points (for 1-dimensional complexes)."""
        G = nx.MultiGraph()
        for p in range(len(self.points)):
            if self.dim(p) == 0:
                G.add_node(p)
        for p in range(len(self.points)):
            if self.dim(p) == 1:
                ends = [q for q, r in self.specialization_pairs() if r == p and q != p and self.dim(q) == 0]
                if len(ends) == 2:
                    G.add_edge(ends[0], ends[1], key=p)
        return G

    def counts(self) -> dict:
        dims = [self.dim(p) for p in range(len(self.points))]
        out = {"vertices": dims.count(0), "edges": dims.count(1)}
        if dims.count(2):
            out["faces"] = dims.count(2)
        return out

    def locate(self, chart: int, x) -> int:
        """The point whose face contains x in its relative interior."""
        C = self.charts[chart]
        x = tuple(_frac(v) for v in x)
        if not C.polytope.contains(x):
            raise PointOutside(f"point is not in chart {C.label}", chart=C.label)
        for F in sorted(C.faces, key=lambda F: F.dim):
            if _in_face(F, x, C.cells):
                return self.members[(chart, _key(F))]
        raise PointOutside("point lies in no cell")

    def to_json(self) -> dict:
        return {
            "schema": SCHEMA,
            "charts": [c.to_json() for c in self.charts],
            "gluings": [_gluing_json(self, g) for g in self.gluings],
            "points": [{"name": self.names[p] if self.names else f"p{p}", "chart": self.charts[c].label,
                        "dim": self.dim(p), "face": [[str(x) for x in v] for v in key[0]]}
                       for p, (c, key) in enumerate(self.points)],
            "specialization": [list(pq) for pq in self.specialization_pairs() if pq[0] != pq[1]],
            "counts": self.counts(),
        }


def _in_face(F: Face, x, cells) -> bool:
    # x in the relative interior of F: a convex combination hitting exactly F's tight set
    for Q in cells:
        if Q.contains(x) and any(_key(G) == _key(F) for G in Q.faces()):
            if Q.tight(x) == next(G for G in Q.faces() if _key(G) == _key(F)).active:
                return True
    return False


def _gluing_json(C: CellComplex, g: Gluing) -> dict:
    A, B = C.charts[g.a], C.charts[g.b]
    return {
        "a": A.label, "b": B.label,
        "region_a": [[str(x) for x in v] for v in g.region_a.vertices],
        "region_b": [[str(x) for x in v] for v in g.region_b.vertices],
        "face_a": A.presentation.format(g.face_a) if g.face_a is not None else None,
        "face_b": B.presentation.format(g.face_b) if g.face_b is not None else None,
        "linear": g.linear, "shift": [str(x) for x in g.shift] if g.shift else None,
    }


def region_element(chart: Chart, region) -> TropPoly:
    """An element of the chart presentation vanishing exactly on the region."""
    P = chart.presentation
    base = chart.base
    pts = list(region.vertices)
    total = TropPoly.const(0, P.n)
    k = len(chart.inverted)
    for i, (m, c) in enumerate(base.functions()):
        if all(_dot(m, v) + c == 0 for v in pts) and all(_dot(m, r) == 0 for r in region.rays):
            total = poly_plus(total, TropPoly.var(i, P.n))
    for j, B in enumerate(chart.inverted):
        for exps, c in sorted(B.terms.items()):
            m, kk = base.function_of(exps, c)
            if all(_dot(m, v) + kk == max(_dot(mm, v) + cc for mm, cc in
                                           (base.function_of(e, d) for e, d in B.terms.items())) for v in pts):
                t = TropPoly([(exps + (0,) * k, c)], P.n)
                total = poly_plus(total, poly_plus(t, TropPoly.var(base.presentation.n + j, P.n)))
    return total


def _local(chart: Chart, region):
    """(cell semiring, localized presentation, face of cell) for a region of a chart."""
    ci, F = chart.locate(region)
    PS = chart.cell_semiring(ci)
    return ci, PS, face_localization(PS, F), F


def _check_gluing(charts: list[Chart], g: Gluing, index: int) -> tuple[SemiringHom, SemiringHom]:
    A, B = charts[g.a], charts[g.b]
    d = A.rank
    if B.rank != d:
        raise GluingNotIso("charts have different ranks", index=index)
    inv = g.inverse(d)
    if inv is None:
        raise GluingNotIso("transition is not unimodular", index=index)
    moved_v = {g.to_a(v, d) for v in g.region_b.vertices}
    moved_r = {g.to_a_dir(r, d) for r in g.region_b.rays}
    if moved_v != set(g.region_a.vertices) or moved_r != set(g.region_a.rays):
        raise GluingNotIso("transition does not carry one region onto the other", index=index)
    _, PSa, La, Fa = _local(A, g.region_a)
    _, PSb, Lb, Fb = _local(B, g.region_b)
    L, s = g.transition(d)
    # functions of x_a pulled back to x_b, and the reverse
    to_b = affine_hom(PSa, PSb, target=Lb, linear=L, shift=s, source=La)
    to_a = affine_hom(PSb, PSa, target=La, linear=inv[0], shift=inv[1], source=Lb)
    if is_inverse_pair(to_b, to_a) is not True:
        raise GluingNotIso(f"gluing {index} is not an isomorphism of localizations", index=index)
    _, pa = spectrum_faces(PSa, La, within=Fa)
    _, pb = spectrum_faces(PSb, Lb, within=Fb)
    if len(pa) != len(pb):
        raise GluingNotIso(f"gluing {index}: spectra have different sizes", index=index)
    return to_a, to_b


def _check_cover(chart: Chart, index: int):
    """The cells must cover the chart polytope."""
    P = chart.polytope
    if chart.rank == 0:
        return
    if chart.rank == 1:
        pieces = sorted((Q.vertices[0][0], Q.vertices[-1][0]) for Q in chart.cells if Q.bounded)
        if not P.bounded:
            return
        lo, hi = P.vertices[0][0], P.vertices[-1][0]
        reach = lo
        for x, y in pieces:
            if x > reach:
                raise CoverFails(f"cells of chart {chart.label} leave a gap", chart=chart.label)
            reach = max(reach, y)
        if reach < hi:
            raise CoverFails(f"cells of chart {chart.label} leave a gap", chart=chart.label)
        return
    # rank 2: sample a grid over the bounding box of the vertices
    lows = [min(v[i] for v in P.vertices) - (1 if P.rays else 0) for i in range(2)]
    highs = [max(v[i] for v in P.vertices) + (1 if P.rays else 0) for i in range(2)]
    steps = 12
    for a in range(steps + 1):
        for b in range(steps + 1):
            x = (lows[0] + (highs[0] - lows[0]) * Fraction(a, steps), lows[1] + (highs[1] - lows[1]) * Fraction(b, steps))
            if P.contains(x) and not any(Q.contains(x) for Q in chart.cells):
                raise CoverFails(f"cells of chart {chart.label} miss {x}", chart=chart.label)


class _UnionFind:
    def __init__(self):
        self.parent = {}

    def find(self, x):
        self.parent.setdefault(x, x)
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, x, y):
        rx, ry = self.find(x), self.find(y)
        if rx != ry:
            self.parent[max(rx, ry)] = min(rx, ry)


def glue(charts: Sequence[Chart], gluings: Sequence[Gluing] = ()) -> CellComplex:
    """Validate every gluing and compute the glued point set."""
    charts = list(charts)
    gluings = list(gluings)
    for i, c in enumerate(charts):
        _check_cover(c, i)
    uf = _UnionFind()
    for ci, c in enumerate(charts):
        for F in c.faces:
            uf.find((ci, _key(F)))
    for gi, g in enumerate(gluings):
        _check_gluing(charts, g, gi)
        A, B = charts[g.a], charts[g.b]
        if g.face_a is None:
            g.face_a = region_element(A, g.region_a)
        if g.face_b is None:
            g.face_b = region_element(B, g.region_b)
        d = A.rank
        for F in B.faces:
            if not _contains(g.region_b, F):
                continue
            key = (tuple(sorted(g.to_a(v, d) for v in F.vertices)), tuple(sorted(g.to_a_dir(r, d) for r in F.rays)))
            match = [G for G in A.faces if _key(G) == key]
            if not match:
                raise GluingNotIso(f"gluing {gi}: face has no partner", index=gi)
            uf.union((g.a, _key(match[0])), (g.b, _key(F)))
    classes = {}
    for ci, c in enumerate(charts):
        for F in c.faces:
            classes.setdefault(uf.find((ci, _key(F))), []).append((ci, _key(F)))
    reps = sorted(classes)
    members = {m: p for p, r in enumerate(reps) for m in classes[r]}
    return CellComplex(charts, gluings, reps, members)


def _contains(region, F: Face) -> bool:
    return set(F.vertices) <= set(region.vertices) and set(F.rays) <= set(region.rays) if isinstance(region, Face) \
        else region.contains(F.barycenter) and all(region.contains(v) for v in F.vertices)


# -- sections and evaluation ----------------------------------------------


@dataclass
class Section:
    """A function given chart by chart as a difference pos - neg of chart elements."""

    parts: dict[int, tuple[TropPoly, TropPoly]]

    @classmethod
    def constant(cls, C: CellComplex, c) -> Section:
        return cls({i: (TropPoly.const(c, ch.presentation.n), TropPoly.const(0, ch.presentation.n))
                    for i, ch in enumerate(C.charts)})


def check_section(C: CellComplex, f: Section):
    """Sections must agree on every overlap (compared in the localized cell semiring)."""
    for gi, g in enumerate(C.gluings):
        if g.a not in f.parts or g.b not in f.parts:
            continue
        A, B = C.charts[g.a], C.charts[g.b]
        ca, PSa, La, Fa = _local(A, g.region_a)
        cb, PSb, Lb, Fb = _local(B, g.region_b)
        inv = g.inverse(A.rank)
        to_a = affine_hom(PSb, PSa, target=La, linear=inv[0], shift=inv[1], source=Lb)
        ra, rb = A.restriction(ca), B.restriction(cb)
        pa, na = (ra.apply(x) for x in f.parts[g.a])
        pb, nb = (to_a.apply(rb.apply(x)) for x in f.parts[g.b])
        if eq(poly_plus(pa, nb), poly_plus(na, pb), La).status != "Equal":
            raise InconsistentSections(f"sections disagree across gluing {gi}", gluing=gi)


def eval_global(C: CellComplex, f: Section, chart: int, x, check: bool = True) -> SemifieldValue:
    if check:
        check_section(C, f)
    if chart not in f.parts:
        raise PointOutside(f"section is not defined on chart {chart}")
    ch = C.charts[chart]
    pos, neg = f.parts[chart]
    a, b = ch.evaluate(pos, x), ch.evaluate(neg, x)
    if a is None:
        return SemifieldValue("Rat", None)
    if b is None:
        raise SkeletaError("section has an infinite negative part")
    return SemifieldValue("Rat", a - b)


# -- subdivision ----------------------------------------------------------


def subdivide(C: CellComplex, chart: int, element: Union[TropPoly, str]) -> CellComplex:
    """Replace a chart by the cells on which ``element`` is affine, regluing."""
    old = C.charts[chart]
    e = old.base.element(element) if isinstance(element, str) else element
    if not e.terms:
        raise NotBounded("-inf is not bounded below by an admissible bound")
    if not any(all(_dot(old.base.function_of(x, c)[0], r) == 0 for r in old.polytope.rays) for x, c in e.terms.items()):
        raise NotBounded("no term of the element is invertible on the chart")
    pieces = linearity_cells(old.polytope, old.base, list(old.inverted) + [e])
    new_charts = [c for i, c in enumerate(C.charts) if i != chart]
    index = {i: (i if i < chart else i - 1) for i in range(len(C.charts)) if i != chart}
    first = len(new_charts)
    for j, Q in enumerate(pieces):
        label = old.label if len(pieces) == 1 else f"{old.label}.{j}"
        new_charts.append(Chart(label, polytope_semiring(Q)))
    piece_ids = list(range(first, first + len(pieces)))
    gluings = []
    for g in C.gluings:
        if chart not in (g.a, g.b):
            gluings.append(Gluing(index[g.a], index[g.b], g.region_a, g.region_b, g.linear, g.shift))
            continue
        mine, other = (g.region_a, g.region_b) if g.a == chart else (g.region_b, g.region_a)
        hosts = [pid for pid, Q in zip(piece_ids, pieces) if _region_in(mine, Q)]
        if not hosts:
            raise SkeletaError("a gluing region is split by the subdivision; subdivide the neighbour first")
        for pid in hosts:
            region = _as_region(mine, pieces[pid - first])
            if g.a == chart:
                gluings.append(Gluing(pid, index[g.b], region, other, g.linear, g.shift))
            else:
                gluings.append(Gluing(index[g.a], pid, other, region, g.linear, g.shift))
    for (p, P), (q, Q) in itertools.combinations(zip(piece_ids, pieces), 2):
        shared = _shared_face(P, Q)
        if shared is not None:
            gluings.append(Gluing(p, q, shared[0], shared[1]))
    out = glue(new_charts, gluings)
    out.parent = C
    for pid, Q in zip(piece_ids, pieces):
        out.refines[pid] = (chart, _piece_restriction(old, new_charts[pid]))
    for i, ni in index.items():
        out.refines[ni] = (i, None)
    return out


def _region_in(region, Q: RationalPolytope) -> bool:
    return all(Q.contains(v) for v in region.vertices) and any(
        set(F.vertices) == set(region.vertices) and set(F.rays) == set(region.rays) for F in Q.faces())


def _as_region(region, Q: RationalPolytope):
    return next(F for F in Q.faces() if set(F.vertices) == set(region.vertices) and set(F.rays) == set(region.rays))


def _shared_face(P: RationalPolytope, Q: RationalPolytope):
    try:
        inter = RationalPolytope(P.rank, P.halfspaces + Q.halfspaces)
    except NoVertex:
        return None
    key = (inter.vertices, inter.rays)
    fp = [F for F in P.faces() if _key(F) == key]
    fq = [F for F in Q.faces() if _key(F) == key]
    if fp and fq:
        return fp[0], fq[0]
    return None


def _piece_restriction(old: Chart, new: Chart) -> SemiringHom:
    x0 = new.polytope.faces()[-1].barycenter
    images = [new.base.to_term(m, c) for m, c in old.base.functions()]
    for B in old.inverted:
        m, c = _maximal_term(old.base, B, x0)
        images.append(new.base.to_term(tuple(-v for v in m), -c))
    return SemiringHom(old.presentation, new.presentation, images)


def transport_section(f: Section, C: CellComplex) -> Section:
    """Pull a section of C.parent back to the subdivided complex C."""
    parts = {}
    for new, (old, hom) in C.refines.items():
        if old not in f.parts:
            continue
        pos, neg = f.parts[old]
        parts[new] = (pos, neg) if hom is None else (hom.apply(pos), hom.apply(neg))
    return Section(parts)


# -- the elliptic skeleton ------------------------------------------------


@dataclass
class KSSkeleton:
    complex: CellComplex
    n: int

    def vertex(self, i: int) -> tuple[int, tuple]:
        """(chart, coordinate) of the vertex v_i."""
        return (i % self.n, (Fraction(0),))

    def divisor(self, i: int) -> Section:
        """D_i: -1 at v_i, 0 at the other vertices, affine on each edge."""
        C = self.complex
        parts = {}
        for j, ch in enumerate(C.charts):
            zero = TropPoly.const(0, ch.presentation.n)
            if j == i % self.n:
                parts[j] = (ch.element("X - 1 v -X - 1"), zero)
            elif j == (i - 1) % self.n:
                parts[j] = (zero, ch.element("0 v X"))
            elif j == (i + 1) % self.n:
                parts[j] = (zero, ch.element("0 v -X"))
            else:
                parts[j] = (zero, zero)
        return Section(parts)

    def blow_up_element(self, i: int) -> TropPoly:
        """D'_(i-1) v -1 v D'_(i+1) on the chart of v_i, i.e. -X v -1 v X."""
        return self.complex.charts[i % self.n].element("-X v -1 v X")


def elliptic_ks_skeleton(n: int) -> CellComplex:
    return ks_skeleton(n).complex


def ks_skeleton(n: int) -> KSSkeleton:
    """n length-two charts, each subdivided at its blow-up element, glued in a cycle."""
    if n < 3:
        raise TooSmall("the cycle needs at least three components", n=n)
    A1 = polytope_semiring(RationalPolytope.interval(-1, 1))
    B = A1.element("-X v -1 v X")
    charts = [Chart(f"A{i}", A1, (B,)) for i in range(n)]
    right = RationalPolytope.interval(0, 1)
    left = RationalPolytope.interval(-1, 0)
    gluings = []
    for i in range(n):
        ra = charts[i].cells[[Q.vertices for Q in charts[i].cells].index(right.vertices)]
        rb = charts[(i + 1) % n].cells[[Q.vertices for Q in charts[0].cells].index(left.vertices)]
        gluings.append(Gluing(i, (i + 1) % n, ra, rb, [[1]], (Fraction(1),)))
    C = glue(charts, gluings)
    names = [""] * len(C.points)
    for i in range(n):
        for F in charts[i].faces:
            p = C.members[(i, _key(F))]
            if F.dim == 0 and F.vertices[0] == (Fraction(0),):
                names[p] = f"v{i}"
            elif F.dim == 1 and F.vertices == ((Fraction(0),), (Fraction(1),)):
                names[p] = f"e{i}"
    C.names = names
    return KSSkeleton(C, n)


def is_cycle(C: CellComplex) -> bool:
    G = nx.Graph(C.incidence_graph())
    return G.number_of_nodes() >= 3 and nx.is_connected(G) and all(d == 2 for _, d in G.degree())


# -- drawing --------------------------------------------------------------


def to_svg(C: CellComplex, size: int = 320) -> str:
    """Static drawing of a 1-dimensional complex: vertices on a circle or a line."""
    G = C.incidence_graph()
    verts = sorted(G.nodes)
    cyc = is_cycle(C)
    if cyc:
        order = [verts[0]]
        while len(order) < len(verts):
            nxt = sorted(v for v in nx.Graph(G).neighbors(order[-1]) if v not in order)
            order.append(nxt[0])
    else:
        order = verts
    pos = {}
    r = size * 0.38
    for k, v in enumerate(order):
        if cyc:
            ang = 2 * math.pi * k / len(order) - math.pi / 2
            pos[v] = (size / 2 + r * math.cos(ang), size / 2 + r * math.sin(ang))
        else:
            pos[v] = (size * (0.1 + 0.8 * k / max(1, len(order) - 1)), size / 2)
    lines = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}">']
    for u, v, _ in sorted(G.edges(keys=True)):
        (x1, y1), (x2, y2) = pos[u], pos[v]
        lines.append(f'  <line x1="{x1:.1f}" y1="{y1:.1f}" x2="{x2:.1f}" y2="{y2:.1f}" stroke="black" stroke-width="2"/>')
    for v in order:
        x, y = pos[v]
        name = C.names[v] if C.names and C.names[v] else f"p{v}"
        lines.append(f'  <circle cx="{x:.1f}" cy="{y:.1f}" r="5" fill="black"/>')
        lines.append(f'  <text x="{x + 8:.1f}" y="{y - 8:.1f}" font-family="sans-serif" font-size="12">{name}</text>')
    lines.append("</svg>")
    return "\n".join(lines) + "\n"
