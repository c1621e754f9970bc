"""Prime spectra of contracting presentations, computed through B-points.

A point is an assignment of 0 or -inf to each generator that satisfies every
relation after reducing coefficients to B. Basic opens ``U_e`` collect the
points where ``e`` evaluates to 0.

>>> from skeleta.presentation import freely_contracting
>>> len(enumerate_points(freely_contracting("Bool", ["X", "Y"])).points)
4
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence

import networkx as nx

from . import monoid_ideal as mi
from .errors import NotContracting, NotIntegral, TooManyGenerators
from .presentation import (CONTRACTING, MONOMIAL, Generator, Presentation, Relation, TropPoly,
                           _compositions, _solve_multiple, eval_raw, poly_shift, poly_sup)

MAX_GENERATORS = 20


@dataclass(frozen=True)
class BPoint:
    names: tuple[str, ...]
    values: tuple[bool, ...]  # True for 0, False for -inf

    @property
    def assignment(self) -> dict[str, str]:
        return {n: ("0" if v else "-inf") for n, v in zip(self.names, self.values)}

    @property
    def zero_set(self) -> frozenset[str]:
        return frozenset(n for n, v in zip(self.names, self.values) if v)

    def as_values(self) -> list[Optional[Fraction]]:
        return [Fraction(0) if v else None for v in self.values]

    def __repr__(self):
        return "BPoint(" + ", ".join(f"{k}={v}" for k, v in self.assignment.items()) + ")"


def reduced(rel: Relation) -> Relation:
    """Shift both sides by a common constant so every coefficient is <= 0 and
    the largest is 0; the reduction map can then be applied."""
    top = [c for c in (rel.lhs.max_coeff(), rel.rhs.max_coeff()) if c is not None]
    if not top or max(top) == 0:
        return rel
    s = -max(top)
    return Relation(rel.kind, poly_shift(rel.lhs, s), poly_shift(rel.rhs, s))


def evaluate_b(e: TropPoly, point: BPoint, base: str) -> bool:
    """Value of e at a B-point: True for 0, False for -inf."""
    return eval_raw(e, point.as_values(), base, "Bool").value is not None


def _holds(rel: Relation, point: BPoint, base: str) -> bool:
    l, r = evaluate_b(rel.lhs, point, base), evaluate_b(rel.rhs, point, base)
    return l == r if rel.kind == "Eq" else (not l or r)


@dataclass
class FiniteSpectrum:
    presentation: Presentation
    points: list[BPoint]
    probes: dict[str, TropPoly] = field(default_factory=dict)
    basic_opens: dict[str, frozenset[int]] = field(default_factory=dict)

    def open_of(self, e: TropPoly) -> frozenset[int]:
        """U_e, computed by evaluation."""
        base = self.presentation.base
        return frozenset(i for i, p in enumerate(self.points) if evaluate_b(e, p, base))

    def register(self, label: str, e: TropPoly) -> frozenset[int]:
        self.probes[label] = e
        self.basic_opens[label] = self.open_of(e)
        return self.basic_opens[label]

    def specialization_pairs(self) -> list[tuple[int, int]]:
        """Pairs (p, q) with q in the closure of p: every probe open containing q contains p."""
        opens = list(self.basic_opens.values())
        n = len(self.points)
        return [(p, q) for p in range(n) for q in range(n)
                if all(p in U for U in opens if q in U)]

    def specialization_graph(self) -> nx.DiGraph:
        G = nx.DiGraph()
        G.add_nodes_from(range(len(self.points)))
        G.add_edges_from((p, q) for p, q in self.specialization_pairs() if p != q)
        return G

    def opens(self) -> list[frozenset[int]]:
        """Every open set: unions of finite intersections of basic opens."""
        everything = frozenset(range(len(self.points)))
        basis = {everything}
        for U in self.basic_opens.values():
            basis |= {U & B for B in basis}
        basis = sorted(basis, key=lambda s: (len(s), sorted(s)))
        family = {frozenset()}
        for B in basis:
            family |= {B | A for A in family}
        return sorted(family, key=lambda s: (len(s), sorted(s)))

    def to_json(self) -> dict:
        return {
            "points": [p.assignment for p in self.points],
            "specialization_pairs": [list(x) for x in self.specialization_pairs()],
            "basic_opens": {k: sorted(v) for k, v in sorted(self.basic_opens.items())},
        }


def enumerate_points(P: Presentation, probes: Iterable[tuple[str, TropPoly]] = ()) -> FiniteSpectrum:
    if not P.contracting:
        free = [g.name for g in P.generators if g.sort != CONTRACTING]
        raise NotContracting(f"generator {free[0]!r} is not contracting", generator=free[0])
    if P.n > MAX_GENERATORS:
        raise TooManyGenerators(f"{P.n} generators exceeds {MAX_GENERATORS}", count=P.n)
    rels = [reduced(r) for r in P.relations]
    names = tuple(P.names)
    points = []
    for values in itertools.product((False, True), repeat=P.n):
        pt = BPoint(names, values)
        if all(_holds(r, pt, P.base) for r in rels):
            points.append(pt)
    spec = FiniteSpectrum(P, points)
    for name in names:
        spec.register(name, P.var(name))
    for i, r in enumerate(rels):
        spec.register(f"rel{i}.lhs", r.lhs)
        spec.register(f"rel{i}.rhs", r.rhs)
    for label, e in probes:
        spec.register(label, e)
    return spec


def cellular_quotient(P: Presentation, S: TropPoly) -> Presentation:
    """Impose S = 0; for contracting P and integral S this is the cellular localization."""
    return P.with_relations([Relation("Eq", S, P.zero())])


def _check_integral(S: TropPoly):
    c = S.max_coeff()
    if c is not None and c > 0:
        raise NotIntegral(f"element has positive constant {c}")


@dataclass
class LocalizationCheck:
    open: frozenset[int]
    localized: FiniteSpectrum
    bijection: dict[int, int]
    ok: bool


def open_of_localization(P: Presentation, S: TropPoly, spec: FiniteSpectrum | None = None) -> LocalizationCheck:
    """U_S, together with the spectrum of the cellular localization at S and
    the canonical bijection between them (identity on assignments)."""
    _check_integral(S)
    spec = spec or enumerate_points(P)
    U = spec.open_of(S)
    local = enumerate_points(cellular_quotient(P, S))
    index = {p.values: i for i, p in enumerate(spec.points)}
    bij = {j: index.get(q.values, -1) for j, q in enumerate(local.points)}
    ok = sorted(bij.values()) == sorted(U)
    # the bijection must also respect basic opens of the generators
    for name in P.names:
        Uj = local.basic_opens[name]
        ok = ok and frozenset(bij[j] for j in Uj) == spec.basic_opens[name] & U
    return LocalizationCheck(U, local, bij, ok)


@dataclass
class CoverCertificate:
    ok: bool
    union_open: frozenset[int]
    membership: dict[int, list[int]]  # point index -> parts containing it
    localizations_ok: bool


def cellular_cover_check(P: Presentation, parts: Sequence[TropPoly],
                         spec: FiniteSpectrum | None = None, localize: bool = True) -> CoverCertificate:
    """Check U_(v parts) = union of U_part, pointwise."""
    if not parts:
        raise ValueError("need at least one part")
    for S in parts:
        _check_integral(S)
    spec = spec or enumerate_points(P)
    joined = poly_sup(parts, P.n)
    U = spec.open_of(joined)
    part_opens = [spec.open_of(S) for S in parts]
    membership = {i: [k for k, W in enumerate(part_opens) if i in W] for i in range(len(spec.points))}
    ok = U == frozenset().union(*part_opens)
    loc_ok = True
    if localize:
        for S in list(parts) + [joined]:
            loc_ok = loc_ok and open_of_localization(P, S, spec).ok
    return CoverCertificate(ok and loc_ok, U, membership, loc_ok)


# -- integral models of monomial-admissible presentations -----------------


@dataclass
class IntegralModel:
    """B-presentation of the integral part, one generator per Hilbert basis element."""

    presentation: Presentation
    labels: dict[str, str]  # generator name -> element of the original presentation
    points: list[tuple[int, ...]]  # Hilbert basis, in generator order
    faces: list[frozenset[str]]  # zero sets of the faces avoiding the twist
    terms: dict = field(default_factory=dict)  # generator name -> (exps, c) in the original


def integral_model(P: Presentation) -> IntegralModel:
    """Integral part of a monomial-admissible presentation, reduced to B.

    Relations are true relations among Hilbert basis elements chosen so that
    B-points correspond exactly to faces of the monoid missing the twist.
    """
    if P.klass != MONOMIAL:
        raise NotContracting("integral models need a monomial-admissible presentation")
    model = P.model(1)
    M = model.monoid
    twist = model.point((0,) * P.n, Fraction(-1)) if model.twist else None
    gen_points = {}
    for i, g in enumerate(P.names):
        gen_points.setdefault(model.point(tuple(int(i == j) for j in range(P.n)), Fraction(0)), g)
    order = {q: k for k, q in enumerate(gen_points)}
    order.setdefault(twist, len(order))
    H = sorted(mi.hilbert_basis(M), key=lambda h: (order.get(h, len(order) + 1), h))
    names, labels, terms = [], {}, {}
    k = 0
    for h in H:
        if h in gen_points and gen_points[h] not in names:
            name = gen_points[h]
        elif h == twist:
            name = "T"
        else:
            k += 1
            name = f"H{k}"
        names.append(name)
        x, c = model.term_of(h, _any_preimage(model, h))
        labels[name] = P.format(TropPoly([(x, c)], P.n))
        terms[name] = (x, c)
    n = len(H)
    facets = [f for f in M.inequalities]
    grade = M.grading()

    def decompose(p) -> Optional[tuple[int, ...]]:
        return _decompose(p, H, grade)

    def term(coeffs):
        return TropPoly([(tuple(coeffs), Fraction(0))], n)

    rels = []
    if twist is not None:
        rels.append(Relation("Eq", term(decompose(twist)), TropPoly.neg_inf(n)))
    faces = []
    for size in range(n + 1):
        for Z in itertools.combinations(range(n), size):
            tight = [f for f in facets if all(mi._dot(f, H[z]) == 0 for z in Z)]
            in_face = [i for i in range(n) if all(mi._dot(f, H[i]) == 0 for f in tight)]
            if set(in_face) == set(Z):
                if twist is None or not all(mi._dot(f, twist) == 0 for f in tight):
                    faces.append(frozenset(names[z] for z in Z))
                continue
            h = next(i for i in in_face if i not in Z)
            s = tuple(sum(H[z][j] for z in Z) for j in range(M.rank))
            for mult in range(1, 64):
                w = mi._sub(tuple(mult * x for x in s), H[h])
                if M.contains(w):
                    break
            else:
                raise RuntimeError("face certificate not found")
            lhs = [0] * n
            for z in Z:
                lhs[z] = mult
            rhs = list(decompose(w))
            rhs[h] += 1
            rels.append(Relation("Eq", term(lhs), term(rhs)))
    Q = Presentation("Bool", tuple(Generator(x, CONTRACTING) for x in names), tuple(rels))
    return IntegralModel(Q, labels, H, faces, terms)


def _any_preimage(model, q):
    """Some term mapping to lattice point q (search by degree)."""
    n = model.P.n
    tw = model.point((0,) * n, Fraction(-1)) if model.twist else None
    for deg in range(0, 12):
        for exps in _compositions(deg, n):
            diff = mi._sub(q, model.point(exps, Fraction(0)))
            if tw is None:
                if not any(diff):
                    return exps, Fraction(0)
                continue
            s = _solve_multiple(diff, tw)
            if s is not None:
                return exps, Fraction(-s)
    raise RuntimeError(f"no term maps to {q}")


def _decompose(p, H, grade) -> Optional[tuple[int, ...]]:
    """Write p as an N-combination of H (which generates the monoid)."""
    memo = {}

    def rec(t):
        if not any(t):
            return (0,) * len(H)
        if mi._dot(grade, t) <= 0:
            return None
        if t in memo:
            return memo[t]
        memo[t] = None
        for i, h in enumerate(H):
            rest = mi._sub(t, h)
            sub = rec(rest)
            if sub is not None:
                out = list(sub)
                out[i] += 1
                memo[t] = tuple(out)
                return memo[t]
        return None

    return rec(tuple(p))


def integral_spectrum(P: Presentation) -> tuple[FiniteSpectrum, IntegralModel]:
    im = integral_model(P)
    spec = enumerate_points(im.presentation)
    found = {p.zero_set for p in spec.points}
    if found != set(im.faces):
        raise RuntimeError("integral model relations do not cut out the faces")
    return spec, im


# -- random instances -----------------------------------------------------


def random_contracting(rng: random.Random, max_gens: int = 4, max_rels: int = 3) -> Presentation:
    """A random contracting presentation with monomial relations."""
    base = rng.choice(["Bool", "Int"])
    n = rng.randint(1, max_gens)
    names = [f"X{i + 1}" for i in range(n)]
    gens = tuple(Generator(x, CONTRACTING) for x in names)

    def mono():
        exps = tuple(rng.choice([0, 0, 1, 2]) for _ in range(n))
        c = Fraction(0) if base == "Bool" else Fraction(-rng.choice([0, 0, 1, 2]))
        if rng.random() < 0.1:
            return TropPoly.neg_inf(n)
        return TropPoly([(exps, c)], n)

    rels = tuple(Relation(rng.choice(["Eq", "Leq"]), mono(), mono()) for _ in range(rng.randint(0, max_rels)))
    return Presentation(base, gens, rels)


def random_integral(rng: random.Random, P: Presentation, max_terms: int = 3) -> TropPoly:
    terms = []
    for _ in range(rng.randint(0, max_terms)):
        exps = tuple(rng.choice([0, 0, 1, 2]) for _ in range(P.n))
        c = Fraction(0) if P.base == "Bool" else Fraction(-rng.choice([0, 0, 1]))
        terms.append((exps, c))
    return TropPoly(terms, P.n)


def face_poset_of_simplex(k: int) -> nx.DiGraph:
    """Nonempty subsets of k vertices, ordered by inclusion."""
    faces = [frozenset(c) for r in range(1, k + 1) for c in itertools.combinations(range(k), r)]
    G = nx.DiGraph()
    G.add_nodes_from(faces)
    G.add_edges_from((a, b) for a in faces for b in faces if a < b)
    return G


def poset_isomorphism(G1: nx.DiGraph, G2: nx.DiGraph) -> Optional[dict]:
    """An order isomorphism between two posets given by their strict order relations."""
    if G1.number_of_nodes() != G2.number_of_nodes() or G1.number_of_edges() != G2.number_of_edges():
        return None
    matcher = nx.algorithms.isomorphism.DiGraphMatcher(G1, G2)
    for mapping in matcher.isomorphisms_iter():
        return mapping
    return None
