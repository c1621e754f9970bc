"""Finitely presented semirings over B, Z_v or Q_v.

Elements are tropical polynomials: finite joins of terms ``sum n_i X_i + c``.
Presentations whose relations only compare single terms are decided exactly
by translating to ideals of an affine monoid (see :class:`MonomialModel`);
anything else gets a sound but incomplete treatment and a three-valued
``eq``.

>>> P = freely_contracting("Int", ["X"])
>>> e = poly_join(poly_plus(P.var("X"), TropPoly.const(3, 1)), TropPoly.const(3, 1))
>>> P.format(normalize(e, P))
'3'
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import lcm
from typing import Iterable, Mapping, Optional, Sequence

from . import monoid_ideal as mi
from .errors import BaseMismatch, RelationViolated, SortViolated, TagMismatch, UnknownGenerator
from .semifield import SemifieldValue, reduce_to_bool

FREE = "free"
CONTRACTING = "contracting"
MONOMIAL = "monomial-admissible"
GENERAL = "general"

REWRITE_DEPTH = 6
REWRITE_WIDTH = 200
MAX_HILBERT_CHECK = mi.MAX_HILBERT_RANK

Exps = tuple[int, ...]


# -- elements -------------------------------------------------------------


class TropPoly:
    """A finite join of terms; ``terms`` maps exponent vectors to coefficients.

    The empty join is -inf. Terms with equal exponents merge by coefficient
    join (distributivity forces this).
    """

    __slots__ = ("terms", "nvars")

    def __init__(self, terms: Iterable[tuple[Sequence[int], Fraction]] | Mapping = (), nvars: int | None = None):
        merged: dict[Exps, Fraction] = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for exps, c in items:
            e = tuple(int(x) for x in exps)
            if any(x < 0 for x in e):
                raise ValueError(f"negative exponent in {e}")
            c = Fraction(c)
            merged[e] = max(merged[e], c) if e in merged else c
        lens = {len(e) for e in merged}
        if len(lens) > 1:
            raise ValueError("terms have inconsistent exponent lengths")
        self.nvars = lens.pop() if lens else (nvars or 0)
        if nvars is not None and merged and self.nvars != nvars:
            raise ValueError("exponent length does not match nvars")
        self.terms = dict(sorted(merged.items()))

    @classmethod
    def neg_inf(cls, nvars: int) -> TropPoly:
        return cls((), nvars)

    @classmethod
    def const(cls, c, nvars: int) -> TropPoly:
        if c is None:
            return cls.neg_inf(nvars)
        return cls([((0,) * nvars, Fraction(c))], nvars)

    @classmethod
    def var(cls, i: int, nvars: int, n: int = 1, c=0) -> TropPoly:
        return cls([(tuple(n if j == i else 0 for j in range(nvars)), Fraction(c))], nvars)

    @property
    def is_neg_inf(self) -> bool:
        return not self.terms

    def is_term(self) -> bool:
        return len(self.terms) == 1

    def single(self) -> tuple[Exps, Fraction]:
        (item,) = self.terms.items()
        return item

    def __eq__(self, other):
        return isinstance(other, TropPoly) and self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self):
        return hash((self.nvars, tuple(self.terms.items())))

    def __repr__(self):
        return f"TropPoly({self.terms})"

    def max_coeff(self) -> Optional[Fraction]:
        return max(self.terms.values()) if self.terms else None

    def denominators(self) -> set[int]:
        return {c.denominator for c in self.terms.values()}


def poly_join(a: TropPoly, b: TropPoly) -> TropPoly:
    return TropPoly(list(a.terms.items()) + list(b.terms.items()), a.nvars or b.nvars)


def poly_sup(polys: Iterable[TropPoly], nvars: int) -> TropPoly:
    out = TropPoly.neg_inf(nvars)
    for p in polys:
        out = poly_join(out, p)
    return out


def poly_plus(a: TropPoly, b: TropPoly) -> TropPoly:
    n = a.nvars or b.nvars
    return TropPoly(
        [(tuple(x + y for x, y in zip(e, f)), c + d) for e, c in a.terms.items() for f, d in b.terms.items()], n
    )


def poly_shift(a: TropPoly, c) -> TropPoly:
    return TropPoly([(e, v + Fraction(c)) for e, v in a.terms.items()], a.nvars)


def poly_scale(a: TropPoly, n: int) -> TropPoly:
    """n-fold sum a + ... + a; n = 0 gives the constant 0."""
    out = TropPoly.const(0, a.nvars)
    for _ in range(n):
        out = poly_plus(out, a)
    return out


# -- presentations --------------------------------------------------------


@dataclass(frozen=True)
class Generator:
    name: str
    sort: str = FREE

    def __post_init__(self):
        if self.sort not in (FREE, CONTRACTING):
            raise ValueError(f"unknown sort {self.sort!r}")


@dataclass(frozen=True)
class Relation:
    kind: str  # "Eq" or "Leq"
    lhs: TropPoly
    rhs: TropPoly

    def __post_init__(self):
        if self.kind not in ("Eq", "Leq"):
            raise ValueError(f"unknown relation kind {self.kind!r}")


@dataclass(frozen=True)
class Decision:
    """Outcome of an equality test: Equal, Distinct or Unknown."""

    status: str
    witness: dict | None = None

    def __str__(self):
        return self.status

    def to_json(self) -> dict:
        out = {"result": self.status}
        if self.witness is not None:
            out["witness"] = self.witness
        return out


EQUAL = Decision("Equal")
UNKNOWN = Decision("Unknown")


@dataclass(frozen=True, eq=False)
class Presentation:
    base: str
    generators: tuple[Generator, ...] = ()
    relations: tuple[Relation, ...] = ()

    def __post_init__(self):
        if self.base not in ("Bool", "Int", "Rat"):
            raise ValueError(f"unknown base {self.base!r}")
        object.__setattr__(self, "generators", tuple(self.generators))
        object.__setattr__(self, "relations", tuple(self.relations))
        names = self.names
        if len(set(names)) != len(names):
            raise ValueError("generator names must be unique")
        for rel in self.relations:
            for side in (rel.lhs, rel.rhs):
                self.check(side)

    # structural equality so that presentations can key caches
    def _key(self):
        return (self.base, self.generators,
                tuple((r.kind, r.lhs, r.rhs) for r in self.relations))

    def __eq__(self, other):
        return isinstance(other, Presentation) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    @property
    def names(self) -> list[str]:
        return [g.name for g in self.generators]

    @property
    def n(self) -> int:
        return len(self.generators)

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise UnknownGenerator(f"unknown generator {name!r}", name=name) from None

    def var(self, name: str, n: int = 1) -> TropPoly:
        return TropPoly.var(self.index(name), self.n, n)

    def const(self, c) -> TropPoly:
        return TropPoly.const(c, self.n)

    def zero(self) -> TropPoly:
        return TropPoly.const(0, self.n)

    def neg_inf(self) -> TropPoly:
        return TropPoly.neg_inf(self.n)

    @property
    def contracting(self) -> bool:
        return all(g.sort == CONTRACTING for g in self.generators)

    def check(self, e: TropPoly):
        if e.terms and e.nvars != self.n:
            raise UnknownGenerator(f"element has {e.nvars} exponent slots, presentation has {self.n}")
        for c in e.terms.values():
            if self.base == "Bool" and c != 0:
                raise TagMismatch(f"coefficient {c} is not in B")
            if self.base == "Int" and c.denominator != 1:
                raise TagMismatch(f"coefficient {c} is not in Z")

    def with_relations(self, extra: Iterable[Relation]) -> Presentation:
        return Presentation(self.base, self.generators, self.relations + tuple(extra))

    def format(self, e: TropPoly) -> str:
        return format_poly(e, self.names)

    @cached_property
    def split_relations(self) -> tuple[Relation, ...]:
        return tuple(r for rel in self.relations for r in split_relation(rel))

    @cached_property
    def klass(self) -> str:
        for rel in self.split_relations:
            if not (rel.lhs.is_term() and rel.rhs.is_term()):
                return GENERAL
        return MONOMIAL if self.model(_denom_for(self)) is not None else GENERAL

    def model(self, denom: int = 1) -> Optional[MonomialModel]:
        """The monoid model at coefficient denominator ``denom`` (None if not admissible)."""
        cache = self.__dict__.setdefault("_models", {})
        if denom not in cache:
            cache[denom] = MonomialModel.build(self, denom)
        return cache[denom]

    def to_dsl(self) -> str:
        head = {"Bool": "B", "Int": "Zv", "Rat": "Qv"}[self.base]
        lines = [f"semiring over {head};"]
        if self.generators:
            lines.append("gens " + ", ".join(
                g.name + (" contracting" if g.sort == CONTRACTING else "") for g in self.generators) + ";")
        for r in self.relations:
            op = "=" if r.kind == "Eq" else "<="
            lines.append(f"rel {self.format(r.lhs)} {op} {self.format(r.rhs)};")
        return "\n".join(lines) + "\n"


def split_relation(rel: Relation) -> list[Relation]:
    """Rewrite a relation into single-term pieces where that is an equivalence.

    A join is below a term iff each of its terms is; and ``F = m`` with ``m``
    one of the terms of F says exactly that the other terms are below ``m``.
    """
    lhs, rhs, kind = rel.lhs, rel.rhs, rel.kind
    if kind == "Eq" and lhs.is_term() and not rhs.is_term():
        lhs, rhs = rhs, lhs
    if rhs.is_term() and len(lhs.terms) > 1:
        (e, c), = rhs.terms.items()
        if kind == "Leq":
            return [Relation("Leq", TropPoly([t], lhs.nvars), rhs) for t in lhs.terms.items()]
        if lhs.terms.get(e) == c:
            return [Relation("Leq", TropPoly([t], lhs.nvars), rhs) for t in lhs.terms.items() if t[0] != e]
    return [Relation(kind, lhs, rhs)]


def format_term(exps: Sequence[int], c: Fraction, names: Sequence[str]) -> str:
    parts = [(f"{n}{names[i]}" if n > 1 else names[i]) for i, n in enumerate(exps) if n]
    if c != 0 or not parts:
        parts.append(str(c))
    return " + ".join(parts)


def format_poly(e: TropPoly, names: Sequence[str]) -> str:
    if e.is_neg_inf:
        return "-inf"
    terms = sorted(e.terms.items(), key=lambda t: (-sum(t[0]), tuple(-x for x in t[0]), -t[1]))
    out = [format_term(x, c, names) for x, c in terms]
    return " v ".join(f"({s})" if "+" in s and len(out) > 1 else s for s in out)


# -- constructors ---------------------------------------------------------


def free_semiring(base: str, names: Sequence[str]) -> Presentation:
    return Presentation(base, tuple(Generator(n, FREE) for n in names))


def freely_contracting(base: str, names: Sequence[str]) -> Presentation:
    return Presentation(base, tuple(Generator(n, CONTRACTING) for n in names))


# -- the monoid model -----------------------------------------------------


def _term_point(exps: Exps, c: Fraction, denom: int, twist: bool) -> tuple[int, ...]:
    if not twist:
        return tuple(exps)
    v = -c * denom
    if v.denominator != 1:
        raise ValueError("coefficient denominator exceeds the model's")
    return tuple(exps) + (int(v),)


class MonomialModel:
    """Elements of a monomial-admissible presentation as monoid modules.

    A term ``sum n_i X_i + c`` becomes the lattice point (n, -c*denom); the
    twist coordinate is absent over B. The monoid M consists of the
    differences known to be <= 0: contracting generators, the twist (-1 <= 0)
    and the relation differences. Units of M are quotiented out so that the
    remaining monoid is pointed; normal forms are then unique antichains.
    """

    def __init__(self, P: Presentation, denom: int, proj: list[tuple[int, ...]],
                 monoid: mi.AffineMonoid, has_units: bool):
        self.P = P
        self.denom = denom
        self.twist = P.base != "Bool"
        self.proj = proj
        self.monoid = monoid
        self.has_units = has_units

    @classmethod
    def build(cls, P: Presentation, denom: int) -> Optional[MonomialModel]:
        twist = P.base != "Bool"
        d = P.n + (1 if twist else 0)
        unit = lambda i: tuple(int(i == j) for j in range(d))
        gens = [unit(i) for i, g in enumerate(P.generators) if g.sort == CONTRACTING]
        if twist:
            gens.append(unit(P.n))
        pairs = []
        for rel in P.split_relations:
            if not (rel.lhs.is_term() and rel.rhs.is_term()):
                return None
            (e, c), (f, k) = rel.lhs.single(), rel.rhs.single()
            try:
                diff = mi._sub(_term_point(e, c, denom, twist), _term_point(f, k, denom, twist))
            except ValueError:
                return None
            pairs.append(diff)
            gens.append(diff)
            if rel.kind == "Eq":
                gens.append(tuple(-x for x in diff))
        equations, facets = mi.cone_hrep(gens, d)
        lin = [g for g in gens if any(g) and all(mi._dot(f, g) == 0 for f in facets)]
        if lin:
            proj, saturated = mi.lattice_projection(lin, d)
            # lineality must be spanned (as a group) by the generators lying in it
            full = mi.lattice_projection(
                [tuple(int(x) for x in v) for v in _lineality_basis(equations, facets, d)], d)[0]
            if not saturated or len(proj) != len(full):
                return None
        else:
            proj = [unit(i) for i in range(d)]
        img = [tuple(mi._dot(r, g) for r in proj) for g in gens]
        d2 = len(proj)
        eq2, fac2 = mi.cone_hrep(img, d2)
        ineqs = fac2 + eq2 + [tuple(-x for x in e) for e in eq2]
        monoid = mi.AffineMonoid(d2, ineqs)
        if pairs and not _saturated(monoid, img):
            return None
        return cls(P, denom, proj, monoid, bool(lin))

    def point(self, exps: Exps, c: Fraction) -> tuple[int, ...]:
        p = _term_point(exps, c, self.denom, self.twist)
        return tuple(mi._dot(r, p) for r in self.proj)

    def ideal(self, e: TropPoly) -> mi.MonoidIdeal:
        return mi.fractional(self.monoid, (self.point(x, c) for x, c in e.terms.items()))

    def leq(self, a: TropPoly, b: TropPoly) -> bool:
        return mi.leq(self.ideal(a), self.ideal(b))

    def term_of(self, q: tuple[int, ...], hint: tuple[Exps, Fraction]) -> tuple[Exps, Fraction]:
        """Canonical term for the lattice point q: least degree, then lex."""
        if not self.has_units:
            return hint
        n = self.P.n
        top = sum(hint[0])
        tw = self.point((0,) * n, Fraction(-1, self.denom)) if self.twist else None
        for deg in range(top + 1):
            for exps in _compositions(deg, n):
                base = self.point(exps, Fraction(0))
                diff = mi._sub(q, base)
                if not self.twist:
                    if not any(diff):
                        return exps, Fraction(0)
                    continue
                s = _solve_multiple(diff, tw)
                if s is not None:
                    return exps, Fraction(-s, self.denom)
        return hint

    def normal_form(self, e: TropPoly) -> TropPoly:
        by_point = {}
        for x, c in e.terms.items():
            by_point.setdefault(self.point(x, c), (x, c))
        gens = mi.fractional(self.monoid, by_point).generators
        return TropPoly([self.term_of(q, by_point[q]) for q in gens], self.P.n)


def _lineality_basis(equations, facets, d):
    import sympy

    rows = list(equations) + list(facets)
    if not rows:
        return [tuple(int(i == j) for j in range(d)) for i in range(d)]
    return [list(v) for v in sympy.Matrix(rows).nullspace()]


def _saturated(M: mi.AffineMonoid, gens: Sequence[tuple[int, ...]]) -> bool:
    """Does the N-span of gens exhaust the lattice points of their cone?"""
    if M.rank > MAX_HILBERT_CHECK:
        return False
    if M.rank == 0:
        return True
    grade = M.grading()
    return all(mi.in_span(h, gens, grade) for h in mi.hilbert_basis(M))


def _compositions(total: int, parts: int):
    if parts == 0:
        if total == 0:
            yield ()
        return
    for first in range(total, -1, -1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def _solve_multiple(diff, step) -> Optional[int]:
    """Integer s with diff = s * step, if any."""
    s = None
    for x, y in zip(diff, step):
        if y == 0:
            if x != 0:
                return None
            continue
        if x % y:
            return None
        if s is None:
            s = x // y
        elif s != x // y:
            return None
    return 0 if s is None else s


def _denom_for(P: Presentation, *elems: TropPoly) -> int:
    if P.base != "Rat":
        return 1
    ds = {1}
    for r in P.relations:
        ds |= r.lhs.denominators() | r.rhs.denominators()
    for e in elems:
        ds |= e.denominators()
    return lcm(*ds)


# -- normalization and equality -------------------------------------------


def prune(e: TropPoly, P: Presentation) -> TropPoly:
    """Drop terms dominated through the contracting sorts alone."""
    contracting = [g.sort == CONTRACTING for g in P.generators]

    def below(t, u):
        (x, c), (y, k) = t, u
        if c > k:
            return False
        return all(a == b or (a > b and ok) for a, b, ok in zip(x, y, contracting))

    items = list(e.terms.items())
    keep = [t for t in items if not any(u != t and below(t, u) for u in items)]
    return TropPoly(keep, P.n)


def normalize(e: TropPoly, P: Presentation) -> TropPoly:
    P.check(e)
    if P.klass == MONOMIAL:
        return P.model(_denom_for(P, e)).normal_form(e)
    return prune(e, P)


def _model_witness(model: MonomialModel, a: TropPoly, b: TropPoly) -> dict:
    A, B = model.ideal(a), model.ideal(b)
    for x, c in sorted(a.terms.items()):
        if not B.contains(model.point(x, c)):
            return {"kind": "term", "term": model.P.format(TropPoly([(x, c)], model.P.n)), "side": "left"}
    for x, c in sorted(b.terms.items()):
        if not A.contains(model.point(x, c)):
            return {"kind": "term", "term": model.P.format(TropPoly([(x, c)], model.P.n)), "side": "right"}
    return {"kind": "term"}


def eq(a: TropPoly, b: TropPoly, P: Presentation, depth: int = REWRITE_DEPTH) -> Decision:
    """Decide a = b. Complete for monomial-admissible presentations."""
    P.check(a)
    P.check(b)
    if P.klass == MONOMIAL:
        model = P.model(_denom_for(P, a, b))
        if model.normal_form(a) == model.normal_form(b):
            return EQUAL
        point = separating_point(a, b, P)
        return Decision("Distinct", point or _model_witness(model, a, b))
    na, nb = prune(a, P), prune(b, P)
    if na == nb or _rewrite_meet(na, nb, P, depth):
        return EQUAL
    point = separating_point(a, b, P)
    if point is not None:
        return Decision("Distinct", point)
    return UNKNOWN


def leq(a: TropPoly, b: TropPoly, P: Presentation) -> Decision:
    """a <= b, reported as the decision of a v b = b."""
    return eq(poly_join(a, b), b, P)


def is_integral(e: TropPoly, P: Presentation) -> Optional[bool]:
    d = leq(e, P.zero(), P)
    return {"Equal": True, "Distinct": False}.get(d.status)


def _rewrite_meet(a: TropPoly, b: TropPoly, P: Presentation, depth: int) -> bool:
    """Bounded saturation of both sides by relation instances.

    Only moves that add a term already implied to be below the element are
    used, so everything reached equals the start; meeting proves equality.
    """
    rules = []
    for rel in P.split_relations:
        rules.append((rel.rhs, rel.lhs))  # lhs <= rhs: rhs below e gives lhs below e
        if rel.kind == "Eq":
            rules.append((rel.lhs, rel.rhs))
    seen_a, seen_b = {a}, {b}
    front_a, front_b = [a], [b]
    for _ in range(depth):
        if seen_a & seen_b:
            return True
        front_a = _rewrite_step(front_a, seen_a, rules, P)
        front_b = _rewrite_step(front_b, seen_b, rules, P)
        if not front_a and not front_b:
            break
    return bool(seen_a & seen_b)


def _dominated_by(term: tuple[Exps, Fraction], e: TropPoly, P: Presentation) -> bool:
    return prune(poly_join(e, TropPoly([term], P.n)), P) == prune(e, P)


def _rewrite_step(front, seen, rules, P):
    nxt = []
    for e in front:
        for src, dst in rules:
            if src.is_neg_inf:
                continue
            for x, c in e.terms.items():
                for y, k in src.terms.items():
                    shift = tuple(p - q for p, q in zip(x, y))
                    if any(s < 0 for s in shift):
                        continue
                    moved = TropPoly([(tuple(a + s for a, s in zip(z, shift)), v + c - k)
                                      for z, v in src.terms.items()], P.n)
                    if not all(_dominated_by(t, e, P) for t in moved.terms.items()):
                        continue
                    image = TropPoly([(tuple(a + s for a, s in zip(z, shift)), v + c - k)
                                      for z, v in dst.terms.items()], P.n)
                    new = prune(poly_join(e, image), P)
                    if new not in seen:
                        seen.add(new)
                        nxt.append(new)
                    if len(seen) > REWRITE_WIDTH:
                        return nxt
    return nxt


# -- evaluation -----------------------------------------------------------


def _coerce_coeff(c: Fraction, base: str, tag: str) -> SemifieldValue:
    if tag == "Bool":
        if base == "Bool":
            return SemifieldValue("Bool", Fraction(0))
        return reduce_to_bool(SemifieldValue("Rat", c))
    if tag == "Int" and c.denominator != 1:
        raise TagMismatch(f"coefficient {c} does not live in Z_v")
    return SemifieldValue(tag, c)


def eval_raw(e: TropPoly, values: Sequence[Optional[Fraction]], base: str, tag: str) -> SemifieldValue:
    """Evaluate with no sort or relation checks; values[i] is None for -inf."""
    best: Optional[Fraction] = None
    for exps, c in e.terms.items():
        cv = _coerce_coeff(c, base, tag).value
        if cv is None:
            continue
        total = cv
        for n, v in zip(exps, values):
            if n:
                if v is None:
                    total = None
                    break
                total += n * v
        if total is not None and (best is None or total > best):
            best = total
    return SemifieldValue(tag, best)


def _point_values(pt: Mapping[str, SemifieldValue], P: Presentation):
    missing = [g for g in P.names if g not in pt]
    if missing:
        raise UnknownGenerator(f"no value for {missing[0]!r}", name=missing[0])
    for k in pt:
        P.index(k)
    tags = {v.tag for v in pt.values()}
    if len(tags) > 1:
        raise TagMismatch("point values live in different semifields")
    tag = tags.pop() if tags else ("Rat" if P.base != "Bool" else "Bool")
    return [pt[g].value for g in P.names], tag


def check_point(pt: Mapping[str, SemifieldValue], P: Presentation):
    values, tag = _point_values(pt, P)
    for g, v in zip(P.generators, values):
        if g.sort == CONTRACTING and v is not None and v > 0:
            raise SortViolated(f"{g.name} is contracting but takes value {v}", generator=g.name)
    for i, rel in enumerate(P.relations):
        l = eval_raw(rel.lhs, values, P.base, tag)
        r = eval_raw(rel.rhs, values, P.base, tag)
        ok = l.key() == r.key() if rel.kind == "Eq" else l.key() <= r.key()
        if not ok:
            raise RelationViolated(f"relation {i} fails at the point", relation=i)
    return values, tag


def eval(e: TropPoly, pt: Mapping[str, SemifieldValue], P: Presentation) -> SemifieldValue:
    """Substitute a point that respects sorts and relations."""
    P.check(e)
    values, tag = check_point(pt, P)
    return eval_raw(e, values, P.base, tag)


def satisfies(values: Sequence[Optional[Fraction]], P: Presentation, tag: str) -> bool:
    for g, v in zip(P.generators, values):
        if g.sort == CONTRACTING and v is not None and v > 0:
            return False
    for rel in P.relations:
        try:
            l = eval_raw(rel.lhs, values, P.base, tag)
            r = eval_raw(rel.rhs, values, P.base, tag)
        except Exception:
            return False
        if not (l.key() == r.key() if rel.kind == "Eq" else l.key() <= r.key()):
            return False
    return True


PROBE_VALUES = (None, Fraction(0), Fraction(-1), Fraction(-1, 2), Fraction(-2))
PROBE_POSITIVE = (Fraction(1), Fraction(1, 2), Fraction(2))
PROBE_CAP = 20000


def separating_point(a: TropPoly, b: TropPoly, P: Presentation) -> Optional[dict]:
    """Search small B-points and rational points for one where a and b differ."""
    names = P.names
    # B-points first: they are the cheapest and the most informative
    if P.base == "Bool" and P.n <= 12:
        for vals in itertools.product((Fraction(0), None), repeat=P.n):
            if satisfies(vals, P, "Bool"):
                if eval_raw(a, vals, P.base, "Bool") != eval_raw(b, vals, P.base, "Bool"):
                    return _witness(names, vals, "B-point")
    choices = [PROBE_VALUES + (() if g.sort == CONTRACTING else PROBE_POSITIVE) for g in P.generators]
    total = 1
    for c in choices:
        total *= len(c)
    if total > PROBE_CAP:
        return None
    for vals in itertools.product(*choices):
        if satisfies(vals, P, "Rat"):
            if eval_raw(a, vals, P.base, "Rat") != eval_raw(b, vals, P.base, "Rat"):
                return _witness(names, vals, "real-point")
    return None


def _witness(names, vals, kind) -> dict:
    return {"kind": kind, "point": {n: ("-inf" if v is None else str(v)) for n, v in zip(names, vals)}}


# -- homomorphisms --------------------------------------------------------


def _default_coeff_map(src: str, dst: str):
    if src == dst or (src == "Int" and dst == "Rat") or src == "Bool":
        return lambda c: c if dst != "Bool" else Fraction(0)
    if dst == "Bool":
        return lambda c: Fraction(0)  # the only semifield map to B
    raise BaseMismatch(f"no canonical map {src} -> {dst}")


@dataclass
class SemiringHom:
    source: Presentation
    target: Presentation
    images: tuple[TropPoly, ...]
    coeff_map: object = field(default=None, repr=False)

    def __post_init__(self):
        self.images = tuple(self.images)
        if len(self.images) != self.source.n:
            raise ValueError("need one image per source generator")
        if self.coeff_map is None:
            self.coeff_map = _default_coeff_map(self.source.base, self.target.base)

    def apply(self, e: TropPoly) -> TropPoly:
        out = TropPoly.neg_inf(self.target.n)
        for exps, c in e.terms.items():
            term = TropPoly.const(self.coeff_map(c), self.target.n)
            for img, k in zip(self.images, exps):
                if k:
                    term = poly_plus(term, poly_scale(img, k))
            out = poly_join(out, term)
        return out

    def check(self) -> Optional[bool]:
        """Verify sorts and relations in the target; None when undecided."""
        verdicts = []
        for g, img in zip(self.source.generators, self.images):
            if g.sort == CONTRACTING:
                verdicts.append(leq(img, self.target.zero(), self.target).status)
        for rel in self.source.relations:
            l, r = self.apply(rel.lhs), self.apply(rel.rhs)
            d = eq(l, r, self.target) if rel.kind == "Eq" else leq(l, r, self.target)
            verdicts.append(d.status)
        if "Distinct" in verdicts:
            return False
        return None if "Unknown" in verdicts else True

    def compose(self, other: SemiringHom) -> SemiringHom:
        """other after self."""
        f, g = self.coeff_map, other.coeff_map
        return SemiringHom(self.source, other.target, [other.apply(i) for i in self.images],
                           lambda c: g(f(c)))


def identity_hom(P: Presentation) -> SemiringHom:
    return SemiringHom(P, P, [P.var(n) for n in P.names])


def is_inverse_pair(f: SemiringHom, g: SemiringHom) -> Optional[bool]:
    """Do f and g compose to the identity both ways (on generators)?"""
    verdicts = [f.check(), g.check()]
    for h, P in ((f.compose(g), f.source), (g.compose(f), g.source)):
        for name, img in zip(P.names, h.images):
            verdicts.append({"Equal": True, "Distinct": False}.get(eq(img, P.var(name), P).status))
    if False in verdicts:
        return False
    return None if None in verdicts else True


def _embed(e: TropPoly, offset: int, n: int) -> TropPoly:
    return TropPoly([((0,) * offset + x + (0,) * (n - offset - len(x)), c) for x, c in e.terms.items()], n)


def tensor_sum(P1: Presentation, P2: Presentation) -> tuple[Presentation, SemiringHom, SemiringHom]:
    """Coproduct over the common base, with clashing names of P2 renamed."""
    if P1.base != P2.base:
        raise BaseMismatch(f"{P1.base} vs {P2.base}", left=P1.base, right=P2.base)
    taken = set(P1.names)
    renamed = []
    for g in P2.generators:
        name, k = g.name, 2
        while name in taken:
            name = f"{g.name}_{k}"
            k += 1
        taken.add(name)
        renamed.append(Generator(name, g.sort))
    n = P1.n + P2.n
    rels = [Relation(r.kind, _embed(r.lhs, 0, n), _embed(r.rhs, 0, n)) for r in P1.relations]
    rels += [Relation(r.kind, _embed(r.lhs, P1.n, n), _embed(r.rhs, P1.n, n)) for r in P2.relations]
    P = Presentation(P1.base, P1.generators + tuple(renamed), tuple(rels))
    inc1 = SemiringHom(P1, P, [TropPoly.var(i, n) for i in range(P1.n)])
    inc2 = SemiringHom(P2, P, [TropPoly.var(P1.n + i, n) for i in range(P2.n)])
    return P, inc1, inc2


def contracting_quotient(P: Presentation) -> tuple[Presentation, SemiringHom]:
    """The universal contracting quotient: every generator and constant <= 0.

    Over Z_v or Q_v all constants collapse to 0, so the base becomes B.
    """
    zero = lambda c: Fraction(0)
    gens = tuple(Generator(g.name, CONTRACTING) for g in P.generators)
    def squash(e):
        return TropPoly([(x, Fraction(0)) for x in e.terms], P.n)
    rels = tuple(Relation(r.kind, squash(r.lhs), squash(r.rhs)) for r in P.relations)
    Q = Presentation("Bool", gens, rels)
    return Q, SemiringHom(P, Q, [Q.var(n) for n in Q.names], zero)
