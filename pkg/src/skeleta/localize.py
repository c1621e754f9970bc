"""Bounded, cellular and free localizations.

Presentation-level localizations just add a generator ``Y`` standing for
``-S`` together with the bound relation. Free localization of a monomial
semiring at an ideal I is modelled concretely by Rees elements ``J - nI``.

>>> from skeleta.monoid_ideal import AffineMonoid, MonoidIdeal
>>> N2 = AffineMonoid.orthant(2)
>>> R = ReesModel(N2, MonoidIdeal(N2, [(1, 0), (0, 1)]))
>>> eq_localized(R.plus(R.inverse(), R.embed(R.I)), R.embed(MonoidIdeal.unit(N2)), R).status
'Equal'
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Optional, Union

from . import monoid_ideal as mi
from .errors import BoundNotAdmissible, MonoidMismatch, NotIntegral, ZeroIdeal
from .presentation import (CONTRACTING, EQUAL, FREE, MONOMIAL, UNKNOWN, Decision, Generator,
                           Presentation, Relation, SemiringHom, TropPoly, _compositions, _denom_for,
                           _solve_multiple, eq, is_integral, leq, normalize, poly_join,
                           poly_plus, satisfies)

K_MAX = 32

ZERO = "zero"
SELF = "self"


@dataclass(frozen=True)
class LocalizationSpec:
    """Invert S with inverse bounded above by -T.

    ``T`` is an element, ``"zero"`` (cellular) or ``"self"`` (free: some
    invertible term of S bounds it below). With ``negated`` the element to
    invert is -S rather than S.
    """

    S: TropPoly
    T: Union[TropPoly, str] = ZERO
    negated: bool = False

    @property
    def cellular(self) -> bool:
        return isinstance(self.T, str) and self.T == ZERO

    @property
    def free(self) -> bool:
        return isinstance(self.T, str) and self.T == SELF


def inverse_term(e: TropPoly, P: Presentation, max_degree: int = 8) -> Optional[TropPoly]:
    """A term t with e + t = 0, if e is invertible (searched by degree)."""
    nf = normalize(e, P)
    if not nf.is_term():
        return None
    x, c = nf.single()
    if not any(x):
        return P.const(-c)
    if P.klass != MONOMIAL:
        return None
    model = P.model(_denom_for(P, e))
    target = tuple(-v for v in model.point(x, c))
    tw = model.point((0,) * P.n, Fraction(-1, model.denom)) if model.twist else None
    for deg in range(1, max_degree + 1):
        for exps in _compositions(deg, P.n):
            diff = mi._sub(target, model.point(exps, Fraction(0)))
            if tw is None:
                if not any(diff):
                    return TropPoly([(exps, Fraction(0))], P.n)
                continue
            s = _solve_multiple(diff, tw)
            if s is not None:
                cand = TropPoly([(exps, Fraction(-s, model.denom))], P.n)
                if eq(poly_plus(nf, cand), P.zero(), P).status == "Equal":
                    return cand
    return None


def _fresh(P: Presentation, stem: str = "Y") -> str:
    name, k = stem, 1
    while name in P.names:
        k += 1
        name = f"{stem}{k}"
    return name


def _extend(e: TropPoly, n: int) -> TropPoly:
    return TropPoly([(x + (0,) * (n - len(x)), c) for x, c in e.terms.items()], n)


def _check_spec(P: Presentation, spec: LocalizationSpec):
    if spec.negated:
        if leq(P.zero(), spec.S, P).status != "Equal":
            raise NotIntegral("-S is not known to be <= 0")
    elif not spec.free and is_integral(spec.S, P) is not True:
        raise NotIntegral("S is not known to be <= 0")
    if isinstance(spec.T, TropPoly):
        if is_integral(spec.T, P) is not True:
            raise BoundNotAdmissible("bound is not integral")
        if inverse_term(spec.T, P) is None:
            raise BoundNotAdmissible("bound is not invertible")
    if spec.free:
        if not any(inverse_term(TropPoly([t], P.n), P) is not None for t in spec.S.terms.items()):
            raise BoundNotAdmissible("S has no invertible term to bound it below")


def bounded_localization(P: Presentation, spec: LocalizationSpec) -> tuple[Presentation, SemiringHom]:
    """The universal map making S invertible with inverse at most -T."""
    _check_spec(P, spec)
    if spec.cellular:
        # S = 0 (or, for a negated S, the element under the minus is 0)
        Q = P.with_relations([Relation("Eq", spec.S, P.zero())])
        return Q, SemiringHom(P, Q, [Q.var(x) for x in P.names])
    if spec.negated:
        # -S already has the inverse S; only the bound is new
        if spec.free:
            Q = P
        else:
            Q = P.with_relations([Relation("Leq", poly_plus(spec.T, spec.S), P.zero())])
        return Q, SemiringHom(P, Q, [Q.var(x) for x in P.names])
    y = _fresh(P)
    n = P.n + 1
    Y = TropPoly.var(P.n, n)
    rels = [Relation(r.kind, _extend(r.lhs, n), _extend(r.rhs, n)) for r in P.relations]
    rels.append(Relation("Eq", poly_plus(_extend(spec.S, n), Y), TropPoly.const(0, n)))
    if isinstance(spec.T, TropPoly):
        rels.append(Relation("Leq", poly_plus(_extend(spec.T, n), Y), TropPoly.const(0, n)))
    Q = Presentation(P.base, P.generators + (Generator(y, FREE),), tuple(rels))
    return Q, SemiringHom(P, Q, [TropPoly.var(i, n) for i in range(P.n)])


@dataclass
class Factorization:
    subdivision: LocalizationSpec  # at S v T with bound T, free since T <= S v T
    cellular: LocalizationSpec  # at S - (S v T), over the subdivided presentation
    subdivided: Presentation
    result: Presentation
    trivial_subdivision: bool
    trivial_cellular: bool


def factor_cellular_subdivision(P: Presentation, spec: LocalizationSpec) -> Factorization:
    """Split a bounded localization through P{T - (S v T)}."""
    if spec.negated or spec.free:
        raise ValueError("factorization needs an explicit S and bound")
    _check_spec(P, spec)
    T = P.zero() if spec.cellular else spec.T
    ST = poly_join(spec.S, T)
    triv_sub = eq(ST, T, P).status == "Equal"  # S v T already invertible
    if triv_sub:
        sub_P = P
        ST_inv = inverse_term(T, P)
        cell_elem = poly_plus(spec.S, ST_inv)
    else:
        sub_P, _ = bounded_localization(P, LocalizationSpec(ST, T))
        Y = TropPoly.var(P.n, sub_P.n)
        cell_elem = poly_plus(_extend(spec.S, sub_P.n), Y)
    sub_spec = LocalizationSpec(ST, T)
    cell_spec = LocalizationSpec(cell_elem, ZERO)
    triv_cell = eq(cell_elem, sub_P.zero(), sub_P).status == "Equal"
    result = sub_P if triv_cell else sub_P.with_relations([Relation("Eq", cell_elem, sub_P.zero())])
    return Factorization(sub_spec, cell_spec, sub_P, result, triv_sub, triv_cell)


def point_restrictions(P: Presentation, names: list[str], values=None) -> set:
    """Restrictions to ``names`` of the small real points of P (hom-set probe)."""
    from .presentation import PROBE_POSITIVE, PROBE_VALUES

    vals = values or PROBE_VALUES + PROBE_POSITIVE
    choices = [[v for v in vals if g.sort != CONTRACTING or v is None or v <= 0] for g in P.generators]
    idx = [P.index(x) for x in names]
    out = set()
    for pt in itertools.product(*choices):
        if satisfies(pt, P, "Rat"):
            out.add(tuple(pt[i] for i in idx))
    return out


def same_points(P1: Presentation, P2: Presentation, names: list[str]) -> bool:
    """Do two presentations have the same small real points over the shared generators?"""
    return point_restrictions(P1, names) == point_restrictions(P2, names)


# -- Rees model -----------------------------------------------------------


@dataclass(frozen=True)
class ReesElement:
    J: mi.MonoidIdeal
    n: int


class ReesModel:
    """Free localization of the monoid-ideal semiring at a nonzero ideal I."""

    def __init__(self, monoid: mi.AffineMonoid, I: mi.MonoidIdeal, k_max: int = K_MAX):
        if I.is_neg_inf:
            raise ZeroIdeal("cannot invert the zero ideal")
        if I.monoid != monoid:
            raise MonoidMismatch("I lives in another monoid")
        if not all(monoid.contains(g) for g in I.generators):
            raise NotIntegral("I is not integral")
        self.monoid = monoid
        self.I = I
        self.k_max = k_max
        self._powers = [mi.MonoidIdeal.unit(monoid)]

    def power(self, k: int) -> mi.MonoidIdeal:
        while len(self._powers) <= k:
            self._powers.append(mi.plus(self._powers[-1], self.I))
        return self._powers[k]

    @property
    def principal(self) -> bool:
        return len(self.I.generators) == 1

    def embed(self, J: mi.MonoidIdeal) -> ReesElement:
        return self.canonical(ReesElement(J, 0))

    def inverse(self) -> ReesElement:
        """-I, i.e. the unit ideal with one twist."""
        return ReesElement(mi.MonoidIdeal.unit(self.monoid), 1)

    def join(self, a: ReesElement, b: ReesElement) -> ReesElement:
        J = mi.join(mi.plus(a.J, self.power(b.n)), mi.plus(b.J, self.power(a.n)))
        return self.canonical(ReesElement(J, a.n + b.n))

    def plus(self, a: ReesElement, b: ReesElement) -> ReesElement:
        return self.canonical(ReesElement(mi.plus(a.J, b.J), a.n + b.n))

    def canonical(self, a: ReesElement) -> ReesElement:
        """Lower the twist while J is exactly divisible by I."""
        J, n = a.J, a.n
        while n > 0 and not J.is_neg_inf:
            Q = colon(J, self.I)
            if Q is None or mi.plus(Q, self.I) != J:
                break
            J, n = Q, n - 1
        if J.is_neg_inf:
            n = 0
        return ReesElement(J, n)


def colon(J: mi.MonoidIdeal, I: mi.MonoidIdeal) -> Optional[mi.MonoidIdeal]:
    """(J : I) for ideals of an orthant monoid; None for other monoids."""
    M = J.monoid
    d = M.rank
    if sorted(M.inequalities) != sorted(mi.AffineMonoid.orthant(d).inequalities):
        return None
    result = None
    for g in I.generators:
        part = mi.MonoidIdeal(M, [tuple(max(a - b, 0) for a, b in zip(j, g)) for j in J.generators])
        result = part if result is None else _intersect(result, part)
    return result


def _intersect(A: mi.MonoidIdeal, B: mi.MonoidIdeal) -> mi.MonoidIdeal:
    return mi.MonoidIdeal(A.monoid, [tuple(max(x, y) for x, y in zip(a, b)) for a in A.generators for b in B.generators])


def _weights(M: mi.AffineMonoid, bound: int = 6) -> list[tuple[int, ...]]:
    """Integer covectors that are <= 0 on M: the real points used as witnesses."""
    out = []
    for v in itertools.product(range(-bound, bound + 1), repeat=M.rank):
        if not any(v):
            continue
        g = 0
        for x in v:
            g = gcd(g, abs(x))
        if g != 1:
            continue
        # v <= 0 on the cone iff -v lies in the dual cone; test on rays
        rays = mi.extreme_rays(M) if M.pointed else None
        if rays is not None and all(mi._dot(v, r) <= 0 for r in rays):
            out.append(v)
    return out


def _value(J: mi.MonoidIdeal, v) -> Optional[int]:
    return max((mi._dot(v, g) for g in J.generators), default=None)


def eq_localized(a: ReesElement, b: ReesElement, R: ReesModel, k_max: int | None = None) -> Decision:
    """Decide J1 - n1 I = J2 - n2 I, i.e. J1 + (n2+k)I = J2 + (n1+k)I for some k."""
    k_max = R.k_max if k_max is None else k_max
    if a.J.monoid != R.monoid or b.J.monoid != R.monoid:
        raise MonoidMismatch("elements live in another model")
    if a == b:
        return EQUAL
    if R.principal:
        # adding a single point is injective, so k = 0 decides
        L, Rr = mi.plus(a.J, R.power(b.n)), mi.plus(b.J, R.power(a.n))
        return EQUAL if L == Rr else Decision("Distinct", {"kind": "exact", "k": 0})
    witness = _separating_weight(a, b, R)
    if witness is not None:
        return Decision("Distinct", witness)
    L, Rr = mi.plus(a.J, R.power(b.n)), mi.plus(b.J, R.power(a.n))
    prev = None
    for k in range(k_max + 1):
        if L == Rr:
            return EQUAL
        gap = _gap(L, Rr, R, k)
        if prev is not None and gap == prev:
            return Decision("Distinct", {"kind": "stable", "k": k})
        prev = gap
        L, Rr = mi.plus(L, R.I), mi.plus(Rr, R.I)
    return UNKNOWN


def _gap(L: mi.MonoidIdeal, Rr: mi.MonoidIdeal, R: ReesModel, k: int):
    """Colon-reduced difference of the two sides, comparable across k."""
    Ck = R.power(k)
    cl, cr = colon(L, Ck), colon(Rr, Ck)
    if cl is None or cr is None:
        return None
    return (cl.generators, cr.generators)


def _separating_weight(a: ReesElement, b: ReesElement, R: ReesModel) -> Optional[dict]:
    for v in _weights(R.monoid):
        vi = _value(R.I, v)
        va, vb = _value(a.J, v), _value(b.J, v)
        fa = None if va is None else va - a.n * vi
        fb = None if vb is None else vb - b.n * vi
        if fa != fb:
            return {"kind": "real-point", "weight": list(v),
                    "values": [None if fa is None else str(fa), None if fb is None else str(fb)]}
    return None
