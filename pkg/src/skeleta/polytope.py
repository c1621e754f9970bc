"""Rational polyhedra, their semirings of integral affine functions, and fans.

A polytope is {x : <f_i, x> <= lambda_i}. Lattice points (m, n) of M + Z stand
for the affine functions x -> <m, x> - n, so (0, 1) is the constant -1 and the
integral monoid is the set of functions that are <= 0 on the polytope.

>>> I = RationalPolytope.interval(0, 2)
>>> PS = polytope_semiring(I)
>>> [PS.describe(i) for i in range(PS.presentation.n)]
['X - 2', '-X']
>>> PS.presentation.to_dsl().splitlines()[-1]
'rel U1 + U2 = -2;'
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence, Union

import networkx as nx
import sympy

from . import monoid_ideal as mi
from .dsl import parse_terms
from .errors import (IncompatibleFan, NoVertex, NotFullDimensional, NotMember, PointOutside,
                     RankTooLarge, SkeletaError)
from .presentation import (CONTRACTING, Generator, Presentation, Relation, SemiringHom, TropPoly,
                           eq, normalize, poly_sup)
from .semifield import SemifieldValue

MAX_RANK = 3
MAX_HALFSPACES = 16
COORDS = ("X", "Y", "Z")

Vector = tuple[Fraction, ...]
Affine = tuple[tuple[int, ...], Fraction]  # x -> <m, x> + c


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


def _solve(rows: Sequence[Sequence[int]], rhs: Sequence[Fraction]) -> Optional[Vector]:
    A = sympy.Matrix(rows)
    if A.det() == 0:
        return None
    sol = A.LUsolve(sympy.Matrix([sympy.Rational(x.numerator, x.denominator) for x in rhs]))
    return tuple(Fraction(int(v.p), int(v.q)) for v in sol)


def _dot(a: Sequence, b: Sequence):
    return sum(x * y for x, y in zip(a, b))


@dataclass(frozen=True)
class Face:
    active: frozenset[int]  # indices of the halfspaces tight on the face
    vertices: tuple[Vector, ...]
    rays: tuple[tuple[int, ...], ...]
    dim: int

    def contains_face(self, other: Face) -> bool:
        return set(other.vertices) <= set(self.vertices) and set(other.rays) <= set(self.rays)

    @property
    def barycenter(self) -> Vector:
        k = len(self.vertices)
        pt = [sum(v[i] for v in self.vertices) / k for i in range(len(self.vertices[0]))]
        for r in self.rays:
            pt = [p + x for p, x in zip(pt, r)]
        return tuple(pt)

    def label(self) -> str:
        vs = ",".join("(" + ",".join(str(x) for x in v) + ")" for v in self.vertices)
        if self.rays:
            vs += " + rays " + ",".join("(" + ",".join(map(str, r)) + ")" for r in self.rays)
        return "{" + vs + "}"


class RationalPolytope:
    """A pointed rational polyhedron given by integer halfspaces <f, x> <= lambda."""

    def __init__(self, rank: int, halfspaces: Sequence[tuple[Sequence[int], object]]):
        if rank > MAX_RANK:
            raise RankTooLarge(f"rank {rank} > {MAX_RANK}", rank=rank)
        hs = []
        for f, lam in halfspaces:
            f = tuple(int(x) for x in f)
            if len(f) != rank:
                raise ValueError(f"covector {f} has wrong length for rank {rank}")
            hs.append((f, _frac(lam)))
        self.rank = rank
        self.halfspaces = tuple(hs)
        self.vertices = self._vertices()
        self.rays = self._rays()
        self._faces = None

    @classmethod
    def interval(cls, a, b) -> RationalPolytope:
        return cls(1, [((1,), b), ((-1,), -_frac(a))])

    @classmethod
    def box(cls, lows: Sequence, highs: Sequence) -> RationalPolytope:
        d = len(lows)
        hs = []
        for i in range(d):
            e = tuple(int(i == j) for j in range(d))
            hs.append((e, highs[i]))
            hs.append((tuple(-x for x in e), -_frac(lows[i])))
        return cls(d, hs)

    @classmethod
    def point(cls) -> RationalPolytope:
        return cls(0, [])

    def _vertices(self) -> tuple[Vector, ...]:
        d = self.rank
        if d == 0:
            return ((),)
        if not self.halfspaces or sympy.Matrix([f for f, _ in self.halfspaces]).rank() < d:
            raise NoVertex("halfspace normals do not span: no vertex")
        found = set()
        for subset in itertools.combinations(range(len(self.halfspaces)), d):
            x = _solve([self.halfspaces[i][0] for i in subset], [self.halfspaces[i][1] for i in subset])
            if x is not None and self.contains(x):
                found.add(x)
        if not found:
            raise NoVertex("polytope is empty")
        return tuple(sorted(found))

    def _rays(self) -> tuple[tuple[int, ...], ...]:
        if self.rank == 0:
            return ()
        rec = mi.AffineMonoid(self.rank, [tuple(-x for x in f) for f, _ in self.halfspaces])
        return tuple(mi.extreme_rays(rec))

    @property
    def bounded(self) -> bool:
        return not self.rays

    def contains(self, x: Sequence) -> bool:
        return all(_dot(f, x) <= lam for f, lam in self.halfspaces)

    def tight(self, x: Sequence) -> frozenset[int]:
        return frozenset(i for i, (f, lam) in enumerate(self.halfspaces) if _dot(f, x) == lam)

    def dimension(self) -> int:
        return _affine_dim(self.vertices, self.rays)

    def faces(self) -> list[Face]:
        if self._faces is None:
            self._faces = face_lattice(self)
        return self._faces

    def face_of_point(self, x: Sequence) -> Face:
        """The face whose relative interior contains x."""
        A = self.tight(x)
        for F in self.faces():
            if F.active == A:
                return F
        raise PointOutside("point is not in the polytope")

    def scaled(self, k) -> RationalPolytope:
        return RationalPolytope(self.rank, [(f, lam * k) for f, lam in self.halfspaces])

    def to_json(self) -> dict:
        return {"rank": self.rank, "halfspaces": [{"f": list(f), "lambda": str(lam)} for f, lam in self.halfspaces]}

    @classmethod
    def from_json(cls, data: dict) -> RationalPolytope:
        return cls(data["rank"], [(h["f"], Fraction(str(h["lambda"]))) for h in data["halfspaces"]])

    def __repr__(self):
        return f"RationalPolytope(rank={self.rank}, vertices={[tuple(map(str, v)) for v in self.vertices]})"


def _affine_dim(vertices, rays) -> int:
    if not vertices:
        return -1
    v0 = vertices[0]
    dirs = [tuple(a - b for a, b in zip(v, v0)) for v in vertices[1:]] + [tuple(r) for r in rays]
    dirs = [d for d in dirs if any(d)]
    if not dirs:
        return 0
    return sympy.Matrix([[sympy.nsimplify(x) for x in d] for d in dirs]).rank()


def face_lattice(P: RationalPolytope) -> list[Face]:
    """All nonempty faces by active-set enumeration, smallest first."""
    h = len(P.halfspaces)
    if h > MAX_HALFSPACES:
        raise SkeletaError(f"{h} halfspaces exceeds the face enumeration cap")
    tight_v = {v: P.tight(v) for v in P.vertices}
    faces = {}
    for size in range(h + 1):
        for A in itertools.combinations(range(h), size):
            A = frozenset(A)
            V = tuple(v for v in P.vertices if A <= tight_v[v])
            if not V:
                continue
            R = tuple(r for r in P.rays if all(_dot(P.halfspaces[i][0], r) == 0 for i in A))
            active = frozenset(i for i in range(h)
                               if all(i in tight_v[v] for v in V) and all(_dot(P.halfspaces[i][0], r) == 0 for r in R))
            if active not in faces:
                faces[active] = Face(active, V, R, _affine_dim(V, R))
    return sorted(faces.values(), key=lambda F: (F.dim, F.vertices, F.rays))


def face_poset(P: RationalPolytope) -> nx.DiGraph:
    """Faces ordered by inclusion: an edge G -> F whenever G is a proper face of F."""
    faces = P.faces()
    G = nx.DiGraph()
    G.add_nodes_from(range(len(faces)))
    for i, A in enumerate(faces):
        for j, B in enumerate(faces):
            if i != j and B.contains_face(A):
                G.add_edge(i, j)
    return G


def cone_over(P: RationalPolytope) -> mi.AffineMonoid:
    """Integral affine functions that are <= 0 on P, as a monoid in M + Z."""
    rows = []
    for v in P.vertices:
        den = math.lcm(*(x.denominator for x in v)) if v else 1
        rows.append(tuple(-int(x * den) for x in v) + (den,))
    for r in P.rays:
        rows.append(tuple(-x for x in r) + (0,))
    return mi.AffineMonoid(P.rank + 1, sorted(set(rows)))


# -- the semiring of a polytope -------------------------------------------


@dataclass
class PolytopeSemiring:
    """Presentation of Z{P} over the Hilbert basis of its integral monoid."""

    polytope: RationalPolytope
    presentation: Presentation
    points: list[tuple[int, ...]]  # lattice point (m, n) of each generator
    monoid: mi.AffineMonoid
    basis: list[tuple[int, ...]] = field(default_factory=list)  # Hilbert basis incl. the twist if present

    @property
    def rank(self) -> int:
        return self.polytope.rank

    def functions(self) -> list[Affine]:
        return [(p[:-1], Fraction(-p[-1])) for p in self.points]

    def describe(self, i: int) -> str:
        m, c = self.functions()[i]
        return format_affine(m, c)

    def function_of(self, exps: Sequence[int], c: Fraction) -> Affine:
        fs = self.functions()
        m = tuple(sum(e * f[0][j] for e, f in zip(exps, fs)) for j in range(self.rank))
        return m, _frac(c) + sum(e * f[1] for e, f in zip(exps, fs))

    def to_term(self, m: Sequence[int], c) -> TropPoly:
        """The single term equal to the affine function x -> <m, x> + c."""
        m = tuple(int(x) for x in m)
        for r in self.polytope.rays:
            if _dot(m, r) > 0:
                raise NotMember("affine function is unbounded above on the polytope", m=m)
        top = max(_dot(m, v) for v in self.polytope.vertices)
        N = math.ceil(top)
        grade = self.monoid.grading()
        twist = (0,) * self.rank + (1,)
        while True:
            coeffs = _decompose(m + (N,), self.basis, grade)
            if coeffs is not None:
                break
            N += 1
        by_point = dict(zip(self.basis, coeffs))
        exps = tuple(by_point.get(p, 0) for p in self.points)
        const = _frac(c) + N - by_point.get(twist, 0)
        return TropPoly([(exps, const)], self.presentation.n)

    def affine_terms(self, terms: Sequence[Affine]) -> TropPoly:
        return poly_sup((self.to_term(m, c) for m, c in terms), self.presentation.n)

    def element(self, text: str) -> TropPoly:
        """An element written in coordinates, e.g. ``X v -X`` or ``2X + Y - 1``."""
        return self.affine_terms(parse_affine(text, self.rank))

    def eval_real(self, e: TropPoly, r: Sequence) -> SemifieldValue:
        return eval_real(self, e, r)


def _decompose(p, H, grade):
    from .spectrum import _decompose as dec

    return dec(p, H, grade)


def format_affine(m: Sequence[int], c: Fraction) -> str:
    parts = []
    for x, name in zip(m, COORDS):
        if x == 0:
            continue
        coef = "" if x == 1 else "-" if x == -1 else str(x)
        parts.append(f"{coef}{name}")
    text = " + ".join(parts).replace("+ -", "- ")
    if c or not parts:
        if not parts:
            return str(c)
        text += f" - {-c}" if c < 0 else f" + {c}"
    return text


def parse_affine(text: str, rank: int) -> list[Affine]:
    """Parse a join of affine functions in the coordinates X, Y, Z."""
    names = COORDS[:rank]
    out = []
    for exps, c in parse_terms(text):
        if c is None:
            continue
        bad = set(exps) - set(names)
        if bad:
            raise SkeletaError(f"unknown coordinate {sorted(bad)[0]!r}")
        out.append((tuple(exps.get(n, 0) for n in names), c))
    return out


def polytope_semiring(P: RationalPolytope, base: str = "Int") -> PolytopeSemiring:
    """Z{P}: generators are the Hilbert basis minus the twist, relations its syzygies."""
    if P.dimension() < P.rank:
        raise NotFullDimensional("polytope has empty interior")
    M = cone_over(P)
    H = mi.hilbert_basis(M)
    twist = (0,) * P.rank + (1,)
    gens = sorted((h for h in H if h != twist), key=lambda h: (tuple(-x for x in h[:-1]), h[-1]))
    cols = gens + [twist]
    k = len(gens)
    rels = []
    for vec in _kernel_basis(cols, P.rank + 1):
        a, s = vec[:k], vec[k]
        # sum a+ h = sum a- h - s * twist, and the twist is the constant -1
        lhs = TropPoly([(tuple(max(x, 0) for x in a), Fraction(0))], k)
        rhs = TropPoly([(tuple(max(-x, 0) for x in a), Fraction(s))], k)
        rels.append(Relation("Eq", lhs, rhs))
    names = tuple(Generator(f"U{i + 1}", CONTRACTING) for i in range(k))
    pres = Presentation(base, names, tuple(rels))
    return PolytopeSemiring(P, pres, gens, M, sorted(H))


def _kernel_basis(cols: Sequence[Sequence[int]], d: int) -> list[tuple[int, ...]]:
    """A lattice basis of the integer kernel of the matrix with these columns."""
    from sympy.matrices.normalforms import smith_normal_decomp

    A = sympy.Matrix([[c[i] for c in cols] for i in range(d)])
    ns = A.nullspace()
    if not ns:
        return []
    B = sympy.Matrix([list(mi._primitive(list(v))) for v in ns])
    D, _, V = smith_normal_decomp(B, domain=sympy.ZZ)
    Vinv = V.inv()
    basis = [tuple(int(Vinv[i, j]) for j in range(B.cols)) for i in range(B.rows)]
    # a nicer basis for reading: make the first nonzero entry positive
    out = []
    for v in basis:
        lead = next(x for x in v if x)
        out.append(tuple(-x for x in v) if lead < 0 else v)
    return out


def eval_real(PS: PolytopeSemiring, e: Union[TropPoly, str], r: Sequence) -> SemifieldValue:
    """Value at the real point r of the element e (a convex piecewise-affine function)."""
    r = tuple(_frac(x) for x in r)
    if len(r) != PS.rank or not PS.polytope.contains(r):
        raise PointOutside("point is not in the polytope", point=[str(x) for x in r])
    if isinstance(e, str):
        e = PS.element(e)
    best = None
    for exps, c in e.terms.items():
        m, k = PS.function_of(exps, c)
        v = _dot(m, r) + k
        best = v if best is None else max(best, v)
    return SemifieldValue("Rat", best)


# -- spectra against faces ------------------------------------------------


@dataclass
class FaceCertificate:
    ok: bool
    point_faces: list[int]  # face index (into polytope.faces()) of each spectrum point
    n_opens: int
    n_unions: int
    reason: str = ""


def _zero_face(PS: PolytopeSemiring, funcs: Sequence[Affine], within: Face) -> Optional[Face]:
    V = tuple(v for v in within.vertices if all(_dot(m, v) + c == 0 for m, c in funcs))
    R = tuple(r for r in within.rays if all(_dot(m, r) == 0 for m, _ in funcs))
    for F in PS.polytope.faces():
        if F.vertices == V and F.rays == R:
            return F
    return None


def spectrum_faces(PS: PolytopeSemiring, P: Presentation | None = None, within: Face | None = None):
    """Integral spectrum of P (default: Z{polytope}) with each point's face."""
    from .spectrum import integral_spectrum

    P = P or PS.presentation
    faces = PS.polytope.faces()
    within = within or faces[-1]
    spec, im = integral_spectrum(P)
    funcs = {name: PS.function_of(*im.terms[name]) for name in im.terms}
    out = []
    for p in spec.points:
        zs = [funcs[z] for z in p.zero_set]
        F = _zero_face(PS, zs, within)
        if F is None:
            raise RuntimeError("spectrum point does not cut out a face")
        # the point must be exactly "vanish on F"
        vanish = {name for name, (m, c) in funcs.items()
                  if all(_dot(m, v) + c == 0 for v in F.vertices) and all(_dot(m, r) == 0 for r in F.rays)}
        if vanish != set(p.zero_set):
            raise RuntimeError("zero set is not the full vanishing set of its face")
        out.append(faces.index(F))
    return spec, out


def downsets(G: nx.DiGraph) -> list[frozenset[int]]:
    """Subsets closed under passing to smaller elements (G has edges small -> big)."""
    nodes = sorted(G.nodes, key=lambda n: len(nx.ancestors(G, n)))
    out = [frozenset()]
    for n in nodes:
        below = nx.ancestors(G, n)
        out += [D | {n} for D in out if below <= D and n not in D]
    return sorted(set(out), key=lambda s: (len(s), sorted(s)))


def integral_spectrum_vs_faces(P: RationalPolytope) -> FaceCertificate:
    """Open sets of the integral spectrum against unions of faces."""
    PS = polytope_semiring(P)
    spec, pf = spectrum_faces(PS)
    G = face_poset(P)
    unions = set(downsets(G))
    if len(set(pf)) != len(pf) or set(pf) != set(G.nodes):
        return FaceCertificate(False, pf, 0, len(unions), "points and faces do not correspond")
    images = {frozenset(pf[i] for i in U) for U in spec.opens()}
    ok = images == unions and len(images) == len(spec.opens())
    return FaceCertificate(ok, pf, len(spec.opens()), len(unions), "" if ok else "open sets differ")


def face_element(PS: PolytopeSemiring, F: Face) -> TropPoly:
    """Sum of the generators vanishing on F: a contracting element with zero locus F."""
    exps = []
    for m, c in PS.functions():
        vanish = all(_dot(m, v) + c == 0 for v in F.vertices) and all(_dot(m, r) == 0 for r in F.rays)
        exps.append(1 if vanish else 0)
    return TropPoly([(tuple(exps), Fraction(0))], PS.presentation.n)


def face_localization(PS: PolytopeSemiring, F: Face) -> Presentation:
    from .localize import LocalizationSpec, bounded_localization

    S = face_element(PS, F)
    if not any(next(iter(S.terms))):
        return PS.presentation
    return bounded_localization(PS.presentation, LocalizationSpec(S))[0]


def check_face_localization(PS: PolytopeSemiring, F: Face) -> bool:
    """The cellular localization at F has exactly the faces of F as its points."""
    Q = face_localization(PS, F)
    _, pf = spectrum_faces(PS, Q, within=F)
    faces = PS.polytope.faces()
    expected = {i for i, G in enumerate(faces) if F.contains_face(G)}
    return len(pf) == len(set(pf)) and set(pf) == expected


# -- maps between polytope semirings --------------------------------------


def affine_hom(src: PolytopeSemiring, dst: PolytopeSemiring, target: Presentation | None = None,
               linear=None, shift=None, coeff_scale: Fraction = Fraction(1),
               source: Presentation | None = None) -> SemiringHom:
    """The map pulling functions back along y = linear * x + shift (default identity).

    Each generator of ``src`` (a function of y) goes to the term of ``dst`` for
    the function x -> f(linear x + shift) * coeff_scale. ``source`` may replace
    the presentation of ``src`` by a quotient with the same generators.
    """
    d_src, d_dst = src.rank, dst.rank
    linear = linear or [[int(i == j) for j in range(d_dst)] for i in range(d_src)]
    shift = tuple(_frac(x) for x in (shift or (0,) * d_src))
    images = []
    for m, c in src.functions():
        m2 = tuple(sum(m[i] * linear[i][j] for i in range(d_src)) for j in range(d_dst))
        c2 = c + _dot(m, shift)
        scaled = tuple(int(x * coeff_scale) for x in m2)
        images.append(dst.to_term(scaled, c2 * coeff_scale))
    tgt = target or dst.presentation
    coeff_map = None if coeff_scale == 1 else (lambda c: c * coeff_scale)
    return SemiringHom(source or src.presentation, tgt, images, coeff_map)


def refinement_base_change(P: RationalPolytope, k: int, samples: int = 20, seed: int = 0) -> dict:
    """Check (1/k)Z{P} = Z{kP}: generators correspond and normal forms are transported."""
    import random

    if not 1 <= k <= 6:
        raise ValueError("k must be between 1 and 6")
    fine = polytope_semiring(P, base="Rat")
    big = polytope_semiring(P.scaled(k))
    # a function g(y) on kP becomes g(kx)/k on P
    fwd = affine_hom(big, fine, linear=[[k * int(i == j) for j in range(P.rank)] for i in range(P.rank)],
                     coeff_scale=Fraction(1, k))
    images = [fine.presentation.format(img) for img in fwd.images]
    # the monoid iso (m, n) -> (m, n/k) on generator points
    points_match = all(
        fine.function_of(*next(iter(img.terms.items()))) == (m, Fraction(c, 1) / k)
        for img, (m, c) in zip(fwd.images, [(p[:-1], -p[-1]) for p in big.points])
    )
    rng = random.Random(seed)
    transported = True
    Pbig = big.presentation
    for _ in range(samples):
        terms = []
        for _ in range(rng.randint(1, 3)):
            exps = tuple(rng.randint(0, 2) for _ in range(Pbig.n))
            terms.append((exps, Fraction(rng.randint(-3, 1))))
        e = TropPoly(terms, Pbig.n)
        lhs = normalize(fwd.apply(normalize(e, Pbig)), fine.presentation)
        rhs = normalize(fwd.apply(e), fine.presentation)
        if eq(lhs, rhs, fine.presentation).status != "Equal":
            transported = False
    same_size = len(big.points) == len(fine.points)
    return {"k": k, "generators": len(big.points), "images": images,
            "ok": bool(points_match and transported and same_size)}


# -- fans -----------------------------------------------------------------


@dataclass
class Fan:
    cones: list[RationalPolytope]

    def __post_init__(self):
        for c in self.cones:
            if any(lam != 0 for _, lam in c.halfspaces):
                raise ValueError("fan cones must have all lambda = 0")
        ranks = {c.rank for c in self.cones}
        if len(ranks) > 1:
            raise ValueError("cones live in different lattices")

    @property
    def rank(self) -> int:
        return self.cones[0].rank

    def check_compatible(self) -> list[tuple[int, int, Face, Face]]:
        """Shared faces of every pair of cones; raises if some pair overlaps badly."""
        shared = []
        for i, j in itertools.combinations(range(len(self.cones)), 2):
            A, B = self.cones[i], self.cones[j]
            inter = RationalPolytope(A.rank, A.halfspaces + B.halfspaces)
            Fa = _matching_face(A, inter.rays)
            Fb = _matching_face(B, inter.rays)
            if Fa is None or Fb is None:
                raise IncompatibleFan(f"cones {i} and {j} do not meet in a common face", cones=[i, j])
            shared.append((i, j, Fa, Fb))
        return shared


def _matching_face(C: RationalPolytope, rays) -> Optional[Face]:
    for F in C.faces():
        if set(F.rays) == set(rays):
            return F
    return None


def truncate(cone: RationalPolytope, radius) -> RationalPolytope:
    """The cone cut down to the box |x_i| <= radius."""
    d = cone.rank
    box = []
    for i in range(d):
        e = tuple(int(i == j) for j in range(d))
        box.append((e, radius))
        box.append((tuple(-x for x in e), radius))
    hs = list(cone.halfspaces) + box
    trimmed = RationalPolytope(d, hs)
    # drop redundant box sides so the faces are honest
    keep = [h for h in hs if any(_dot(h[0], v) == h[1] for v in trimmed.vertices)]
    return RationalPolytope(d, keep)


def fan_complex(fan: Fan, radii: Union[object, Sequence]):
    """Charts: the cones cut to boxes; gluings: the shared faces."""
    from .complexes import Chart, Gluing, glue

    if fan.rank > 2:
        raise RankTooLarge("fan complexes are glued at rank <= 2", rank=fan.rank)
    rs = list(radii) if isinstance(radii, (list, tuple)) else [radii] * len(fan.cones)
    rs = [_frac(r) for r in rs]
    shared = fan.check_compatible()
    charts = [Chart(f"cone{i}", polytope_semiring(truncate(c, r))) for i, (c, r) in enumerate(zip(fan.cones, rs))]
    gluings = []
    for i, j, _, _ in shared:
        if rs[i] != rs[j]:
            raise IncompatibleFan("expansions disagree on a shared face", cones=[i, j])
        Ca, Cb = charts[i].polytope, charts[j].polytope
        inter = RationalPolytope(fan.rank, Ca.halfspaces + Cb.halfspaces)
        Fa = _face_with_vertices(Ca, inter.vertices)
        Fb = _face_with_vertices(Cb, inter.vertices)
        if Fa is None or Fb is None:
            raise IncompatibleFan(f"charts {i} and {j} do not meet in a common face", cones=[i, j])
        gluings.append(Gluing(i, j, Fa, Fb))
    return glue(charts, gluings)


def _face_with_vertices(P: RationalPolytope, vertices) -> Optional[Face]:
    for F in P.faces():
        if set(F.vertices) == set(vertices) and not F.rays:
            return F
    return None


# -- covers of an interval by subdivisions --------------------------------


def conjectural_interval_cover(a, b, subsets: Sequence[Sequence[tuple]]) -> dict:
    """Proposed criterion for affine subsets of [a, b] (lists of subintervals) to cover it.

    The criterion asks that the closed pieces cover [a, b] and their interiors
    cover (a, b). It is unproved, so the result is labelled conjectural and
    nothing else in the package depends on it.
    """
    a, b = _frac(a), _frac(b)
    pieces = sorted((_frac(x), _frac(y)) for U in subsets for x, y in U)
    closed = _covers(pieces, a, b)
    # interiors: the open pieces must overlap at every interior endpoint
    ends = {p for x, y in pieces for p in (x, y) if a < p < b}
    open_ok = closed and all(any(x < p < y for x, y in pieces) for p in ends)
    return {"conjectural": True, "closed_cover": closed, "open_cover": open_ok, "covers": closed and open_ok}


def _covers(pieces, a, b) -> bool:
    reach = a
    for x, y in pieces:
        if x > reach:
            return False
        reach = max(reach, y)
    return reach >= b
