"""The acceptance checks, shared by the test suite and ``skeleta accept``.

Each case returns a CaseResult; ``run_cases`` times them and prints one line
per case.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

from . import monoid_ideal as mi
from .complexes import eval_global, is_cycle, ks_skeleton
from .dsl import parse_element, parse_presentation
from .localize import (K_MAX, ZERO, LocalizationSpec, ReesElement, ReesModel, bounded_localization,
                       eq_localized)
from .polytope import (RationalPolytope, affine_hom, eval_real, integral_spectrum_vs_faces,
                       polytope_semiring)
from .presentation import TropPoly, eq, eval as peval, freely_contracting, is_inverse_pair
from .semifield import SemifieldValue
from .span import random_hom, random_lattice, right_adjoint
from .spectrum import (cellular_cover_check, enumerate_points, face_poset_of_simplex,
                       integral_spectrum, poset_isomorphism, random_contracting, random_integral)
from .tropicalize import agrees, corner_locus, grid_oracle

DEFAULT_SEED = 20240601


@dataclass(frozen=True)
class Options:
    seed: int = DEFAULT_SEED
    kmax: int = K_MAX


@dataclass
class CaseResult:
    id: int
    name: str
    ok: bool
    detail: dict = field(default_factory=dict)
    seconds: float = 0.0
    budget: Optional[float] = None

    @property
    def in_budget(self) -> bool:
        return self.budget is None or self.seconds <= self.budget

    @property
    def passed(self) -> bool:
        return self.ok and self.in_budget

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        budget = f" (budget {self.budget:g}s)" if self.budget is not None else ""
        return f"[{status}] {self.id:2d} {self.name}: {self.seconds:.2f}s{budget}"

    def to_json(self) -> dict:
        return {"id": self.id, "name": self.name, "pass": self.passed, "ok": self.ok,
                "seconds": round(self.seconds, 3), "budget": self.budget, "detail": self.detail}


def polydisc(opts: Options) -> tuple[bool, dict]:
    sizes = {}
    ok = True
    for k in range(1, 6):
        spec = enumerate_points(freely_contracting("Bool", [f"X{i + 1}" for i in range(k)]))
        opens = [len(spec.basic_opens[f"X{i + 1}"]) for i in range(k)]
        sizes[k] = {"points": len(spec.points), "opens": opens}
        ok = ok and len(spec.points) == 2 ** k and all(u == 2 ** (k - 1) for u in opens)
    return ok, sizes


def simplex_chart(k: int):
    names = [f"X{i + 1}" for i in range(k)]
    gens = ", ".join(f"{x} contracting" for x in names)
    return parse_presentation(f"semiring over Zv; gens {gens}; rel -1 = {' + '.join(names)};")


def simplex(opts: Options) -> tuple[bool, dict]:
    detail = {}
    ok = True
    for k in (2, 3, 4):
        spec, _ = integral_spectrum(simplex_chart(k))
        G = spec.specialization_graph()
        iso = poset_isomorphism(G, face_poset_of_simplex(k))
        detail[k] = {"points": len(spec.points), "isomorphic": iso is not None}
        ok = ok and len(spec.points) == 2 ** k - 1 and iso is not None
    return ok, detail


def cellular_cover(opts: Options) -> tuple[bool, dict]:
    rng = random.Random(opts.seed)
    failures = []
    for trial in range(100):
        P = random_contracting(rng)
        parts = [random_integral(rng, P) for _ in range(rng.randint(1, 3))]
        cert = cellular_cover_check(P, parts)
        if not cert.ok:
            failures.append(trial)
    return not failures, {"trials": 100, "failures": failures}


def polytope_faces(opts: Options) -> tuple[bool, dict]:
    shapes = {
        "interval": RationalPolytope.interval(0, 1),
        "triangle": RationalPolytope(2, [((-1, 0), 0), ((0, -1), 0), ((1, 1), 1)]),
        "square": RationalPolytope.box((0, 0), (1, 1)),
    }
    detail = {}
    for name, P in shapes.items():
        cert = integral_spectrum_vs_faces(P)
        detail[name] = {"ok": cert.ok, "opens": cert.n_opens, "unions": cert.n_unions}
    return all(d["ok"] for d in detail.values()), detail


def absolute_value(opts: Options) -> tuple[bool, dict]:
    PS = polytope_semiring(RationalPolytope.interval(-1, 1))
    e = PS.element("X v -X")
    bad = []
    for i in range(21):
        r = Fraction(i - 10, 10)
        if eval_real(PS, e, (r,)).value != abs(r):
            bad.append(str(r))
    return not bad, {"samples": 21, "mismatches": bad}


def non_cancellative(opts: Options) -> tuple[bool, dict]:
    P = parse_presentation("semiring over Zv; gens X contracting;")
    a = parse_element("2X v X - 1 v -2", P)  # 2(X v -1)
    b = parse_element("2X v -2", P)
    d = eq(a, b, P)
    rng = random.Random(opts.seed)
    disagree = []
    for _ in range(50):
        r = -Fraction(rng.randint(0, 400), rng.randint(1, 40))
        pt = {"X": SemifieldValue("Rat", r)}
        if peval(a, pt, P) != peval(b, pt, P):
            disagree.append(str(r))
    return d.status == "Distinct" and not disagree, {"decision": d.status, "witness": d.witness,
                                                     "real_disagreements": disagree}


QUADRANT = RationalPolytope(2, [((1, 0), 0), ((0, 1), 0)])


def tropical_line(opts: Options) -> tuple[bool, dict]:
    curve = corner_locus("X v Y v -1", QUADRANT)
    grid = grid_oracle("X v Y v -1", QUADRANT, Fraction(1, 8), clip=((-4, -4), (0, 0)))
    dirs = sorted(d for _, d in curve.rays)
    ok = (curve.vertices == [(Fraction(-1), Fraction(-1))] and len(curve.rays) == 3
          and dirs == sorted([(1, 1), (-1, 0), (0, -1)]) and not curve.segments and agrees(curve, grid))
    return ok, {"vertices": [[str(x) for x in v] for v in curve.vertices], "ray_directions": [list(d) for d in dirs],
                "marked_cells": len(grid.marked), "grid_agrees": agrees(curve, grid)}


def elliptic_skeleton(opts: Options) -> tuple[bool, dict]:
    detail = {}
    ok = True
    for n in (3, 4, 5):
        K = ks_skeleton(n)
        C = K.complex
        cyc = is_cycle(C) and C.counts() == {"vertices": n, "edges": n}
        values_ok = True
        for i in range(n):
            D = K.divisor(i)
            for j in range(n):
                chart, x = K.vertex(j)
                v = eval_global(C, D, chart, x).value
                values_ok = values_ok and v == (-1 if i == j else 0)
        abs_ok = True
        for i in range(n):
            B = K.blow_up_element(i)
            for k in range(-8, 9):
                r = Fraction(k, 8)
                abs_ok = abs_ok and C.charts[i].evaluate(B, (r,)) == abs(r)
        detail[n] = {"cycle": cyc, "divisors": values_ok, "absolute_value": abs_ok}
        ok = ok and cyc and values_ok and abs_ok
    return ok, detail


def random_ideal(rng: random.Random, M: mi.AffineMonoid) -> mi.MonoidIdeal:
    return mi.MonoidIdeal(M, [(rng.randint(0, 3), rng.randint(0, 3)) for _ in range(rng.randint(1, 3))])


def _ideal_poly(J: mi.MonoidIdeal, P):
    return TropPoly([(g, Fraction(0)) for g in J.generators], P.n)


def rees(opts: Options) -> tuple[bool, dict]:
    M = mi.AffineMonoid.orthant(2)
    R = ReesModel(M, mi.MonoidIdeal(M, [(1, 0), (0, 1)]), k_max=opts.kmax)
    rng = random.Random(opts.seed)
    counts = {"Equal": 0, "Distinct": 0, "Unknown": 0}
    wrong = []
    for trial in range(50):
        a = _random_rees(rng, R)
        b = _random_rees(rng, R)
        d = eq_localized(a, b, R)
        counts[d.status] += 1
        if d.status == "Equal" and not _really_equal(a, b, R, opts.kmax):
            wrong.append(trial)
        if d.status == "Distinct" and d.witness and d.witness.get("kind") == "real-point":
            if not _weight_separates(a, b, R, d.witness["weight"]):
                wrong.append(trial)
    # principal sub-case against presentation-level equality
    P = freely_contracting("Bool", ["X", "Y"])
    Rp = ReesModel(M, mi.MonoidIdeal(M, [(1, 0)]))
    mismatched = []
    for trial in range(50):
        J1, J2 = random_ideal(rng, M), random_ideal(rng, M)
        n1, n2 = rng.randint(0, 2), rng.randint(0, 2)
        d = eq_localized(Rp.canonical(ReesElement(J1, n1)), Rp.canonical(ReesElement(J2, n2)), Rp)
        lhs = _ideal_poly(mi.plus(J1, Rp.power(n2)), P)
        rhs = _ideal_poly(mi.plus(J2, Rp.power(n1)), P)
        if (d.status == "Equal") != (eq(lhs, rhs, P).status == "Equal"):
            mismatched.append(trial)
    one = eq_localized(R.plus(R.inverse(), R.embed(R.I)), R.embed(mi.MonoidIdeal.unit(M)), R).status
    ok = counts["Unknown"] == 0 and not wrong and not mismatched and one == "Equal"
    return ok, {"counts": counts, "false_merges": wrong, "principal_mismatches": mismatched, "minus_I_plus_I": one}


def _random_rees(rng: random.Random, R: ReesModel):
    return R.canonical(ReesElement(random_ideal(rng, R.monoid), rng.randint(0, 2)))


def _really_equal(a, b, R: ReesModel, k_max: int = K_MAX) -> bool:
    L, Rr = mi.plus(a.J, R.power(b.n)), mi.plus(b.J, R.power(a.n))
    for _ in range(k_max + 1):
        if L == Rr:
            return True
        L, Rr = mi.plus(L, R.I), mi.plus(Rr, R.I)
    return False


def _weight_separates(a, b, R: ReesModel, v) -> bool:
    def val(J, n):
        if J.is_neg_inf:
            return None
        iv = max(sum(x * y for x, y in zip(v, g)) for g in R.I.generators)
        return max(sum(x * y for x, y in zip(v, g)) for g in J.generators) - n * iv
    return val(a.J, a.n) != val(b.J, b.n)


def galois(opts: Options) -> tuple[bool, dict]:
    rng = random.Random(opts.seed)
    bad = []
    for trial in range(100):
        S = random_lattice(rng)
        T = random_lattice(rng)
        f = random_hom(rng, S, T)
        g = right_adjoint(f)
        unit = all(S.leq(x, g(f(x))) for x in range(len(S)))
        counit = all(T.leq(f(g(y)), y) for y in range(len(T)))
        triangle = all(f(g(f(x))) == f(x) for x in range(len(S)))
        if not (unit and counit and triangle):
            bad.append(trial)
    return not bad, {"trials": 100, "failures": bad}


def face_inclusion(opts: Options) -> tuple[bool, dict]:
    big = polytope_semiring(RationalPolytope.interval(0, 2))
    small = polytope_semiring(RationalPolytope.interval(0, 1))
    S = big.element("0 v X - 1")
    Q, _ = bounded_localization(big.presentation, LocalizationSpec(S, ZERO, negated=True))
    f = affine_hom(big, small, source=Q)  # functions on [0,2] restricted to [0,1]
    g = affine_hom(small, big, target=Q)
    iso = is_inverse_pair(f, g)
    # r = a: the lower cell [0, 0] is a single point
    Qa, _ = bounded_localization(big.presentation, LocalizationSpec(big.element("0 v X"), ZERO, negated=True))
    spec, _ = integral_spectrum(Qa)
    return iso is True and len(spec.points) == 1, {"isomorphic": iso, "degenerate_points": len(spec.points),
                                                   "localized": Q.to_dsl()}


CASES: dict[int, tuple[str, Callable[[Options], tuple[bool, dict]], float]] = {
    1: ("polydisc spectra", polydisc, 1.0),
    2: ("simplex spectra", simplex, 1.0),
    3: ("cellular cover formula", cellular_cover, 10.0),
    4: ("polytope face correspondence", polytope_faces, 5.0),
    5: ("absolute value", absolute_value, None),
    6: ("non-cancellativity witness", non_cancellative, None),
    7: ("tropical line", tropical_line, 2.0),
    8: ("elliptic skeleton", elliptic_skeleton, 5.0),
    9: ("blow-up Rees model", rees, 10.0),
    10: ("Galois connections", galois, None),
    11: ("face-inclusion localization", face_inclusion, 1.0),
}


def run_case(case: int, seed: int = DEFAULT_SEED, kmax: int = K_MAX) -> CaseResult:
    if case not in CASES:
        raise KeyError(f"no acceptance case {case}")
    name, fn, budget = CASES[case]
    t0 = time.perf_counter()
    ok, detail = fn(Options(seed, kmax))
    return CaseResult(case, name, ok, detail, time.perf_counter() - t0, budget)


def run_cases(cases=None, seed: int = DEFAULT_SEED, kmax: int = K_MAX, echo: bool = True) -> list[CaseResult]:
    out = []
    for c in cases or sorted(CASES):
        r = run_case(c, seed, kmax)
        if echo:
            print(r.line(), flush=True)
        out.append(r)
    return out
