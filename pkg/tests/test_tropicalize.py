import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from skeleta.errors import RankUnsupported, TooFewTerms, ZeroPolynomial
from skeleta.polytope import RationalPolytope, eval_real, polytope_semiring
from skeleta.presentation import Relation, poly_shift
from skeleta.tropicalize import (TPoly, agrees, cells_meeting, corner_locus, curve_svg, format_affine_join,
                                 grid_oracle, parse_tpoly, trop_relations, tropical_terms, tropicalize_poly)

QUADRANT = RationalPolytope(2, [((1, 0), 0), ((0, 1), 0)])
BOX = RationalPolytope.box((-2, -2), (2, 2))
LINE = "X v Y v -1"


def trop_string(text):
    return format_affine_join(tropical_terms(parse_tpoly(text)))


def test_tropicalize_examples():
    assert trop_string("x + y + t") == "X v Y v -1"
    assert trop_string("t**3") == "-3"
    assert trop_string("x**2 + 2*t*x + t**2") == "2X v X - 1 v -2"
    # only the t-adic valuation of a coefficient matters, and cancelled terms vanish
    assert trop_string("x + t*x + 5") == "X v 0"
    assert trop_string("(x - t)*(x + t) + t**2") == "2X"


def test_zero_polynomial():
    with pytest.raises(ZeroPolynomial):
        tropical_terms(parse_tpoly("x - x", ["x", "y"]))


def test_tropicalize_into_the_quadrant():
    PS = polytope_semiring(QUADRANT)
    F = tropicalize_poly(parse_tpoly("x + y + t"), PS)
    assert eval_real(PS, F, (-2, -3)).value == -1
    assert eval_real(PS, F, (0, -3)).value == 0
    with pytest.raises(ValueError):
        tropicalize_poly(parse_tpoly("x + t"), PS)


def test_relations_of_the_line():
    tr = trop_relations([parse_tpoly("x + y + t")], QUADRANT)
    assert len(tr.relations) == 3 and tr.consistent
    PS = polytope_semiring(QUADRANT)
    rest = PS.element("Y v -1")
    assert Relation("Eq", PS.element(LINE), rest) in tr.relations
    assert tr.presentation.n == PS.presentation.n


def test_relations_of_a_point():
    gens = [parse_tpoly("x + t", ["x", "y"]), parse_tpoly("y + t", ["x", "y"])]
    tr = trop_relations(gens, QUADRANT)
    assert len(tr.relations) == 4
    # (-1, -1) satisfies every relation, (0, -1) does not
    PS = polytope_semiring(QUADRANT)
    def holds(r, pt):
        return eval_real(PS, r.lhs, pt) == eval_real(PS, r.rhs, pt)
    assert all(holds(r, (-1, -1)) for r in tr.relations)
    assert not all(holds(r, (0, -1)) for r in tr.relations)


def test_single_term_generators_are_inconsistent():
    tr = trop_relations([parse_tpoly("x + t", ["x", "y"]), parse_tpoly("t**3", ["x", "y"])], QUADRANT)
    assert tr.inconsistent == [1] and not tr.consistent
    assert len(tr.relations) == 2


def test_tropical_line():
    c = corner_locus(LINE, QUADRANT)
    assert c.vertices == [(-1, -1)]
    assert sorted(d for _, d in c.rays) == [(-1, 0), (0, -1), (1, 1)]
    assert not c.segments and not c.lines
    assert agrees(c, grid_oracle(LINE, QUADRANT, Fraction(1, 8), clip=((-4, -4), (0, 0))))


def test_degenerate_corner_loci():
    assert corner_locus("-2", BOX).edges == []
    assert corner_locus("X v X - 1", BOX).edges == []
    with pytest.raises(TooFewTerms):
        corner_locus("-2", BOX, strict=True)
    with pytest.raises(RankUnsupported):
        corner_locus("X v -1", RationalPolytope.interval(0, 1))


def test_two_terms_give_a_line():
    c = corner_locus("X v 2X - 1", RationalPolytope.box((0, 0), (2, 2)))
    assert not c.vertices and len(c.lines) == 1
    e = c.lines[0]
    assert {e.start, e.end} == {(1, 0), (1, 2)}


def test_grid_oracle_examples():
    g = grid_oracle("X v -1", RationalPolytope.box((-2, -2), (0, 0)), Fraction(1, 16))
    # the cells whose closure meets x = -1
    assert g.marked == {(i, j) for i in (15, 16) for j in range(32)}
    assert grid_oracle("-1", BOX, Fraction(1, 4)).marked == set()
    with pytest.raises(ValueError):
        grid_oracle(LINE, QUADRANT, Fraction(1, 4))


def test_grid_ignores_cells_outside_the_domain():
    tri = RationalPolytope(2, [((-1, 0), 0), ((0, -1), 0), ((1, 1), 2)])
    g = grid_oracle("X v Y", tri, Fraction(1, 2))
    assert len(g.cells) == 6
    c = corner_locus("X v Y", tri)
    assert agrees(c, g) and len(cells_meeting(c, g)) == len(g.marked) == 4


def test_svg_and_json():
    c = corner_locus(LINE, QUADRANT)
    svg = curve_svg(c, ((-4, -4), (0, 0)))
    assert svg.startswith("<svg") and svg.count("<line") == 3 and svg.count("<circle") == 1
    data = c.to_json()
    assert data["vertices"] == [["-1", "-1"]] and len(data["rays"]) == 3


def random_tropical(rng, n):
    return [((rng.randint(-3, 3), rng.randint(-3, 3)), Fraction(rng.randint(-6, 6), rng.choice([1, 2])))
            for _ in range(n)]


def brute_cells(curve, grid):
    """Cells whose closed square meets the curve, testing every cell against every piece."""
    out = set()
    for cell in grid.cells:
        lo, hi = grid.box(cell)
        for e in curve.edges:
            cons = [(e.direction[k], hi[k] - e.base[k]) for k in range(2)]
            cons += [(-e.direction[k], e.base[k] - lo[k]) for k in range(2)]
            s_lo, s_hi = e.lo, e.hi
            for a, b in cons:
                if a > 0:
                    s_hi = b / a if s_hi is None else min(s_hi, b / a)
                elif a < 0:
                    s_lo = b / a if s_lo is None else max(s_lo, b / a)
                elif b < 0:
                    s_lo, s_hi = 1, 0
            if s_lo is None or s_hi is None or s_lo <= s_hi:
                out.add(cell)
        if any(all(lo[k] <= v[k] <= hi[k] for k in range(2)) for v in curve.vertices + curve.isolated):
            out.add(cell)
    return out


def test_cells_meeting_matches_exhaustive_search():
    rng = random.Random(3)
    for _ in range(10):
        F = random_tropical(rng, rng.randint(3, 6))
        c, g = corner_locus(F, BOX), grid_oracle(F, BOX, Fraction(1, 4))
        assert cells_meeting(c, g) == brute_cells(c, g)
    c = corner_locus(LINE, QUADRANT)
    g = grid_oracle(LINE, QUADRANT, Fraction(1, 4), clip=((-4, -4), (0, 0)))
    assert cells_meeting(c, g) == brute_cells(c, g)


def test_isolated_tie_at_a_corner():
    # X - Y + 5 and 2X + 1 tie only at the corner (2, 2) of the box
    c = corner_locus([((1, -1), 5), ((2, 0), 1), ((-3, -3), -20)], BOX)
    assert c.isolated == [(2, 2)] and c.edges == [] and c.vertices == []
    assert agrees(c, grid_oracle([((1, -1), 5), ((2, 0), 1), ((-3, -3), -20)], BOX, Fraction(1, 2)))


@pytest.mark.parametrize("h", [Fraction(1, 4), Fraction(1, 8), Fraction(1, 16)])
def test_corner_locus_agrees_with_grid(h):
    rng = random.Random(7)
    for _ in range(50):
        F = random_tropical(rng, rng.randint(3, 6))
        assert agrees(corner_locus(F, BOX), grid_oracle(F, BOX, h))


def _value(terms, x):
    return max(m[0] * x[0] + m[1] * x[1] + c for m, c in terms)


def _unique_max(terms, x):
    vals = sorted((m[0] * x[0] + m[1] * x[1] + c for m, c in terms), reverse=True)
    return len(vals) == 1 or vals[0] > vals[1]


monomials = st.tuples(st.tuples(st.integers(0, 2), st.integers(0, 2)), st.integers(0, 3),
                      st.integers(-3, 3).filter(bool))
tpolys = st.lists(monomials, min_size=1, max_size=4).map(lambda ts: TPoly(("x", "y"), tuple(ts))).filter(
    lambda f: not f.is_zero())
points = st.tuples(st.fractions(-3, 3, max_denominator=5), st.fractions(-3, 3, max_denominator=5))


@settings(max_examples=100, deadline=None)
@given(tpolys, tpolys, points)
def test_tropicalization_is_a_norm(f, g, x):
    fg = f * g
    tf, tg = tropical_terms(f), tropical_terms(g)
    bound = _value(tf, x) + _value(tg, x)
    lhs = _value(tropical_terms(fg), x) if not fg.is_zero() else None
    assert lhs is None or lhs <= bound
    if _unique_max(tf, x) and _unique_max(tg, x):
        assert lhs == bound


@settings(max_examples=50, deadline=None)
@given(tpolys, st.fractions(max_denominator=5).filter(bool), st.integers(0, 3))
def test_relations_invariant_under_units(f, c, k):
    if len(f.terms) < 2:
        return
    PS = polytope_semiring(BOX)
    base = trop_relations([f], PS).relations
    scaled = trop_relations([f.scaled(c, k)], PS).relations
    untwisted = [Relation(r.kind, poly_shift(r.lhs, k), poly_shift(r.rhs, k)) for r in scaled]
    assert untwisted == base
