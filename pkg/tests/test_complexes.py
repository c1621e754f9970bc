import json
import random
from fractions import Fraction

import pytest

from skeleta.complexes import (SCHEMA, Chart, Gluing, Section, SNCStratum, chart_real_vertices,
                               dual_intersection_chart, eval_global, glue, is_cycle, ks_skeleton,
                               subdivide, to_svg, transport_section)
from skeleta.errors import InconsistentSections, PointOutside, TooSmall
from skeleta.polytope import RationalPolytope, polytope_semiring
from skeleta.presentation import TropPoly
from skeleta.spectrum import integral_spectrum

UNIT = polytope_semiring(RationalPolytope.interval(0, 1))


def vertex_at(chart, x):
    return next(F for F in chart.faces if F.dim == 0 and F.vertices[0] == (Fraction(x),))


def line_chart():
    return glue([Chart("x", polytope_semiring(RationalPolytope.interval(-1, 1)))])


def test_two_intervals_glued_at_a_vertex():
    a, b = Chart("a", UNIT), Chart("b", UNIT)
    C = glue([a, b], [Gluing(0, 1, vertex_at(a, 1), vertex_at(b, 0), [[1]], (Fraction(1),))])
    # two edges and three vertices, the shared one counted once
    assert len(C.points) == 5
    assert C.counts() == {"vertices": 3, "edges": 2}
    assert not is_cycle(C)


def test_subdivide_at_a_kink():
    S = subdivide(line_chart(), 0, "X v 0")
    assert [c.label for c in S.charts] == ["x.0", "x.1"]
    assert len(S.points) == 5 and len(S.gluings) == 1
    # an affine element changes nothing
    assert len(subdivide(line_chart(), 0, "X - 1").charts) == 1


@pytest.mark.parametrize("n", [3, 4, 5])
def test_ks_skeleton_is_a_cycle(n):
    K = ks_skeleton(n)
    C = K.complex
    assert is_cycle(C)
    assert C.counts() == {"vertices": n, "edges": n}
    assert len(C.points) == 2 * n
    assert {f"v{i}" for i in range(n)} <= set(C.names)


def ks_divisor_value(n, i, chart, x):
    """D_i by hand: the hat function of height -1 on v_i, supported on the two adjacent edges."""
    pos = (chart + x) % n
    dist = min(abs(pos - i), n - abs(pos - i))
    return -max(Fraction(0), 1 - dist)


@pytest.mark.parametrize("n", [3, 4, 5])
def test_ks_divisors(n):
    K = ks_skeleton(n)
    rng = random.Random(n)
    for i in range(n):
        D = K.divisor(i)
        for j in range(n):
            assert eval_global(K.complex, D, j, (0,)).value == (-1 if j == i else 0)
        for _ in range(10):
            j, x = rng.randrange(n), Fraction(rng.randint(-8, 8), 8)
            assert eval_global(K.complex, D, j, (x,)).value == ks_divisor_value(n, i, j, x)


def test_ks_divisor_halfway():
    K = ks_skeleton(4)
    D = K.divisor(0)
    assert eval_global(K.complex, D, 0, (Fraction(1, 2),)).value == Fraction(-1, 2)
    assert eval_global(K.complex, D, 1, (Fraction(-1, 2),)).value == Fraction(-1, 2)


@pytest.mark.parametrize("n", [3, 4])
def test_blow_up_element_is_the_distance(n):
    K = ks_skeleton(n)
    ch = K.complex.charts[0]
    for k in range(-8, 9):
        x = Fraction(k, 8)
        assert ch.evaluate(K.blow_up_element(0), (x,)) == abs(x)


def test_section_errors():
    K = ks_skeleton(3)
    C = K.complex
    bad = Section.constant(C, 0)
    bad.parts[1] = (TropPoly.const(-1, C.charts[1].presentation.n), bad.parts[1][1])
    with pytest.raises(InconsistentSections):
        eval_global(C, bad, 0, (0,))
    with pytest.raises(PointOutside):
        eval_global(C, Section.constant(C, 0), 0, (2,))
    with pytest.raises(TooSmall):
        ks_skeleton(2)


def test_subdivision_preserves_sections():
    D = line_chart()
    ch = D.charts[0]
    f = Section({0: (ch.element("X v -X - 1"), ch.element("0 v X"))})
    S = subdivide(D, 0, "2X v -1")
    assert len(S.charts) == 2
    g = transport_section(f, S)
    rng = random.Random(11)
    for _ in range(20):
        x = Fraction(rng.randint(-12, 12), 12)
        want = eval_global(D, f, 0, (x,)).value
        hosts = [j for j, c in enumerate(S.charts) if c.polytope.contains((x,))]
        assert hosts and all(eval_global(S, g, j, (x,)).value == want for j in hosts)


def test_svg_and_json():
    C = ks_skeleton(4).complex
    svg = to_svg(C)
    assert svg.startswith("<svg") and svg.count("<circle") == 4
    data = json.loads(json.dumps(C.to_json()))
    assert data["schema"] == SCHEMA == "skeleta/1"
    assert data["counts"] == {"vertices": 4, "edges": 4}
    assert len(data["points"]) == 8 and len(data["charts"]) == 4


@pytest.mark.parametrize("n, mult, points", [
    (2, (1, 1), 3),
    (3, (1, 1, 1), 7),
    (3, (2, 1), 6),
    (2, (1,), 2),
])
def test_dual_intersection_charts(n, mult, points):
    s = SNCStratum(n, mult)
    spec, _ = integral_spectrum(dual_intersection_chart(s))
    assert len(spec.points) == points
    assert len(chart_real_vertices(s)) == len(mult)


def test_dual_intersection_vertices():
    assert chart_real_vertices(SNCStratum(2, (2, 1))) == [(Fraction(-1, 2), 0), (0, -1)]
    with pytest.raises(ValueError):
        SNCStratum(1, (1, 1))
    with pytest.raises(ValueError):
        SNCStratum(2, (0,))
