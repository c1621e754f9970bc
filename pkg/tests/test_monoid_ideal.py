import itertools

import pytest
from hypothesis import given, settings, strategies as st

from skeleta import monoid_ideal as mi
from skeleta.errors import MonoidMismatch, NotMember, NotPointed, RankTooLarge
from skeleta.monoid_ideal import AffineMonoid, MonoidIdeal, divides, hilbert_basis

N2 = AffineMonoid.orthant(2)
SKEW = AffineMonoid(2, [(1, 0), (1, 1)])  # a >= 0, a + b >= 0


def I(*gens, M=N2):
    return MonoidIdeal(M, gens)


def test_divides():
    assert divides((1, 0), (2, 1), N2)
    assert not divides((2, 0), (1, 1), N2)
    assert divides((1, -1), (2, 0), SKEW)
    with pytest.raises(NotMember):
        divides((-1, 0), (0, 0), N2)


def test_pointed():
    assert N2.pointed
    assert not AffineMonoid(2, [(1, 0)]).pointed


def test_minimalize():
    assert I((1, 0), (2, 0)).generators == ((1, 0),)
    assert set(I((2, 0), (1, 1)).generators) == {(2, 0), (1, 1)}
    assert I().is_neg_inf


def test_join_and_plus():
    J = I((2, 0))
    assert set(mi.join(J, I((1, 1))).generators) == {(2, 0), (1, 1)}
    assert mi.join(J, MonoidIdeal.neg_inf(N2)) == J
    assert mi.join(J, J) == J
    assert mi.plus(I((1, 0)), I((0, 1))) == I((1, 1))
    m = I((1, 0), (0, 1))
    assert mi.plus(m, m) == I((2, 0), (1, 1), (0, 2))
    assert mi.plus(J, MonoidIdeal.neg_inf(N2)).is_neg_inf


def test_leq():
    assert mi.leq(I((2, 1)), I((1, 0)))
    assert not mi.leq(I((1, 0)), I((0, 1)))
    assert mi.leq(MonoidIdeal.neg_inf(N2), I((5, 5)))


def test_mismatched_monoids():
    with pytest.raises(MonoidMismatch):
        mi.join(I((1, 0)), I((1, 0), M=SKEW))


def brute_hilbert(M, radius=6):
    """Irreducible elements found in a box: members that are no sum of two nonzero members."""
    pts = [p for p in itertools.product(range(-radius, radius + 1), repeat=M.rank) if any(p) and M.contains(p)]
    S = set(pts)
    return sorted(p for p in pts if not any(tuple(a - b for a, b in zip(p, q)) in S for q in pts if q != p))


def test_hilbert_basis_examples():
    assert hilbert_basis(N2) == [(0, 1), (1, 0)]
    assert hilbert_basis(AffineMonoid(2, [(1, 0), (0, 1), (1, 1)])) == [(0, 1), (1, 0)]
    # the cone spanned by (1, 0) and (1, 2) needs the interior generator (1, 1)
    wide = AffineMonoid(2, [(0, 1), (2, -1)])
    assert hilbert_basis(wide) == [(1, 0), (1, 1), (1, 2)]
    assert hilbert_basis(wide) == brute_hilbert(wide)


@pytest.mark.parametrize("ineqs", [
    [(1, 0), (1, 2), (0, -1)],
    [(0, 1), (3, -1)],
    [(1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, -1)],
    [(1, 0, 0), (0, 1, 0), (-1, -1, 2)],
])
def test_hilbert_basis_against_box_enumeration(ineqs):
    M = AffineMonoid(len(ineqs[0]), ineqs)
    H = hilbert_basis(M)
    assert H == brute_hilbert(M, radius=6 if M.rank == 2 else 4)
    # every box element is an N-combination of the basis
    box = [p for p in itertools.product(range(-4, 5), repeat=M.rank) if M.contains(p)]
    for p in box:
        assert _combination(p, H, M)


def _combination(p, H, M):
    if not any(p):
        return True
    return any(M.contains(tuple(a - b for a, b in zip(p, h))) and _combination(tuple(a - b for a, b in zip(p, h)), H, M)
               for h in H)


def test_hilbert_basis_limits():
    with pytest.raises(NotPointed):
        hilbert_basis(AffineMonoid(2, [(1, 0)]))
    with pytest.raises(RankTooLarge):
        hilbert_basis(AffineMonoid.orthant(5))


points = st.tuples(st.integers(0, 4), st.integers(0, 4))
ideals = st.lists(points, max_size=4).map(lambda gs: MonoidIdeal(N2, gs))
skew_points = st.tuples(st.integers(0, 3), st.integers(-3, 3)).filter(SKEW.contains)
skew_ideals = st.lists(skew_points, max_size=3).map(lambda gs: MonoidIdeal(SKEW, gs))


@settings(max_examples=200)
@given(st.one_of(st.tuples(ideals, ideals, ideals), st.tuples(skew_ideals, skew_ideals, skew_ideals)))
def test_semiring_axioms(abc):
    a, b, c = abc
    M = a.monoid
    zero, bottom = MonoidIdeal.unit(M), MonoidIdeal.neg_inf(M)
    assert mi.join(a, b) == mi.join(b, a)
    assert mi.join(mi.join(a, b), c) == mi.join(a, mi.join(b, c))
    assert mi.join(a, a) == a and mi.join(a, bottom) == a
    assert mi.plus(a, b) == mi.plus(b, a)
    assert mi.plus(mi.plus(a, b), c) == mi.plus(a, mi.plus(b, c))
    assert mi.plus(a, zero) == a and mi.plus(a, bottom).is_neg_inf
    assert mi.plus(a, mi.join(b, c)) == mi.join(mi.plus(a, b), mi.plus(a, c))


@given(ideals, ideals)
def test_order_determines_normal_form(a, b):
    if mi.leq(a, b) and mi.leq(b, a):
        assert a.generators == b.generators
    assert mi.leq(a, mi.join(a, b))


@given(ideals)
def test_generators_form_an_antichain(a):
    for g, h in itertools.permutations(a.generators, 2):
        assert not divides(g, h, N2)
