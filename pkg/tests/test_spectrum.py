import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from skeleta.dsl import parse_element, parse_presentation
from skeleta.errors import NotContracting, NotIntegral, TooManyGenerators
from skeleta.presentation import freely_contracting, free_semiring, poly_join, poly_plus
from skeleta.spectrum import (MAX_GENERATORS, cellular_cover_check, enumerate_points, face_poset_of_simplex,
                              integral_spectrum, open_of_localization, poset_isomorphism,
                              random_contracting, random_integral)

BXY = freely_contracting("Bool", ["X", "Y"])
SIMPLEX = "semiring over Zv; gens X1 contracting, X2 contracting; rel X1 + X2 = -1;"


def brute_points(P):
    """Assignments to {0, -inf} satisfying every relation, evaluated by hand."""
    def value(e, on, top):
        # a term survives iff its constant is the top one and all its variables are 0
        return any(c == top and all(on[i] or not k for i, k in enumerate(x)) for x, c in e.terms.items())
    out = []
    for on in itertools.product((False, True), repeat=P.n):
        ok = True
        for r in P.relations:
            # constants are invertible, so a relation may be shifted until its top constant is 0
            top = max(list(r.lhs.terms.values()) + list(r.rhs.terms.values()), default=0)
            l, rr = value(r.lhs, on, top), value(r.rhs, on, top)
            ok = ok and (l == rr if r.kind == "Eq" else (not l or rr))
        if ok:
            out.append(on)
    return out


@pytest.mark.parametrize("k", range(1, 6))
def test_polydisc(k):
    spec = enumerate_points(freely_contracting("Bool", [f"X{i}" for i in range(k)]))
    assert len(spec.points) == 2 ** k
    assert all(len(spec.basic_opens[f"X{i}"]) == 2 ** (k - 1) for i in range(k))


def test_one_simplex():
    spec = enumerate_points(parse_presentation(SIMPLEX))
    assert len(spec.points) == 3
    assert {p.zero_set for p in spec.points} == {frozenset({"X1"}), frozenset({"X2"}), frozenset()}
    assert poset_isomorphism(spec.specialization_graph(), face_poset_of_simplex(2)) is not None


def test_null_presentation_has_no_points():
    P = parse_presentation("semiring over B; rel 0 = -inf;")
    assert enumerate_points(P).points == []


def test_enumeration_limits():
    with pytest.raises(NotContracting):
        enumerate_points(free_semiring("Bool", ["X"]))
    with pytest.raises(TooManyGenerators):
        enumerate_points(freely_contracting("Bool", [f"X{i}" for i in range(MAX_GENERATORS + 1)]))


def test_opens_of_localizations():
    spec = enumerate_points(BXY)
    assert open_of_localization(BXY, BXY.zero(), spec).open == frozenset(range(4))
    assert open_of_localization(BXY, BXY.neg_inf(), spec).open == frozenset()
    check = open_of_localization(BXY, BXY.var("X"), spec)
    assert check.ok and len(check.open) == 2
    # the localization is B{Y}
    assert len(check.localized.points) == 2
    with pytest.raises(NotIntegral):
        open_of_localization(parse_presentation("semiring over Zv; gens X contracting;"),
                             parse_element("X + 1", parse_presentation("semiring over Zv; gens X contracting;")))


def test_cover_examples():
    cert = cellular_cover_check(BXY, [BXY.var("X"), BXY.var("Y")])
    assert cert.ok and len(cert.union_open) == 3
    assert sorted(len(m) for m in cert.membership.values()) == [0, 1, 1, 2]
    assert cellular_cover_check(BXY, [BXY.var("X")]).ok
    with pytest.raises(ValueError):
        cellular_cover_check(BXY, [])


def test_opens_and_specialization_of_polydisc():
    spec = enumerate_points(BXY)
    # the opens of the 2-polydisc are the down-closed sets of the square poset
    assert len(spec.opens()) == 6
    assert len([1 for p, q in spec.specialization_pairs() if p != q]) == 5


def test_integral_spectrum_of_simplex():
    spec, model = integral_spectrum(parse_presentation(SIMPLEX))
    assert len(spec.points) == 3
    assert set(model.labels) >= {"X1", "X2"}


def test_integral_spectrum_of_polydisc_over_z():
    spec, _ = integral_spectrum(freely_contracting("Int", ["X"]))
    # the twist is a third coordinate: the point X -> 0 and the point X -> -inf
    assert len(spec.points) == 2


def test_to_json():
    data = enumerate_points(parse_presentation(SIMPLEX)).to_json()
    assert len(data["points"]) == 3 and set(data["basic_opens"]) >= {"X1", "X2"}


seeds = st.integers(0, 10 ** 6)


@settings(max_examples=100, deadline=None)
@given(seeds)
def test_points_match_brute_force(seed):
    P = random_contracting(random.Random(seed))
    spec = enumerate_points(P)
    assert [p.values for p in spec.points] == brute_points(P)


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_localization_is_the_open_subspace(seed):
    rng = random.Random(seed)
    P = random_contracting(rng)
    S = random_integral(rng, P)
    spec = enumerate_points(P)
    check = open_of_localization(P, S, spec)
    assert check.ok
    # opens of the localization are exactly the traces of opens on U_S
    traces = {frozenset(U & check.open) for U in spec.opens()}
    images = {frozenset(check.bijection[j] for j in V) for V in check.localized.opens()}
    assert images == traces


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_basic_opens_respect_operations(seed):
    rng = random.Random(seed)
    P = random_contracting(rng)
    a, b = random_integral(rng, P), random_integral(rng, P)
    spec = enumerate_points(P)
    assert spec.open_of(poly_join(a, b)) == spec.open_of(a) | spec.open_of(b)
    assert spec.open_of(poly_plus(a, b)) == spec.open_of(a) & spec.open_of(b)


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_cellular_cover(seed):
    rng = random.Random(seed)
    P = random_contracting(rng)
    parts = [random_integral(rng, P) for _ in range(rng.randint(1, 3))]
    assert cellular_cover_check(P, parts).ok
