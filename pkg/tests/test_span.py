import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from skeleta.errors import NotJoinPreserving, TooLarge
from skeleta.span import (FiniteSpan, SpanHom, coequalizer, free_span, hom_from_generators,
                          is_join_preserving, lattice_completion, random_hom, random_lattice,
                          right_adjoint)


def chain(n):
    return FiniteSpan([str(i) for i in range(n)], lambda i, j: i <= j)


def test_free_span_sizes():
    assert len(free_span([])) == 1
    one = free_span(["a"])
    assert len(one) == 2 and one.leq(one.bottom, one.top)
    B = free_span(["a", "b"])
    assert len(B) == 4
    assert B.labels[B.bottom] == "{}" and B.labels[B.top] == "{a,b}"
    with pytest.raises(TooLarge):
        free_span(range(13))
    with pytest.raises(ValueError):
        free_span(["a", "a"])


def test_bad_orders_rejected():
    with pytest.raises(ValueError):
        FiniteSpan(["a", "b"], lambda i, j: True)  # not antisymmetric
    with pytest.raises(ValueError):
        FiniteSpan(["a", "b"], lambda i, j: i == j)  # no bottom


@pytest.mark.parametrize("S", [chain(1), chain(2), free_span(["a", "b"])])
def test_lattice_completion_is_iso_for_finite_spans(S):
    assert lattice_completion(S).is_iso()


def test_adjoint_examples():
    B = free_span(["a", "b"])
    ident = SpanHom(B, B, list(range(len(B))))
    assert right_adjoint(ident).map == list(range(len(B)))
    two = chain(2)
    f = SpanHom(B, two, [0 if i == B.bottom else 1 for i in range(len(B))])
    assert right_adjoint(f)(1) == B.top
    const = SpanHom(B, two, [0] * len(B))
    assert all(x == B.top for x in right_adjoint(const).map)
    with pytest.raises(NotJoinPreserving):
        SpanHom(B, two, [1] * len(B))


def test_coequalizer_of_equal_maps_is_iso():
    B = free_span(["a", "b"])
    f = SpanHom(chain(2), B, [B.bottom, B.top])
    q = coequalizer(f, f)
    assert q.projection.is_iso()


def test_coequalizer_identifying_a_with_bottom():
    B = free_span(["a", "b"])
    a = B.labels.index("{a}")
    s = SpanHom(chain(2), B, [B.bottom, a])
    t = SpanHom(chain(2), B, [B.bottom, B.bottom])
    q = coequalizer(s, t)
    assert len(q.span) == 2
    p = q.projection
    assert p(a) == p(B.bottom)
    assert p(B.labels.index("{b}")) == p(B.top)


def test_quotient_of_chain_by_lower_ideal():
    # identifying the lower ideal {0, 1} of a 3-chain with -inf leaves a 2-chain
    C = chain(3)
    s = SpanHom(chain(2), C, [0, 1])
    t = SpanHom(chain(2), C, [0, 0])
    q = coequalizer(s, t)
    assert len(q.span) == 2
    assert q.projection(1) == q.projection(0) != q.projection(2)


def test_free_span_universal_property():
    # maps from the free span on S correspond to functions S -> alpha
    for size in range(1, 4):
        S = free_span("abc"[:size])
        for target in (chain(3), free_span(["x", "y"])):
            homs = set()
            for images in itertools.product(range(len(target)), repeat=size):
                h = hom_from_generators(S, target, dict(zip("abc", images)))
                homs.add(tuple(h.map))
            # brute force: all join-preserving maps
            count = sum(1 for m in itertools.product(range(len(target)), repeat=len(S))
                        if is_join_preserving(S, target, m))
            assert len(homs) == count == len(target) ** size


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_galois_connection_laws(seed):
    rng = random.Random(seed)
    S, T = random_lattice(rng), random_lattice(rng)
    f = random_hom(rng, S, T)
    g = right_adjoint(f)
    for x in range(len(S)):
        assert S.leq(x, g(f(x)))
        assert f(g(f(x))) == f(x)
    for y in range(len(T)):
        assert T.leq(f(g(y)), y)
        assert g(f(g(y))) == g(y)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_random_lattices_are_spans(seed):
    S = random_lattice(random.Random(seed))
    assert len(S) <= 32
    for i in range(len(S)):
        assert S.leq(S.bottom, i)
        for j in range(len(S)):
            k = S.join(i, j)
            assert S.leq(i, k) and S.leq(j, k)
