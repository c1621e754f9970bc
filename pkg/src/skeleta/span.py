"""Finite spans: join-semilattices with a least element.

Elements are identified by their index; ``labels`` are only for display.
Everything here is finite, so every span with a bottom and binary joins is a
complete lattice and right adjoints always exist.

>>> B = free_span(["a", "b"])
>>> len(B), B.labels[B.top]
(4, '{a,b}')
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

from .errors import NotJoinPreserving, TooLarge

FREE_SPAN_CAP = 12


class FiniteSpan:
    """A finite poset with bottom in which every pair has a join."""

    def __init__(self, labels: Sequence, leq: Callable[[int, int], bool] | Sequence[Sequence[bool]]):
        n = len(labels)
        self.labels = [str(x) for x in labels]
        if callable(leq):
            self._leq = [[bool(leq(i, j)) for j in range(n)] for i in range(n)]
        else:
            self._leq = [[bool(x) for x in row] for row in leq]
        self._validate()
        self._join = [[self._lub(i, j) for j in range(n)] for i in range(n)]
        bottoms = [i for i in range(n) if all(self._leq[i][j] for j in range(n))]
        if not bottoms:
            raise ValueError("span has no least element")
        self.bottom = bottoms[0]
        top = self.bottom
        for i in range(n):
            top = self._join[top][i]
        self.top = top

    def _validate(self):
        n = len(self.labels)
        L = self._leq
        for i in range(n):
            if not L[i][i]:
                raise ValueError("order is not reflexive")
            for j in range(n):
                if i != j and L[i][j] and L[j][i]:
                    raise ValueError("order is not antisymmetric")
                if L[i][j]:
                    for k in range(n):
                        if L[j][k] and not L[i][k]:
                            raise ValueError("order is not transitive")

    def _lub(self, i: int, j: int) -> int:
        n = len(self.labels)
        ubs = [k for k in range(n) if self._leq[i][k] and self._leq[j][k]]
        least = [k for k in ubs if all(self._leq[k][u] for u in ubs)]
        if not least:
            raise ValueError(f"no join for {self.labels[i]} and {self.labels[j]}")
        return least[0]

    def __len__(self):
        return len(self.labels)

    def leq(self, i: int, j: int) -> bool:
        return self._leq[i][j]

    def index(self, label: str) -> int:
        return self.labels.index(label)

    def join(self, i: int, j: int) -> int:
        return self._join[i][j]

    def sup(self, items: Iterable[int]) -> int:
        out = self.bottom
        for i in items:
            out = self._join[out][i]
        return out

    def downset(self, i: int) -> frozenset[int]:
        return frozenset(j for j in range(len(self)) if self._leq[j][i])

    def leq_pairs(self) -> list[tuple[int, int]]:
        n = len(self)
        return [(i, j) for i in range(n) for j in range(n) if self._leq[i][j]]

    def to_json(self) -> dict:
        return {"elements": list(self.labels), "leq_pairs": [list(p) for p in self.leq_pairs()]}

    @classmethod
    def from_json(cls, data: dict) -> FiniteSpan:
        n = len(data["elements"])
        rel = [[i == j for j in range(n)] for i in range(n)]
        for i, j in data["leq_pairs"]:
            rel[i][j] = True
        return cls(data["elements"], rel)

    @classmethod
    def from_sets(cls, family: Iterable[frozenset], label: Callable | None = None) -> SetSpan:
        return SetSpan(family, label)


class SetSpan(FiniteSpan):
    """A union-closed family of sets ordered by inclusion.

    Order and join come from set operations, so a power set of a dozen
    generators stays cheap.
    """

    def __init__(self, family: Iterable[frozenset], label: Callable | None = None):
        fam = sorted(set(map(frozenset, family)), key=lambda A: (len(A), sorted(map(str, A))))
        label = label or (lambda A: "{" + ",".join(sorted(map(str, A))) + "}")
        self.sets = fam
        self.labels = [label(A) for A in fam]
        self._index = {A: i for i, A in enumerate(fam)}
        if frozenset() not in self._index:
            raise ValueError("family must contain the empty set")
        if len(fam) <= 64 and any(A | B not in self._index for A in fam for B in fam):
            raise ValueError("family is not closed under unions")
        self.bottom = 0
        self.top = self._index[frozenset().union(*fam)]

    def index(self, A) -> int:
        return self._index[frozenset(A)]

    def leq(self, i: int, j: int) -> bool:
        return self.sets[i] <= self.sets[j]

    def join(self, i: int, j: int) -> int:
        return self._index[self.sets[i] | self.sets[j]]

    def sup(self, items: Iterable[int]) -> int:
        return self._index[frozenset().union(*(self.sets[i] for i in items))]

    def downset(self, i: int) -> frozenset[int]:
        return frozenset(j for j, A in enumerate(self.sets) if A <= self.sets[i])

    def leq_pairs(self) -> list[tuple[int, int]]:
        n = len(self)
        return [(i, j) for i in range(n) for j in range(n) if self.sets[i] <= self.sets[j]]


@dataclass
class SpanHom:
    """A map of spans given by the image index of each source element."""

    source: FiniteSpan
    target: FiniteSpan
    map: list[int]

    def __post_init__(self):
        self.map = list(self.map)
        if len(self.map) != len(self.source):
            raise ValueError("map length does not match source")
        check_join_preserving(self.source, self.target, self.map)

    def __call__(self, i: int) -> int:
        return self.map[i]

    def is_iso(self) -> bool:
        if len(set(self.map)) != len(self.target) or len(self.source) != len(self.target):
            return False
        S, T = self.source, self.target
        return all(S.leq(i, j) == T.leq(self.map[i], self.map[j]) for i in range(len(S)) for j in range(len(S)))


@dataclass
class MonotoneMap:
    source: FiniteSpan
    target: FiniteSpan
    map: list[int]

    def __call__(self, i: int) -> int:
        return self.map[i]


def check_join_preserving(source: FiniteSpan, target: FiniteSpan, f: Sequence[int]):
    if f[source.bottom] != target.bottom:
        raise NotJoinPreserving("bottom is not preserved")
    n = len(source)
    for i in range(n):
        for j in range(i + 1, n):
            if f[source.join(i, j)] != target.join(f[i], f[j]):
                raise NotJoinPreserving(
                    f"f({source.labels[i]} v {source.labels[j]}) != f(..) v f(..)",
                    left=source.labels[i], right=source.labels[j],
                )


def is_join_preserving(source: FiniteSpan, target: FiniteSpan, f: Sequence[int]) -> bool:
    try:
        check_join_preserving(source, target, f)
    except NotJoinPreserving:
        return False
    return True


def free_span(generators: Iterable, cap: int = FREE_SPAN_CAP) -> FiniteSpan:
    """All subsets of the generators, ordered by inclusion."""
    gens = list(generators)
    if len(set(gens)) != len(gens):
        raise ValueError("generator names must be distinct")
    if len(gens) > cap:
        raise TooLarge(f"{len(gens)} generators exceeds cap {cap}", size=len(gens), cap=cap)
    subsets = [frozenset(c) for r in range(len(gens) + 1) for c in itertools.combinations(gens, r)]
    return FiniteSpan.from_sets(subsets)


def ideals(s: FiniteSpan) -> list[frozenset[int]]:
    """Nonempty lower subsets closed under binary joins."""
    n = len(s)
    out = []
    # small spans: enumerate every subset; larger ones: every ideal is principal
    # anyway (it contains its own join), so listing downsets is exhaustive
    if n <= 16:
        for mask in range(1, 1 << n):
            subset = [i for i in range(n) if mask >> i & 1]
            S = set(subset)
            if s.bottom not in S:
                continue
            if any(s.leq(j, i) and j not in S for i in subset for j in range(n)):
                continue
            if any(s.join(i, j) not in S for i in subset for j in subset):
                continue
            out.append(frozenset(S))
        return out
    return sorted({s.downset(i) for i in range(n)}, key=len)


def lattice_completion(s: FiniteSpan) -> SpanHom:
    """The embedding X -> (elements below X) into the span of ideals."""
    ids = sorted(ideals(s), key=lambda I: (len(I), sorted(I)))
    labels = ["{" + ",".join(s.labels[i] for i in sorted(I)) + "}" for I in ids]
    target = FiniteSpan(labels, lambda i, j: ids[i] <= ids[j])
    target.sets = ids
    index = {I: k for k, I in enumerate(ids)}
    return SpanHom(s, target, [index[s.downset(i)] for i in range(len(s))])


def right_adjoint(f: SpanHom) -> MonotoneMap:
    """f-dagger(X) = sup of all Y with f(Y) <= X."""
    S, T = f.source, f.target
    check_join_preserving(S, T, f.map)
    return MonotoneMap(T, S, [S.sup(y for y in range(len(S)) if T.leq(f.map[y], x)) for x in range(len(T))])


@dataclass
class Quotient:
    span: FiniteSpan
    projection: SpanHom
    closure: list[int]  # closure operator on the original target


def coequalizer(s: SpanHom, t: SpanHom) -> Quotient:
    """Quotient of the common target by the least congruence with s ~ t.

    ``closure`` is the closure operator p = sup((t s^)^n v (s t^)^n); the
    quotient is its set of fixed points with join p(X v Y).
    """
    if s.source is not t.source or s.target is not t.target:
        if len(s.source) != len(t.source) or len(s.target) != len(t.target):
            raise ValueError("s and t must share source and target")
    B = s.target
    sd, td = right_adjoint(s), right_adjoint(t)
    closure = []
    for y in range(len(B)):
        cur = y
        for _ in range(len(B) + 1):
            nxt = B.join(B.join(cur, t(sd(cur))), s(td(cur)))
            if nxt == cur:
                break
            cur = nxt
        closure.append(cur)
    fixed = sorted({c for c in closure}, key=lambda c: (len(B.downset(c)), c))
    pos = {c: k for k, c in enumerate(fixed)}
    span = FiniteSpan([B.labels[c] for c in fixed], lambda i, j: B.leq(fixed[i], fixed[j]))
    proj = SpanHom(B, span, [pos[closure[y]] for y in range(len(B))])
    return Quotient(span, proj, closure)


def hom_from_generators(S: FiniteSpan, target: FiniteSpan, images: dict) -> SpanHom:
    """The unique map out of a free span extending a function on generators."""
    return SpanHom(S, target, [target.sup(images[g] for g in subset) for subset in S.sets])


# -- random instances -----------------------------------------------------


def random_lattice(rng: random.Random, max_size: int = 32, ground: int = 6) -> FiniteSpan:
    """A random finite lattice, realized as a union-closed family of sets."""
    fam = {frozenset()}
    for _ in range(rng.randint(1, 2 * ground)):
        new = frozenset(x for x in range(ground) if rng.random() < 0.4)
        closed = fam | {new | A for A in fam}
        if len(closed) > max_size:
            break
        fam = closed
    return FiniteSpan.from_sets(fam)


def random_hom(rng: random.Random, source: FiniteSpan, target: FiniteSpan) -> SpanHom:
    """A random join-preserving map out of a set-family span.

    Send each ground element somewhere in the target and extend by joins.
    """
    ground = sorted(set().union(*source.sets))
    g = {a: rng.randrange(len(target)) for a in ground}
    return SpanHom(source, target, [target.sup(g[a] for a in A) for A in source.sets])
