"""Finite partial orders on Morse index sets, their intervals and adjacent pairs."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, NamedTuple

Interval = frozenset


class OrderError(ValueError):
    """The supplied relation is not a strict partial order."""


class AdjacentPair(NamedTuple):
    """Disjoint intervals with convex union; ``I`` is the attracting (lower) side."""

    I: frozenset
    J: frozenset

    @property
    def union(self) -> frozenset:
        return self.I | self.J


@dataclass(frozen=True)
class FinitePoset:
    """A strict partial order ``<`` on an ordered list of string labels.

    ``relation`` holds every pair ``(a, b)`` with ``a < b`` and is
    transitively closed.  Build instances with :func:`validate` (or the
    :meth:`chain` / :meth:`antichain` shortcuts) rather than directly.
    """

    elements: tuple[str, ...]
    relation: frozenset

    @classmethod
    def chain(cls, elements: Iterable) -> "FinitePoset":
        elements = [str(e) for e in elements]
        return validate(elements, zip(elements, elements[1:]))

    @classmethod
    def antichain(cls, elements: Iterable) -> "FinitePoset":
        return validate(elements, [])

    def __len__(self) -> int:
        return len(self.elements)

    def __contains__(self, p) -> bool:
        return p in self._position

    @property
    def _position(self) -> dict[str, int]:
        cached = self.__dict__.get("_pos")
        if cached is None:
            cached = {e: i for i, e in enumerate(self.elements)}
            object.__setattr__(self, "_pos", cached)
        return cached

    def position(self, p: str) -> int:
        return self._position[p]

    def less(self, p, q) -> bool:
        return (p, q) in self.relation

    def leq(self, p, q) -> bool:
        return p == q or (p, q) in self.relation

    def comparable(self, p, q) -> bool:
        return self.leq(p, q) or self.leq(q, p)

    def is_total(self) -> bool:
        return all(self.comparable(p, q) for p, q in combinations(self.elements, 2))

    def covers(self) -> list[tuple[str, str]]:
        """Covering pairs ``(p, q)``: ``p < q`` with nothing strictly between."""
        return sorted(
            (
                (p, q)
                for p, q in self.relation
                if not any(self.less(p, r) and self.less(r, q) for r in self.elements)
            ),
            key=lambda pq: (self.position(pq[0]), self.position(pq[1])),
        )

    def sort_key(self, subset: Iterable) -> tuple:
        pos = sorted(self.position(e) for e in subset)
        return (len(pos), pos)

    def sorted(self, subset: Iterable) -> list[str]:
        return sorted(subset, key=self.position)

    def is_interval(self, subset: Iterable) -> bool:
        S = set(subset)
        if not S <= set(self.elements):
            return False
        return not any(
            r not in S and self.less(p, r) and self.less(r, q)
            for p in S
            for q in S
            for r in self.elements
        )

    def is_down_set(self, subset, within) -> bool:
        """Whether ``subset`` is closed downwards inside ``within``."""
        return not any(self.less(q, p) for p in subset for q in within if q not in subset)

    def restrict(self, subset: Iterable) -> "FinitePoset":
        S = set(subset)
        elements = [e for e in self.elements if e in S]
        return FinitePoset(tuple(elements), frozenset((p, q) for p, q in self.relation if p in S and q in S))

    def linear_extension(self) -> list[str]:
        """Deterministic linear extension: repeatedly take the first minimal element in input order."""
        placed: list[str] = []
        remaining = list(self.elements)
        while remaining:
            for e in remaining:
                if not any(self.less(r, e) for r in remaining if r != e):
                    placed.append(e)
                    remaining.remove(e)
                    break
        return placed


def _closure(elements: list[str], pairs: set[tuple[str, str]]) -> set[tuple[str, str]]:
    succ = {e: set() for e in elements}
    for p, q in pairs:
        succ[p].add(q)
    closed = set()
    for e in elements:
        stack, seen = list(succ[e]), set()
        while stack:
            x = stack.pop()
            if x in seen:
                continue
            seen.add(x)
            stack.extend(succ[x])
        closed.update((e, x) for x in seen)
    return closed


def validate(elements: Iterable, pairs: Iterable) -> FinitePoset:
    """Build a poset from generating relations ``p < q``, taking the transitive closure.

    Raises :class:`OrderError` on unknown labels, duplicate labels or cycles.
    """
    elements = [str(e) for e in elements]
    if len(set(elements)) != len(elements):
        raise OrderError("duplicate element labels")
    known = set(elements)
    gen = set()
    for p, q in pairs:
        p, q = str(p), str(q)
        if p not in known or q not in known:
            raise OrderError(f"relation {p} < {q} mentions an unknown element")
        gen.add((p, q))
    closed = _closure(elements, gen)
    loops = sorted(p for p, q in closed if p == q)
    if loops:
        raise OrderError(f"not a partial order: cycle through {loops[0]}")
    return FinitePoset(tuple(elements), frozenset(closed))


def intervals(P: FinitePoset) -> list[frozenset]:
    """All convex subsets of ``P`` (including the empty set), ordered by size then position."""
    out = []
    for size in range(len(P) + 1):
        for combo in combinations(P.elements, size):
            if P.is_interval(combo):
                out.append(frozenset(combo))
    return out


def adjacent_pairs(P: FinitePoset, include_empty: bool = False) -> list[AdjacentPair]:
    """Ordered pairs ``(I, J)`` of disjoint intervals with convex union and no ``q < p`` for ``p in I, q in J``.

    Every such pair arises from exactly one interval ``K = I ∪ J`` by
    splitting it into a down-set ``I`` and its complement.  Pairs with an
    empty side are omitted unless ``include_empty`` is set.
    """
    out = []
    for K in intervals(P):
        members = P.sorted(K)
        for size in range(len(members) + 1):
            for combo in combinations(members, size):
                I = frozenset(combo)
                J = K - I
                if not include_empty and (not I or not J):
                    continue
                if P.is_down_set(I, K):
                    out.append(AdjacentPair(I, J))
    out.sort(key=lambda ij: (P.sort_key(ij.I), P.sort_key(ij.J)))
    return out


def is_adjacent(P: FinitePoset, I: Iterable, J: Iterable) -> bool:
    I, J = frozenset(I), frozenset(J)
    return (
        not (I & J)
        and P.is_interval(I)
        and P.is_interval(J)
        and P.is_interval(I | J)
        and P.is_down_set(I, I | J)
    )


def extends(fine: FinitePoset, coarse: FinitePoset) -> bool:
    """True iff every relation of ``coarse`` also holds in ``fine``."""
    if set(fine.elements) != set(coarse.elements):
        raise OrderError("posets have different element sets")
    return coarse.relation <= fine.relation


def order_closure_paths(P: FinitePoset, p, q) -> list[tuple[str, ...]]:
    """Every maximal chain ``p = p_n < ... < p_0 = q`` through covering relations.

    Chains are returned bottom-up, ``(p, ..., q)``, in lexicographic order of
    element positions.  Empty unless ``p < q``.
    """
    p, q = str(p), str(q)
    if p not in P or q not in P:
        raise OrderError(f"unknown element in ({p}, {q})")
    if not P.less(p, q):
        return []
    up: dict[str, list[str]] = {e: [] for e in P.elements}
    for a, b in P.covers():
        up[a].append(b)
    chains = []

    def walk(path):
        last = path[-1]
        if last == q:
            chains.append(tuple(path))
            return
        for nxt in up[last]:
            if P.leq(nxt, q):
                walk(path + [nxt])

    walk([p])
    chains.sort(key=lambda c: [P.position(e) for e in c])
    return chains
