"""Constructing (pseudo-)generic filters.

For explicit finite preorders the generic filters are exactly the cones
over minimal conditions. For intensional forcings a descending chain is
driven through an explicit schedule of dense-set providers; the result
is generic only relative to that schedule, and every claim downstream
should name its schedule.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Callable, Generic, Iterable, TypeVar

from .errors import ScheduleError, UnknownConditionError
from .names import Filter
from .orders import Preorder, is_dense

C = TypeVar("C")


def cone(P: Preorder, m: str) -> Filter:
    """The filter of everything the condition strengthens; generic iff m is minimal."""
    if m not in P:
        raise UnknownConditionError(f"unknown condition {m!r}")
    return Filter(frozenset(q for q in P.carrier if P.le(m, q)))


def filter_validate(le: Callable[[C, C], bool], top: C, S: Iterable[C]) -> bool:
    """Upward closure, directedness and top membership, under a given order."""
    S = list(S)
    if not any(le(top, s) and le(s, top) for s in S):
        return False
    for s in S:
        for t in S:
            if not any(le(r, s) and le(r, t) for r in S):
                return False
    # upward closure can only be checked against a known ambient carrier;
    # for explicit preorders use filter_validate_explicit
    return True


def filter_validate_explicit(P: Preorder, S: Iterable[str]) -> bool:
    S = frozenset(S)
    for s in S:
        if s not in P:
            raise UnknownConditionError(f"unknown condition {s!r}")
    if P.top not in S:
        return False
    for s in S:
        for q in P.above(s):
            if q not in S:
                return False
        for t in S:
            if not any(P.le(r, s) and P.le(r, t) for r in S):
                return False
    return True


@dataclass
class ScheduleProvider(Generic[C]):
    """One dense set: a membership test plus a strengthening extender."""

    name: str
    member: Callable[[C], bool]
    extend: Callable[[C], C]


@dataclass
class DenseSetSchedule(Generic[C]):
    providers: list[ScheduleProvider]

    def shuffled(self, rng: random.Random) -> "DenseSetSchedule":
        out = list(self.providers)
        rng.shuffle(out)
        return DenseSetSchedule(out)


@dataclass
class ChainFilter(Generic[C]):
    """A finitely generated filter: the cone over the last chain element."""

    chain: list[C]
    le: Callable[[C, C], bool]

    @property
    def generator(self) -> C:
        return self.chain[-1]

    def contains(self, q: C) -> bool:
        return self.le(self.generator, q)


def rasiowa_sikorski(le: Callable[[C, C], bool], start: C,
                     schedule: DenseSetSchedule) -> ChainFilter:
    """Drive a descending chain through each scheduled dense set in turn.

    Each extender must hand back a condition inside its set and at least
    as strong as its input; both halves of that contract are re-checked
    on every step.
    """
    chain = [start]
    for provider in schedule.providers:
        p = chain[-1]
        q = provider.extend(p)
        if not le(q, p):
            raise ScheduleError(f"provider {provider.name!r} returned a non-extension")
        if not provider.member(q):
            raise ScheduleError(f"provider {provider.name!r} left its own set")
        if q != p:
            chain.append(q)
    return ChainFilter(chain, le)


def chain_filter_as_explicit(P: Preorder, chain: ChainFilter) -> Filter:
    """Materialize a chain filter inside an explicit preorder."""
    return cone(P, chain.generator)


def generic_filters_bruteforce(P: Preorder) -> list[Filter]:
    """All filters meeting every dense subset, by exhaustive search.

    Exponential in the carrier; this is the independent oracle the cone
    characterization is tested against.
    """
    carrier = P.carrier
    n = len(carrier)
    if n > 16:
        raise ValueError("brute-force filter search capped at 16 conditions")
    dense_sets = []
    for mask in range(1, 1 << n):
        D = tuple(c for i, c in enumerate(carrier) if (mask >> i) & 1)
        if is_dense(P, D):
            dense_sets.append(frozenset(D))
    out = []
    for mask in range(1, 1 << n):
        S = frozenset(c for i, c in enumerate(carrier) if (mask >> i) & 1)
        if not filter_validate_explicit(P, S):
            continue
        if all(S & D for D in dense_sets):
            out.append(Filter(S))
    return out
