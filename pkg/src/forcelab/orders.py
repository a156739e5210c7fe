"""Finite preorders as forcing notions, and their Boolean completions.

Conditions are identified by strings; stronger conditions sit lower.
Density, antichain and separativity tooling works on explicit carriers,
and two independent routes produce the Boolean completion: the regular
open algebra built directly from minimal classes, and a saturation
procedure that keeps adjoining suprema and negations until nothing new
appears.
"""

from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass
from functools import lru_cache
from typing import Hashable, Iterable, Mapping

from .config import max_carrier
from .errors import (
    BoundExceeded,
    DeskWarning,
    OrderError,
    SeparativityError,
    UnknownConditionError,
)


class Preorder:
    """An explicit finite preorder with a weakest condition ``top``.

    ``le_pairs`` must already be reflexive and transitive; use
    :meth:`from_generators` to close a generating relation at load time.
    """

    __slots__ = ("carrier", "top", "_le", "_below", "_above", "_index", "_hash", "_compat")

    def __init__(self, carrier: Iterable[str], le_pairs: Iterable[tuple[str, str]], top: str,
                 _trusted: bool = False):
        carrier = tuple(carrier)
        if len(set(carrier)) != len(carrier):
            raise OrderError("condition identifiers must be unique")
        if not carrier:
            raise OrderError("carrier must be non-empty")
        if top not in carrier:
            raise UnknownConditionError(f"top {top!r} not in carrier")
        le = frozenset(le_pairs)
        index = {p: i for i, p in enumerate(carrier)}
        for (p, q) in le:
            if p not in index or q not in index:
                raise UnknownConditionError(f"relation mentions unknown condition in ({p!r},{q!r})")
        if not _trusted:
            for p in carrier:
                if (p, p) not in le:
                    raise OrderError(f"relation not reflexive at {p!r}")
                if (p, top) not in le:
                    raise OrderError(f"{p!r} does not lie below top {top!r}")
            for (p, q) in le:
                for r in carrier:
                    if (q, r) in le and (p, r) not in le:
                        raise OrderError(f"relation not transitive: {p!r}<={q!r}<={r!r}")
        self.carrier = carrier
        self.top = top
        self._le = le
        self._index = index
        below: dict[str, list[str]] = {p: [] for p in carrier}
        above: dict[str, list[str]] = {p: [] for p in carrier}
        for q in carrier:
            for p in carrier:
                if (p, q) in le:
                    below[q].append(p)
                    above[p].append(q)
        self._below = {p: tuple(v) for p, v in below.items()}
        self._above = {p: tuple(v) for p, v in above.items()}
        self._hash = hash((carrier, le, top))
        self._compat = {}

    @classmethod
    def from_generators(cls, carrier: Iterable[str], pairs: Iterable[tuple[str, str]],
                        top: str) -> "Preorder":
        """Close a generating relation reflexively and transitively."""
        carrier = tuple(carrier)
        le = {(p, p) for p in carrier}
        le.update((p, top) for p in carrier)
        le.update(pairs)
        changed = True
        while changed:
            changed = False
            for (p, q) in list(le):
                for (q2, r) in list(le):
                    if q == q2 and (p, r) not in le:
                        le.add((p, r))
                        changed = True
        return cls(carrier, le, top)

    def le(self, p: str, q: str) -> bool:
        if p not in self._index or q not in self._index:
            raise UnknownConditionError(f"unknown condition in ({p!r},{q!r})")
        return (p, q) in self._le

    def below(self, p: str) -> tuple[str, ...]:
        """All q <= p (the strengthenings of p), in carrier order."""
        return self._below[p]

    def above(self, p: str) -> tuple[str, ...]:
        return self._above[p]

    def compatible(self, p: str, q: str) -> bool:
        key = (p, q)
        hit = self._compat.get(key)
        if hit is None:
            hit = any((r, q) in self._le for r in self._below[p])
            self._compat[key] = hit
            self._compat[(q, p)] = hit
        return hit

    def equivalent(self, p: str, q: str) -> bool:
        return (p, q) in self._le and (q, p) in self._le

    def is_antisymmetric(self) -> bool:
        return all(not self.equivalent(p, q)
                   for p, q in self._le if p != q)

    def index(self, p: str) -> int:
        return self._index[p]

    def __contains__(self, p: object) -> bool:
        return p in self._index

    def __len__(self) -> int:
        return len(self.carrier)

    def __eq__(self, other: object) -> bool:
        return (self is other) or (
            isinstance(other, Preorder)
            and self.carrier == other.carrier
            and self._le == other._le
            and self.top == other.top
        )

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"<Preorder {len(self.carrier)} conditions, top={self.top!r}>"


def _check_subset(P: Preorder, D: Iterable[str]) -> tuple[str, ...]:
    D = tuple(D)
    for d in D:
        if d not in P:
            raise UnknownConditionError(f"unknown condition {d!r}")
    return D


def is_dense(P: Preorder, D: Iterable[str]) -> bool:
    """Every condition has a strengthening inside D."""
    D = _check_subset(P, D)
    return all(any(P.le(d, q) for d in D) for q in P.carrier)


def is_dense_below(P: Preorder, D: Iterable[str], p: str) -> bool:
    D = _check_subset(P, D)
    if p not in P:
        raise UnknownConditionError(f"unknown condition {p!r}")
    return all(any(P.le(d, q) for d in D) for q in P.below(p))


def is_predense_below(P: Preorder, A: Iterable[str], p: str) -> bool:
    """Every strengthening of p is compatible with some member of A."""
    A = _check_subset(P, A)
    if p not in P:
        raise UnknownConditionError(f"unknown condition {p!r}")
    return all(any(P.compatible(q, a) for a in A) for q in P.below(p))


def is_antichain(P: Preorder, A: Iterable[str]) -> bool:
    A = _check_subset(P, A)
    return all(not P.compatible(a, b)
               for i, a in enumerate(A) for b in A[i + 1:])


def is_maximal_antichain(P: Preorder, A: Iterable[str]) -> bool:
    A = _check_subset(P, A)
    return is_antichain(P, A) and is_predense_below(P, A, P.top)


def is_separative(P: Preorder, ignore: frozenset[str] = frozenset()) -> bool:
    """Whenever p is not below q, some strengthening of p is incompatible with q.

    ``ignore`` drops zero-like conditions from the carrier, including
    from the compatibility witnesses (a bottom element would otherwise
    make everything compatible).
    """
    carrier = [p for p in P.carrier if p not in ignore]

    if ignore:
        def compatible(a: str, b: str) -> bool:
            return any(P.le(s, a) and P.le(s, b) for s in carrier)
    else:
        compatible = P.compatible

    for p in carrier:
        for q in carrier:
            if not P.le(p, q):
                if not any(not compatible(r, q)
                           for r in P.below(p) if r not in ignore):
                    return False
    return True


@lru_cache(maxsize=None)
def minimal_classes(P: Preorder) -> tuple[str, ...]:
    """One representative (first in carrier order) per class of minimal conditions.

    p is minimal when every strengthening of p is equivalent to it. On a
    finite preorder the cones over these classes are exactly the filters
    meeting every dense subset, which makes them the genericity oracle.
    """
    reps: list[str] = []
    for p in P.carrier:
        if all(P.le(p, d) for d in P.below(p)):
            if not any(P.equivalent(p, r) for r in reps):
                reps.append(p)
    return tuple(reps)


@dataclass
class QuotientMap:
    """Surjection from a preorder onto a quotient, with its fibres."""

    source: Preorder
    target: Preorder
    mapping: dict[str, str]

    def __call__(self, p: str) -> str:
        try:
            return self.mapping[p]
        except KeyError:
            raise UnknownConditionError(f"unknown condition {p!r}") from None


def separative_quotient(P: Preorder) -> tuple[Preorder, QuotientMap]:
    """Quotient by equality of compatibility profiles.

    Two conditions are identified when they are compatible with exactly
    the same conditions; the quotient order holds when every condition
    compatible with the first is compatible with the second. The result
    is a separative antisymmetric partial order.
    """
    profile = {p: frozenset(r for r in P.carrier if P.compatible(r, p)) for p in P.carrier}
    reps: dict[frozenset, str] = {}
    mapping: dict[str, str] = {}
    for p in P.carrier:  # carrier order makes the representative the lowest identifier
        rep = reps.setdefault(profile[p], p)
        mapping[p] = rep
    carrier = tuple(dict.fromkeys(mapping[p] for p in P.carrier))
    le = set()
    for a in carrier:
        for b in carrier:
            if profile[a] <= profile[b]:
                le.add((a, b))
    top = mapping[P.top]
    target = Preorder(carrier, le, top)
    if not target.is_antisymmetric() or not is_separative(target):
        raise OrderError("separative quotient failed its own postcondition")
    return target, QuotientMap(P, target, mapping)


class FiniteBooleanAlgebra:
    """A finite Boolean algebra given by carrier ids and their order.

    Construction verifies, exhaustively, that the order is isomorphic to
    the powerset of its atoms (the finite Boolean algebra criterion) and
    derives meet, join and complement from that picture.
    """

    __slots__ = ("carrier", "zero", "one", "atoms", "_le", "_atomsof", "_byatoms", "_hash")

    def __init__(self, carrier: Iterable[Hashable], le_pairs: Iterable[tuple]):
        carrier = tuple(carrier)
        if len(carrier) > max_carrier():
            raise BoundExceeded(f"algebra carrier {len(carrier)} exceeds cap {max_carrier()}")
        le = set(le_pairs)
        members = set(carrier)
        if len(members) != len(carrier):
            raise OrderError("duplicate elements in algebra carrier")
        for (a, b) in le:
            if a not in members or b not in members:
                raise OrderError("algebra order mentions unknown element")
        for a in carrier:
            if (a, a) not in le:
                raise OrderError("algebra order must be reflexive")
        bottoms = [a for a in carrier if all((a, b) in le for b in carrier)]
        tops = [a for a in carrier if all((b, a) in le for b in carrier)]
        if len(bottoms) != 1 or len(tops) != 1:
            raise OrderError("algebra needs unique zero and one")
        self.zero, self.one = bottoms[0], tops[0]
        atoms = tuple(a for a in carrier
                      if a != self.zero
                      and all(b == a or b == self.zero
                              for b in carrier if (b, a) in le))
        if len(carrier) != 2 ** len(atoms):
            raise OrderError(
                f"not a Boolean algebra: {len(carrier)} elements but {len(atoms)} atoms")
        atomsof = {a: frozenset(x for x in atoms if (x, a) in le) for a in carrier}
        byatoms: dict[frozenset, Hashable] = {}
        for a in carrier:
            key = atomsof[a]
            if key in byatoms:
                raise OrderError("two algebra elements sit above the same atoms")
            byatoms[key] = a
        for a in carrier:
            for b in carrier:
                if ((a, b) in le) != (atomsof[a] <= atomsof[b]):
                    raise OrderError("algebra order disagrees with its atom sets")
        self.carrier = carrier
        self.atoms = atoms
        self._le = frozenset(le)
        self._atomsof = atomsof
        self._byatoms = byatoms
        self._hash = hash((carrier, self._le))

    @classmethod
    def powerset(cls, atoms: Iterable[Hashable]) -> "FiniteBooleanAlgebra":
        atoms = tuple(atoms)
        ids = [frozenset(c) for c in _subsets(atoms)]
        le = [(a, b) for a in ids for b in ids if a <= b]
        return cls(sorted(ids, key=_setkey), le)

    def le(self, a, b) -> bool:
        return (a, b) in self._le

    def meet(self, a, b):
        return self._byatoms[self._atomsof[a] & self._atomsof[b]]

    def join(self, a, b):
        return self._byatoms[self._atomsof[a] | self._atomsof[b]]

    def complement(self, a):
        return self._byatoms[frozenset(self.atoms) - self._atomsof[a]]

    def sup(self, items: Iterable) -> Hashable:
        out = frozenset()
        for a in items:
            out = out | self._atomsof[a]
        return self._byatoms[out]

    def inf(self, items: Iterable) -> Hashable:
        out = frozenset(self.atoms)
        for a in items:
            out = out & self._atomsof[a]
        return self._byatoms[out]

    def __len__(self) -> int:
        return len(self.carrier)

    def __contains__(self, a: object) -> bool:
        return a in self._atomsof

    def __eq__(self, other: object) -> bool:
        return isinstance(other, FiniteBooleanAlgebra) and \
            self.carrier == other.carrier and self._le == other._le

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"<FiniteBooleanAlgebra {len(self.carrier)} elements>"


def _subsets(pool: tuple) -> Iterable[tuple]:
    for k in range(len(pool) + 1):
        yield from itertools.combinations(pool, k)


def _setkey(s: frozenset) -> tuple:
    return (len(s), tuple(sorted(map(str, s))))


def regular_open_algebra(P: Preorder) -> tuple[FiniteBooleanAlgebra, dict[str, frozenset]]:
    """The regular open algebra of P together with the canonical embedding.

    A down-set U is regular when it equals its regularization
    {p : every q <= p has a strengthening in U}. On a finite preorder
    these are exactly the sets U_S = {p : all minimal classes below p lie
    in S}, one per set S of minimal classes, so the carrier is the
    powerset of the minimal classes. e(p) is the regularization of the
    cone below p; it is injective exactly when P is separative and
    antisymmetric.
    """
    mins = minimal_classes(P)
    if 2 ** len(mins) > max_carrier():
        raise BoundExceeded(f"regular open algebra would have 2**{len(mins)} elements")
    B = FiniteBooleanAlgebra.powerset(mins)
    embedding = {p: frozenset(m for m in mins if P.le(m, p)) for p in P.carrier}
    return B, embedding


def regular_downsets_bruteforce(P: Preorder) -> set[frozenset]:
    """Independent enumeration of the regular down-sets, for cross-checks."""
    carrier = P.carrier
    out = set()
    for mask in range(1 << len(carrier)):
        U = frozenset(c for i, c in enumerate(carrier) if (mask >> i) & 1)
        if any(q not in U for p in U for q in P.below(p)):
            continue
        reg = frozenset(p for p in carrier
                        if all(any(r in U for r in P.below(q)) for q in P.below(p)))
        if reg == U:
            out.add(U)
    return out


def ro_downset(P: Preorder, S: frozenset) -> frozenset:
    """Materialize the regular open element U_S as a set of conditions."""
    mins = minimal_classes(P)
    return frozenset(p for p in P.carrier
                     if all(m in S for m in mins if P.le(m, p)))


def add_supremum(P: Preorder, A: Iterable[str], sup_id: str | None = None) -> Preorder:
    """Adjoin a supremum for A: below exactly the common upper bounds of A,
    and above exactly the conditions A is predense below.

    The ordering clauses only cohere into a preorder when the input is
    well behaved (separative inputs always are); the result is validated
    and an OrderError names a broken triple otherwise.
    """
    A = _check_subset(P, A)
    if not A:
        warnings.warn("supremum of the empty set lies below no condition", DeskWarning)
    sup_id = sup_id or _fresh_id(P, "sup")
    carrier = P.carrier + (sup_id,)
    le = set(P._le)
    le.add((sup_id, sup_id))
    for p in P.carrier:
        if all(P.le(a, p) for a in A):
            le.add((sup_id, p))
        if A and is_predense_below(P, A, p):
            le.add((p, sup_id))
    try:
        return Preorder(carrier, le, P.top)
    except OrderError as exc:
        raise OrderError(f"adding a supremum for {A!r} does not yield a preorder: {exc}") from exc


def add_negation(P: Preorder, q: str, neg_id: str | None = None) -> Preorder:
    """Adjoin a complement for q, ordered by incompatibility with q.

    Requires a separative input. Negating the top produces a zero-like
    element; separativity of the result is asserted away from that class.
    """
    if q not in P:
        raise UnknownConditionError(f"unknown condition {q!r}")
    if not is_separative(P):
        raise SeparativityError("add_negation needs a separative preorder")
    neg_id = neg_id or _fresh_id(P, f"neg({q})")
    carrier = P.carrier + (neg_id,)
    le = set(P._le)
    le.add((neg_id, neg_id))
    for p in P.carrier:
        if not P.compatible(p, q):
            le.add((p, neg_id))
        if all(P.compatible(r, p) or P.compatible(r, q) for r in P.carrier):
            le.add((neg_id, p))
    result = Preorder(carrier, le, P.top)
    zero = frozenset(z for z in result.carrier
                     if all(result.le(z, x) for x in result.carrier))
    if not is_separative(result, ignore=zero):
        raise SeparativityError("negation broke separativity")
    return result


def _fresh_id(P: Preorder, base: str) -> str:
    cand = base
    n = 0
    while cand in P:
        n += 1
        cand = f"{base}#{n}"
    return cand


def saturate_to_boolean(P: Preorder,
                        max_size: int | None = None
                        ) -> tuple[FiniteBooleanAlgebra, dict[str, Hashable]]:
    """Close P under suprema and negations and read off the Boolean algebra.

    Alternates a round of supremum adjunction over subsets with a round
    of negation adjunction over elements, quotients by order-equivalence
    and drops zero classes after each round, and stops when the carrier
    size stabilizes. Non-separative or non-antisymmetric inputs are
    routed through the separative quotient first. The result must be
    isomorphic to the regular open algebra by an embedding-fixing
    isomorphism; callers can verify that with completion_isomorphism.
    """
    embed: dict[str, str] = {p: p for p in P.carrier}
    S = P
    if not (is_separative(P) and P.is_antisymmetric()):
        S, qmap = separative_quotient(P)
        embed = dict(qmap.mapping)
    cap = max_size if max_size is not None else 2 ** len(minimal_classes(S))
    state = _SatState.initial(S)
    while True:
        before = len(state.order)
        state = state.add_all_suprema()
        state = state.add_all_negations()
        if len(state.order) > cap:
            raise BoundExceeded(
                f"saturation reached {len(state.order)} conditions, cap is {cap}")
        if len(state.order) == before:
            break
    algebra, to_elem = state.as_algebra()
    embedding = {p: to_elem[state.resolve(embed[p])] for p in P.carrier}
    return algebra, embedding


class _SatState:
    """Zero-free separative stage of the saturation, plus rename history."""

    def __init__(self, order: Preorder, renames: dict[str, str]):
        self.order = order
        self.renames = renames

    @classmethod
    def initial(cls, P: Preorder) -> "_SatState":
        return cls(P, {})

    def resolve(self, p: str) -> str:
        seen = set()
        while p in self.renames and p not in seen:
            seen.add(p)
            p = self.renames[p]
        return p

    def add_all_suprema(self) -> "_SatState":
        P = self.order
        candidates = self._new_subsets()
        carrier = list(P.carrier)
        le = set(P._le)
        sups: list[tuple[str, tuple[str, ...]]] = []
        for k, A in enumerate(candidates):
            sid = _fresh_id(P, f"sup#{k}")
            while sid in carrier:
                sid += "'"
            carrier.append(sid)
            sups.append((sid, A))
        for sid, A in sups:
            le.add((sid, sid))
            for p in P.carrier:
                if all(P.le(a, p) for a in A):
                    le.add((sid, p))
                if is_predense_below(P, A, p):
                    le.add((p, sid))
        for sid, A in sups:
            for tid, B in sups:
                if all((a, tid) in le for a in A):
                    le.add((sid, tid))
        return self._quotient(carrier, le, P.top)

    def _new_subsets(self) -> list[tuple[str, ...]]:
        """Nonempty subsets worth adjoining a supremum for.

        For small carriers every nonempty subset is taken. Larger
        carriers are pruned through minimal-class supports: on a
        separative antisymmetric stage an element is determined up to
        equivalence by the set of minimal classes below it, so one
        witness subset per reachable support union suffices.
        """
        P = self.order
        if len(P.carrier) <= 12:
            return [A for A in _subsets(P.carrier) if A]
        mins = minimal_classes(P)
        supp = {p: frozenset(m for m in mins if P.le(m, p)) for p in P.carrier}
        reachable = set(supp.values())
        frontier = set(reachable)
        while frontier:
            nxt = set()
            for u in frontier:
                for v in set(supp.values()):
                    w = u | v
                    if w not in reachable:
                        reachable.add(w)
                        nxt.add(w)
            frontier = nxt
        out = []
        for u in sorted(reachable, key=_setkey):
            witnesses = tuple(p for p in P.carrier if supp[p] <= u)
            if witnesses:
                out.append(witnesses)
        return out

    def add_all_negations(self) -> "_SatState":
        P = self.order
        carrier = list(P.carrier)
        le = set(P._le)
        negs: list[tuple[str, str]] = []
        for k, q in enumerate(P.carrier):
            nid = _fresh_id(P, f"neg#{k}")
            while nid in carrier:
                nid += "'"
            carrier.append(nid)
            negs.append((nid, q))
        for nid, q in negs:
            le.add((nid, nid))
            for p in P.carrier:
                if not P.compatible(p, q):
                    le.add((p, nid))
                if all(P.compatible(r, p) or P.compatible(r, q) for r in P.carrier):
                    le.add((nid, p))
        for nid, q in negs:
            for mid, r in negs:
                if P.le(r, q):
                    le.add((nid, mid))
        return self._quotient(carrier, le, P.top)

    def _quotient(self, carrier: list[str], le: set, top: str) -> "_SatState":
        le = _transitive_close(carrier, le)
        nonzero = [p for p in carrier if not all((p, x) in le for x in carrier)]
        if not nonzero:
            nonzero = [top]
        keep_le = {(p, q) for (p, q) in le if p in set(nonzero) and q in set(nonzero)}
        reps: dict[str, str] = {}
        renames = dict(self.renames)
        chosen: list[str] = []
        for p in nonzero:
            rep = None
            for c in chosen:
                if (p, c) in keep_le and (c, p) in keep_le:
                    rep = c
                    break
            if rep is None:
                chosen.append(p)
                reps[p] = p
            else:
                reps[p] = rep
                renames[p] = rep
        # drop zero classes from the forcing-side view entirely
        for p in carrier:
            if p not in reps:
                renames[p] = "__zero__"
        final_le = {(a, b) for (a, b) in keep_le if reps[a] == a and reps[b] == b}
        order = Preorder(tuple(chosen), final_le, reps[top])
        return _SatState(order, renames)

    def as_algebra(self) -> tuple[FiniteBooleanAlgebra, dict[str, Hashable]]:
        """Adjoin a formal zero and package the fixed point as an algebra."""
        P = self.order
        zero = _fresh_id(P, "0")
        ids = (zero,) + P.carrier
        le = set(P._le)
        for x in ids:
            le.add((zero, x))
        algebra = FiniteBooleanAlgebra(ids, le)
        to_elem = {p: p for p in P.carrier}
        to_elem["__zero__"] = zero
        return algebra, to_elem


def _transitive_close(carrier: list[str], le: set) -> set:
    le = set(le)
    changed = True
    while changed:
        changed = False
        for (p, q) in list(le):
            for r in carrier:
                if (q, r) in le and (p, r) not in le:
                    le.add((p, r))
                    changed = True
    return le


@dataclass
class IsoFailure:
    """Concrete witness that two completions are not isomorphic over P."""

    reason: str
    witness: tuple = ()


def completion_isomorphism(B0: FiniteBooleanAlgebra, e0: Mapping[str, Hashable],
                           B1: FiniteBooleanAlgebra, e1: Mapping[str, Hashable]):
    """The canonical map b |-> sup{e1(p) : e0(p) <= b}, verified.

    e0 and e1 must be dense embeddings of the same preorder carrier.
    Returns the isomorphism as a dict, or an IsoFailure naming the first
    element where a Boolean homomorphism law (or bijectivity, or the
    embedding-fixing requirement) breaks.
    """
    if set(e0) != set(e1):
        raise OrderError("embeddings have mismatched source carriers")
    f = {b: B1.sup(e1[p] for p in e0 if B0.le(e0[p], b)) for b in B0.carrier}
    values = list(f.values())
    if len(set(values)) != len(values) or set(values) != set(B1.carrier):
        return IsoFailure(
            f"not a bijection: {len(set(values))} distinct images, {len(B1.carrier)} targets")
    for p in e0:
        if f[e0[p]] != e1[p]:
            return IsoFailure("does not fix the embedded preorder", (p,))
    for a in B0.carrier:
        for b in B0.carrier:
            if f[B0.meet(a, b)] != B1.meet(f[a], f[b]):
                return IsoFailure("meet law fails", (a, b))
            if f[B0.join(a, b)] != B1.join(f[a], f[b]):
                return IsoFailure("join law fails", (a, b))
        if f[B0.complement(a)] != B1.complement(f[a]):
            return IsoFailure("complement law fails", (a,))
    return f


def maximal_antichains(P: Preorder) -> Iterable[tuple[str, ...]]:
    """All maximal antichains, by exhaustive subset enumeration (carrier capped)."""
    n = len(P.carrier)
    if n > 16:
        raise BoundExceeded(f"maximal-antichain enumeration capped at 16 conditions, got {n}")
    for mask in range(1, 1 << n):
        A = tuple(c for i, c in enumerate(P.carrier) if (mask >> i) & 1)
        if is_antichain(P, A) and is_predense_below(P, A, P.top):
            yield A


def is_complete_subforcing(Psub: Preorder, P: Preorder) -> bool:
    """Every maximal antichain of Psub stays predense in P."""
    for p in Psub.carrier:
        if p not in P:
            raise UnknownConditionError(f"{p!r} is not a condition of the big forcing")
    for p in Psub.carrier:
        for q in Psub.carrier:
            if Psub.le(p, q) != P.le(p, q):
                raise OrderError(f"orders disagree on ({p!r},{q!r})")
    return all(is_predense_below(P, A, P.top) for A in maximal_antichains(Psub))
