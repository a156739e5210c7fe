"""Names over a forcing notion, their evaluations and transformations.

A PName is a finite set of (name, condition-identifier) pairs, interned
in canonical form exactly like HFSet so that structural equality is
pointer equality. Names do not hold a reference to their preorder;
validate_name ties them to one when it matters.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cmp_to_key, lru_cache
from typing import Iterable, Iterator

from .errors import UnknownConditionError
from .hf import HFSet, kuratowski, natural
from .orders import Preorder, QuotientMap


class PName:
    """A canonical forcing name: entries sorted, duplicate-free, interned.

    Interning makes structural equality pointer equality; entries are
    kept in a fixed structural order (recursive comparison, never serial
    numbers) so serialization is stable.
    """

    __slots__ = ("entries", "key", "serial", "rank", "_hash")

    _intern: dict[frozenset, "PName"] = {}
    _counter = 0

    def __new__(cls, entries: Iterable[tuple["PName", str]] = ()) -> "PName":
        uniq: dict[tuple[int, str], tuple[PName, str]] = {}
        for name, cond in entries:
            if not isinstance(name, PName):
                raise TypeError("PName entries pair a PName with a condition identifier")
            if not isinstance(cond, str):
                raise TypeError("condition identifiers are strings")
            uniq[(name.serial, cond)] = (name, cond)
        key = frozenset(uniq)
        cached = cls._intern.get(key)
        if cached is not None:
            return cached
        self = object.__new__(cls)
        self.entries = tuple(sorted(uniq.values(), key=_ENTRY_KEY))
        self.key = key
        self.serial = cls._counter
        cls._counter += 1
        self.rank = max((name.rank + 1 for name, _ in self.entries), default=0)
        self._hash = hash(key)
        cls._intern[key] = self
        return self

    def __iter__(self) -> Iterator[tuple["PName", str]]:
        return iter(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        if not self.entries:
            return "name:{}"
        inner = ",".join(f"({n!r},{c})" for n, c in self.entries)
        return "name:{" + inner + "}"

    def domain(self) -> tuple["PName", ...]:
        seen: dict[int, PName] = {}
        for n, _ in self.entries:
            seen[n.serial] = n
        return tuple(sorted(seen.values(), key=_NAME_KEY))

    def conditions(self) -> frozenset[str]:
        return frozenset(c for _, c in self.entries)


_NAME_LT_MEMO: dict[tuple[int, int], bool] = {}


def _name_lt(x: PName, y: PName) -> bool:
    """Structural total order on names: entry lists largest-first."""
    if x is y:
        return False
    key = (x.serial, y.serial)
    hit = _NAME_LT_MEMO.get(key)
    if hit is not None:
        return hit
    out = None
    for (n1, c1), (n2, c2) in zip(reversed(x.entries), reversed(y.entries)):
        if n1 is not n2:
            out = _name_lt(n1, n2)
            break
        if c1 != c2:
            out = c1 < c2
            break
    if out is None:
        out = len(x.entries) < len(y.entries)
    _NAME_LT_MEMO[key] = out
    _NAME_LT_MEMO[(y.serial, x.serial)] = (not out)
    return out


def _name_cmp(a: PName, b: PName) -> int:
    if a is b:
        return 0
    return -1 if _name_lt(a, b) else 1


def _entry_cmp(e1: tuple[PName, str], e2: tuple[PName, str]) -> int:
    c = _name_cmp(e1[0], e2[0])
    if c:
        return c
    return -1 if e1[1] < e2[1] else (0 if e1[1] == e2[1] else 1)


_NAME_KEY = cmp_to_key(_name_cmp)
_ENTRY_KEY = cmp_to_key(_entry_cmp)


EMPTY_NAME = PName()


def name_rank(sigma: PName) -> int:
    return sigma.rank


def subnames(sigma: PName) -> tuple[PName, ...]:
    """sigma together with every name reachable inside it."""
    seen: dict[int, PName] = {}
    work = [sigma]
    while work:
        tau = work.pop()
        if tau.serial in seen:
            continue
        seen[tau.serial] = tau
        work.extend(n for n, _ in tau.entries)
    return tuple(sorted(seen.values(), key=_NAME_KEY))


def validate_name(P: Preorder, sigma: PName) -> None:
    for tau in subnames(sigma):
        for _, cond in tau.entries:
            if cond not in P:
                raise UnknownConditionError(f"name mentions unknown condition {cond!r}")


@dataclass(frozen=True)
class Filter:
    """An upward closed directed set of conditions containing the top."""

    conditions: frozenset[str]

    def __contains__(self, p: str) -> bool:
        return p in self.conditions

    def __iter__(self) -> Iterator[str]:
        return iter(sorted(self.conditions))

    def __len__(self) -> int:
        return len(self.conditions)


@lru_cache(maxsize=None)
def _evaluate(sigma: PName, conds: frozenset) -> HFSet:
    return HFSet(_evaluate(tau, conds) for tau, p in sigma.entries if p in conds)


def evaluate(sigma: PName, G: Filter | frozenset | Iterable[str]) -> HFSet:
    """The G-evaluation: collect entries whose condition lies in the filter."""
    if isinstance(G, Filter):
        conds = G.conditions
    elif isinstance(G, frozenset):
        conds = G
    else:
        conds = frozenset(G)
    return _evaluate(sigma, conds)


@lru_cache(maxsize=None)
def check_name(x: HFSet, top: str) -> PName:
    """The canonical name for a ground object: evaluates to x under every filter."""
    return PName((check_name(y, top), top) for y in x)


def op_name(sigma: PName, tau: PName, top: str) -> PName:
    """Canonical name for the ordered pair of the two evaluations."""
    left = PName(((sigma, top),))
    both = PName(((sigma, top), (tau, top)))
    return PName(((left, top), (both, top)))


def p_evaluation(P: Preorder, sigma: PName, p: str) -> HFSet:
    """Evaluate as if the filter were everything p strengthens."""
    if p not in P:
        raise UnknownConditionError(f"unknown condition {p!r}")
    return HFSet(p_evaluation(P, tau, p) for tau, q in sigma.entries if P.le(p, q))


def transport_quotient(sigma: PName, pi: "QuotientMap | dict[str, str]") -> PName:
    """Push a name through a quotient map, entry by entry, hereditarily."""
    if isinstance(pi, dict):
        mapping = pi

        def send(p: str) -> str:
            try:
                return mapping[p]
            except KeyError:
                raise UnknownConditionError(f"unknown condition {p!r}") from None
    else:
        send = pi
    return PName((transport_quotient(tau, pi), send(p)) for tau, p in sigma.entries)


def rename_conditions(sigma: PName, mapping: dict[str, str]) -> PName:
    """Hereditarily replace condition identifiers; missing keys error."""
    out = []
    for tau, p in sigma.entries:
        if p not in mapping:
            raise UnknownConditionError(f"no replacement for condition {p!r}")
        out.append((rename_conditions(tau, mapping), mapping[p]))
    return PName(out)


def plus_transform(sigma: PName, sup_id: str, top: str) -> PName:
    """Replace every occurrence of the adjoined supremum by the top."""
    return PName((plus_transform(tau, sup_id, top), top if p == sup_id else p)
                 for tau, p in sigma.entries)


def minus_transform(sigma: PName, sup_id: str) -> PName:
    """Delete every pair conditioned on the adjoined supremum."""
    return PName((minus_transform(tau, sup_id), p)
                 for tau, p in sigma.entries if p != sup_id)


def condition_code(P: Preorder, p: str) -> HFSet:
    """Inject conditions into HF sets by carrier index, as von Neumann naturals."""
    return natural(P.index(p))


def gdot_name(P: Preorder) -> PName:
    """The canonical name for the generic filter: pairs (p-check, p)."""
    return PName((check_name(condition_code(P, p), P.top), p) for p in P.carrier)


def pair_of(x: HFSet, y: HFSet) -> HFSet:
    return kuratowski(x, y)
