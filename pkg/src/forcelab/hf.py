"""Hereditarily finite sets and finite transitive ground models.

HFSet values are interned: two descriptions of the same set always yield
the same object, so equality is pointer equality. Elements are kept
sorted in the Ackermann order (the order of the classical integer codes,
computed by structural comparison so that deep sets never materialize
astronomically large integers); this gives every set one canonical form
and a stable serialization.
"""

from __future__ import annotations

from functools import cmp_to_key
from typing import Iterable, Iterator

from .config import max_carrier
from .errors import BoundExceeded, CyclicSetError

VSTAGE_BOUND = 5
ACKERMANN_INT_BOUND = 8


class HFSet:
    """A canonical hereditarily finite set.

    ``elements`` is a tuple sorted ascending in the Ackermann order and
    free of duplicates; ``rank`` is the usual set rank; ``serial`` is the
    interning ticket (identity only, never used for ordering).
    """

    __slots__ = ("elements", "child_serials", "serial", "rank", "_hash")

    _intern: dict[frozenset, "HFSet"] = {}
    _counter = 0

    def __new__(cls, elements: Iterable["HFSet"] = ()) -> "HFSet":
        kids: dict[int, HFSet] = {}
        for e in elements:
            if not isinstance(e, HFSet):
                raise TypeError(f"HFSet elements must be HFSet, got {type(e).__name__}")
            kids[e.serial] = e
        key = frozenset(kids)
        cached = cls._intern.get(key)
        if cached is not None:
            return cached
        self = object.__new__(cls)
        self.elements = tuple(sorted(kids.values(), key=_ACK_KEY))
        self.child_serials = key
        self.serial = cls._counter
        cls._counter += 1
        self.rank = 0 if not kids else 1 + max(e.rank for e in kids.values())
        self._hash = hash(key)
        cls._intern[key] = self
        return self

    def __iter__(self) -> Iterator["HFSet"]:
        return iter(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def __contains__(self, other: object) -> bool:
        return isinstance(other, HFSet) and other.serial in self.child_serials

    def __hash__(self) -> int:
        return self._hash

    def __lt__(self, other: "HFSet") -> bool:
        return ackermann_lt(self, other)

    def issubset(self, other: "HFSet") -> bool:
        return self.child_serials <= other.child_serials

    def __repr__(self) -> str:
        return format_set(self)


_LT_MEMO: dict[tuple[int, int], bool] = {}


def ackermann_lt(x: HFSet, y: HFSet) -> bool:
    """The order of the Ackermann integer codes, decided structurally.

    code(x) is the sum of 2**code(e) over elements, so comparing codes is
    comparing the element lists largest-first, lexicographically, with a
    shared prefix decided by length.
    """
    if x is y:
        return False
    key = (x.serial, y.serial)
    hit = _LT_MEMO.get(key)
    if hit is not None:
        return hit
    out = None
    for a, b in zip(reversed(x.elements), reversed(y.elements)):
        if a is not b:
            out = ackermann_lt(a, b)
            break
    if out is None:
        out = len(x.elements) < len(y.elements)
    _LT_MEMO[key] = out
    _LT_MEMO[(y.serial, x.serial)] = (not out)
    return out


def _ack_cmp(a: HFSet, b: HFSet) -> int:
    if a is b:
        return 0
    return -1 if ackermann_lt(a, b) else 1


_ACK_KEY = cmp_to_key(_ack_cmp)


def ackermann_code(x: HFSet) -> int:
    """The classical integer code; only sane for shallow sets."""
    if x.rank > ACKERMANN_INT_BOUND:
        raise BoundExceeded(f"integer code of a rank-{x.rank} set would be astronomical")
    return sum(1 << ackermann_code(e) for e in x.elements)


EMPTY = HFSet()

_NATURALS: list[HFSet] = [EMPTY]


def rank(x: HFSet) -> int:
    """Set rank: 0 for the empty set, else one above the deepest element."""
    return x.rank


def natural(n: int) -> HFSet:
    """The von Neumann natural n."""
    if n < 0:
        raise ValueError("naturals start at 0")
    while len(_NATURALS) <= n:
        prev = _NATURALS[-1]
        _NATURALS.append(HFSet(tuple(prev.elements) + (prev,)))
    return _NATURALS[n]


def as_natural(x: HFSet) -> int | None:
    """Inverse of natural(), or None if x is not a von Neumann natural."""
    for n in range(x.rank + 1):
        if x is natural(n):
            return n
    return None


def kuratowski(x: HFSet, y: HFSet) -> HFSet:
    """The ordered pair {{x},{x,y}}."""
    return HFSet((HFSet((x,)), HFSet((x, y))))


def canonicalize(raw) -> HFSet:
    """Build the unique HFSet extensionally equal to a nested description.

    Accepts HFSet values, strings of the literal syntax (``{}``, ``{a,b}``,
    ``nat:n``), and arbitrarily nested iterables of such. Cyclic
    descriptions are rejected.
    """
    return _canonicalize(raw, ())


def _canonicalize(raw, stack) -> HFSet:
    if isinstance(raw, HFSet):
        return raw
    if isinstance(raw, str):
        return parse_set_literal(raw)
    if isinstance(raw, int):
        raise TypeError("bare integers are ambiguous; use natural(n) or 'nat:n'")
    marker = id(raw)
    if marker in stack:
        raise CyclicSetError("cyclic nested-set description")
    try:
        items = list(raw)
    except TypeError:
        raise TypeError(f"cannot canonicalize {type(raw).__name__}") from None
    stack = stack + (marker,)
    return HFSet(_canonicalize(item, stack) for item in items)


def transitive_closure(x: HFSet) -> tuple[HFSet, ...]:
    """Element set of the least transitive superset of x, in Ackermann order."""
    out: dict[int, HFSet] = {}
    work = list(x.elements)
    while work:
        y = work.pop()
        if y.serial in out:
            continue
        out[y.serial] = y
        work.extend(y.elements)
    return tuple(sorted(out.values(), key=_ACK_KEY))


def format_set(x: HFSet) -> str:
    """Literal form, with von Neumann naturals shortened to nat:n."""
    n = as_natural(x)
    if n is not None and n > 0:
        return f"nat:{n}"
    return "{" + ",".join(format_set(e) for e in x.elements) + "}"


def parse_set_literal(text: str) -> HFSet:
    """Parse the textual set syntax: {} nesting, commas, nat:n sugar."""
    text = text.strip()
    value, rest = _parse_set(text, 0)
    if text[rest:].strip():
        raise ValueError(f"trailing input in set literal: {text!r}")
    return value


def _parse_set(text: str, i: int) -> tuple[HFSet, int]:
    while i < len(text) and text[i].isspace():
        i += 1
    if text.startswith("nat:", i):
        j = i + 4
        k = j
        while k < len(text) and text[k].isdigit():
            k += 1
        if k == j:
            raise ValueError(f"bad nat literal in {text!r}")
        return natural(int(text[j:k])), k
    if i >= len(text) or text[i] != "{":
        raise ValueError(f"expected '{{' at position {i} in {text!r}")
    i += 1
    elems: list[HFSet] = []
    while True:
        while i < len(text) and text[i] in " \t\n,":
            i += 1
        if i >= len(text):
            raise ValueError(f"unterminated set literal: {text!r}")
        if text[i] == "}":
            return HFSet(elems), i + 1
        value, i = _parse_set(text, i)
        elems.append(value)


class GroundModel:
    """A finite transitive set of HFSets, the desk-scale ground universe."""

    __slots__ = ("carrier", "stage", "_serials")

    def __init__(self, elements: Iterable[HFSet], stage: int | None = None):
        uniq = {e.serial: e for e in elements}
        carrier = tuple(sorted(uniq.values(), key=_ACK_KEY))
        serials = frozenset(uniq)
        if EMPTY.serial not in serials:
            raise ValueError("a ground model must contain the empty set")
        for e in carrier:
            for child in e.elements:
                if child.serial not in serials:
                    raise ValueError(f"not transitive: {child!r} in {e!r} is missing")
        self.carrier = carrier
        self.stage = stage
        self._serials = serials

    def __iter__(self) -> Iterator[HFSet]:
        return iter(self.carrier)

    def __len__(self) -> int:
        return len(self.carrier)

    def __contains__(self, x: object) -> bool:
        return isinstance(x, HFSet) and x.serial in self._serials

    def __repr__(self) -> str:
        tag = f"vstage({self.stage})" if self.stage is not None else f"{len(self.carrier)} sets"
        return f"<GroundModel {tag}>"


def vstage(k: int, bound: int = VSTAGE_BOUND) -> GroundModel:
    """The ground model of all HFSets of rank < k.

    Sizes are forced by |V_{n+1}| = 2**|V_n|; k is capped (default 5)
    because the next stage would already have 2**65536 elements.
    """
    if k < 1:
        raise ValueError("vstage needs k >= 1 so the empty set is present")
    if k > bound:
        raise BoundExceeded(f"vstage({k}) exceeds the configured bound {bound}")
    carrier: dict[int, HFSet] = {}
    level: list[HFSet] = []
    for _ in range(k):
        if len(carrier) >= 64:
            next_size = 2 ** len(carrier)
            if next_size > max_carrier():
                raise BoundExceeded(
                    f"vstage would need {next_size} elements; cap is {max_carrier()}"
                )
        level = _powerset(tuple(carrier.values()))
        for x in level:
            carrier[x.serial] = x
    return GroundModel(carrier.values(), stage=k)


def _powerset(pool: tuple[HFSet, ...]) -> list[HFSet]:
    out = []
    for mask in range(1 << len(pool)):
        out.append(HFSet(pool[i] for i in range(len(pool)) if (mask >> i) & 1))
    return out
