"""Concrete forcing notions: collapses, their projections, the
relation-decoding forcing, and two-step iterations.

Collapse conditions are finite partial functions on a truncated slot
range; the geq variant adds deferred values ">=b". The relation-decoding
forcing builds a binary relation on finitely many indices isomorphic to
the ground model's membership relation; its total-assignment suborder is
dense and small enough to enumerate, so it carries the semantics, while
the general conditions remain first-class for the constructive witnesses.
"""

from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass
from typing import Callable, Iterable, Mapping, Sequence

from .config import max_carrier
from .errors import (
    BoundExceeded,
    DeskWarning,
    HeightOverflowError,
    IndexExhaustedError,
    OrderError,
    PoolError,
    SlotsExhaustedError,
    UnknownConditionError,
)
from .formulas import Mem, appropriate, lex_min_appropriate
from .forcing import NamePool, cone_of, semantic_forces
from .hf import EMPTY, GroundModel, HFSet, ackermann_code, natural
from .names import Filter, PName, check_name, condition_code, evaluate, op_name, subnames
from .orders import Preorder, is_antichain

# ---------------------------------------------------------------------------
# collapse forcings

GeqValue = tuple  # ("ge", beta)


def _is_marker(v) -> bool:
    return isinstance(v, tuple)


def _fmt_value(v) -> str:
    return f"ge{v[1]}" if _is_marker(v) else str(v)


def collapse_id(cond: Mapping[int, object]) -> str:
    inner = ",".join(f"{n}:{_fmt_value(cond[n])}" for n in sorted(cond))
    return f"fn[{inner}]"


@dataclass
class CollapseForcing:
    """An explicit truncated collapse: slots x height, one of three variants."""

    slots: int
    height: int
    variant: str
    order: Preorder
    condition_of: dict[str, dict]

    def id_of(self, cond: Mapping[int, object]) -> str:
        cid = collapse_id(cond)
        if cid not in self.condition_of:
            raise UnknownConditionError(f"{cid} is not a condition here")
        return cid


def collapse(n: int, lam: int, variant: str = "plain") -> CollapseForcing:
    """All finite partial functions from n slots into lam values.

    plain: any domain; star: initial-segment domains; geq: values may also
    be deferred markers >=b for b < lam. Ordering is reverse inclusion,
    with the geq clause allowing a marker to be refined to any value or
    marker at least as large.
    """
    if variant not in ("plain", "star", "geq"):
        raise ValueError(f"unknown collapse variant {variant!r}")
    if n < 0 or lam < 0:
        raise ValueError("slots and height must be naturals")
    values: list = list(range(lam))
    if variant == "geq":
        values += [("ge", b) for b in range(lam)]
    conds: list[dict] = []
    if variant == "star":
        for k in range(n + 1):
            for vs in itertools.product(values, repeat=k):
                conds.append(dict(zip(range(k), vs)))
    else:
        for dom in _all_subsets(range(n)):
            for vs in itertools.product(values, repeat=len(dom)):
                conds.append(dict(zip(dom, vs)))
    if len(conds) > max_carrier():
        raise BoundExceeded(f"collapse would have {len(conds)} conditions")
    by_id = {collapse_id(c): c for c in conds}
    ids = sorted(by_id)
    le = set()
    for pid in ids:
        for qid in ids:
            if _collapse_le(by_id[pid], by_id[qid]):
                le.add((pid, qid))
    order = Preorder(ids, le, collapse_id({}), _trusted=True)
    return CollapseForcing(n, lam, variant, order, by_id)


def _all_subsets(rng) -> list[tuple[int, ...]]:
    items = tuple(rng)
    return [c for k in range(len(items) + 1) for c in itertools.combinations(items, k)]


def _collapse_le(p: Mapping[int, object], q: Mapping[int, object]) -> bool:
    if not set(q) <= set(p):
        return False
    for slot, qv in q.items():
        pv = p[slot]
        if pv == qv:
            continue
        if _is_marker(qv):
            a = qv[1]
            if _is_marker(pv):
                if pv[1] >= a:
                    continue
            elif pv >= a:
                continue
        return False
    return True


@dataclass
class Provider:
    """A dense set given by a membership test and a constructive extender."""

    name: str
    member: Callable[[str], bool]
    extend: Callable[[str], str]


@dataclass
class CollapseDenseSets:
    value_sets: dict[int, Provider]
    slot_sets: dict[int, Provider]


def collapse_dense_sets(C: CollapseForcing) -> CollapseDenseSets:
    """The value-hitting sets D_a = {p : a in ran p} and the slot sets
    D_n = {p : n in dom p}, each with a lowest-free-slot extender.

    A value extender fails with SlotsExhaustedError when every slot is
    taken: the untruncated forcing has infinitely many slots and the sets
    are dense there, but a total desk condition missing the value cannot
    be extended into the set.
    """
    if C.variant not in ("plain", "star"):
        raise ValueError("dense-set family is defined for the plain and star variants")

    def fresh_slot(cond: dict) -> int:
        if C.variant == "star":
            k = len(cond)
            if k >= C.slots:
                raise SlotsExhaustedError(f"all {C.slots} slots used")
            return k
        for s in range(C.slots):
            if s not in cond:
                return s
        raise SlotsExhaustedError(f"all {C.slots} slots used")

    def value_provider(alpha: int) -> Provider:
        def member(pid: str) -> bool:
            return alpha in C.condition_of[pid].values()

        def extend(pid: str) -> str:
            cond = C.condition_of[pid]
            if alpha in cond.values():
                return pid
            out = dict(cond)
            out[fresh_slot(cond)] = alpha
            return C.id_of(out)

        return Provider(f"value-{alpha}", member, extend)

    def slot_provider(slot: int) -> Provider:
        def member(pid: str) -> bool:
            return slot in C.condition_of[pid]

        def extend(pid: str) -> str:
            cond = C.condition_of[pid]
            if slot in cond:
                return pid
            out = dict(cond)
            if C.variant == "star":
                for s in range(slot + 1):
                    out.setdefault(s, 0)
            else:
                out[slot] = 0
            return C.id_of(out)

        return Provider(f"slot-{slot}", member, extend)

    values = {a: value_provider(a) for a in range(C.height)}
    slots = {s: slot_provider(s) for s in range(C.slots)}
    return CollapseDenseSets(values, slots)


def surjection_name(C: CollapseForcing, lam: int) -> PName:
    """The name collecting (slot, value) pairs along the generic function."""
    if C.variant != "plain":
        raise ValueError("the surjection name lives on the plain variant")
    if lam > C.height:
        raise HeightOverflowError(f"no values >= {C.height} at this truncation")
    top = C.order.top
    entries = []
    for n in range(C.slots):
        for a in range(lam):
            nm = op_name(check_name(natural(n), top), check_name(natural(a), top), top)
            entries.append((nm, C.id_of({n: a})))
    return PName(entries)


def antichain_defeater(C: CollapseForcing, A: Sequence[str]) -> str:
    """A condition incompatible with every member of a non-trivial antichain:
    on the domain of its first member, outbid every value by one."""
    if C.variant not in ("plain", "star"):
        raise ValueError("the defeater is defined for the plain and star variants")
    conds = [C.condition_of[a] for a in sorted(A)]
    if not is_antichain(C.order, tuple(A)):
        raise ValueError("input is not an antichain")
    if any(not c for c in conds):
        raise ValueError("the trivial antichain has no defeater")
    base = conds[0]
    out = {}
    for slot in base:
        top_val = max(c[slot] for c in conds if slot in c)
        if top_val + 1 >= C.height:
            raise HeightOverflowError(
                f"defeater needs value {top_val + 1}, height is {C.height}")
        out[slot] = top_val + 1
    return C.id_of(out)


def geq_reduction(C: CollapseForcing, pid: str, alpha: int) -> str:
    """Push a geq condition into the alpha-truncation: every value at least
    alpha, and every marker beyond alpha, becomes the marker >=alpha."""
    if C.variant != "geq":
        raise ValueError("reduction applies to the geq variant")
    if alpha >= C.height:
        raise HeightOverflowError(f"alpha={alpha} is not below the height {C.height}")
    cond = C.condition_of[pid]
    out = {}
    for slot, v in cond.items():
        if _is_marker(v):
            out[slot] = ("ge", alpha) if v[1] > alpha else v
        else:
            out[slot] = ("ge", alpha) if v >= alpha else v
    return C.id_of(out)


def geq_truncation(C: CollapseForcing, alpha: int) -> Preorder:
    """The suborder of values < alpha and markers <= alpha, induced order."""
    if C.variant != "geq":
        raise ValueError("truncation applies to the geq variant")
    keep = []
    for pid, cond in C.condition_of.items():
        ok = all((v[1] <= alpha) if _is_marker(v) else (v < alpha)
                 for v in cond.values())
        if ok:
            keep.append(pid)
    keep = sorted(keep)
    le = {(p, q) for p in keep for q in keep if C.order.le(p, q)}
    return Preorder(keep, le, C.order.top, _trusted=True)


def collapse_projection(C: CollapseForcing, alpha: int) -> dict[str, str]:
    """The capping map onto the (alpha+1)-stratum: values above alpha drop
    to alpha, geq markers above alpha drop to the marker >=alpha."""

    def cap(v):
        if _is_marker(v):
            return ("ge", min(v[1], alpha))
        return min(v, alpha)

    out = {}
    for pid, cond in C.condition_of.items():
        out[pid] = collapse_id({slot: cap(v) for slot, v in cond.items()})
    return out


@dataclass
class ProjectionFamily:
    """A forcing presented as an increasing union of strata with projections."""

    order: Preorder
    strata: tuple[tuple[str, ...], ...]
    projections: tuple[dict[str, str] | None, ...]

    def stratum(self, i: int) -> tuple[str, ...]:
        return self.strata[i]

    @property
    def height(self) -> int:
        return len(self.strata) - 1


def approachability_instance(C: CollapseForcing, K: int,
                             corrupt: str | None = None) -> ProjectionFamily:
    """Strata collapse(n, b, variant) for b <= K inside the full forcing,
    with the capping projections; the clause checker runs unless a
    deliberate corruption is requested for negative controls."""
    if K != C.height:
        raise ValueError("the family tops out at the forcing's own height")
    strata = []
    for b in range(K + 1):
        sub = collapse(C.slots, b, C.variant)
        strata.append(tuple(sorted(sub.condition_of)))
    strata.append(tuple(sorted(C.condition_of)))
    # collapse(n, K, variant) is already the full forcing; drop the duplicate
    strata = strata[:-1]
    projections: list[dict[str, str] | None] = [None]
    for b in range(1, K + 1):
        projections.append(collapse_projection(C, b - 1))
    family = ProjectionFamily(C.order, tuple(strata), tuple(projections))
    if corrupt == "identity":
        bad = list(projections)
        bad[max(1, K - 1)] = {p: p for p in C.order.carrier}
        return ProjectionFamily(C.order, tuple(strata), tuple(bad))
    if corrupt == "to-top":
        bad = list(projections)
        bad[max(1, K - 1)] = {p: C.order.top for p in C.order.carrier}
        return ProjectionFamily(C.order, tuple(strata), tuple(bad))
    if corrupt is not None:
        raise ValueError(f"unknown corruption {corrupt!r}")
    failures = approachability_failures(family)
    if failures:
        raise OrderError("projection family fails: " + "; ".join(failures[:3]))
    return family


def approachability_failures(family: ProjectionFamily) -> list[str]:
    """Check the five projection clauses plus shape; return failure notes."""
    P = family.order
    out: list[str] = []
    K = family.height
    carrier = set(P.carrier)
    prev: frozenset[str] = frozenset()
    for b in range(K + 1):
        ids = frozenset(family.stratum(b))
        if not ids <= carrier:
            out.append(f"stratum {b} leaves the forcing")
        if not prev <= ids:
            out.append(f"strata not increasing at {b}")
        prev = ids
    if prev != carrier:
        out.append("top stratum is not the whole forcing")
    for a in range(K):
        pi = family.projections[a + 1]
        if pi is None:
            out.append(f"projection {a + 1} missing")
            continue
        target = frozenset(family.stratum(a + 1))
        low = frozenset(family.stratum(a))
        if set(pi) != carrier:
            out.append(f"projection {a + 1} not total")
            continue
        if not set(pi.values()) <= target:
            out.append(f"projection {a + 1} leaves its stratum")
            continue
        if pi[P.top] != P.top:
            out.append(f"projection {a + 1} moves the top")
        for p in P.carrier:
            for q in P.carrier:
                if P.le(p, q) and not P.le(pi[p], pi[q]):
                    out.append(f"projection {a + 1} not order preserving at ({p},{q})")
                    break
            else:
                continue
            break
        for p in P.carrier:
            for q in target:
                if P.le(q, pi[p]):
                    if not any(P.le(r, p) and P.le(pi[r], q) for r in P.carrier):
                        out.append(f"projection {a + 1} density clause fails at ({p},{q})")
        for p in low:
            for q in P.carrier:
                if P.le(pi[q], p) and not P.le(q, p):
                    out.append(f"projection {a + 1} reflection clause fails at ({p},{q})")
        for p in low:
            if pi[p] != p:
                out.append(f"projection {a + 1} not the identity on stratum {a} at {p}")
    return out


def proj_gen_ext_check(family: ProjectionFamily, alpha: int, G: Filter,
                       pool: Iterable[PName]) -> bool:
    """Names over a stratum evaluate the same under the generic and under
    its projected image."""
    pi = family.projections[alpha + 1]
    assert pi is not None
    image = frozenset(pi[p] for p in G.conditions)
    allowed = frozenset(family.stratum(alpha))
    for sigma in pool:
        for tau in subnames(sigma):
            for _, c in tau.entries:
                if c not in allowed:
                    raise UnknownConditionError(f"{c!r} is outside stratum {alpha}")
        if evaluate(sigma, G) != evaluate(sigma, image):
            return False
    return True


# ---------------------------------------------------------------------------
# the relation-decoding forcing


@dataclass(frozen=True)
class FriedmanCondition:
    """A triple: finite index set, acyclic relation on it, and an assignment
    that is either empty or total and must then realize the relation as
    membership."""

    d: frozenset[int]
    e: frozenset[tuple[int, int]]
    f: tuple[tuple[int, HFSet], ...]

    @classmethod
    def make(cls, d: Iterable[int], e: Iterable[tuple[int, int]],
             f: Mapping[int, HFSet] | Iterable[tuple[int, HFSet]] = ()) -> "FriedmanCondition":
        fd = dict(f.items() if isinstance(f, Mapping) else f)
        return cls(frozenset(d), frozenset(tuple(pair) for pair in e),
                   tuple(sorted(fd.items())))

    @property
    def assignment(self) -> dict[int, HFSet]:
        return dict(self.f)

    @property
    def total(self) -> bool:
        return frozenset(i for i, _ in self.f) == self.d

    def validity_error(self, N: int | None = None) -> str | None:
        if N is not None and any(i >= N or i < 0 for i in self.d):
            return f"indices must lie below {N}"
        if any(i not in self.d or j not in self.d for i, j in self.e):
            return "relation leaves the index set"
        if _has_cycle(self.d, self.e):
            return "relation has a cycle"
        fd = self.assignment
        if frozenset(fd) not in (frozenset(), self.d):
            return "assignment domain must be empty or everything"
        if len(set(fd.values())) != len(fd):
            return "assignment not injective"
        if fd and frozenset(fd) == self.d:
            for i in self.d:
                for j in self.d:
                    if ((i, j) in self.e) != (fd[i] in fd[j]):
                        return f"membership pattern disagrees with the relation at ({i},{j})"
        return None

    def is_valid(self, N: int | None = None) -> bool:
        return self.validity_error(N) is None


def _has_cycle(d: frozenset[int], e: frozenset[tuple[int, int]]) -> bool:
    color: dict[int, int] = {}

    def visit(i: int) -> bool:
        color[i] = 1
        for (a, b) in e:
            if a == i:
                if color.get(b) == 1:
                    return True
                if color.get(b, 0) == 0 and visit(b):
                    return True
        color[i] = 2
        return False

    return any(color.get(i, 0) == 0 and visit(i) for i in d)


def friedman_le(p: FriedmanCondition, q: FriedmanCondition) -> bool:
    return (q.d <= p.d
            and p.e & _square(q.d) == q.e
            and set(q.f) <= set(p.f))


def _square(d: frozenset[int]) -> frozenset[tuple[int, int]]:
    return frozenset((i, j) for i in d for j in d)


def friedman_condition_id(p: FriedmanCondition) -> str:
    # assignment values appear through their Ackermann codes, which keeps
    # the identifier free of tokenizer-special characters
    ds = ",".join(map(str, sorted(p.d)))
    es = ",".join(f"{i}>{j}" for i, j in sorted(p.e))
    fs = ",".join(f"{i}:{ackermann_code(x)}" for i, x in p.f)
    return f"F[d={ds}|e={es}|f={fs}]"


TOP_CONDITION = FriedmanCondition.make((), (), ())


class FriedmanForcing:
    """The intensional forcing over a ground model and an index bound."""

    def __init__(self, model: GroundModel, N: int, bound: int = 8):
        if N > bound:
            raise BoundExceeded(f"index bound {N} exceeds the configured cap {bound}")
        self.model = model
        self.N = N
        self.top = TOP_CONDITION

    def validate(self, p: FriedmanCondition, strict_carrier: bool = False) -> None:
        err = p.validity_error(self.N)
        if err:
            raise OrderError(f"invalid condition: {err}")
        stray = [x for _, x in p.f if x not in self.model]
        if stray:
            if strict_carrier:
                raise OrderError(f"assignment leaves the ground carrier: {stray[0]!r}")
            warnings.warn("assignment leaves the ground carrier", DeskWarning)

    def le(self, p: FriedmanCondition, q: FriedmanCondition) -> bool:
        return friedman_le(p, q)

    def compatible(self, p: FriedmanCondition, q: FriedmanCondition) -> bool:
        """Decide common extendability within the ground carrier."""
        shared = p.d & q.d
        if p.e & _square(shared) != q.e & _square(shared):
            return False
        fp, fq = p.assignment, q.assignment
        if fp and fq:
            if any(i in fq and fp[i] != fq[i] for i in fp):
                return False
            union = {**fp, **fq}
            if len(set(union.values())) != len(union):
                return False
            # the membership-induced union is the canonical common extension
            e = frozenset((i, j) for i in union for j in union
                          if i != j and union[i] in union[j])
            return e & _square(p.d) == p.e and e & _square(q.d) == q.e
        if not fp and not fq:
            return not _has_cycle(p.d | q.d, p.e | q.e)
        total, empty = (p, q) if fp else (q, p)
        return self._extends_totally(total, empty) is not None

    def _extends_totally(self, total: FriedmanCondition,
                         empty: FriedmanCondition) -> FriedmanCondition | None:
        """Search for a total common extension of a total and an f-empty
        condition, assigning the missing indices inside the model."""
        missing = sorted(empty.d - total.d)
        base = total.assignment
        combined_e = total.e | empty.e
        if total.e & _square(total.d & empty.d) != empty.e & _square(total.d & empty.d):
            return None

        def ok(assign: dict[int, HFSet]) -> FriedmanCondition | None:
            union = {**base, **assign}
            e = frozenset((i, j) for i in union for j in union
                          if i != j and union[i] in union[j])
            cand = FriedmanCondition.make(total.d | empty.d, e, union)
            if e & _square(total.d) != total.e:
                return None
            if e & _square(empty.d) != empty.e:
                return None
            return cand

        used = set(base.values())
        pool = [x for x in self.model if x not in used]
        for combo in itertools.permutations(pool, len(missing)):
            cand = ok(dict(zip(missing, combo)))
            if cand is not None:
                return cand
        return None

    def total_extension(self, p: FriedmanCondition) -> FriedmanCondition:
        """The acyclicity-driven witness that total assignments are dense:
        each index receives the set of its predecessors' values plus a
        tag that keeps the assignment injective and out of the way."""
        if p.assignment:
            return p
        order: list[int] = []
        remaining = set(p.d)
        while remaining:
            progress = [i for i in remaining
                        if all(a not in remaining or a == i for (a, b) in p.e if b == i)]
            if not progress:
                raise OrderError("relation has a cycle")
            for i in sorted(progress):
                order.append(i)
                remaining.discard(i)
        f: dict[int, HFSet] = {}
        for j in order:
            preds = [f[i] for (i, i2) in p.e if i2 == j for i in [i]]
            tag = HFSet((EMPTY, natural(j)))
            f[j] = HFSet(preds + [tag])
        out = FriedmanCondition.make(p.d, p.e, f)
        assert out.validity_error() is None
        if any(x not in self.model for x in f.values()):
            warnings.warn("total extension leaves the ground carrier", DeskWarning)
        return out

    def surjectivity_extension(self, p: FriedmanCondition, x: HFSet,
                               fresh: int | None = None) -> FriedmanCondition:
        """Extend a total condition so that x joins the assignment's range,
        wiring the new index by actual membership."""
        fp = p.assignment
        if frozenset(fp) != p.d:
            raise OrderError("surjectivity extension needs a total assignment")
        if x in fp.values():
            raise ValueError("the target is already in the range")
        if fresh is None:
            free = [j for j in range(self.N) if j not in p.d]
            if not free:
                raise IndexExhaustedError(f"all {self.N} indices are used")
            fresh = free[0]
        elif fresh in p.d or fresh >= self.N:
            raise IndexExhaustedError(f"index {fresh} is unavailable")
        e = set(p.e)
        e |= {(i, fresh) for i in p.d if fp[i] in x}
        e |= {(fresh, i) for i in p.d if x in fp[i]}
        f = dict(fp)
        f[fresh] = x
        out = FriedmanCondition.make(p.d | {fresh}, e, f)
        err = out.validity_error(self.N)
        if err:
            raise OrderError(f"surjectivity extension failed: {err}")
        return out

    def enumerate_total(self) -> list[FriedmanCondition]:
        """Every condition with a total assignment into the model."""
        out = []
        elems = list(self.model)
        count = sum(_n_injections(len(elems), k) * _binom(self.N, k)
                    for k in range(self.N + 1))
        if count > max_carrier():
            raise BoundExceeded(f"total suborder would have {count} conditions")
        for k in range(self.N + 1):
            for d in itertools.combinations(range(self.N), k):
                for values in itertools.permutations(elems, k):
                    f = dict(zip(d, values))
                    e = frozenset((i, j) for i in d for j in d
                                  if i != j and f[i] in f[j])
                    out.append(FriedmanCondition.make(d, e, f))
        return out


def _binom(n: int, k: int) -> int:
    import math

    return math.comb(n, k)


def _n_injections(m: int, k: int) -> int:
    out = 1
    for i in range(k):
        out *= (m - i)
    return out


@dataclass
class FriedmanPoset:
    """The explicit total-assignment suborder, possibly augmented with
    declared f-empty conditions (each must extend to a total one, which
    keeps the generic cones exactly the total maximal assignments)."""

    forcing: FriedmanForcing
    order: Preorder
    condition_of: dict[str, FriedmanCondition]

    def id_of(self, p: FriedmanCondition) -> str:
        cid = friedman_condition_id(p)
        if cid not in self.condition_of:
            raise UnknownConditionError(f"{cid} is not in this explicit suborder")
        return cid

    def edot(self) -> PName:
        """The relation name: pairs (i,j) conditioned on the edge condition."""
        top = self.order.top
        entries = []
        for i in range(self.forcing.N):
            for j in range(self.forcing.N):
                if i == j:
                    continue
                pij = FriedmanCondition.make({i, j}, {(i, j)}, ())
                nm = op_name(check_name(natural(i), top),
                             check_name(natural(j), top), top)
                entries.append((nm, self.id_of(pij)))
        return PName(entries)


def friedman_poset(model: GroundModel, N: int,
                   extras: Iterable[FriedmanCondition] = (),
                   with_edges: bool = False) -> FriedmanPoset:
    """Enumerate the total suborder, adjoining declared extra conditions.

    with_edges adds the single-edge conditions used by the relation name.
    Extras that admit no total extension inside the model would show up
    as spurious generic cones, so they are rejected.
    """
    forcing = FriedmanForcing(model, N)
    conds = {friedman_condition_id(c): c for c in forcing.enumerate_total()}
    wanted = list(extras)
    if with_edges:
        for i in range(N):
            for j in range(N):
                if i != j:
                    wanted.append(FriedmanCondition.make({i, j}, {(i, j)}, ()))
    totals = list(conds.values())
    for extra in wanted:
        err = extra.validity_error(N)
        if err:
            raise OrderError(f"invalid declared condition: {err}")
        cid = friedman_condition_id(extra)
        if cid in conds:
            continue
        if extra.assignment:
            conds[cid] = extra
            continue
        if not any(friedman_le(t, extra) for t in totals):
            raise BoundExceeded(
                f"{cid} has no total extension inside this ground model")
        conds[cid] = extra
    ids = sorted(conds)
    le = {(a, b) for a in ids for b in ids
          if friedman_le(conds[a], conds[b])}
    top_id = friedman_condition_id(TOP_CONDITION)
    order = Preorder(ids, le, top_id, _trusted=True)
    return FriedmanPoset(forcing, order, conds)


def decode_E_F(conditions: Iterable[FriedmanCondition]
               ) -> tuple[frozenset[tuple[int, int]], dict[int, HFSet]]:
    """Union the relation and assignment fragments along a filter."""
    E: set[tuple[int, int]] = set()
    F: dict[int, HFSet] = {}
    for p in conditions:
        E |= p.e
        for i, x in p.f:
            if F.get(i, x) != x:
                raise OrderError("assignments disagree: not a filter")
            F[i] = x
    if len(set(F.values())) != len(F):
        raise OrderError("union assignment not injective: not a filter")
    return frozenset(E), F


def decoding_is_isomorphism(model: GroundModel, E: frozenset[tuple[int, int]],
                            F: dict[int, HFSet]) -> bool:
    """F must be a bijection onto the model turning E into membership."""
    if set(F.values()) != set(model):
        return False
    dom = set(F)
    if E - {(i, j) for i in dom for j in dom}:
        return False
    return all(((i, j) in E) == (F[i] in F[j]) for i in dom for j in dom)


def p_sequence(xs: Sequence[HFSet], ns: Sequence[int]) -> FriedmanCondition:
    """The canonical condition pinning objects at chosen indices, with
    the membership-induced edges; monotone in end extension."""
    xs, ns = tuple(xs), tuple(ns)
    if not appropriate(ns, xs):
        raise ValueError("index sequence is not appropriate for the objects")
    cond = TOP_CONDITION
    for k, (x, n) in enumerate(zip(xs, ns)):
        d = cond.d | {n}
        f = cond.assignment
        f[n] = x
        e = set(cond.e)
        for i in range(k):
            if xs[k] in xs[i]:
                e.add((n, ns[i]))
            if xs[i] in xs[k]:
                e.add((ns[i], n))
        cond = FriedmanCondition.make(d, e, f)
    assert cond.validity_error() is None
    return cond


def p_lex(xs: Sequence[HFSet]) -> FriedmanCondition:
    return p_sequence(xs, lex_min_appropriate(tuple(xs)))


def index_swap(p: FriedmanCondition, i: int, j: int) -> FriedmanCondition:
    """The automorphism swapping two indices wherever they occur."""

    def sw(k: int) -> int:
        return j if k == i else i if k == j else k

    return FriedmanCondition.make(
        (sw(k) for k in p.d),
        ((sw(a), sw(b)) for a, b in p.e),
        ((sw(k), x) for k, x in p.f))


def qn_antichain(n: int) -> FriedmanCondition:
    """The n-th member of the index-only antichain avoiding index 0."""
    if n < 1:
        raise ValueError("members start at n=1")
    return FriedmanCondition.make(range(1, n + 2), {(1, n + 1)}, ())


# ---------------------------------------------------------------------------
# two-step iterations


@dataclass
class TwoStepIteration:
    base: Preorder
    order: Preorder
    pairs: dict[str, tuple[str, PName]]
    qdom: PName
    qord: PName
    pool: NamePool

    def pair_id(self, p: str, qdot: PName) -> str:
        for pid, (bp, nm) in self.pairs.items():
            if bp == p and nm is qdot:
                return pid
        raise UnknownConditionError(f"({p!r}, {qdot!r}) is not an iteration condition")


def two_step(P: Preorder, qdom: PName, qord: PName, pool: NamePool,
             top_name: PName | None = None, verify: bool = True) -> TwoStepIteration:
    """Pairs (p, qdot) with p forcing qdot into the named domain, ordered by
    base order plus forced pair-membership in the named relation.

    The named relation must behave as a preorder with a weakest element
    on the pool's members; this is verified cone by cone with the
    semantic oracle before the carrier is assembled.
    """
    names = list(pool)
    if top_name is None:
        top_name = names[0]
    if top_name not in names:
        raise PoolError("the designated weakest name must come from the pool")
    if verify:
        _verify_preorder_name(P, qdom, qord, names, top_name)
    ids: dict[tuple[str, int], str] = {}
    for p in P.carrier:
        for k, q in enumerate(names):
            if semantic_forces(P, p, Mem(q, qdom)).forced:
                ids[(p, k)] = f"<{p}|{k}>"
    order_pairs = set()
    forced_rel: dict[tuple[int, int, str], bool] = {}

    def rel(p: str, a: int, b: int) -> bool:
        key = (a, b, p)
        hit = forced_rel.get(key)
        if hit is None:
            hit = semantic_forces(
                P, p, Mem(op_name(names[a], names[b], P.top), qord)).forced
            forced_rel[key] = hit
        return hit

    for (p0, k0), id0 in ids.items():
        for (p1, k1), id1 in ids.items():
            if P.le(p0, p1) and rel(p0, k0, k1):
                order_pairs.add((id0, id1))
    top_id = ids.get((P.top, names.index(top_name)))
    if top_id is None:
        raise PoolError("the weakest pair is missing from the carrier")
    try:
        order = Preorder(tuple(ids.values()), order_pairs, top_id)
    except OrderError as exc:
        raise OrderError(f"iteration is not a preorder: {exc}") from exc
    pairs = {pid: (p, names[k]) for (p, k), pid in ids.items()}
    return TwoStepIteration(P, order, pairs, qdom, qord, pool)


def _verify_preorder_name(P: Preorder, qdom: PName, qord: PName,
                          names: list[PName], top_name: PName) -> None:
    for G in (cone_of(P, m) for m in _minimals(P)):
        dom = evaluate(qdom, G)
        rel = evaluate(qord, G)
        members = [evaluate(q, G) for q in names if evaluate(q, G) in dom]
        from .hf import kuratowski

        def related(x: HFSet, y: HFSet) -> bool:
            return kuratowski(x, y) in rel

        for x in members:
            if not related(x, x):
                raise PoolError("relation name is not forced reflexive on the pool")
            if not related(x, evaluate(top_name, G)):
                raise PoolError("designated weakest name is not forced weakest")
        for x in members:
            for y in members:
                for z in members:
                    if related(x, y) and related(y, z) and not related(x, z):
                        raise PoolError("relation name is not forced transitive on the pool")
        if evaluate(top_name, G) not in dom:
            raise PoolError("designated weakest name is not forced into the domain")


def _minimals(P: Preorder) -> tuple[str, ...]:
    from .orders import minimal_classes

    return minimal_classes(P)


def check_named_iteration(P: Preorder, Q: Preorder
                          ) -> tuple[TwoStepIteration, dict[str, str]]:
    """Iterate P with the checked copy of an explicit preorder Q.

    Returns the iteration and the lift map sending each Q-condition to
    the iteration condition pairing it with the top of P.
    """
    top = P.top
    code_names = {q: check_name(condition_code(Q, q), top) for q in Q.carrier}
    qdom = PName((code_names[q], top) for q in Q.carrier)
    qord = PName((op_name(code_names[a], code_names[b], top), top)
                 for a in Q.carrier for b in Q.carrier if Q.le(a, b))
    pool = NamePool.closure(code_names.values())
    names = list(pool)
    it = two_step(P, qdom, qord, pool, top_name=code_names[Q.top])
    lift = {}
    for q in Q.carrier:
        k = names.index(code_names[q])
        lift[q] = f"<{top}|{k}>"
    return it, lift


def compose_generics(it: TwoStepIteration, G: Filter,
                     H_values: frozenset[HFSet]) -> Filter:
    """The composed filter: base condition in G, name evaluating into H."""
    chosen = []
    for pid, (p, qdot) in it.pairs.items():
        if p in G and evaluate(qdot, G) in H_values:
            chosen.append(pid)
    return Filter(frozenset(chosen))
