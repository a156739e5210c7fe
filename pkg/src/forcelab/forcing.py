"""The two forcing relations: a generic-cone oracle and syntactic recursions.

On a finite preorder the filters meeting every dense subset are exactly
the upward cones of minimal conditions, so quantifying over those cones
decides any statement exactly. The syntactic side re-implements the
dense-set recursions for atomic formulas, the composite first-order
recursion with pool-bounded quantifiers, Boolean values in a completion,
and the stratified restricted relation for forcings presented by
projections. Nothing here is approximate; agreement between the two
routes is a test obligation, not an assumption.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Hashable, Iterable, Mapping

from .errors import PoolError, UnknownConditionError
from .formulas import (
    Conj,
    Disj,
    Eq,
    FOAll,
    FOAnd,
    FOEq,
    FOEx,
    FOMem,
    FONot,
    FOOr,
    FOPred,
    FOFormula,
    InfFormula,
    InG,
    Mem,
    Neg,
    Sub,
    nu_mu,
)
from .names import Filter, PName, evaluate, subnames
from .orders import FiniteBooleanAlgebra, Preorder, minimal_classes, regular_open_algebra, \
    separative_quotient
from .names import transport_quotient


@dataclass(frozen=True)
class Verdict:
    """Outcome of a forcing query; refutations carry a generic-cone witness."""

    forced: bool
    witness: str | None = None

    def __post_init__(self):
        assert (self.witness is None) == self.forced

    def __bool__(self) -> bool:
        return self.forced


@dataclass(frozen=True)
class NamePool:
    """A finite, subname-closed quantifier range for first-order forcing."""

    names: tuple[PName, ...]

    def __init__(self, names: Iterable[PName]):
        names = tuple(dict.fromkeys(names))
        have = {n.serial for n in names}
        for n in names:
            for sub in subnames(n):
                if sub.serial not in have:
                    raise PoolError(
                        f"pool is not closed under subnames: {sub!r} inside {n!r} is missing")
        object.__setattr__(self, "names", names)

    @classmethod
    def closure(cls, names: Iterable[PName]) -> "NamePool":
        out: dict[int, PName] = {}
        for n in names:
            for sub in subnames(n):
                out[sub.serial] = sub
        from .names import _NAME_KEY

        return cls(tuple(sorted(out.values(), key=_NAME_KEY)))

    def __iter__(self):
        return iter(self.names)

    def __len__(self) -> int:
        return len(self.names)


# ---------------------------------------------------------------------------
# the oracle


@lru_cache(maxsize=None)
def cone_generics(P: Preorder) -> tuple[Filter, ...]:
    """The filters meeting every dense subset: cones over minimal classes."""
    out = []
    for m in minimal_classes(P):
        out.append(Filter(frozenset(q for q in P.carrier if P.le(m, q))))
    return tuple(out)


@lru_cache(maxsize=None)
def cone_of(P: Preorder, m: str) -> Filter:
    if m not in P:
        raise UnknownConditionError(f"unknown condition {m!r}")
    return Filter(frozenset(q for q in P.carrier if P.le(m, q)))


def holds(phi: InfFormula, G: Filter) -> bool:
    """Evaluate an infinitary formula at a filter."""
    if isinstance(phi, InG):
        return phi.cond in G
    if isinstance(phi, Eq):
        return evaluate(phi.left, G) == evaluate(phi.right, G)
    if isinstance(phi, Mem):
        return evaluate(phi.left, G) in evaluate(phi.right, G)
    if isinstance(phi, Sub):
        return evaluate(phi.left, G).issubset(evaluate(phi.right, G))
    if isinstance(phi, Neg):
        return not holds(phi.body, G)
    if isinstance(phi, Conj):
        return all(holds(p, G) for p in phi.parts)
    if isinstance(phi, Disj):
        return any(holds(p, G) for p in phi.parts)
    raise TypeError(f"not an infinitary formula: {phi!r}")


def semantic_forces(P: Preorder, p: str, phi: InfFormula) -> Verdict:
    """Forced iff the formula holds at every generic cone through p."""
    if p not in P:
        raise UnknownConditionError(f"unknown condition {p!r}")
    for m in minimal_classes(P):
        if P.le(m, p) and not holds(phi, cone_of(P, m)):
            return Verdict(False, witness=m)
    return Verdict(True)


# ---------------------------------------------------------------------------
# the syntactic relation for atomic formulas


def syntactic_forces_atomic(P: Preorder, p: str, phi: InfFormula) -> bool:
    """The dense-set recursion for =, subset and membership atoms.

    Termination is by the lexicographic rank pair: the membership clause
    recurses into equalities of strictly smaller total rank, the subset
    clause into memberships of strictly smaller total rank.
    """
    if p not in P:
        raise UnknownConditionError(f"unknown condition {p!r}")
    if isinstance(phi, Eq):
        return _star_eq(P, p, phi.left, phi.right)
    if isinstance(phi, Mem):
        return _star_mem(P, p, phi.left, phi.right)
    if isinstance(phi, Sub):
        return _star_subset(P, p, phi.left, phi.right)
    raise TypeError(f"not an atomic =/in/subset formula: {phi!r}")


@lru_cache(maxsize=None)
def _star_eq(P: Preorder, p: str, sigma: PName, tau: PName) -> bool:
    return _star_subset(P, p, sigma, tau) and _star_subset(P, p, tau, sigma)


@lru_cache(maxsize=None)
def _star_subset(P: Preorder, p: str, sigma: PName, tau: PName) -> bool:
    for rho, r in sigma.entries:
        for q in P.carrier:
            if P.le(q, p) and P.le(q, r):
                # D = {s : s forces rho in tau} must be dense below q
                for q2 in P.below(q):
                    if not any(_star_mem(P, s, rho, tau) for s in P.below(q2)):
                        return False
    return True


@lru_cache(maxsize=None)
def _star_mem(P: Preorder, p: str, sigma: PName, tau: PName) -> bool:
    # E = {q : some entry (rho,r) of tau has q <= r and q forces sigma = rho}
    for q in P.below(p):
        if not any(_in_E(P, s, sigma, tau) for s in P.below(q)):
            return False
    return True


def _in_E(P: Preorder, q: str, sigma: PName, tau: PName) -> bool:
    return any(P.le(q, r) and _star_eq(P, q, sigma, rho) for rho, r in tau.entries)


def decidability_frontier(P: Preorder, phi: InfFormula) -> tuple[str, ...]:
    """Conditions that decide an atomic formula; dense at finite scale."""
    if not isinstance(phi, (Eq, Mem, Sub)):
        raise TypeError(f"not an atomic formula: {phi!r}")
    out = tuple(p for p in P.carrier
                if semantic_forces(P, p, phi).forced
                or semantic_forces(P, p, Neg(phi)).forced)
    return out


# ---------------------------------------------------------------------------
# composite first-order forcing with pool-bounded quantifiers


def fo_truth_at(P: Preorder, G: Filter, phi: FOFormula,
                assignment: Mapping[int, PName], pool: NamePool,
                env: Mapping[int, PName] | None = None) -> bool:
    """Pool-relativized truth of a first-order formula at a generic cone."""
    env = env or {}
    asg = dict(assignment)

    def value(i: int):
        try:
            return evaluate(asg[i], G)
        except KeyError:
            raise PoolError(f"unbound variable v{i}") from None

    def sat(f: FOFormula) -> bool:
        if isinstance(f, FOEq):
            return value(f.i) == value(f.j)
        if isinstance(f, FOMem):
            return value(f.i) in value(f.j)
        if isinstance(f, FOPred):
            if f.k not in env:
                raise PoolError(f"no class name for predicate A{f.k}")
            return value(f.i) in evaluate(env[f.k], G)
        if isinstance(f, FONot):
            return not sat(f.body)
        if isinstance(f, FOAnd):
            return all(sat(p) for p in f.parts)
        if isinstance(f, FOOr):
            return any(sat(p) for p in f.parts)
        if isinstance(f, (FOEx, FOAll)):
            results = []
            for tau in pool:
                asg[f.var] = tau
                results.append(sat(f.body))
            asg.pop(f.var, None)
            return any(results) if isinstance(f, FOEx) else all(results)
        raise TypeError(f"not a first-order formula: {f!r}")

    return sat(phi)


def forces_fo(P: Preorder, p: str, phi: FOFormula, pool: NamePool,
              assignment: Mapping[int, PName] | None = None,
              env: Mapping[int, PName] | None = None,
              exists_mode: str = "dense") -> bool:
    """The composite recursion: conjunction both-ways, negation by density,
    universal over the pool, class atoms through their entry structure.

    exists_mode 'dense' treats an existential as the negated universal
    (densely many strengthenings force some pool witness); 'witness'
    demands a single pool name forced at p itself. The witness reading is
    strictly stronger, so only 'dense' matches the cone semantics.
    """
    if p not in P:
        raise UnknownConditionError(f"unknown condition {p!r}")
    assignment = dict(assignment or {})
    env = dict(env or {})
    if exists_mode not in ("dense", "witness"):
        raise ValueError(f"unknown exists_mode {exists_mode!r}")

    def rec(q: str, f: FOFormula, asg: dict[int, PName]) -> bool:
        if isinstance(f, FOEq):
            return _star_eq(P, q, asg[f.i], asg[f.j])
        if isinstance(f, FOMem):
            return _star_mem(P, q, asg[f.i], asg[f.j])
        if isinstance(f, FOPred):
            gamma = env.get(f.k)
            if gamma is None:
                raise PoolError(f"no class name for predicate A{f.k}")
            sigma = asg[f.i]
            # densely below q, a condition enters an entry of the class name
            # while forcing equality with its name
            return all(
                any(P.le(s, r) and _star_eq(P, s, sigma, rho)
                    for s in P.below(q2)
                    for rho, r in gamma.entries)
                for q2 in P.below(q))
        if isinstance(f, FONot):
            return all(not rec(q2, f.body, asg) for q2 in P.below(q))
        if isinstance(f, FOAnd):
            return all(rec(q, part, asg) for part in f.parts)
        if isinstance(f, FOOr):
            return all(any(rec(s, part, asg)
                           for s in P.below(q2) for part in f.parts)
                       for q2 in P.below(q))
        if isinstance(f, FOAll):
            return all(rec(q, f.body, {**asg, f.var: tau}) for tau in pool)
        if isinstance(f, FOEx):
            if exists_mode == "witness":
                return any(rec(q, f.body, {**asg, f.var: tau}) for tau in pool)
            return all(
                any(rec(s, f.body, {**asg, f.var: tau})
                    for s in P.below(q2) for tau in pool)
                for q2 in P.below(q))
        raise TypeError(f"not a first-order formula: {f!r}")

    return rec(p, phi, assignment)


def truth_lemma_check(P: Preorder, G: Filter, phi: InfFormula,
                      pool: NamePool | None = None) -> str | None:
    """Find a condition in the generic forcing a statement true there.

    Returns None (vacuous) when the statement fails at G. Conditions are
    tried weakest first so the answer is the least committed witness.
    """
    if not holds(phi, G):
        return None
    order = sorted(G.conditions,
                   key=lambda c: (-len(P.below(c)), P.index(c)))
    for p in order:
        if semantic_forces(P, p, phi).forced:
            return p
    raise AssertionError(f"truth lemma failed at {phi!r}: no forcing condition in the generic")


def forces_via_nu_mu(P: Preorder, p: str, phi: InfFormula) -> bool:
    """Force an infinitary formula by forcing equality of its two names."""
    nu, mu = nu_mu(phi, P.top)
    return _star_eq(P, p, nu, mu)


# ---------------------------------------------------------------------------
# Boolean values


def boolean_value(P: Preorder, B: FiniteBooleanAlgebra, e: Mapping[str, Hashable],
                  phi: InfFormula) -> Hashable:
    """The recursive Boolean value of an atomic formula in a completion.

    Membership is the supremum over the entries of the right name of
    (equality value and entry condition); subset the infimum over the
    domain of the left name; equality the meet of both subsets.
    """
    if isinstance(phi, Eq):
        return _bv_eq(P, B, _freeze(e), phi.left, phi.right)
    if isinstance(phi, Mem):
        return _bv_mem(P, B, _freeze(e), phi.left, phi.right)
    if isinstance(phi, Sub):
        return _bv_sub(P, B, _freeze(e), phi.left, phi.right)
    raise TypeError(f"not an atomic formula: {phi!r}")


def _freeze(e: Mapping[str, Hashable]) -> tuple:
    return tuple(sorted(e.items(), key=lambda kv: kv[0]))


@lru_cache(maxsize=None)
def _bv_mem(P, B, e_items, sigma: PName, tau: PName):
    e = dict(e_items)
    return B.sup(B.meet(_bv_eq(P, B, e_items, sigma, rho), e[r])
                 for rho, r in tau.entries)


@lru_cache(maxsize=None)
def _bv_eq(P, B, e_items, sigma: PName, tau: PName):
    return B.meet(_bv_sub(P, B, e_items, sigma, tau),
                  _bv_sub(P, B, e_items, tau, sigma))


@lru_cache(maxsize=None)
def _bv_sub(P, B, e_items, sigma: PName, tau: PName):
    return B.inf(B.join(B.complement(_bv_mem(P, B, e_items, pi, sigma)),
                        _bv_mem(P, B, e_items, pi, tau))
                 for pi in sigma.domain())


@dataclass
class CompletionSetup:
    """A separative-quotient route into the regular open algebra."""

    order: Preorder
    algebra: FiniteBooleanAlgebra
    embedding: dict[str, Hashable]
    to_quotient: dict[str, str]

    def transport(self, sigma: PName) -> PName:
        return transport_quotient(sigma, self.to_quotient)

    def value(self, phi: InfFormula) -> Hashable:
        if isinstance(phi, Eq):
            moved = Eq(self.transport(phi.left), self.transport(phi.right))
        elif isinstance(phi, Mem):
            moved = Mem(self.transport(phi.left), self.transport(phi.right))
        elif isinstance(phi, Sub):
            moved = Sub(self.transport(phi.left), self.transport(phi.right))
        else:
            raise TypeError(f"not an atomic formula: {phi!r}")
        return boolean_value(self.order, self.algebra, self.embedding, moved)

    def below(self, p: str, value: Hashable) -> bool:
        return self.algebra.le(self.embedding[self.to_quotient[p]], value)


def completion_setup(P: Preorder) -> CompletionSetup:
    """Regular open algebra of the separative quotient, with name transport."""
    from .orders import is_separative

    if is_separative(P) and P.is_antisymmetric():
        S, mapping = P, {p: p for p in P.carrier}
    else:
        S, qmap = separative_quotient(P)
        mapping = dict(qmap.mapping)
    B, e = regular_open_algebra(S)
    return CompletionSetup(S, B, dict(e), mapping)


def formula_to_ro(P: Preorder, phi: InfFormula) -> frozenset:
    """Map a formula to the regular open element carved out by its cones.

    The image is the element of RO(P) determined by the minimal classes
    whose cones satisfy the formula; two formulas get the same image
    exactly when the top condition forces them equivalent.
    """
    return frozenset(m for m in minimal_classes(P) if holds(phi, cone_of(P, m)))


# ---------------------------------------------------------------------------
# the restricted relation for stratified presentations


def restricted_forces(family, alpha: int, p: str, phi: InfFormula,
                      restricted: bool = True) -> bool:
    """The subset relation with quantifiers confined to one stratum.

    family carries strata P_0 <= ... <= P_K inside a top preorder and
    projection maps onto each successor stratum. With restricted=False
    the same recursion runs unrestricted on the full order (the reference
    reading); the two must agree on names over P_alpha once p is replaced
    by its projection.
    """
    if not isinstance(phi, (Sub, Eq)):
        raise TypeError("the restricted relation covers subset and equality atoms")
    P: Preorder = family.order
    allowed = frozenset(family.stratum(alpha))
    for nm in (phi.left, phi.right):
        for tau in subnames(nm):
            for _, c in tau.entries:
                if c not in allowed:
                    raise UnknownConditionError(
                        f"name mentions {c!r}, outside stratum {alpha}")
    if restricted:
        stratum = frozenset(family.stratum(alpha + 1))
        start = family.projections[alpha + 1][p]
    else:
        stratum = frozenset(P.carrier)
        start = p

    def strengthenings(q: str) -> list[str]:
        return [r for r in P.below(q) if r in stratum]

    def sub(q: str, sigma: PName, tau: PName) -> bool:
        for rho, s in sigma.entries:
            for q2 in strengthenings(q):
                if not any(
                    (not P.le(r, s)) or _witness(r, rho, tau)
                    for r in strengthenings(q2)
                ):
                    return False
        return True

    def _witness(r: str, rho: PName, tau: PName) -> bool:
        return any(P.le(r, t) and eq(r, rho, pi) for pi, t in tau.entries)

    def eq(q: str, sigma: PName, tau: PName) -> bool:
        return sub(q, sigma, tau) and sub(q, tau, sigma)

    if isinstance(phi, Sub):
        return sub(start, phi.left, phi.right)
    return eq(start, phi.left, phi.right)
