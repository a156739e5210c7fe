"""First-order and infinitary forcing-language formulas.

The infinitary language has atoms "p-check is in the generic", equality
and membership of names, negation, and finite indexed conjunction and
disjunction. A derived subset atom is supported by the evaluators and by
negation normal form, but it has no code of its own: codes cover exactly
the six official constructors.

The first-order language has variables v0, v1, ..., unary class
predicates, and both quantifiers. Formulas are kept in the normal form
where a quantifier binding v_k only sees free variables among v0..vk.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Union

from .errors import PoolError
from .hf import HFSet, natural
from .names import PName, check_name, op_name

# ---------------------------------------------------------------------------
# infinitary formulas


@dataclass(frozen=True)
class InG:
    cond: str


@dataclass(frozen=True)
class Eq:
    left: PName
    right: PName


@dataclass(frozen=True)
class Mem:
    left: PName
    right: PName


@dataclass(frozen=True)
class Sub:
    """Derived subset atom; evaluable and normalizable, but not coded."""

    left: PName
    right: PName


@dataclass(frozen=True)
class Neg:
    body: "InfFormula"


@dataclass(frozen=True)
class Conj:
    parts: tuple["InfFormula", ...]

    def __init__(self, parts: Iterable["InfFormula"]):
        object.__setattr__(self, "parts", tuple(parts))


@dataclass(frozen=True)
class Disj:
    parts: tuple["InfFormula", ...]

    def __init__(self, parts: Iterable["InfFormula"]):
        object.__setattr__(self, "parts", tuple(parts))


InfFormula = Union[InG, Eq, Mem, Sub, Neg, Conj, Disj]

TRUE = Conj(())
FALSE = Disj(())


def formula_names(phi: InfFormula) -> tuple[PName, ...]:
    out: dict[int, PName] = {}

    def walk(f: InfFormula) -> None:
        if isinstance(f, (Eq, Mem, Sub)):
            out[f.left.serial] = f.left
            out[f.right.serial] = f.right
        elif isinstance(f, Neg):
            walk(f.body)
        elif isinstance(f, (Conj, Disj)):
            for part in f.parts:
                walk(part)

    walk(phi)
    from .names import _NAME_KEY

    return tuple(sorted(out.values(), key=_NAME_KEY))


def formula_conditions(phi: InfFormula) -> frozenset[str]:
    """Condition identifiers occurring as generic-membership subscripts."""
    if isinstance(phi, InG):
        return frozenset((phi.cond,))
    if isinstance(phi, Neg):
        return formula_conditions(phi.body)
    if isinstance(phi, (Conj, Disj)):
        out: frozenset[str] = frozenset()
        for part in phi.parts:
            out |= formula_conditions(part)
        return out
    return frozenset()


def formula_depth(phi: InfFormula) -> int:
    if isinstance(phi, (InG, Eq, Mem, Sub)):
        return 0
    if isinstance(phi, Neg):
        return 1 + formula_depth(phi.body)
    return 1 + max((formula_depth(p) for p in phi.parts), default=0)


# ---------------------------------------------------------------------------
# Goedel codes: tags 0..5 for the six official constructors


def encode(phi: InfFormula):
    if isinstance(phi, InG):
        return (0, phi.cond)
    if isinstance(phi, Eq):
        return (1, phi.left, phi.right)
    if isinstance(phi, Mem):
        return (2, phi.left, phi.right)
    if isinstance(phi, Neg):
        return (3, encode(phi.body))
    if isinstance(phi, Disj):
        return (4, len(phi.parts), tuple((i, encode(p)) for i, p in enumerate(phi.parts)))
    if isinstance(phi, Conj):
        return (5, len(phi.parts), tuple((i, encode(p)) for i, p in enumerate(phi.parts)))
    if isinstance(phi, Sub):
        raise ValueError("subset atoms are derived and carry no code")
    raise TypeError(f"not an infinitary formula: {phi!r}")


def decode(code) -> InfFormula:
    malformed = ValueError(f"malformed code: {code!r}")
    if not isinstance(code, tuple) or not code:
        raise malformed
    tag = code[0]
    if tag == 0:
        if len(code) != 2 or not isinstance(code[1], str):
            raise malformed
        return InG(code[1])
    if tag in (1, 2):
        if len(code) != 3 or not all(isinstance(x, PName) for x in code[1:]):
            raise malformed
        return (Eq if tag == 1 else Mem)(code[1], code[2])
    if tag == 3:
        if len(code) != 2:
            raise malformed
        return Neg(decode(code[1]))
    if tag in (4, 5):
        if len(code) != 3 or not isinstance(code[1], int):
            raise malformed
        entries = code[2]
        if not isinstance(entries, tuple) or len(entries) != code[1]:
            raise malformed
        if [i for i, _ in entries] != list(range(code[1])):
            raise malformed
        parts = tuple(decode(c) for _, c in entries)
        return Disj(parts) if tag == 4 else Conj(parts)
    raise malformed


# ---------------------------------------------------------------------------
# negation normal form


def nnf(phi: InfFormula) -> InfFormula:
    """Push negations inward until only generic-membership atoms are negated.

    Negated equality, subset and membership unfold through the entry
    structure of the names involved; De Morgan handles the connectives.
    """
    if isinstance(phi, (InG, Eq, Mem)):
        return phi
    if isinstance(phi, Sub):
        # sigma subset tau  ==  for every entry (pi,p): p in G -> pi in tau
        return Conj(Disj((Neg(InG(p)), Mem(pi, phi.right)))
                    for pi, p in phi.left.entries)
    if isinstance(phi, Conj):
        return Conj(nnf(p) for p in phi.parts)
    if isinstance(phi, Disj):
        return Disj(nnf(p) for p in phi.parts)
    body = phi.body
    if isinstance(body, InG):
        return phi
    if isinstance(body, Neg):
        return nnf(body.body)
    if isinstance(body, Conj):
        return Disj(nnf(Neg(p)) for p in body.parts)
    if isinstance(body, Disj):
        return Conj(nnf(Neg(p)) for p in body.parts)
    if isinstance(body, Eq):
        return Disj((_not_subset(body.left, body.right),
                     _not_subset(body.right, body.left)))
    if isinstance(body, Sub):
        return _not_subset(body.left, body.right)
    if isinstance(body, Mem):
        return _not_member(body.left, body.right)
    raise TypeError(f"not an infinitary formula: {phi!r}")


def _not_subset(sigma: PName, tau: PName) -> InfFormula:
    return Disj(Conj((_not_member(pi, tau), InG(p)))
                for pi, p in sigma.entries)


def _not_member(sigma: PName, tau: PName) -> InfFormula:
    return Conj(Disj((nnf(Neg(Eq(sigma, pi))), Neg(InG(p))))
                for pi, p in tau.entries)


# ---------------------------------------------------------------------------
# the two-name reduction: phi holds exactly when nu = mu


def nu_mu(phi: InfFormula, top: str) -> tuple[PName, PName]:
    """Assign names (nu, mu) with: phi holds at G iff nu and mu evaluate equally."""
    return _nu_mu(nnf(phi), top)


def _nu_mu(phi: InfFormula, top: str) -> tuple[PName, PName]:
    zero = check_name(natural(0), top)
    if isinstance(phi, InG):
        return PName(((zero, phi.cond),)), check_name(natural(1), top)
    if isinstance(phi, Neg):
        assert isinstance(phi.body, InG), "nnf leaves only negated generic atoms"
        return PName(), PName(((zero, phi.body.cond),))
    if isinstance(phi, Eq):
        return phi.left, phi.right
    if isinstance(phi, Mem):
        return phi.right, PName(tuple(phi.right.entries) + ((phi.left, top),))
    if isinstance(phi, Conj):
        pieces = [_nu_mu(p, top) for p in phi.parts]
        nu = PName((op_name(n, check_name(natural(i), top), top), top)
                   for i, (n, _) in enumerate(pieces))
        mu = PName((op_name(m, check_name(natural(i), top), top), top)
                   for i, (_, m) in enumerate(pieces))
        return nu, mu
    if isinstance(phi, Disj):
        pieces = [_nu_mu(p, top) for p in phi.parts]
        # A child with syntactically identical names holds at every generic
        # (their evaluations always agree), so the disjunction does too. The
        # removal trick below needs distinct entry names, so short-circuit.
        if any(n is m for n, m in pieces):
            return PName(), PName()
        bar_nu = [op_name(n, check_name(natural(i), top), top)
                  for i, (n, _) in enumerate(pieces)]
        bar_mu = [op_name(m, check_name(natural(i), top), top)
                  for i, (_, m) in enumerate(pieces)]
        pi_entries = [(op_name(bn, bm, top), top) for bn, bm in zip(bar_nu, bar_mu)]
        pi_entries += [(op_name(bn, bn, top), top) for bn in bar_nu]
        pi_name = PName(pi_entries)
        nu_i = [PName(e for e in pi_name.entries if e != (op_name(bn, bm, top), top))
                for bn, bm in zip(bar_nu, bar_mu)]
        nu = PName((n, top) for n in nu_i)
        mu = PName(tuple(nu.entries) + ((pi_name, top),))
        return nu, mu
    raise TypeError(f"nu_mu saw a non-normalized formula: {phi!r}")


# ---------------------------------------------------------------------------
# first-order formulas


@dataclass(frozen=True)
class FOEq:
    i: int
    j: int


@dataclass(frozen=True)
class FOMem:
    i: int
    j: int


@dataclass(frozen=True)
class FOPred:
    """v_i belongs to the k-th class predicate."""

    i: int
    k: int


@dataclass(frozen=True)
class FONot:
    body: "FOFormula"


@dataclass(frozen=True)
class FOAnd:
    parts: tuple["FOFormula", ...]

    def __init__(self, parts: Iterable["FOFormula"]):
        object.__setattr__(self, "parts", tuple(parts))


@dataclass(frozen=True)
class FOOr:
    parts: tuple["FOFormula", ...]

    def __init__(self, parts: Iterable["FOFormula"]):
        object.__setattr__(self, "parts", tuple(parts))


@dataclass(frozen=True)
class FOEx:
    var: int
    body: "FOFormula"


@dataclass(frozen=True)
class FOAll:
    var: int
    body: "FOFormula"


FOFormula = Union[FOEq, FOMem, FOPred, FONot, FOAnd, FOOr, FOEx, FOAll]


def fo_free_vars(phi: FOFormula) -> frozenset[int]:
    if isinstance(phi, (FOEq, FOMem)):
        return frozenset((phi.i, phi.j))
    if isinstance(phi, FOPred):
        return frozenset((phi.i,))
    if isinstance(phi, FONot):
        return fo_free_vars(phi.body)
    if isinstance(phi, (FOAnd, FOOr)):
        out: frozenset[int] = frozenset()
        for p in phi.parts:
            out |= fo_free_vars(p)
        return out
    return fo_free_vars(phi.body) - {phi.var}


def fo_normal_form(phi: FOFormula) -> bool:
    """Under a quantifier binding v_k, free variables stay among v0..vk."""
    if isinstance(phi, (FOEq, FOMem, FOPred)):
        return True
    if isinstance(phi, FONot):
        return fo_normal_form(phi.body)
    if isinstance(phi, (FOAnd, FOOr)):
        return all(fo_normal_form(p) for p in phi.parts)
    return (all(v <= phi.var for v in fo_free_vars(phi.body))
            and fo_normal_form(phi.body))


def fo_quantifier_depth(phi: FOFormula) -> int:
    if isinstance(phi, (FOEq, FOMem, FOPred)):
        return 0
    if isinstance(phi, FONot):
        return fo_quantifier_depth(phi.body)
    if isinstance(phi, (FOAnd, FOOr)):
        return max((fo_quantifier_depth(p) for p in phi.parts), default=0)
    return 1 + fo_quantifier_depth(phi.body)


def fo_satisfies(model, phi: FOFormula, assignment: Mapping[int, HFSet],
                 preds: Mapping[int, frozenset[HFSet]] | None = None) -> bool:
    """Plain Tarskian satisfaction over a finite carrier."""
    env = dict(assignment)
    preds = preds or {}

    def value(i: int) -> HFSet:
        try:
            return env[i]
        except KeyError:
            raise PoolError(f"unbound variable v{i}") from None

    def sat(f: FOFormula) -> bool:
        if isinstance(f, FOEq):
            return value(f.i) == value(f.j)
        if isinstance(f, FOMem):
            return value(f.i) in value(f.j)
        if isinstance(f, FOPred):
            if f.k not in preds:
                raise PoolError(f"no interpretation for class predicate A{f.k}")
            return value(f.i) in preds[f.k]
        if isinstance(f, FONot):
            return not sat(f.body)
        if isinstance(f, FOAnd):
            return all(sat(p) for p in f.parts)
        if isinstance(f, FOOr):
            return any(sat(p) for p in f.parts)
        if isinstance(f, FOEx):
            return any(_with(env, f.var, x, sat, f.body) for x in model)
        if isinstance(f, FOAll):
            return all(_with(env, f.var, x, sat, f.body) for x in model)
        raise TypeError(f"not a first-order formula: {f!r}")

    return sat(phi)


def _with(env: dict, var: int, x: HFSet, sat, body) -> bool:
    old = env.get(var, _MISSING)
    env[var] = x
    try:
        return sat(body)
    finally:
        if old is _MISSING:
            del env[var]
        else:
            env[var] = old


_MISSING = object()


def shift_substitute(phi: FOFormula) -> FOFormula:
    """Rename free v0 to v1 and every bound variable one step up.

    This is the capture-free instantiation used when a formula with one
    free variable is re-used under a fresh outer quantifier; it keeps the
    normal form intact.
    """

    def walk(f: FOFormula, bound: dict[int, int]) -> FOFormula:
        def rn(i: int) -> int:
            if i in bound:
                return bound[i]
            return 1 if i == 0 else i + 1

        if isinstance(f, FOEq):
            return FOEq(rn(f.i), rn(f.j))
        if isinstance(f, FOMem):
            return FOMem(rn(f.i), rn(f.j))
        if isinstance(f, FOPred):
            return FOPred(rn(f.i), f.k)
        if isinstance(f, FONot):
            return FONot(walk(f.body, bound))
        if isinstance(f, FOAnd):
            return FOAnd(walk(p, bound) for p in f.parts)
        if isinstance(f, FOOr):
            return FOOr(walk(p, bound) for p in f.parts)
        if isinstance(f, (FOEx, FOAll)):
            new = f.var + 1
            inner = dict(bound)
            inner[f.var] = new
            body = walk(f.body, inner)
            return FOEx(new, body) if isinstance(f, FOEx) else FOAll(new, body)
        raise TypeError(f"not a first-order formula: {f!r}")

    return walk(phi, {})


def psi_unique(phi: FOFormula) -> FOFormula:
    """The statement that v0 is the unique object satisfying phi."""
    free = fo_free_vars(phi)
    if free != frozenset((0,)):
        raise ValueError(f"psi_unique needs exactly one free variable v0, got {sorted(free)}")
    shifted = shift_substitute(phi)
    return FOAnd((phi, FOAll(1, FOOr((FONot(shifted), FOEq(1, 0))))))


# ---------------------------------------------------------------------------
# the star translation into the forcing language of the decoding forcing


@dataclass(frozen=True)
class StarTranslation:
    formula: InfFormula
    truncation: int
    indices: tuple[int, ...]


def translate_star(phi: FOFormula, ns: tuple[int, ...], N: int, *,
                   edot: PName, top: str) -> StarTranslation:
    """Translate a first-order formula to the infinitary forcing language.

    Equalities become equalities of checked index naturals; memberships
    become membership of the checked index pair in the relation name;
    an existential becomes a disjunction over indices below N (the desk
    truncation, recorded in the result), a universal the dual conjunction.
    Class predicates have no counterpart here and are rejected.
    """
    free = fo_free_vars(phi)
    if free and max(free) >= len(ns):
        raise ValueError(f"index sequence of length {len(ns)} does not cover v{max(free)}")
    if N < len(ns):
        raise ValueError("truncation bound must cover the index sequence")

    def nm(i: int) -> PName:
        return check_name(natural(i), top)

    def walk(f: FOFormula, ns: tuple[int, ...]) -> InfFormula:
        if isinstance(f, FOEq):
            return Eq(nm(ns[f.i]), nm(ns[f.j]))
        if isinstance(f, FOMem):
            return Mem(op_name(nm(ns[f.i]), nm(ns[f.j]), top), edot)
        if isinstance(f, FOPred):
            raise ValueError("class predicates cannot be star-translated")
        if isinstance(f, FONot):
            return Neg(walk(f.body, ns))
        if isinstance(f, FOAnd):
            return Conj(walk(p, ns) for p in f.parts)
        if isinstance(f, FOOr):
            return Disj(walk(p, ns) for p in f.parts)
        if isinstance(f, (FOEx, FOAll)):
            if f.var != len(ns):
                raise ValueError(
                    f"quantifier binds v{f.var} but the index sequence covers v0..v{len(ns) - 1}")
            ctor = Disj if isinstance(f, FOEx) else Conj
            return ctor(walk(f.body, ns + (i,)) for i in range(N))
        raise TypeError(f"not a first-order formula: {f!r}")

    return StarTranslation(walk(phi, tuple(ns)), N, tuple(ns))


def appropriate(ns: tuple[int, ...], xs: tuple[HFSet, ...]) -> bool:
    """Indices repeat exactly where the objects repeat."""
    if len(ns) != len(xs):
        raise ValueError("sequences must have equal length")
    return all((ns[i] == ns[j]) == (xs[i] == xs[j])
               for i in range(len(ns)) for j in range(len(ns)))


def lex_min_appropriate(xs: tuple[HFSet, ...]) -> tuple[int, ...]:
    """The pointwise-lexicographically least index sequence appropriate for xs."""
    ns: list[int] = []
    for k, x in enumerate(xs):
        for i in range(k):
            if xs[i] == x:
                ns.append(ns[i])
                break
        else:
            used = {ns[i] for i in range(k)}
            n = 0
            while n in used:
                n += 1
            ns.append(n)
    return tuple(ns)


# ---------------------------------------------------------------------------
# lifting a formula along a two-step iteration


def star_star_lift(phi: InfFormula, cond_map: Mapping[str, str]) -> InfFormula:
    """Replace every condition occurrence via cond_map, hereditarily.

    cond_map sends conditions of the second-step forcing to identifiers
    of the iteration (the pairs with trivial first coordinate). A
    condition without an image is not representable and errors.
    """
    from .names import rename_conditions

    mapping = dict(cond_map)

    def walk(f: InfFormula) -> InfFormula:
        if isinstance(f, InG):
            if f.cond not in mapping:
                raise PoolError(f"condition {f.cond!r} is not representable in the iteration")
            return InG(mapping[f.cond])
        if isinstance(f, Eq):
            return Eq(rename_conditions(f.left, mapping), rename_conditions(f.right, mapping))
        if isinstance(f, Mem):
            return Mem(rename_conditions(f.left, mapping), rename_conditions(f.right, mapping))
        if isinstance(f, Sub):
            return Sub(rename_conditions(f.left, mapping), rename_conditions(f.right, mapping))
        if isinstance(f, Neg):
            return Neg(walk(f.body))
        if isinstance(f, Conj):
            return Conj(walk(p) for p in f.parts)
        if isinstance(f, Disj):
            return Disj(walk(p) for p in f.parts)
        raise TypeError(f"not an infinitary formula: {f!r}")

    return walk(phi)
