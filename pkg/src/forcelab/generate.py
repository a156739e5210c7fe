"""Deterministic generator corpus: preorders, name pools, formula samples.

The acceptance batteries and the CLI suites both draw on these. Every
randomized choice goes through an explicit seed, so a (seed, size) pair
pins the whole corpus byte for byte.
"""

from __future__ import annotations

import random
from typing import Iterable

from .formulas import Conj, Disj, Eq, InfFormula, InG, Mem, Neg, Sub
from .hf import EMPTY, natural
from .names import PName, check_name
from .orders import Preorder


def all_preorders_up_to_3() -> list[Preorder]:
    """Every preorder with a weakest element on at most three conditions.

    Enumerated over fixed labels, so isomorphic copies with different
    orientations are kept; that is deliberate (they exercise identifier
    handling).
    """
    out: list[Preorder] = []
    for n in (1, 2, 3):
        labels = tuple(f"c{i}" for i in range(n))
        offdiag = [(a, b) for a in labels for b in labels if a != b]
        for mask in range(1 << len(offdiag)):
            le = {(a, a) for a in labels}
            le |= {offdiag[i] for i in range(len(offdiag)) if (mask >> i) & 1}
            if not _transitive(labels, le):
                continue
            tops = [t for t in labels if all((p, t) in le for p in labels)]
            if not tops:
                continue
            out.append(Preorder(labels, le, tops[0], _trusted=True))
    return out


def _transitive(labels, le) -> bool:
    return all((p, r) in le
               for (p, q) in le for (q2, r) in le if q == q2)


def named_classics() -> dict[str, Preorder]:
    mk = Preorder.from_generators
    return {
        "p3": mk(("one", "a", "b"), [("a", "one"), ("b", "one")], "one"),
        "chain3": mk(("one", "a", "b"), [("a", "one"), ("b", "a")], "one"),
        "antichain3": mk(("one", "a", "b", "c"),
                         [("a", "one"), ("b", "one"), ("c", "one")], "one"),
        "diamond": mk(("one", "x", "y", "z"),
                      [("x", "one"), ("y", "one"), ("z", "x"), ("z", "y")], "one"),
        "loop": mk(("one", "a", "b", "c"),
                   [("a", "one"), ("b", "one"), ("a", "b"), ("b", "a"), ("c", "one")],
                   "one"),
        "fork": mk(("one", "a", "b", "c"),
                   [("a", "one"), ("b", "a"), ("c", "a")], "one"),
    }


def random_preorder(rng: random.Random, size: int) -> Preorder:
    """A random preorder with designated top; sometimes non-antisymmetric."""
    labels = tuple(f"c{i}" for i in range(size))
    top = labels[0]
    pairs = []
    others = labels[1:]
    for a in others:
        pairs.append((a, top))
    for a in others:
        for b in others:
            if a != b and rng.random() < 0.3:
                pairs.append((a, b))
    if rng.random() < 0.3 and len(others) >= 2:
        a, b = rng.sample(others, 2)
        pairs += [(a, b), (b, a)]
    return Preorder.from_generators(labels, pairs, top)


def suite_preorders(count: int = 200, seed: int = 0) -> list[Preorder]:
    """The standard corpus: everything on <= 3 conditions, the classics,
    then seeded 4- and 5-condition preorders up to the requested count."""
    out = all_preorders_up_to_3()
    out.extend(named_classics().values())
    rng = random.Random(seed)
    while len(out) < count:
        out.append(random_preorder(rng, rng.choice((4, 5))))
    return out


def name_pool(P: Preorder, max_rank: int = 2) -> tuple[PName, ...]:
    """A small deterministic family of names of rank <= max_rank over P."""
    top = P.top
    zero = check_name(EMPTY, top)
    one = check_name(natural(1), top)
    pool: list[PName] = [zero, one]
    conds = [c for c in P.carrier if c != top] or [top]
    singles = []
    for c in conds[:2]:
        singles.append(PName(((zero, c),)))
    pool.extend(singles)
    if max_rank >= 2 and singles:
        c0 = conds[0]
        c1 = conds[1] if len(conds) > 1 else conds[0]
        pool.append(PName(((singles[0], c1), (zero, c0))))
        pool.append(PName(((singles[0], top),)))
    seen = {}
    for nm in pool:
        seen[nm.serial] = nm
    return tuple(seen.values())


def atomic_formulas(P: Preorder, pool: Iterable[PName]) -> list[InfFormula]:
    pool = list(pool)
    out: list[InfFormula] = []
    for i, s in enumerate(pool):
        for t in pool[i:]:
            out.append(Eq(s, t))
            out.append(Mem(s, t))
            out.append(Sub(s, t))
    return out


def sample_formula(rng: random.Random, P: Preorder, pool: list[PName],
                   depth: int, include_sub: bool = True) -> InfFormula:
    """One random infinitary formula of the given connective depth."""
    if depth <= 0:
        kind = rng.randrange(4 if include_sub else 3)
        if kind == 0:
            return InG(rng.choice(P.carrier))
        s, t = rng.choice(pool), rng.choice(pool)
        return (Eq, Mem, Sub)[kind - 1](s, t)
    kind = rng.randrange(3)
    if kind == 0:
        return Neg(sample_formula(rng, P, pool, depth - 1, include_sub))
    arity = rng.randrange(0, 4) if rng.random() < 0.2 else rng.randrange(1, 4)
    parts = tuple(sample_formula(rng, P, pool, depth - 1, include_sub)
                  for _ in range(arity))
    return Conj(parts) if kind == 1 else Disj(parts)


def sample_formulas(P: Preorder, pool: Iterable[PName], count: int,
                    depth: int, seed: int = 0,
                    include_sub: bool = True) -> list[InfFormula]:
    rng = random.Random(f"{seed}:{len(P.carrier)}:{count}")
    pool = list(pool)
    return [sample_formula(rng, P, pool, rng.randrange(depth + 1), include_sub)
            for _ in range(count)]
