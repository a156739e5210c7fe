"""Scenario execution: queries, lemma-verification suites, reports.

Each suite is a batch of independent checks on scenario-declared objects;
one record per item, ordered by item identifier, so a (scenario, seed)
pair produces a byte-identical text report.
"""

from __future__ import annotations

import json
import random
import time
from dataclasses import dataclass, field

from .dsl import Scenario
from .errors import ForcelabError
from .formulas import InG, nu_mu, translate_star, \
    lex_min_appropriate, fo_satisfies, FOEq, FOMem, FONot, FOOr, FOAnd, FOEx, FOAll
from .forcing import (
    NamePool,
    completion_setup,
    cone_generics,
    cone_of,
    forces_via_nu_mu,
    holds,
    semantic_forces,
    syntactic_forces_atomic,
    truth_lemma_check,
)
from .generate import atomic_formulas, sample_formulas
from .hf import format_set
from .names import evaluate, transport_quotient
from .orders import completion_isomorphism, minimal_classes, regular_open_algebra, \
    saturate_to_boolean, separative_quotient
from .zoo import (
    approachability_failures,
    approachability_instance,
    check_named_iteration,
    collapse,
    compose_generics,
    decode_E_F,
    decoding_is_isomorphism,
    friedman_poset,
    p_lex,
    proj_gen_ext_check,
)
from .generics import DenseSetSchedule, ScheduleProvider, cone, rasiowa_sikorski
from .names import condition_code

SUITE_ANCHORS = {
    "atomic-equivalence": "dense-set recursion for atomic forcing matches the cone oracle",
    "truth-lemma": "every statement true at a generic cone is forced from inside it",
    "nu-mu": "a formula holds exactly when its two reduction names evaluate equally",
    "boolean-values": "a condition forces an atom exactly when it embeds below its value",
    "completion-iso": "saturation and the regular open algebra agree over the forcing",
    "quotient-transfer": "atomic forcing survives the separative quotient with transported names",
    "approachability": "stratified projections satisfy their five clauses and transfer evaluation",
    "friedman-iso": "a scheduled generic decodes the ground membership relation faithfully",
    "varphi-star": "ground truth matches forcing the translated statement at the pinning condition",
    "two-step": "generic cones of the factors compose to generic cones of the iteration",
}


@dataclass
class Record:
    rid: str
    kind: str
    verdict: str   # PASS | FAIL | FORCED | REFUTED | VALUE | HEADER
    payload: str = ""
    millis: float = 0.0


@dataclass
class Report:
    records: list[Record] = field(default_factory=list)

    @property
    def failures(self) -> int:
        return sum(1 for r in self.records if r.verdict == "FAIL")

    def text(self, timings: bool = False) -> str:
        lines = []
        for r in self.records:
            if r.verdict == "HEADER":
                lines.append(f"SUITE {r.rid} :: {r.payload}")
                continue
            tail = f" {r.payload}" if r.payload else ""
            if timings:
                tail += f" [{r.millis:.1f}ms]"
            lines.append(f"RESULT {r.rid} {r.verdict}{tail}")
        return "\n".join(lines) + "\n"

    def jsonl(self, timings: bool = False) -> str:
        lines = []
        for r in self.records:
            obj = {"id": r.rid, "kind": r.kind, "verdict": r.verdict,
                   "payload": r.payload}
            if timings:
                obj["millis"] = round(r.millis, 1)
            lines.append(json.dumps(obj, sort_keys=True))
        return "\n".join(lines) + "\n"


def run(sc: Scenario, seed: int = 0, suites: list[str] | None = None,
        pool_rank: int = 2, max_size: int | None = None) -> Report:
    report = Report()
    for qid, form in sc.queries:
        t0 = time.perf_counter()
        try:
            rec = _run_query(sc, qid, form)
        except ForcelabError as exc:
            rec = Record(qid, form[0], "FAIL", f"error={exc}")
        rec.millis = (time.perf_counter() - t0) * 1000
        report.records.append(rec)
    for sid, form in sc.suites:
        kind = form[0]
        if suites and kind not in suites:
            continue
        report.records.append(Record(sid, kind, "HEADER", SUITE_ANCHORS[kind]))
        items = _run_suite(sc, sid, form, seed, pool_rank)
        report.records.extend(sorted(items, key=lambda r: r.rid))
    return report


def _run_query(sc: Scenario, qid: str, form: tuple) -> Record:
    kind = form[0]
    if kind == "forces":
        _, fid, cond, ref = form
        phi = sc.formulas[ref][1]
        verdict = semantic_forces(sc.forcing(fid).order, cond, phi)
        if verdict.forced:
            return Record(qid, kind, "FORCED")
        return Record(qid, kind, "REFUTED", f"witness={verdict.witness}")
    if kind == "forces-atomic":
        _, fid, cond, ref = form
        phi = sc.formulas[ref][1]
        ok = syntactic_forces_atomic(sc.forcing(fid).order, cond, phi)
        return Record(qid, kind, "FORCED" if ok else "REFUTED",
                      "" if ok else "by-recursion")
    if kind == "forces-fo":
        _, fid, cond, ref, pool_id = form[:5]
        phi = sc.formulas[ref][1]
        from .forcing import NamePool, forces_fo

        pool = NamePool.closure(_pool_names(sc, pool_id))
        assignment: dict[int, object] = {}
        env: dict[int, object] = {}
        for clause in form[5:]:
            target = assignment if clause[0] == "assign" else env
            for idx, nm in clause[1:]:
                target[int(idx)] = sc.names[nm][1]
        ok = forces_fo(sc.forcing(fid).order, cond, phi, pool,
                       assignment=assignment, env=env)
        return Record(qid, kind, "FORCED" if ok else "REFUTED",
                      "" if ok else "by-recursion")
    if kind == "decide":
        _, fid, ref = form
        phi = sc.formulas[ref][1]
        from .forcing import decidability_frontier

        frontier = decidability_frontier(sc.forcing(fid).order, phi)
        return Record(qid, kind, "VALUE", ",".join(frontier))
    if kind == "evaluate":
        _, fid, ref, (_tag, m) = form
        sigma = sc.names[ref][1]
        G = cone_of(sc.forcing(fid).order, m)
        return Record(qid, kind, "VALUE", format_set(evaluate(sigma, G)))
    if kind == "ro-size":
        _, fid = form
        B, _ = regular_open_algebra(sc.forcing(fid).order)
        return Record(qid, kind, "VALUE", str(len(B)))
    raise ForcelabError(f"unknown query kind {kind!r}")


def _suite_option(form: tuple, key: str, default: int) -> int:
    for item in form[1:]:
        if isinstance(item, tuple) and item[0] == key:
            return int(item[1])
    return default


def _suite_flag(form: tuple, key: str) -> str | None:
    for item in form[1:]:
        if isinstance(item, tuple) and item[0] == key:
            return item[1]
    return None


def _pool_names(sc: Scenario, pool_id: str):
    fid, refs = sc.pools[pool_id]
    return [sc.names[r][1] for r in refs]


def _run_suite(sc: Scenario, sid: str, form: tuple, seed: int,
               pool_rank: int = 2) -> list[Record]:
    kind = form[0]
    plain = [a for a in form[1:] if isinstance(a, str)]
    if kind == "atomic-equivalence":
        return _suite_atomic(sc, sid, plain[0], plain[1])
    if kind == "truth-lemma":
        return _suite_truth(sc, sid, plain[0], plain[1])
    if kind == "nu-mu":
        return _suite_numu(sc, sid, plain[0], plain[1],
                           _suite_option(form, "count", 40),
                           _suite_option(form, "depth", 2), seed)
    if kind == "boolean-values":
        return _suite_boolean(sc, sid, plain[0], plain[1])
    if kind == "completion-iso":
        return _suite_completion(sc, sid, plain[0])
    if kind == "quotient-transfer":
        return _suite_quotient(sc, sid, plain[0], plain[1])
    if kind == "approachability":
        return _suite_approach(sc, sid, int(plain[0]), int(plain[1]), plain[2],
                               _suite_flag(form, "corrupt"), pool_rank)
    if kind == "friedman-iso":
        return _suite_friedman(sc, sid, plain[0], int(plain[1]),
                               _suite_option(form, "seeds", 5), seed)
    if kind == "varphi-star":
        return _suite_varphi(sc, sid, plain[0],
                             _suite_option(form, "qdepth", 1),
                             _suite_option(form, "samples", 12), seed)
    if kind == "two-step":
        return _suite_twostep(sc, sid, plain[0], plain[1])
    raise ForcelabError(f"unknown suite kind {kind!r}")


def _suite_atomic(sc: Scenario, sid: str, fid: str, pool_id: str) -> list[Record]:
    P = sc.forcing(fid).order
    pool = _pool_names(sc, pool_id)
    out = []
    bad = 0
    total = 0
    for phi in atomic_formulas(P, pool):
        for p in P.carrier:
            total += 1
            if syntactic_forces_atomic(P, p, phi) != semantic_forces(P, p, phi).forced:
                bad += 1
    out.append(Record(f"{sid}.agreement", "atomic-equivalence",
                      "PASS" if bad == 0 else "FAIL",
                      f"checked={total} disagreements={bad}"))
    return out


def _suite_truth(sc: Scenario, sid: str, fid: str, pool_id: str) -> list[Record]:
    P = sc.forcing(fid).order
    pool = _pool_names(sc, pool_id)
    found, vacuous = 0, 0
    try:
        for phi in atomic_formulas(P, pool) + [InG(p) for p in P.carrier]:
            for G in cone_generics(P):
                w = truth_lemma_check(P, G, phi)
                if w is None:
                    vacuous += 1
                else:
                    found += 1
        verdict = "PASS"
        payload = f"witnessed={found} vacuous={vacuous}"
    except AssertionError as exc:
        verdict, payload = "FAIL", str(exc)
    return [Record(f"{sid}.witnesses", "truth-lemma", verdict, payload)]


def _suite_numu(sc: Scenario, sid: str, fid: str, pool_id: str,
                count: int, depth: int, seed: int) -> list[Record]:
    P = sc.forcing(fid).order
    pool = _pool_names(sc, pool_id)
    bad_eq, bad_forces, total = 0, 0, 0
    for phi in sample_formulas(P, pool, count, depth, seed):
        nu, mu = nu_mu(phi, P.top)
        for G in cone_generics(P):
            total += 1
            if holds(phi, G) != (evaluate(nu, G) == evaluate(mu, G)):
                bad_eq += 1
        for p in P.carrier:
            if forces_via_nu_mu(P, p, phi) != semantic_forces(P, p, phi).forced:
                bad_forces += 1
    ok = bad_eq == 0 and bad_forces == 0
    return [Record(f"{sid}.contract", "nu-mu", "PASS" if ok else "FAIL",
                   f"checked={total} eq-breaks={bad_eq} forcing-breaks={bad_forces}")]


def _suite_boolean(sc: Scenario, sid: str, fid: str, pool_id: str) -> list[Record]:
    P = sc.forcing(fid).order
    pool = _pool_names(sc, pool_id)
    setup = completion_setup(P)
    bad, total = 0, 0
    for phi in atomic_formulas(P, pool):
        value = setup.value(phi)
        for p in P.carrier:
            total += 1
            if setup.below(p, value) != semantic_forces(P, p, phi).forced:
                bad += 1
    return [Record(f"{sid}.bridge", "boolean-values",
                   "PASS" if bad == 0 else "FAIL",
                   f"checked={total} breaks={bad}")]


def _suite_completion(sc: Scenario, sid: str, fid: str) -> list[Record]:
    P = sc.forcing(fid).order
    B0, e0 = regular_open_algebra(P)
    B1, e1 = saturate_to_boolean(P)
    iso = completion_isomorphism(B0, e0, B1, e1)
    size_ok = len(B0) == 2 ** len(minimal_classes(P))
    ok = not hasattr(iso, "reason") and size_ok
    payload = f"|ro|={len(B0)} |saturated|={len(B1)}"
    if hasattr(iso, "reason"):
        payload += f" failure={iso.reason}"
    return [Record(f"{sid}.isomorphism", "completion-iso",
                   "PASS" if ok else "FAIL", payload)]


def _suite_quotient(sc: Scenario, sid: str, fid: str, pool_id: str) -> list[Record]:
    P = sc.forcing(fid).order
    pool = _pool_names(sc, pool_id)
    S, pi = separative_quotient(P)
    bad, total = 0, 0
    for phi in atomic_formulas(P, pool):
        ctor = type(phi)
        moved = ctor(transport_quotient(phi.left, pi), transport_quotient(phi.right, pi))
        for p in P.carrier:
            total += 1
            if semantic_forces(P, p, phi).forced != semantic_forces(S, pi(p), moved).forced:
                bad += 1
    return [Record(f"{sid}.transfer", "quotient-transfer",
                   "PASS" if bad == 0 else "FAIL",
                   f"checked={total} breaks={bad}")]


def _suite_approach(sc: Scenario, sid: str, n: int, lam: int, variant: str,
                    corrupt: str | None, pool_rank: int = 2) -> list[Record]:
    C = collapse(n, lam, variant)
    family = approachability_instance(C, lam, corrupt=corrupt)
    failures = approachability_failures(family)
    out = [Record(f"{sid}.clauses", "approachability",
                  "PASS" if not failures else "FAIL",
                  failures[0] if failures else f"strata={lam + 1}")]
    if corrupt:
        return out
    # evaluation transfer at the lowest useful stratum
    alpha = 1 if lam >= 2 else 0
    from .generate import name_pool

    sub = collapse(n, alpha, variant)
    pool = list(name_pool(sub.order, pool_rank))
    bad = 0
    for G in cone_generics(C.order):
        if not proj_gen_ext_check(family, alpha, G, pool):
            bad += 1
    out.append(Record(f"{sid}.evaluation", "approachability",
                      "PASS" if bad == 0 else "FAIL",
                      f"generics={len(cone_generics(C.order))} breaks={bad}"))
    return out


def _suite_friedman(sc: Scenario, sid: str, gid: str, N: int,
                    seeds: int, seed: int) -> list[Record]:
    model = sc.grounds[gid][0]
    from .zoo import FriedmanForcing, TOP_CONDITION

    out = []
    good = 0
    for k in range(seeds):
        rng = random.Random(f"{seed}:{k}")
        forcing = FriedmanForcing(model, N)
        chain = _friedman_schedule_run(forcing, rng)
        E, F = decode_E_F(chain)
        if decoding_is_isomorphism(model, E, F):
            good += 1
    out.append(Record(f"{sid}.decoding", "friedman-iso",
                      "PASS" if good == seeds else "FAIL",
                      f"runs={seeds} isomorphic={good}"))
    return out


def _friedman_schedule_run(forcing, rng: random.Random):
    """Drive a chain through the index sets and the range sets, shuffled."""
    from .zoo import TOP_CONDITION

    jobs = [("slot", n) for n in range(forcing.N)]
    jobs += [("value", x) for x in forcing.model]
    rng.shuffle(jobs)

    def provider(job) -> ScheduleProvider:
        kind, goal = job

        if kind == "slot":
            def member(p) -> bool:
                return goal in dict(p.f)

            def extend(p):
                if goal in dict(p.f):
                    return p
                used = set(dict(p.f).values())
                free = [x for x in forcing.model if x not in used]
                rng.shuffle(free)
                for x in free:
                    try:
                        return forcing.surjectivity_extension(p, x, fresh=goal)
                    except ForcelabError:
                        continue
                raise ForcelabError("no value fits the fresh index")

            return ScheduleProvider(f"slot-{goal}", member, extend)

        def member(p) -> bool:
            return goal in dict(p.f).values()

        def extend(p):
            if goal in dict(p.f).values():
                return p
            return forcing.surjectivity_extension(p, goal)

        return ScheduleProvider(f"value-{goal!r}", member, extend)

    schedule = DenseSetSchedule([provider(j) for j in jobs])
    chain = rasiowa_sikorski(forcing.le, TOP_CONDITION, schedule)
    return chain.chain


def _suite_varphi(sc: Scenario, sid: str, gid: str, qdepth: int,
                  samples: int, seed: int) -> list[Record]:
    model = sc.grounds[gid][0]
    N = len(model)
    FP = friedman_poset(model, N, with_edges=True)
    edot = FP.edot()
    top = FP.order.top
    rng = random.Random(f"varphi:{seed}")
    elems = list(model)
    bad, total = 0, 0
    for _ in range(samples):
        k = rng.choice((1, 2))
        phi = _random_fo(rng, qdepth, free=k)
        xs = tuple(rng.choice(elems) for _ in range(k))
        ns = lex_min_appropriate(xs)
        trans = translate_star(phi, ns, N, edot=edot, top=top)
        pid = FP.id_of(p_lex(xs))
        total += 1
        left = fo_satisfies(model, phi, dict(enumerate(xs)))
        right = semantic_forces(FP.order, pid, trans.formula).forced
        if left != right:
            bad += 1
    return [Record(f"{sid}.equivalence", "varphi-star",
                   "PASS" if bad == 0 else "FAIL",
                   f"checked={total} breaks={bad}")]


def _random_fo(rng: random.Random, qdepth: int, free: int):
    """A random normal-form first-order formula over the free variables."""

    def build(depth: int, avail: int, budget: int):
        if budget <= 0 or (depth <= 0 and rng.random() < 0.5):
            i, j = rng.randrange(avail), rng.randrange(avail)
            return FOEq(i, j) if rng.random() < 0.4 else FOMem(i, j)
        kind = rng.randrange(5)
        if kind == 0:
            return FONot(build(depth, avail, budget - 1))
        if kind == 1:
            return FOAnd((build(depth, avail, budget - 1),
                          build(depth, avail, budget - 1)))
        if kind == 2:
            return FOOr((build(depth, avail, budget - 1),
                         build(depth, avail, budget - 1)))
        if depth > 0:
            ctor = FOEx if kind == 3 else FOAll
            return ctor(avail, build(depth - 1, avail + 1, budget - 1))
        return build(depth, avail, budget - 1)

    return build(qdepth, free, 4)


def _suite_twostep(sc: Scenario, sid: str, fid: str, gid2: str) -> list[Record]:
    P = sc.forcing(fid).order
    Q = sc.forcing(gid2).order
    it, _ = check_named_iteration(P, Q)
    bad, total = 0, 0
    for mP in minimal_classes(P):
        G = cone_of(P, mP)
        for mQ in minimal_classes(Q):
            H = cone(Q, mQ)
            hv = frozenset(condition_code(Q, q) for q in H.conditions)
            composed = compose_generics(it, G, hv)
            total += 1
            if composed not in cone_generics(it.order):
                bad += 1
    return [Record(f"{sid}.composition", "two-step",
                   "PASS" if bad == 0 else "FAIL",
                   f"pairs={total} breaks={bad}")]
