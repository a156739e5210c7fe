"""The scenario language: s-expressions declaring grounds, forcings,
names, formulas, pools, queries and suites.

Whitespace-insensitive, comments start with ';'. Set literals use braces
with the nat:n sugar. A parsed scenario re-serializes to text that parses
back to an equal scenario.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import DslError
from .formulas import (
    Conj,
    Disj,
    Eq,
    FOAll,
    FOAnd,
    FOEq,
    FOEx,
    FOFormula,
    FOMem,
    FONot,
    FOOr,
    FOPred,
    InfFormula,
    InG,
    Mem,
    Neg,
    Sub,
    fo_normal_form,
)
from .hf import GroundModel, format_set, parse_set_literal, vstage
from .names import PName, check_name, gdot_name, op_name, validate_name
from .orders import Preorder
from .zoo import CollapseForcing, FriedmanPoset, collapse, friedman_poset

# ---------------------------------------------------------------------------
# reader


@dataclass
class Sym:
    text: str
    line: int
    col: int

    def __repr__(self) -> str:
        return self.text


def tokenize(text: str):
    i, line, col = 0, 1, 1
    n = len(text)
    while i < n:
        c = text[i]
        if c == "\n":
            i += 1
            line += 1
            col = 1
        elif c in " \t\r":
            i += 1
            col += 1
        elif c == ";":
            while i < n and text[i] != "\n":
                i += 1
        elif c in "()":
            yield (c, line, col)
            i += 1
            col += 1
        elif c == "{":
            depth, j = 0, i
            while j < n:
                if text[j] == "{":
                    depth += 1
                elif text[j] == "}":
                    depth -= 1
                    if depth == 0:
                        break
                elif text[j] == "\n":
                    raise DslError("set literal spans a line break", line, col)
                j += 1
            if depth != 0:
                raise DslError("unterminated set literal", line, col)
            yield (text[i:j + 1], line, col)
            col += j + 1 - i
            i = j + 1
        elif c == "}":
            raise DslError("unmatched '}'", line, col)
        else:
            j = i
            while j < n and text[j] not in " \t\r\n();{}":
                j += 1
            yield (text[i:j], line, col)
            col += j - i
            i = j
    yield (None, line, col)


def read_forms(text: str) -> list:
    tokens = list(tokenize(text))
    pos = 0

    def parse():
        nonlocal pos
        tok, line, col = tokens[pos]
        pos += 1
        if tok == "(":
            items = []
            while True:
                nxt, l2, c2 = tokens[pos]
                if nxt is None:
                    raise DslError("unterminated form", line, col)
                if nxt == ")":
                    pos += 1
                    return items
                items.append(parse())
        if tok == ")":
            raise DslError("unexpected ')'", line, col)
        if tok is None:
            raise DslError("unexpected end of input", line, col)
        return Sym(tok, line, col)

    forms = []
    while tokens[pos][0] is not None:
        form = parse()
        if not isinstance(form, list):
            raise DslError("top level must be a parenthesized form",
                           form.line, form.col)
        forms.append(form)
    return forms


def _head(form: list) -> str:
    if not form or not isinstance(form[0], Sym):
        raise DslError("form needs a keyword head")
    return form[0].text


def _sym(x, what: str = "symbol") -> str:
    if not isinstance(x, Sym):
        raise DslError(f"expected a {what}")
    return x.text


def _int(x) -> int:
    s = _sym(x, "number")
    try:
        return int(s)
    except ValueError:
        raise DslError(f"expected a number, got {s!r}",
                       x.line, x.col) from None


# ---------------------------------------------------------------------------
# scenario model


@dataclass
class ForcingDecl:
    name: str
    kind: str                # explicit | collapse | friedman | iterate
    order: Preorder
    sexp: tuple              # serialization payload
    collapse_obj: CollapseForcing | None = None
    friedman_obj: FriedmanPoset | None = None
    iteration_obj: object | None = None


@dataclass
class Scenario:
    grounds: dict[str, tuple[GroundModel, tuple]] = field(default_factory=dict)
    forcings: dict[str, ForcingDecl] = field(default_factory=dict)
    names: dict[str, tuple[str, PName, tuple]] = field(default_factory=dict)
    # formula id -> (forcing id, formula, serialization, "inf" | "fo")
    formulas: dict[str, tuple] = field(default_factory=dict)
    pools: dict[str, tuple[str, tuple[str, ...]]] = field(default_factory=dict)
    # generic id -> (forcing id, explicit filter conditions, serialization)
    generics: dict[str, tuple[str, frozenset, tuple]] = field(default_factory=dict)
    queries: list[tuple[str, tuple]] = field(default_factory=list)
    suites: list[tuple[str, tuple]] = field(default_factory=list)

    def forcing(self, fid: str) -> ForcingDecl:
        if fid not in self.forcings:
            raise DslError(f"unknown forcing {fid!r}")
        return self.forcings[fid]

    def serialize(self) -> str:
        out = []
        for gid, (_, sexp) in self.grounds.items():
            out.append(_render(("ground", gid) + sexp))
        for fid, decl in self.forcings.items():
            out.append(_render(("forcing", fid) + decl.sexp))
        for nid, (fid, _, sexp) in self.names.items():
            out.append(_render(("name", nid, fid, sexp)))
        for pid, (fid, _, sexp, _layer) in self.formulas.items():
            out.append(_render(("formula", pid, fid, sexp)))
        for pid, (fid, nms) in self.pools.items():
            out.append(_render(("pool", pid, fid, tuple(nms))))
        for gid, (_, _, sexp) in self.generics.items():
            out.append(_render(("generic", gid) + sexp))
        for qid, sexp in self.queries:
            out.append(_render(("query", qid, sexp)))
        for sid, sexp in self.suites:
            out.append(_render(("suite", sid, sexp)))
        return "\n".join(out) + "\n"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Scenario):
            return NotImplemented
        return self.serialize() == other.serialize()


def _render(x) -> str:
    if isinstance(x, tuple):
        return "(" + " ".join(_render(i) for i in x) + ")"
    return str(x)


# ---------------------------------------------------------------------------
# loading


def parse(text: str) -> Scenario:
    sc = Scenario()
    for form in read_forms(text):
        head = _head(form)
        try:
            if head == "ground":
                _load_ground(sc, form)
            elif head == "forcing":
                _load_forcing(sc, form)
            elif head == "name":
                _load_name(sc, form)
            elif head == "formula":
                _load_formula(sc, form)
            elif head == "pool":
                _load_pool(sc, form)
            elif head == "generic":
                _load_generic(sc, form)
            elif head == "query":
                _load_query(sc, form)
            elif head == "suite":
                _load_suite(sc, form)
            else:
                raise DslError(f"unknown declaration {head!r}",
                               form[0].line, form[0].col)
        except DslError:
            raise
        except Exception as exc:
            raise DslError(f"in ({head} ...): {exc}",
                           form[0].line, form[0].col) from exc
    return sc


def _load_ground(sc: Scenario, form: list) -> None:
    _, gid, body = form[0], _sym(form[1]), form[2]
    kind = _head(body)
    if kind == "vstage":
        k = _int(body[1])
        sc.grounds[gid] = (vstage(k), (("vstage", str(k)),))
    elif kind == "elems":
        sets = [parse_set_literal(_sym(s, "set literal")) for s in body[1:]]
        model = GroundModel(sets)
        sexp = (("elems",) + tuple(format_set(x) for x in model.carrier),)
        sc.grounds[gid] = (model, sexp)
    else:
        raise DslError(f"unknown ground form {kind!r}")


def _load_forcing(sc: Scenario, form: list) -> None:
    fid = _sym(form[1])
    body = form[2:]
    first = _head(body[0])
    if first == "collapse":
        n, lam, variant = _int(body[0][1]), _int(body[0][2]), _sym(body[0][3])
        C = collapse(n, lam, variant)
        sc.forcings[fid] = ForcingDecl(fid, "collapse", C.order,
                                       (("collapse", str(n), str(lam), variant),),
                                       collapse_obj=C)
        return
    if first == "friedman":
        ground_arg = body[0][1]
        if isinstance(ground_arg, list):
            if _head(ground_arg) != "vstage":
                raise DslError("friedman wants a ground id or (vstage k)")
            model = vstage(_int(ground_arg[1]))
            gspec = ("vstage", _sym(ground_arg[1]))
        else:
            gid = _sym(ground_arg)
            if gid not in sc.grounds:
                raise DslError(f"unknown ground {gid!r}")
            model = sc.grounds[gid][0]
            gspec = gid
        N = _int(body[0][2])
        FP = friedman_poset(model, N, with_edges=True)
        sc.forcings[fid] = ForcingDecl(fid, "friedman", FP.order,
                                       (("friedman", gspec, str(N)),),
                                       friedman_obj=FP)
        return
    if first == "iterate":
        base_id = _sym(body[0][1])
        base = sc.forcing(base_id).order
        dom_ref, ord_ref = _sym(body[0][2]), _sym(body[0][3])
        for ref in (dom_ref, ord_ref):
            if ref not in sc.names or sc.names[ref][0] != base_id:
                raise DslError(f"unknown name {ref!r} for forcing {base_id!r}")
        pool_form = body[0][4]
        if _head(pool_form) != "pool":
            raise DslError("iterate wants (pool name ...)")
        pool_refs = tuple(_sym(x) for x in pool_form[1:])
        for ref in pool_refs:
            if ref not in sc.names or sc.names[ref][0] != base_id:
                raise DslError(f"unknown pool name {ref!r} for forcing {base_id!r}")
        from .forcing import NamePool
        from .zoo import two_step

        pool = NamePool.closure(sc.names[r][1] for r in pool_refs)
        it = two_step(base, sc.names[dom_ref][1], sc.names[ord_ref][1], pool,
                      top_name=sc.names[pool_refs[0]][1])
        sc.forcings[fid] = ForcingDecl(
            fid, "iterate", it.order,
            (("iterate", base_id, dom_ref, ord_ref, ("pool",) + pool_refs),),
            iteration_obj=it)
        return
    elems: tuple[str, ...] = ()
    pairs: list[tuple[str, str]] = []
    top = None
    for clause in body:
        kind = _head(clause)
        if kind == "elems":
            elems = tuple(_sym(e) for e in clause[1:])
        elif kind == "le":
            for pair in clause[1:]:
                if not isinstance(pair, list) or len(pair) != 2:
                    raise DslError("le clause wants (p q) pairs")
                pairs.append((_sym(pair[0]), _sym(pair[1])))
        elif kind == "top":
            top = _sym(clause[1])
        else:
            raise DslError(f"unknown forcing clause {kind!r}")
    if top is None or not elems:
        raise DslError("explicit forcing needs (elems ...) and (top t)")
    order = Preorder.from_generators(elems, pairs, top)
    sexp = (("elems",) + elems,
            ("le",) + tuple((p, q) for p, q in pairs),
            ("top", top))
    sc.forcings[fid] = ForcingDecl(fid, "explicit", order, sexp)


def _name_expr(sc: Scenario, fid: str, expr) -> tuple[PName, tuple]:
    order = sc.forcing(fid).order
    if isinstance(expr, Sym):
        ref = expr.text
        if ref not in sc.names:
            raise DslError(f"unknown name {ref!r}", expr.line, expr.col)
        ref_fid, nm, _ = sc.names[ref]
        if ref_fid != fid:
            raise DslError(f"name {ref!r} lives on forcing {ref_fid!r}, not {fid!r}",
                           expr.line, expr.col)
        return nm, ref
    kind = _head(expr)
    if kind == "check":
        x = parse_set_literal(_sym(expr[1], "set literal"))
        return check_name(x, order.top), ("check", format_set(x))
    if kind == "gdot":
        return gdot_name(order), ("gdot",)
    if kind == "op":
        left, lsexp = _name_expr(sc, fid, expr[1])
        right, rsexp = _name_expr(sc, fid, expr[2])
        return op_name(left, right, order.top), ("op", lsexp, rsexp)
    if kind == "pairs":
        entries = []
        sexps = []
        for pair in expr[1:]:
            if not isinstance(pair, list) or len(pair) != 2:
                raise DslError("pairs clause wants (name-expr cond) entries")
            sub, subsexp = _name_expr(sc, fid, pair[0])
            cond = _sym(pair[1])
            entries.append((sub, cond))
            sexps.append((subsexp, cond))
        return PName(entries), ("pairs",) + tuple(sexps)
    raise DslError(f"unknown name constructor {kind!r}")


def _load_name(sc: Scenario, form: list) -> None:
    nid, fid = _sym(form[1]), _sym(form[2])
    sc.forcing(fid)
    nm, sexp = _name_expr(sc, fid, form[3])
    validate_name(sc.forcing(fid).order, nm)
    sc.names[nid] = (fid, nm, sexp)


def _is_var(x) -> bool:
    return isinstance(x, Sym) and len(x.text) > 1 and x.text[0] == "v" \
        and x.text[1:].isdigit()


def _var(x) -> int:
    return int(_sym(x)[1:])


def _formula_expr(sc: Scenario, fid: str, expr):
    """Parse a formula; returns (formula, serialization, "inf" | "fo").

    Atoms over names build infinitary formulas; atoms over variables
    (v0, v1, ...) build first-order ones, closed under the quantifiers.
    The two layers do not mix inside one formula.
    """
    if isinstance(expr, Sym):
        ref = expr.text
        if ref not in sc.formulas:
            raise DslError(f"unknown formula {ref!r}", expr.line, expr.col)
        ref_fid, phi, _, layer = sc.formulas[ref]
        if ref_fid != fid:
            raise DslError(f"formula {ref!r} lives on forcing {ref_fid!r}")
        return phi, ref, layer
    kind = _head(expr)
    if kind == "ing":
        cond = _sym(expr[1])
        if cond not in sc.forcing(fid).order:
            raise DslError(f"unknown condition {cond!r}")
        return InG(cond), ("ing", cond), "inf"
    if kind in ("eq", "mem", "sub"):
        if _is_var(expr[1]) or _is_var(expr[2]):
            if not (_is_var(expr[1]) and _is_var(expr[2])):
                raise DslError("an atom relates two names or two variables, not a mix")
            if kind == "sub":
                raise DslError("the first-order layer has no subset atom")
            ctor = FOEq if kind == "eq" else FOMem
            return (ctor(_var(expr[1]), _var(expr[2])),
                    (kind, _sym(expr[1]), _sym(expr[2])), "fo")
        left, lsexp = _name_expr(sc, fid, expr[1])
        right, rsexp = _name_expr(sc, fid, expr[2])
        ctor = {"eq": Eq, "mem": Mem, "sub": Sub}[kind]
        return ctor(left, right), (kind, lsexp, rsexp), "inf"
    if kind == "pred":
        if not _is_var(expr[1]):
            raise DslError("pred wants a variable and a predicate index")
        return (FOPred(_var(expr[1]), _int(expr[2])),
                ("pred", _sym(expr[1]), str(_int(expr[2]))), "fo")
    if kind == "not":
        body, bsexp, layer = _formula_expr(sc, fid, expr[1])
        ctor = FONot if layer == "fo" else Neg
        return ctor(body), ("not", bsexp), layer
    if kind in ("and", "or"):
        parts = [_formula_expr(sc, fid, e) for e in expr[1:]]
        layers = {layer for _, _, layer in parts} or {"inf"}
        if len(layers) > 1:
            raise DslError("cannot mix name atoms and variable atoms in one formula")
        layer = layers.pop()
        if layer == "fo":
            ctor = FOAnd if kind == "and" else FOOr
        else:
            ctor = Conj if kind == "and" else Disj
        return (ctor(tuple(p for p, _, _ in parts)),
                (kind,) + tuple(s for _, s, _ in parts), layer)
    if kind in ("ex", "all"):
        k = _int(expr[1])
        body, bsexp, layer = _formula_expr(sc, fid, expr[2])
        if layer != "fo":
            raise DslError("quantifiers belong to the first-order layer")
        ctor = FOEx if kind == "ex" else FOAll
        return ctor(k, body), (kind, str(k), bsexp), "fo"
    raise DslError(f"unknown formula constructor {kind!r}")


def _load_formula(sc: Scenario, form: list) -> None:
    pid, fid = _sym(form[1]), _sym(form[2])
    phi, sexp, layer = _formula_expr(sc, fid, form[3])
    if layer == "fo" and not fo_normal_form(phi):
        raise DslError(f"formula {pid!r} is not in quantifier normal form")
    sc.formulas[pid] = (fid, phi, sexp, layer)


def _load_pool(sc: Scenario, form: list) -> None:
    pid, fid = _sym(form[1]), _sym(form[2])
    sc.forcing(fid)
    refs = tuple(_sym(e) for e in form[3])
    for ref in refs:
        if ref not in sc.names:
            raise DslError(f"unknown name {ref!r} in pool {pid!r}")
        if sc.names[ref][0] != fid:
            raise DslError(f"pool {pid!r} mixes forcings")
    sc.pools[pid] = (fid, refs)


def _load_generic(sc: Scenario, form: list) -> None:
    """(generic G (forcing F) (schedule (value 0) ...) (start p) (seed s))

    aims a descending chain through the named dense sets and stores the
    cone over the final condition. Collapse forcings know (value a) and
    (slot n) sets; the relation-decoding forcing knows (slot n) and
    (range X) sets; explicit forcings take an empty schedule.
    """
    import random as _random

    gid = _sym(form[1])
    fid = None
    schedule_forms: list = []
    start = None
    seed = 0
    sexp: list = []
    for clause in form[2:]:
        tag = _head(clause)
        if tag == "forcing":
            fid = _sym(clause[1])
            sexp.append(("forcing", fid))
        elif tag == "schedule":
            schedule_forms = clause[1:]
            sexp.append(("schedule",)
                        + tuple((_head(c), _sym(c[1])) for c in schedule_forms))
        elif tag == "start":
            start = _sym(clause[1])
            sexp.append(("start", start))
        elif tag == "seed":
            seed = _int(clause[1])
            sexp.append(("seed", str(seed)))
        else:
            raise DslError(f"unknown generic clause {tag!r}")
    if fid is None:
        raise DslError("generic needs a (forcing F) clause")
    decl = sc.forcing(fid)
    from .generics import DenseSetSchedule, rasiowa_sikorski

    if decl.kind == "collapse":
        from .zoo import collapse_dense_sets

        family = collapse_dense_sets(decl.collapse_obj)
        providers = []
        for c in schedule_forms:
            tag, arg = _head(c), _int(c[1])
            if tag == "value":
                providers.append(family.value_sets[arg])
            elif tag == "slot":
                providers.append(family.slot_sets[arg])
            else:
                raise DslError(f"collapse schedules know value and slot, not {tag!r}")
        start_id = start or decl.order.top
        chain = rasiowa_sikorski(decl.order.le, start_id, DenseSetSchedule(providers))
        generator = chain.generator
    elif decl.kind == "friedman":
        FP = decl.friedman_obj
        rng = _random.Random(f"generic:{gid}:{seed}")
        providers = _friedman_providers(FP, schedule_forms, rng)
        start_cond = FP.condition_of[start] if start else FP.forcing.top
        chain = rasiowa_sikorski(FP.forcing.le, start_cond,
                                 DenseSetSchedule(providers))
        generator = FP.id_of(chain.generator)
    else:
        if schedule_forms:
            raise DslError(f"{decl.kind} forcings take an empty schedule")
        generator = start or decl.order.top
    conds = frozenset(q for q in decl.order.carrier
                      if decl.order.le(generator, q))
    sc.generics[gid] = (fid, conds, tuple(sexp))


def _friedman_providers(FP, schedule_forms, rng):
    from .generics import ScheduleProvider
    from .hf import parse_set_literal

    model = FP.forcing.model
    providers = []
    for c in schedule_forms:
        tag = _head(c)
        if tag == "slot":
            n = _int(c[1])

            def member(p, n=n) -> bool:
                return n in dict(p.f)

            def extend(p, n=n):
                if n in dict(p.f):
                    return p
                used = set(dict(p.f).values())
                free = [x for x in model if x not in used]
                rng.shuffle(free)
                for x in free:
                    try:
                        return FP.forcing.surjectivity_extension(p, x, fresh=n)
                    except Exception:
                        continue
                raise DslError(f"no value fits index {n}")

            providers.append(ScheduleProvider(f"slot-{n}", member, extend))
        elif tag == "range":
            x = parse_set_literal(_sym(c[1], "set literal"))

            def member(p, x=x) -> bool:
                return x in dict(p.f).values()

            def extend(p, x=x):
                if x in dict(p.f).values():
                    return p
                return FP.forcing.surjectivity_extension(p, x)

            providers.append(ScheduleProvider(f"range-{x!r}", member, extend))
        else:
            raise DslError(f"decoding-forcing schedules know slot and range, not {tag!r}")
    return providers


_QUERY_KINDS = ("forces", "forces-atomic", "forces-fo", "decide", "evaluate",
                "ro-size")


def _formula_ref(sc: Scenario, fid: str, x, layer: str) -> str:
    ref = _sym(x, "formula reference")
    if ref not in sc.formulas or sc.formulas[ref][0] != fid:
        raise DslError(f"unknown formula {ref!r} for forcing {fid!r}")
    if sc.formulas[ref][3] != layer:
        raise DslError(f"formula {ref!r} is not in the {layer} layer")
    return ref


def _load_query(sc: Scenario, form: list) -> None:
    qid = _sym(form[1])
    body = form[2]
    kind = _head(body)
    if kind not in _QUERY_KINDS:
        raise DslError(f"unknown query kind {kind!r}")
    if kind in ("forces", "forces-atomic"):
        fid, cond = _sym(body[1]), _sym(body[2])
        order = sc.forcing(fid).order
        if cond not in order:
            raise DslError(f"unknown condition {cond!r}")
        ref = _formula_ref(sc, fid, body[3], "inf")
        sc.queries.append((qid, (kind, fid, cond, ref)))
    elif kind == "forces-fo":
        fid, cond = _sym(body[1]), _sym(body[2])
        if cond not in sc.forcing(fid).order:
            raise DslError(f"unknown condition {cond!r}")
        ref = _formula_ref(sc, fid, body[3], "fo")
        pool = _sym(body[4])
        if pool not in sc.pools or sc.pools[pool][0] != fid:
            raise DslError(f"unknown pool {pool!r} for forcing {fid!r}")
        binds: list[tuple] = []
        for clause in body[5:]:
            tag = _head(clause)
            if tag not in ("assign", "env"):
                raise DslError(f"unknown forces-fo clause {tag!r}")
            pairs = []
            for pair in clause[1:]:
                if not isinstance(pair, list) or len(pair) != 2:
                    raise DslError(f"{tag} wants (index name) pairs")
                idx = _int(pair[0])
                nm = _sym(pair[1])
                if nm not in sc.names or sc.names[nm][0] != fid:
                    raise DslError(f"unknown name {nm!r} for forcing {fid!r}")
                pairs.append((str(idx), nm))
            binds.append((tag,) + tuple(pairs))
        sc.queries.append((qid, (kind, fid, cond, ref, pool) + tuple(binds)))
    elif kind == "decide":
        fid = _sym(body[1])
        sc.forcing(fid)
        ref = _formula_ref(sc, fid, body[2], "inf")
        sc.queries.append((qid, (kind, fid, ref)))
    elif kind == "evaluate":
        fid, ref = _sym(body[1]), _sym(body[2])
        sc.forcing(fid)
        if ref not in sc.names or sc.names[ref][0] != fid:
            raise DslError(f"unknown name {ref!r} for forcing {fid!r}")
        cone_form = body[3]
        if _head(cone_form) != "cone":
            raise DslError("evaluate wants (cone m)")
        m = _sym(cone_form[1])
        if m not in sc.forcing(fid).order:
            raise DslError(f"unknown condition {m!r}")
        sc.queries.append((qid, (kind, fid, ref, ("cone", m))))
    elif kind == "ro-size":
        fid = _sym(body[1])
        sc.forcing(fid)
        sc.queries.append((qid, (kind, fid)))


SUITE_KINDS = ("atomic-equivalence", "truth-lemma", "nu-mu", "boolean-values",
               "completion-iso", "quotient-transfer", "approachability",
               "friedman-iso", "varphi-star", "two-step")


def _load_suite(sc: Scenario, form: list) -> None:
    sid = _sym(form[1])
    body = form[2]
    kind = _head(body)
    if kind not in SUITE_KINDS:
        raise DslError(f"unknown suite kind {kind!r}")
    args: list = []
    for item in body[1:]:
        if isinstance(item, Sym):
            args.append(item.text)
        else:
            args.append((_head(item),) + tuple(_sym(x) for x in item[1:]))
    # resolve forcing/pool references now so load fails early
    sexp = (kind,) + tuple(args)
    _validate_suite(sc, sexp)
    sc.suites.append((sid, sexp))


def _validate_suite(sc: Scenario, sexp: tuple) -> None:
    kind = sexp[0]
    plain = [a for a in sexp[1:] if isinstance(a, str)]
    if kind in ("atomic-equivalence", "truth-lemma", "nu-mu", "boolean-values",
                "quotient-transfer"):
        fid, pool = plain[0], plain[1]
        sc.forcing(fid)
        if pool not in sc.pools or sc.pools[pool][0] != fid:
            raise DslError(f"unknown pool {pool!r} for forcing {fid!r}")
    elif kind == "completion-iso":
        sc.forcing(plain[0])
    elif kind == "two-step":
        sc.forcing(plain[0])
        sc.forcing(plain[1])
    elif kind == "approachability":
        if len(plain) < 3:
            raise DslError("approachability wants slots, height, variant")
        int(plain[0]), int(plain[1])
        if plain[2] not in ("plain", "star", "geq"):
            raise DslError(f"unknown variant {plain[2]!r}")
    elif kind == "friedman-iso":
        gid = plain[0]
        if gid not in sc.grounds:
            raise DslError(f"unknown ground {gid!r}")
        int(plain[1])
    elif kind == "varphi-star":
        gid = plain[0]
        if gid not in sc.grounds:
            raise DslError(f"unknown ground {gid!r}")
