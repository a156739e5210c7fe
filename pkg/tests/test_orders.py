import itertools

import pytest

from forcelab.errors import OrderError, SeparativityError, UnknownConditionError
from forcelab.orders import (
    FiniteBooleanAlgebra,
    Preorder,
    add_negation,
    add_supremum,
    completion_isomorphism,
    is_antichain,
    is_complete_subforcing,
    is_dense,
    is_dense_below,
    is_maximal_antichain,
    is_predense_below,
    is_separative,
    minimal_classes,
    regular_downsets_bruteforce,
    regular_open_algebra,
    ro_downset,
    saturate_to_boolean,
    separative_quotient,
)


def preorders_isomorphic(P: Preorder, Q: Preorder) -> bool:
    if len(P.carrier) != len(Q.carrier):
        return False
    for perm in itertools.permutations(Q.carrier):
        f = dict(zip(P.carrier, perm))
        if all(P.le(a, b) == Q.le(f[a], f[b]) for a in P.carrier for b in P.carrier):
            return True
    return False


class TestPreorder:
    def test_from_generators_closes(self):
        P = Preorder.from_generators(("one", "a", "b"), [("b", "a"), ("a", "one")], "one")
        assert P.le("b", "one")

    def test_rejects_missing_top(self):
        with pytest.raises(OrderError):
            Preorder(("a", "b"), [("a", "a"), ("b", "b")], "a")

    def test_rejects_unknown_ids(self):
        with pytest.raises(UnknownConditionError):
            Preorder(("a",), [("a", "a"), ("a", "z")], "a")

    def test_rejects_intransitive(self):
        with pytest.raises(OrderError):
            Preorder(("one", "a", "b", "c"),
                     [("one", "one"), ("a", "a"), ("b", "b"), ("c", "c"),
                      ("a", "one"), ("b", "one"), ("c", "one"),
                      ("c", "b"), ("b", "a")],  # (c,a) missing
                     "one")


class TestDensity:
    def test_atoms_dense(self, p3):
        assert is_dense(p3, ("a", "b"))

    def test_top_alone_not_dense(self, p3):
        assert not is_dense(p3, ("one",))

    def test_top_dense_when_everything_equivalent(self):
        P = Preorder.from_generators(("one", "a"), [("a", "one"), ("one", "a")], "one")
        assert is_dense(P, ("one",))

    def test_single_atom_not_dense(self, p3):
        assert not is_dense(p3, ("a",))

    def test_dense_below(self, p3):
        assert is_dense_below(p3, ("a",), "a")
        assert not is_dense_below(p3, ("a",), "one")

    def test_exhaustive_definition_unfold(self, small_suite):
        # oracle: the quantifier form, re-evaluated from scratch
        for P in small_suite[:40]:
            for mask in range(1 << len(P.carrier)):
                D = tuple(c for i, c in enumerate(P.carrier) if (mask >> i) & 1)
                want = all(any(P.le(d, q) for d in D) for q in P.carrier)
                assert is_dense(P, D) == want


class TestPredense:
    def test_atoms_predense_below_top(self, p3):
        assert is_predense_below(p3, ("a", "b"), "one")

    def test_self_predense(self, p3):
        assert is_predense_below(p3, ("a",), "a")

    def test_single_atom_not_predense_below_top(self, p3):
        assert not is_predense_below(p3, ("a",), "one")


class TestAntichains:
    def test_two_atoms(self, p3):
        assert is_antichain(p3, ("a", "b"))
        assert is_maximal_antichain(p3, ("a", "b"))

    def test_top_is_maximal(self, p3):
        assert is_maximal_antichain(p3, ("one",))

    def test_compatible_pair_is_not(self, p3):
        assert not is_antichain(p3, ("a", "one"))


class TestSeparative:
    def test_p3(self, p3):
        assert is_separative(p3)

    def test_chain_is_not(self, chain2):
        assert not is_separative(chain2)

    def test_single(self, single):
        assert is_separative(single)


class TestSeparativeQuotient:
    def test_chain_collapses(self, chain2):
        S, pi = separative_quotient(chain2)
        assert len(S.carrier) == 1
        assert pi("one") == pi("a")

    def test_p3_unchanged(self, p3):
        S, _ = separative_quotient(p3)
        assert preorders_isomorphic(S, p3)

    def test_postcondition_on_suite(self, small_suite):
        for P in small_suite:
            S, pi = separative_quotient(P)
            assert is_separative(S) and S.is_antisymmetric()
            for p in P.carrier:
                assert pi(p) in S.carrier

    def test_idempotent_up_to_isomorphism(self, small_suite):
        for P in small_suite[:25]:
            S, _ = separative_quotient(P)
            S2, _ = separative_quotient(S)
            assert preorders_isomorphic(S, S2)

    def test_order_preserving(self, small_suite):
        for P in small_suite[:25]:
            S, pi = separative_quotient(P)
            for p in P.carrier:
                for q in P.carrier:
                    if P.le(p, q):
                        assert S.le(pi(p), pi(q))


class TestMinimalClasses:
    def test_p3(self, p3):
        assert minimal_classes(p3) == ("a", "b")

    def test_single(self, single):
        assert minimal_classes(single) == ("one",)

    def test_chain(self, chain3):
        assert minimal_classes(chain3) == ("b",)

    def test_definition(self, small_suite):
        for P in small_suite[:40]:
            mins = minimal_classes(P)
            for m in mins:
                assert all(P.le(m, d) for d in P.below(m))
            for m, m2 in itertools.combinations(mins, 2):
                assert not P.equivalent(m, m2)


class TestRegularOpen:
    def test_p3_size(self, p3):
        B, _ = regular_open_algebra(p3)
        assert len(B) == 4

    def test_single(self, single):
        B, _ = regular_open_algebra(single)
        assert len(B) == 2

    def test_chain_embedding_not_injective(self, chain2):
        B, e = regular_open_algebra(chain2)
        assert len(B) == 2
        assert e["one"] == e["a"]

    def test_against_bruteforce(self, small_suite):
        # second route: enumerate regular down-sets directly
        for P in small_suite[:40]:
            mins = minimal_classes(P)
            from_min = {frozenset(ro_downset(P, frozenset(S)))
                        for k in range(len(mins) + 1)
                        for S in itertools.combinations(mins, k)}
            assert from_min == regular_downsets_bruteforce(P)

    def test_embedding_laws(self, small_suite):
        for P in small_suite:
            B, e = regular_open_algebra(P)
            assert len(B) == 2 ** len(minimal_classes(P))
            for b in B.carrier:
                if b != B.zero:
                    assert any(B.le(e[p], b) for p in P.carrier)
            for p in P.carrier:
                assert e[p] != B.zero
                for q in P.carrier:
                    if P.le(p, q):
                        assert B.le(e[p], e[q])

    def test_injectivity_iff_separative_antisymmetric(self, small_suite):
        for P in small_suite:
            _, e = regular_open_algebra(P)
            injective = len(set(e.values())) == len(P.carrier)
            assert injective == (is_separative(P) and P.is_antisymmetric())


class TestBooleanAlgebra:
    def test_powerset(self):
        B = FiniteBooleanAlgebra.powerset(("x", "y"))
        assert len(B) == 4
        x = frozenset(("x",))
        assert B.complement(x) == frozenset(("y",))
        assert B.join(x, frozenset(("y",))) == B.one

    def test_rejects_non_boolean(self):
        # three-element chain is a lattice but no Boolean algebra
        with pytest.raises(OrderError):
            FiniteBooleanAlgebra(("0", "m", "1"),
                                 [("0", "0"), ("m", "m"), ("1", "1"),
                                  ("0", "m"), ("m", "1"), ("0", "1")])


class TestAddSupremum:
    def test_p3_both_atoms(self, p3):
        Q = add_supremum(p3, ("a", "b"), "s")
        assert Q.le("s", "one") and Q.le("one", "s")

    def test_singleton(self, p3):
        Q = add_supremum(p3, ("a",), "s")
        assert Q.le("s", "a") and Q.le("a", "s")
        assert not Q.le("one", "s")

    def test_three_atoms_strictly_between(self, antichain3):
        Q = add_supremum(antichain3, ("a", "b"), "s")
        assert Q.le("a", "s") and Q.le("b", "s") and Q.le("s", "one")
        assert not Q.le("one", "s") and not Q.le("c", "s")

    def test_restriction_unchanged(self, antichain3):
        Q = add_supremum(antichain3, ("a", "b"), "s")
        for p in antichain3.carrier:
            for q in antichain3.carrier:
                assert Q.le(p, q) == antichain3.le(p, q)

    def test_empty_set_warns(self, p3):
        with pytest.warns(UserWarning):
            Q = add_supremum(p3, (), "s")
        assert all(Q.le("s", p) for p in Q.carrier)
        assert not any(Q.le(p, "s") for p in p3.carrier)

    def test_predensity_roundtrip(self, small_suite):
        for P in small_suite[:30]:
            if not is_separative(P):
                continue
            conds = P.carrier
            A = tuple(conds[:2])
            try:
                Q = add_supremum(P, A, "s")
            except OrderError:
                continue
            for p in P.carrier:
                assert Q.le(p, "s") == is_predense_below(P, A, p)

    def test_non_separative_chain_breaks_transitivity(self, chain3):
        # the ordering clauses put the new element strictly between
        # incomparable cone levels of the chain, so no preorder results
        with pytest.raises(OrderError):
            add_supremum(chain3, ("b",), "s")


class TestAddNegation:
    def test_p3_neg_atom(self, p3):
        Q = add_negation(p3, "a", "na")
        assert Q.le("b", "na") and Q.le("na", "b")

    def test_neg_top_is_bottom(self, p3):
        Q = add_negation(p3, "one", "zero")
        assert all(Q.le("zero", p) for p in Q.carrier)
        assert not any(Q.le(p, "zero") for p in p3.carrier)

    def test_double_negation(self, p3):
        Q1 = add_negation(p3, "a", "na")
        Q2 = add_negation(Q1, "na", "nna")
        assert Q2.le("nna", "a") and Q2.le("a", "nna")

    def test_requires_separative(self, chain2):
        with pytest.raises(SeparativityError):
            add_negation(chain2, "a")


class TestSaturation:
    def test_p3(self, p3):
        B, e = saturate_to_boolean(p3)
        assert len(B) == 4
        assert len({e[p] for p in p3.carrier}) == 3

    def test_single(self, single):
        B, _ = saturate_to_boolean(single)
        assert len(B) == 2

    def test_three_atoms(self, antichain3):
        B, _ = saturate_to_boolean(antichain3)
        assert len(B) == 8

    def test_isomorphic_to_regular_open(self, small_suite):
        for P in small_suite[:60]:
            B0, e0 = regular_open_algebra(P)
            B1, e1 = saturate_to_boolean(P)
            iso = completion_isomorphism(B0, e0, B1, e1)
            assert isinstance(iso, dict), getattr(iso, "reason", None)


class TestCompletionIso:
    def test_identity(self, p3):
        B, e = regular_open_algebra(p3)
        iso = completion_isomorphism(B, e, B, e)
        assert isinstance(iso, dict)
        assert all(iso[b] == b for b in B.carrier)

    def test_mismatched_sources(self, p3, antichain3):
        B0, e0 = regular_open_algebra(p3)
        B1, e1 = regular_open_algebra(antichain3)
        with pytest.raises(OrderError):
            completion_isomorphism(B0, e0, B1, e1)

    def test_detects_non_isomorphic(self, p3):
        B0, e0 = regular_open_algebra(p3)
        # pretend the saturation produced a bigger algebra over the same P
        B1 = FiniteBooleanAlgebra.powerset(("a", "b", "c"))
        e1 = {p: frozenset({"a"}) if p == "a" else
              frozenset({"b", "c"}) if p == "b" else B1.one
              for p in p3.carrier}
        result = completion_isomorphism(B0, e0, B1, e1)
        assert not isinstance(result, dict)


class TestCompleteSubforcing:
    def test_whole_forcing(self, p3):
        assert is_complete_subforcing(p3, p3)

    def test_top_and_atom_is_not(self, p3):
        sub = Preorder(("one", "a"),
                       [("one", "one"), ("a", "a"), ("a", "one")], "one")
        assert not is_complete_subforcing(sub, p3)

    def test_order_disagreement_rejected(self, p3):
        bad = Preorder(("one", "a", "b"),
                       [("one", "one"), ("a", "a"), ("b", "b"),
                        ("a", "one"), ("b", "one"), ("b", "a")], "one")
        with pytest.raises(OrderError):
            is_complete_subforcing(bad, p3)
