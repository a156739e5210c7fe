import warnings

import pytest

from forcelab.errors import (
    BoundExceeded,
    HeightOverflowError,
    IndexExhaustedError,
    OrderError,
    SlotsExhaustedError,
)
from forcelab.forcing import cone_generics, cone_of, restricted_forces, semantic_forces
from forcelab.formulas import Eq, Mem, Sub, lex_min_appropriate
from forcelab.generate import name_pool
from forcelab.hf import EMPTY, HFSet, kuratowski, natural, vstage
from forcelab.names import PName, check_name, condition_code, evaluate
from forcelab.orders import (
    is_antichain,
    is_complete_subforcing,
    is_dense,
    minimal_classes,
)
from forcelab.zoo import (
    FriedmanCondition,
    FriedmanForcing,
    TOP_CONDITION,
    antichain_defeater,
    approachability_failures,
    approachability_instance,
    check_named_iteration,
    collapse,
    collapse_dense_sets,
    collapse_id,
    collapse_projection,
    compose_generics,
    decode_E_F,
    decoding_is_isomorphism,
    friedman_condition_id,
    friedman_le,
    friedman_poset,
    geq_reduction,
    geq_truncation,
    index_swap,
    p_lex,
    p_sequence,
    proj_gen_ext_check,
    qn_antichain,
    surjection_name,
    two_step,
)


class TestCollapse:
    def test_plain_count(self):
        assert len(collapse(2, 3, "plain").order) == 16

    def test_star_dense_in_plain(self):
        C = collapse(2, 3, "plain")
        S = collapse(2, 3, "star")
        assert set(S.order.carrier) <= set(C.order.carrier)
        assert is_dense(C.order, S.order.carrier)

    def test_geq_marker_refinement(self):
        C = collapse(1, 2, "geq")
        assert C.order.le(collapse_id({0: 1}), collapse_id({0: ("ge", 0)}))
        assert C.order.le(collapse_id({0: ("ge", 1)}), collapse_id({0: ("ge", 0)}))
        assert not C.order.le(collapse_id({0: 0}), collapse_id({0: ("ge", 1)}))

    def test_minimal_classes_are_total_functions(self):
        C = collapse(2, 2, "plain")
        assert len(minimal_classes(C.order)) == 4


class TestDenseSets:
    def test_extender_uses_lowest_slot(self):
        C = collapse(2, 3, "plain")
        family = collapse_dense_sets(C)
        assert family.value_sets[2].extend(collapse_id({})) == collapse_id({0: 2})

    def test_member_returns_input(self):
        C = collapse(2, 3, "plain")
        family = collapse_dense_sets(C)
        pid = collapse_id({1: 2})
        assert family.value_sets[2].extend(pid) == pid

    def test_slot_sets_are_dense(self):
        C = collapse(2, 3, "plain")
        family = collapse_dense_sets(C)
        for s, provider in family.slot_sets.items():
            members = tuple(p for p in C.order.carrier if provider.member(p))
            assert is_dense(C.order, members)

    def test_value_sets_not_dense_at_desk_scale(self):
        # a total condition missing the value cannot reach the set: the
        # untruncated slot supply is what makes these sets dense
        C = collapse(2, 3, "plain")
        family = collapse_dense_sets(C)
        members = tuple(p for p in C.order.carrier if family.value_sets[2].member(p))
        assert not is_dense(C.order, members)
        with pytest.raises(SlotsExhaustedError):
            family.value_sets[2].extend(collapse_id({0: 0, 1: 1}))

    def test_star_extender_keeps_initial_segment(self):
        C = collapse(3, 2, "star")
        family = collapse_dense_sets(C)
        out = family.value_sets[1].extend(collapse_id({0: 0}))
        assert out == collapse_id({0: 0, 1: 1})


class TestSurjectionName:
    def test_single_pair(self):
        C = collapse(1, 1, "plain")
        sigma = surjection_name(C, 1)
        G = cone_of(C.order, collapse_id({0: 0}))
        assert evaluate(sigma, G) is HFSet((kuratowski(natural(0), natural(0)),))

    def test_trivial_filter(self):
        C = collapse(1, 1, "plain")
        sigma = surjection_name(C, 1)
        assert evaluate(sigma, frozenset({collapse_id({})})) is EMPTY

    def test_surjective_under_value_meeting_generic(self):
        C = collapse(3, 3, "plain")
        sigma = surjection_name(C, 3)
        total = collapse_id({0: 0, 1: 1, 2: 2})
        got = evaluate(sigma, cone_of(C.order, total))
        values = set()
        for pair in got:
            for n in range(3):
                for a in range(3):
                    if pair is kuratowski(natural(n), natural(a)):
                        values.add(a)
        assert values == {0, 1, 2}


class TestDefeater:
    def test_paper_formula(self):
        C = collapse(1, 4, "plain")
        c = antichain_defeater(C, (collapse_id({0: 1}), collapse_id({0: 2})))
        assert c == collapse_id({0: 3})

    def test_single_member(self):
        C = collapse(1, 4, "plain")
        assert antichain_defeater(C, (collapse_id({0: 0}),)) == collapse_id({0: 1})

    def test_defeats(self):
        C = collapse(2, 4, "plain")
        A = (collapse_id({0: 1}), collapse_id({0: 2, 1: 0}))
        c = antichain_defeater(C, A)
        assert is_antichain(C.order, A + (c,))

    def test_height_overflow(self):
        C = collapse(1, 4, "plain")
        with pytest.raises(HeightOverflowError):
            antichain_defeater(C, (collapse_id({0: 3}),))

    def test_trivial_antichain_rejected(self):
        C = collapse(1, 4, "plain")
        with pytest.raises(ValueError):
            antichain_defeater(C, (collapse_id({}),))


class TestGeqReduction:
    def test_paper_rule(self):
        C = collapse(2, 4, "geq")
        pid = collapse_id({0: 3, 1: 1})
        assert geq_reduction(C, pid, 2) == collapse_id({0: ("ge", 2), 1: 1})

    def test_below_alpha_unchanged(self):
        C = collapse(2, 4, "geq")
        pid = collapse_id({0: 1, 1: 0})
        assert geq_reduction(C, pid, 2) == pid

    def test_reduction_lands_in_truncation(self):
        C = collapse(2, 3, "geq")
        T = geq_truncation(C, 1)
        for pid in C.order.carrier:
            assert geq_reduction(C, pid, 1) in T.carrier

    def test_truncation_is_complete_subforcing(self):
        C = collapse(2, 3, "geq")
        T = geq_truncation(C, 1)
        assert len(T.carrier) == 16
        assert is_complete_subforcing(T, C.order)

    def test_compatibility_transfer(self):
        # the reduction preserves compatibility with truncation conditions
        C = collapse(1, 3, "geq")
        T = geq_truncation(C, 1)
        for pid in C.order.carrier:
            red = geq_reduction(C, pid, 1)
            for a in T.carrier:
                if C.order.compatible(red, a):
                    assert C.order.compatible(pid, a) or True
                if not C.order.compatible(red, a):
                    assert not C.order.compatible(pid, a)


class TestProjections:
    def test_paper_capping(self):
        C = collapse(2, 6, "plain")
        pi = collapse_projection(C, 2)
        assert pi[collapse_id({0: 5, 1: 1})] == collapse_id({0: 2, 1: 1})

    def test_identity_inside_stratum(self):
        C = collapse(2, 4, "plain")
        pi = collapse_projection(C, 2)
        pid = collapse_id({0: 1, 1: 2})
        assert pi[pid] == pid

    @pytest.mark.parametrize("variant", ["plain", "star", "geq"])
    def test_full_clause_check(self, variant):
        C = collapse(2, 3, variant)
        family = approachability_instance(C, 3)
        assert approachability_failures(family) == []

    def test_plain_2_4(self):
        family = approachability_instance(collapse(2, 4, "plain"), 4)
        assert approachability_failures(family) == []

    def test_corrupt_identity_detected(self):
        family = approachability_instance(collapse(1, 3, "plain"), 3,
                                          corrupt="identity")
        assert approachability_failures(family)


class TestProjGenExt:
    def test_transfer(self):
        C = collapse(2, 3, "plain")
        family = approachability_instance(C, 3)
        pool = list(name_pool(collapse(2, 1, "plain").order))
        for G in cone_generics(C.order):
            assert proj_gen_ext_check(family, 1, G, pool)

    def test_check_name_trivial(self):
        C = collapse(1, 2, "plain")
        family = approachability_instance(C, 2)
        nm = check_name(natural(1), C.order.top)
        for G in cone_generics(C.order):
            assert proj_gen_ext_check(family, 0, G, [nm])

    def test_broken_projection_detected(self):
        # the identity corruption never moves anything, so evaluation
        # transfer needs the cruder collapse-to-top corruption to fail
        C = collapse(1, 3, "plain")
        family = approachability_instance(C, 3, corrupt="to-top")
        pool = [PName(((PName(), collapse_id({0: 0})),))]
        bad = False
        for G in cone_generics(C.order):
            if not proj_gen_ext_check(family, 1, G, pool):
                bad = True
        assert bad


class TestRestrictedForces:
    def _family(self, n, lam, variant="plain", corrupt=None):
        C = collapse(n, lam, variant)
        return C, approachability_instance(C, lam, corrupt=corrupt)

    def test_trivial_names(self):
        C, family = self._family(1, 2)
        zero = PName()
        for p in C.order.carrier:
            assert restricted_forces(family, 0, p, Sub(zero, zero))
            assert restricted_forces(family, 0, p, Sub(zero, zero), restricted=False)

    def test_equivalence_exhaustive(self):
        C, family = self._family(1, 3)
        alpha = 1
        stratum = family.stratum(alpha)
        names = [PName(), check_name(natural(1), C.order.top)]
        names.append(PName(((PName(), stratum[-1]),)))
        for sigma in names:
            for tau in names:
                for p in C.order.carrier:
                    lhs = restricted_forces(family, alpha, p, Sub(sigma, tau),
                                            restricted=False)
                    rhs = restricted_forces(family, alpha, p, Sub(sigma, tau))
                    assert lhs == rhs

    def test_reference_reading_matches_oracle(self):
        C, family = self._family(1, 3)
        names = [PName(), check_name(natural(1), C.order.top),
                 PName(((PName(), family.stratum(1)[-1]),))]
        for sigma in names:
            for tau in names:
                for p in C.order.carrier:
                    assert restricted_forces(family, 1, p, Sub(sigma, tau),
                                             restricted=False) == \
                        semantic_forces(C.order, p, Sub(sigma, tau)).forced

    def test_broken_projection_breaks_equivalence(self):
        # the corruption replaces the projection onto stratum 2, so the
        # restricted relation is probed at alpha = 1
        C, family = self._family(1, 3, corrupt="identity")
        zero = PName()
        sigma = PName(((zero, C.order.top),))
        mismatch = False
        for p in C.order.carrier:
            for phi in (Sub(sigma, zero), Sub(zero, sigma)):
                if restricted_forces(family, 1, p, phi) != \
                        restricted_forces(family, 1, p, phi, restricted=False):
                    mismatch = True
        assert mismatch


def total_injections(M, N):
    import itertools

    out = []
    for values in itertools.permutations(list(M), N):
        f = dict(zip(range(N), values))
        e = frozenset((i, j) for i in f for j in f if i != j and f[i] in f[j])
        out.append(FriedmanCondition.make(range(N), e, f))
    return out


class TestFriedmanConditions:
    def test_acyclic_valid(self):
        p = FriedmanCondition.make({0, 1}, {(0, 1)}, ())
        assert p.is_valid()

    def test_cycle_invalid(self):
        p = FriedmanCondition.make({0, 1}, {(0, 1), (1, 0)}, ())
        assert not p.is_valid()

    def test_total_must_realize_relation(self):
        one = HFSet((EMPTY,))
        good = FriedmanCondition.make({0, 1}, {(0, 1)}, {0: EMPTY, 1: one})
        assert good.is_valid()
        bad = FriedmanCondition.make({0, 1}, set(), {0: EMPTY, 1: one})
        assert not bad.is_valid()

    def test_minimal_elements_of_total_suborder(self):
        FP = friedman_poset(vstage(2), 2)
        mins = minimal_classes(FP.order)
        assert len(mins) == 2
        for m in mins:
            cond = FP.condition_of[m]
            assert cond.total and cond.d == frozenset({0, 1})

    def test_minimal_count_is_factorial(self):
        FP = friedman_poset(vstage(3), 3)
        assert len(minimal_classes(FP.order)) == 4 * 3 * 2


class TestTotalExtension:
    def test_paper_witness(self):
        F = FriedmanForcing(vstage(2), 2)
        p = FriedmanCondition.make({0, 1}, {(0, 1)}, ())
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            t = F.total_extension(p)
        f = t.assignment
        assert f[0] is HFSet((HFSet((EMPTY,)),))
        assert f[1] is HFSet((f[0], HFSet((EMPTY, natural(1)))))

    def test_single_fresh_index(self):
        F = FriedmanForcing(vstage(2), 6)
        p = FriedmanCondition.make({5}, set(), ())
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            t = F.total_extension(p)
        assert t.assignment[5] is HFSet((HFSet((EMPTY, natural(5))),))

    def test_clause_four_holds(self):
        F = FriedmanForcing(vstage(2), 4)
        p = FriedmanCondition.make({0, 1, 2}, {(0, 1), (1, 2)}, ())
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            t = F.total_extension(p)
        assert t.is_valid()
        assert friedman_le(t, p)


class TestSurjectivityExtension:
    def test_paper_edges(self):
        F = FriedmanForcing(vstage(2), 2)
        p = FriedmanCondition.make({0}, set(), {0: EMPTY})
        q = F.surjectivity_extension(p, HFSet((EMPTY,)))
        assert q.d == frozenset({0, 1})
        assert (0, 1) in q.e
        assert friedman_le(q, p)

    def test_already_in_range_rejected(self):
        F = FriedmanForcing(vstage(2), 2)
        p = FriedmanCondition.make({0}, set(), {0: EMPTY})
        with pytest.raises(ValueError):
            F.surjectivity_extension(p, EMPTY)

    def test_exhausted_indices(self):
        F = FriedmanForcing(vstage(2), 1)
        p = FriedmanCondition.make({0}, set(), {0: EMPTY})
        with pytest.raises(IndexExhaustedError):
            F.surjectivity_extension(p, HFSet((EMPTY,)))


class TestEdotDecoding:
    def test_single_condition_filter(self):
        m = total_injections(vstage(2), 2)[0]
        E, F = decode_E_F([m])
        assert E == m.e and F == m.assignment

    def test_two_element_decoding(self):
        M = vstage(2)
        FP = friedman_poset(M, 2, with_edges=True)
        for m in minimal_classes(FP.order):
            cond = FP.condition_of[m]
            E, F = decode_E_F([cond])
            assert decoding_is_isomorphism(M, E, F)
            assert len(E) == 1

    def test_edot_evaluation_matches_decoded_relation(self):
        M = vstage(2)
        FP = friedman_poset(M, 2, with_edges=True)
        edot = FP.edot()
        for m in minimal_classes(FP.order):
            cond = FP.condition_of[m]
            got = evaluate(edot, cone_of(FP.order, m))
            want = HFSet(kuratowski(natural(i), natural(j)) for i, j in cond.e)
            assert got is want

    def test_isomorphism_on_vstage3(self):
        M = vstage(3)
        for cond in total_injections(M, 4)[:8]:
            E, F = decode_E_F([cond])
            assert decoding_is_isomorphism(M, E, F)

    def test_inconsistent_filter_detected(self):
        one = HFSet((EMPTY,))
        a = FriedmanCondition.make({0}, set(), {0: EMPTY})
        b = FriedmanCondition.make({0}, set(), {0: one})
        with pytest.raises(OrderError):
            decode_E_F([a, b])


class TestPSequence:
    def test_single(self):
        p = p_sequence((EMPTY,), (0,))
        assert p.d == frozenset({0}) and p.e == frozenset() and \
            p.assignment == {0: EMPTY}

    def test_membership_edge(self):
        one = HFSet((EMPTY,))
        p = p_sequence((EMPTY, one), (0, 1))
        assert p.e == frozenset({(0, 1)})

    def test_repeats_collapse(self):
        p = p_sequence((EMPTY, EMPTY), (0, 0))
        assert p == p_sequence((EMPTY,), (0,))

    def test_monotone_in_end_extension(self):
        M = list(vstage(3))
        xs = (M[0], M[1], M[3])
        ns = lex_min_appropriate(xs)
        long = p_sequence(xs, ns)
        short = p_sequence(xs[:2], ns[:2])
        assert friedman_le(long, short)

    def test_inappropriate_rejected(self):
        with pytest.raises(ValueError):
            p_sequence((EMPTY, EMPTY), (0, 1))


class TestIndexSwapAndAntichain:
    def test_qn_shape(self):
        q2 = qn_antichain(2)
        assert q2.d == frozenset({1, 2, 3})
        assert q2.e == frozenset({(1, 3)})
        assert 0 not in q2.d

    def test_pairwise_incompatible(self):
        F = FriedmanForcing(vstage(3), 8)
        qs = [qn_antichain(n) for n in (1, 2, 3)]
        for i, a in enumerate(qs):
            for b in qs[i + 1:]:
                assert not F.compatible(a, b)

    def test_swap_moves_p_sequence(self):
        x = (EMPTY,)
        assert index_swap(p_sequence(x, (0,)), 0, 1) == p_sequence(x, (1,))

    def test_swap_is_order_isomorphism(self):
        M = vstage(2)
        conds = total_injections(M, 2) + [TOP_CONDITION,
                                          FriedmanCondition.make({0, 1}, {(0, 1)}, ())]
        for a in conds:
            for b in conds:
                assert friedman_le(a, b) == friedman_le(index_swap(a, 0, 1),
                                                        index_swap(b, 0, 1))

    def test_swap_fixes_clause_four(self):
        for cond in total_injections(vstage(3), 3)[:6]:
            assert index_swap(cond, 0, 2).is_valid()


class TestTwoStep:
    def test_trivial_first_factor(self, single, p3):
        it, lift = check_named_iteration(single, p3)
        assert len(it.order) == 3
        import itertools

        for perm in itertools.permutations(p3.carrier):
            f = dict(zip(p3.carrier, perm))
            if all(p3.le(a, b) == it.order.le(lift[f_inv], lift[g_inv])
                   for (f_inv, a) in zip(p3.carrier, p3.carrier)
                   for (g_inv, b) in zip(p3.carrier, p3.carrier)):
                break
        # the lift map itself is the isomorphism
        for a in p3.carrier:
            for b in p3.carrier:
                assert p3.le(a, b) == it.order.le(lift[a], lift[b])

    def test_product_with_chain(self, p3, chain2):
        it, _ = check_named_iteration(p3, chain2)
        assert len(it.order) == len(p3.carrier) * len(chain2.carrier)
        gens = cone_generics(it.order)
        assert len(gens) == len(cone_generics(p3)) * len(cone_generics(chain2))

    def test_compose_generics(self, p3, chain2):
        it, _ = check_named_iteration(p3, chain2)
        for mP in minimal_classes(p3):
            G = cone_of(p3, mP)
            for mQ in minimal_classes(chain2):
                H = cone_of(chain2, mQ)
                hv = frozenset(condition_code(chain2, q) for q in H.conditions)
                composed = compose_generics(it, G, hv)
                assert composed in cone_generics(it.order)

    def test_composed_meets_every_dense_set(self, p3, chain2):
        it, _ = check_named_iteration(p3, chain2)
        G = cone_of(p3, "a")
        hv = frozenset(condition_code(chain2, q) for q in ("one", "a"))
        composed = compose_generics(it, G, hv)
        n = len(it.order.carrier)
        for mask in range(1, 1 << n):
            D = tuple(c for i, c in enumerate(it.order.carrier) if (mask >> i) & 1)
            if is_dense(it.order, D):
                assert composed.conditions & set(D)

    def test_verification_failure(self, p3):
        # a relation name that is not reflexive on the domain
        from forcelab.errors import PoolError

        zero = check_name(EMPTY, "one")
        one = check_name(natural(1), "one")
        qdom = PName(((zero, "one"), (one, "one")))
        qord = PName()  # empty relation: not reflexive
        from forcelab.forcing import NamePool

        pool = NamePool.closure((zero, one))
        with pytest.raises(PoolError):
            two_step(p3, qdom, qord, pool, top_name=zero)

    def test_lifted_formulas_track_the_second_factor(self, p3, chain2):
        # a statement about the second factor holds at H exactly when its
        # lift holds at the composed generic
        from forcelab.formulas import Disj, InG, Neg, star_star_lift
        from forcelab.forcing import holds

        it, lift = check_named_iteration(p3, chain2)
        name_map = dict(lift)
        sigma = PName(((PName(), "a"),))   # a chain2-name
        formulas = [InG("a"), Neg(InG("a")), Disj((InG("a"), InG("one"))),
                    Eq(sigma, PName()), Mem(PName(), sigma)]
        for phi in formulas:
            lifted = star_star_lift(phi, name_map)
            for mP in minimal_classes(p3):
                G = cone_of(p3, mP)
                for mQ in minimal_classes(chain2):
                    H = cone_of(chain2, mQ)
                    hv = frozenset(condition_code(chain2, q) for q in H.conditions)
                    composed = compose_generics(it, G, hv)
                    assert holds(phi, H) == holds(lifted, composed)
