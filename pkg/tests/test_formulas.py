import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from forcelab.forcing import cone_generics, holds, semantic_forces
from forcelab.formulas import (
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
    InG,
    Mem,
    Neg,
    StarTranslation,
    Sub,
    appropriate,
    decode,
    encode,
    fo_normal_form,
    fo_satisfies,
    lex_min_appropriate,
    nnf,
    nu_mu,
    psi_unique,
    shift_substitute,
    star_star_lift,
    translate_star,
)
from forcelab.generate import name_pool, sample_formulas
from forcelab.hf import EMPTY, HFSet, natural, vstage
from forcelab.names import PName, check_name, evaluate


@pytest.fixture(scope="module")
def pool3(p3):
    return list(name_pool(p3))


class TestCodes:
    def test_generic_atom(self):
        assert encode(InG("p")) == (0, "p")

    def test_equality_atom(self, pool3):
        s, t = pool3[0], pool3[1]
        assert encode(Eq(s, t)) == (1, s, t)

    def test_negated_membership(self, pool3):
        s, t = pool3[0], pool3[1]
        assert encode(Neg(Mem(s, t))) == (3, (2, s, t))

    def test_conjunction_tags(self, pool3):
        phi = Conj((InG("a"), InG("b")))
        assert encode(phi) == (5, 2, ((0, (0, "a")), (1, (0, "b"))))
        assert encode(Disj(()))[0] == 4

    def test_subset_has_no_code(self, pool3):
        with pytest.raises(ValueError):
            encode(Sub(pool3[0], pool3[1]))

    def test_malformed(self):
        for bad in ((9, "x"), (0, 1), (1, "x", "y"), (4, 2, ((0, (0, "p")),)), ()):
            with pytest.raises(ValueError):
                decode(bad)

    def test_roundtrip_on_samples(self, p3, pool3):
        for phi in sample_formulas(p3, pool3, 120, 4, seed=3, include_sub=False):
            assert decode(encode(phi)) == phi


class TestNnf:
    def test_de_morgan_conj(self):
        phi = Neg(Conj((InG("a"), InG("b"))))
        assert nnf(phi) == Disj((Neg(InG("a")), Neg(InG("b"))))

    def test_double_negation(self):
        assert nnf(Neg(Neg(InG("p")))) == InG("p")

    def test_negated_membership_unfolds(self, pool3):
        sigma = pool3[0]
        tau = PName(((sigma, "a"),))
        out = nnf(Neg(Mem(sigma, tau)))
        assert isinstance(out, Conj) and len(out.parts) == 1
        inner = out.parts[0]
        assert isinstance(inner, Disj)
        assert Neg(InG("a")) in inner.parts

    def test_only_generic_atoms_negated(self, p3, pool3):
        def check(phi):
            if isinstance(phi, Neg):
                assert isinstance(phi.body, InG)
            elif isinstance(phi, (Conj, Disj)):
                for part in phi.parts:
                    check(part)

        for phi in sample_formulas(p3, pool3, 80, 3, seed=5):
            check(nnf(phi))

    def test_truth_preserved(self, small_suite):
        for P in small_suite[:20]:
            pool = list(name_pool(P))
            for phi in sample_formulas(P, pool, 40, 3, seed=7):
                normal = nnf(phi)
                for G in cone_generics(P):
                    assert holds(phi, G) == holds(normal, G)


class TestNuMu:
    def test_atomic_generic(self, p3):
        nu, mu = nu_mu(InG("a"), "one")
        assert nu is PName(((check_name(natural(0), "one"), "a"),))
        assert mu is check_name(natural(1), "one")
        from forcelab.forcing import cone_of

        Ga, Gb = cone_of(p3, "a"), cone_of(p3, "b")
        assert evaluate(nu, Ga) == evaluate(mu, Ga)
        assert evaluate(nu, Gb) != evaluate(mu, Gb)

    def test_self_equality_forced(self, p3, pool3):
        sigma = pool3[2]
        nu, mu = nu_mu(Eq(sigma, sigma), "one")
        assert nu is mu
        assert semantic_forces(p3, "one", Eq(nu, mu)).forced

    def test_atomic_table_shapes(self, p3, pool3):
        zero = check_name(natural(0), "one")
        # negated generic membership
        nu, mu = nu_mu(Neg(InG("a")), "one")
        assert nu is PName() and mu is PName(((zero, "a"),))
        # plain equality keeps the two names
        s, t = pool3[2], pool3[1]
        assert nu_mu(Eq(s, t), "one") == (s, t)
        # membership pads the right name with the left at the top
        nu, mu = nu_mu(Mem(s, t), "one")
        assert nu is t and mu is PName(tuple(t.entries) + ((s, "one"),))

    def test_disjunction_of_atoms(self, p3):
        phi = Disj((InG("a"), InG("b")))
        nu, mu = nu_mu(phi, "one")
        for G in cone_generics(p3):
            assert evaluate(nu, G) == evaluate(mu, G)

    def test_tautological_disjunct_shortcircuits(self, p3, pool3):
        phi = Disj((Eq(pool3[0], pool3[0]), InG("a")))
        nu, mu = nu_mu(phi, "one")
        assert nu is mu

    def test_contract_exhaustive(self, small_suite):
        for P in small_suite[:15]:
            pool = list(name_pool(P))
            for phi in sample_formulas(P, pool, 30, 3, seed=11):
                nu, mu = nu_mu(phi, P.top)
                for G in cone_generics(P):
                    assert holds(phi, G) == (evaluate(nu, G) == evaluate(mu, G))


class TestAppropriate:
    def test_repeat(self):
        assert lex_min_appropriate((EMPTY, EMPTY)) == (0, 0)

    def test_distinct(self):
        assert lex_min_appropriate((EMPTY, HFSet((EMPTY,)))) == (0, 1)

    def test_mismatch_rejected(self):
        assert not appropriate((0, 1), (EMPTY, EMPTY))
        assert appropriate((0, 0), (EMPTY, EMPTY))

    def test_lexmin_is_least(self):
        xs = (EMPTY, HFSet((EMPTY,)), EMPTY)
        ns = lex_min_appropriate(xs)
        assert ns == (0, 1, 0)
        assert appropriate(ns, xs)


class TestFOSatisfaction:
    def test_membership(self):
        M = vstage(3)
        assert fo_satisfies(M, FOMem(0, 1), {0: EMPTY, 1: HFSet((EMPTY,))})

    def test_empty_set_exists(self):
        M = vstage(3)
        assert fo_satisfies(M, FOEx(0, FOAll(1, FONot(FOMem(1, 0)))), {})

    def test_no_self_membership(self):
        M = vstage(2)
        assert not fo_satisfies(M, FOEx(0, FOMem(0, 0)), {})

    def test_class_predicates(self):
        M = vstage(2)
        preds = {0: frozenset((EMPTY,))}
        assert fo_satisfies(M, FOPred(0, 0), {0: EMPTY}, preds)
        assert not fo_satisfies(M, FOPred(0, 0), {0: HFSet((EMPTY,))}, preds)


class TestPsiUnique:
    def test_shape(self):
        phi = FOEq(0, 0)
        psi = psi_unique(phi)
        assert psi == FOAnd((phi, FOAll(1, FOOr((FONot(FOEq(1, 1)), FOEq(1, 0))))))

    def test_satisfaction_unique_iff_singleton(self):
        # v0 = v0 holds of everything, so uniqueness needs a one-element carrier
        psi = psi_unique(FOEq(0, 0))
        M2 = vstage(2)
        assert not any(fo_satisfies(M2, psi, {0: x}) for x in M2)
        M1 = vstage(1)
        assert all(fo_satisfies(M1, psi, {0: x}) for x in M1)

    def test_emptiness_unique_at_empty(self):
        # v0 has no elements
        phi = FOAll(1, FONot(FOMem(1, 0)))
        psi = psi_unique(phi)
        M = vstage(3)
        holders = [x for x in M if fo_satisfies(M, psi, {0: x})]
        assert holders == [EMPTY]

    def test_shift_avoids_capture(self):
        phi = FOEx(1, FOMem(1, 0))
        shifted = shift_substitute(phi)
        assert shifted == FOEx(2, FOMem(2, 1))
        assert fo_normal_form(psi_unique(phi))

    def test_wrong_profile_rejected(self):
        with pytest.raises(ValueError):
            psi_unique(FOMem(0, 1))


class TestStarStarLift:
    def test_generic_atom(self, p3):
        out = star_star_lift(InG("a"), {"a": "<one|3>"})
        assert out == InG("<one|3>")

    def test_no_conditions_unchanged_shape(self, pool3):
        phi = Eq(check_name(EMPTY, "one"), check_name(EMPTY, "one"))
        out = star_star_lift(phi, {"one": "one2"})
        assert isinstance(out, Eq)

    def test_entrywise(self):
        phi = Disj((InG("a"), InG("b")))
        out = star_star_lift(phi, {"a": "A", "b": "B"})
        assert out == Disj((InG("A"), InG("B")))

    def test_unrepresentable(self):
        from forcelab.errors import PoolError

        with pytest.raises(PoolError):
            star_star_lift(InG("a"), {"b": "B"})


class TestTranslateStar:
    def test_membership_atom(self, p3):
        edot = PName(((check_name(EMPTY, "one"), "a"),))
        out = translate_star(FOMem(0, 1), (0, 1), 2, edot=edot, top="one")
        assert isinstance(out, StarTranslation)
        assert out.truncation == 2
        assert isinstance(out.formula, Mem)
        assert out.formula.right is edot

    def test_equality_atom(self):
        edot = PName()
        out = translate_star(FOEq(0, 0), (3,), 4, edot=edot, top="one")
        three = check_name(natural(3), "one")
        assert out.formula == Eq(three, three)

    def test_existential_truncates(self):
        edot = PName()
        out = translate_star(FOEx(1, FOMem(1, 0)), (0,), 3, edot=edot, top="one")
        assert isinstance(out.formula, Disj) and len(out.formula.parts) == 3

    def test_class_predicate_rejected(self):
        with pytest.raises(ValueError):
            translate_star(FOPred(0, 0), (0,), 2, edot=PName(), top="one")

    def test_nonconsecutive_quantifier_rejected(self):
        with pytest.raises(ValueError):
            translate_star(FOEx(2, FOEq(2, 2)), (0,), 3, edot=PName(), top="one")


# encode/decode round-trip as a property over randomly grown formulas
@st.composite
def inf_formulas(draw, depth=3):
    pool = [PName(), PName(((PName(), "a"),))]
    if depth == 0:
        kind = draw(st.integers(0, 2))
        if kind == 0:
            return InG(draw(st.sampled_from(("a", "b", "one"))))
        s = draw(st.sampled_from(pool))
        t = draw(st.sampled_from(pool))
        return Eq(s, t) if kind == 1 else Mem(s, t)
    kind = draw(st.integers(0, 2))
    if kind == 0:
        return Neg(draw(inf_formulas(depth=depth - 1)))
    parts = draw(st.lists(inf_formulas(depth=depth - 1), max_size=3))
    return Conj(tuple(parts)) if kind == 1 else Disj(tuple(parts))


@settings(max_examples=80)
@given(inf_formulas())
def test_code_roundtrip_property(phi):
    assert decode(encode(phi)) == phi
