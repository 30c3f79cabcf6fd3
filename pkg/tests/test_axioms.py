import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from attdel.axioms import (
    FORMS, SCHEMAS, ReduceStats, check_lemma, instantiate, lemma_check, reduce,
    soundness_fuzz,
)
from attdel.errors import MissingDefaults, NotApplicable, UnsupportedEventTerm
from attdel.generators import Bounds, all_models, random_formula, random_model
from attdel.semantics import KripkeModel, PointedModel, disjoint_union, satisfies, world_flags
from attdel.syntax import (
    TOP, And, Atom, AttAtom, Believes, DefaultMap, Dyn, EdTerm, FTerm, Not,
    Signature, implies, modal_depth, parse_conj, parse_event_term, parse_formula,
    prop_valid, show, token_count,
)

seeds = st.integers(0, 2**32 - 1)
SIG3 = Signature(("a", "b"), ("p", "g", "q"))


def terms_in(f):
    """Every event term occurring in a formula."""
    out = []
    stack = [f]
    while stack:
        g = stack.pop()
        match g:
            case Not(body=b) | Believes(body=b):
                stack.append(b)
            case And(left=l, right=r):
                stack.extend((l, r))
            case Dyn(term=t, body=b):
                out.append(t)
                stack.append(b)
    return out


def is_dynamic_free(f):
    return not terms_in(f)


class TestInstantiate:
    def test_atom(self):
        phi = parse_conj("p & g", SIG3)
        inst = instantiate("atom-reduction", phi, "a", Atom("q"))
        assert inst.lhs == Dyn(FTerm(phi), Atom("q"))
        assert inst.rhs == implies(phi.to_formula(), Atom("q"))

    def test_belief_one_disjunct_per_subset(self):
        phi = parse_conj("p", SIG3)
        inst = instantiate("belief-reduction", phi, "a", Atom("q"))
        inner = {show(t) for t in terms_in(inst.rhs)}
        assert inner == {"F(p)", "F(T)"}

    def test_default_inner_announcement(self):
        phi = parse_conj("p & g", SIG3)
        d = DefaultMap((("a", "g", "-"), ("b", "g", "-")))
        inst = instantiate("belief-reduction-default", phi, "a", Atom("q"), d)
        anns = {show(t.announcement) for t in terms_in(inst.rhs) if isinstance(t, EdTerm)}
        # one announcement per attended set S ⊆ {g, p}
        assert anns == {"g & p", "~g & p", "g", "~g"}

    def test_missing_defaults(self):
        with pytest.raises(MissingDefaults):
            instantiate("belief-reduction-default", parse_conj("p", SIG3), "a", TOP)

    def test_defaults_only_for_default_schema(self):
        with pytest.raises(ValueError):
            instantiate("belief-reduction", parse_conj("p", SIG3), "a", TOP, DefaultMap())

    def test_unknown_schema(self):
        with pytest.raises(ValueError):
            instantiate("necessitation", parse_conj("p", SIG3), "a", TOP)

    @pytest.mark.parametrize("psi", ["p", "~p", "g", "B(b, g)", "~B(b, g) & ~B(b, ~g)", "h(a,g)"])
    def test_repaired_belief_holds_on_gorilla(self, gorilla, gsig, psi):
        f = parse_formula(psi, gsig)
        for text in ("p & g", "p", "g", "~g"):
            phi = parse_conj(text, gsig)
            for agent in gsig.agents:
                inst = instantiate("belief-reduction", phi, agent, f, form="repaired")
                assert satisfies(gorilla, inst.formula), (text, agent, psi)
                d = DefaultMap((("a", "g", "-"), ("b", "g", "-")))
                inst = instantiate("belief-reduction-default", phi, agent, f, d, "repaired", gsig)
                assert satisfies(gorilla, inst.formula), (text, agent, psi)

    def test_verbatim_belief_schema_fails_on_gorilla(self, gorilla, gsig):
        # a attends to p, so the disjunct for the unattended configuration is vacuous
        inst = instantiate("belief-reduction", parse_conj("p & g", gsig), "a", parse_formula("~p", gsig))
        assert not satisfies(gorilla, inst.lhs)
        assert satisfies(gorilla, inst.rhs)

    def test_mutant_fails_on_gorilla(self, gorilla, gsig):
        inst = instantiate("belief-reduction", parse_conj("p & g", gsig), "a", Atom("p"), form="mutant")
        assert satisfies(gorilla, inst.lhs)
        assert not satisfies(gorilla, inst.rhs)


class TestReduce:
    def test_atom(self):
        sig = Signature(("a",), ("p", "q"))
        assert show(reduce(parse_formula("[F(p)] q", sig))) == "p -> q"

    def test_top(self):
        sig = Signature(("a",), ("p",))
        out = reduce(parse_formula("[F(p)] T", sig))
        assert is_dynamic_free(out) and prop_valid(out)

    def test_belief_in_announced_atom_is_not_valid(self):
        # when a ignores p, a keeps considering a ¬p world
        sig = Signature(("a",), ("p",))
        f = parse_formula("[F(p)] B(a, p)", sig)
        out = reduce(f)
        m = KripkeModel(sig, ["u", "v"], {"a": [("u", "v")]}, {"u": [Atom("p")], "v": []})
        pm = PointedModel(m, "u")
        assert not satisfies(pm, f)
        assert not satisfies(pm, out)

    def test_belief_in_announced_atom_equivalent_on_all_small_models(self):
        sig = Signature(("a",), ("p",))
        f = parse_formula("[F(p)] B(a, p)", sig)
        out = reduce(f)
        big, _ = disjoint_union(all_models(sig, 2))
        assert world_flags(big, f) == world_flags(big, out)

    def test_attention_atom_of_other_agent(self):
        sig = Signature(("a", "b"), ("p", "q"))
        assert reduce(parse_formula("[F(p)] h(b,q)", sig)) == implies(Atom("p"), AttAtom("b", "q"))
        inst = instantiate("atom-reduction", parse_conj("p", sig), "a", AttAtom("b", "q"))
        big, _ = disjoint_union(all_models(Signature(("a", "b"), ("p", "q")), 1))
        assert all(world_flags(big, inst.formula))

    def test_unsupported_terms(self):
        sig = Signature(("a",), ("p",))
        with pytest.raises(UnsupportedEventTerm):
            reduce(parse_formula("[E'(p)] p", sig), sig)

    def test_default_terms_need_signature(self):
        sig = Signature(("a",), ("p",))
        f = parse_formula("[Ed(p; a:p=-)] B(a, ~p)", sig)
        with pytest.raises(ValueError):
            reduce(f)
        out = reduce(f, sig)
        big, _ = disjoint_union(all_models(sig, 2))
        assert world_flags(big, f) == world_flags(big, out)

    @settings(max_examples=30, deadline=None)
    @given(seeds)
    def test_equivalent_and_terminates(self, seed):
        rng = random.Random(seed)
        sig = Signature(("a", "b"), ("p", "q"))
        f = random_formula(rng, sig, depth=2, dyn_depth=2, defaults=True)
        stats = ReduceStats()
        out = reduce(f, sig, stats)
        assert is_dynamic_free(out)
        size = token_count(show(f))
        assert stats.steps <= max(1, size) ** 3
        # one evaluation over three random models
        m, _ = disjoint_union([random_model(rng, sig, Bounds(max_worlds=3)) for _ in range(3)])
        assert world_flags(m, f) == world_flags(m, out)

    def test_nested_dynamic(self):
        sig = Signature(("a", "b"), ("p", "q"))
        f = parse_formula("[F(p)] [F(~q)] B(a, B(b, q))", sig)
        out = reduce(f)
        assert modal_depth(out) >= 2
        big, _ = disjoint_union(all_models(Signature(("a", "b"), ("p", "q")), 1))
        assert world_flags(big, f) == world_flags(big, out)


class TestFuzz:
    def test_repaired_is_sound(self):
        rep = soundness_fuzz(100, seed=7, form="repaired")
        assert rep.failures == []
        assert rep.summary() == f"trials={100 * len(SCHEMAS)} failures=0"

    def test_repaired_degenerate_bounds(self):
        rep = soundness_fuzz(100, seed=1, bounds=Bounds(max_worlds=1, max_atoms=1, max_agents=1), form="repaired")
        assert rep.failures == []

    def test_verbatim_schema_fails_even_in_one_world(self):
        rep = soundness_fuzz(100, seed=1, bounds=Bounds(max_worlds=1, max_atoms=1, max_agents=1),
                             schemas=["belief-reduction"])
        assert rep.failures
        c = rep.failures[0]
        assert c.lhs is False and c.rhs is True

    def test_mutant_is_caught(self):
        rep = soundness_fuzz(1000, seed=0, form="mutant", schemas=["belief-reduction"], max_failures=1)
        assert len(rep.failures) == 1

    def test_deterministic(self):
        a = soundness_fuzz(40, seed=3).to_json()
        b = soundness_fuzz(40, seed=3).to_json()
        assert a == b

    def test_static_schemas_sound_verbatim(self):
        rep = soundness_fuzz(200, seed=5, schemas=["atom-reduction", "negation-reduction", "conjunction-reduction"])
        assert rep.failures == []

    def test_counterexample_is_replayable(self):
        from attdel.io import model_from_json

        rep = soundness_fuzz(200, seed=2, schemas=["belief-reduction"], max_failures=1)
        c = rep.failures[0]
        pm = model_from_json(c.model)
        f = parse_formula(c.formula, pm.model.sig)
        assert not satisfies(pm, f)

    def test_bad_trials(self):
        with pytest.raises(ValueError):
            soundness_fuzz(0)

    def test_forms(self):
        assert FORMS == ("verbatim", "repaired", "mutant")


class TestLemma:
    def test_gorilla_plain(self, gorilla, gsig):
        r = lemma_check(gorilla, parse_conj("p & g", gsig), "a")
        assert r.holds and r.attended == {"p"}

    def test_fully_attentive_agent(self, gorilla, gsig):
        r = lemma_check(gorilla, parse_conj("p & g", gsig), "b")
        assert r.attended == {"p", "g"}
        assert r.main == r.reduced
        assert r.holds

    def test_announcement_false(self, gorilla, gsig):
        with pytest.raises(NotApplicable):
            check_lemma(gorilla, parse_conj("~p", gsig), "a")

    def test_default_variant_reports_reason(self, gorilla, gsig):
        d = parse_event_term("Ed(p; a:g=-, b:g=-)", gsig).defaults
        r = lemma_check(gorilla, parse_conj("p & g", gsig), "a", "default", d)
        assert r.reduced == "Ed(~g & p; a:g=-, b:g=-)"
        if not r.holds:
            assert r.reason

    def test_default_variant_needs_map(self, gorilla, gsig):
        with pytest.raises(MissingDefaults):
            lemma_check(gorilla, parse_conj("p", gsig), "a", "default")


def test_and_is_rewritten_componentwise():
    sig = Signature(("a",), ("p", "q"))
    out = reduce(parse_formula("[F(p)] (q & h(a,q))", sig))
    assert out == And(implies(Atom("p"), Atom("q")), implies(Atom("p"), AttAtom("a", "q")))
