import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from attdel.errors import Contradictory, NotAConjunction, NotPropositional, ParseError, UnknownName
from attdel.syntax import (
    EMPTY, TOP, And, Atom, AttAtom, Believes, Dyn, FTerm, LiteralConjunction, Not,
    Signature, atoms_of, contains, infer_signature, normalize, parse_conj,
    parse_event_formula, parse_formula, prop_atoms, prop_valid, show,
)

from conftest import SIG, conjunctions, event_formulas, formulas, propositional

GSIG = Signature(("a", "b"), ("p", "g"))


def test_signature_rejects_empty_and_duplicates():
    with pytest.raises(ValueError):
        Signature((), ("p",))
    with pytest.raises(ValueError):
        Signature(("a",), ("p", "p"))
    with pytest.raises(ValueError):
        Signature(("a",), ("T",))


def test_attention_atoms_are_derived():
    sig = Signature(("b", "a"), ("q", "p"))
    assert [show(a) for a in sig.attention_atoms] == ["h(a,p)", "h(a,q)", "h(b,p)", "h(b,q)"]
    assert [show(a) for a in sig.all_atoms][:2] == ["p", "q"]


class TestParse:
    def test_believes_attention(self):
        f = parse_formula("B(a, h(a,g)) & ~h(a,g)", GSIG)
        assert f == And(Believes("a", AttAtom("a", "g")), Not(AttAtom("a", "g")))

    def test_top(self):
        assert parse_formula("T", GSIG) == TOP

    def test_dynamic(self):
        f = parse_formula("[F(p & g)] B(a, p)", GSIG)
        assert f == Dyn(FTerm(normalize(Atom("p") & Atom("g"))), Believes("a", Atom("p")))

    def test_precedence_and_right_associativity(self):
        f = parse_formula("p & q | r -> p -> q", SIG)
        p, q, r = Atom("p"), Atom("q"), Atom("r")
        assert f == ((p & q) | r).implies(p.implies(q))

    def test_unknown_atom_has_position(self):
        with pytest.raises(UnknownName) as exc:
            parse_formula("p & zz", GSIG)
        assert exc.value.pos == 4

    def test_syntax_error_has_position(self):
        with pytest.raises(ParseError) as exc:
            parse_formula("p & (g", GSIG)
        assert exc.value.pos == 6

    def test_trailing_input(self):
        with pytest.raises(ParseError):
            parse_formula("p g", GSIG)

    def test_unknown_agent(self):
        with pytest.raises(UnknownName):
            parse_formula("B(z, p)", GSIG)

    def test_announcement_must_be_consistent(self):
        with pytest.raises(ParseError):
            parse_formula("[F(p & ~p)] g", GSIG)
        with pytest.raises(ParseError):
            parse_formula("[F(p | g)] g", GSIG)

    def test_defaults_omitted_entries_are_top(self):
        f = parse_formula("[Ed(p & g; a:g=-, b:p=T)] T", GSIG)
        d = f.term.defaults
        assert d.value("a", "g") == "-"
        assert d.value("b", "p") == "T"
        assert d.value("b", "g") == "T"

    def test_duplicate_default_rejected(self):
        with pytest.raises(ParseError):
            parse_formula("[Ed(p; a:p=-, a:p=+)] T", GSIG)

    def test_event_formula_tokens(self):
        f = parse_event_formula("(p)=>e & box e=>(~g)", GSIG)
        assert show(f) == "(p)=>e & box e=>(~g)"

    def test_event_tests_must_be_propositional(self):
        with pytest.raises(ParseError):
            parse_event_formula("e=>(B(a, p))", GSIG)

    def test_infer_signature(self):
        sig = infer_signature("[F(p & g)] B(b, h(a,q))", "e=>(r)")
        assert set(sig.agents) == {"a", "b"}
        assert set(sig.atoms) == {"p", "g", "q", "r"}


@settings(max_examples=300)
@given(formulas())
def test_formula_round_trip(f):
    assert parse_formula(show(f), SIG) == f


@settings(max_examples=300)
@given(event_formulas())
def test_event_formula_round_trip(f):
    assert parse_event_formula(show(f), SIG) == f


@given(conjunctions())
def test_conjunction_round_trip(c):
    assert parse_conj(show(c), SIG) == c


class TestNormalize:
    def test_order_and_top(self):
        q, p = Atom("q"), Atom("p")
        c = normalize(q & p & TOP)
        assert c.positive == {p, q}
        assert show(c) == "p & q"

    def test_empty(self):
        c = normalize(TOP & TOP)
        assert c == EMPTY
        assert show(c) == "T"

    def test_contradiction(self):
        with pytest.raises(Contradictory):
            normalize(Atom("p") & Not(Atom("p")))

    def test_not_a_conjunction(self):
        with pytest.raises(NotAConjunction):
            normalize(Atom("p") | Atom("q"))

    def test_attention_atoms_after_propositional(self):
        c = parse_conj("h(a,p) & ~q & h(b,p) & ~h(a,q) & p", SIG)
        assert show(c) == "p & ~q & h(a,p) & ~h(a,q) & h(b,p)"

    @given(conjunctions(), st.randoms())
    def test_idempotent_and_order_insensitive(self, c, rnd):
        assert normalize(c.to_formula()) == c
        lits = [a if s else Not(a) for a, s in c.literals()] + [TOP]
        rnd.shuffle(lits)
        f = lits[0]
        for x in lits[1:]:
            f = And(x, f)
        assert normalize(f) == c


class TestContains:
    def test_examples(self):
        big = parse_conj("p & q & ~r", SIG)
        assert contains(big, parse_conj("p & ~r", SIG))
        assert contains(parse_conj("p", SIG), EMPTY)
        assert not contains(parse_conj("p", SIG), parse_conj("~p", SIG))

    @given(conjunctions(), conjunctions(), conjunctions())
    def test_partial_order(self, x, y, z):
        assert contains(x, x)
        if contains(x, y) and contains(y, x):
            assert x == y
        if contains(x, y) and contains(y, z):
            assert contains(x, z)


def test_atoms_of():
    assert atoms_of(parse_formula("p & g", GSIG)) == {"p", "g"}
    assert atoms_of(TOP) == frozenset()
    assert atoms_of(AttAtom("a", "p")) == {"p"}
    assert atoms_of(parse_formula("[F(q)] B(a, h(b,r))", SIG)) == {"q", "r"}


def _truth(f, env):
    match f:
        case Not(body=b):
            return not _truth(b, env)
        case And(left=l, right=r):
            return _truth(l, env) and _truth(r, env)
    return True if f == TOP else bool(env[f])


class TestPropValid:
    def test_examples(self):
        p, q = Atom("p"), Atom("q")
        assert prop_valid(p | Not(p))
        assert prop_valid((p & q).implies(p))
        assert not prop_valid(p.implies(q))

    def test_not_propositional(self):
        with pytest.raises(NotPropositional):
            prop_valid(Believes("a", TOP))

    @settings(max_examples=200)
    @given(propositional())
    def test_agrees_with_truth_table(self, f):
        atoms = prop_atoms(f)
        expected = all(
            _truth(f, dict(zip(atoms, row)))
            for row in itertools.product((0, 1), repeat=len(atoms))
        )
        assert prop_valid(f) == expected

    def test_twelve_atoms(self):
        sig = Signature(("a",), tuple(f"x{i}" for i in range(12)))
        xs = [Atom(n) for n in sig.atoms]
        taut = xs[0]
        for x in xs[1:]:
            taut = taut | x
        assert not prop_valid(taut)
        assert prop_valid(taut | Not(xs[0]))


def test_literal_conjunction_value_semantics():
    a = LiteralConjunction.of([(Atom("p"), True), (Atom("q"), False)])
    b = LiteralConjunction(frozenset({Atom("p")}), frozenset({Atom("q")}))
    assert a == b and hash(a) == hash(b)
    with pytest.raises(Contradictory):
        LiteralConjunction(frozenset({Atom("p")}), frozenset({Atom("p")}))
