"""Acceptance criteria, one test and one PASS/FAIL line each.

Criteria 6 and 7 are known to fail as stated; their tests are strict xfails
so an unexpected pass is reported loudly.  The analysis is in the decisions
ledger.
"""

import itertools
import random
import time

import pytest

from attdel.attention_events import build_binary, build_default, build_F, check_isomorphic
from attdel.axioms import SCHEMAS, lemma_check, reduce, soundness_fuzz
from attdel.generators import (
    Bounds, all_models, random_conj, random_defaults, random_formula,
    random_pointed_model, random_signature,
)
from attdel.scenarios import gorilla_model
from attdel.semantics import applicable, disjoint_union, satisfies, update, world_flags
from attdel.syntactic_events import (
    edgewise_relation, g_signature, gen_G, induce_full, largest_Q_bruteforce,
    succinctness_report,
)
from attdel.syntax import (
    Atom, Dyn, Not, Signature, parse_conj, parse_event_formula, parse_event_term,
    parse_formula,
)

from conftest import ACCEPTANCE_LINES, enumerate_f_events

SEED = 20240611


def report(n, ok, detail):
    line = f"criterion {n}: {'PASS' if ok else 'FAIL'} {detail}"
    print(line)
    ACCEPTANCE_LINES.append(line)


def check_all(pm, sig, texts):
    return {t: satisfies(pm, parse_formula(t, sig)) for t in texts}


def test_criterion_1_gorilla_statics():
    t = time.perf_counter()
    pm = gorilla_model()
    got = check_all(pm, pm.model.sig, ["B(a, h(a,g)) & ~h(a,g)", "~h(a,g)"])
    elapsed = time.perf_counter() - t
    ok = all(got.values()) and pm.point == "w0" and elapsed < 1
    report(1, ok, f"{got} in {elapsed:.3f}s")
    assert ok


def test_criterion_2_inertia_update():
    t = time.perf_counter()
    pm = gorilla_model()
    sig = pm.model.sig
    after = update(pm, parse_event_term("F(p & g)", sig))
    expected = {
        "B(a, p)": True,
        "B(a, g)": False,
        "B(a, ~g)": False,
        "B(b, g)": True,
        "B(a, ~B(b, g) & ~B(b, ~g))": True,
    }
    got = check_all(after, sig, expected)
    elapsed = time.perf_counter() - t
    ok = got == expected and elapsed < 1
    report(2, ok, f"{sum(got[k] == v for k, v in expected.items())}/5 match in {elapsed:.3f}s")
    assert ok


def test_criterion_3_defaults_update():
    t = time.perf_counter()
    pm = gorilla_model()
    sig = pm.model.sig
    # the p defaults are T and therefore left implicit
    after = update(pm, parse_event_term("Ed(p & g; a:g=-, b:g=-)", sig))
    got = check_all(after, sig, ["B(a, ~g)", "g & B(b, B(a, ~g))"])
    elapsed = time.perf_counter() - t
    ok = all(got.values()) and elapsed < 1
    report(3, ok, f"{got} in {elapsed:.3f}s")
    assert ok


def _random_prop(rng, atoms, depth=2):
    if depth == 0 or rng.random() < 0.3:
        return Atom(rng.choice(atoms))
    if rng.random() < 0.4:
        return Not(_random_prop(rng, atoms, depth - 1))
    return _random_prop(rng, atoms, depth - 1) & _random_prop(rng, atoms, depth - 1)


def test_criterion_4_original_is_principled():
    t = time.perf_counter()
    rng = random.Random(SEED)
    results = []
    for i in range(20):
        agents = ("a", "b", "c")[: 1 + i % 3]
        atoms = ("p", "q")[: rng.randint(1, 2)]
        sig = Signature(agents, atoms)
        phi = _random_prop(rng, atoms)
        results.append(check_isomorphic(build_binary(phi, "original", sig), build_binary(phi, "principled", sig)))
    elapsed = time.perf_counter() - t
    ok = all(results) and elapsed < 10
    report(4, ok, f"{sum(results)}/20 isomorphic in {elapsed:.2f}s")
    assert ok


def test_criterion_5_event_counts():
    counts = []
    for n in range(1, 7):
        sig = Signature(tuple("abcdef"[:n]), ("p",))
        counts.append((len(build_binary(Atom("p"), "original", sig).events), 2 ** (n + 1) + 1))
    f_cases = []
    for agents in (("a",), ("a", "b")):
        sig = Signature(agents, ("p", "q"))
        for text in ("p", "~p", "q", "~q", "p & q", "p & ~q", "~p & q", "~p & ~q"):
            phi = parse_conj(text, sig)
            me = build_F(phi, sig)
            got = {me.model.precondition(e) for e in me.events}
            f_cases.append(got == enumerate_f_events(phi, sig) and len(got) == len(me.events))
    ok = all(a == b for a, b in counts) and all(f_cases)
    report(5, ok, f"binary counts {[a for a, _ in counts]}; F matches enumeration {sum(f_cases)}/{len(f_cases)}")
    assert ok


@pytest.mark.xfail(strict=True, raises=AssertionError, reason="verbatim belief schemas are unsound; see decisions ledger")
def test_criterion_6_soundness_fuzz():
    t = time.perf_counter()
    verbatim = soundness_fuzz(2000, seed=SEED)
    mutant = soundness_fuzz(1000, seed=SEED, form="mutant", schemas=["belief-reduction"], max_failures=1)
    elapsed = time.perf_counter() - t
    per = ", ".join(f"{s} {len(verbatim.failures_for(s))}/{verbatim.per_schema[s]}" for s in SCHEMAS)
    caught = f"mutant caught at trial {mutant.failures[0].trial}" if mutant.failures else "mutant not caught"

    t2 = time.perf_counter()
    repaired = soundness_fuzz(2000, seed=SEED, form="repaired")
    print(f"  repaired form (informational): {repaired.summary()} in {time.perf_counter() - t2:.1f}s")

    ok = not verbatim.failures and bool(mutant.failures) and elapsed < 60
    report(6, ok, f"counterexamples: {per}; {caught}; {elapsed:.1f}s")
    assert ok


def _lemma_instances(rng, count, bounds):
    """Random instances where both the plain and the default update apply.

    Also returns how many had a true announcement but a default model with
    several matching designated events.
    """
    out, ambiguous = [], 0
    while len(out) < count:
        sig = random_signature(rng, bounds)
        pm = random_pointed_model(rng, sig, bounds)
        phi = random_conj(rng, sig)
        if not satisfies(pm, phi.to_formula()):
            continue
        d = random_defaults(rng, sig)
        if applicable(pm, build_default(phi, d, sig)) is None:
            ambiguous += 1
            continue
        out.append((pm, phi, rng.choice(sig.agents), d))
    return out, ambiguous


@pytest.mark.xfail(strict=True, raises=AssertionError, reason="default variant fails when the attended default announcement is false; see decisions ledger")
def test_criterion_7_lemmas():
    t = time.perf_counter()
    pm = gorilla_model()
    sig = pm.model.sig
    phi = parse_conj("p & g", sig)
    d = parse_event_term("Ed(p & g; a:g=-, b:g=-)", sig).defaults
    fig = [lemma_check(pm, phi, a, "plain") for a in sig.agents]
    fig += [lemma_check(pm, phi, a, "default", d) for a in sig.agents]
    fig_fail = [r.reason for r in fig if not r.holds]

    rng = random.Random(SEED)
    plain_fail, not_applicable, differ = 0, 0, 0
    instances, ambiguous = _lemma_instances(rng, 200, Bounds(max_worlds=4, max_atoms=2, max_agents=2))
    for pm, phi, agent, d in instances:
        plain_fail += not lemma_check(pm, phi, agent, "plain").holds
        r = lemma_check(pm, phi, agent, "default", d)
        if not r.holds:
            if "not applicable" in r.reason:
                not_applicable += 1
            else:
                differ += 1
    elapsed = time.perf_counter() - t
    ok = not fig_fail and plain_fail == 0 and not_applicable + differ == 0 and elapsed < 60
    report(7, ok, (
        f"gorilla failures {len(fig_fail)}/{len(fig)}; random plain failures {plain_fail}/200; "
        f"random default failures {not_applicable + differ}/200 "
        f"({not_applicable} reduced update not applicable, {differ} successor sets differ); "
        f"{ambiguous} draws skipped as not applicable; {elapsed:.1f}s"
    ))
    for reason in fig_fail:
        print(f"  gorilla: {reason}")
    assert ok


def _dynamic_formulas(rng, sig, count):
    out = []
    while len(out) < count:
        f = random_formula(rng, sig, depth=2, dyn_depth=2, max_announced=2, defaults=True)
        if any(isinstance(g, Dyn) for g in _subformulas(f)):
            out.append(f)
    return out


def _subformulas(f):
    stack = [f]
    while stack:
        g = stack.pop()
        yield g
        stack.extend(getattr(g, name) for name in ("body", "left", "right") if hasattr(g, name))


def test_criterion_8_reduction_oracle():
    t = time.perf_counter()
    sig = Signature(("a",), ("p", "q"))
    big, _ = disjoint_union(all_models(sig, 2))
    rng = random.Random(SEED)
    mismatches = 0
    for f in _dynamic_formulas(rng, sig, 100):
        mismatches += world_flags(big, f) != world_flags(big, reduce(f, sig))
    elapsed = time.perf_counter() - t
    ok = mismatches == 0 and elapsed < 120
    report(8, ok, f"{mismatches}/100 formulas differ on {len(big.worlds)} pointed models in {elapsed:.1f}s")
    assert ok


S1 = Signature(("a",), ("p", "q"))
EVENT_POOL = ["T", "p", "~p", "p & h(a,p)", "p & ~h(a,p)", "~p & h(a,q)"]
PRINCIPLES = [
    "(e=>(h(a,p)) -> box e=>(p))",
    "(e=>(h(a,p)) -> box (e=>(p) & e=>(h(a,p))))",
    "(~e=>(h(a,p)) -> box ((T)=>e & e=>(T)))",
    "(~e=>(h(a,p)) -> box e=>(~p))",
    "(~e=>(h(a,p)) -> box ~e=>(p))",
    "(e=>(h(a,p)) -> box e=>(p)) & (~e=>(h(a,p)) -> box ((T)=>e & e=>(T)))",
    "(e=>(T) -> box e=>(h(a,q))) & (e=>(p) -> box ~e=>(~p))",
]


def test_criterion_9_induction():
    iso = []
    for n in range(1, 5):
        sig = g_signature(n)
        iso.append(check_isomorphic(induce_full(gen_G(n), sig).model, build_binary(Atom("q"), "principled", sig)))
    pool = [parse_conj(t, S1) for t in EVENT_POOL]
    cases = agree = 0
    for chi_text in PRINCIPLES:
        chi = parse_event_formula(chi_text, S1)
        for k in range(1, 5):
            for events in itertools.combinations(pool, k):
                cases += 1
                agree += edgewise_relation(list(events), chi) == largest_Q_bruteforce(list(events), chi)
    ok = all(iso) and agree == cases
    report(9, ok, f"gen_G isomorphic for n=1..4: {iso}; edge-wise equals brute force {agree}/{cases}")
    assert ok


def test_criterion_10_succinctness():
    t = time.perf_counter()
    gp = succinctness_report(12, "Gprime")
    g = succinctness_report(8, "G")
    elapsed = time.perf_counter() - t
    gp_ok = [r.events for r in gp.rows] == [2 ** n for n in range(1, 13)] and gp.max_residual == 0
    g_ok = all(r.events == 2 ** (r.n + 1) + 1 and r.events >= 2 ** r.n for r in g.rows) and len(g.rows) == 8
    ok = gp_ok and g_ok and elapsed < 60
    report(10, ok, (
        f"Gprime events 2^n for n=1..12: {gp_ok}, size = {gp.slope:g}n {gp.intercept:+g} "
        f"(residual {gp.max_residual:g}); G events 2^(n+1)+1 for n=1..8: {g_ok}; {elapsed:.1f}s"
    ))
    assert ok
