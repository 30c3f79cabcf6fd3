"""Embedded running examples: the basketball video with the gorilla, and the rescue team.

The initial model has an actual world w0 where p (the ball was passed) and g
(a gorilla walked by) hold.  Agent a attends to p but not to g; agent b
attends to both.  From w0, a considers possible four "attentive" worlds
covering every combination of p and g; b only considers w0.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .semantics import KripkeModel, PointedModel, satisfies, update
from .syntax import AttAtom, Atom, Signature, parse_event_term, parse_formula

GORILLA_SIG = Signature(("a", "b"), ("p", "g"))


def gorilla_model() -> PointedModel:
    sig = GORILLA_SIG
    p, g = Atom("p"), Atom("g")
    attention_all = {AttAtom(x, y) for x in sig.agents for y in sig.atoms}
    inner = {
        "u1": {p, g},
        "u2": {p},
        "u3": {g},
        "u4": set(),
    }
    valuation = {"w0": {p, g, AttAtom("a", "p"), AttAtom("b", "p"), AttAtom("b", "g")}}
    for w, v in inner.items():
        valuation[w] = v | attention_all
    box = [(u, v) for u in inner for v in inner]
    relations = {
        "a": [("w0", u) for u in inner] + box,
        "b": [("w0", "w0")] + box,
    }
    return PointedModel(KripkeModel(sig, list(valuation), relations, valuation), "w0")


@dataclass(frozen=True)
class Check:
    formula: str
    expected: bool


@dataclass(frozen=True)
class Step:
    """Apply an event (None for the initial model), then run the checks."""

    event: str | None
    checks: tuple[Check, ...]


@dataclass(frozen=True)
class Scenario:
    name: str
    description: str
    signature: Signature
    steps: tuple[Step, ...]
    initial: callable = field(default=gorilla_model, repr=False)


GORILLA_DEFAULTS = "Ed(p & g; a:g=-, b:g=-)"

SCENARIOS = {
    "gorilla-inertia": Scenario(
        "gorilla-inertia",
        "a watches the passes and misses the gorilla; unattended atoms keep their old beliefs",
        GORILLA_SIG,
        (
            Step(None, (
                Check("B(a, h(a,g)) & ~h(a,g)", True),
                Check("~h(a,g)", True),
            )),
            Step("F(p & g)", (
                Check("B(a, p)", True),
                Check("B(a, g)", False),
                Check("B(a, ~g)", False),
                Check("B(b, g)", True),
                Check("B(a, ~B(b, g) & ~B(b, ~g))", True),
            )),
        ),
    ),
    "gorilla-default": Scenario(
        "gorilla-default",
        "as above, but both agents default to 'no gorilla' when not attending to g",
        GORILLA_SIG,
        (
            Step(None, (Check("B(a, h(a,g)) & ~h(a,g)", True),)),
            Step(GORILLA_DEFAULTS, (
                Check("B(a, ~g)", True),
                Check("B(a, p)", True),
                Check("g & B(b, B(a, ~g))", True),
            )),
        ),
    ),
    "doctor-robot": Scenario(
        "doctor-robot",
        "doctor a treats a victim (p) and misses a fire (g); robot b sees both",
        GORILLA_SIG,
        (
            Step(None, (Check("p & g & ~h(a,g)", True),)),
            Step(GORILLA_DEFAULTS, (
                Check("g & B(b, B(a, ~g))", True),
                Check("B(a, ~g)", True),
                Check("B(b, g)", True),
            )),
        ),
    ),
}


@dataclass
class ScenarioReport:
    name: str
    lines: list[str] = field(default_factory=list)
    mismatches: int = 0
    models: list[PointedModel] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.mismatches == 0


def run_scenario(name: str) -> ScenarioReport:
    if name not in SCENARIOS:
        raise KeyError(f"unknown scenario {name!r}; choose from {', '.join(SCENARIOS)}")
    sc = SCENARIOS[name]
    pm = sc.initial()
    report = ScenarioReport(name)
    for step in sc.steps:
        if step.event is not None:
            pm = update(pm, parse_event_term(step.event, sc.signature))
            report.lines.append(f"update {step.event} -> point {pm.point}")
        report.models.append(pm)
        for c in step.checks:
            got = satisfies(pm, parse_formula(c.formula, sc.signature))
            status = "ok" if got == c.expected else "MISMATCH"
            report.mismatches += got != c.expected
            report.lines.append(f"  {status:8s} {c.formula} = {str(got).lower()} (expected {str(c.expected).lower()})")
    return report
