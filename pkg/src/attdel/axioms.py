"""Reduction axioms, the rewriter built from them, soundness fuzzing and lemma checks.

Three forms of the belief schemas are available:

``verbatim``
    The schema as written: φ → ⋁_S (config_S → B_a [F(φ_S)]ψ).  Because the
    attention configurations are mutually exclusive, the disjunction is a
    tautology as soon as φ has an atom, so this form is not sound.
``repaired``
    φ → ⋀_S (config_S → B_a (h_S → [F(φ_S)]ψ)), where h_S says that a attends
    to every atom of S.  For defaults, a form through single-pointed event
    terms (see ``pointed_belief``).
``mutant``
    The repaired form with the ¬h_a p conjuncts dropped from config_S.  Used
    to check that the fuzzer has teeth.

``reduce`` always uses sound rewrites.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Iterable

from .attention_events import (
    attention_config, config_formula, default_announcement, elaborate,
    reduced_announcement, subsets,
)
from .errors import MissingDefaults, NotApplicable, UnsupportedEventTerm
from .generators import (
    Bounds, random_conj, random_defaults, random_formula, random_pointed_model,
    random_signature,
)
from .io import model_to_json
from .semantics import (
    MultiPointedEventModel, PointedModel, applicable, bisimilar_pairs, product_update,
    satisfies,
)
from .syntax import (
    TOP, And, Atom, AttAtom, Believes, DefaultMap, Dyn, EdTerm, EventTerm,
    FTerm, Formula, LiteralConjunction, Not, PointedTerm, Signature, Top,
    conj_all, disj_all, iff, implies, show,
)

SCHEMAS = (
    "atom-reduction",
    "negation-reduction",
    "conjunction-reduction",
    "belief-reduction",
    "belief-reduction-default",
)
FORMS = ("verbatim", "repaired", "mutant")


@dataclass(frozen=True)
class AxiomInstance:
    name: str
    lhs: Formula
    rhs: Formula

    @property
    def formula(self) -> Formula:
        return iff(self.lhs, self.rhs)

    def __str__(self) -> str:
        return f"{show(self.lhs)}  <->  {show(self.rhs)}"


# ------------------------------------------------------------ small builders


def _imp(a: Formula, b: Formula) -> Formula:
    if a == TOP:
        return b
    if b == TOP:
        return TOP
    return implies(a, b)


def _and(parts: Iterable[Formula]) -> Formula:
    return conj_all(p for p in parts if p != TOP)


def attends_all(agent: str, names: Iterable[str]) -> Formula:
    """h_S: the agent attends to every listed atom."""
    return conj_all(AttAtom(agent, p) for p in names)


def _exactly(pres: list[LiteralConjunction], k: int) -> Formula:
    """Precondition k holds and no other listed precondition does."""
    return _and([pres[k].to_formula(), *(Not(p.to_formula()) for j, p in enumerate(pres) if j != k)])


def _designated(me: MultiPointedEventModel) -> list[int]:
    return sorted(me._designated_idx)


def _pres(me: MultiPointedEventModel) -> list[LiteralConjunction]:
    return list(me.model._pre)


# ------------------------------------------------------------ schemas


def _f_belief(phi: LiteralConjunction, agent: str, psi: Formula, form: str) -> Formula:
    names = phi.prop_names()
    parts = []
    for s in subsets(names):
        inner = Dyn(FTerm(reduced_announcement(phi, s)), psi)
        if form == "verbatim":
            parts.append(implies(config_formula(agent, s, names), Believes(agent, inner)))
        else:
            cond = attends_all(agent, s) if form == "mutant" else config_formula(agent, s, names)
            parts.append(implies(cond, Believes(agent, implies(attends_all(agent, s), inner))))
    body = disj_all(parts) if form == "verbatim" else conj_all(parts)
    return implies(phi.to_formula(), body)


def _d_belief_verbatim(phi: LiteralConjunction, agent: str, psi: Formula, d: DefaultMap) -> Formula:
    names = phi.prop_names()
    parts = [
        implies(
            config_formula(agent, s, names),
            Believes(agent, Dyn(EdTerm(default_announcement(phi, s, agent, d), d), psi)),
        )
        for s in subsets(names)
    ]
    return implies(phi.to_formula(), disj_all(parts))


def pointed_belief(term: EventTerm, agent: str, psi: Formula, sig: Signature) -> Formula:
    """Sound rhs for [term]B_a ψ through single-pointed terms.

    ⋀_g (exactly g among the designated → B_a ⋀_{g'∈Q_a[g]} [term{g'}]ψ)
    """
    me = elaborate(term, sig)
    base = term.base if isinstance(term, PointedTerm) else term
    pres = _pres(me)
    des = _designated(me)
    dpres = [pres[k] for k in des]
    parts = []
    for i, k in enumerate(des):
        succ = sorted(me.model._succ[agent][k])
        inner = _and(Dyn(PointedTerm(base, (pres[j],)), psi) for j in succ)
        parts.append(_imp(_exactly(dpres, i), Believes(agent, inner)))
    return _and(parts)


def instantiate(name: str, phi: LiteralConjunction, agent: str, psi: Formula,
                d: DefaultMap | None = None, form: str = "verbatim",
                sig: Signature | None = None) -> AxiomInstance:
    """The named schema instantiated with announcement phi, agent and ψ.

    For conjunction-reduction ψ must be a conjunction; for atom-reduction an
    atom of At ∪ H.  The repaired default schema needs ``sig``.
    """
    if name not in SCHEMAS:
        raise ValueError(f"unknown schema {name!r}; choose from {', '.join(SCHEMAS)}")
    if form not in FORMS:
        raise ValueError(f"unknown form {form!r}")
    if name == "belief-reduction-default":
        if d is None:
            raise MissingDefaults("belief-reduction-default needs a default map")
    elif d is not None:
        raise ValueError(f"{name} takes no default map")
    f_term = FTerm(phi)
    ann = phi.to_formula()
    match name:
        case "atom-reduction":
            if not isinstance(psi, (Atom, AttAtom)):
                raise ValueError("atom-reduction needs an atom")
            return AxiomInstance(name, Dyn(f_term, psi), implies(ann, psi))
        case "negation-reduction":
            return AxiomInstance(name, Dyn(f_term, Not(psi)), implies(ann, Not(Dyn(f_term, psi))))
        case "conjunction-reduction":
            if not isinstance(psi, And):
                raise ValueError("conjunction-reduction needs a conjunction")
            return AxiomInstance(
                name, Dyn(f_term, psi), And(Dyn(f_term, psi.left), Dyn(f_term, psi.right))
            )
        case "belief-reduction":
            return AxiomInstance(name, Dyn(f_term, Believes(agent, psi)), _f_belief(phi, agent, psi, form))
        case "belief-reduction-default":
            term = EdTerm(phi, d)
            lhs = Dyn(term, Believes(agent, psi))
            if form == "verbatim":
                return AxiomInstance(name, lhs, _d_belief_verbatim(phi, agent, psi, d))
            if form == "mutant":
                raise ValueError("the mutant form exists only for belief-reduction")
            if sig is None:
                raise ValueError("the repaired default schema needs a signature")
            return AxiomInstance(name, lhs, pointed_belief(term, agent, psi, sig))
    raise AssertionError(name)


# ------------------------------------------------------------ rewriter


@dataclass
class ReduceStats:
    steps: int = 0


def _check_term(t: EventTerm) -> None:
    base = t.base if isinstance(t, PointedTerm) else t
    if not isinstance(base, (FTerm, EdTerm)):
        raise UnsupportedEventTerm(f"no reduction axioms for {show(t)}")


class _Reducer:
    def __init__(self, sig: Signature | None):
        self.sig = sig
        self.memo: dict = {}
        self.stats = ReduceStats()

    def reduce(self, f: Formula) -> Formula:
        match f:
            case Top() | Atom() | AttAtom():
                return f
            case Not(body=b):
                return Not(self.reduce(b))
            case And(left=l, right=r):
                return And(self.reduce(l), self.reduce(r))
            case Believes(agent=a, body=b):
                return Believes(a, self.reduce(b))
            case Dyn(term=t, body=b):
                _check_term(t)
                return self.push(t, self.reduce(b))
        raise TypeError(f"not a formula: {f!r}")

    def push(self, t: EventTerm, psi: Formula) -> Formula:
        """Rewrite [t]ψ for a Dyn-free ψ."""
        key = (t, psi)
        hit = self.memo.get(key)
        if hit is None:
            self.stats.steps += 1
            hit = self.memo[key] = (self._push_f if isinstance(t, FTerm) else self._push_model)(t, psi)
        return hit

    def _push_f(self, t: FTerm, psi: Formula) -> Formula:
        phi = t.announcement
        ann = phi.to_formula()
        match psi:
            case Top():
                return TOP
            case Atom() | AttAtom():
                return _imp(ann, psi)
            case Not(body=b):
                return _imp(ann, Not(self.push(t, b)))
            case And(left=l, right=r):
                return And(self.push(t, l), self.push(t, r))
            case Believes(agent=a, body=b):
                names = phi.prop_names()
                parts = []
                for s in subsets(names):
                    inner = self.push(FTerm(reduced_announcement(phi, s)), b)
                    parts.append(_imp(
                        config_formula(a, s, names),
                        Believes(a, _imp(attends_all(a, s), inner)),
                    ))
                return _imp(ann, _and(parts))
        raise TypeError(f"not a formula: {psi!r}")

    def _model(self, t: EventTerm) -> MultiPointedEventModel:
        if self.sig is None:
            raise ValueError(f"reducing {show(t)} needs a signature")
        return elaborate(t, self.sig)

    def _exactly(self, t: EventTerm, dpres: list[LiteralConjunction], i: int) -> Formula:
        key = ("exactly", t, i)
        if key not in self.memo:
            self.memo[key] = _exactly(dpres, i)
        return self.memo[key]

    def _applicability(self, t: EventTerm, dpres: list[LiteralConjunction]) -> Formula:
        """Exactly one designated precondition holds."""
        if len(dpres) == 1:
            return dpres[0].to_formula()
        key = ("app", t)
        if key not in self.memo:
            self.memo[key] = disj_all(self._exactly(t, dpres, i) for i in range(len(dpres)))
        return self.memo[key]

    def _push_model(self, t: EventTerm, psi: Formula) -> Formula:
        """Generic rewrites for a constructor model with conjunctive preconditions."""
        me = self._model(t)
        pres = _pres(me)
        des = _designated(me)
        dpres = [pres[k] for k in des]
        app = self._applicability(t, dpres)
        match psi:
            case Top():
                return TOP
            case Atom() | AttAtom():
                return _imp(app, psi)
            case Not(body=b):
                return _imp(app, Not(self.push(t, b)))
            case And(left=l, right=r):
                return And(self.push(t, l), self.push(t, r))
            case Believes(agent=a, body=b):
                base = t.base if isinstance(t, PointedTerm) else t
                parts = []
                for i, k in enumerate(des):
                    succ = sorted(me.model._succ[a][k])
                    inner = _and(self.push(PointedTerm(base, (pres[j],)), b) for j in succ)
                    cond = app if len(des) == 1 else self._exactly(t, dpres, i)
                    parts.append(_imp(cond, Believes(a, inner)))
                return _and(parts)
        raise TypeError(f"not a formula: {psi!r}")


def reduce(f: Formula, sig: Signature | None = None, stats: ReduceStats | None = None) -> Formula:
    """An equivalent formula without dynamic modalities.

    F terms are rewritten with the repaired schemas; Ed and re-pointed terms
    through their elaborated models, which needs ``sig``.
    """
    r = _Reducer(sig)
    out = r.reduce(f)
    if stats is not None:
        stats.steps += r.stats.steps
    return out


# ------------------------------------------------------------ fuzzing


@dataclass
class Counterexample:
    schema: str
    trial: int
    model: dict
    point: str
    formula: str
    lhs: bool
    rhs: bool

    def to_json(self) -> dict:
        return {
            "schema": self.schema, "trial": self.trial, "model": self.model,
            "point": self.point, "formula": self.formula, "lhs": self.lhs, "rhs": self.rhs,
        }


@dataclass
class FuzzReport:
    trials: int
    seed: int
    form: str
    per_schema: dict[str, int] = field(default_factory=dict)
    failures: list[Counterexample] = field(default_factory=list)

    @property
    def total(self) -> int:
        return sum(self.per_schema.values())

    def failures_for(self, schema: str) -> list[Counterexample]:
        return [c for c in self.failures if c.schema == schema]

    def summary(self) -> str:
        return f"trials={self.total} failures={len(self.failures)}"

    def to_json(self) -> dict:
        return {
            "trials": self.trials, "seed": self.seed, "form": self.form,
            "per_schema": self.per_schema,
            "failures": [c.to_json() for c in self.failures],
        }


def _random_instance(rng: random.Random, schema: str, bounds: Bounds, form: str):
    sig = random_signature(rng, bounds)
    pm = random_pointed_model(rng, sig, bounds)
    phi = random_conj(rng, sig, bounds.max_announced)
    agent = rng.choice(sig.agents)
    if schema == "atom-reduction":
        psi = Atom(rng.choice(sig.atoms)) if rng.random() < 0.6 else AttAtom(
            rng.choice(sig.agents), rng.choice(sig.atoms))
    elif schema == "conjunction-reduction":
        psi = And(random_formula(rng, sig, bounds.depth - 1), random_formula(rng, sig, bounds.depth - 1))
    else:
        psi = random_formula(rng, sig, bounds.depth - 1)
    d = random_defaults(rng, sig) if schema == "belief-reduction-default" else None
    use_form = form if schema.startswith("belief") else "verbatim"
    if schema == "belief-reduction-default" and form == "mutant":
        use_form = "repaired"
    return pm, instantiate(schema, phi, agent, psi, d, use_form, sig)


def soundness_fuzz(trials: int, seed: int = 0, bounds: Bounds = Bounds(), form: str = "verbatim",
                   schemas: Iterable[str] = SCHEMAS, max_failures: int | None = None) -> FuzzReport:
    """Compare both sides of random axiom instances on random pointed models.

    Each schema gets ``trials`` instances from its own seeded stream, so the
    report is deterministic per (seed, schema).  ``max_failures`` stops a
    schema early once that many counterexamples are found.
    """
    if trials < 1:
        raise ValueError("trials must be positive")
    report = FuzzReport(trials, seed, form)
    for schema in schemas:
        rng = random.Random(f"{seed}:{schema}")
        found = 0
        done = 0
        for t in range(trials):
            pm, inst = _random_instance(rng, schema, bounds, form)
            done += 1
            lhs, rhs = satisfies(pm, inst.lhs), satisfies(pm, inst.rhs)
            if lhs != rhs:
                report.failures.append(Counterexample(
                    schema, t, model_to_json(pm), pm.point, show(inst.formula), lhs, rhs,
                ))
                found += 1
                if max_failures is not None and found >= max_failures:
                    break
        report.per_schema[schema] = done
    return report


# ------------------------------------------------------------ lemma checks


@dataclass
class LemmaResult:
    holds: bool
    attended: frozenset[str]
    main: str
    reduced: str
    reason: str = ""
    same_successors: bool = False
    bisimilar: bool = False


def lemma_check(pm: PointedModel, phi: LiteralConjunction, agent: str, variant: str = "plain",
                d: DefaultMap | None = None) -> LemmaResult:
    """Compare the update by the full announcement with the one the agent attends to."""
    if variant not in ("plain", "default"):
        raise ValueError("variant must be 'plain' or 'default'")
    if variant == "default" and d is None:
        raise MissingDefaults("the default variant needs a default map")
    if not satisfies(pm, phi.to_formula()):
        raise NotApplicable(f"{show(phi)} is false at {pm.point!r}")
    s = attention_config(pm, phi)[agent]
    if variant == "plain":
        main, reduced = FTerm(phi), FTerm(reduced_announcement(phi, s))
    else:
        main, reduced = EdTerm(phi, d), EdTerm(default_announcement(phi, s, agent, d), d)
    sig = pm.model.sig
    main_me = elaborate(main, sig)
    if applicable(pm, main_me) is None:
        raise NotApplicable(f"{show(main)} is not applicable at {pm.point!r}")
    result = LemmaResult(False, s, show(main), show(reduced))
    red_me = elaborate(reduced, sig)
    if applicable(pm, red_me) is None:
        result.reason = f"{show(reduced)} is not applicable at {pm.point!r}"
        return result
    left = product_update(pm, main_me)
    right = product_update(pm, red_me)
    s1 = left.model.successors(agent, left.point)
    s2 = right.model.successors(agent, right.point)
    result.same_successors = s1 == s2
    if not result.same_successors:
        only1, only2 = sorted(s1 - s2), sorted(s2 - s1)
        result.reason = f"successor sets differ: only after {show(main)}: {only1}; only after {show(reduced)}: {only2}"
    result.bisimilar = bisimilar_pairs(left.model, right.model, [(x, x) for x in s1 & s2])
    if not result.bisimilar:
        result.reason = (result.reason + "; " if result.reason else "") + "a shared successor is not bisimilar"
    result.holds = result.same_successors and result.bisimilar
    return result


def check_lemma(pm: PointedModel, phi: LiteralConjunction, agent: str, variant: str = "plain",
                d: DefaultMap | None = None) -> bool:
    return lemma_check(pm, phi, agent, variant, d).holds
