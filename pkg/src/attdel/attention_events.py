"""Constructors for the attention event models and the isomorphism check.

Five constructors are provided:

* ``build_binary(φ, "original")``: events ``(i,J)`` and ``s_top`` with an
  explicit precondition map.
* ``build_binary(φ, "principled")``: events are formulas, with edges from
  Basic Attentiveness and Inertia.
* ``build_binary(φ, "truthful")``: only φ-events plus ⊤, with edges from
  Attentiveness and Inertia.
* ``build_F(φ)``: attention to individual atoms of a literal conjunction.
* ``build_default(φ, d)``: as ``build_F``, but unattended atoms fall back to
  per-agent default values.

Edges of the formula-event models are computed by testing the edge
principles on every pair of events (grouped by the source's attention
profile, which is all the principles look at).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import chain, combinations, product
from typing import Iterable, Mapping

from .errors import Contradictory, EmptyAnnouncement, InconsistentDefaults, PreconditionsNotDistinct
from .semantics import EventModel, MultiPointedEventModel, PointedModel, event_id
from .syntax import (
    EMPTY, AttAtom, BinaryTerm, DefaultMap, EdTerm, EventTerm, Formula,
    FTerm, LiteralConjunction, NamedTerm, Not, PointedTerm, Signature, TOP,
    conj_all, conjuncts, show_conj,
)


def subsets(items: Iterable) -> list[tuple]:
    items = list(items)
    return list(chain.from_iterable(combinations(items, r) for r in range(len(items) + 1)))


def _announced_atoms(phi: LiteralConjunction) -> list[str]:
    if any(isinstance(a, AttAtom) for a in phi.atoms):
        raise ValueError("announcements must be conjunctions of propositional literals")
    return phi.prop_names()


def _model(sig: Signature, events: list[LiteralConjunction], succ, designated) -> MultiPointedEventModel:
    ids = [show_conj(e) for e in events]
    em = EventModel._raw(sig, ids, events, succ)
    return MultiPointedEventModel(em, frozenset(ids[k] for k in designated))


def _attended(e: LiteralConjunction, agent: str, names: Iterable[str]) -> frozenset[str]:
    return frozenset(p for p in names if AttAtom(agent, p) in e.positive)


def _edges(sig, events, names, allowed) -> dict[str, list[frozenset[int]]]:
    """Per agent, successor sets from a predicate allowed(agent, attended, f)."""
    succ = {}
    for agent in sig.agents:
        by_profile: dict[frozenset, frozenset[int]] = {}
        lists = []
        for e in events:
            prof = _attended(e, agent, names)
            if prof not in by_profile:
                by_profile[prof] = frozenset(
                    j for j, f in enumerate(events) if allowed(agent, prof, f)
                )
            lists.append(by_profile[prof])
        succ[agent] = lists
    return succ


# ------------------------------------------------------------ skip model


@lru_cache(maxsize=None)
def skip_model(sig: Signature) -> MultiPointedEventModel:
    """One ⊤ event, looping for every agent: updating with it changes nothing."""
    succ = {a: [frozenset({0})] for a in sig.agents}
    return _model(sig, [EMPTY], succ, [0])


# ------------------------------------------------------------ F(φ)


def f_events(phi: LiteralConjunction, sig: Signature) -> list[LiteralConjunction]:
    """All events ⋀_{p∈S} ℓ(p) ∧ ⋀_a(⋀_{X_a} h_a p ∧ ⋀_{S∖X_a} ¬h_a p)."""
    names = _announced_atoms(phi)
    out = []
    for s in subsets(names):
        base = phi.restrict(s)
        for xs in product(subsets(s), repeat=len(sig.agents)):
            lits = list(base.literals())
            for agent, x in zip(sig.agents, xs):
                lits += [(AttAtom(agent, p), p in x) for p in s]
            out.append(LiteralConjunction.of(lits))
    return out


def build_F(phi: LiteralConjunction, sig: Signature) -> MultiPointedEventModel:
    """Propositional attention: Attentiveness plus Inertia."""
    if not phi:
        raise EmptyAnnouncement("F needs at least one announced literal")
    names = _announced_atoms(phi)
    events = f_events(phi, sig)

    def allowed(agent, attended, f):
        for p in names:
            lit = phi.literal_on(p)
            if p in attended:
                if AttAtom(agent, p) not in f.positive or not f.contains(lit):
                    return False
            elif f.contains(lit):
                return False
        return True

    succ = _edges(sig, events, names, allowed)
    designated = [k for k, e in enumerate(events) if e.contains(phi)]
    return _model(sig, events, succ, designated)


# ------------------------------------------------------------ Ed(φ, d)


def default_events(phi: LiteralConjunction, d: DefaultMap, sig: Signature) -> list[LiteralConjunction]:
    names = _announced_atoms(phi)
    seen: dict[LiteralConjunction, None] = {}
    for b in sig.agents:
        for s in subsets(names):
            base = phi.restrict(s)
            for p in names:
                if p not in s:
                    try:
                        base = base.union(d.literal(b, p))
                    except Contradictory as exc:
                        raise InconsistentDefaults(str(exc)) from exc
            for xs in product(subsets(s), repeat=len(sig.agents)):
                lits = list(base.literals())
                for agent, x in zip(sig.agents, xs):
                    lits += [(AttAtom(agent, p), p in x) for p in s]
                seen.setdefault(LiteralConjunction.of(lits), None)
    return list(seen)


def build_default(phi: LiteralConjunction, d: DefaultMap, sig: Signature) -> MultiPointedEventModel:
    """Attention with defaults: Attentiveness plus Defaulting."""
    if not phi:
        raise EmptyAnnouncement("Ed needs at least one announced literal")
    names = _announced_atoms(phi)
    for agent, p, _ in d.entries:
        if agent not in sig.agents or p not in sig.atoms:
            raise ValueError(f"default for {agent}:{p} is outside the signature")
    events = default_events(phi, d, sig)

    def allowed(agent, attended, f):
        for p in names:
            if p in attended:
                if AttAtom(agent, p) not in f.positive or not f.contains(phi.literal_on(p)):
                    return False
            elif not f.contains(d.literal(agent, p)):
                return False
        return True

    succ = _edges(sig, events, names, allowed)
    designated = [k for k, e in enumerate(events) if e.contains(phi)]
    return _model(sig, events, succ, designated)


# ------------------------------------------------------------ binary models


def attention_formula(agent: str, sig: Signature) -> Formula:
    """h_a: the agent attends to every atom of the signature."""
    return conj_all(AttAtom(agent, p) for p in sorted(sig.atoms))


def binary_precondition(phi: Formula, positive: bool, attentive: Iterable[str], sig: Signature) -> Formula:
    """φ (or ¬φ) ∧ ⋀_{a∈J} h_a ∧ ⋀_{a∉J} ¬h_a."""
    j = set(attentive)
    parts = [phi if positive else Not(phi)]
    for a in sig.agents:
        h = attention_formula(a, sig)
        parts.append(h if a in j else Not(h))
    return conj_all(parts)


def _agent_subsets(sig: Signature) -> list[tuple[str, ...]]:
    return subsets(sig.agents)


def build_binary(phi: Formula, variant: str, sig: Signature) -> MultiPointedEventModel:
    """Binary-attention announcement models: "original", "principled" or "truthful"."""
    if variant == "original":
        return _build_original(phi, sig)
    if variant not in ("principled", "truthful"):
        raise ValueError(f"unknown binary variant {variant!r}")
    signs = (True,) if variant == "truthful" else (False, True)
    pres = [binary_precondition(phi, i, j, sig) for i in signs for j in _agent_subsets(sig)]
    pres.append(TOP)
    # "χ ∈ e" reads as: every top-level conjunct of χ is a conjunct of e
    keys = [frozenset(conjuncts(f)) for f in pres]
    ann = frozenset(conjuncts(phi))
    att = {a: frozenset(conjuncts(attention_formula(a, sig))) for a in sig.agents}
    top = len(pres) - 1

    def has(k: int, part: frozenset) -> bool:
        return k != top and part <= keys[k]

    succ = {}
    for a in sig.agents:
        lists = []
        for e in range(len(pres)):
            if has(e, att[a]):
                # Basic Attentiveness: φ ∈ f; Attentiveness adds h_a ∈ f
                targets = [f for f in range(len(pres))
                           if has(f, ann) and (variant == "principled" or has(f, att[a]))]
            else:
                # Inertia: f = ⊤
                targets = [top]
            lists.append(frozenset(targets))
        succ[a] = lists
    ids = [event_id(f) for f in pres]
    em = EventModel._raw(sig, ids, pres, succ)
    return MultiPointedEventModel(em, frozenset(ids[:top]))


def _build_original(phi: Formula, sig: Signature) -> MultiPointedEventModel:
    """Events (i,J) with i ∈ {0,1}, J ⊆ Ag, plus s_top."""
    shapes = [(i, j) for i in (0, 1) for j in _agent_subsets(sig)]
    ids = [f"({i},{{{','.join(j)}}})" for i, j in shapes] + ["s_top"]
    pres = [binary_precondition(phi, i == 1, j, sig) for i, j in shapes] + [TOP]
    top = len(shapes)
    told = frozenset(k for k, (i, _) in enumerate(shapes) if i == 1)
    succ = {
        a: [told if a in j else frozenset({top}) for _, j in shapes] + [frozenset({top})]
        for a in sig.agents
    }
    em = EventModel._raw(sig, ids, pres, succ)
    return MultiPointedEventModel(em, frozenset(ids[:top]))


# ------------------------------------------------------------ elaboration


@lru_cache(maxsize=4096)
def _elaborate_cached(term: EventTerm, sig: Signature) -> MultiPointedEventModel:
    match term:
        case FTerm(announcement=phi):
            return build_F(phi, sig) if phi else skip_model(sig)
        case EdTerm(announcement=phi, defaults=d):
            return build_default(phi, d, sig) if phi else skip_model(sig)
        case BinaryTerm(variant=v, announcement=phi):
            return build_binary(phi, v, sig)
        case PointedTerm(base=base, designated=ds):
            me = elaborate(base, sig)
            ids = frozenset(show_conj(c) for c in ds)
            missing = ids - set(me.model.events)
            if missing:
                raise ValueError(f"{sorted(missing)} are not events of {base}")
            return MultiPointedEventModel(me.model, ids)
    raise TypeError(f"cannot elaborate {term!r}")


def elaborate(term: EventTerm, sig: Signature) -> MultiPointedEventModel:
    """The event model denoted by a constructor term (cached per term and signature)."""
    if isinstance(term, NamedTerm):
        if term.model is None:
            raise ValueError(f"event model @{term.name} was never loaded")
        return term.model
    return _elaborate_cached(term, sig)


# ------------------------------------------------------------ isomorphism


def precondition_key(pre: Formula | LiteralConjunction) -> frozenset:
    """Preconditions compared as sets of top-level conjuncts."""
    f = pre.to_formula() if isinstance(pre, LiteralConjunction) else pre
    return frozenset(c for c in conjuncts(f) if c != TOP)


def check_isomorphic(m1, m2) -> bool:
    """True iff matching events by precondition is a bijection preserving all edges."""
    e1 = m1.model if isinstance(m1, MultiPointedEventModel) else m1
    e2 = m2.model if isinstance(m2, MultiPointedEventModel) else m2
    keys = []
    for em in (e1, e2):
        ks = [precondition_key(p) for p in em._pre]
        if len(set(ks)) != len(ks):
            raise PreconditionsNotDistinct(f"{em!r} has events with identical preconditions")
        keys.append(ks)
    k1, k2 = keys
    if set(k1) != set(k2) or set(e1.sig.agents) != set(e2.sig.agents):
        return False
    where = {k: i for i, k in enumerate(k2)}
    match = [where[k] for k in k1]
    for a in e1.sig.agents:
        s1, s2 = e1._succ[a], e2._succ[a]
        for i, js in enumerate(s1):
            if frozenset(match[j] for j in js) != s2[match[i]]:
                return False
    return True


# ------------------------------------------------------------ attention configs


@dataclass(frozen=True)
class AttentionConfig:
    """Per agent, the announced atoms the agent attends to at a world."""

    sets: Mapping[str, frozenset[str]]

    def __getitem__(self, agent: str) -> frozenset[str]:
        return self.sets[agent]

    def condition(self, agent: str, phi: LiteralConjunction) -> Formula:
        """⋀_{p∈S} h_a p ∧ ⋀_{p∈At(φ)∖S} ¬h_a p."""
        return config_formula(agent, self.sets[agent], phi.prop_names())


def config_formula(agent: str, attended: Iterable[str], names: Iterable[str]) -> Formula:
    s = set(attended)
    return conj_all(AttAtom(agent, p) if p in s else Not(AttAtom(agent, p)) for p in names)


def attention_config(pm: PointedModel, phi: LiteralConjunction) -> AttentionConfig:
    true = pm.model.true_atoms(pm.point)
    names = phi.prop_names()
    return AttentionConfig(
        {a: frozenset(p for p in names if AttAtom(a, p) in true) for a in pm.model.sig.agents}
    )


def reduced_announcement(phi: LiteralConjunction, attended: Iterable[str]) -> LiteralConjunction:
    """φ_S: the literals of φ over the attended atoms."""
    return phi.restrict(attended)


def default_announcement(phi: LiteralConjunction, attended: Iterable[str], agent: str,
                         d: DefaultMap) -> LiteralConjunction:
    """φ_Sd: attended literals of φ plus the agent's defaults elsewhere."""
    s = set(attended)
    out = phi.restrict(s)
    for p in phi.prop_names():
        if p not in s:
            out = out.union(d.literal(agent, p))
    return out
