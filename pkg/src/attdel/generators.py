"""Seeded random models, conjunctions, formulas and default maps for fuzzing."""

from __future__ import annotations

import random
from dataclasses import dataclass

from .semantics import KripkeModel, PointedModel
from .syntax import (
    TOP, AttAtom, Atom, Believes, DefaultMap, Dyn, EdTerm, FTerm, Formula,
    LiteralConjunction, Not, Signature,
)


@dataclass(frozen=True)
class Bounds:
    min_worlds: int = 1
    max_worlds: int = 4
    min_atoms: int = 1
    max_atoms: int = 3
    min_agents: int = 1
    max_agents: int = 2
    edge_prob: float = 0.5
    atom_prob: float = 0.5
    max_announced: int = 2
    depth: int = 2


ATOM_NAMES = ("p", "q", "r", "s")
AGENT_NAMES = ("a", "b", "c")


def random_signature(rng: random.Random, bounds: Bounds = Bounds()) -> Signature:
    n_atoms = rng.randint(bounds.min_atoms, bounds.max_atoms)
    n_agents = rng.randint(bounds.min_agents, bounds.max_agents)
    return Signature(AGENT_NAMES[:n_agents], ATOM_NAMES[:n_atoms])


def random_model(rng: random.Random, sig: Signature, bounds: Bounds = Bounds()) -> KripkeModel:
    n = rng.randint(bounds.min_worlds, bounds.max_worlds)
    worlds = [f"w{i}" for i in range(n)]
    valuation = {w: [a for a in sig.all_atoms if rng.random() < bounds.atom_prob] for w in worlds}
    relations = {
        agent: [(s, t) for s in worlds for t in worlds if rng.random() < bounds.edge_prob]
        for agent in sig.agents
    }
    return KripkeModel(sig, worlds, relations, valuation)


def random_pointed_model(rng: random.Random, sig: Signature, bounds: Bounds = Bounds()) -> PointedModel:
    m = random_model(rng, sig, bounds)
    return PointedModel(m, rng.choice(m.worlds))


def random_conj(rng: random.Random, sig: Signature, max_atoms: int = 2,
                min_atoms: int = 1) -> LiteralConjunction:
    """A conjunction of propositional literals over distinct atoms of sig."""
    k = rng.randint(min(min_atoms, len(sig.atoms)), min(max_atoms, len(sig.atoms)))
    names = rng.sample(sorted(sig.atoms), k)
    return LiteralConjunction.of((Atom(p), rng.random() < 0.5) for p in names)


def random_defaults(rng: random.Random, sig: Signature) -> DefaultMap:
    """A total default map: every agent and atom gets +, - or T."""
    return DefaultMap(tuple(
        (a, p, rng.choice("+-T")) for a in sig.agents for p in sig.atoms
    ))


def random_atom(rng: random.Random, sig: Signature) -> Formula:
    if rng.random() < 0.7:
        return Atom(rng.choice(sig.atoms))
    return AttAtom(rng.choice(sig.agents), rng.choice(sig.atoms))


def random_formula(rng: random.Random, sig: Signature, depth: int = 2, dyn_depth: int = 0,
                   max_announced: int = 2, defaults: bool = False) -> Formula:
    """A formula with belief depth at most ``depth``.

    ``dyn_depth`` bounds nesting of dynamic modalities over F (or Ed when
    ``defaults`` is set) with announcements of at most ``max_announced`` atoms.
    """
    choices = ["atom", "atom", "top", "not", "and", "or"]
    if depth > 0:
        choices += ["bel", "bel"]
    if dyn_depth > 0:
        choices += ["dyn", "dyn"]
    kind = rng.choice(choices)

    def sub(d=depth, dd=dyn_depth):
        return random_formula(rng, sig, d, dd, max_announced, defaults)

    match kind:
        case "atom":
            return random_atom(rng, sig)
        case "top":
            return TOP
        case "not":
            return Not(sub())
        case "and":
            return sub() & sub()
        case "or":
            return sub() | sub()
        case "bel":
            return Believes(rng.choice(sig.agents), sub(d=depth - 1))
        case "dyn":
            phi = random_conj(rng, sig, max_announced)
            if defaults and rng.random() < 0.5:
                term = EdTerm(phi, random_defaults(rng, sig))
            else:
                term = FTerm(phi)
            return Dyn(term, sub(dd=dyn_depth - 1))
    raise AssertionError(kind)


def all_models(sig: Signature, max_worlds: int) -> list[KripkeModel]:
    """Every Kripke model over sig with 1..max_worlds worlds named w0, w1, ...

    Valuations and relations range over all possibilities, so the count is
    Σ_n 2^(n·|At ∪ H|) · 2^(n²·|Ag|).
    """
    from itertools import product as cartesian

    atoms = sig.all_atoms
    out = []
    for n in range(1, max_worlds + 1):
        worlds = [f"w{i}" for i in range(n)]
        pairs = [(s, t) for s in worlds for t in worlds]
        vals = list(cartesian(range(1 << len(atoms)), repeat=n))
        rels = list(cartesian(range(1 << len(pairs)), repeat=len(sig.agents)))
        for val in vals:
            valuation = {w: [a for i, a in enumerate(atoms) if v >> i & 1] for w, v in zip(worlds, val)}
            for rel in rels:
                relations = {
                    agent: [pr for i, pr in enumerate(pairs) if r >> i & 1]
                    for agent, r in zip(sig.agents, rel)
                }
                out.append(KripkeModel(sig, worlds, relations, valuation))
    return out
