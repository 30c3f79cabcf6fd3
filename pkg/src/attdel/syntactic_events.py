"""Event models described by formulas of the event language.

A syntactic event model gives one formula ``psi_E`` that selects the events
(normal-form literal conjunctions) and one formula per agent that constrains
the relation.  ``induce`` turns it into an ordinary multi-pointed event model.

Relations are kept as per-event successor bitmasks over the event list.
"""

from __future__ import annotations

import time
import warnings
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

from .errors import EnumerationCapExceeded, FragmentViolation, NotSingleAgent, TooLarge
from .semantics import EventModel, MultiPointedEventModel, _bits
from .syntax import (
    TOP, AttAtom, Atom, Box, EventFormula, EventImplies, EventNot, EventOr,
    ImpliesEvent, LiteralConjunction, Not, Signature, ev_and, ev_and_all,
    ev_conjuncts, ev_implies, ev_or_all, entailed_literals, implies,
    prop_atoms, prop_valid, show, show_conj, token_count,
)

DEFAULT_CAP = 10**6


@dataclass(frozen=True)
class SyntacticEventModel:
    psi_E: EventFormula
    psi_a: Mapping[str, EventFormula] = field(default_factory=dict)
    psi_Ed: EventFormula | None = None

    def formulas(self) -> list[EventFormula]:
        out = [self.psi_E, *self.psi_a.values()]
        if self.psi_Ed is not None:
            out.append(self.psi_Ed)
        return out


# ------------------------------------------------------------ leaf tests


@lru_cache(maxsize=None)
def _support(psi) -> frozenset:
    return frozenset(prop_atoms(psi))


@lru_cache(maxsize=None)
def _entailed(psi):
    return entailed_literals(psi)


@lru_cache(maxsize=1 << 16)
def _pre_entails(pre: LiteralConjunction, psi) -> bool:
    return prop_valid(implies(pre.to_formula(), psi))


def _restrict(c: LiteralConjunction, atoms: frozenset) -> LiteralConjunction:
    return LiteralConjunction(c.positive & atoms, c.negative & atoms)


def _implied_by(c: LiteralConjunction, psi) -> bool:
    """⊨ ψ → c, using that c is a consistent literal conjunction."""
    ent = _entailed(psi)
    return ent is None or ent.contains(c)


def _implies(c: LiteralConjunction, psi) -> bool:
    """⊨ c → ψ; literals outside the atoms of ψ are irrelevant."""
    return _pre_entails(_restrict(c, _support(psi)), psi)


def _leaf(c: LiteralConjunction, leaf) -> bool:
    if isinstance(leaf, ImpliesEvent):
        return _implied_by(c, leaf.prop)
    return _implies(c, leaf.prop)


def _box_free(chi) -> bool:
    match chi:
        case ImpliesEvent() | EventImplies():
            return True
        case EventNot(body=b):
            return _box_free(b)
        case EventOr(left=l, right=r):
            return _box_free(l) and _box_free(r)
    return False


def box_depth(chi) -> int:
    match chi:
        case ImpliesEvent() | EventImplies():
            return 0
        case EventNot(body=b):
            return box_depth(b)
        case EventOr(left=l, right=r):
            return max(box_depth(l), box_depth(r))
        case Box(body=b):
            return 1 + box_depth(b)
    raise TypeError(f"not an event formula: {chi!r}")


# ------------------------------------------------------------ satisfaction


def _holds(events: Sequence[LiteralConjunction], succ: Sequence[int], k: int, chi) -> bool:
    match chi:
        case ImpliesEvent() | EventImplies():
            return _leaf(events[k], chi)
        case EventNot(body=b):
            return not _holds(events, succ, k, b)
        case EventOr(left=l, right=r):
            return _holds(events, succ, k, l) or _holds(events, succ, k, r)
        case Box(body=b):
            return all(_holds(events, succ, j, b) for j in _bits(succ[k]))
    raise TypeError(f"not an event formula: {chi!r}")


def _as_conj(pre) -> LiteralConjunction:
    if isinstance(pre, LiteralConjunction):
        return pre
    from .syntax import normalize

    return normalize(pre)


def ev_satisfies(em, e: str, chi: EventFormula, agent: str | None = None) -> bool:
    """Truth of an event-language formula at event e of a single-agent model.

    With ``agent`` given, a multi-agent model is read through that agent's
    relation only.
    """
    if isinstance(em, MultiPointedEventModel):
        em = em.model
    if agent is None:
        if len(em.sig.agents) != 1:
            raise NotSingleAgent(
                f"event-language formulas need a single-agent model, got agents {em.sig.agents}"
            )
        agent = em.sig.agents[0]
    events = [_as_conj(p) for p in em._pre]
    succ = [sum(1 << j for j in js) for js in em._succ[agent]]
    return _holds(events, succ, em.index(e), chi)


def singleton_satisfies(pre: LiteralConjunction, chi: EventFormula) -> bool:
    """Truth of chi in the one-event model {pre} without edges."""
    return _holds([pre], [0], 0, chi)


def valid_in(events: Sequence[LiteralConjunction], succ: Sequence[int], chi: EventFormula) -> bool:
    return all(_holds(events, succ, k, chi) for k in range(len(events)))


# ------------------------------------------------------------ candidate events


def _compile(chi, idx: dict, atoms: list):
    """Event formula to a tuple tree over atom bitmasks, for partial evaluation."""
    match chi:
        case EventImplies(prop=psi):
            support = _support(psi)
            mask = sum(1 << idx[a] for a in support)
            return ("implies", mask, psi, {})
        case ImpliesEvent(prop=psi):
            ent = _entailed(psi)
            if ent is None:
                return ("true",)
            return ("implied", sum(1 << idx[a] for a in ent.positive),
                    sum(1 << idx[a] for a in ent.negative))
        case EventNot(body=b):
            return ("not", _compile(b, idx, atoms))
        case EventOr(left=l, right=r):
            return ("or", _compile(l, idx, atoms), _compile(r, idx, atoms))
        case Box():
            return ("true",)
    raise TypeError(f"not an event formula: {chi!r}")


def _tri(node, pos: int, neg: int, decided: int, full: int, atoms: list):
    """Three-valued truth in the singleton model of a partial conjunction.

    pos/neg/decided are atom bitmasks; None means not yet determined.
    """
    tag = node[0]
    if tag == "implies":
        _, support, psi, memo = node
        if support & ~decided:
            return None
        key = (pos & support, neg & support)
        hit = memo.get(key)
        if hit is None:
            c = LiteralConjunction(
                frozenset(atoms[i] for i in _bits(key[0])),
                frozenset(atoms[i] for i in _bits(key[1])),
            )
            hit = memo[key] = _pre_entails(c, psi)
        return hit
    if tag == "implied":
        if pos & ~node[1] or neg & ~node[2]:
            return False
        return True if decided == full else None
    if tag == "not":
        v = _tri(node[1], pos, neg, decided, full, atoms)
        return None if v is None else not v
    if tag == "or":
        a = _tri(node[1], pos, neg, decided, full, atoms)
        if a is True:
            return True
        b = _tri(node[2], pos, neg, decided, full, atoms)
        if b is True:
            return True
        return False if a is False and b is False else None
    return True


def candidate_events(psi_E: EventFormula, sig: Signature, cap: int = DEFAULT_CAP) -> list[LiteralConjunction]:
    """All normal-form conjunctions over the full signature that satisfy psi_E.

    Backtracks over atoms in signature order, pruning as soon as a conjunct
    of psi_E is decided false.  ``cap`` bounds the number of search nodes.
    """
    atoms = list(sig.all_atoms)
    idx = {a: i for i, a in enumerate(atoms)}
    unknown = {a for c in _leaves(psi_E) for a in _support(c.prop)} - set(atoms)
    if unknown:
        raise ValueError(f"atoms {sorted(map(str, unknown))} are not in signature {sig}")
    full = (1 << len(atoms)) - 1
    out: list[LiteralConjunction] = []
    nodes = 0

    def visit(i: int, pos: int, neg: int, pending: list):
        nonlocal nodes
        nodes += 1
        if nodes > cap:
            raise EnumerationCapExceeded(
                f"candidate enumeration explored more than {cap} nodes over {len(atoms)} atoms"
            )
        decided = (1 << i) - 1
        rest = []
        for c in pending:
            v = _tri(c, pos, neg, decided, full, atoms)
            if v is False:
                return
            if v is None:
                rest.append(c)
        if i == len(atoms):
            if rest:
                raise AssertionError("undecided conjunct on a complete conjunction")
            out.append(LiteralConjunction(
                frozenset(atoms[k] for k in _bits(pos)), frozenset(atoms[k] for k in _bits(neg))
            ))
            return
        bit = 1 << i
        visit(i + 1, pos | bit, neg, rest)
        visit(i + 1, pos, neg | bit, rest)
        visit(i + 1, pos, neg, rest)

    visit(0, 0, 0, [_compile(c, idx, atoms) for c in ev_conjuncts(psi_E)])
    return out


def _leaves(chi):
    match chi:
        case ImpliesEvent() | EventImplies():
            yield chi
        case EventNot(body=b) | Box(body=b):
            yield from _leaves(b)
        case EventOr(left=l, right=r):
            yield from _leaves(l)
            yield from _leaves(r)


# ------------------------------------------------------------ relations


def edge_fragment_check(chi: EventFormula) -> bool:
    """Reject nested Box; return whether chi is a conjunction of α → Box β principles.

    Box-free conjuncts and bare Box β conjuncts also count as principles.
    """
    if box_depth(chi) > 1:
        raise FragmentViolation(f"nested box in {show(chi)}")
    for c in ev_conjuncts(chi):
        if _box_free(c):
            continue
        match c:
            case Box():
                continue
            case EventOr(left=EventNot(body=alpha), right=Box()) if _box_free(alpha):
                continue
        return False
    return True


def _edge_rows(events: Sequence[LiteralConjunction], chi, full: int) -> list[int]:
    n = len(events)
    match chi:
        case ImpliesEvent() | EventImplies():
            return [full if _leaf(e, chi) else 0 for e in events]
        case EventNot(body=b):
            return [full ^ m for m in _edge_rows(events, b, full)]
        case EventOr(left=l, right=r):
            return [x | y for x, y in zip(_edge_rows(events, l, full), _edge_rows(events, r, full))]
        case Box(body=b):
            if not _box_free(b):
                raise FragmentViolation(f"nested box in {show(chi)}")
            mask = sum(1 << j for j, f in enumerate(events) if singleton_satisfies(f, b))
            return [mask] * n
    raise TypeError(f"not an event formula: {chi!r}")


def edgewise_rows(events: Sequence[LiteralConjunction], chi: EventFormula) -> list[int]:
    """(e,f) is an edge iff chi holds when tests read e and each Box reads f."""
    return _edge_rows(events, chi, (1 << len(events)) - 1)


def _pairs(events, rows) -> frozenset:
    return frozenset((events[i], events[j]) for i, m in enumerate(rows) for j in _bits(m))


def edgewise_relation(events: Iterable[LiteralConjunction], chi: EventFormula) -> frozenset:
    events = list(events)
    return _pairs(events, edgewise_rows(events, chi))


def largest_Q_bruteforce(events: Iterable[LiteralConjunction], chi: EventFormula) -> frozenset:
    """The unique ⊆-largest Q ⊆ E² with (E,Q) ⊨ chi, or the empty relation.

    Enumerates every relation.  The ⊆-maximum exists iff the union of all
    valid relations is itself valid.
    """
    events = list(events)
    n = len(events)
    if n * n > 20:
        raise TooLarge(f"{n} events give 2^{n * n} relations to enumerate")
    row_full = 1 << n
    if box_depth(chi) <= 1:
        # truth at e depends only on the successor row of e
        ok = [[_holds(events, [r] * n, k, chi) for r in range(row_full)] for k in range(n)]

        def valid(rows):
            return all(ok[k][rows[k]] for k in range(n))
    else:
        def valid(rows):
            return valid_in(events, rows, chi)

    union = [0] * n
    found = False
    for code in range(1 << (n * n)):
        rows = [(code >> (k * n)) & (row_full - 1) for k in range(n)]
        if valid(rows):
            found = True
            union = [u | r for u, r in zip(union, rows)]
    if not found or not valid(union):
        return frozenset()
    return _pairs(events, union)


# ------------------------------------------------------------ induction


@dataclass
class Induced:
    """An induced model with per-agent diagnostics."""

    model: MultiPointedEventModel
    events: list[LiteralConjunction]
    edgewise: dict[str, list[int]]
    verified: dict[str, bool]
    principle_shaped: dict[str, bool]


def induce_full(g: SyntacticEventModel, sig: Signature, cap: int = DEFAULT_CAP,
                verify: bool = True) -> Induced:
    unknown = set(g.psi_a) - set(sig.agents)
    if unknown:
        raise ValueError(f"psi_a given for unknown agents {sorted(unknown)}")
    shaped = {a: edge_fragment_check(chi) for a, chi in g.psi_a.items()}
    events = candidate_events(g.psi_E, sig, cap)
    if not events:
        raise ValueError("psi_E admits no events")
    succ, edgewise, verified = {}, {}, {}
    for a in sig.agents:
        chi = g.psi_a.get(a)
        if chi is None:
            rows = [0] * len(events)
            edgewise[a], verified[a], succ[a] = rows, True, rows
            continue
        if not shaped[a]:
            warnings.warn(
                f"relation formula for {a} is not a conjunction of principles; "
                "the edge-wise relation may not be the largest one",
                stacklevel=2,
            )
        rows = edgewise_rows(events, chi)
        edgewise[a] = rows
        verified[a] = valid_in(events, rows, chi)
        succ[a] = rows if verified[a] or not verify else [0] * len(events)
    ids = [show_conj(e) for e in events]
    em = EventModel._raw(sig, ids, events, {a: [frozenset(_bits(m)) for m in rows]
                                            for a, rows in succ.items()})
    if g.psi_Ed is None:
        designated = frozenset(ids)
    else:
        designated = frozenset(i for i, e in zip(ids, events) if singleton_satisfies(e, g.psi_Ed))
        if not designated:
            raise ValueError("psi_Ed selects no event")
    return Induced(MultiPointedEventModel(em, designated), events, edgewise, verified, shaped)


def induce(g: SyntacticEventModel, sig: Signature, cap: int = DEFAULT_CAP,
           verify: bool = True) -> MultiPointedEventModel:
    """The induced multi-pointed event model.

    Each relation is computed edge-wise and then checked for validity; a
    relation that fails the check is replaced by the empty relation unless
    ``verify`` is False.
    """
    return induce_full(g, sig, cap, verify).model


# ------------------------------------------------------------ generators


def _ev_iff_top() -> EventFormula:
    return ev_and(ImpliesEvent(TOP), EventImplies(TOP))


def g_signature(n: int) -> Signature:
    if n < 1:
        raise ValueError("n must be positive")
    return Signature(tuple(str(k) for k in range(1, n + 1)), ("q",))


def gen_G(n: int) -> SyntacticEventModel:
    """Binary attention to q for agents 1..n, written as principles."""
    sig = g_signature(n)
    q = Atom("q")
    decided = ev_or_all([EventImplies(q), EventImplies(Not(q))])
    attention = [
        EventOr(EventImplies(AttAtom(k, "q")), EventImplies(Not(AttAtom(k, "q"))))
        for k in sig.agents
    ]
    psi_E = EventOr(_ev_iff_top(), ev_and_all([decided, *attention]))
    psi_a = {
        k: ev_and(
            ev_implies(EventImplies(AttAtom(k, "q")), Box(EventImplies(q))),
            ev_implies(EventNot(EventImplies(AttAtom(k, "q"))), Box(_ev_iff_top())),
        )
        for k in sig.agents
    }
    return SyntacticEventModel(psi_E, psi_a)


def gprime_signature(n: int) -> Signature:
    if n < 1:
        raise ValueError("n must be positive")
    return Signature(("a",), tuple(f"p{i}" for i in range(1, n + 1)))


def gen_Gprime(n: int) -> SyntacticEventModel:
    """Events are the positive subsets of p1..pn; an edge adds some missing atom."""
    sig = gprime_signature(n)
    psi_E = ev_and_all(
        ev_and_all([
            EventNot(EventImplies(Not(p))),
            EventNot(EventImplies(AttAtom("a", p.name))),
            EventNot(EventImplies(Not(AttAtom("a", p.name)))),
        ])
        for p in sig.prop_atoms
    )
    psi_a = ev_or_all(
        ev_and(EventNot(EventImplies(p)), Box(EventImplies(p))) for p in sig.prop_atoms
    )
    return SyntacticEventModel(psi_E, {"a": psi_a})


GENERATORS = {"G": (gen_G, g_signature), "Gprime": (gen_Gprime, gprime_signature)}


def description_size(g: SyntacticEventModel) -> int:
    """Total number of lexical tokens across all formulas of the description."""
    return sum(token_count(show(f)) for f in g.formulas())


@dataclass(frozen=True)
class SuccinctnessRow:
    n: int
    size: int
    events: int
    millis: float


@dataclass
class SuccinctnessReport:
    generator: str
    rows: list[SuccinctnessRow]
    slope: float
    intercept: float
    max_residual: float

    @property
    def exponential(self) -> bool:
        return all(r.events >= 2 ** r.n for r in self.rows)

    @property
    def linear(self) -> bool:
        return self.max_residual == 0

    def csv(self) -> str:
        lines = ["n,size,events,millis"]
        lines += [f"{r.n},{r.size},{r.events},{r.millis:.1f}" for r in self.rows]
        return "\n".join(lines) + "\n"


def _fit(xs: Sequence[int], ys: Sequence[int]) -> tuple[float, float, float]:
    """Least-squares line through the points, and the largest absolute residual."""
    from fractions import Fraction

    k = len(xs)
    if k == 1:
        return 0.0, float(ys[0]), 0.0
    mx, my = Fraction(sum(xs), k), Fraction(sum(ys), k)
    sxx = sum((x - mx) ** 2 for x in xs)
    slope = sum((x - mx) * (y - my) for x, y in zip(xs, ys)) / sxx
    intercept = my - slope * mx
    resid = max(abs(y - (slope * x + intercept)) for x, y in zip(xs, ys))
    return float(slope), float(intercept), float(resid)


def succinctness_report(n_max: int, generator: str = "Gprime", n_min: int = 1,
                        cap: int = DEFAULT_CAP) -> SuccinctnessReport:
    """Per n: description size, induced event count and wall time.

    The induced event set depends on psi_E alone, so relations are not built.
    """
    gen, signature = GENERATORS[generator]
    rows = []
    for n in range(n_min, n_max + 1):
        t0 = time.perf_counter()
        g = gen(n)
        count = len(candidate_events(g.psi_E, signature(n), cap))
        millis = (time.perf_counter() - t0) * 1000
        rows.append(SuccinctnessRow(n, description_size(g), count, millis))
    slope, intercept, resid = _fit([r.n for r in rows], [r.size for r in rows])
    return SuccinctnessReport(generator, rows, slope, intercept, resid)
