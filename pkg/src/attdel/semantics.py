"""Kripke models, event models, satisfaction, product update and bisimulation.

Models keep an integer-indexed view internally: a world's valuation is a
bitmask over the signature's atoms and a formula's extension is a bitmask
over worlds.  Extensions are cached per model, so repeated queries against
the same model (and its cached product updates) are cheap.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .errors import NotApplicable
from .syntax import (
    And, Atom, AttAtom, Believes, Dyn, EventTerm, Formula, LiteralConjunction,
    NamedTerm, Not, PropAtom, Signature, Top, show_conj, show_formula,
)


def _bits(mask: int) -> list[int]:
    """Indices of the set bits, ascending."""
    return [i for i, c in enumerate(bin(mask)[:1:-1]) if c == "1"]


def _mask_of(flags: Sequence[bool]) -> int:
    if not flags:
        return 0
    return int("".join("1" if f else "0" for f in reversed(flags)), 2)


def _flags(mask: int, n: int) -> list[bool]:
    """Inverse of _mask_of for an n-element index set."""
    text = bin(mask)[2:].zfill(n)
    return [c == "1" for c in reversed(text[-n:])] if n else []


def _atom_index(sig: Signature) -> dict:
    return {a: i for i, a in enumerate(sig.all_atoms)}


_INDEX_CACHE: dict[Signature, dict] = {}


def atom_index(sig: Signature) -> dict:
    idx = _INDEX_CACHE.get(sig)
    if idx is None:
        idx = _INDEX_CACHE[sig] = _atom_index(sig)
    return idx


def conj_masks(sig: Signature, c: LiteralConjunction) -> tuple[int, int]:
    """(positive, negative) bitmasks of a conjunction over the signature's atoms."""
    idx = atom_index(sig)
    try:
        pos = sum(1 << idx[a] for a in c.positive)
        neg = sum(1 << idx[a] for a in c.negative)
    except KeyError as exc:
        raise ValueError(f"atom {exc.args[0]} is not in signature {sig}") from None
    return pos, neg


class KripkeModel:
    """Worlds, per-agent accessibility relations and a valuation over At ∪ H."""

    def __init__(
        self,
        sig: Signature,
        worlds: Iterable[str],
        relations: Mapping[str, Iterable[tuple[str, str]]],
        valuation: Mapping[str, Iterable[PropAtom]],
    ):
        ids = tuple(worlds)
        if not ids:
            raise ValueError("a Kripke model needs at least one world")
        pos = {w: i for i, w in enumerate(ids)}
        if len(pos) != len(ids):
            raise ValueError("duplicate world ids")
        if set(valuation) != set(ids):
            raise ValueError("valuation keys must be exactly the worlds")
        unknown = set(relations) - set(sig.agents)
        if unknown:
            raise ValueError(f"relations for unknown agents {sorted(unknown)}")
        idx = atom_index(sig)
        vals = []
        for w in ids:
            m = 0
            for a in valuation[w]:
                if a not in idx:
                    raise ValueError(f"atom {a} of world {w!r} is not in the signature")
                m |= 1 << idx[a]
            vals.append(m)
        succ = {}
        for agent in sig.agents:
            lists: list[list[int]] = [[] for _ in ids]
            for s, t in relations.get(agent, ()):
                if s not in pos or t not in pos:
                    raise ValueError(f"edge ({s!r},{t!r}) of {agent} leaves the model")
                lists[pos[s]].append(pos[t])
            succ[agent] = [tuple(sorted(set(l))) for l in lists]
        self._setup(sig, ids, pos, vals, succ)

    @classmethod
    def _raw(cls, sig, ids, vals, succ) -> "KripkeModel":
        m = cls.__new__(cls)
        m._setup(sig, tuple(ids), {w: i for i, w in enumerate(ids)}, list(vals), succ)
        return m

    def _setup(self, sig, ids, pos, vals, succ):
        self.sig = sig
        self.worlds = ids
        self._pos = pos
        self._val = vals
        self._succ = succ
        self._succ_mask = {a: [sum(1 << v for v in l) for l in ls] for a, ls in succ.items()}
        self._full = (1 << len(ids)) - 1
        self._ext: dict = {}
        self._products: dict = {}

    def __len__(self) -> int:
        return len(self.worlds)

    def index(self, world: str) -> int:
        try:
            return self._pos[world]
        except KeyError:
            raise KeyError(f"no world {world!r}") from None

    @property
    def relations(self) -> dict[str, frozenset[tuple[str, str]]]:
        ids = self.worlds
        return {
            a: frozenset((ids[i], ids[j]) for i, js in enumerate(ls) for j in js)
            for a, ls in self._succ.items()
        }

    @property
    def valuation(self) -> dict[str, frozenset]:
        atoms = self.sig.all_atoms
        return {w: frozenset(atoms[i] for i in _bits(m)) for w, m in zip(self.worlds, self._val)}

    def true_atoms(self, world: str) -> frozenset:
        atoms = self.sig.all_atoms
        return frozenset(atoms[i] for i in _bits(self._val[self.index(world)]))

    def literals(self, world: str) -> LiteralConjunction:
        """The complete literal description of a world's valuation."""
        true = self.true_atoms(world)
        return LiteralConjunction(true, frozenset(self.sig.all_atoms) - true)

    def successors(self, agent: str, world: str) -> frozenset[str]:
        return frozenset(self.worlds[j] for j in self._succ[agent][self.index(world)])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, KripkeModel):
            return NotImplemented
        return (self.sig == other.sig and set(self.worlds) == set(other.worlds)
                and self.relations == other.relations and self.valuation == other.valuation)

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"KripkeModel({len(self.worlds)} worlds, {self.sig})"


@dataclass(frozen=True)
class PointedModel:
    model: KripkeModel
    point: str

    def __post_init__(self):
        self.model.index(self.point)

    @property
    def index(self) -> int:
        return self.model.index(self.point)


class EventModel:
    """Events with per-agent relations and preconditions."""

    def __init__(
        self,
        sig: Signature,
        events: Iterable[str],
        relations: Mapping[str, Iterable[tuple[str, str]]],
        pre: Mapping[str, Formula | LiteralConjunction],
    ):
        ids = tuple(events)
        if not ids:
            raise ValueError("an event model needs at least one event")
        pos = {e: i for i, e in enumerate(ids)}
        if len(pos) != len(ids):
            raise ValueError("duplicate event ids")
        if set(pre) != set(ids):
            raise ValueError("pre must be total on events")
        unknown = set(relations) - set(sig.agents)
        if unknown:
            raise ValueError(f"relations for unknown agents {sorted(unknown)}")
        succ = {}
        for agent in sig.agents:
            lists: list[set[int]] = [set() for _ in ids]
            for s, t in relations.get(agent, ()):
                if s not in pos or t not in pos:
                    raise ValueError(f"edge ({s!r},{t!r}) of {agent} leaves the model")
                lists[pos[s]].add(pos[t])
            succ[agent] = [frozenset(l) for l in lists]
        self._setup(sig, ids, [pre[e] for e in ids], succ)

    @classmethod
    def _raw(cls, sig, ids, pres, succ) -> "EventModel":
        m = cls.__new__(cls)
        m._setup(sig, tuple(ids), list(pres), succ)
        return m

    def _setup(self, sig, ids, pres, succ):
        self.sig = sig
        self.events = ids
        self._pos = {e: i for i, e in enumerate(ids)}
        self._pre = pres
        self._succ = succ
        self._conj_masks = [
            conj_masks(sig, p) if isinstance(p, LiteralConjunction) else None for p in pres
        ]

    def __len__(self) -> int:
        return len(self.events)

    def index(self, event: str) -> int:
        try:
            return self._pos[event]
        except KeyError:
            raise KeyError(f"no event {event!r}") from None

    @property
    def pre(self) -> dict[str, Formula | LiteralConjunction]:
        return dict(zip(self.events, self._pre))

    def precondition(self, event: str) -> Formula | LiteralConjunction:
        return self._pre[self.index(event)]

    def pre_formula(self, event: str) -> Formula:
        p = self.precondition(event)
        return p.to_formula() if isinstance(p, LiteralConjunction) else p

    @property
    def relations(self) -> dict[str, frozenset[tuple[str, str]]]:
        ids = self.events
        return {
            a: frozenset((ids[i], ids[j]) for i, js in enumerate(ls) for j in js)
            for a, ls in self._succ.items()
        }

    def successors(self, agent: str, event: str) -> frozenset[str]:
        return frozenset(self.events[j] for j in self._succ[agent][self.index(event)])

    def holds_flags(self, model: KripkeModel, k: int) -> list[bool]:
        """Per world of model, whether the precondition of event k holds."""
        cm = self._conj_masks[k]
        if cm is None:
            return _flags(extension(model, self._pre[k]), len(model.worlds))
        pos, neg = cm
        return [(v & pos) == pos and not (v & neg) for v in model._val]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, EventModel):
            return NotImplemented
        return (self.sig == other.sig and set(self.events) == set(other.events)
                and self.relations == other.relations and self.pre == other.pre)

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"EventModel({len(self.events)} events, {self.sig})"


@dataclass(frozen=True, eq=False)
class MultiPointedEventModel:
    model: EventModel
    designated: frozenset[str]

    def __post_init__(self):
        object.__setattr__(self, "designated", frozenset(self.designated))
        if not self.designated:
            raise ValueError("designated event set must be non-empty")
        missing = self.designated - set(self.model.events)
        if missing:
            raise ValueError(f"designated events {sorted(missing)} are not events")
        object.__setattr__(
            self, "_designated_idx", frozenset(self.model.index(e) for e in self.designated)
        )

    @property
    def sig(self) -> Signature:
        return self.model.sig

    @property
    def events(self) -> tuple[str, ...]:
        return self.model.events

    def same_as(self, other: "MultiPointedEventModel") -> bool:
        return self.model == other.model and self.designated == other.designated


def event_id(pre: Formula | LiteralConjunction) -> str:
    """Canonical event id: the rendered precondition."""
    return show_conj(pre) if isinstance(pre, LiteralConjunction) else show_formula(pre)


def successors(model, agent: str, state: str) -> frozenset[str]:
    """Image of a state under an agent's relation, for Kripke and event models."""
    if isinstance(model, MultiPointedEventModel):
        model = model.model
    if isinstance(model, PointedModel):
        model = model.model
    return model.successors(agent, state)


# ------------------------------------------------------------- evaluation


def event_model_for(term: EventTerm, sig: Signature) -> MultiPointedEventModel:
    """Elaborate an event term into the event model it denotes."""
    if isinstance(term, NamedTerm):
        if term.model is None:
            raise ValueError(f"event model @{term.name} was never loaded")
        return term.model
    from .attention_events import elaborate

    return elaborate(term, sig)


def extension(model: KripkeModel, f: Formula) -> int:
    """Bitmask of the worlds where f holds."""
    cache = model._ext
    hit = cache.get(f)
    if hit is not None:
        return hit
    match f:
        case Top():
            out = model._full
        case Atom() | AttAtom():
            idx = atom_index(model.sig)
            if f not in idx:
                raise ValueError(f"atom {f} is not in signature {model.sig}")
            bit = 1 << idx[f]
            out = _mask_of([bool(v & bit) for v in model._val])
        case Not(body=b):
            out = model._full ^ extension(model, b)
        case And(left=l, right=r):
            out = extension(model, l) & extension(model, r)
        case Believes(agent=a, body=b):
            if a not in model._succ_mask:
                raise ValueError(f"unknown agent {a!r}")
            bad = model._full ^ extension(model, b)
            out = _mask_of([not (m & bad) for m in model._succ_mask[a]])
        case Dyn(term=t, body=b):
            me = event_model_for(t, model.sig)
            prod, points = _product(model, me)
            inner = _flags(extension(prod, b), len(prod.worlds))
            out = _mask_of([k < 0 or inner[k] for k in points])
        case _:
            raise TypeError(f"not a formula: {f!r}")
    cache[f] = out
    return out


def satisfies(pm: PointedModel, f: Formula) -> bool:
    return bool(extension(pm.model, f) >> pm.index & 1)


def holds_everywhere(model: KripkeModel, f: Formula) -> bool:
    return extension(model, f) == model._full


def _matching(model: KripkeModel, me: MultiPointedEventModel) -> list[list[int]]:
    """Per world, the indices of events whose precondition holds there."""
    em = me.model
    at_world: list[list[int]] = [[] for _ in model.worlds]
    for k in range(len(em.events)):
        for w, ok in enumerate(em.holds_flags(model, k)):
            if ok:
                at_world[w].append(k)
    return at_world


def _product(model: KripkeModel, me: MultiPointedEventModel) -> tuple[KripkeModel, list[int]]:
    """Full product update plus, per original world, the index of its point (or -1)."""
    hit = model._products.get(id(me))
    if hit is not None and hit[0] is me:
        return hit[1], hit[2]
    em = me.model
    at_world = _matching(model, me)
    ne = len(em.events)
    index: dict[int, int] = {}
    ids, vals, pairs = [], [], []
    for w, ks in enumerate(at_world):
        for k in ks:
            index[w * ne + k] = len(ids)
            ids.append(f"({model.worlds[w]},{em.events[k]})")
            vals.append(model._val[w])
            pairs.append((w, k))
    succ = {}
    for agent in model.sig.agents:
        rw, qe = model._succ[agent], em._succ[agent]
        lists = []
        for w, k in pairs:
            q = qe[k]
            lists.append(tuple(
                index[v * ne + f] for v in rw[w] for f in at_world[v] if f in q
            ))
        succ[agent] = lists
    prod = KripkeModel._raw(model.sig, ids, vals, succ)
    designated = me._designated_idx
    points = []
    for w, ks in enumerate(at_world):
        hits = [k for k in ks if k in designated]
        points.append(index[w * ne + hits[0]] if len(hits) == 1 else -1)
    model._products[id(me)] = (me, prod, points)
    return prod, points


def matching_designated(pm: PointedModel, me: MultiPointedEventModel) -> list[str]:
    """All designated events whose precondition holds at the point."""
    at_world = _matching(pm.model, me)
    ks = at_world[pm.index]
    return [me.model.events[k] for k in ks if k in me._designated_idx]


def applicable(pm: PointedModel, me: MultiPointedEventModel) -> str | None:
    """The unique designated event whose precondition holds at the point, if any."""
    hits = matching_designated(pm, me)
    return hits[0] if len(hits) == 1 else None


def product(model: KripkeModel, me: MultiPointedEventModel) -> KripkeModel:
    return _product(model, me)[0]


def product_update(pm: PointedModel, me: MultiPointedEventModel) -> PointedModel:
    hits = matching_designated(pm, me)
    if len(hits) != 1:
        why = "no designated event holds" if not hits else f"{len(hits)} designated events hold"
        raise NotApplicable(f"event model not applicable at {pm.point!r}: {why}")
    prod, points = _product(pm.model, me)
    return PointedModel(prod, prod.worlds[points[pm.index]])


def update(pm: PointedModel, term: EventTerm) -> PointedModel:
    return product_update(pm, event_model_for(term, pm.model.sig))


# ------------------------------------------------------------ bisimulation


def _maximal_bisimulation(m1: KripkeModel, m2: KripkeModel) -> list[int]:
    """Greatest bisimulation as rows of bitmasks over m2's worlds."""
    if m1.sig == m2.sig:
        v1, v2 = m1._val, m2._val
    else:
        if set(m1.sig.agents) != set(m2.sig.agents):
            raise ValueError("bisimulation needs the same agents on both sides")
        a1, a2 = m1.sig.all_atoms, m2.sig.all_atoms
        v1 = [frozenset(a1[i] for i in _bits(m)) for m in m1._val]
        v2 = [frozenset(a2[i] for i in _bits(m)) for m in m2._val]
    z = [_mask_of([x == y for y in v2]) for x in v1]
    agents = m1.sig.agents
    changed = True
    while changed:
        changed = False
        for i in range(len(z)):
            row = z[i]
            if not row:
                continue
            keep = row
            for j in _bits(row):
                for a in agents:
                    s1 = m1._succ[a][i]
                    target = m2._succ_mask[a][j]
                    reach = 0
                    ok = True
                    for i2 in s1:
                        r = z[i2]
                        if not r & target:
                            ok = False
                            break
                        reach |= r
                    if not ok or target & ~reach:
                        keep &= ~(1 << j)
                        break
            if keep != row:
                z[i] = keep
                changed = True
    return z


def bisimilar(pm1: PointedModel, pm2: PointedModel) -> tuple[bool, frozenset | None]:
    """Decide bisimilarity of two pointed models; return the maximal bisimulation if so."""
    z = _maximal_bisimulation(pm1.model, pm2.model)
    if not z[pm1.index] >> pm2.index & 1:
        return False, None
    w1, w2 = pm1.model.worlds, pm2.model.worlds
    rel = frozenset((w1[i], w2[j]) for i, row in enumerate(z) for j in _bits(row))
    return True, rel


def bisimilar_pairs(m1: KripkeModel, m2: KripkeModel, pairs: Iterable[tuple[str, str]]) -> bool:
    """True iff every listed world pair is linked by the maximal bisimulation."""
    z = _maximal_bisimulation(m1, m2)
    return all(z[m1.index(a)] >> m2.index(b) & 1 for a, b in pairs)


# ---------------------------------------------------------------- helpers


def generated_submodel(pm: PointedModel) -> PointedModel:
    """Restrict to worlds reachable from the point through any agent's relation."""
    m = pm.model
    seen = {pm.index}
    todo = [pm.index]
    while todo:
        w = todo.pop()
        for ls in m._succ.values():
            for v in ls[w]:
                if v not in seen:
                    seen.add(v)
                    todo.append(v)
    keep = sorted(seen)
    new = {old: i for i, old in enumerate(keep)}
    succ = {a: [tuple(new[v] for v in ls[w]) for w in keep] for a, ls in m._succ.items()}
    sub = KripkeModel._raw(m.sig, [m.worlds[w] for w in keep], [m._val[w] for w in keep], succ)
    return PointedModel(sub, pm.point)


def disjoint_union(models: Sequence[KripkeModel]) -> tuple[KripkeModel, list[int]]:
    """Disjoint union of models over one signature, with per-model index offsets."""
    sig = models[0].sig
    ids, vals, offsets = [], [], []
    succ = {a: [] for a in sig.agents}
    for n, m in enumerate(models):
        if m.sig != sig:
            raise ValueError("disjoint union needs a common signature")
        off = len(ids)
        offsets.append(off)
        ids.extend(f"{n}:{w}" for w in m.worlds)
        vals.extend(m._val)
        for a in sig.agents:
            succ[a].extend(tuple(v + off for v in l) for l in m._succ[a])
    return KripkeModel._raw(sig, ids, vals, succ), offsets


def world_flags(model: KripkeModel, f: Formula) -> list[bool]:
    """Truth value of f at every world, in world order."""
    return _flags(extension(model, f), len(model.worlds))
