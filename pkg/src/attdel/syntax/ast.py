"""AST node types for the static language, the event language and event terms.

All nodes are immutable.  Equality is structural and hashes are cached on
first use, because reduced formulas share large subtrees and are used as
dictionary keys during model checking.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import TYPE_CHECKING, Iterable, Iterator, Union

from ..errors import Contradictory

if TYPE_CHECKING:
    from ..semantics import MultiPointedEventModel

NAME_RE = re.compile(r"[A-Za-z0-9_]+\Z")


class Node:
    """Structural equality over the dataclass fields plus a cached hash."""

    def _key(self) -> tuple:
        return tuple(getattr(self, name) for name in self.__match_args__)

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        return type(self) is type(other) and self._key() == other._key()

    def __ne__(self, other: object) -> bool:
        return not self == other

    def __hash__(self) -> int:
        cached = self.__dict__.get("_hash")
        if cached is None:
            cached = hash((type(self).__name__, self._key()))
            object.__setattr__(self, "_hash", cached)
        return cached

    def __str__(self) -> str:
        from .printer import show

        return show(self)


@dataclass(frozen=True)
class Signature:
    """Agents and propositional atoms; attention atoms are derived."""

    agents: tuple[str, ...]
    atoms: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "agents", tuple(self.agents))
        object.__setattr__(self, "atoms", tuple(self.atoms))
        for kind, names in (("agent", self.agents), ("atom", self.atoms)):
            if not names:
                raise ValueError(f"signature needs at least one {kind}")
            if len(set(names)) != len(names):
                raise ValueError(f"duplicate {kind} names in {names}")
            for n in names:
                if not NAME_RE.match(n) or n == "T":
                    raise ValueError(f"invalid {kind} name {n!r}")

    @property
    def prop_atoms(self) -> tuple["Atom", ...]:
        return tuple(Atom(p) for p in sorted(self.atoms))

    @property
    def attention_atoms(self) -> tuple["AttAtom", ...]:
        return tuple(AttAtom(a, p) for a in sorted(self.agents) for p in sorted(self.atoms))

    @property
    def all_atoms(self) -> tuple["PropAtom", ...]:
        """Every atom of At ∪ H in canonical literal order."""
        return self.prop_atoms + self.attention_atoms

    def __str__(self) -> str:
        return f"agents={','.join(self.agents)} atoms={','.join(self.atoms)}"


# --------------------------------------------------------------- formulas


class Formula(Node):
    def __and__(self, other: "Formula") -> "Formula":
        return And(self, other)

    def __or__(self, other: "Formula") -> "Formula":
        return disj(self, other)

    def __invert__(self) -> "Formula":
        return Not(self)

    def implies(self, other: "Formula") -> "Formula":
        return implies(self, other)


@dataclass(frozen=True, eq=False)
class Top(Formula):
    pass


@dataclass(frozen=True, eq=False)
class Atom(Formula):
    name: str


@dataclass(frozen=True, eq=False)
class AttAtom(Formula):
    agent: str
    atom: str


@dataclass(frozen=True, eq=False)
class Not(Formula):
    body: Formula


@dataclass(frozen=True, eq=False)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, eq=False)
class Believes(Formula):
    agent: str
    body: Formula


@dataclass(frozen=True, eq=False)
class Dyn(Formula):
    term: "EventTerm"
    body: Formula


PropAtom = Union[Atom, AttAtom]
TOP = Top()
BOTTOM = Not(TOP)


def atom_order(atom: PropAtom) -> tuple:
    """Sort key: propositional atoms first, then attention atoms by (agent, atom)."""
    if isinstance(atom, Atom):
        return (0, atom.name, "")
    return (1, atom.agent, atom.atom)


def disj(a: Formula, b: Formula) -> Formula:
    return Not(And(Not(a), Not(b)))


def implies(a: Formula, b: Formula) -> Formula:
    return Not(And(a, Not(b)))


def iff(a: Formula, b: Formula) -> Formula:
    return And(implies(a, b), implies(b, a))


def conj_all(parts: Iterable[Formula]) -> Formula:
    """Right-nested conjunction; the empty conjunction is ⊤."""
    items = list(parts)
    if not items:
        return TOP
    out = items[-1]
    for f in reversed(items[:-1]):
        out = And(f, out)
    return out


def disj_all(parts: Iterable[Formula]) -> Formula:
    items = list(parts)
    if not items:
        return BOTTOM
    out = items[-1]
    for f in reversed(items[:-1]):
        out = disj(f, out)
    return out


def conjuncts(f: Formula) -> Iterator[Formula]:
    """Flatten nested And nodes left to right."""
    stack = [f]
    while stack:
        g = stack.pop()
        if isinstance(g, And):
            stack.append(g.right)
            stack.append(g.left)
        else:
            yield g


def is_propositional(f: Formula) -> bool:
    stack = [f]
    while stack:
        g = stack.pop()
        if isinstance(g, (Believes, Dyn)):
            return False
        if isinstance(g, Not):
            stack.append(g.body)
        elif isinstance(g, And):
            stack.extend((g.left, g.right))
    return True


def modal_depth(f: Formula) -> int:
    match f:
        case Not(body=b):
            return modal_depth(b)
        case And(left=l, right=r):
            return max(modal_depth(l), modal_depth(r))
        case Believes(body=b) | Dyn(body=b):
            return 1 + modal_depth(b)
        case _:
            return 0


# ---------------------------------------------------- literal conjunctions


@dataclass(frozen=True, eq=False)
class LiteralConjunction(Node):
    """A consistent conjunction of literals over At ∪ H in normal form."""

    positive: frozenset = frozenset()
    negative: frozenset = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "positive", frozenset(self.positive))
        object.__setattr__(self, "negative", frozenset(self.negative))
        clash = self.positive & self.negative
        if clash:
            names = ", ".join(sorted(str(a) for a in clash))
            raise Contradictory(f"atom occurs with both signs: {names}")

    @classmethod
    def of(cls, literals: Iterable[tuple[PropAtom, bool]]) -> "LiteralConjunction":
        pos, neg = set(), set()
        for atom, sign in literals:
            (pos if sign else neg).add(atom)
        return cls(frozenset(pos), frozenset(neg))

    def literals(self) -> list[tuple[PropAtom, bool]]:
        """Literals in canonical order as (atom, polarity) pairs."""
        lits = [(a, True) for a in self.positive] + [(a, False) for a in self.negative]
        lits.sort(key=lambda lit: atom_order(lit[0]))
        return lits

    def to_formula(self) -> Formula:
        return conj_all(a if s else Not(a) for a, s in self.literals())

    def __bool__(self) -> bool:
        return bool(self.positive or self.negative)

    def __len__(self) -> int:
        return len(self.positive) + len(self.negative)

    @property
    def atoms(self) -> frozenset:
        return self.positive | self.negative

    def polarity(self, atom: PropAtom) -> bool | None:
        if atom in self.positive:
            return True
        if atom in self.negative:
            return False
        return None

    def literal_on(self, atom_name: str) -> "LiteralConjunction":
        """ℓ(p): the literal over propositional atom p, or ⊤ if absent."""
        return self.restrict([atom_name])

    def restrict(self, atom_names: Iterable[str]) -> "LiteralConjunction":
        """Keep only the literals over the given propositional atoms."""
        keep = {Atom(n) for n in atom_names}
        return LiteralConjunction(self.positive & keep, self.negative & keep)

    def prop_names(self) -> list[str]:
        return sorted(a.name for a in self.atoms if isinstance(a, Atom))

    def union(self, other: "LiteralConjunction") -> "LiteralConjunction":
        return LiteralConjunction(self.positive | other.positive, self.negative | other.negative)

    def contains(self, other: "LiteralConjunction") -> bool:
        return other.positive <= self.positive and other.negative <= self.negative


EMPTY = LiteralConjunction()


# ------------------------------------------------------------ default maps


@dataclass(frozen=True, eq=False)
class DefaultMap(Node):
    """Per agent and atom default in {'+', '-', 'T'}; only non-⊤ entries are stored."""

    entries: tuple[tuple[str, str, str], ...] = ()

    def __post_init__(self):
        cleaned = {}
        for agent, atom, value in self.entries:
            if value not in ("+", "-", "T"):
                raise ValueError(f"default value must be +, - or T, got {value!r}")
            if (agent, atom) in cleaned and cleaned[(agent, atom)] != value:
                raise ValueError(f"conflicting defaults for {agent}:{atom}")
            cleaned[(agent, atom)] = value
        kept = tuple(sorted((a, p, v) for (a, p), v in cleaned.items() if v != "T"))
        object.__setattr__(self, "entries", kept)

    @classmethod
    def from_dict(cls, mapping: dict[tuple[str, str], str]) -> "DefaultMap":
        return cls(tuple((a, p, v) for (a, p), v in mapping.items()))

    def value(self, agent: str, atom: str) -> str:
        for a, p, v in self.entries:
            if a == agent and p == atom:
                return v
        return "T"

    def literal(self, agent: str, atom: str) -> LiteralConjunction:
        """d_a(p) as a literal conjunction (empty for ⊤)."""
        v = self.value(agent, atom)
        if v == "T":
            return EMPTY
        return LiteralConjunction.of([(Atom(atom), v == "+")])

    def restrict(self, atom_names: Iterable[str]) -> "DefaultMap":
        keep = set(atom_names)
        return DefaultMap(tuple(e for e in self.entries if e[1] in keep))


# ------------------------------------------------------------ event terms


class EventTerm(Node):
    pass


BINARY_VARIANTS = ("original", "principled", "truthful")


@dataclass(frozen=True, eq=False)
class BinaryTerm(EventTerm):
    variant: str
    announcement: Formula

    def __post_init__(self):
        if self.variant not in BINARY_VARIANTS:
            raise ValueError(f"unknown binary variant {self.variant!r}")


@dataclass(frozen=True, eq=False)
class FTerm(EventTerm):
    announcement: LiteralConjunction


@dataclass(frozen=True, eq=False)
class EdTerm(EventTerm):
    announcement: LiteralConjunction
    defaults: DefaultMap


class NamedTerm(EventTerm):
    """A reference to an explicit event model, compared by name."""

    __match_args__ = ("name",)

    def __init__(self, name: str, model: "MultiPointedEventModel | None" = None):
        self.name = name
        self.model = model

    def __repr__(self) -> str:
        return f"NamedTerm({self.name!r})"


@dataclass(frozen=True, eq=False)
class PointedTerm(EventTerm):
    """A constructor term re-pointed at an explicit designated event set."""

    base: EventTerm
    designated: tuple[LiteralConjunction, ...]

    def __post_init__(self):
        from .printer import show_conj

        uniq = sorted(set(self.designated), key=show_conj)
        if not uniq:
            raise ValueError("pointed term needs at least one designated event")
        object.__setattr__(self, "designated", tuple(uniq))


# -------------------------------------------------------- event formulas


class EventFormula(Node):
    def __and__(self, other: "EventFormula") -> "EventFormula":
        return ev_and(self, other)

    def __or__(self, other: "EventFormula") -> "EventFormula":
        return EventOr(self, other)

    def __invert__(self) -> "EventFormula":
        return EventNot(self)


@dataclass(frozen=True, eq=False)
class ImpliesEvent(EventFormula):
    """ψ ⇒ e: ψ → pre(e) is valid."""

    prop: Formula


@dataclass(frozen=True, eq=False)
class EventImplies(EventFormula):
    """e ⇒ ψ: pre(e) → ψ is valid."""

    prop: Formula


@dataclass(frozen=True, eq=False)
class EventNot(EventFormula):
    body: EventFormula


@dataclass(frozen=True, eq=False)
class EventOr(EventFormula):
    left: EventFormula
    right: EventFormula


@dataclass(frozen=True, eq=False)
class Box(EventFormula):
    body: EventFormula


def ev_and(a: EventFormula, b: EventFormula) -> EventFormula:
    return EventNot(EventOr(EventNot(a), EventNot(b)))


def ev_implies(a: EventFormula, b: EventFormula) -> EventFormula:
    return EventOr(EventNot(a), b)


def ev_equiv(prop: Formula) -> EventFormula:
    """e ⇔ ψ: the precondition is equivalent to ψ."""
    return ev_and(ImpliesEvent(prop), EventImplies(prop))


def ev_and_all(parts: Iterable[EventFormula]) -> EventFormula:
    items = list(parts)
    if not items:
        raise ValueError("empty event conjunction")
    out = items[-1]
    for f in reversed(items[:-1]):
        out = ev_and(f, out)
    return out


def ev_or_all(parts: Iterable[EventFormula]) -> EventFormula:
    items = list(parts)
    if not items:
        raise ValueError("empty event disjunction")
    out = items[-1]
    for f in reversed(items[:-1]):
        out = EventOr(f, out)
    return out


def ev_conjuncts(f: EventFormula) -> list[EventFormula]:
    """Top-level conjuncts under the ¬(¬x ∨ ¬y) encoding of conjunction."""
    match f:
        case EventNot(body=EventOr(left=EventNot(body=x), right=EventNot(body=y))):
            return ev_conjuncts(x) + ev_conjuncts(y)
        case _:
            return [f]
