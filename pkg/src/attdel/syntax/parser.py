"""Recursive-descent parser for formulas, event terms and event formulas.

Operator strength is ``~`` > ``&`` > ``|`` > ``->``; binary operators nest to
the right.  ``[term] φ`` and ``box φ`` are prefix operators like ``~``.
"""

from __future__ import annotations

import re
from typing import Callable, Mapping, Union

from ..errors import Contradictory, NotAConjunction, ParseError, UnknownName
from .ast import (
    And, Atom, AttAtom, Believes, BinaryTerm, Box, DefaultMap, Dyn, EdTerm,
    EventFormula, EventImplies, EventNot, EventOr, EventTerm, FTerm, Formula,
    ImpliesEvent, LiteralConjunction, NamedTerm, Not, PointedTerm, Signature,
    TOP, disj, ev_and, ev_implies, implies, is_propositional,
)
from .propositional import normalize

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<at>@[^\s\]\[{}]+)|(?P<ident>[A-Za-z0-9_]+)|(?P<op>->|=>|[()\[\]{},;:=~&|+\-']))"
)

ModelSource = Union[Mapping[str, object], Callable[[str], object], None]


def tokenize(text: str) -> list[tuple[str, str, int]]:
    """Split text into (kind, value, position) triples."""
    out = []
    pos = 0
    n = len(text)
    while pos < n:
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN_RE.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        start = m.start(kind)
        out.append((kind, m.group(kind), start))
        pos = m.end()
    return out


def token_count(text: str) -> int:
    return len(tokenize(text))


class _Parser:
    def __init__(self, text: str, sig: Signature, models: ModelSource = None):
        self.text = text
        self.toks = tokenize(text)
        self.i = 0
        self.sig = sig
        self.models = models

    # token helpers
    def peek(self, k: int = 0) -> tuple[str, str, int] | None:
        j = self.i + k
        return self.toks[j] if j < len(self.toks) else None

    def at(self, value: str, k: int = 0) -> bool:
        t = self.peek(k)
        return t is not None and t[1] == value and t[0] != "at"

    def pos(self) -> int:
        t = self.peek()
        return t[2] if t else len(self.text)

    def expect(self, value: str) -> None:
        if not self.at(value):
            t = self.peek()
            found = repr(t[1]) if t else "end of input"
            raise ParseError(f"expected {value!r}, found {found}", self.pos())
        self.i += 1

    def ident(self) -> str:
        t = self.peek()
        if t is None or t[0] != "ident":
            found = repr(t[1]) if t else "end of input"
            raise ParseError(f"expected a name, found {found}", self.pos())
        self.i += 1
        return t[1]

    def done(self) -> None:
        if self.peek() is not None:
            raise ParseError(f"unexpected trailing input {self.peek()[1]!r}", self.pos())

    def agent(self) -> str:
        p = self.pos()
        name = self.ident()
        if name not in self.sig.agents:
            raise UnknownName(f"unknown agent {name!r}", p)
        return name

    def atom_name(self) -> str:
        p = self.pos()
        name = self.ident()
        if name not in self.sig.atoms:
            raise UnknownName(f"unknown atom {name!r}", p)
        return name

    # formulas
    def formula(self) -> Formula:
        left = self.disjunction()
        if self.at("->"):
            self.i += 1
            return implies(left, self.formula())
        return left

    def disjunction(self) -> Formula:
        left = self.conjunction()
        if self.at("|"):
            self.i += 1
            return disj(left, self.disjunction())
        return left

    def conjunction(self) -> Formula:
        left = self.unary()
        if self.at("&"):
            self.i += 1
            return And(left, self.conjunction())
        return left

    def unary(self) -> Formula:
        if self.at("~"):
            self.i += 1
            return Not(self.unary())
        if self.at("["):
            self.i += 1
            term = self.event_term()
            self.expect("]")
            return Dyn(term, self.unary())
        return self.primary()

    def primary(self) -> Formula:
        if self.at("("):
            self.i += 1
            f = self.formula()
            self.expect(")")
            return f
        if self.at("T"):
            self.i += 1
            return TOP
        if self.at("h") and self.at("(", 1):
            self.i += 2
            a = self.agent()
            self.expect(",")
            p = self.atom_name()
            self.expect(")")
            return AttAtom(a, p)
        if self.at("B") and self.at("(", 1):
            self.i += 2
            a = self.agent()
            self.expect(",")
            body = self.formula()
            self.expect(")")
            return Believes(a, body)
        return Atom(self.atom_name())

    def conj(self) -> LiteralConjunction:
        p = self.pos()
        f = self.formula()
        try:
            return normalize(f)
        except (NotAConjunction, Contradictory) as exc:
            raise ParseError(f"announcement must be a consistent conjunction of literals: {exc}", p) from exc

    # event terms
    def event_term(self) -> EventTerm:
        t = self.peek()
        if t is None:
            raise ParseError("expected an event term", self.pos())
        if t[0] == "at":
            self.i += 1
            term: EventTerm = NamedTerm(t[1][1:], self._resolve(t[1][1:], t[2]))
        elif t[1] == "E":
            self.i += 1
            primes = 0
            while self.at("'"):
                self.i += 1
                primes += 1
            if primes > 2:
                raise ParseError("at most two primes after E", self.pos())
            self.expect("(")
            phi = self.formula()
            self.expect(")")
            term = BinaryTerm(("original", "principled", "truthful")[primes], phi)
        elif t[1] == "F":
            self.i += 1
            self.expect("(")
            c = self.conj()
            self.expect(")")
            term = FTerm(c)
        elif t[1] == "Ed":
            self.i += 1
            self.expect("(")
            c = self.conj()
            self.expect(";")
            d = self.defaults(c)
            self.expect(")")
            term = EdTerm(c, d)
        else:
            raise ParseError(f"unknown event constructor {t[1]!r}", t[2])
        if self.at("{"):
            self.i += 1
            events = [self.conj()]
            while self.at(";"):
                self.i += 1
                events.append(self.conj())
            self.expect("}")
            term = PointedTerm(term, tuple(events))
        return term

    def defaults(self, announcement: LiteralConjunction) -> DefaultMap:
        entries = []
        if self.at(")"):
            return DefaultMap()
        while True:
            a = self.agent()
            self.expect(":")
            p = self.atom_name()
            self.expect("=")
            t = self.peek()
            if t is None or t[1] not in ("+", "-", "T"):
                raise ParseError("default value must be +, - or T", self.pos())
            self.i += 1
            entries.append((a, p, t[1]))
            if not self.at(","):
                break
            self.i += 1
        seen = set()
        for a, p, _ in entries:
            if (a, p) in seen:
                raise ParseError(f"duplicate default for {a}:{p}", self.pos())
            seen.add((a, p))
        return DefaultMap(tuple(entries))

    def _resolve(self, name: str, pos: int):
        if self.models is None:
            return None
        try:
            if callable(self.models):
                return self.models(name)
            return self.models[name]
        except (KeyError, OSError) as exc:
            raise UnknownName(f"no event model named {name!r}", pos) from exc

    # event formulas
    def event_formula(self) -> EventFormula:
        left = self.ev_disjunction()
        if self.at("->"):
            self.i += 1
            return ev_implies(left, self.event_formula())
        return left

    def ev_disjunction(self) -> EventFormula:
        left = self.ev_conjunction()
        if self.at("|"):
            self.i += 1
            return EventOr(left, self.ev_disjunction())
        return left

    def ev_conjunction(self) -> EventFormula:
        left = self.ev_unary()
        if self.at("&"):
            self.i += 1
            return ev_and(left, self.ev_conjunction())
        return left

    def ev_unary(self) -> EventFormula:
        if self.at("~"):
            self.i += 1
            return EventNot(self.ev_unary())
        if self.at("box"):
            self.i += 1
            return Box(self.ev_unary())
        if self.at("e") and self.at("=>", 1):
            self.i += 2
            self.expect("(")
            prop = self.prop()
            self.expect(")")
            return EventImplies(prop)
        if self.at("("):
            close = self._matching_paren(self.i)
            if self.at("=>", close - self.i + 1) and self.at("e", close - self.i + 2):
                self.i += 1
                prop = self.prop()
                self.expect(")")
                self.expect("=>")
                self.expect("e")
                return ImpliesEvent(prop)
            self.i += 1
            f = self.event_formula()
            self.expect(")")
            return f
        raise ParseError("expected an event formula", self.pos())

    def prop(self) -> Formula:
        p = self.pos()
        f = self.formula()
        if not is_propositional(f):
            raise ParseError("formulas inside event tests must be propositional", p)
        return f

    def _matching_paren(self, start: int) -> int:
        depth = 0
        for j in range(start, len(self.toks)):
            v = self.toks[j][1]
            if v == "(":
                depth += 1
            elif v == ")":
                depth -= 1
                if depth == 0:
                    return j
        raise ParseError("unbalanced parenthesis", self.toks[start][2])


def parse_formula(text: str, sig: Signature, models: ModelSource = None) -> Formula:
    p = _Parser(text, sig, models)
    f = p.formula()
    p.done()
    return f


def parse_event_term(text: str, sig: Signature, models: ModelSource = None) -> EventTerm:
    p = _Parser(text, sig, models)
    t = p.event_term()
    p.done()
    return t


def parse_event_formula(text: str, sig: Signature) -> EventFormula:
    p = _Parser(text, sig)
    f = p.event_formula()
    p.done()
    return f


def parse_conj(text: str, sig: Signature) -> LiteralConjunction:
    p = _Parser(text, sig)
    c = p.conj()
    p.done()
    return c


_CONSTRUCTORS = {"E", "F", "Ed"}


def infer_signature(*texts: str, agents: tuple[str, ...] = (), atoms: tuple[str, ...] = ()) -> Signature:
    """The smallest signature covering the names used in the given texts.

    Extra agents and atoms can be supplied; a missing kind defaults to a
    single name ("a" or "p").
    """
    ags: dict[str, None] = dict.fromkeys(agents)
    ats: dict[str, None] = dict.fromkeys(atoms)
    for text in texts:
        toks = tokenize(text)
        vals = [t[1] for t in toks]
        i = 0
        while i < len(toks):
            kind, v, _ = toks[i]
            nxt = vals[i + 1] if i + 1 < len(vals) else None
            if kind != "ident" or v == "T":
                i += 1
            elif v in ("h", "B") and nxt == "(":
                if i + 2 < len(toks):
                    ags.setdefault(vals[i + 2], None)
                if v == "h" and i + 4 < len(toks):
                    ats.setdefault(vals[i + 4], None)
                    i += 5
                else:
                    i += 3
            elif (v in _CONSTRUCTORS and nxt in ("(", "'")) or v == "box" or (
                v == "e" and (nxt == "=>" or (i > 0 and vals[i - 1] == "=>"))
            ):
                i += 1
            elif nxt == ":":
                ags.setdefault(v, None)
                i += 2
            else:
                ats.setdefault(v, None)
                i += 1
    return Signature(tuple(sorted(ags)) or ("a",), tuple(sorted(ats)) or ("p",))
