"""Concrete-syntax printing.  Output always parses back to the same AST."""

from __future__ import annotations

from .ast import (
    And, Atom, AttAtom, Believes, BinaryTerm, Box, DefaultMap, Dyn, EdTerm,
    EventImplies, EventNot, EventOr, FTerm, ImpliesEvent, LiteralConjunction,
    NamedTerm, Not, PointedTerm, Top,
)

# binding strength: 1 '->', 2 '|', 3 '&', 4 prefix operators and atoms
_IMP, _OR, _AND, _UNARY = 1, 2, 3, 4

_BINARY_NAMES = {"original": "E", "principled": "E'", "truthful": "E''"}


def _is_or(f) -> bool:
    return (isinstance(f, Not) and isinstance(f.body, And)
            and isinstance(f.body.left, Not) and isinstance(f.body.right, Not))


def _is_ev_and(f) -> bool:
    return (isinstance(f, EventNot) and isinstance(f.body, EventOr)
            and isinstance(f.body.left, EventNot) and isinstance(f.body.right, EventNot))


def _wrap(text: str, own: int, need: int) -> str:
    return f"({text})" if own < need else text


def show_formula(f, need: int = 0) -> str:
    match f:
        case Top():
            return "T"
        case Atom(name=n):
            return n
        case AttAtom(agent=a, atom=p):
            return f"h({a},{p})"
        case Not(body=And(left=Not(body=x), right=Not(body=y))) if not _is_or(Not(x)):
            return _wrap(f"{show_formula(x, _AND)} | {show_formula(y, _OR)}", _OR, need)
        case Not(body=And(left=x, right=Not(body=y))):
            return _wrap(f"{show_formula(x, _OR)} -> {show_formula(y, _IMP)}", _IMP, need)
        case Not(body=x):
            return "~" + show_formula(x, _UNARY)
        case And(left=x, right=y):
            return _wrap(f"{show_formula(x, _UNARY)} & {show_formula(y, _AND)}", _AND, need)
        case Believes(agent=a, body=x):
            return f"B({a}, {show_formula(x)})"
        case Dyn(term=t, body=x):
            return f"[{show_term(t)}] {show_formula(x, _UNARY)}"
    raise TypeError(f"not a formula: {f!r}")


def show_literal(atom, sign: bool) -> str:
    text = show_formula(atom)
    return text if sign else "~" + text


def show_conj(c: LiteralConjunction) -> str:
    lits = c.literals()
    if not lits:
        return "T"
    return " & ".join(show_literal(a, s) for a, s in lits)


def show_defaults(d: DefaultMap) -> str:
    return ", ".join(f"{a}:{p}={v}" for a, p, v in d.entries)


def show_term(t) -> str:
    match t:
        case BinaryTerm(variant=v, announcement=phi):
            return f"{_BINARY_NAMES[v]}({show_formula(phi)})"
        case FTerm(announcement=c):
            return f"F({show_conj(c)})"
        case EdTerm(announcement=c, defaults=d):
            body = show_defaults(d)
            return f"Ed({show_conj(c)}; {body})" if body else f"Ed({show_conj(c)};)"
        case NamedTerm():
            return f"@{t.name}"
        case PointedTerm(base=b, designated=ds):
            return f"{show_term(b)}{{{'; '.join(show_conj(c) for c in ds)}}}"
    raise TypeError(f"not an event term: {t!r}")


def show_event_formula(f, need: int = 0) -> str:
    match f:
        case ImpliesEvent(prop=p):
            return f"({show_formula(p)})=>e"
        case EventImplies(prop=p):
            return f"e=>({show_formula(p)})"
        case EventNot(body=EventOr(left=EventNot(body=x), right=EventNot(body=y))):
            text = f"{show_event_formula(x, _UNARY)} & {show_event_formula(y, _AND)}"
            return _wrap(text, _AND, need)
        case EventNot(body=x):
            return "~" + show_event_formula(x, _UNARY)
        case EventOr(left=EventNot(body=x), right=y) if not _is_ev_and(EventNot(x)):
            text = f"{show_event_formula(x, _OR)} -> {show_event_formula(y, _IMP)}"
            return _wrap(text, _IMP, need)
        case EventOr(left=x, right=y):
            text = f"{show_event_formula(x, _AND)} | {show_event_formula(y, _OR)}"
            return _wrap(text, _OR, need)
        case Box(body=x):
            return "box " + show_event_formula(x, _UNARY)
    raise TypeError(f"not an event formula: {f!r}")


def show(x) -> str:
    """Render any AST value in concrete syntax."""
    from .ast import EventFormula, EventTerm, Formula

    if isinstance(x, Formula):
        return show_formula(x)
    if isinstance(x, EventFormula):
        return show_event_formula(x)
    if isinstance(x, EventTerm):
        return show_term(x)
    if isinstance(x, LiteralConjunction):
        return show_conj(x)
    if isinstance(x, DefaultMap):
        return show_defaults(x)
    raise TypeError(f"cannot print {x!r}")
