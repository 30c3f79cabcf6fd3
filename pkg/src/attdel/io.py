"""JSON model files and Graphviz DOT export."""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

from .semantics import EventModel, KripkeModel, MultiPointedEventModel, PointedModel
from .errors import Contradictory, NotAConjunction
from .syntax import (
    Atom, AttAtom, LiteralConjunction, Signature, atom_order, normalize,
    parse_event_formula, parse_formula, show, show_literal,
)


def _signature(data: dict) -> Signature:
    try:
        return Signature(tuple(data["agents"]), tuple(data["atoms"]))
    except KeyError as exc:
        raise ValueError(f"model file lacks field {exc.args[0]!r}") from None


def _atom(text: str, sig: Signature):
    f = parse_formula(text, sig)
    if not isinstance(f, (Atom, AttAtom)):
        raise ValueError(f"valuation entries must be atoms, got {text!r}")
    return f


def _relations(data: dict) -> dict[str, list[tuple[str, str]]]:
    return {a: [(str(s), str(t)) for s, t in pairs] for a, pairs in data.get("relations", {}).items()}


def model_from_json(data: dict) -> PointedModel | KripkeModel:
    """Read a Kripke model; returns a PointedModel when "points" names a world."""
    sig = _signature(data)
    worlds = [str(w["id"]) for w in data["worlds"]]
    valuation = {str(w["id"]): [_atom(a, sig) for a in w.get("val", [])] for w in data["worlds"]}
    m = KripkeModel(sig, worlds, _relations(data), valuation)
    points = data.get("points") or []
    if len(points) > 1:
        raise ValueError("a pointed model file must name at most one point")
    return PointedModel(m, str(points[0])) if points else m


def model_to_json(x: PointedModel | KripkeModel) -> dict:
    pm = x if isinstance(x, PointedModel) else None
    m = x.model if pm else x
    rels = m.relations
    return {
        "agents": list(m.sig.agents),
        "atoms": list(m.sig.atoms),
        "worlds": [
            {"id": w, "val": [show(a) for a in sorted(m.true_atoms(w), key=atom_order)]}
            for w in m.worlds
        ],
        "relations": {a: sorted([s, t] for s, t in rels[a]) for a in m.sig.agents},
        "points": [pm.point] if pm else [],
    }


def event_model_from_json(data: dict) -> MultiPointedEventModel:
    sig = _signature(data)
    pre_text = data["pre"]
    events = [str(e) for e in data.get("events", list(pre_text))]
    pre = {}
    for e in events:
        f = parse_formula(pre_text[e], sig)
        try:
            pre[e] = normalize(f)
        except (NotAConjunction, Contradictory):
            pre[e] = f
    em = EventModel(sig, events, _relations(data), pre)
    designated = data.get("designated")
    return MultiPointedEventModel(em, frozenset(designated if designated is not None else events))


def event_model_to_json(me: MultiPointedEventModel) -> dict:
    em = me.model
    rels = em.relations
    return {
        "agents": list(em.sig.agents),
        "atoms": list(em.sig.atoms),
        "events": list(em.events),
        "relations": {a: sorted([s, t] for s, t in rels[a]) for a in em.sig.agents},
        "pre": {e: show(p) for e, p in em.pre.items()},
        "designated": sorted(me.designated),
    }


def syntactic_from_json(data: dict, sig: Signature | None = None):
    from .syntactic_events import SyntacticEventModel

    if sig is None:
        sig = _signature(data)
    psi_a = {a: parse_event_formula(t, sig) for a, t in data["psi_a"].items()}
    ed = data.get("psi_Ed")
    return SyntacticEventModel(
        parse_event_formula(data["psi_E"], sig),
        psi_a,
        parse_event_formula(ed, sig) if ed else None,
    ), sig


def syntactic_to_json(g, sig: Signature) -> dict:
    out = {
        "agents": list(sig.agents),
        "atoms": list(sig.atoms),
        "psi_E": show(g.psi_E),
        "psi_a": {a: show(f) for a, f in g.psi_a.items()},
    }
    if g.psi_Ed is not None:
        out["psi_Ed"] = show(g.psi_Ed)
    return out


def load_json(path: str | Path) -> Any:
    with open(path) as fh:
        return json.load(fh)


def save_json(data: Any, path: str | Path) -> None:
    with open(path, "w") as fh:
        json.dump(data, fh, indent=2)
        fh.write("\n")


def load_any(path: str | Path):
    """Load a Kripke or event model file, telling them apart by the "pre" field."""
    data = load_json(path)
    return event_model_from_json(data) if "pre" in data else model_from_json(data)


# --------------------------------------------------------------------- DOT


def _quote(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def to_dot(x, name: str = "model") -> str:
    """Render a Kripke or event model as a DOT digraph with deterministic order."""
    if isinstance(x, PointedModel):
        m, designated = x.model, {x.point}
        nodes = m.worlds
        labels = {w: _world_label(m, w) for w in nodes}
    elif isinstance(x, KripkeModel):
        m, designated = x, set()
        nodes = m.worlds
        labels = {w: _world_label(m, w) for w in nodes}
    elif isinstance(x, MultiPointedEventModel):
        m, designated = x.model, set(x.designated)
        nodes = m.events
        labels = {e: show(m.precondition(e)) for e in nodes}
    elif isinstance(x, EventModel):
        m, designated = x, set()
        nodes = m.events
        labels = {e: show(m.precondition(e)) for e in nodes}
    else:
        raise TypeError(f"cannot export {type(x).__name__}")
    ids = {n: f"n{i}" for i, n in enumerate(nodes)}
    out = [f"digraph {_quote(name)} {{"]
    for n in nodes:
        shape = "doublecircle" if n in designated else "circle"
        out.append(f"  {ids[n]} [shape={shape}, xlabel={_quote(n)}, label={_quote(labels[n])}];")
    rels = m.relations
    order = {n: i for i, n in enumerate(nodes)}
    for a in m.sig.agents:
        for s, t in sorted(rels[a], key=lambda st: (order[st[0]], order[st[1]])):
            out.append(f"  {ids[s]} -> {ids[t]} [label={_quote(a)}];")
    out.append("}")
    return "\n".join(out) + "\n"


def _world_label(m: KripkeModel, w: str) -> str:
    """True literals in normal-form order."""
    true = m.true_atoms(w)
    lits = LiteralConjunction(true, frozenset()).literals()
    return ", ".join(show_literal(a, s) for a, s in lits) or "T"
