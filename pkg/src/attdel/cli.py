"""Command-line interface.

Exit status: 0 for success or a true/passing result, 1 for a false result or
a mismatch, 2 for usage, parse and file errors.
"""

from __future__ import annotations

import argparse
import json
import sys
import warnings
from pathlib import Path

from . import __version__
from .attention_events import elaborate
from .axioms import FORMS, SCHEMAS, lemma_check, reduce, soundness_fuzz
from .errors import AttDelError, NotApplicable
from .generators import Bounds
from .io import (
    event_model_from_json, event_model_to_json, load_json, model_from_json,
    model_to_json, save_json, syntactic_from_json, to_dot,
)
from .scenarios import SCENARIOS, gorilla_model, run_scenario
from .semantics import (
    MultiPointedEventModel, PointedModel, bisimilar, generated_submodel, holds_everywhere,
    product_update, satisfies, update,
)
from .syntactic_events import GENERATORS, induce_full, succinctness_report
from .syntax import (
    Signature, infer_signature, parse_conj, parse_event_formula, parse_event_term,
    parse_formula, show,
)


class UsageError(Exception):
    pass


def _sig_from_args(args, *texts: str) -> Signature:
    agents = tuple(args.agents.split(",")) if args.agents else ()
    atoms = tuple(args.atoms.split(",")) if args.atoms else ()
    if agents and atoms:
        return Signature(agents, atoms)
    return infer_signature(*texts, agents=agents, atoms=atoms)


def _add_sig(p: argparse.ArgumentParser) -> None:
    p.add_argument("--agents", help="comma-separated agent names (default: inferred)")
    p.add_argument("--atoms", help="comma-separated atom names (default: inferred)")


def _write_dot(path: str | None, x, name: str) -> None:
    if path:
        Path(path).write_text(to_dot(x, name))


def _load_model(path: str):
    data = load_json(path)
    if "pre" in data:
        raise UsageError(f"{path} holds an event model, expected a Kripke model")
    return model_from_json(data)


def _event_models(specs: list[str]):
    """name=path pairs from --event options."""
    out = {}
    for spec in specs or ():
        name, sep, path = spec.partition("=")
        if not sep:
            raise UsageError(f"--event expects name=path, got {spec!r}")
        out[name] = event_model_from_json(load_json(path))
    return out


def _term(text: str, sig: Signature, models: dict):
    if text.endswith(".json") and Path(text).exists():
        me = event_model_from_json(load_json(text))
        if me.sig != sig:
            raise UsageError(f"event model {text} has signature {me.sig}, model has {sig}")
        return me
    return parse_event_term(text, sig, models)


# ------------------------------------------------------------ commands


def cmd_parse(args) -> int:
    sig = _sig_from_args(args, args.text)
    parsers = {
        "formula": parse_formula,
        "term": parse_event_term,
        "event": parse_event_formula,
        "conj": parse_conj,
    }
    print(show(parsers[args.kind](args.text, sig)))
    return 0


def cmd_check(args) -> int:
    x = _load_model(args.model)
    m = x.model if isinstance(x, PointedModel) else x
    f = parse_formula(args.formula, m.sig)
    _write_dot(args.dot, x, Path(args.model).stem)
    if args.world:
        result = satisfies(PointedModel(m, args.world), f)
    elif isinstance(x, PointedModel):
        result = satisfies(x, f)
    else:
        result = holds_everywhere(m, f)
    print("true" if result else "false")
    return 0 if result else 1


def cmd_update(args) -> int:
    x = _load_model(args.model)
    if not isinstance(x, PointedModel):
        if not args.world:
            raise UsageError("the model file names no point; pass --world")
        x = PointedModel(x, args.world)
    sig = x.model.sig
    t = _term(args.term, sig, _event_models(args.event))
    try:
        out = product_update(x, t) if isinstance(t, MultiPointedEventModel) else update(x, t)
    except NotApplicable as exc:
        print(f"not applicable: {exc}", file=sys.stderr)
        return 1
    if args.prune:
        out = generated_submodel(out)
    if args.output:
        save_json(model_to_json(out), args.output)
    else:
        print(json.dumps(model_to_json(out), indent=2))
    _write_dot(args.dot, out, "updated")
    return 0


def cmd_build_event(args) -> int:
    sig = _sig_from_args(args, args.term)
    me = elaborate(parse_event_term(args.term, sig), sig)
    data = event_model_to_json(me)
    if args.output:
        save_json(data, args.output)
    else:
        print(json.dumps(data, indent=2))
    _write_dot(args.dot, me, "event")
    print(f"{len(me.events)} events, {len(me.designated)} designated", file=sys.stderr)
    return 0


def cmd_induce(args) -> int:
    data = load_json(args.file)
    texts = [data.get("psi_E", ""), *data.get("psi_a", {}).values(), data.get("psi_Ed") or ""]
    if "agents" in data and "atoms" in data:
        sig = Signature(tuple(data["agents"]), tuple(data["atoms"]))
    else:
        sig = _sig_from_args(args, *texts)
        agents = tuple(sorted(set(sig.agents) | set(data.get("psi_a", {}))))
        sig = Signature(agents, sig.atoms)
    g, sig = syntactic_from_json(data, sig)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        res = induce_full(g, sig, cap=args.cap, verify=not args.no_verify)
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)
    for a, ok in res.verified.items():
        if not ok:
            what = "kept edge-wise" if args.no_verify else "replaced by the empty relation"
            print(f"warning: relation of {a} fails its formula; {what}", file=sys.stderr)
    out = event_model_to_json(res.model)
    if args.output:
        save_json(out, args.output)
    else:
        print(json.dumps(out, indent=2))
    _write_dot(args.dot, res.model, "induced")
    print(f"{len(res.model.events)} events", file=sys.stderr)
    return 0


def cmd_bisim(args) -> int:
    a, b = _load_model(args.left), _load_model(args.right)
    if not (isinstance(a, PointedModel) and isinstance(b, PointedModel)):
        raise UsageError("both model files must name a point")
    ok, _ = bisimilar(a, b)
    print("bisimilar" if ok else "not bisimilar")
    return 0 if ok else 1


def cmd_reduce(args) -> int:
    sig = _sig_from_args(args, args.formula)
    print(show(reduce(parse_formula(args.formula, sig), sig)))
    return 0


def cmd_fuzz(args) -> int:
    bounds = Bounds(max_worlds=args.max_worlds, max_atoms=args.max_atoms, max_agents=args.max_agents)
    report = soundness_fuzz(args.trials, args.seed, bounds, args.form, args.schema or SCHEMAS)
    print(report.summary())
    for s, n in report.per_schema.items():
        print(f"  {s}: {len(report.failures_for(s))}/{n}")
    if report.failures:
        save_json(report.to_json(), args.report)
        print(f"counterexamples written to {args.report}")
        return 1
    return 0


def cmd_lemma(args) -> int:
    if args.model:
        pm = _load_model(args.model)
        if not isinstance(pm, PointedModel):
            raise UsageError("the model file must name a point")
    elif args.scenario == "gorilla":
        pm = gorilla_model()
    else:
        raise UsageError(f"unknown lemma scenario {args.scenario!r}")
    sig = pm.model.sig
    phi = parse_conj(args.phi, sig)
    d = None
    if args.variant == "default":
        d = parse_event_term(f"Ed({args.phi}; {args.defaults})", sig).defaults
    try:
        r = lemma_check(pm, phi, args.agent, args.variant, d)
    except NotApplicable as exc:
        print(f"not applicable: {exc}")
        return 1
    attended = "{" + ", ".join(sorted(r.attended)) + "}"
    status = "pass" if r.holds else "fail"
    print(f"{status} agent={args.agent} S={attended} {r.main} vs {r.reduced}")
    if r.reason:
        print(f"  {r.reason}")
    return 0 if r.holds else 1


def cmd_scenario(args) -> int:
    if args.list or not args.name:
        for name, sc in SCENARIOS.items():
            print(f"{name}: {sc.description}")
        return 0
    report = run_scenario(args.name)
    print(f"scenario {report.name}")
    for line in report.lines:
        print(line)
    if args.dump:
        out = Path(args.dump)
        out.mkdir(parents=True, exist_ok=True)
        for i, pm in enumerate(report.models):
            save_json(model_to_json(pm), out / f"step{i}.json")
    print("ok" if report.ok else f"{report.mismatches} mismatches")
    return 0 if report.ok else 1


def cmd_succinctness(args) -> int:
    report = succinctness_report(args.n_max, args.gen)
    sys.stdout.write(report.csv())
    print(f"# size = {report.slope:g}*n + {report.intercept:g}, max residual {report.max_residual:g}",
          file=sys.stderr)
    return 0 if report.exponential and report.linear else 1


# ------------------------------------------------------------ parser


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="attdel", description="Model checking for attention-based belief updates.")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("parse", help="parse and print in canonical form")
    p.add_argument("text")
    p.add_argument("--kind", choices=("formula", "term", "event", "conj"), default="formula")
    _add_sig(p)
    p.set_defaults(func=cmd_parse)

    p = sub.add_parser("check", help="evaluate a formula on a model file")
    p.add_argument("model")
    p.add_argument("formula")
    p.add_argument("--world", help="evaluate here instead of at the file's point")
    p.add_argument("--dot", help="also write the model as DOT")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("update", help="product update with an event term or event model file")
    p.add_argument("model")
    p.add_argument("term")
    p.add_argument("-o", "--output")
    p.add_argument("--world", help="point to use when the file names none")
    p.add_argument("--event", action="append", metavar="NAME=PATH", help="event model for @NAME")
    p.add_argument("--prune", action="store_true", help="keep only worlds reachable from the point")
    p.add_argument("--dot")
    p.set_defaults(func=cmd_update)

    p = sub.add_parser("build-event", help="elaborate an event term into an event model file")
    p.add_argument("term")
    p.add_argument("-o", "--output")
    p.add_argument("--dot")
    _add_sig(p)
    p.set_defaults(func=cmd_build_event)

    p = sub.add_parser("induce", help="induce an event model from a syntactic description")
    p.add_argument("file")
    p.add_argument("-o", "--output")
    p.add_argument("--dot")
    p.add_argument("--cap", type=int, default=10**6, help="search node limit")
    p.add_argument("--no-verify", action="store_true", help="keep edge-wise relations that fail validity")
    _add_sig(p)
    p.set_defaults(func=cmd_induce)

    p = sub.add_parser("bisim", help="decide bisimilarity of two pointed models")
    p.add_argument("left")
    p.add_argument("right")
    p.set_defaults(func=cmd_bisim)

    p = sub.add_parser("reduce", help="rewrite away dynamic modalities")
    p.add_argument("formula")
    _add_sig(p)
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("fuzz", help="check reduction axioms on random models")
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--form", choices=FORMS, default="verbatim")
    p.add_argument("--schema", action="append", choices=SCHEMAS)
    p.add_argument("--max-worlds", type=int, default=4)
    p.add_argument("--max-atoms", type=int, default=3)
    p.add_argument("--max-agents", type=int, default=2)
    p.add_argument("--report", default="fuzz-report.json")
    p.set_defaults(func=cmd_fuzz)

    p = sub.add_parser("lemma", help="compare full and attended updates from an agent's view")
    p.add_argument("--scenario", default="gorilla")
    p.add_argument("--model", help="pointed model file instead of a scenario")
    p.add_argument("--agent", default="a")
    p.add_argument("--phi", default="p & g")
    p.add_argument("--variant", choices=("plain", "default"), default="plain")
    p.add_argument("--defaults", default="a:g=-, b:g=-")
    p.set_defaults(func=cmd_lemma)

    p = sub.add_parser("scenario", help="run an embedded scenario")
    p.add_argument("name", nargs="?", choices=tuple(SCENARIOS))
    p.add_argument("--list", action="store_true")
    p.add_argument("--dump", metavar="DIR", help="write each step's model as JSON")
    p.set_defaults(func=cmd_scenario)

    p = sub.add_parser("succinctness", help="syntactic size versus induced event count")
    p.add_argument("--gen", choices=tuple(GENERATORS), default="Gprime")
    p.add_argument("--n-max", type=int, default=12)
    p.set_defaults(func=cmd_succinctness)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, OSError, KeyError, ValueError, AttDelError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
