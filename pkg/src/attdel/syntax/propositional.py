"""Normal forms and propositional validity.

Validity is decided with bit-parallel truth tables: each atom becomes a
Python int whose bit j is the atom's value under assignment j, so one pass
over the formula evaluates all 2^k assignments at once.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Iterable

from ..errors import Contradictory, NotAConjunction, NotPropositional
from .ast import (
    And, Atom, AttAtom, Believes, BinaryTerm, Dyn, EdTerm, FTerm, Formula,
    LiteralConjunction, Not, PointedTerm, Top, conjuncts, implies,
)


def normalize(f: Formula) -> LiteralConjunction:
    """Normal form of a conjunction of literals and ⊤."""
    pos, neg = set(), set()
    for c in conjuncts(f):
        match c:
            case Top():
                continue
            case Atom() | AttAtom():
                pos.add(c)
            case Not(body=Atom() | AttAtom() as a):
                neg.add(a)
            case Not(body=Top()):
                raise Contradictory("⊥ cannot occur in a consistent conjunction")
            case _:
                raise NotAConjunction(f"not a conjunction of literals: {c}")
    return LiteralConjunction(frozenset(pos), frozenset(neg))


def contains(phi: LiteralConjunction, psi: LiteralConjunction) -> bool:
    """True iff every literal of psi is a literal of phi."""
    return phi.contains(psi)


def atoms_of(x) -> frozenset[str]:
    """Propositional atom names occurring in a formula, conjunction or term."""
    out: set[str] = set()
    stack = [x]
    while stack:
        g = stack.pop()
        match g:
            case Atom(name=n):
                out.add(n)
            case AttAtom(atom=p):
                out.add(p)
            case Not(body=b) | Believes(body=b):
                stack.append(b)
            case And(left=l, right=r):
                stack.extend((l, r))
            case Dyn(term=t, body=b):
                stack.extend((t, b))
            case LiteralConjunction():
                stack.extend(g.atoms)
            case BinaryTerm(announcement=a) | FTerm(announcement=a) | EdTerm(announcement=a):
                stack.append(a)
            case PointedTerm(base=b, designated=ds):
                stack.append(b)
                stack.extend(ds)
    return frozenset(out)


def prop_atoms(f: Formula) -> list:
    """Atoms of At ∪ H occurring in a propositional formula, deduplicated."""
    seen: dict = {}
    stack = [f]
    while stack:
        g = stack.pop()
        match g:
            case Atom() | AttAtom():
                seen[g] = None
            case Not(body=b):
                stack.append(b)
            case And(left=l, right=r):
                stack.extend((r, l))
            case Top():
                pass
            case _:
                raise NotPropositional(f"modal operator in propositional context: {g}")
    return list(seen)


@lru_cache(maxsize=32)
def truth_columns(k: int) -> tuple[tuple[int, ...], int]:
    """Columns of a k-atom truth table packed into ints, plus the all-ones mask."""
    n = 1 << k
    cols = []
    for i in range(k):
        half = 1 << i
        pattern = ((1 << half) - 1) << half
        width = 2 * half
        while width < n:
            pattern |= pattern << width
            width *= 2
        cols.append(pattern)
    return tuple(cols), (1 << n) - 1


def eval_bits(f: Formula, env: dict, full: int) -> int:
    """Evaluate a propositional formula on packed columns."""
    match f:
        case Top():
            return full
        case Atom() | AttAtom():
            return env[f]
        case Not(body=b):
            return full ^ eval_bits(b, env, full)
        case And(left=l, right=r):
            return eval_bits(l, env, full) & eval_bits(r, env, full)
    raise NotPropositional(f"modal operator in propositional context: {f}")


def _table(fs: Iterable[Formula]) -> tuple[list[int], int]:
    fs = list(fs)
    atoms: dict = {}
    for f in fs:
        for a in prop_atoms(f):
            atoms.setdefault(a, None)
    cols, full = truth_columns(len(atoms))
    env = dict(zip(atoms, cols))
    return [eval_bits(f, env, full) for f in fs], full


def prop_valid(f: Formula) -> bool:
    """True iff f holds under every assignment to its atoms."""
    (bits,), full = _table([f])
    return bits == full


def prop_satisfiable(f: Formula) -> bool:
    (bits,), _ = _table([f])
    return bits != 0


def prop_entails(premise: Formula, conclusion: Formula) -> bool:
    return prop_valid(implies(premise, conclusion))


def entailed_literals(f: Formula) -> LiteralConjunction | None:
    """The literals over atoms of f entailed by f; None when f is unsatisfiable."""
    atoms = prop_atoms(f)
    cols, full = truth_columns(len(atoms))
    bits = eval_bits(f, dict(zip(atoms, cols)), full)
    if bits == 0:
        return None
    pos = {a for a, c in zip(atoms, cols) if bits & ~c == 0}
    neg = {a for a, c in zip(atoms, cols) if bits & c == 0}
    return LiteralConjunction(frozenset(pos), frozenset(neg))
