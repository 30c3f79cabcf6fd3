"""The static language, the event language, normal forms, parsing and printing."""

from .ast import (
    BINARY_VARIANTS, BOTTOM, EMPTY, TOP, And, Atom, AttAtom, Believes,
    BinaryTerm, Box, DefaultMap, Dyn, EdTerm, EventFormula, EventImplies,
    EventNot, EventOr, EventTerm, FTerm, Formula, ImpliesEvent,
    LiteralConjunction, NamedTerm, Not, PointedTerm, PropAtom, Signature, Top,
    atom_order, conj_all, conjuncts, disj, disj_all, ev_and, ev_and_all,
    ev_conjuncts, ev_equiv, ev_implies, ev_or_all, iff, implies,
    is_propositional, modal_depth,
)
from .parser import (
    infer_signature, parse_conj, parse_event_formula, parse_event_term,
    parse_formula, token_count, tokenize,
)
from .printer import (
    show, show_conj, show_event_formula, show_formula, show_literal, show_term,
)
from .propositional import (
    atoms_of, contains, entailed_literals, normalize, prop_atoms,
    prop_entails, prop_satisfiable, prop_valid, truth_columns,
)
