"""Validity for the forall-exists prefix fragment via finite refutation.

A prenex forall*exists* sentence is valid over all finite structures iff its
negation (an exists*forall* sentence) has no model; that fragment has the
finite-model property with bound max(1, number of leading existentials), so
refutation searches all structures up to that size, empty structure included.
"""

from __future__ import annotations

from typing import Optional

from ..errors import NotInFragment
from ..structures import Schema, Structure, enumerate_structures
from .formulas import (
    FRAGMENT_FORALL_EXISTS,
    FRAGMENT_QF,
    FRAGMENT_EXISTS,
    Formula,
    formula_schema,
    fragment_tag,
    model_check,
    prenex,
)


def small_model_bound(phi: Formula) -> int:
    """Size bound for counter-models of a forall*exists* sentence.

    Computed structurally on the negation normal form of the negation: a
    satisfiable formula with no existential under a universal has a model of
    at most max(1, w) elements, where w sums existential witnesses across
    conjunctions and maximizes across disjunctions (restrict any model to the
    witness set: universals and literals survive induced substructures).
    """
    if fragment_tag(phi) not in (FRAGMENT_QF, FRAGMENT_EXISTS, FRAGMENT_FORALL_EXISTS):
        raise NotInFragment(
            "validity is only decided for prenex forall*exists* sentences"
        )
    from .formulas import And, Exists, Forall, Not, Or, neg, nnf

    def witnesses(f: Formula, under_forall: bool) -> int:
        if isinstance(f, Exists):
            if under_forall:
                raise NotInFragment("existential under a universal after negation")
            return 1 + witnesses(f.body, under_forall)
        if isinstance(f, Forall):
            return witnesses(f.body, True)
        if isinstance(f, And):
            return sum(witnesses(p, under_forall) for p in f.parts)
        if isinstance(f, Or):
            return max((witnesses(p, under_forall) for p in f.parts), default=0)
        if isinstance(f, Not):
            return witnesses(f.sub, under_forall)
        return 0

    return max(1, witnesses(nnf(neg(phi)), False))


def find_counter_model(
    phi: Formula,
    schema: Optional[Schema] = None,
    extra_sizes: int = 0,
) -> Optional[Structure]:
    """Least structure (size, then enumeration order) falsifying phi, if any
    exists up to the small-model bound (+ extra_sizes beyond, for sanity
    checks)."""
    schema = schema or formula_schema(phi)
    bound = small_model_bound(phi) + extra_sizes
    for n in range(0, bound + 1):
        for s in enumerate_structures(schema, n, canonical_only=True, allow_loops=True):
            if not model_check(phi, s, {}):
                return s
    return None


def decide_forall_exists_validity(phi: Formula, schema: Optional[Schema] = None) -> bool:
    """True iff phi holds in every finite structure over the schema."""
    return find_counter_model(phi, schema) is None
