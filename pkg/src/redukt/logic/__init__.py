"""Formulas, model checking, interpretations, translations, and validity."""

from .formulas import (
    And,
    Bottom,
    Eq,
    Exists,
    Forall,
    Formula,
    Iff,
    IndexIs,
    Implies,
    Not,
    Or,
    Rel,
    Top,
    BOTTOM,
    TOP,
    FRAGMENT_EXISTS,
    FRAGMENT_FORALL_EXISTS,
    FRAGMENT_GENERAL,
    FRAGMENT_QF,
    conj,
    disj,
    formula_schema,
    formula_to_text,
    fragment_tag,
    free_vars,
    is_quantifier_free,
    model_check,
    neg,
    nnf,
    parse_formula,
    prenex,
    subst_vars,
)
from .interpretations import (
    QfInterpretation,
    complement_interpretation,
    eval_interpretation,
    identity_interpretation,
    interpretation_from_doc,
    interpretation_to_doc,
    make_interpretation,
)
from .translate import (
    ORDER_SYMBOL,
    cookbook_to_qf,
    inverse_substitute,
    lower_copying,
    qf_to_cookbook,
)
from .validity import (
    decide_forall_exists_validity,
    find_counter_model,
    small_model_bound,
)
