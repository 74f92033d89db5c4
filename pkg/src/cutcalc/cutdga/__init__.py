from .sequences import (
    Sequence,
    parse_sequence,
    two_cuts,
    all_cuts,
    elementary_cuts,
)
from .algebra import (
    AlgElement,
    CUT_OPS,
    coproduct_elementary_form,
    differential,
    t_element,
)
from .relations import (
    RegPolynomial,
    RelationIdeal,
    certify_regularization,
    is_zero_mod_ideal,
    regularize,
    relation_ideal,
    relation_reduce,
)

__all__ = [
    "Sequence",
    "parse_sequence",
    "two_cuts",
    "all_cuts",
    "elementary_cuts",
    "AlgElement",
    "CUT_OPS",
    "coproduct_elementary_form",
    "differential",
    "t_element",
    "RegPolynomial",
    "RelationIdeal",
    "certify_regularization",
    "is_zero_mod_ideal",
    "regularize",
    "relation_ideal",
    "relation_reduce",
]
