"""Workbench for propositional logic with implication and co-implication
over finite partially ordered Kripke models: model checking, greatest
bi-asimulations with distinguishing-formula synthesis, bounded
bi-unravellings, bracket models and path schemas, and a standard
translation into classical first-order logic.
"""

from .formula import (
    And,
    Atom,
    Bottom,
    Coimpl,
    Formula,
    Impl,
    Or,
    ParseError,
    Signature,
    big_and,
    big_or,
    enumerate_formulas,
    letters,
    neg,
    parse,
    rank,
    render,
    top,
)
from .kripke import (
    KripkeModel,
    ModelFormatError,
    PointedModel,
    ValidationReport,
    chain_union,
    isomorphism,
    load_model,
    make_model,
    model_to_dict,
    model_to_json,
    normalize,
    random_model,
    reduct,
    submodel,
    validate,
)
from .semantics import (
    Theory,
    TypeQuery,
    is_type,
    realize,
    sat_worlds,
    satisfies,
    theory,
    theory_included,
)
from .biasim import (
    Asim,
    canonical_relation,
    check_biasim,
    greatest_biasim,
    separating_formula,
)
from .unravel import (
    SchemaSet,
    UnravelModel,
    b_theory_check,
    bracket,
    bracket_letters,
    realize_finite_type_expansion,
    schemas,
    unravel,
    verify_schema,
    zigzag_factor,
)
from .fol import FOProblem, emit, eval_fo, frame_axioms, translate

__version__ = "0.1.0"
