"""A proof-checking kernel for an intuitionistic axiomatic theory of
meaningfulness (M), assertibility (A), truth (T), and holding (H), with a
proof-script language, proof transformations, a checked corpus of
derivations, and finite countermodel search for the propositional fragment.
"""

from .kernel import (
    ByExtension,
    ByGenE,
    ByGenF,
    ByHyp,
    ByLogical,
    ByMP,
    ByRelease,
    ByTheory,
    ExtensionGrant,
    Judgment,
    Proof,
    ProofCheckError,
    SchemeError,
    Step,
    StepError,
    check_proof,
    extension_instance,
    is_log_instance,
    logical_instance,
    theory_instance,
    try_check,
)
from .parser import ParseError, parse_formula, parse_term
from .script import ScriptError, emit_script, parse_script, script_of
from .semantics import (
    Countermodel,
    KripkeFrame,
    KripkeModel,
    SemanticsError,
    eval_at,
    find_countermodel,
    holds_in_all_models,
)
from .syntax import (
    BOT,
    DefinitionError,
    Environment,
    Formula,
    IllFormedError,
    Term,
    alpha_eq,
    free_vars,
    iff,
    neg,
    pformat,
    substitute,
)
from .tactics import (
    NameStore,
    ProofBuilder,
    TacticError,
    deduction_theorem,
    internalize,
    meaningfulness_closure,
)

__version__ = "0.1.0"

__all__ = [
    "BOT",
    "ByExtension",
    "ByGenE",
    "ByGenF",
    "ByHyp",
    "ByLogical",
    "ByMP",
    "ByRelease",
    "ByTheory",
    "Countermodel",
    "DefinitionError",
    "Environment",
    "ExtensionGrant",
    "Formula",
    "IllFormedError",
    "Judgment",
    "KripkeFrame",
    "KripkeModel",
    "NameStore",
    "ParseError",
    "Proof",
    "ProofBuilder",
    "ProofCheckError",
    "SchemeError",
    "ScriptError",
    "SemanticsError",
    "Step",
    "StepError",
    "TacticError",
    "Term",
    "alpha_eq",
    "check_proof",
    "deduction_theorem",
    "emit_script",
    "eval_at",
    "extension_instance",
    "find_countermodel",
    "free_vars",
    "holds_in_all_models",
    "iff",
    "internalize",
    "is_log_instance",
    "logical_instance",
    "meaningfulness_closure",
    "neg",
    "parse_formula",
    "parse_script",
    "parse_term",
    "pformat",
    "script_of",
    "substitute",
    "theory_instance",
    "try_check",
]
