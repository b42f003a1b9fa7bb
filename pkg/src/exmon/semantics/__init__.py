"""ExpLang: a small probabilistic imperative language and its semantics."""

from .syntax import (
    Choose,
    DetAssign,
    If,
    ParseError,
    ParsedProgram,
    ProbAssign,
    QueryPredicate,
    Seq,
    Skip,
    VarDecl,
    While,
    parse,
    parse_query,
)
from .interp import (
    DEFAULT_MAX_ITER,
    DEFAULT_TOL,
    Denotation,
    Denoter,
    LoopResult,
    RuntimeProgramError,
    StateSpace,
    SubExpectation,
    WpResult,
    denote,
    eval_query,
    loop_semantics,
    wp,
)

__all__ = [
    "Choose",
    "DetAssign",
    "If",
    "ParseError",
    "ParsedProgram",
    "ProbAssign",
    "QueryPredicate",
    "Seq",
    "Skip",
    "VarDecl",
    "While",
    "parse",
    "parse_query",
    "DEFAULT_MAX_ITER",
    "DEFAULT_TOL",
    "Denotation",
    "Denoter",
    "LoopResult",
    "RuntimeProgramError",
    "StateSpace",
    "SubExpectation",
    "WpResult",
    "denote",
    "eval_query",
    "loop_semantics",
    "wp",
]
