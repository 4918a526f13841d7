"""Enumerate implicates of quantifier-free problems modulo a theory.

The package answers questions of the form "which clauses over a chosen
literal vocabulary does this problem entail", which dually yields the
missing hypotheses that would make an unprovable goal provable. All
theory reasoning is delegated to a satisfiability oracle: either an
external SMT-LIB2 process or the built-in propositional backend.
"""

from .core import (
    AbduceError,
    AbducibleError,
    Clause,
    EMPTY_CLAUSE,
    LiteralTable,
    OracleError,
    ProblemError,
    Signature,
    clause_of_hypotheses,
    compare_clauses,
    complement,
    format_clause,
    format_hypotheses,
    hypotheses_of_clause,
    parse_clause,
)
from .problem import Problem, load_problem, parse_problem

__all__ = [
    "AbduceError",
    "AbducibleError",
    "Clause",
    "EMPTY_CLAUSE",
    "LiteralTable",
    "OracleError",
    "Problem",
    "ProblemError",
    "Signature",
    "clause_of_hypotheses",
    "compare_clauses",
    "complement",
    "format_clause",
    "format_hypotheses",
    "hypotheses_of_clause",
    "load_problem",
    "parse_clause",
    "parse_problem",
]
