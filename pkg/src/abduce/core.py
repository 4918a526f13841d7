"""Ground literals, clauses and their ordering.

Atoms are canonical term strings; a literal is an atom with a sign.
Literal ids are ints: atom k yields 2k (positive) and 2k+1 (negative),
so complementation is a single bit flip. Clauses are frozensets of
literal ids. Nothing here interprets the theory; only the printed
form of an atom identifies it, so `(= a b)` and `(= b a)` are
different atoms on purpose (subsumption merges them semantically).
"""

from __future__ import annotations

from . import sexpr


class AbduceError(Exception):
    """Base for everything this package raises on purpose."""


class ProblemError(AbduceError):
    """Malformed or unsupported problem input."""


class OracleError(AbduceError):
    """Backend failed to start, died, or broke protocol."""


class AbducibleError(AbduceError):
    """Bad abducible file or generation request."""


BOOL = "Bool"
INT = "Int"

# operators interpreted by the printer/sort checker; everything else is a
# declared symbol or a numeral
_ARITH_OPS = {"+", "-", "*"}
_REL_OPS = {"<=", "<", ">=", ">"}
_BOOL_OPS = {"and", "or", "not", "=>", "ite", "xor"}


def is_numeral(tok) -> bool:
    return isinstance(tok, str) and (tok.isdigit() or (tok.startswith("-") and tok[1:].isdigit()))


class Signature:
    """Declared sorts and symbols of a problem, plus its logic tag."""

    def __init__(self, logic_tag: str = ""):
        self.logic_tag = logic_tag
        self.sorts: list[str] = [BOOL, INT]
        self.symbols: dict[str, tuple[tuple[str, ...], str]] = {}
        self.declaration_order: list[str] = []

    def declare_sort(self, name: str) -> None:
        if name in self.sorts:
            raise ProblemError("sort %r declared twice" % name)
        self.sorts.append(name)

    def declare_fun(self, name: str, arg_sorts, result_sort: str) -> None:
        if name in self.symbols:
            raise ProblemError("symbol %r declared twice" % name)
        for s in tuple(arg_sorts) + (result_sort,):
            if s not in self.sorts:
                raise ProblemError("symbol %r uses undeclared sort %r" % (name, s))
        self.symbols[name] = (tuple(arg_sorts), result_sort)
        self.declaration_order.append(name)

    def constants(self) -> list[tuple[str, str]]:
        """0-ary declared symbols as (name, sort), in declaration order."""
        out = []
        for name in self.declaration_order:
            args, res = self.symbols[name]
            if not args:
                out.append((name, res))
        return out

    def sort_of(self, term) -> str:
        """Infer the sort of a ground term; raises ProblemError if ill-formed."""
        if isinstance(term, str):
            if term in ("true", "false"):
                return BOOL
            if is_numeral(term):
                return INT
            if term in self.symbols:
                args, res = self.symbols[term]
                if args:
                    raise ProblemError("symbol %r needs %d argument(s)" % (term, len(args)))
                return res
            raise ProblemError("unknown symbol %r" % term)
        if not term:
            raise ProblemError("empty term")
        head = term[0]
        if not isinstance(head, str):
            raise ProblemError("higher-order term not supported")
        argsorts = [self.sort_of(a) for a in term[1:]]
        if head in _BOOL_OPS:
            if head == "ite":
                if len(argsorts) != 3 or argsorts[0] != BOOL or argsorts[1] != argsorts[2]:
                    raise ProblemError("bad ite term %s" % sexpr.to_text(term))
                return argsorts[1]
            if any(s != BOOL for s in argsorts):
                raise ProblemError("non-boolean argument to %r" % head)
            return BOOL
        if head in ("=", "distinct"):
            if len(argsorts) < 2 or len(set(argsorts)) != 1:
                raise ProblemError("mixed-sort %s in %s" % (head, sexpr.to_text(term)))
            return BOOL
        if head in _REL_OPS:
            if any(s != INT for s in argsorts):
                raise ProblemError("non-integer comparison %s" % sexpr.to_text(term))
            return BOOL
        if head in _ARITH_OPS:
            if any(s != INT for s in argsorts):
                raise ProblemError("non-integer arithmetic %s" % sexpr.to_text(term))
            return INT
        if head in self.symbols:
            args, res = self.symbols[head]
            if tuple(argsorts) != args:
                raise ProblemError(
                    "ill-sorted application %s: expects (%s)"
                    % (sexpr.to_text(term), " ".join(args))
                )
            return res
        raise ProblemError("unknown symbol %r" % head)


def complement(lit: int) -> int:
    return lit ^ 1


def is_positive(lit: int) -> bool:
    return lit % 2 == 0


class LiteralTable:
    """Bijection between literal ids and (signed) canonical atom terms."""

    def __init__(self):
        self._ids: dict[str, int] = {}
        self._texts: list[str] = []
        self._terms: list[object] = []

    def __len__(self):
        return len(self._texts)

    def atom_id(self, term) -> int:
        """Register (if new) and return the atom id for a term or its text.

        A string argument must already be canonical (single-spaced).
        """
        if isinstance(term, str):
            text, node = term, term
        else:
            text, node = sexpr.to_text(term), term
        aid = self._ids.get(text)
        if aid is None:
            aid = len(self._texts)
            self._ids[text] = aid
            self._texts.append(text)
            self._terms.append(node)
        return aid

    def literal_from_term(self, term) -> int:
        """Term to literal id; `(not X)` is the negative literal on X."""
        neg = False
        while isinstance(term, list) and len(term) == 2 and term[0] == "not":
            neg = not neg
            term = term[1]
        aid = self.atom_id(term)
        return 2 * aid + (1 if neg else 0)

    def literal_from_text(self, text: str) -> int:
        return self.literal_from_term(sexpr.parse_one(text))

    def atom_text(self, lit: int) -> str:
        return self._texts[lit // 2]

    def atom_term(self, lit: int):
        node = self._terms[lit // 2]
        if isinstance(node, str) and node.startswith("("):
            node = sexpr.parse_one(node)
            self._terms[lit // 2] = node
        return node

    def literal_text(self, lit: int) -> str:
        at = self.atom_text(lit)
        return at if is_positive(lit) else "(not %s)" % at

    def atoms(self) -> list[str]:
        return list(self._texts)


# A clause is a frozenset of literal ids; the empty clause is falsity.
Clause = frozenset
EMPTY_CLAUSE: Clause = frozenset()


def clause_of_hypotheses(lits) -> Clause:
    """The clause refuted by a hypothesis set: complement every literal."""
    return frozenset(complement(l) for l in lits)


def hypotheses_of_clause(clause: Clause) -> frozenset:
    return frozenset(complement(l) for l in clause)


def clause_sort_key(clause: Clause):
    """Total order: cardinality first, then lexicographic on sorted ids.

    Any strict subset sorts strictly earlier, which is what minimization
    uses to break ties between equivalent clauses.
    """
    return (len(clause), tuple(sorted(clause)))


def compare_clauses(c: Clause, d: Clause) -> int:
    kc, kd = clause_sort_key(c), clause_sort_key(d)
    return -1 if kc < kd else (0 if kc == kd else 1)


def format_literal(lit: int, table: LiteralTable) -> str:
    return table.literal_text(lit)


def format_clause(clause: Clause, table: LiteralTable) -> str:
    """`false` when empty, the bare literal when unit, `(or ...)` otherwise."""
    if not clause:
        return "false"
    parts = [table.literal_text(l) for l in sorted(clause)]
    if len(parts) == 1:
        return parts[0]
    return "(or %s)" % " ".join(parts)


def format_hypotheses(clause: Clause, table: LiteralTable) -> str:
    """Render the complement of a clause as a conjunction (the hypothesis)."""
    lits = sorted(hypotheses_of_clause(clause))
    if not lits:
        return "true"
    parts = [table.literal_text(l) for l in lits]
    if len(parts) == 1:
        return parts[0]
    return "(and %s)" % " ".join(parts)


def parse_clause(text: str, table: LiteralTable) -> Clause:
    """Inverse of format_clause for the dump/stream syntax."""
    text = text.strip()
    if text == "false":
        return EMPTY_CLAUSE
    node = sexpr.parse_one(text)
    if isinstance(node, list) and node and node[0] == "or":
        return frozenset(table.literal_from_term(t) for t in node[1:])
    return frozenset([table.literal_from_term(node)])
