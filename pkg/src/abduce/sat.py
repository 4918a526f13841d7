"""Propositional engine: Tseitin translation and an iterative DPLL.

Literals here are DIMACS-style nonzero ints: variable v appears as +v
or -v. The table mapping atoms to variables lives with the caller;
conversion from the package's even/odd literal ids is two helpers away.
"""

from __future__ import annotations

from .core import ProblemError


def var_of_atom(atom_id: int) -> int:
    return atom_id + 1


def dimacs_of_literal(lit: int) -> int:
    """Package literal id (2a or 2a+1) to signed DIMACS int."""
    v = lit // 2 + 1
    return v if lit % 2 == 0 else -v


def literal_of_dimacs(d: int) -> int:
    a = abs(d) - 1
    return 2 * a + (0 if d > 0 else 1)


class CnfBuilder:
    """Accumulates clauses; hands out fresh variables past the atom range."""

    def __init__(self, first_free_var: int):
        self.clauses: list[list[int]] = []
        self.next_var = first_free_var

    def fresh(self) -> int:
        v = self.next_var
        self.next_var += 1
        return v

    def add(self, clause) -> None:
        self.clauses.append(list(clause))


def add_formula(builder: CnfBuilder, term, atom_var) -> None:
    """Assert `term` (a parsed boolean s-expression) into the builder.

    `atom_var` maps any non-connective subterm to its variable. Plain
    clause shapes avoid auxiliary variables so unit propagation over the
    input clauses stays syntactically visible.
    """
    lit = _as_literal(term, atom_var)
    if lit is not None:
        builder.add([lit])
        return
    if isinstance(term, list) and term and term[0] == "or":
        lits = [_as_literal(t, atom_var) for t in term[1:]]
        if all(l is not None for l in lits):
            builder.add(lits)
            return
    if isinstance(term, list) and term and term[0] == "and":
        for t in term[1:]:
            add_formula(builder, t, atom_var)
        return
    builder.add([_tseitin(builder, term, atom_var)])


def _as_literal(term, atom_var):
    neg = False
    while isinstance(term, list) and len(term) == 2 and term[0] == "not":
        neg = not neg
        term = term[1]
    if isinstance(term, list) and term and term[0] in ("and", "or", "=>", "ite", "xor", "="):
        return None
    if term in ("true", "false"):
        return None  # constants route through _tseitin
    v = atom_var(term)
    return -v if neg else v


def _tseitin(builder: CnfBuilder, term, atom_var) -> int:
    """Return a literal equisatisfiably naming `term`."""
    if term == "true":
        v = builder.fresh()
        builder.add([v])
        return v
    if term == "false":
        v = builder.fresh()
        builder.add([v])
        return -v
    if isinstance(term, str) or not term:
        return atom_var(term)
    head = term[0]
    if head == "not":
        if len(term) != 2:
            raise ProblemError("bad not-term")
        return -_tseitin(builder, term[1], atom_var)
    if head in ("and", "or"):
        args = [_tseitin(builder, t, atom_var) for t in term[1:]]
        if not args:
            raise ProblemError("empty %s" % head)
        if len(args) == 1:
            return args[0]
        out = builder.fresh()
        if head == "and":
            for a in args:
                builder.add([-out, a])
            builder.add([out] + [-a for a in args])
        else:
            for a in args:
                builder.add([out, -a])
            builder.add([-out] + args)
        return out
    if head == "=>":
        args = [_tseitin(builder, t, atom_var) for t in term[1:]]
        if len(args) < 2:
            raise ProblemError("bad =>")
        # (=> a b c) is a -> (b -> c)
        out = args[-1]
        for a in reversed(args[:-1]):
            v = builder.fresh()
            builder.add([-v, -a, out])
            builder.add([v, a])
            builder.add([v, -out])
            out = v
        return out
    if head in ("=", "xor"):
        args = [_tseitin(builder, t, atom_var) for t in term[1:]]
        if len(args) != 2:
            raise ProblemError("only binary %s on booleans" % head)
        a, b = args
        v = builder.fresh()
        if head == "=":  # iff
            builder.add([-v, -a, b])
            builder.add([-v, a, -b])
            builder.add([v, a, b])
            builder.add([v, -a, -b])
        else:
            builder.add([-v, a, b])
            builder.add([-v, -a, -b])
            builder.add([v, -a, b])
            builder.add([v, a, -b])
        return v
    if head == "ite":
        if len(term) != 4:
            raise ProblemError("bad ite")
        c, t, e = (_tseitin(builder, x, atom_var) for x in term[1:])
        v = builder.fresh()
        builder.add([-v, -c, t])
        builder.add([-v, c, e])
        builder.add([v, -c, -t])
        builder.add([v, c, -e])
        return v
    return atom_var(term)


class Solver:
    """Chronological-backtracking DPLL with unit propagation.

    Small by design; the problems this package feeds it are desk scale.
    solve() leaves no state behind, so the same instance is reusable with
    different assumption sets.
    """

    def __init__(self, clauses=(), num_vars: int = 0):
        self.clauses: list[list[int]] = []
        self.num_vars = num_vars
        for c in clauses:
            self.add_clause(c)

    def add_clause(self, clause) -> None:
        c = list(clause)
        for l in c:
            if abs(l) > self.num_vars:
                self.num_vars = abs(l)
        self.clauses.append(c)

    def solve(self, assumptions=()) -> dict[int, bool] | None:
        """Model as {var: bool} over occurring vars, or None if unsat."""
        clauses = self.clauses + [[l] for l in assumptions]
        assign: dict[int, bool] = {}
        trail: list[tuple[int, bool]] = []  # (var, was_decision)

        def value(lit):
            v = assign.get(abs(lit))
            if v is None:
                return None
            return v if lit > 0 else not v

        def propagate() -> bool:
            changed = True
            while changed:
                changed = False
                for c in clauses:
                    unassigned = None
                    n_unassigned = 0
                    sat = False
                    for l in c:
                        val = value(l)
                        if val is True:
                            sat = True
                            break
                        if val is None:
                            unassigned = l
                            n_unassigned += 1
                    if sat:
                        continue
                    if n_unassigned == 0:
                        return False
                    if n_unassigned == 1:
                        assign[abs(unassigned)] = unassigned > 0
                        trail.append((abs(unassigned), False))
                        changed = True
            return True

        # static branching order: most frequent variable first
        freq: dict[int, int] = {}
        for c in clauses:
            for l in c:
                freq[abs(l)] = freq.get(abs(l), 0) + 1
        order = sorted(freq, key=lambda v: -freq[v])

        def pick():
            for v in order:
                if v not in assign:
                    return v
            return None

        # decisions try True then False; encode "tried both" by re-pushing
        # the flipped value as a non-decision entry
        def backtrack() -> bool:
            while trail:
                v, was_decision = trail.pop()
                val = assign.pop(v)
                if was_decision:
                    assign[v] = not val
                    trail.append((v, False))
                    return True
            return False

        while True:
            if not propagate():
                if not backtrack():
                    return None
                continue
            v = pick()
            if v is None:
                return dict(assign)
            assign[v] = True
            trail.append((v, True))
