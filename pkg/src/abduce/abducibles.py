"""The literal vocabulary the search may assume: generation and loading.

An abducible set is an ordered tuple of literal ids; the order is the
search order and every candidate-set restriction refers back to it.
Generated sets enumerate ground (dis)equalities over term pairs; the
term list is built by height, so the depth-d vocabulary is a prefix of
the depth-(d+1) one and orders stay comparable across depths.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from . import sexpr
from .core import AbducibleError, INT, LiteralTable, ProblemError, complement


@dataclass(frozen=True)
class AbducibleSet:
    literals: tuple
    origin: str

    def __len__(self):
        return len(self.literals)

    def __iter__(self):
        return iter(self.literals)

    def __contains__(self, lit):
        return lit in set(self.literals)

    def rank(self):
        return {lit: i for i, lit in enumerate(self.literals)}

    def atoms(self):
        seen, out = set(), []
        for l in self.literals:
            a = l // 2
            if a not in seen:
                seen.add(a)
                out.append(a)
        return out

    def complements(self):
        return frozenset(complement(l) for l in self.literals)


def literal_order_key(abducibles: AbducibleSet | None):
    """Total order on literal ids extending the abducible order.

    Literals in the set rank by position; complements of members sit just
    after their complement's position; everything else falls back to id
    order past the end.
    """
    if abducibles is None:
        return lambda lit: lit
    rank = abducibles.rank()
    n = 2 * len(rank) + 2

    def key(lit):
        r = rank.get(lit)
        if r is not None:
            return 2 * r
        r = rank.get(complement(lit))
        if r is not None:
            return 2 * r + 1
        return n + lit

    return key


def _terms_by_height(problem, depth):
    """Ground terms up to the given height, ordered by height then origin.

    Height 0 is the declared constants (declaration order) followed by
    the numerals appearing in the problem; height h+1 applies each
    declared function to argument tuples drawn from lower heights, with
    at least one argument of height h.
    """
    sig = problem.signature
    terms = []  # (node, sort, height)
    seen = set()

    def push(node, sort, height):
        text = sexpr.to_text(node)
        if text not in seen:
            seen.add(text)
            terms.append((node, sort, height))

    for name, sort in sig.constants():
        push(name, sort, 0)
    for num in problem.numerals():
        push(num, INT, 0)
    for h in range(1, depth + 1):
        prev = [t for t in terms if t[2] < h]
        for fname in sig.declaration_order:
            arg_sorts, result = sig.symbols[fname]
            if not arg_sorts:
                continue
            pools = []
            for s in arg_sorts:
                pools.append([t for t in prev if t[1] == s])
            for combo in product(*pools):
                if not combo or max(t[2] for t in combo) != h - 1:
                    continue
                node = [fname] + [t[0] for t in combo]
                push(node, result, h)
    return terms


def generate(problem, table: LiteralTable, depth: int, include_inequalities=False, session=None):
    """Equality (and optionally order) literals over generated term pairs.

    Every pair of distinct same-sort terms yields the equality with the
    lexicographically smaller side first, positive literal before the
    negative one; with `include_inequalities`, integer pairs also get
    both non-strict orderings. Literals that are not individually
    T-satisfiable are filtered out when a session is supplied.
    """
    if depth < 0:
        raise AbducibleError("generation depth must be nonnegative")
    terms = _terms_by_height(problem, depth)
    lits = []
    for j in range(1, len(terms)):
        tj, sj, _ = terms[j]
        for i in range(j):
            ti, si, _ = terms[i]
            if si != sj:
                continue
            a, b = sorted((sexpr.to_text(ti), sexpr.to_text(tj)))
            eq = table.atom_id("(= %s %s)" % (a, b))
            lits.append(2 * eq)
            lits.append(2 * eq + 1)
            if include_inequalities and si == INT:
                le = table.atom_id("(<= %s %s)" % (a, b))
                ge = table.atom_id("(<= %s %s)" % (b, a))
                for atom in (le, ge):
                    lits.append(2 * atom)
                    lits.append(2 * atom + 1)
    if session is not None:
        lits = [l for l in lits if _satisfiable_alone(session, l)]
    return AbducibleSet(tuple(dict.fromkeys(lits)), origin="generated(depth=%d)" % depth)


def _satisfiable_alone(session, lit) -> bool:
    session.push_literals([lit])
    res = session.check(want_model=False)
    session.pop()
    # unknown keeps the literal: it cannot be shown degenerate
    return res.status != "unsat"


def load_file(path: str, table: LiteralTable, problem=None, session=None) -> AbducibleSet:
    """One literal per line; '#' starts a comment; blank lines skipped.

    Each literal must parse, be well-sorted against the problem's
    signature when one is given, and be individually T-satisfiable when
    a session is given; offenders are reported with their line numbers.
    """
    try:
        with open(path, "r", encoding="utf-8") as fh:
            raw = fh.readlines()
    except OSError as e:
        raise AbducibleError("cannot read %s: %s" % (path, e)) from e
    lits, bad = [], []
    for lineno, line in enumerate(raw, start=1):
        text = line.split("#", 1)[0].strip()
        if not text:
            continue
        try:
            node = sexpr.parse_one(text)
        except sexpr.ParseError as e:
            raise AbducibleError("%s line %d: %s" % (path, lineno, e)) from e
        if problem is not None:
            try:
                sort = problem.signature.sort_of(node)
            except ProblemError as e:
                raise AbducibleError("%s line %d: %s" % (path, lineno, e)) from e
            if sort != "Bool":
                raise AbducibleError("%s line %d: literal is not boolean" % (path, lineno))
        lit = table.literal_from_term(node)
        if session is not None and not _satisfiable_alone(session, lit):
            bad.append(lineno)
            continue
        lits.append(lit)
    if bad:
        raise AbducibleError(
            "%s: unsatisfiable literal%s at line%s %s"
            % (path, "s" if len(bad) > 1 else "", "s" if len(bad) > 1 else "", ", ".join(map(str, bad)))
        )
    return AbducibleSet(tuple(dict.fromkeys(lits)), origin=path)
