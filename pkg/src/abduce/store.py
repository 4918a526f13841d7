"""Implicate storage as a literal trie.

A tree is either the BOT leaf, standing for the set containing the
empty clause, or a dict mapping edge literals to subtrees; a stored
clause is a root-to-BOT path. Every literal below an edge is strictly
greater than the edge literal in the store order, so equal prefixes
share a path. The empty dict holds no clauses at all, which is what
the simplification pass exploits: an edge to an empty dict contributes
nothing and is dropped.

Redundancy checks lean on one satisfiability oracle. Forward: a stored
clause entails a candidate C exactly when some path to BOT has every
edge literal entailing C, each edge costing one query under a single
scoped assertion of C's complements. Backward: asserting a new clause
and walking the tree while pushing edge complements finds, with one
check per visited node, every stored clause the new one entails.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .core import Clause, complement, format_clause, clause_sort_key
from .oracle import UNSAT, YES


class _Bot:
    def __repr__(self):
        return "BOT"


BOT = _Bot()


def clause_set(tree, prefix=frozenset()):
    """All clauses the tree stores, as literal frozensets."""
    if tree is BOT:
        return {Clause(prefix)}
    out = set()
    for lit, sub in tree.items():
        out |= clause_set(sub, prefix | {lit})
    return out


def _simp(tree):
    if tree is BOT:
        return tree, 0
    steps = 0
    out = {}
    for lit, sub in tree.items():
        sub, n = _simp(sub)
        steps += n
        if sub == {}:  # empty subtree: the edge stores nothing
            steps += 1
            continue
        out[lit] = sub
    return out, steps


def simp(tree):
    """Drop every edge leading to an empty subtree, at any depth."""
    return _simp(tree)[0]


def simp_steps(tree):
    """Like simp, also counting the individual edge removals."""
    return _simp(tree)


def insert(tree, clause: Clause, sort_key=None):
    """Add one clause, sharing prefixes; returns the new tree.

    When the clause is a sorted prefix of a stored one (or the other
    way round), the shorter clause wins and BOT absorbs the rest; the
    caller's subsumption checks make that case unreachable in normal
    operation.
    """
    lits = sorted(clause, key=sort_key) if sort_key else sorted(clause)

    def down(node, i):
        if node is BOT:
            return BOT
        if i == len(lits):
            return BOT
        out = dict(node)
        head = lits[i]
        out[head] = down(node.get(head, {}), i + 1)
        return out

    return down(tree, 0)


def forward_subsumed(tree, clause: Clause, session) -> bool:
    """Does some stored clause entail this one?

    The complements of the clause are asserted once; each candidate
    edge costs one query asking whether its literal alone contradicts
    them. Unknown answers fail the edge, so redundancy may be missed
    but nothing is wrongly rejected.
    """

    def walk(node):
        if node is BOT:
            return True
        for lit, sub in node.items():
            session.push_literals([lit])
            res = session.check(want_model=False)
            session.pop()
            if res.status == UNSAT and walk(sub):
                return True
        return False

    session.push_literals([complement(l) for l in clause])
    try:
        return walk(tree)
    finally:
        session.pop()


def remove_subsumed(tree, premise, session):
    """Drop every stored clause the premise entails.

    `premise` is a clause (asserted whole) or a plain iterable of
    literals (asserted as a conjunction). One satisfiability check per
    visited node: the premise plus the complements of the path so far.
    Unsatisfiable means the whole subtree there is entailed and goes;
    unknown keeps it. Returns the simplified tree and the removed
    clauses.
    """

    def walk(node, prefix):
        res = session.check(want_model=False)
        if res.status == UNSAT:
            return {}, sorted(clause_set(node, prefix), key=clause_sort_key)
        if node is BOT:
            return BOT, []
        out = {}
        removed = []
        for lit, sub in node.items():
            session.push_literals([complement(lit)])
            kept, gone = walk(sub, prefix | {lit})
            session.pop()
            out[lit] = kept
            removed += gone
        return out, removed

    if isinstance(premise, frozenset):
        session.push_clause(premise)
    else:
        session.push_literals(list(premise))
    try:
        pruned, removed = walk(tree, frozenset())
    finally:
        session.pop()
    return simp(pruned), removed


@dataclass
class StoreStats:
    accepted: int = 0
    rejected_tautology: int = 0
    rejected_subsumed: int = 0
    removed: int = 0


@dataclass
class ImplicateStore:
    """Minimized clause collection behind a problem-free oracle session.

    Adding goes tautology check, forward check, backward removal,
    insertion; the stored set stays free of clauses the oracle can
    prove redundant.
    """

    table: object
    session: object
    sort_key: object = None
    tree: object = field(default_factory=dict)
    stats: StoreStats = field(default_factory=StoreStats)

    def add_minimal(self, clause: Clause):
        """Returns (accepted, removed clauses)."""
        for l in clause:
            self.table.atom_text(l)  # raises on unregistered ids
        if self.session.is_tautology(clause) == YES:
            self.stats.rejected_tautology += 1
            return False, []
        if forward_subsumed(self.tree, clause, self.session):
            self.stats.rejected_subsumed += 1
            return False, []
        self.tree, removed = remove_subsumed(self.tree, clause, self.session)
        self.tree = insert(self.tree, clause, self.sort_key)
        self.stats.accepted += 1
        self.stats.removed += len(removed)
        return True, removed

    def clauses(self):
        return clause_set(self.tree)

    def dump_lines(self):
        out = []
        for c in sorted(self.clauses(), key=clause_sort_key):
            out.append(format_clause(c, self.table))
        return out

    def shape_lines(self):
        """Indented edge view of the trie, for debugging."""
        lines = []

        def walk(node, depth):
            if node is BOT:
                lines.append("  " * depth + "*")
                return
            for lit in sorted(node, key=self.sort_key):
                lines.append("  " * depth + self.table.literal_text(lit))
                walk(node[lit], depth + 1)

        walk(self.tree, 0)
        return lines
