"""Implicate search.

Both algorithms grow a hypothesis set M literal by literal. When the
problem together with M is unsatisfiable, the complement clause of M is
an implicate. The basic variant retries every surviving candidate at
every level and minimizes the union on the way up; the guided variant
walks candidates in vocabulary order, restricts each branch using the
order (smaller literals return only when their complement was part of a
countermodel) and prunes branches whose hypothesis is already true in a
model of the current node. Minimization removes tautologies and every
clause some other clause strictly subsumes modulo the theory.

Sessions mirror the recursion: entering a branch pushes one frame with
the chosen literal on both the main and the bare session, leaving pops
it, so the oracle's stack depth always equals |M|.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

from .core import clause_of_hypotheses, clause_sort_key, complement
from .oracle import AUX_BASE, NO, UNSAT, UNKNOWN, YES
from .sat import dimacs_of_literal, literal_of_dimacs


@dataclass
class SearchFlags:
    """Ways a run can be incomplete while staying sound."""

    oracle_unknown: bool = False
    budget: str | None = None  # "time" or "count" once a budget was hit

    def incomplete_reasons(self):
        out = []
        if self.budget:
            out.append("budget")
        if self.oracle_unknown:
            out.append("oracle-unknown")
        return out


@dataclass
class SearchStats:
    nodes: int = 0
    max_depth: int = 0
    emitted: int = 0
    accepted: int = 0
    first_emit_s: float | None = None
    total_s: float = 0.0
    flags: SearchFlags = field(default_factory=SearchFlags)


@dataclass(frozen=True)
class CompatibleLiterals:
    """Literal set every prime implicate must intersect; used to prune."""

    literals: frozenset
    source: str  # "model" or "full"


# ------------------------------------------------------------------ predicates


class Predicate:
    """Subset-closed test on hypothesis sets; failing prunes the subtree."""

    def holds(self, hypotheses, session) -> bool:
        raise NotImplementedError


class Always(Predicate):
    def holds(self, hypotheses, session):
        return True


class SizeLimit(Predicate):
    def __init__(self, limit: int):
        self.limit = limit

    def holds(self, hypotheses, session):
        return len(hypotheses) <= self.limit


class ImpliedBy(Predicate):
    """Keep only hypothesis sets every one of whose literals follows from
    a fixed premise (so results are implicants of the premise's region)."""

    def __init__(self, premise_lits):
        self.premise = tuple(premise_lits)

    def holds(self, hypotheses, session):
        for l in hypotheses:
            verdict = session.entails(self.premise, frozenset([l]))
            if verdict == NO:
                return False
            # unknown counts as holding: pruning here could lose results
        return True


class And(Predicate):
    def __init__(self, *parts):
        self.parts = parts

    def holds(self, hypotheses, session):
        return all(p.holds(hypotheses, session) for p in self.parts)


class Or(Predicate):
    def __init__(self, *parts):
        self.parts = parts

    def holds(self, hypotheses, session):
        return any(p.holds(hypotheses, session) for p in self.parts)


# ------------------------------------------------------------- building blocks


def prune_candidates(candidates, hypotheses, main_session=None, use_entailment=False, flags=None):
    """Drop candidates that repeat or contradict the hypothesis set.

    With `use_entailment`, additionally drop literals already entailed by
    the problem under the current hypotheses (one oracle query each; the
    main session must sit at the node's scope).
    """
    mset = set(hypotheses)
    out = [l for l in candidates if l not in mset and complement(l) not in mset]
    if use_entailment and main_session is not None:
        kept = []
        for l in out:
            main_session.push_literals([complement(l)])
            res = main_session.check(want_model=False)
            main_session.pop()
            if res.status == UNSAT:
                continue  # S with M forces l; hypothesizing it adds nothing
            if res.status == UNKNOWN and flags is not None:
                flags.oracle_unknown = True
            kept.append(l)
        out = kept
    return tuple(out)


def candidates_after(candidates, lit, compatible: frozenset):
    """Branch vocabulary under `lit`: all later literals, plus earlier ones
    whose complement the compatible set does not contain."""
    idx = candidates.index(lit)
    earlier = [l for l in candidates[:idx] if complement(l) not in compatible]
    return tuple(earlier) + tuple(candidates[idx + 1 :])


def model_compatible_literals(result, abducibles) -> CompatibleLiterals:
    """Compatible set from a sat answer.

    Determined abducible atoms contribute the literal the model makes
    true; undetermined ones conservatively keep both complements alive.
    Without a model every complement stays in, which disables pruning.
    """
    comps = abducibles.complements()
    if result is None or result.model_literals is None:
        return CompatibleLiterals(frozenset(comps), "full")
    lits = set(result.model_literals)
    determined_atoms = {l // 2 for l in lits}
    for l in abducibles:
        if l // 2 not in determined_atoms:
            lits.add(complement(l))
    return CompatibleLiterals(frozenset(lits), "model")


def unit_implicates(units, candidates, hypotheses) -> set:
    """Clauses contributed by unit consequences: for each candidate whose
    complement is a unit, the hypothesis clause extended by it."""
    base = clause_of_hypotheses(hypotheses)
    out = set()
    for l in candidates:
        if complement(l) in units:
            out.add(base | frozenset([complement(l)]))
    return out


def syntactic_units(session, hypotheses) -> frozenset:
    """Unit-propagation closure of the internal backend's clauses plus the
    hypotheses, restricted to problem literals."""
    clauses = getattr(session, "base_clauses", None)
    if clauses is None:
        return frozenset(hypotheses)
    assigned = {}
    for l in hypotheses:
        d = dimacs_of_literal(l)
        assigned[abs(d)] = d > 0
    changed = True
    while changed:
        changed = False
        for c in clauses:
            unknown = None
            n_unknown = 0
            sat = False
            for d in c:
                v = assigned.get(abs(d))
                if v is None:
                    unknown = d
                    n_unknown += 1
                elif v == (d > 0):
                    sat = True
                    break
            if sat or n_unknown != 1:
                continue
            assigned[abs(unknown)] = unknown > 0
            changed = True
    out = set(hypotheses)
    for var, val in assigned.items():
        if var < AUX_BASE:
            out.add(literal_of_dimacs(var if val else -var))
    return frozenset(out)


# ----------------------------------------------------------------- minimizing


def minimize_clauses(clauses, session, cache=None, flags=None) -> set:
    """Keep only the strongest clauses.

    Tautologies go first. Then a clause D is dropped whenever some other
    clause C entails it and either D does not entail C back or C sorts
    first; equivalent clauses thus keep exactly their best-sorted
    representative. All entailment goes through the bare session; an
    unknown verdict conservatively keeps the pair.
    """
    if cache is None:
        cache = {}

    def taut(c):
        key = ("taut", c)
        if key not in cache:
            verdict = session.is_tautology(c)
            if verdict == UNKNOWN and flags is not None:
                flags.oracle_unknown = True
            cache[key] = verdict
        return cache[key]

    def ent(c, d):
        key = (c, d)
        if key not in cache:
            verdict = session.entails_clause(c, d)
            if verdict == UNKNOWN and flags is not None:
                flags.oracle_unknown = True
            cache[key] = verdict
        return cache[key]

    pool = [c for c in set(clauses) if taut(c) != YES]
    keep = set()
    for d in pool:
        dominated = False
        for c in pool:
            if c is d or c == d:
                continue
            if ent(c, d) != YES:
                continue
            if ent(d, c) != YES or clause_sort_key(c) < clause_sort_key(d):
                dominated = True
                break
        if not dominated:
            keep.add(d)
    return keep


# -------------------------------------------------------------- eager variants


def basic_implicates(main, bare, abducibles, stats=None, flags=None, cache=None) -> set:
    """Unguided enumeration; minimizes bottom-up at every level."""
    stats = stats if stats is not None else SearchStats()
    flags = flags if flags is not None else stats.flags
    cache = cache if cache is not None else {}
    t0 = time.monotonic()

    def node(hypotheses, candidates):
        stats.nodes += 1
        stats.max_depth = max(stats.max_depth, len(hypotheses))
        assert len(hypotheses) <= len(abducibles.literals), "hypotheses repeated"
        if hypotheses:
            res = bare.check(want_model=False)
            if res.status == UNSAT:
                return set()
            if res.status == UNKNOWN:
                flags.oracle_unknown = True
        res = main.check(want_model=False)
        if res.status == UNSAT:
            stats.emitted += 1
            return {clause_of_hypotheses(hypotheses)}
        if res.status == UNKNOWN:
            flags.oracle_unknown = True
        survivors = prune_candidates(candidates, hypotheses)
        acc = set()
        for l in survivors:
            main.push_literals([l])
            bare.push_literals([l])
            acc |= node(hypotheses + (l,), survivors)
            bare.pop()
            main.pop()
        return minimize_clauses(acc, bare, cache=cache, flags=flags)

    out = node((), tuple(abducibles.literals))
    stats.total_s = time.monotonic() - t0
    return out


def guided_implicates(
    main,
    bare,
    abducibles,
    predicate: Predicate | None = None,
    model_pruning=True,
    unit_mode="hypotheses",
    fix_entailment=False,
    stats=None,
    flags=None,
    cache=None,
) -> set:
    """Order-guided enumeration with model pruning and unit extraction."""
    predicate = predicate or Always()
    stats = stats if stats is not None else SearchStats()
    flags = flags if flags is not None else stats.flags
    cache = cache if cache is not None else {}
    want_models = model_pruning and main.supports_models
    t0 = time.monotonic()

    def node(hypotheses, candidates):
        stats.nodes += 1
        stats.max_depth = max(stats.max_depth, len(hypotheses))
        assert len(hypotheses) <= len(abducibles.literals), "hypotheses repeated"
        if hypotheses:
            res = bare.check(want_model=False)
            if res.status == UNSAT:
                return set()
            if res.status == UNKNOWN:
                flags.oracle_unknown = True
        if not predicate.holds(hypotheses, bare):
            return set()
        res = main.check(want_model=want_models)
        if res.status == UNSAT:
            stats.emitted += 1
            return {clause_of_hypotheses(hypotheses)}
        if res.status == UNKNOWN:
            flags.oracle_unknown = True
        units = (
            syntactic_units(main, hypotheses)
            if unit_mode == "units"
            else frozenset(hypotheses)
        )
        survivors = prune_candidates(
            candidates, hypotheses, main, use_entailment=fix_entailment, flags=flags
        )
        compat = (
            model_compatible_literals(res, abducibles)
            if want_models
            else CompatibleLiterals(abducibles.complements(), "full")
        )
        acc = unit_implicates(units, survivors, hypotheses)
        stats.emitted += len(acc)
        for l in survivors:
            if complement(l) not in compat.literals:
                continue
            main.push_literals([l])
            bare.push_literals([l])
            acc |= node(hypotheses + (l,), candidates_after(survivors, l, compat.literals))
            bare.pop()
            main.pop()
        return minimize_clauses(acc, bare, cache=cache, flags=flags)

    out = node((), tuple(abducibles.literals))
    stats.total_s = time.monotonic() - t0
    return out


# ------------------------------------------------------------- streaming engine


@dataclass
class SearchConfig:
    algorithm: str = "imp"  # "imp" (guided) or "bp" (basic)
    predicate: Predicate = field(default_factory=Always)
    model_pruning: bool = True
    fix_entailment: bool = False
    unit_mode: str = "hypotheses"  # or "units"
    time_budget_s: float | None = None
    max_implicates: int | None = None


def run_search(main, bare, abducibles, config: SearchConfig, emit) -> SearchStats:
    """Depth-first search over an explicit stack, streaming implicates.

    `emit(clause)` is called for every raw implicate found (no in-engine
    minimization; feed a store for that) and returns whether the clause
    was accepted downstream, which is what the implicate budget counts.
    Budgets unwind cleanly: sessions are popped, partial results stand.
    """
    stats = SearchStats()
    flags = stats.flags
    guided = config.algorithm != "bp"
    want_models = guided and config.model_pruning and main.supports_models
    deadline = (
        time.monotonic() + config.time_budget_s if config.time_budget_s else None
    )
    t0 = time.monotonic()

    def over_budget():
        if flags.budget:
            return True
        if deadline is not None and time.monotonic() > deadline:
            flags.budget = "time"
            return True
        return False

    def deliver(clause):
        stats.emitted += 1
        if emit(clause):
            stats.accepted += 1
            if stats.first_emit_s is None:
                stats.first_emit_s = time.monotonic() - t0
            if (
                config.max_implicates is not None
                and stats.accepted >= config.max_implicates
            ):
                flags.budget = flags.budget or "count"

    # each frame: hypotheses, branch queue, next index; sessions carry the path
    stack = []

    def enter(hypotheses, candidates):
        """Evaluate a node; push a frame unless it is a leaf."""
        stats.nodes += 1
        stats.max_depth = max(stats.max_depth, len(hypotheses))
        if hypotheses:
            res = bare.check(want_model=False)
            if res.status == UNSAT:
                return None
            if res.status == UNKNOWN:
                flags.oracle_unknown = True
        if guided and not config.predicate.holds(hypotheses, bare):
            return None
        res = main.check(want_model=want_models)
        if res.status == UNSAT:
            deliver(clause_of_hypotheses(hypotheses))
            return None
        if res.status == UNKNOWN:
            flags.oracle_unknown = True
        survivors = prune_candidates(
            candidates,
            hypotheses,
            main,
            use_entailment=guided and config.fix_entailment,
            flags=flags,
        )
        if guided:
            units = (
                syntactic_units(main, hypotheses)
                if config.unit_mode == "units"
                else frozenset(hypotheses)
            )
            for c in unit_implicates(units, survivors, hypotheses):
                deliver(c)
            compat = (
                model_compatible_literals(res, abducibles)
                if want_models
                else CompatibleLiterals(abducibles.complements(), "full")
            )
            queue = [
                (l, candidates_after(survivors, l, compat.literals))
                for l in survivors
                if complement(l) in compat.literals
            ]
        else:
            queue = [(l, survivors) for l in survivors]
        return {"hypotheses": hypotheses, "queue": queue, "i": 0}

    frame = enter((), tuple(abducibles.literals))
    if frame is not None:
        stack.append(frame)
    while stack:
        top = stack[-1]
        if top["i"] >= len(top["queue"]) or over_budget():
            stack.pop()
            if stack:  # leaving a child scope entered below
                bare.pop()
                main.pop()
            continue
        lit, child_candidates = top["queue"][top["i"]]
        top["i"] += 1
        main.push_literals([lit])
        bare.push_literals([lit])
        child = enter(top["hypotheses"] + (lit,), child_candidates)
        if child is None:
            bare.pop()
            main.pop()
        else:
            stack.append(child)
    stats.total_s = time.monotonic() - t0
    return stats
