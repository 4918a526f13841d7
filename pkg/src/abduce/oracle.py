"""Satisfiability oracle sessions.

A session wraps one incremental solver with a stack of scoped
assertion frames. Two kinds exist: an external SMT-LIB2 process
(anything that behaves like `z3 -in`) and an internal propositional
backend for problems whose atoms are all boolean constants. The
engine keeps two sessions per search: a main one holding the problem
and a bare one holding only the declarations, used for entailment,
tautology and hypothesis-consistency queries.

Sessions are single-threaded and never shared between searches.
Wire protocol for the external backend, per query frame:
`(push 1)`, one `(assert ...)` per literal, `(check-sat)`, optionally
`(get-value (...))` over the registered model atoms, `(pop 1)`.
"""

from __future__ import annotations

import os
import select
import shlex
import subprocess
import sys
import time
from dataclasses import dataclass, field

from . import sexpr
from .core import LiteralTable, OracleError, complement, is_positive
from .sat import Solver, CnfBuilder, add_formula, dimacs_of_literal, var_of_atom

SAT = "sat"
UNSAT = "unsat"
UNKNOWN = "unknown"

YES = "yes"
NO = "no"

# internal Tseitin auxiliaries live far above any atom id ever registered
AUX_BASE = 1 << 24


@dataclass
class SatResult:
    status: str
    model_literals: frozenset | None = None  # determined abducible literals only


@dataclass
class SessionStats:
    checks: int = 0
    sat_answers: int = 0
    unsat_answers: int = 0
    unknown_answers: int = 0
    pushes: int = 0
    respawns: int = 0

    def record(self, status):
        self.checks += 1
        if status == SAT:
            self.sat_answers += 1
        elif status == UNSAT:
            self.unsat_answers += 1
        else:
            self.unknown_answers += 1


class _SessionBase:
    """Scoped check/entail operations shared by both backends."""

    table: LiteralTable
    stats: SessionStats
    supports_models: bool

    def push_literals(self, lits):
        raise NotImplementedError

    def push_clause(self, clause):
        raise NotImplementedError

    def pop(self):
        raise NotImplementedError

    def check(self, want_model=True) -> SatResult:
        raise NotImplementedError

    def close(self):
        pass

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()
        return False

    def entails(self, premise_lits, clause) -> str:
        """Does the conjunction of `premise_lits` entail `clause` in T?

        Decided S-free: premise plus the complement of every clause
        literal is checked for consistency. Call this on a bare session.
        """
        scoped = list(premise_lits) + [complement(l) for l in clause]
        self.push_literals(scoped)
        res = self.check(want_model=False)
        self.pop()
        if res.status == UNSAT:
            return YES
        if res.status == SAT:
            return NO
        return UNKNOWN

    def entails_clause(self, premise_clause, clause) -> str:
        """Does a clausal premise (read as a disjunction) entail `clause`?"""
        if not premise_clause:
            return YES  # the empty clause entails everything
        self.push_clause(premise_clause)
        self.push_literals([complement(l) for l in clause])
        res = self.check(want_model=False)
        self.pop()
        self.pop()
        if res.status == UNSAT:
            return YES
        if res.status == SAT:
            return NO
        return UNKNOWN

    def is_tautology(self, clause) -> str:
        return self.entails((), clause)


class InternalSession(_SessionBase):
    """Propositional backend: the problem's CNF plus scoped frames."""

    supports_models = True

    def __init__(self, table: LiteralTable, base_formulas=(), model_atoms=()):
        self.table = table
        self.stats = SessionStats()
        self.model_atoms = list(model_atoms)
        builder = CnfBuilder(first_free_var=AUX_BASE)
        for f in base_formulas:
            add_formula(builder, f, lambda t: var_of_atom(table.atom_id(t)))
        self.base_clauses = builder.clauses
        self._aux_next = builder.next_var
        self.frames = []

    def set_model_atoms(self, atoms):
        self.model_atoms = list(atoms)

    def push_literals(self, lits):
        self.stats.pushes += 1
        self.frames.append([[dimacs_of_literal(l)] for l in lits])

    def push_clause(self, clause):
        self.stats.pushes += 1
        if not clause:
            self.frames.append([[]])  # the empty clause: immediately unsat
            return
        self.frames.append([[dimacs_of_literal(l) for l in clause]])

    def pop(self):
        self.frames.pop()

    def check(self, want_model=True) -> SatResult:
        solver = Solver()
        for c in self.base_clauses:
            solver.add_clause(c)
        for frame in self.frames:
            for c in frame:
                solver.add_clause(c)
        model = solver.solve()
        if model is None:
            self.stats.record(UNSAT)
            return SatResult(UNSAT)
        self.stats.record(SAT)
        lits = None
        if want_model:
            found = []
            for atom in self.model_atoms:
                val = model.get(var_of_atom(atom))
                if val is not None:
                    found.append(2 * atom if val else 2 * atom + 1)
            lits = frozenset(found)
        return SatResult(SAT, lits)


class _Timeout(Exception):
    pass


class ExternalSession(_SessionBase):
    """SMT-LIB2 subprocess client.

    Declarations and base assertions are replayed on spawn, scoped
    frames afterwards, which also makes a timed-out query recoverable:
    the process is killed, respawned, and the stack replayed; the query
    itself reports unknown.
    """

    def __init__(
        self,
        command,
        table: LiteralTable,
        logic_tag="ALL",
        declaration_texts=(),
        assertion_texts=(),
        model_atoms=(),
        query_timeout=5.0,
        produce_models=True,
    ):
        self.command = list(command)
        self.table = table
        self.logic_tag = logic_tag
        self.declaration_texts = list(declaration_texts)
        self.assertion_texts = list(assertion_texts)
        self.model_atoms = list(model_atoms)
        self.query_timeout = query_timeout
        self.produce_models = produce_models
        self.supports_models = produce_models
        self.stats = SessionStats()
        self.frames = []  # ("lits", [lit ids]) or ("clause", clause)
        self._trace = bool(os.environ.get("ABDUCE_TRACE"))
        self.proc = None
        self._spawn()

    def set_model_atoms(self, atoms):
        self.model_atoms = list(atoms)

    # -- process plumbing

    def _spawn(self):
        try:
            self.proc = subprocess.Popen(
                self.command,
                stdin=subprocess.PIPE,
                stdout=subprocess.PIPE,
                stderr=subprocess.DEVNULL,
                universal_newlines=True,
            )
        except OSError as e:
            raise OracleError("cannot start backend %r: %s" % (" ".join(self.command), e)) from e
        self._reader = sexpr.StreamReader(self._readline)
        self._deadline = None
        if self.produce_models:
            self._send("(set-option :produce-models true)")
        if self.logic_tag:
            self._send("(set-logic %s)" % self.logic_tag)
        for d in self.declaration_texts:
            self._send(d)
        for a in self.assertion_texts:
            self._send("(assert %s)" % a)
        for frame in self.frames:
            self._send_frame(frame)

    def _send_frame(self, frame):
        kind, payload = frame
        self._send("(push 1)")
        if kind == "lits":
            for l in payload:
                self._send("(assert %s)" % self.table.literal_text(l))
        else:
            self._send("(assert %s)" % self._clause_text(payload))

    def _clause_text(self, clause):
        if not clause:
            return "false"
        parts = [self.table.literal_text(l) for l in sorted(clause)]
        if len(parts) == 1:
            return parts[0]
        return "(or %s)" % " ".join(parts)

    def _send(self, line):
        if self._trace:
            sys.stderr.write("smt> %s\n" % line)
        try:
            self.proc.stdin.write(line + "\n")
            self.proc.stdin.flush()
        except (BrokenPipeError, OSError) as e:
            raise OracleError(
                "backend died (exit %s) while writing %r" % (self.proc.poll(), line)
            ) from e

    def _readline(self):
        if self._deadline is not None:
            remaining = self._deadline - time.monotonic()
            if remaining <= 0:
                raise _Timeout()
            ready, _, _ = select.select([self.proc.stdout], [], [], remaining)
            if not ready:
                raise _Timeout()
        line = self.proc.stdout.readline()
        if line == "":
            raise OracleError("backend closed the pipe (exit %s)" % self.proc.poll())
        if self._trace:
            sys.stderr.write("smt< %s" % line)
        return line

    def _read_expr(self):
        try:
            node = self._reader.read_expr()
        except sexpr.ParseError as e:
            raise OracleError("unreadable backend response: %s" % e) from e
        if node is None:
            raise OracleError("backend closed the pipe (exit %s)" % self.proc.poll())
        if isinstance(node, list) and node and node[0] == "error":
            raise OracleError("backend error: %s" % sexpr.to_text(node))
        return node

    def _recover(self):
        """Kill and respawn after a timed-out query, replaying the stack."""
        self.stats.respawns += 1
        try:
            self.proc.kill()
            self.proc.wait(timeout=5)
        except Exception:
            pass
        self._spawn()

    # -- session operations

    def push_literals(self, lits):
        self.stats.pushes += 1
        frame = ("lits", list(lits))
        self.frames.append(frame)
        self._send_frame(frame)

    def push_clause(self, clause):
        self.stats.pushes += 1
        frame = ("clause", clause)
        self.frames.append(frame)
        self._send_frame(frame)

    def pop(self):
        self.frames.pop()
        self._send("(pop 1)")

    def check(self, want_model=True) -> SatResult:
        self._send("(check-sat)")
        self._deadline = (
            time.monotonic() + self.query_timeout if self.query_timeout else None
        )
        try:
            node = self._read_expr()
        except _Timeout:
            self._recover()
            self.stats.record(UNKNOWN)
            return SatResult(UNKNOWN)
        finally:
            self._deadline = None
        if node == SAT:
            self.stats.record(SAT)
            lits = None
            if want_model and self.model_atoms and self.produce_models:
                lits = self._fetch_model()
            return SatResult(SAT, lits)
        if node == UNSAT:
            self.stats.record(UNSAT)
            return SatResult(UNSAT)
        if node == UNKNOWN:
            self.stats.record(UNKNOWN)
            return SatResult(UNKNOWN)
        raise OracleError("unexpected check-sat answer %r" % sexpr.to_text(node))

    def _fetch_model(self):
        atoms = self.model_atoms
        self._send("(get-value (%s))" % " ".join(self.table.atom_text(2 * a) for a in atoms))
        self._deadline = (
            time.monotonic() + self.query_timeout if self.query_timeout else None
        )
        try:
            node = self._read_expr()
        except _Timeout:
            self._recover()
            return None
        finally:
            self._deadline = None
        if not isinstance(node, list):
            raise OracleError("unexpected get-value answer %r" % sexpr.to_text(node))
        found = []
        # answers are positional; backends may reprint terms differently
        for atom, pair in zip(atoms, node):
            if not isinstance(pair, list) or len(pair) != 2:
                continue
            val = pair[1]
            if val == "true":
                found.append(2 * atom)
            elif val == "false":
                found.append(2 * atom + 1)
            # anything else: left undetermined on purpose
        return frozenset(found)

    def close(self):
        if self.proc is None:
            return
        try:
            self.proc.stdin.write("(exit)\n")
            self.proc.stdin.flush()
        except Exception:
            pass
        try:
            self.proc.wait(timeout=2)
        except Exception:
            self.proc.kill()
        self.proc = None


@dataclass
class BackendConfig:
    kind: str  # "internal" or "external"
    command: list = field(default_factory=list)
    query_timeout: float = 5.0
    produce_models: bool = True


def resolve_backend(spec: str | None) -> BackendConfig:
    """Map a --backend value (or the ABDUCE_BACKEND variable) to a config."""
    spec = spec or os.environ.get("ABDUCE_BACKEND") or "tinysmt"
    if spec == "internal":
        return BackendConfig(kind="internal")
    if spec == "tinysmt":
        return BackendConfig(kind="external", command=[sys.executable, "-m", "abduce.tinysmt"])
    return BackendConfig(kind="external", command=shlex.split(spec))


def open_session(problem, table, config: BackendConfig, *, bare=False, model_atoms=()):
    """Session over a problem: its assertions (main) or none (bare)."""
    if config.kind == "internal":
        if not problem.is_propositional():
            raise OracleError(
                "the internal backend handles propositional problems only; "
                "pick an SMT backend with --backend"
            )
        return InternalSession(
            table,
            base_formulas=() if bare else problem.assertions,
            model_atoms=model_atoms,
        )
    return ExternalSession(
        config.command,
        table,
        logic_tag=problem.logic_tag,
        declaration_texts=problem.declaration_texts,
        assertion_texts=() if bare else problem.assertion_texts,
        model_atoms=model_atoms,
        query_timeout=config.query_timeout,
        produce_models=config.produce_models,
    )
