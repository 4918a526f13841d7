"""A small SMT-LIB2 server for ground QF_UF / QF_LIA / QF_UFLIA problems.

Reads commands on stdin, answers on stdout, one process per session,
so it plugs into anything that can drive `z3 -in`. The pipeline per
check-sat: uninterpreted applications are replaced by fresh constants
with pairwise functional-consistency axioms (Ackermann reduction),
integer equalities split into two inequalities, the boolean skeleton
goes through Tseitin to a DPLL solver, and each full assignment is
checked against the theories: union-find for equalities over
uninterpreted sorts, exact Fourier-Motzkin elimination with GCD
tightening plus branch-and-bound for integer feasibility. Failed
assignments are blocked by a shrunken core and the loop continues.

Soundness contract: `unsat` is only reported when the boolean search
space is exhausted under verified blocking cores, and every core is
re-checked infeasible before use. Anything outside the fragment, or
past the branch-depth guard, answers `unknown`.
"""

from __future__ import annotations

import operator
import sys
from fractions import Fraction
from math import ceil, floor, gcd

from . import sexpr
from .core import BOOL, INT, ProblemError, Signature, is_numeral
from .sat import CnfBuilder, Solver, add_formula


class Unknown(Exception):
    """Raised where answering would require reasoning we do not have."""


MAX_MODEL_ROUNDS = 50000
MAX_BRANCH_DEPTH = 64


# ---------------------------------------------------------------- linear exprs

# a linear expression is (coeffs: dict[str, int], const: int)


def lin_const(c):
    return ({}, c)


def lin_var(name):
    return ({name: 1}, 0)


def lin_add(a, b):
    coeffs = dict(a[0])
    for v, c in b[0].items():
        coeffs[v] = coeffs.get(v, 0) + c
        if coeffs[v] == 0:
            del coeffs[v]
    return coeffs, a[1] + b[1]


def lin_neg(a):
    return {v: -c for v, c in a[0].items()}, -a[1]


def lin_sub(a, b):
    return lin_add(a, lin_neg(b))


def lin_scale(a, k):
    if k == 0:
        return {}, 0
    return {v: c * k for v, c in a[0].items()}, a[1] * k


def lin_eval(a, values):
    total = a[1]
    for v, c in a[0].items():
        total += c * values[v]
    return total


# ------------------------------------------------------- integer feasibility

# a constraint is (coeffs: dict[str, int], const: int) read as sum + const <= 0


def _tighten(coeffs, const):
    """Divide by the coefficient gcd, rounding the bound for integers."""
    if not coeffs:
        return coeffs, const
    g = 0
    for c in coeffs.values():
        g = gcd(g, abs(c))
    if g > 1:
        # sum(a_i x_i) <= -const  ==>  sum(a_i/g x_i) <= floor(-const/g)
        coeffs = {v: c // g for v, c in coeffs.items()}
        const = -((-const) // g)
    return coeffs, const


def _normalize(con):
    coeffs = {v: c for v, c in con[0].items() if c != 0}
    return _tighten(coeffs, con[1])


def _rational_sample(records):
    """Back-substitute through the elimination records to a sample point."""
    point = {}
    for var, cons in reversed(records):
        lo, hi = None, None
        for coeffs, const in cons:
            a = coeffs[var]
            rest = Fraction(const)
            for v, c in coeffs.items():
                if v != var:
                    # vars cancelled away during elimination have no record
                    # of their own and are unconstrained in the projection
                    rest += c * point.setdefault(v, Fraction(0))
            bound = Fraction(-rest, a)
            if a > 0:
                hi = bound if hi is None else min(hi, bound)
            else:
                lo = bound if lo is None else max(lo, bound)
        if lo is not None and hi is not None and lo > hi:
            raise AssertionError("back-substitution out of bounds")
        point[var] = _pick_in_range(lo, hi)
    return point


def _pick_in_range(lo, hi):
    """Prefer an integer near zero inside [lo, hi]."""
    if lo is None and hi is None:
        return Fraction(0)
    if lo is None:
        f = floor(hi)
        return Fraction(min(0, f))
    if hi is None:
        c = ceil(lo)
        return Fraction(max(0, c))
    c, f = ceil(lo), floor(hi)
    if c <= f:
        return Fraction(min(max(0, c), f))
    return (lo + hi) / 2


def _fm_solve(constraints):
    """Rational sample point satisfying the tightened constraints, or None."""
    active = []
    seen = set()
    for con in constraints:
        coeffs, const = _normalize(con)
        if not coeffs:
            if const > 0:
                return None
            continue
        key = (tuple(sorted(coeffs.items())), const)
        if key not in seen:
            seen.add(key)
            active.append((coeffs, const))
    records = []
    while active:
        counts = {}
        for coeffs, _ in active:
            for v in coeffs:
                counts[v] = counts.get(v, 0) + 1
        var = min(counts, key=lambda v: (counts[v], v))
        with_var = [c for c in active if var in c[0]]
        rest = [c for c in active if var not in c[0]]
        records.append((var, with_var))
        pos = [c for c in with_var if c[0][var] > 0]
        neg = [c for c in with_var if c[0][var] < 0]
        seen = {(tuple(sorted(c.items())), k) for c, k in rest}
        for pc, pk in pos:
            a = pc[var]
            for nc, nk in neg:
                b = -nc[var]
                comb = lin_add(lin_scale((pc, pk), b), lin_scale((nc, nk), a))
                coeffs = {v: c for v, c in comb[0].items() if v != var and c != 0}
                coeffs, const = _tighten(coeffs, comb[1])
                if not coeffs:
                    if const > 0:
                        return None
                    continue
                key = (tuple(sorted(coeffs.items())), const)
                if key not in seen:
                    seen.add(key)
                    rest.append((coeffs, const))
        active = rest
    return _rational_sample(records)


def solve_integer(constraints, depth=0):
    """Integral point for `constraints`, None if infeasible, Unknown past guard."""
    point = _fm_solve(constraints)
    if point is None:
        return None
    frac = None
    for v, val in point.items():
        if val.denominator != 1:
            frac = (v, val)
            break
    if frac is None:
        return {v: int(val) for v, val in point.items()}
    if depth >= MAX_BRANCH_DEPTH:
        raise Unknown("integer branch depth exceeded")
    v, val = frac
    lowc = ({v: 1}, -floor(val))  # v <= floor(val)
    highc = ({v: -1}, ceil(val))  # v >= ceil(val)
    got = solve_integer(constraints + [lowc], depth + 1)
    if got is not None:
        return got
    return solve_integer(constraints + [highc], depth + 1)


# ------------------------------------------------------------------ union-find


class UnionFind:
    def __init__(self):
        self.parent = {}

    def find(self, x):
        p = self.parent.setdefault(x, x)
        while p != x:
            self.parent[x] = p = self.parent.setdefault(p, p)
            x, p = p, self.parent[p]
        return x

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[ra] = rb


def _uf_consistent(eqs, diseqs):
    uf = UnionFind()
    for a, b in eqs:
        uf.union(a, b)
    for a, b in diseqs:
        if uf.find(a) == uf.find(b):
            return None
    return uf


# ------------------------------------------------------------------- converter


class Converter:
    """Turns the assertion stack into CNF over theory atoms."""

    def __init__(self, sig: Signature):
        self.sig = sig
        self.builder = CnfBuilder(first_free_var=1)
        self.atom_vars = {}  # canonical key -> var
        self.var_info = {}  # var -> ("bool", name) | ("ueq", sort, a, b) | ("le", key)
        self.le_payload = {}  # var -> (coeffs, const)
        self.apps = {}  # fname -> list of (arg_reprs, arg_sorts, result_repr, result_sort)
        self.app_proxy = {}  # canonical app text -> (repr, sort)
        self._proxy_n = 0

    # -- atoms

    def _atom(self, key, info):
        var = self.atom_vars.get(key)
        if var is None:
            var = self.builder.fresh()
            self.atom_vars[key] = var
            self.var_info[var] = info
        return "@a%d" % var

    def _bool_atom(self, name):
        return self._atom(("bool", name), ("bool", name))

    def _le_atom(self, lin):
        coeffs, const = _normalize(lin)
        if not coeffs:
            return "true" if const <= 0 else "false"
        key = ("le", tuple(sorted(coeffs.items())), const)
        ph = self._atom(key, ("le", key))
        var = self.atom_vars[key]
        self.le_payload[var] = (coeffs, const)
        return ph

    def _ueq_atom(self, sort, a, b):
        if a == b:
            return "true"
        if a > b:
            a, b = b, a
        return self._atom(("ueq", sort, a, b), ("ueq", sort, a, b))

    def _eq_skeleton(self, sort, r1, r2):
        """Skeleton formula asserting two flattened terms equal."""
        if sort == INT:
            d = lin_sub(r1, r2)
            a1, a2 = self._le_atom(d), self._le_atom(lin_neg(d))
            return ["and", a1, a2]
        if sort == BOOL:
            return ["=", r1, r2]
        return self._ueq_atom(sort, r1, r2)

    # -- terms

    def flatten(self, term):
        """Flattened representation by sort: Int -> linexpr, other -> name."""
        sort = self.sig.sort_of(term)
        if sort == INT:
            return self._lin(term), INT
        if sort == BOOL:
            raise Unknown("boolean term in first-order position: %s" % sexpr.to_text(term))
        return self._uterm(term), sort

    def _lin(self, term):
        if isinstance(term, str):
            if is_numeral(term):
                return lin_const(int(term))
            args, res = self.sig.symbols[term]
            if res != INT or args:
                raise ProblemError("expected integer constant: %s" % term)
            return lin_var(term)
        head = term[0]
        if head == "+":
            out = lin_const(0)
            for t in term[1:]:
                out = lin_add(out, self._lin(t))
            return out
        if head == "-":
            if len(term) == 2:
                return lin_neg(self._lin(term[1]))
            out = self._lin(term[1])
            for t in term[2:]:
                out = lin_sub(out, self._lin(t))
            return out
        if head == "*":
            out = lin_const(1)
            for t in term[1:]:
                nxt = self._lin(t)
                if not out[0]:
                    out = lin_scale(nxt, out[1])
                elif not nxt[0]:
                    out = lin_scale(out, nxt[1])
                else:
                    raise Unknown("nonlinear product: %s" % sexpr.to_text(term))
            return out
        if head == "ite":
            raise Unknown("ite below arithmetic: %s" % sexpr.to_text(term))
        if head in self.sig.symbols:
            repr_, sort = self._app(term)
            if sort != INT:
                raise ProblemError("non-integer application in arithmetic")
            return lin_var(repr_)
        raise Unknown("unsupported arithmetic term: %s" % sexpr.to_text(term))

    def _uterm(self, term):
        if isinstance(term, str):
            return term
        return self._app(term)[0]

    def _app(self, term):
        """Proxy constant for an uninterpreted application (registering it)."""
        text = sexpr.to_text(term)
        got = self.app_proxy.get(text)
        if got is not None:
            return got
        fname = term[0]
        arg_sorts, result_sort = self.sig.symbols[fname]
        arg_reprs = []
        for arg, asort in zip(term[1:], arg_sorts):
            if asort == BOOL:
                raise Unknown("boolean function argument: %s" % text)
            r, _ = self.flatten(arg)
            arg_reprs.append(r)
        self._proxy_n += 1
        if result_sort == BOOL:
            repr_ = self._atom(("papp", text), ("bool", text))
        else:
            repr_ = "@f%d" % self._proxy_n
        pair = (repr_, result_sort)
        self.app_proxy[text] = pair
        self.apps.setdefault(fname, []).append((arg_reprs, tuple(arg_sorts), repr_, result_sort))
        return pair

    # -- formulas

    def rewrite(self, term):
        """Boolean skeleton with placeholder atoms at the leaves."""
        if isinstance(term, str):
            if term in ("true", "false"):
                return term
            args, res = self.sig.symbols.get(term, ((), None))
            if res != BOOL or args:
                raise ProblemError("not a boolean constant: %s" % term)
            return self._bool_atom(term)
        head = term[0]
        if head in ("and", "or", "not", "=>", "xor"):
            return [head] + [self.rewrite(t) for t in term[1:]]
        if head == "ite":
            if self.sig.sort_of(term[2]) == BOOL:
                return ["ite"] + [self.rewrite(t) for t in term[1:]]
            raise Unknown("ite on first-order terms: %s" % sexpr.to_text(term))
        if head == "=":
            sort = self.sig.sort_of(term[1])
            if sort == BOOL:
                out = ["and"]
                for a, b in zip(term[1:], term[2:]):
                    out.append(["=", self.rewrite(a), self.rewrite(b)])
                return out if len(out) > 2 else out[1]
            out = ["and"]
            reprs = [self.flatten(t)[0] for t in term[1:]]
            for r1, r2 in zip(reprs, reprs[1:]):
                out.append(self._eq_skeleton(sort, r1, r2))
            return out if len(out) > 2 else out[1]
        if head == "distinct":
            out = ["and"]
            for i in range(1, len(term)):
                for j in range(i + 1, len(term)):
                    out.append(["not", self.rewrite(["=", term[i], term[j]])])
            return out if len(out) > 2 else out[1]
        if head in ("<=", "<", ">=", ">"):
            out = ["and"]
            for s, t in zip(term[1:], term[2:]):
                ls, lt = self._lin(s), self._lin(t)
                if head == "<=":
                    lin = lin_sub(ls, lt)
                elif head == "<":
                    lin = lin_add(lin_sub(ls, lt), lin_const(1))
                elif head == ">=":
                    lin = lin_sub(lt, ls)
                else:
                    lin = lin_add(lin_sub(lt, ls), lin_const(1))
                out.append(self._le_atom(lin))
            return out if len(out) > 2 else out[1]
        if head in self.sig.symbols:
            repr_, sort = self._app(term)
            if sort != BOOL:
                raise ProblemError("first-order term in formula position")
            return repr_
        raise Unknown("unsupported connective %r" % head)

    def assert_formula(self, term):
        add_formula(self.builder, self.rewrite(term), self._placeholder_var)

    @staticmethod
    def _placeholder_var(ph):
        if isinstance(ph, str) and ph.startswith("@a"):
            return int(ph[2:])
        raise ProblemError("unexpected atom placeholder %r" % (ph,))

    def add_consistency_axioms(self):
        """Pairwise Ackermann axioms for every uninterpreted function."""
        for fname, apps in self.apps.items():
            for i in range(len(apps)):
                for j in range(i + 1, len(apps)):
                    args_i, sorts_i, res_i, rsort = apps[i]
                    args_j, _, res_j, _ = apps[j]
                    ante = ["and"]
                    for r1, r2, asort in zip(args_i, args_j, sorts_i):
                        if asort == INT:
                            if r1 == r2:
                                continue
                            ante.append(self._eq_skeleton(INT, r1, r2))
                        else:
                            if r1 == r2:
                                continue
                            ante.append(self._ueq_atom(asort, r1, r2))
                    conseq = self._eq_skeleton(rsort, lin_var(res_i), lin_var(res_j)) \
                        if rsort == INT else self._eq_skeleton(rsort, res_i, res_j)
                    if len(ante) == 1:
                        axiom = conseq
                    else:
                        axiom = ["=>", ante if len(ante) > 2 else ante[1], conseq]
                    add_formula(self.builder, axiom, self._placeholder_var)


# --------------------------------------------------------------- theory check


def _theory_literals(conv: Converter, model):
    """Split a boolean model into per-theory constraint sets."""
    u_lits, int_lits = [], []
    for var, info in conv.var_info.items():
        val = model.get(var)
        if val is None:
            continue
        kind = info[0]
        if kind == "ueq":
            u_lits.append((var, val, info[1], info[2], info[3]))
        elif kind == "le":
            int_lits.append((var, val))
    return u_lits, int_lits


def _int_constraint(conv, var, val):
    coeffs, const = conv.le_payload[var]
    if val:
        return (dict(coeffs), const)
    neg = lin_neg((coeffs, const))
    return (neg[0], neg[1] + 1)


def _check_u(u_lits):
    """None if consistent; else a shrunken inconsistent sublist."""
    by_sort = {}
    for item in u_lits:
        by_sort.setdefault(item[2], []).append(item)
    for items in by_sort.values():
        def consistent(sub):
            eqs = [(a, b) for (_, val, _, a, b) in sub if val]
            dis = [(a, b) for (_, val, _, a, b) in sub if not val]
            return _uf_consistent(eqs, dis) is not None

        if consistent(items):
            continue
        core = list(items)
        i = 0
        while i < len(core):
            trial = core[:i] + core[i + 1 :]
            if not consistent(trial):
                core = trial
            else:
                i += 1
        return core
    return None


def _check_int(conv, int_lits):
    """(point, None) if feasible, (None, core) if not; may raise Unknown."""
    cons = [_int_constraint(conv, var, val) for var, val in int_lits]
    point = solve_integer(cons)
    if point is not None:
        return point, None
    core = list(int_lits)
    i = 0
    while i < len(core):
        trial = core[:i] + core[i + 1 :]
        try:
            feasible = solve_integer([_int_constraint(conv, v, b) for v, b in trial]) is not None
        except Unknown:
            feasible = True  # cannot confirm, keep the literal
        if not feasible:
            core = trial
        else:
            i += 1
    return None, core


class Model:
    """Concrete values extracted from one satisfiable check."""

    def __init__(self, conv: Converter, assignment, uf_by_sort, point):
        self.sig = conv.sig
        self.bool_values = {}
        for var, info in conv.var_info.items():
            if info[0] == "bool" and var in assignment:
                self.bool_values[info[1]] = assignment[var]
        self.int_values = {}
        if point:
            for v, val in point.items():
                self.int_values[v] = val
        self.u_values = {}
        self._class_of = {}
        self._fresh_class = 0
        for sort, uf in uf_by_sort.items():
            for term in list(uf.parent):
                rep = uf.find(term)
                key = (sort, rep)
                if key not in self._class_of:
                    self._class_of[key] = self._fresh_class
                    self._fresh_class += 1
                self.u_values[(sort, term)] = self._class_of[key]
        self.fun_values = {}
        for fname, apps in conv.apps.items():
            table = self.fun_values.setdefault(fname, {})
            for arg_reprs, arg_sorts, res, rsort in apps:
                vals = tuple(
                    self._repr_value(r, s) for r, s in zip(arg_reprs, arg_sorts)
                )
                if vals in table:
                    continue  # consistency axioms make duplicates agree
                if rsort == BOOL:
                    table[vals] = bool(assignment.get(int(res[2:]), False))
                elif rsort == INT:
                    table[vals] = self._repr_value(lin_var(res), INT)
                else:
                    table[vals] = self._repr_value(res, rsort)
        self._memo = {}

    def _repr_value(self, r, sort):
        if sort == INT:
            return lin_eval(r, _DefaultingInts(self.int_values))
        val = self.u_values.get((sort, r))
        if val is None:
            val = self._fresh_class
            self._fresh_class += 1
            self.u_values[(sort, r)] = val
        return val

    def _default(self, sort):
        if sort == INT:
            return 0
        if sort == BOOL:
            return False
        v = self._fresh_class
        self._fresh_class += 1
        return v

    def eval_term(self, term):
        text = sexpr.to_text(term)
        if text in self._memo:
            return self._memo[text]
        val = self._eval(term)
        self._memo[text] = val
        return val

    def _eval(self, term):
        sig = self.sig
        if isinstance(term, str):
            if term == "true":
                return True
            if term == "false":
                return False
            if is_numeral(term):
                return int(term)
            args, res = sig.symbols[term]
            if res == BOOL:
                return self.bool_values.setdefault(term, False)
            if res == INT:
                return int(self.int_values.setdefault(term, 0))
            key = (res, term)
            if key not in self.u_values:
                self.u_values[key] = self._fresh_class
                self._fresh_class += 1
            return self.u_values[key]
        head = term[0]
        if head == "not":
            return not self.eval_term(term[1])
        if head == "and":
            return all(self.eval_term(t) for t in term[1:])
        if head == "or":
            return any(self.eval_term(t) for t in term[1:])
        if head == "=>":
            vals = [self.eval_term(t) for t in term[1:]]
            out = vals[-1]
            for v in reversed(vals[:-1]):
                out = (not v) or out
            return out
        if head == "xor":
            out = False
            for t in term[1:]:
                out ^= bool(self.eval_term(t))
            return out
        if head == "ite":
            return self.eval_term(term[2] if self.eval_term(term[1]) else term[3])
        if head == "=":
            vals = [self.eval_term(t) for t in term[1:]]
            return all(a == b for a, b in zip(vals, vals[1:]))
        if head == "distinct":
            vals = [self.eval_term(t) for t in term[1:]]
            return len(set(vals)) == len(vals)
        if head in ("<=", "<", ">=", ">"):
            vals = [self.eval_term(t) for t in term[1:]]
            op = {"<=": operator.le, "<": operator.lt, ">=": operator.ge, ">": operator.gt}[head]
            return all(op(a, b) for a, b in zip(vals, vals[1:]))
        if head == "+":
            return sum(self.eval_term(t) for t in term[1:])
        if head == "-":
            vals = [self.eval_term(t) for t in term[1:]]
            if len(vals) == 1:
                return -vals[0]
            out = vals[0]
            for v in vals[1:]:
                out -= v
            return out
        if head == "*":
            out = 1
            for t in term[1:]:
                out *= self.eval_term(t)
            return out
        if head in sig.symbols:
            arg_sorts, rsort = sig.symbols[head]
            vals = tuple(self.eval_term(t) for t in term[1:])
            table = self.fun_values.setdefault(head, {})
            if vals not in table:
                table[vals] = self._default(rsort)
            return table[vals]
        raise ProblemError("cannot evaluate %s" % sexpr.to_text(term))


class _DefaultingInts(dict):
    def __init__(self, backing):
        super().__init__()
        self._backing = backing

    def __missing__(self, key):
        return int(self._backing.setdefault(key, 0))

    def __getitem__(self, key):
        if key in self._backing:
            return int(self._backing[key])
        return self.__missing__(key)


def format_value(val):
    if val is True:
        return "true"
    if val is False:
        return "false"
    if isinstance(val, int):
        return str(val) if val >= 0 else "(- %d)" % -val
    return str(val)


# -------------------------------------------------------------------- session


def check(sig: Signature, assertions):
    """One satisfiability check. Returns (answer, model-or-None)."""
    conv = Converter(sig)
    for a in assertions:
        conv.assert_formula(a)
    conv.add_consistency_axioms()
    solver = Solver(conv.builder.clauses)
    blocked = []
    for _ in range(MAX_MODEL_ROUNDS):
        model = solver.solve()
        if model is None:
            return "unsat", None
        u_lits, int_lits = _theory_literals(conv, model)
        u_core = _check_u(u_lits)
        if u_core is not None:
            solver.add_clause([-(var) if val else var for (var, val, _, _, _) in u_core])
            continue
        point, int_core = _check_int(conv, int_lits)
        if int_core is not None:
            solver.add_clause([-(var) if val else var for var, val in int_core])
            continue
        uf_by_sort = {}
        for var, val, sort, a, b in u_lits:
            uf = uf_by_sort.setdefault(sort, UnionFind())
            uf.find(a), uf.find(b)
            if val:
                uf.union(a, b)
        return "sat", Model(conv, model, uf_by_sort, point)
    raise Unknown("model enumeration guard tripped")


class Session:
    def __init__(self, out):
        self.out = out
        self.sig = Signature()
        self.frames = [[]]
        self.model = None

    def reply(self, text):
        self.out.write(text + "\n")
        self.out.flush()

    def handle(self, cmd) -> bool:
        """Dispatch one command; False to exit."""
        if not isinstance(cmd, list) or not cmd or not isinstance(cmd[0], str):
            self.reply('(error "expected a command")')
            return True
        head = cmd[0]
        try:
            if head in ("set-option", "set-info", "set-logic"):
                if head == "set-logic" and len(cmd) == 2 and isinstance(cmd[1], str):
                    self.sig.logic_tag = cmd[1]
            elif head == "declare-sort":
                if len(cmd) != 3 or cmd[2] != "0":
                    raise ProblemError("only (declare-sort S 0) is supported")
                self.sig.declare_sort(cmd[1])
            elif head == "declare-const":
                self.sig.declare_fun(cmd[1], (), cmd[2])
            elif head == "declare-fun":
                self.sig.declare_fun(cmd[1], tuple(cmd[2]), cmd[3])
            elif head == "assert":
                if len(cmd) != 2:
                    raise ProblemError("bad assert")
                if self.sig.sort_of(cmd[1]) != BOOL:
                    raise ProblemError("assertion is not boolean")
                self.frames[-1].append(cmd[1])
            elif head == "push":
                n = int(cmd[1]) if len(cmd) > 1 else 1
                for _ in range(n):
                    self.frames.append([])
            elif head == "pop":
                n = int(cmd[1]) if len(cmd) > 1 else 1
                if n >= len(self.frames):
                    raise ProblemError("pop past the bottom of the stack")
                for _ in range(n):
                    self.frames.pop()
            elif head == "check-sat":
                self.model = None
                try:
                    answer, model = check(self.sig, [a for f in self.frames for a in f])
                    self.model = model
                    self.reply(answer)
                except Unknown:
                    self.reply("unknown")
            elif head == "get-value":
                if self.model is None:
                    raise ProblemError("model is not available")
                if len(cmd) != 2 or not isinstance(cmd[1], list):
                    raise ProblemError("bad get-value")
                parts = []
                for t in cmd[1]:
                    val = self.model.eval_term(t)
                    parts.append("(%s %s)" % (sexpr.to_text(t), format_value(val)))
                self.reply("(%s)" % " ".join(parts))
            elif head == "echo":
                self.reply(cmd[1] if len(cmd) > 1 else "")
            elif head == "exit":
                return False
            elif head in ("get-model", "get-info", "reset-assertions", "reset"):
                self.reply('(error "unsupported command %s")' % head)
            else:
                self.reply('(error "unknown command %s")' % head)
        except (ProblemError, Unknown, KeyError, ValueError, IndexError) as e:
            self.reply('(error "%s")' % str(e).replace('"', "'"))
        return True


def main(argv=None):
    session = Session(sys.stdout)
    reader = sexpr.StreamReader(sys.stdin.readline)
    while True:
        try:
            cmd = reader.read_expr()
        except sexpr.ParseError as e:
            session.reply('(error "%s")' % str(e).replace('"', "'"))
            continue
        if cmd is None:
            break
        if not session.handle(cmd):
            break
    return 0


if __name__ == "__main__":
    sys.exit(main())
