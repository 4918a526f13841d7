"""Load a quantifier-free SMT-LIB2 problem file.

Keeps both the parsed assertion terms (for the internal backend and the
abducible generator) and the verbatim declaration/assertion command
texts (replayed to an external backend unchanged).
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import sexpr
from .core import ProblemError, Signature, is_numeral

_IGNORED = {
    "set-info",
    "check-sat",
    "exit",
    "get-model",
    "get-value",
    "get-info",
    "echo",
    "set-option",
}


@dataclass
class Problem:
    logic_tag: str
    signature: Signature
    assertions: list = field(default_factory=list)  # parsed terms
    declaration_texts: list = field(default_factory=list)
    assertion_texts: list = field(default_factory=list)
    path: str | None = None

    def numerals(self) -> list[str]:
        """Distinct numeral tokens appearing in assertions, in first-seen order."""
        seen, out = set(), []

        def walk(node):
            if isinstance(node, str):
                if is_numeral(node) and node not in seen:
                    seen.add(node)
                    out.append(node)
                return
            for x in node:
                walk(x)

        for a in self.assertions:
            walk(a)
        return out

    def is_propositional(self) -> bool:
        """True when every declared symbol is a Bool constant."""
        return all(args == () and res == "Bool" for args, res in self.signature.symbols.values())


def parse_problem(text: str, path: str | None = None, logic_override: str | None = None) -> Problem:
    try:
        commands = sexpr.parse_all(text)
    except sexpr.ParseError as e:
        raise ProblemError("cannot parse %s: %s" % (path or "problem", e)) from e
    sig = Signature()
    prob = Problem(logic_tag="", signature=sig, path=path)
    for cmd in commands:
        if not isinstance(cmd, list) or not cmd or not isinstance(cmd[0], str):
            raise ProblemError("bad toplevel form %s" % sexpr.to_text(cmd))
        head = cmd[0]
        if head == "set-logic":
            if len(cmd) != 2 or not isinstance(cmd[1], str):
                raise ProblemError("bad set-logic")
            prob.logic_tag = cmd[1]
        elif head == "declare-sort":
            if len(cmd) != 3 or cmd[2] != "0":
                raise ProblemError("only 0-arity sorts supported: %s" % sexpr.to_text(cmd))
            sig.declare_sort(cmd[1])
            prob.declaration_texts.append(sexpr.to_text(cmd))
        elif head == "declare-const":
            if len(cmd) != 3 or not isinstance(cmd[2], str):
                raise ProblemError("bad declare-const %s" % sexpr.to_text(cmd))
            sig.declare_fun(cmd[1], (), cmd[2])
            prob.declaration_texts.append(sexpr.to_text(cmd))
        elif head == "declare-fun":
            if len(cmd) != 4 or not isinstance(cmd[2], list) or not isinstance(cmd[3], str):
                raise ProblemError("bad declare-fun %s" % sexpr.to_text(cmd))
            if any(not isinstance(s, str) for s in cmd[2]):
                raise ProblemError("parametric sorts not supported: %s" % sexpr.to_text(cmd))
            sig.declare_fun(cmd[1], tuple(cmd[2]), cmd[3])
            prob.declaration_texts.append(sexpr.to_text(cmd))
        elif head == "assert":
            if len(cmd) != 2:
                raise ProblemError("bad assert")
            if sig.sort_of(cmd[1]) != "Bool":
                raise ProblemError("assertion is not boolean: %s" % sexpr.to_text(cmd[1]))
            prob.assertions.append(cmd[1])
            prob.assertion_texts.append(sexpr.to_text(cmd[1]))
        elif head in _IGNORED:
            continue
        else:
            raise ProblemError("unsupported command %r" % head)
    if logic_override:
        prob.logic_tag = logic_override
    if not prob.logic_tag:
        prob.logic_tag = "ALL"
    return prob


def load_problem(path: str, logic_override: str | None = None) -> Problem:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as e:
        raise ProblemError("cannot read %s: %s" % (path, e)) from e
    return parse_problem(text, path=path, logic_override=logic_override)
