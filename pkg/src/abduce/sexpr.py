"""Minimal s-expression reader and printer for SMT-LIB style text.

Nodes are plain Python values: a string for an atom, a list for a
parenthesized group. Canonical printing joins children with single
spaces, which is what the rest of the package relies on for atom
identity (two terms are the same atom iff they print the same).
"""

from __future__ import annotations


class ParseError(Exception):
    def __init__(self, message, line=None):
        if line is not None:
            message = "line %d: %s" % (line, message)
        super().__init__(message)
        self.line = line


def tokenize(text):
    """Yield (token, line) pairs. Comments run from ';' to end of line."""
    i, n, line = 0, len(text), 1
    while i < n:
        c = text[i]
        if c == "\n":
            line += 1
            i += 1
        elif c in " \t\r":
            i += 1
        elif c == ";":
            while i < n and text[i] != "\n":
                i += 1
        elif c in "()":
            yield c, line
            i += 1
        elif c == '"':
            j = i + 1
            while j < n:
                if text[j] == '"':
                    # SMT-LIB escapes a quote by doubling it
                    if j + 1 < n and text[j + 1] == '"':
                        j += 2
                        continue
                    break
                if text[j] == "\n":
                    line += 1
                j += 1
            if j >= n:
                raise ParseError("unterminated string", line)
            yield text[i : j + 1], line
            i = j + 1
        elif c == "|":
            j = text.find("|", i + 1)
            if j < 0:
                raise ParseError("unterminated quoted symbol", line)
            yield text[i : j + 1], line
            line += text.count("\n", i, j)
            i = j + 1
        else:
            j = i
            while j < n and text[j] not in ' \t\r\n();"|':
                j += 1
            yield text[i:j], line
            i = j


def parse_all(text):
    """Parse every toplevel s-expression in `text` into a list of nodes."""
    stack, top = [], []
    for tok, line in tokenize(text):
        if tok == "(":
            stack.append([])
        elif tok == ")":
            if not stack:
                raise ParseError("unbalanced ')'", line)
            done = stack.pop()
            (stack[-1] if stack else top).append(done)
        else:
            (stack[-1] if stack else top).append(tok)
    if stack:
        raise ParseError("unbalanced '(': %d group(s) left open" % len(stack))
    return top


def parse_one(text):
    nodes = parse_all(text)
    if len(nodes) != 1:
        raise ParseError("expected exactly one expression, got %d" % len(nodes))
    return nodes[0]


def to_text(node):
    """Canonical single-spaced rendering of a node."""
    if isinstance(node, str):
        return node
    return "(" + " ".join(to_text(x) for x in node) + ")"


class StreamReader:
    """Incremental reader that returns one complete s-expression at a time.

    Used on the wire: responses like `sat` arrive as a bare atom while
    `get-value` answers arrive as one (possibly multi-line) group.
    """

    def __init__(self, readline):
        self._readline = readline
        self._buf = ""

    def read_expr(self):
        """Block until a full expression is available; None at EOF."""
        while True:
            node, rest = self._try_parse(self._buf)
            if node is not None:
                self._buf = rest
                return node
            chunk = self._readline()
            if chunk == "":
                leftover = self._buf.strip()
                self._buf = ""
                if leftover:
                    raise ParseError("EOF inside expression: %r" % leftover[:80])
                return None
            self._buf += chunk

    @staticmethod
    def _try_parse(buf):
        """Parse one leading expression from buf; (None, buf) if incomplete."""
        depth, start = 0, None
        i, n = 0, len(buf)
        while i < n:
            c = buf[i]
            if c == ";":
                j = buf.find("\n", i)
                if j < 0:
                    return None, buf
                i = j + 1
                continue
            if c in " \t\r\n":
                i += 1
                continue
            if start is None:
                start = i
            if c == "(":
                depth += 1
            elif c == ")":
                depth -= 1
                if depth < 0:
                    raise ParseError("unbalanced ')' in stream")
                if depth == 0:
                    return parse_one(buf[start : i + 1]), buf[i + 1 :]
            elif c == '"':
                j = i + 1
                while j < n:
                    if buf[j] == '"':
                        if j + 1 < n and buf[j + 1] == '"':
                            j += 2
                            continue
                        break
                    j += 1
                if j >= n:
                    return None, buf
                i = j
            elif depth == 0:
                # bare atom: runs to the next delimiter
                j = i
                while j < n and buf[j] not in ' \t\r\n();"':
                    j += 1
                if j == n:
                    return None, buf  # maybe truncated, wait for more
                return buf[start:j], buf[j:]
            i += 1
        return None, buf
