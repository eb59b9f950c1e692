"""Text formats for vectors and functional trees.

Vectors: one per line, whitespace separated ``index:p/q`` tokens with strictly
increasing indices; ``#`` starts a comment line.

Trees: ``L(i,+)``, ``A(n; child, child)``, ``S(child, child)`` and ``E`` for
the empty functional. ``format_tree(parse_tree(s)) == s`` for canonical text.
"""

from __future__ import annotations

import re
from fractions import Fraction
from pathlib import Path

from .trees import EMPTY, Avg, Leaf, Sch, Tree
from .vectors import FinVec, format_rat


class ParseError(ValueError):
    def __init__(self, msg: str, line: int | None = None):
        super().__init__(f"line {line}: {msg}" if line is not None else msg)
        self.line = line


_TOKEN = re.compile(r"^(\d+):([+-]?\d+)(?:/(\d+))?$")


def format_vector(x: FinVec) -> str:
    return " ".join(f"{i}:{format_rat(c)}" for i, c in x.entries)


def parse_vector(text: str, line: int | None = None) -> FinVec:
    entries = []
    last = 0
    for tok in text.split():
        m = _TOKEN.match(tok)
        if not m:
            raise ParseError(f"malformed token {tok!r} (expected index:p/q)", line)
        i = int(m.group(1))
        den = int(m.group(3)) if m.group(3) else 1
        if i < 1:
            raise ParseError(f"index {i} is not positive", line)
        if den == 0:
            raise ParseError(f"zero denominator in {tok!r}", line)
        if i <= last:
            raise ParseError(f"index {i} does not increase past {last}", line)
        last = i
        entries.append((i, Fraction(int(m.group(2)), den)))
    return FinVec(entries)


def parse_vectors(text: str) -> list[FinVec]:
    out = []
    for n, raw in enumerate(text.splitlines(), start=1):
        s = raw.strip()
        if not s or s.startswith("#"):
            continue
        out.append(parse_vector(s, line=n))
    return out


def read_vectors(path: str | Path) -> list[FinVec]:
    return parse_vectors(Path(path).read_text())


def format_vectors(xs) -> str:
    return "".join(format_vector(x) + "\n" for x in xs)


def format_tree(f: Tree) -> str:
    if isinstance(f, Leaf):
        return f"L({f.index},{'+' if f.sign > 0 else '-'})"
    if isinstance(f, Avg):
        return f"A({f.size}; " + ", ".join(format_tree(c) for c in f.children) + ")"
    if isinstance(f, Sch):
        return "S(" + ", ".join(format_tree(c) for c in f.children) + ")"
    return "E"


class _TreeParser:
    def __init__(self, s: str):
        self.s = s
        self.i = 0

    def error(self, msg):
        raise ParseError(f"{msg} at offset {self.i} in {self.s!r}")

    def skip(self):
        while self.i < len(self.s) and self.s[self.i].isspace():
            self.i += 1

    def expect(self, ch):
        self.skip()
        if not self.s.startswith(ch, self.i):
            self.error(f"expected {ch!r}")
        self.i += len(ch)

    def peek(self):
        self.skip()
        return self.s[self.i] if self.i < len(self.s) else ""

    def integer(self):
        self.skip()
        j = self.i
        while self.i < len(self.s) and self.s[self.i].isdigit():
            self.i += 1
        if j == self.i:
            self.error("expected an integer")
        return int(self.s[j:self.i])

    def children(self):
        kids = [self.tree()]
        while self.peek() == ",":
            self.i += 1
            kids.append(self.tree())
        self.expect(")")
        return tuple(kids)

    def tree(self) -> Tree:
        c = self.peek()
        if c == "L":
            self.i += 1
            self.expect("(")
            idx = self.integer()
            self.expect(",")
            sgn = self.peek()
            if sgn not in "+-" or not sgn:
                self.error("expected sign")
            self.i += 1
            self.expect(")")
            return Leaf(idx, 1 if sgn == "+" else -1)
        if c == "A":
            self.i += 1
            self.expect("(")
            n = self.integer()
            self.expect(";")
            return Avg(n, self.children())
        if c == "S":
            self.i += 1
            self.expect("(")
            return Sch(self.children())
        if c == "E":
            self.i += 1
            return EMPTY
        self.error("expected L, A, S or E")


def parse_tree(text: str) -> Tree:
    p = _TreeParser(text)
    f = p.tree()
    p.skip()
    if p.i != len(p.s):
        p.error("trailing characters")
    return f
