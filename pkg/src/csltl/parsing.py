"""Concrete syntax for formulas, tccp programs and specifications.

Formulas (loosest binding first)::

    f ::= f -> f | f '|' f | f & f | f U f | f W f
        | ~f | X f | F f | G f | E x. f
        | true | false | `atom` | ( f )

Binary operators associate to the right and ``E x.`` extends as far right
as possible.  Atoms are backtick-quoted and read by the active constraint
system.  Programs are lists of ``p(x, y) :- agent.`` and specifications are
lists of ``p(x, y) |= formula.``; ``#`` starts a comment everywhere.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .constraints import ConstraintSystem
from .formula import (
    FALSE,
    TRUE,
    And,
    Atom,
    Exists,
    Formula,
    Next,
    Not,
    Until,
    always,
    eventually,
    has_exists,
    implies,
    or_,
    weak_until,
)
from .tccp import (
    Call,
    Choice,
    Declaration,
    Hide,
    Interpretation,
    Now,
    Par,
    Program,
    Skip,
    SpecUsesExistsError,
    Tell,
)


class ParseError(Exception):
    def __init__(self, message: str, line: int = 0, col: int = 0):
        super().__init__(f"{line}:{col}: {message}" if line else message)
        self.line = line
        self.col = col


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    col: int


_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+|\#[^\n]*)
  | (?P<atom>`[^`]*`)
  | (?P<op>\|\||\|=|->|:-|[|&~().,+])
  | (?P<ident>[A-Za-z_][A-Za-z0-9_']*)
    """,
    re.VERBOSE,
)


def tokenize(text: str) -> list[Token]:
    out = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        if kind != "ws":
            out.append(Token(kind, m.group(), line, pos - line_start + 1))
        newlines = m.group().count("\n")
        if newlines:
            line += newlines
            line_start = m.start() + m.group().rindex("\n") + 1
        pos = m.end()
    out.append(Token("eof", "", line, pos - line_start + 1))
    return out


class _Parser:
    def __init__(self, text: str, cs: ConstraintSystem):
        self.toks = tokenize(text)
        self.i = 0
        self.cs = cs

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def error(self, message: str):
        t = self.tok
        found = t.text or "end of input"
        raise ParseError(f"{message}, found {found!r}", t.line, t.col)

    def at(self, text: str) -> bool:
        return self.tok.kind in ("op", "ident") and self.tok.text == text

    def accept(self, text: str) -> bool:
        if self.at(text):
            self.i += 1
            return True
        return False

    def expect(self, text: str) -> None:
        if not self.accept(text):
            self.error(f"expected {text!r}")

    def ident(self) -> str:
        if self.tok.kind != "ident":
            self.error("expected a name")
        self.i += 1
        return self.toks[self.i - 1].text

    def atom(self):
        if self.tok.kind != "atom":
            self.error("expected a backtick atom")
        self.i += 1
        return self.cs.parse_atom(self.toks[self.i - 1].text[1:-1])

    def end(self) -> None:
        if self.tok.kind != "eof":
            self.error("unexpected input")

    # formulas

    def formula(self) -> Formula:
        left = self.disjunction()
        if self.accept("->"):
            return implies(left, self.formula())
        return left

    def disjunction(self) -> Formula:
        left = self.conjunction()
        if self.accept("|"):
            return or_(left, self.disjunction())
        return left

    def conjunction(self) -> Formula:
        left = self.until()
        if self.accept("&"):
            return And(left, self.conjunction())
        return left

    def until(self) -> Formula:
        left = self.unary()
        if self.accept("U"):
            return Until(left, self.until())
        if self.accept("W"):
            return weak_until(left, self.until())
        return left

    def unary(self) -> Formula:
        if self.accept("~"):
            return Not(self.unary())
        if self.accept("X"):
            return Next(self.unary())
        if self.accept("F"):
            return eventually(self.unary())
        if self.accept("G"):
            return always(self.unary())
        if self.accept("E"):
            var = self.ident()
            self.expect(".")
            return Exists(var, self.formula())
        if self.accept("true"):
            return TRUE
        if self.accept("false"):
            return FALSE
        if self.tok.kind == "atom":
            return Atom(self.atom())
        if self.accept("("):
            f = self.formula()
            self.expect(")")
            return f
        self.error("expected a formula")

    # programs

    def head(self) -> tuple[str, tuple]:
        name = self.ident()
        self.expect("(")
        params = []
        if not self.at(")"):
            params.append(self.ident())
            while self.accept(","):
                params.append(self.ident())
        self.expect(")")
        return name, tuple(params)

    def agent(self):
        left = self.prim()
        if self.accept("||"):
            return Par(left, self.agent())
        return left

    def prim(self):
        if self.accept("skip"):
            return Skip()
        if self.accept("tell"):
            return Tell(self.atom())
        if self.accept("now"):
            c = self.atom()
            self.expect("then")
            then = self.prim()
            self.expect("else")
            return Now(c, then, self.prim())
        if self.accept("exists"):
            var = self.ident()
            return Hide(var, self.prim())
        if self.at("ask"):
            branches = []
            while True:
                self.expect("ask")
                c = self.atom()
                self.expect("->")
                branches.append((c, self.prim()))
                if not self.accept("+"):
                    return Choice(tuple(branches))
        if self.accept("("):
            a = self.agent()
            self.expect(")")
            return a
        if self.tok.kind == "ident":
            name, args = self.head()
            return Call(name, args)
        self.error("expected an agent")


def parse_formula(text: str, cs: ConstraintSystem) -> Formula:
    p = _Parser(text, cs)
    f = p.formula()
    p.end()
    return f


def parse_program(text: str, cs: ConstraintSystem) -> Program:
    p = _Parser(text, cs)
    decls = []
    while p.tok.kind != "eof":
        name, params = p.head()
        p.expect(":-")
        body = p.agent()
        p.expect(".")
        decls.append(Declaration(name, params, body))
    return Program.from_declarations(decls)


def parse_spec(text: str, cs: ConstraintSystem) -> Interpretation:
    p = _Parser(text, cs)
    spec = Interpretation()
    while p.tok.kind != "eof":
        name, params = p.head()
        p.expect("|=")
        f = p.formula()
        p.expect(".")
        if has_exists(f):
            raise SpecUsesExistsError(f"specification of {name} uses an existential")
        spec.define(name, params, f)
    return spec
