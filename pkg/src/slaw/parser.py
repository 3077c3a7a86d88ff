"""Reader for the rule language: clauses, facts, queries, ``#include`` and ``#pred``.

The grammar is the Prolog-like subset the legal corpus uses::

    obtain_place(St) :- met_requirement(St), not exception(St).
    -evidence(st01, foreign_student).
    #pred obtain_place(St) :: '@(St) may obtain a school place'.
    ?- obtain_place(st01).
"""

from __future__ import annotations

import os
import re
from collections.abc import Callable
from dataclasses import dataclass, field

from .core import Clause, Compound, Const, Literal, Term, Var, fresh_var
from .templates import Namer, PredTemplate, TemplateSet

__all__ = [
    "ParseError", "SourceProgram", "Resolver", "FileResolver", "parse_program",
    "parse_file", "parse_query", "print_raw", "render_code_human",
]

Resolver = Callable[[str, str], tuple[str, str]]
"""``resolver(name, including_file) -> (resolved_name, text)``."""


class ParseError(Exception):
    def __init__(self, message: str, file: str = "<input>", line: int = 0,
                 column: int = 0, token: str | None = None):
        self.message, self.file, self.line, self.column, self.token = (
            message, file, line, column, token)
        where = f"{file}:{line}:{column}"
        near = f" (near {token!r})" if token is not None else ""
        super().__init__(f"{where}: {message}{near}")


@dataclass(frozen=True)
class SourceProgram:
    clauses: tuple[Clause, ...] = ()
    templates: tuple[PredTemplate, ...] = ()
    includes: tuple[str, ...] = ()
    query: tuple[Literal, ...] | None = None


class FileResolver:
    """Resolves ``#include`` names relative to the including file's directory."""

    def __init__(self, base: str | os.PathLike = "."):
        self.base = os.fspath(base)

    def __call__(self, name: str, origin: str) -> tuple[str, str]:
        root = os.path.dirname(origin) if os.path.isfile(origin) else self.base
        path = os.path.normpath(os.path.join(root, name))
        try:
            with open(path, encoding="utf-8") as fh:
                return path, fh.read()
        except OSError as exc:
            raise FileNotFoundError(f"cannot include {name!r}: {exc.strerror}") from exc


# -- tokens ------------------------------------------------------------------

_TOKEN = re.compile(r"""
    (?P<ws>\s+|%[^\n]*)
  | (?P<qatom>'(?:[^'\\]|\\.|'')*')
  | (?P<var>[A-Z_][A-Za-z0-9_]*)
  | (?P<atom>[a-z][A-Za-z0-9_]*)
  | (?P<int>[0-9]+)
  | (?P<punct>:-|\?-|::|\\=|[(),.#=-])
""", re.VERBOSE)

_ESCAPES = {"n": "\n", "t": "\t", "\\": "\\", "'": "'"}


@dataclass
class _Tok:
    kind: str
    value: str
    line: int
    col: int
    space_after: bool = False


def _unquote(raw: str) -> str:
    body = raw[1:-1]
    out, i = [], 0
    while i < len(body):
        ch = body[i]
        if ch == "\\" and i + 1 < len(body):
            out.append(_ESCAPES.get(body[i + 1], body[i + 1]))
            i += 2
        elif ch == "'" and body[i + 1:i + 2] == "'":
            out.append("'")
            i += 2
        else:
            out.append(ch)
            i += 1
    return "".join(out)


def _tokenize(text: str, file: str) -> list[_Tok]:
    toks: list[_Tok] = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError("unexpected character", file, line, pos - line_start + 1, text[pos])
        kind = m.lastgroup
        value = m.group()
        if kind == "ws":
            if toks:
                toks[-1].space_after = True
        else:
            if kind == "qatom":
                value = _unquote(value)
            toks.append(_Tok(kind, value, line, pos - line_start + 1))
        newlines = value.count("\n") if kind in ("ws", "qatom") else 0
        if newlines:
            line += newlines
            line_start = m.start() + m.group().rfind("\n") + 1
        pos = m.end()
    toks.append(_Tok("eof", "", line, pos - line_start + 1))
    return toks


# -- parser ------------------------------------------------------------------

class _Reader:
    def __init__(self, text: str, file: str):
        self.file = file
        self.toks = _tokenize(text, file)
        self.i = 0
        self.scope: dict[str, Var] = {}

    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def error(self, message: str, tok: _Tok | None = None) -> ParseError:
        tok = tok or self.tok
        return ParseError(message, self.file, tok.line, tok.col, tok.value or "end of input")

    def next(self) -> _Tok:
        tok = self.tok
        self.i += 1
        return tok

    def at(self, value: str, kind: str = "punct") -> bool:
        return self.tok.kind == kind and self.tok.value == value

    def expect(self, value: str) -> _Tok:
        if not self.at(value):
            raise self.error(f"expected {value!r}")
        return self.next()

    def term(self) -> Term:
        tok = self.tok
        if tok.kind == "var":
            self.next()
            if tok.value == "_":
                return fresh_var("_")
            if tok.value not in self.scope:
                self.scope[tok.value] = fresh_var(tok.value)
            return self.scope[tok.value]
        if tok.kind in ("atom", "qatom"):
            self.next()
            if self.at("(") and not tok.space_after:
                return Compound(tok.value, self.arguments())
            return Const(tok.value)
        if tok.kind == "int":
            self.next()
            return Const(tok.value)
        raise self.error("expected a term")

    def arguments(self) -> tuple[Term, ...]:
        self.expect("(")
        args = [self.term()]
        while self.at(","):
            self.next()
            args.append(self.term())
        self.expect(")")
        return tuple(args)

    def literal(self, allow_naf: bool) -> Literal:
        start = self.tok
        naf = False
        if allow_naf and start.kind == "atom" and start.value == "not" and (
                start.space_after or self.toks[self.i + 1].value == "("):
            nxt = self.toks[self.i + 1]
            if nxt.kind in ("atom", "qatom", "var") or nxt.value in ("-", "("):
                self.next()
                naf = True
        negated = False
        if self.at("-"):
            if self.tok.space_after:
                raise self.error("classical negation '-' must be attached to the atom")
            self.next()
            negated = True
        tok = self.tok
        if tok.kind in ("atom", "qatom"):
            self.next()
            args = self.arguments() if self.at("(") and not tok.space_after else ()
            lit = Literal(tok.value, args, negated, naf)
        elif naf and tok.value == "(" and not negated:
            self.next()
            inner = self.literal(False)
            self.expect(")")
            lit = Literal(inner.predicate, inner.args, inner.negated, True)
        elif not negated and tok.kind in ("var", "int"):
            left = self.term()
            lit = self._comparison(left, naf)
        else:
            raise self.error("expected a literal")
        if not lit.negated and self.tok.value in ("=", "\\=") and self.tok.kind == "punct" and not lit.is_builtin:
            if lit.naf:
                raise self.error("cannot negate a comparison")
            left = Compound(lit.predicate, lit.args) if lit.args else Const(lit.predicate)
            lit = self._comparison(left, False)
        return lit

    def _comparison(self, left: Term, naf: bool) -> Literal:
        if not (self.at("=") or self.at("\\=")):
            raise self.error("expected '=' or '\\=' after a term")
        op = self.next().value
        return Literal(op, (left, self.term()), naf=naf)

    def body(self) -> tuple[Literal, ...]:
        goals = [self.literal(True)]
        while self.at(","):
            self.next()
            goals.append(self.literal(True))
        return tuple(goals)


def parse_program(text: str, resolver: Resolver | None = None, filename: str = "<input>",
                  follow_includes: bool = True) -> SourceProgram:
    """Parse ``text``; included files are inlined depth-first and loaded once."""
    resolver = resolver or FileResolver()
    state = _Load(resolver, follow_includes)
    state.load(text, filename, ())
    return SourceProgram(tuple(state.clauses), tuple(state.templates),
                         tuple(state.includes), state.query)


def parse_file(path: str | os.PathLike, resolver: Resolver | None = None) -> SourceProgram:
    path = os.fspath(path)
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    return parse_program(text, resolver or FileResolver(os.path.dirname(path) or "."), path)


@dataclass
class _Load:
    resolver: Resolver
    follow_includes: bool
    clauses: list[Clause] = field(default_factory=list)
    templates: list[PredTemplate] = field(default_factory=list)
    includes: list[str] = field(default_factory=list)
    query: tuple[Literal, ...] | None = None
    loaded: set[str] = field(default_factory=set)

    def load(self, text: str, file: str, chain: tuple[str, ...]) -> None:
        self.loaded.add(file)
        r = _Reader(text, file)
        while r.tok.kind != "eof":
            r.scope = {}
            start = r.tok
            if r.at("#"):
                self.directive(r, chain + (file,))
            elif r.at("?-"):
                r.next()
                self.query = r.body()
                r.expect(".")
            elif r.at(":-"):
                raise r.error("headless rules (denials) are not supported")
            else:
                head = r.literal(False)
                if head.is_builtin:
                    raise r.error("a comparison cannot be a clause head", start)
                body: tuple[Literal, ...] = ()
                if r.at(":-"):
                    r.next()
                    body = r.body()
                r.expect(".")
                self.clauses.append(Clause(head, body, (file, start.line)))

    def directive(self, r: _Reader, chain: tuple[str, ...]) -> None:
        hash_tok = r.next()
        name = r.tok
        if name.kind != "atom" or hash_tok.space_after:
            raise r.error("expected a directive name after '#'")
        r.next()
        if name.value == "include":
            r.expect("(")
            target = r.tok
            if target.kind not in ("qatom", "atom"):
                raise r.error("expected a file name")
            r.next()
            r.expect(")")
            r.expect(".")
            if not self.follow_includes:
                self.includes.append(target.value)
                return
            try:
                resolved, text = self.resolver(target.value, chain[-1])
            except (OSError, KeyError) as exc:
                raise ParseError(f"unresolved include {target.value!r}: {exc}", r.file,
                                 target.line, target.col, target.value) from None
            if resolved in chain:
                raise ParseError(f"cyclic include of {target.value!r}", r.file,
                                 target.line, target.col, target.value)
            if resolved in self.loaded:
                return
            self.includes.append(resolved)
            self.load(text, resolved, chain)
        elif name.value == "pred":
            head = r.literal(True)
            r.expect("::")
            pat = r.tok
            if pat.kind != "qatom":
                raise r.error("expected a quoted pattern")
            r.next()
            r.expect(".")
            template = PredTemplate(head, pat.value, (r.file, name.line))
            names = {v.name for v in r.scope.values()}
            for ph in template.placeholders():
                if ph not in names:
                    raise ParseError(f"placeholder @({ph}) is not a variable of the head",
                                     r.file, pat.line, pat.col, pat.value)
            self.templates.append(template)
        else:
            raise r.error(f"unsupported directive #{name.value}", name)


def parse_query(text: str) -> tuple[Literal, ...]:
    """Parse ``?- g1, g2.`` (the ``?-`` and final period are optional)."""
    text = text.strip()
    r = _Reader(text, "<query>")
    if r.at("?-"):
        r.next()
    goals = r.body()
    if r.at("."):
        r.next()
    if r.tok.kind != "eof":
        raise r.error("unexpected text after query")
    return goals


# -- printing -----------------------------------------------------------------

def print_raw(program: SourceProgram) -> str:
    """Source listing that parses back to the same program (includes already inlined)."""
    lines = [str(t) for t in program.templates]
    lines += [_clause_text(c) for c in program.clauses]
    if program.query is not None:
        lines.append("?- " + ", ".join(map(str, program.query)) + ".")
    return "".join(line + "\n" for line in lines)


def _clause_text(c: Clause) -> str:
    if not c.body:
        return f"{c.head}."
    return f"{c.head} :-\n    " + ",\n    ".join(map(str, c.body)) + "."


def render_code_human(program: SourceProgram) -> str:
    """One natural-language sentence per clause, falling back to literal syntax."""
    templates = TemplateSet(program.templates)
    out = []
    for c in program.clauses:
        namer = _SourceNamer()
        head = templates.render(c.head, namer)
        if c.body:
            out.append(head + " if " + " and ".join(templates.render(b, namer) for b in c.body) + ".")
        else:
            out.append(head + ".")
    return "".join(line + "\n" for line in out)


class _SourceNamer(Namer):
    """Keeps the variable names written in the source."""

    def name(self, v: Var) -> str:
        return v.name
