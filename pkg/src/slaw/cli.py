"""Command-line front end.

    slaw [-i] [-q QUERY] [--tree] [--human|--raw] [--short|--mid|--long]
         [--pos|--neg] [-sN] [--html PATH] [--dump-duals] [--code] FILE...

Exit status: 0 evaluation ran (also when there are no models), 2 bad
usage, 3 unreadable file, 4 parse error, 5 search cut off by the depth limit.
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import dataclass
from typing import TextIO

from .compiler import CompiledProgram, compile_program, dump_duals
from .core import Literal
from .justifier import render_html_document, render_model, render_text
from .parser import ParseError, SourceProgram, parse_file, parse_query, print_raw, render_code_human
from .solver import Answer, SearchIncomplete, SolverOptions, solve
from .templates import Namer, term_text

EXIT_OK, EXIT_USAGE, EXIT_IO, EXIT_PARSE, EXIT_INCOMPLETE = 0, 2, 3, 4, 5


@dataclass
class CliConfig:
    files: list[str]
    interactive: bool = False
    query: str | None = None
    tree: bool = False
    human: bool = False
    detail: str = "mid"
    mode: str = "pos"
    answers: int | None = None
    html_out: str | None = None
    dump_duals: bool = False
    code_human: bool = False
    max_depth: int = 10_000


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="slaw", description="Goal-directed reasoner for legal rule bases.")
    p.add_argument("files", nargs="+", metavar="FILE")
    p.add_argument("-i", dest="interactive", action="store_true", help="interactive query loop")
    p.add_argument("-q", dest="query", metavar="QUERY", help="query to run instead of the embedded one")
    p.add_argument("--tree", action="store_true", help="print the justification tree")
    style = p.add_mutually_exclusive_group()
    style.add_argument("--human", dest="human", action="store_true", help="natural-language output")
    style.add_argument("--raw", dest="human", action="store_false", help="syntactic output (default)")
    detail = p.add_mutually_exclusive_group()
    for name in ("short", "mid", "long"):
        detail.add_argument(f"--{name}", dest="detail", action="store_const", const=name)
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--pos", dest="mode", action="store_const", const="pos")
    mode.add_argument("--neg", dest="mode", action="store_const", const="neg")
    p.add_argument("-s", dest="answers", type=int, metavar="N", help="number of answers, 0 for all")
    p.add_argument("--html", dest="html_out", metavar="PATH", help="also write the trees as HTML")
    p.add_argument("--dump-duals", action="store_true", help="print the dual rules and exit")
    p.add_argument("--code", dest="code", action="store_true", help="print the program and exit")
    p.add_argument("--max-depth", type=int, default=10_000, help=argparse.SUPPRESS)
    return p


def parse_args(argv: list[str] | None) -> CliConfig:
    ns = build_parser().parse_args(argv)
    if ns.answers is not None and ns.answers < 0:
        build_parser().error("-s needs a non-negative count")
    return CliConfig(
        files=ns.files, interactive=ns.interactive, query=ns.query, tree=ns.tree,
        human=ns.human, detail=ns.detail or "mid", mode=ns.mode or "pos",
        answers=ns.answers, html_out=ns.html_out, dump_duals=ns.dump_duals,
        code_human=ns.code, max_depth=ns.max_depth,
    )


class CliError(Exception):
    def __init__(self, message: str, status: int):
        super().__init__(message)
        self.status = status


def load_program(files: list[str]) -> SourceProgram:
    """Parse and concatenate ``files``; the last embedded query wins."""
    clauses, templates, includes, query = [], [], [], None
    for f in files:
        try:
            sp = parse_file(f)
        except OSError as exc:
            raise CliError(f"cannot read {f}: {exc.strerror or exc}", EXIT_IO) from exc
        except ParseError as exc:
            raise CliError(str(exc), EXIT_PARSE) from exc
        clauses += sp.clauses
        templates += sp.templates
        includes += sp.includes
        query = sp.query if sp.query is not None else query
    return SourceProgram(tuple(clauses), tuple(templates), tuple(includes), query)


def _bindings_text(answer: Answer, human: bool) -> str | None:
    if not answer.bindings:
        return None
    namer = Namer(answer.constraints)
    return ", ".join(f"{k} = {term_text(v, namer, human)}" for k, v in answer.bindings.items())


def format_answer(n: int, answer: Answer, program: CompiledProgram, cfg: CliConfig) -> str:
    lines = [f"ANSWER {n}"]
    b = _bindings_text(answer, cfg.human)
    if b is not None:
        lines.append(f"BINDINGS: {b}")
    lines.append("MODEL: " + render_model(answer, program.templates, human=cfg.human))
    if cfg.tree:
        lines.append("JUSTIFICATION:")
        text = render_text(answer.justification, program.templates, cfg.detail, cfg.mode, cfg.human)
        if text:
            lines.append(text)
    return "\n".join(lines) + "\n"


def _query_line(query: tuple[Literal, ...]) -> str:
    return "?- " + ", ".join(map(str, query)) + "."


def run_query(program: CompiledProgram, query, cfg: CliConfig, out: TextIO,
              html_sections: list | None = None) -> int:
    out.write(_query_line(query) + "\n")
    limit = 1 if cfg.answers is None else (cfg.answers or None)
    n = 0
    try:
        for answer in solve(program, query, SolverOptions(cfg.max_depth, limit)):
            n += 1
            out.write(format_answer(n, answer, program, cfg))
            if html_sections is not None:
                html_sections.append((f"{_query_line(query)} answer {n}", answer.justification))
    except SearchIncomplete as exc:
        if not n:
            out.write("no models\n")
        print(f"slaw: warning: search incomplete: {exc}", file=sys.stderr)
        return EXIT_INCOMPLETE
    if not n:
        out.write("no models\n")
    return EXIT_OK


def _write_html(cfg: CliConfig, program: CompiledProgram, sections) -> None:
    if not cfg.html_out:
        return
    doc = render_html_document(sections, program.templates, cfg.detail, cfg.mode, cfg.human,
                               title="Justification")
    try:
        with open(cfg.html_out, "w", encoding="utf-8") as fh:
            fh.write(doc)
    except OSError as exc:
        raise CliError(f"cannot write {cfg.html_out}: {exc.strerror or exc}", EXIT_IO) from exc


def repl_loop(cfg: CliConfig, program: CompiledProgram, stdin: TextIO, out: TextIO) -> int:
    sections: list = []
    status = EXIT_OK
    while True:
        out.write("?- ")
        out.flush()
        line = stdin.readline()
        if not line:
            out.write("\n")
            break
        text = line.strip()
        if not text:
            continue
        if text in ("halt.", "halt", "?- halt."):
            break
        try:
            query = parse_query(text)
        except ParseError as exc:
            out.write(f"error: {exc}\n")
            continue
        answers = solve(program, query, SolverOptions(cfg.max_depth))
        n = 0
        try:
            for answer in answers:
                n += 1
                out.write(format_answer(n, answer, program, cfg))
                sections.append((f"{_query_line(query)} answer {n}", answer.justification))
                if cfg.answers is not None and cfg.answers and n >= cfg.answers:
                    break
                out.write("? ")
                out.flush()
                reply = stdin.readline()
                if reply.strip() != ";":
                    break
            else:
                out.write("no models\n" if not n else "no more models\n")
        except SearchIncomplete as exc:
            out.write(("no models\n" if not n else "") + f"warning: search incomplete: {exc}\n")
            status = EXIT_INCOMPLETE
    _write_html(cfg, program, sections)
    return status


def run(cfg: CliConfig, stdin: TextIO | None = None, out: TextIO | None = None) -> int:
    stdin = stdin or sys.stdin
    out = out or sys.stdout
    source = load_program(cfg.files)
    if cfg.code_human:
        out.write(render_code_human(source) if cfg.human else print_raw(source))
        return EXIT_OK
    program = compile_program(source)
    if cfg.dump_duals:
        out.write(dump_duals(program))
        return EXIT_OK
    if cfg.interactive:
        return repl_loop(cfg, program, stdin, out)
    if cfg.query is not None:
        try:
            query = parse_query(cfg.query)
        except ParseError as exc:
            raise CliError(str(exc), EXIT_PARSE) from exc
    elif source.query is not None:
        query = source.query
    else:
        raise CliError("no query: give -q or put ?- ... in the program", EXIT_USAGE)
    sections: list = []
    status = run_query(program, query, cfg, out, sections)
    _write_html(cfg, program, sections)
    return status


def main(argv: list[str] | None = None) -> int:
    try:
        cfg = parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return run(cfg)
    except CliError as exc:
        print(f"slaw: {exc}", file=sys.stderr)
        return exc.status
    except BrokenPipeError:
        # reader went away (e.g. piped into head); stop quietly
        os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
        return EXIT_OK


def report_main(argv: list[str] | None = None) -> int:
    """``slaw-report``: enumerate every answer and summarise what they share."""
    from . import epistemic

    p = _Parser(prog="slaw-report", description="Cautious/brave consequences and assumption groups.")
    p.add_argument("files", nargs="+", metavar="FILE")
    p.add_argument("-q", dest="query", metavar="QUERY")
    p.add_argument("--limit", type=int, default=epistemic.DEFAULT_LIMIT)
    p.add_argument("--json", action="store_true", help="machine-readable output")
    try:
        ns = p.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if ns.limit < 1:
        print("slaw-report: --limit must be positive", file=sys.stderr)
        return EXIT_USAGE
    try:
        source = load_program(ns.files)
        query = parse_query(ns.query) if ns.query else source.query
    except CliError as exc:
        print(f"slaw-report: {exc}", file=sys.stderr)
        return exc.status
    except ParseError as exc:
        print(f"slaw-report: {exc}", file=sys.stderr)
        return EXIT_PARSE
    if query is None:
        print("slaw-report: no query", file=sys.stderr)
        return EXIT_USAGE
    ms = epistemic.enumerate_models(compile_program(source), query, ns.limit)
    sys.stdout.write(epistemic.report_json(ms) if ns.json else epistemic.report_text(ms))
    return EXIT_INCOMPLETE if ms.incomplete else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
