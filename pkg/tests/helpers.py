"""Shared helpers: running corpus queries and comparing trees with golden listings."""

from slaw import corpus
from slaw.compiler import compile_program
from slaw.justifier import render_text
from slaw.parser import parse_query
from slaw.solver import solve

# golden name -> (query, mode)
GOLDEN_TREES = {
    "st01_pos": ("obtain_place(st01)", "pos"),
    "st03_pos": ("obtain_place(st03)", "pos"),
    "st05_pos": ("obtain_place(st05)", "pos"),
    "st02_neg": ("not obtain_place(st02)", "neg"),
    "st04_neg": ("not obtain_place(st04)", "neg"),
    "st06_neg": ("not obtain_place(st06)", "neg"),
}

_program = None


def students():
    global _program
    if _program is None:
        _program = compile_program(corpus.students_program())
    return _program


def first_answer(query, program=None):
    program = program or students()
    return next(solve(program, parse_query(query)), None)


def tree_text(query, mode, detail="short", human=True, program=None):
    program = program or students()
    answer = first_answer(query, program)
    if answer is None:
        return None
    return render_text(answer.justification, program.templates, detail, mode, human)


def _norm(line):
    return " ".join(line.split())


def matches_golden(lines, golden):
    """Line-by-line equality up to whitespace; a golden line ending in '...' is a prefix."""
    if len(lines) != len(golden):
        return False
    for got, want in zip(map(_norm, lines), map(_norm, golden)):
        if want.endswith("..."):
            if not got.startswith(want[:-3]):
                return False
        elif got != want:
            return False
    return True
