"""Goal-directed answer-set reasoning for legal rule bases.

Typical use::

    from slaw import parse_file, compile_program, solve, render_text

    program = compile_program(parse_file("students.pl"))
    for answer in solve(program, parse_query("obtain_place(st01)")):
        print(render_text(answer.justification, program.templates, detail="short"))
"""

from .compiler import CompiledProgram, compile_program, dump_duals
from .core import Clause, Compound, Const, Literal, Var
from .justifier import JustificationNode, render_html, render_model, render_text
from .parser import ParseError, SourceProgram, parse_file, parse_program, parse_query
from .solver import Answer, SearchIncomplete, SolverOptions, solve

__version__ = "0.1.0"

__all__ = [
    "Answer", "Clause", "CompiledProgram", "Compound", "Const", "JustificationNode", "Literal",
    "ParseError", "SearchIncomplete", "SolverOptions", "SourceProgram", "Var", "compile_program",
    "dump_duals", "parse_file", "parse_program", "parse_query", "render_html", "render_model",
    "render_text", "solve",
]
