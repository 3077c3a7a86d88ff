"""What holds in all or some answers of a query, and which assumptions each answer rests on."""

from __future__ import annotations

import json
from collections.abc import Iterable
from dataclasses import dataclass

from .compiler import CompiledProgram
from .core import Literal
from .solver import Answer, SearchIncomplete, SolverOptions, solve
from .templates import Namer, literal_raw

DEFAULT_LIMIT = 64


class NoModels(LookupError):
    """The query has no answers, so cautious and brave consequences are undefined."""


@dataclass(frozen=True)
class ModelSet:
    query: tuple[Literal, ...]
    answers: tuple[Answer, ...]
    truncated: bool = False
    incomplete: bool = False

    def __len__(self) -> int:
        return len(self.answers)

    def __bool__(self) -> bool:
        return bool(self.answers)


@dataclass(frozen=True)
class AssumptionGroup:
    assumptions: tuple[str, ...]
    answers: tuple[int, ...]

    @property
    def count(self) -> int:
        return len(self.answers)


def enumerate_models(program: CompiledProgram, query: Iterable[Literal] | None = None,
                     limit: int = DEFAULT_LIMIT, max_depth: int | None = 10_000) -> ModelSet:
    if limit < 1:
        raise ValueError("limit must be a positive integer")
    query = tuple(query if query is not None else program.query)
    answers: list[Answer] = []
    incomplete = False
    try:
        for a in solve(program, query, SolverOptions(max_depth=max_depth, max_answers=limit + 1)):
            answers.append(a)
    except SearchIncomplete:
        incomplete = True
    truncated = len(answers) > limit
    return ModelSet(query, tuple(answers[:limit]), truncated, incomplete)


enumerate = enumerate_models


def literal_key(lit: Literal, answer: Answer) -> str:
    """Text identity of a literal; constrained variables keep their constraints in the key."""
    return literal_raw(lit, Namer(answer.constraints))


def answer_keys(answer: Answer) -> frozenset[str]:
    return frozenset(literal_key(lit, answer) for lit in answer.full_model)


def _require(ms: ModelSet) -> None:
    if not ms.answers:
        raise NoModels("no models")


def cautious(ms: ModelSet) -> frozenset[str]:
    _require(ms)
    keys = [answer_keys(a) for a in ms.answers]
    return frozenset.intersection(*keys)


def brave(ms: ModelSet) -> frozenset[str]:
    _require(ms)
    return frozenset().union(*(answer_keys(a) for a in ms.answers))


def assumption_report(ms: ModelSet) -> tuple[AssumptionGroup, ...]:
    groups: dict[tuple[str, ...], list[int]] = {}
    for i, a in enumerate_answers(ms):
        key = tuple(sorted(literal_key(x, a) for x in a.assumptions))
        groups.setdefault(key, []).append(i)
    return tuple(AssumptionGroup(k, tuple(v)) for k, v in groups.items())


def enumerate_answers(ms: ModelSet):
    return ((i, a) for i, a in zip(range(1, len(ms.answers) + 1), ms.answers))


def report(ms: ModelSet) -> dict:
    """Machine-readable summary.  Field names are stable."""
    doc = {
        "query": ", ".join(map(str, ms.query)),
        "answers": len(ms.answers),
        "truncated": ms.truncated,
        "incomplete": ms.incomplete,
        "cautious": sorted(cautious(ms)) if ms else None,
        "brave": sorted(brave(ms)) if ms else None,
        "groups": [{"assumptions": list(g.assumptions), "count": g.count, "answers": list(g.answers)}
                   for g in assumption_report(ms)],
    }
    return doc


def report_json(ms: ModelSet) -> str:
    return json.dumps(report(ms), indent=2, sort_keys=False) + "\n"


def report_text(ms: ModelSet) -> str:
    lines = [f"?- {', '.join(map(str, ms.query))}."]
    if not ms:
        lines.append("no models")
        return "\n".join(lines) + "\n"
    more = " (truncated)" if ms.truncated else ""
    lines.append(f"{len(ms.answers)} answer(s){more}")
    lines.append("CAUTIOUS: { " + ", ".join(sorted(cautious(ms))) + " }")
    lines.append("BRAVE: { " + ", ".join(sorted(brave(ms))) + " }")
    for g in assumption_report(ms):
        label = ", ".join(g.assumptions) if g.assumptions else "(none)"
        lines.append(f"ASSUMING {label}: {g.count} answer(s) {list(g.answers)}")
    if ms.incomplete:
        lines.append("warning: search incomplete (depth limit)")
    return "\n".join(lines) + "\n"
