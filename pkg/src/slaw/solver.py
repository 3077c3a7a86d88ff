"""Goal-directed search for partial stable models.

Positive goals resolve against program clauses, default-negated goals run
the dual rules.  A coinductive hypothesis set (CHS) remembers every literal
proved on the current branch; a recursive call through an even number of
negations succeeds coinductively, while a positive loop fails.  Every
successful branch yields an :class:`Answer` with its justification tree.
"""

from __future__ import annotations

import logging
from collections.abc import Iterator
from dataclasses import dataclass, field

from .compiler import CompiledProgram, DualClause
from .core import (
    EMPTY, Compound, ConstraintState, Literal, Term, Var, add_disequality, apply,
    apply_literal, constraints_on, fresh_var, is_ground, rename, subsumes_args,
    unify, unify_args, variables,
)
from .core import _unify_into
from .justifier import JustificationNode, summarize

log = logging.getLogger(__name__)

__all__ = ["SolverOptions", "SearchIncomplete", "CHS", "Answer", "solve", "is_internal"]


class SearchIncomplete(RuntimeError):
    """A resource bound cut off part of the search; the answers seen so far may not be all."""


class _OutOfSteps(Exception):
    pass


@dataclass(frozen=True)
class SolverOptions:
    max_depth: int | None = 10_000
    max_answers: int | None = None
    max_steps: int | None = None  # goal calls before the whole search gives up


def is_internal(lit: Literal) -> bool:
    return lit.predicate.startswith("$") or lit.is_builtin


@dataclass(frozen=True)
class CHSEntry:
    literal: Literal
    status: str  # 'proved' or 'assumed'


class CHS:
    """Immutable set of literals taken as true on the current branch."""

    __slots__ = ("entries", "_by")

    def __init__(self, entries: tuple[CHSEntry, ...] = (), by=None):
        self.entries = entries
        self._by: dict = by if by is not None else {}

    def add(self, lit: Literal, status: str) -> CHS:
        entry = CHSEntry(lit, status)
        slot = (lit.key, lit.naf)
        if entry in self._by.get(slot, ()):
            return self
        by = dict(self._by)
        by[slot] = by.get(slot, ()) + (entry,)
        return CHS(self.entries + (entry,), by)

    def get(self, key, naf: bool) -> tuple[CHSEntry, ...]:
        return self._by.get((key, naf), ())

    def __len__(self) -> int:
        return len(self.entries)


@dataclass(frozen=True)
class Answer:
    query: tuple[Literal, ...]
    bindings: dict[str, Term] = field(hash=False)
    model: tuple[Literal, ...]
    full_model: tuple[Literal, ...]
    assumptions: tuple[Literal, ...]
    justification: JustificationNode
    constraints: dict[Var, tuple[Term, ...]] = field(default_factory=dict, hash=False)


@dataclass(frozen=True)
class _Frame:
    literal: Literal
    parent: _Frame | None
    depth: int


def _frames(frame: _Frame | None) -> Iterator[_Frame]:
    while frame is not None:
        yield frame
        frame = frame.parent


def _substitute_lit(lit: Literal, theta: dict[Var, Term]) -> Literal:
    if not lit.args:
        return lit
    return Literal(lit.predicate, tuple(apply(theta, a) for a in lit.args), lit.negated, lit.naf)


Result = tuple[ConstraintState, CHS, tuple[JustificationNode, ...]]


class _Search:
    def __init__(self, program: CompiledProgram, options: SolverOptions):
        self.program = program
        self.options = options
        self.truncated = False
        self.steps = 0

    # conjunctions and single goals

    def conj(self, goals, s, chs, frame) -> Iterator[Result]:
        if not goals:
            yield s, chs, ()
            return
        first, rest = goals[0], goals[1:]
        for s1, chs1, n1 in self.goal(first, s, chs, frame):
            if not rest:
                yield s1, chs1, n1
                continue
            for s2, chs2, n2 in self.conj(rest, s1, chs1, frame):
                yield s2, chs2, n1 + n2

    def goal(self, lit: Literal, s, chs: CHS, frame) -> Iterator[Result]:
        if lit.is_builtin:
            a, b = lit.args
            eq = (lit.predicate == "=") != lit.naf
            s1 = unify(a, b, s) if eq else add_disequality(a, b, s)
            if s1 is not None:
                yield s1, chs, ()
            return
        self.steps += 1
        if self.options.max_steps is not None and self.steps > self.options.max_steps:
            raise _OutOfSteps
        depth = frame.depth + 1 if frame else 1
        if self.options.max_depth is not None and depth > self.options.max_depth:
            self.truncated = True
            return
        for s1 in self._exclude_complements(lit, s, chs, frame):
            yield from self._checked(lit, s1, chs, frame, depth)

    def _checked(self, lit, s, chs, frame, depth) -> Iterator[Result]:
        for e in chs.get(lit.key, lit.naf):
            if e.status == "proved" and subsumes_args(e.literal.args, lit.args, s):
                yield s, chs, (JustificationNode(lit, "repeat"),)
                return
        verdict = self._loop(lit, s, frame)
        if verdict == "fail":
            return
        if verdict == "coinductive":
            yield s, chs.add(lit, "assumed"), (JustificationNode(lit, "assumption"),)
            return
        inner = _Frame(lit, frame, depth)
        if lit.naf:
            yield from self._negative(lit, s, chs, inner)
        else:
            yield from self._positive(lit, s, chs, inner)

    def _exclude_complements(self, lit, s, chs, frame) -> Iterator[ConstraintState]:
        target = apply_literal(s, lit)
        for f in _frames(frame):
            fl = f.literal
            if fl.naf != lit.naf and fl.key == lit.key and apply_literal(s, fl).args == target.args:
                return
        states = [s]
        for e in chs.get(lit.key, not lit.naf):
            if subsumes_args(e.literal.args, lit.args, s):
                return
            states = [s2 for s1 in states for s2 in _differ(lit.args, e.literal.args, s1)]
        yield from states

    def _loop(self, lit, s, frame) -> str | None:
        target = apply_literal(s, lit)
        through_naf = False
        for f in _frames(frame):
            fl = f.literal
            if fl.naf == lit.naf and fl.key == lit.key and apply_literal(s, fl) == target:
                return "coinductive" if lit.naf or through_naf else "fail"
            if fl.naf:
                through_naf = True
        return None

    def _positive(self, lit, s, chs, frame) -> Iterator[Result]:
        for clause in self.program.clauses_for(lit.key):
            c = rename(clause, {})
            s1 = unify_args(c.head.args, lit.args, s)
            if s1 is None:
                continue
            reason = "rule" if c.body else "fact"
            for s2, chs2, kids in self.conj(c.body, s1, chs, frame):
                yield s2, chs2.add(lit, "proved"), (JustificationNode(lit, reason, kids),)

    def _negative(self, lit, s, chs, frame) -> Iterator[Result]:
        dual = self.program.dual_for(lit.key)
        mapping: dict[Var, Var] = {}
        params = rename(dual.params, mapping)
        s1 = unify_args(params, lit.args, s)
        if s1 is None:
            return
        clauses = [DualClause(dc.source, rename(dc.forall_vars, mapping), rename(dc.alternatives, mapping))
                   for dc in dual.clauses]
        for s2, chs2, kids in self._dual_clauses(clauses, s1, chs, frame):
            yield s2, chs2.add(lit, "proved"), (JustificationNode(lit, "dual", kids),)

    def _dual_clauses(self, clauses, s, chs, frame) -> Iterator[Result]:
        if not clauses:
            yield s, chs, ()
            return
        dc, rest = clauses[0], clauses[1:]
        if dc.forall_vars:
            first = self._forall(dc.forall_vars, dc.alternatives, s, chs, frame)
        else:
            first = self._disj(dc.alternatives, s, chs, frame)
        for s1, chs1, n1 in first:
            for s2, chs2, n2 in self._dual_clauses(rest, s1, chs1, frame):
                yield s2, chs2, _merge(n1, n2, s2)

    def _disj(self, alternatives, s, chs, frame) -> Iterator[Result]:
        for alt in alternatives:
            yield from self.conj(alt, s, chs, frame)

    # universal quantification

    def _forall(self, vs, alternatives, s, chs, frame) -> Iterator[Result]:
        v, rest = vs[0], vs[1:]

        def run(value, s, chs):
            alts = tuple(tuple(_substitute_lit(g, {v: value}) for g in alt) for alt in alternatives)
            if rest:
                return self._forall(rest, alts, s, chs, frame)
            return self._disj(alts, s, chs, frame)

        x = fresh_var(v.name)
        for s1, chs1, kids1 in run(x, s, chs):
            if apply(s1, x) != x:
                continue
            excluded = constraints_on(x, s1)
            if any(not is_ground(c) for c in excluded) or _entangled(x, s1):
                continue
            for s2, chs2, kids2 in self._cases(run, excluded, s1, chs1):
                yield s2, chs2, _merge(kids1, kids2, s2)

    def _cases(self, run, values, s, chs) -> Iterator[Result]:
        if not values:
            yield s, chs, ()
            return
        for s1, chs1, n1 in run(values[0], s, chs):
            for s2, chs2, n2 in self._cases(run, values[1:], s1, chs1):
                yield s2, chs2, _merge(n1, n2, s2)

    # answer-level checks

    def denials_hold(self, s, chs) -> bool:
        # a denial is violated if its body can be proved consistently with the answer
        for d in self.program.denials:
            if any(True for _ in self.conj(rename(d.body, {}), s, chs, None)):
                return False
        return True


def _differ(xs, ys, s) -> Iterator[ConstraintState]:
    """States in which the argument tuples differ, as disjoint cases.

    ``(X, Y) \\= (a, b)`` becomes ``X \\= a`` or ``X = a, Y \\= b`` so that
    every constraint stays on a single variable where possible.
    """
    xs = tuple(apply(s, x) for x in xs)
    ys = tuple(apply(s, y) for y in ys)
    if not _unify_into(Compound("$args", xs), Compound("$args", ys), {}):
        yield s
        return
    for x, y in zip(xs, ys):
        s1 = add_disequality(x, y, s)
        if s1 is not None:
            yield s1
        s = unify(x, y, s)
        if s is None:
            return


def _entangled(x: Var, s: ConstraintState) -> bool:
    # a disequality mentioning x that is not a plain "x differs from t"
    for la, ra in s.disequalities:
        if la == x or ra == x:
            continue
        if x in set(variables((la, ra))):
            return True
    return False


def _merge(first, second, s) -> tuple[JustificationNode, ...]:
    seen = {apply_literal(s, n.literal) for n in first if n.reason == "repeat"}
    out = list(first)
    for n in second:
        if n.reason == "repeat":
            key = apply_literal(s, n.literal)
            if key in seen:
                continue
            seen.add(key)
        out.append(n)
    return tuple(out)


def _resolve(node: JustificationNode, s: ConstraintState) -> JustificationNode:
    lit = apply_literal(s, node.literal) if node.literal is not None else None
    return JustificationNode(lit, node.reason, tuple(_resolve(c, s) for c in node.children))


def _dedup(lits) -> tuple[Literal, ...]:
    return tuple(dict.fromkeys(lits))


def _make_answer(program, query, s, chs, nodes) -> Answer:
    root = _resolve(JustificationNode(None, "query", nodes), s)
    tree_vars = list(variables([n.literal for n in root.walk() if n.literal is not None]))
    qvars = [v for v in variables(query) if not v.name.startswith("_")]
    constraints = {}
    for v in dict.fromkeys(tree_vars + [apply(s, q) for q in qvars if isinstance(apply(s, q), Var)]):
        excluded = tuple(apply(s, c) for c in constraints_on(v, s))
        if excluded:
            constraints[v] = excluded
    root = JustificationNode(None, "query", root.children, constraints)
    full = _dedup(apply_literal(s, e.literal) for e in chs.entries if not is_internal(e.literal))
    assumptions = _dedup(apply_literal(s, e.literal) for e in chs.entries
                         if e.status == "assumed" and not is_internal(e.literal))
    model = summarize(root, program.templates)
    model = model + tuple(a for a in assumptions if a not in model)
    bindings = {v.name: apply(s, v) for v in qvars}
    return Answer(tuple(query), bindings, model, full, assumptions, root, constraints)


def solve(program: CompiledProgram, query: tuple[Literal, ...] | None = None,
          options: SolverOptions | None = None) -> Iterator[Answer]:
    """Answers to ``query`` (default: the program's own query), lazily and in search order.

    Raises :class:`SearchIncomplete` after the last answer if the depth bound
    pruned any branch.
    """
    options = options or SolverOptions()
    query = tuple(query if query is not None else program.query)
    search = _Search(program, options)
    count = 0
    try:
        for s, chs, nodes in search.conj(query, EMPTY, CHS(), None):
            for s2, chs2, _ in search.conj(program.checks, s, chs, None):
                if not search.denials_hold(s2, chs2):
                    continue
                yield _make_answer(program, query, s2, chs2, nodes)
                count += 1
                if options.max_answers is not None and count >= options.max_answers:
                    return
    except RecursionError:
        log.warning("search exceeded the interpreter stack")
        search.truncated = True
    except _OutOfSteps:
        raise SearchIncomplete(f"step limit reached after {count} answer(s)") from None
    if search.truncated:
        raise SearchIncomplete(f"depth limit reached after {count} answer(s)")
