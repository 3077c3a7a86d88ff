"""Program compilation: clause index, dual rules, denials and odd-loop checks.

The dual of a predicate ``q`` says when ``not q(P1..Pn)`` holds: for every
clause of ``q`` one of its body goals must fail.  Head arguments that are
not first-occurrence variables become explicit ``Pi = t`` goals, and
variables that occur only in the body are universally quantified over the
whole disjunction of a dual clause.
"""

from __future__ import annotations

from collections import deque
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field, replace

from .core import Clause, Literal, Term, Var, fresh_var, rename, variables
from .parser import SourceProgram
from .templates import Namer, TemplateSet, literal_raw, term_text

Key = tuple[str, int, bool]


@dataclass(frozen=True)
class DualClause:
    """Negation of one source clause.

    Holds when, for every value of ``forall_vars``, one of ``alternatives``
    succeeds.  No alternatives means the clause can never be refuted.
    """

    source: Clause
    forall_vars: tuple[Var, ...]
    alternatives: tuple[tuple[Literal, ...], ...]


@dataclass(frozen=True)
class Dual:
    key: Key
    params: tuple[Var, ...]
    clauses: tuple[DualClause, ...]


@dataclass(frozen=True)
class Denial:
    """``:- body``.  An answer whose support matches the body is rejected."""

    body: tuple[Literal, ...]

    def __str__(self) -> str:
        return ":- " + ", ".join(map(str, self.body)) + "."


@dataclass(frozen=True)
class CompiledProgram:
    index: Mapping[Key, tuple[Clause, ...]]
    duals: Mapping[Key, Dual] = field(hash=False)
    denials: tuple[Denial, ...] = ()
    checks: tuple[Literal, ...] = ()
    templates: TemplateSet = field(default_factory=TemplateSet, hash=False, compare=False)
    source: SourceProgram | None = field(default=None, hash=False, compare=False)

    def clauses_for(self, key: Key) -> tuple[Clause, ...]:
        return self.index.get(key, ())

    def dual_for(self, key: Key) -> Dual:
        dual = self.duals.get(key)
        if dual is None:
            # undefined predicate: its negation always holds
            dual = Dual(key, tuple(fresh_var(f"P{i}") for i in range(key[1])), ())
        return dual

    @property
    def query(self) -> tuple[Literal, ...]:
        return self.source.query if self.source and self.source.query else ()


def negate_goal(goal: Literal) -> Literal:
    if goal.is_builtin:
        flipped = "\\=" if goal.predicate == "=" else "="
        return replace(goal, predicate=flipped)
    return goal.complement()


def compute_dual(key: Key, clauses: Iterable[Clause]) -> Dual:
    params = tuple(fresh_var(f"P{i}") for i in range(key[1]))
    out = []
    for clause in clauses:
        mapping: dict[Var, Var] = {}
        equalities: list[tuple[Var, Term]] = []
        for p, t in zip(params, clause.head.args):
            if isinstance(t, Var) and t not in mapping:
                mapping[t] = p
            else:
                equalities.append((p, t))
        goals = [Literal("=", (p, rename(t, mapping))) for p, t in equalities]
        goals += [rename(b, mapping) for b in clause.body]
        forall_vars = tuple(v for v in variables(goals) if v not in params)
        alternatives = tuple(tuple(goals[:i]) + (negate_goal(goals[i]),)
                             for i in range(len(goals)))
        out.append(DualClause(clause, forall_vars, alternatives))
    return Dual(key, params, tuple(out))


def _body_keys(clauses: Iterable[Clause]) -> list[Key]:
    seen: dict[Key, None] = {}
    for c in clauses:
        seen.setdefault(c.head.key)
        for b in c.body:
            if not b.is_builtin:
                seen.setdefault(b.key)
    return list(seen)


def compute_denials(keys: Iterable[Key]) -> tuple[Denial, ...]:
    keys = list(keys)
    present = set(keys)
    out = []
    for name, arity, negated in keys:
        if not negated and (name, arity, True) in present:
            args = tuple(fresh_var(f"X{i}") for i in range(arity))
            out.append(Denial((Literal(name, args), Literal(name, args, negated=True))))
    return tuple(out)


def olon_clauses(clauses: Iterable[Clause]) -> list[Clause]:
    """Clauses whose head reaches itself through an odd number of default negations."""
    clauses = list(clauses)
    edges: dict[Key, list[tuple[Key, int]]] = {}
    for c in clauses:
        for b in c.body:
            if not b.is_builtin:
                edges.setdefault(c.head.key, []).append((b.key, int(b.naf)))
    cache: dict[Key, set[tuple[Key, int]]] = {}

    def reach(start: Key) -> set[tuple[Key, int]]:
        if start not in cache:
            seen = {(start, 0)}
            queue = deque(seen)
            while queue:
                node, parity = queue.popleft()
                for nxt, flip in edges.get(node, ()):
                    state = (nxt, parity ^ flip)
                    if state not in seen:
                        seen.add(state)
                        queue.append(state)
            cache[start] = seen
        return cache[start]

    out = []
    for c in clauses:
        head = c.head.key
        for b in c.body:
            if b.is_builtin:
                continue
            if any((head, p) in reach(b.key) for p in (0, 1) if (p + b.naf) % 2 == 1):
                out.append(c)
                break
    return out


def compile_program(program: SourceProgram) -> CompiledProgram:
    clauses = list(program.clauses)
    index: dict[Key, list[Clause]] = {}
    for c in clauses:
        index.setdefault(c.head.key, []).append(c)
    checks = []
    for k, c in enumerate(olon_clauses(clauses), 1):
        c = rename(c, {})
        name = f"$chk_{k}"
        index[(name, 0, False)] = [Clause(Literal(name), (c.head.complement(),) + c.body, c.source)]
        checks.append(Literal(name, naf=True))
    keys = _body_keys(c for cs in index.values() for c in cs)
    keys += [q.key for q in program.query or () if not q.is_builtin and q.key not in keys]
    duals = {k: compute_dual(k, index.get(k, ())) for k in keys}
    return CompiledProgram(
        index={k: tuple(v) for k, v in index.items()},
        duals=duals,
        denials=compute_denials(keys),
        checks=tuple(checks),
        templates=TemplateSet(program.templates),
        source=program,
    )


compile = compile_program


def _dual_name(key: Key, suffix: str = "") -> str:
    name, _, negated = key
    return f"not {'-' if negated else ''}{name}{suffix}"


def _head(name: str, args: tuple[Term, ...]) -> Literal:
    return Literal(name, args)


def _clause_text(head: Literal, body: Iterable[Literal] | str) -> str:
    namer = Namer()
    text = literal_raw(head, namer)
    if isinstance(body, str):
        return f"{text} :- {body}."
    body = list(body)
    if not body:
        return text + "."
    return text + " :- " + ", ".join(literal_raw(b, namer) for b in body) + "."


def dump_duals(program: CompiledProgram) -> str:
    """The dual rules as clauses over internal ``'not p'`` predicates.

    The listing parses back with the normal parser.  ``forall(V, G)`` reads
    as "G holds for every value of V".
    """
    lines: list[str] = []
    for key in sorted(program.duals, key=lambda k: (k[0].startswith("$"), k)):
        dual = program.duals[key]
        params = dual.params
        lines.append(f"% {key[0] if not key[2] else '-' + key[0]}/{key[1]}")
        if not dual.clauses:
            lines.append(_clause_text(_head(_dual_name(key), params), ()))
            lines.append("")
            continue
        parts = [_head(_dual_name(key, f"#{i}"), params) for i in range(1, len(dual.clauses) + 1)]
        lines.append(_clause_text(_head(_dual_name(key), params), parts))
        for i, (dc, part) in enumerate(zip(dual.clauses, parts), 1):
            if not dc.alternatives:
                lines.append(f"% {literal_raw(part, Namer())} has no clauses and always fails")
                continue
            if dc.forall_vars:
                inner = _head(_dual_name(key, f"#{i} body"), params + dc.forall_vars)
                namer = Namer()
                head_text = literal_raw(part, namer)
                goal = literal_raw(inner, namer)
                for v in reversed(dc.forall_vars):
                    goal = f"forall({term_text(v, namer, False)}, {goal})"
                lines.append(f"{head_text} :- {goal}.")
                target = inner
            else:
                target = part
            for alt in dc.alternatives:
                lines.append(_clause_text(target, alt))
        lines.append("")
    for d in program.denials:
        namer = Namer()
        lines.append("% denial :- " + ", ".join(literal_raw(b, namer) for b in d.body) + ".")
    return "\n".join(lines).rstrip() + "\n"
