"""Terms, literals and clauses, plus unification with disequality constraints.

Everything here is an immutable value.  A :class:`ConstraintState` holds a
triangular substitution and a store of pending disequalities; every
operation returns a new state (or ``None`` on failure).
"""

from __future__ import annotations

import itertools
import re
from collections.abc import Callable, Iterable, Iterator, Mapping
from dataclasses import dataclass, field, replace
from typing import Union

__all__ = [
    "Var", "Const", "Compound", "Term", "Literal", "Clause", "ConstraintState",
    "EMPTY", "TermError", "fresh_var", "walk", "apply", "apply_literal", "unify",
    "unify_args", "unifiable", "add_disequality", "constraints_on", "subsumes_args", "rename",
    "rename_apart", "variables", "is_ground", "quote_atom",
]

_ids = itertools.count(1)


class TermError(TypeError):
    """Raised when something that is not a term reaches the term API."""


@dataclass(frozen=True)
class Var:
    name: str = field(compare=False)
    id: int

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Const:
    name: str

    def __str__(self) -> str:
        return quote_atom(self.name)


@dataclass(frozen=True)
class Compound:
    functor: str
    args: tuple[Term, ...]

    def __post_init__(self) -> None:
        if not self.args:
            raise TermError(f"compound {self.functor!r} needs at least one argument")

    def __str__(self) -> str:
        return f"{quote_atom(self.functor)}({','.join(map(str, self.args))})"


Term = Union[Var, Const, Compound]

BUILTINS = frozenset({"=", "\\="})

_PLAIN_ATOM = re.compile(r"[a-z][A-Za-z0-9_]*\Z|[0-9]+\Z")


def quote_atom(name: str) -> str:
    if _PLAIN_ATOM.match(name):
        return name
    escaped = name.replace("\\", "\\\\").replace("'", "\\'")
    return f"'{escaped}'"


def fresh_var(name: str = "_") -> Var:
    return Var(name, next(_ids))


@dataclass(frozen=True)
class Literal:
    """An atom with optional classical negation and optional default negation.

    ``(predicate, arity, negated)`` identifies the predicate; ``naf`` marks
    a goal of the form ``not p(...)``.
    """

    predicate: str
    args: tuple[Term, ...] = ()
    negated: bool = False
    naf: bool = False

    @property
    def key(self) -> tuple[str, int, bool]:
        return (self.predicate, len(self.args), self.negated)

    @property
    def is_builtin(self) -> bool:
        return self.predicate in BUILTINS and len(self.args) == 2 and not self.negated

    def positive(self) -> Literal:
        return replace(self, naf=False) if self.naf else self

    def complement(self) -> Literal:
        return replace(self, naf=not self.naf)

    def __str__(self) -> str:
        if self.is_builtin:
            text = f"{self.args[0]} {self.predicate} {self.args[1]}"
        else:
            text = ("-" if self.negated else "") + quote_atom(self.predicate)
            if self.args:
                text += f"({','.join(map(str, self.args))})"
        return f"not {text}" if self.naf else text


@dataclass(frozen=True)
class Clause:
    head: Literal
    body: tuple[Literal, ...] = ()
    source: tuple[str, int] | None = field(default=None, compare=False)

    def __post_init__(self) -> None:
        if self.head.naf:
            raise ValueError(f"default negation is not allowed in a head: {self.head}")

    def __str__(self) -> str:
        if not self.body:
            return f"{self.head}."
        return f"{self.head} :- {', '.join(map(str, self.body))}."


def _check(t: object) -> Term:
    if not isinstance(t, (Var, Const, Compound)):
        raise TermError(f"not a term: {t!r}")
    return t


def variables(obj) -> Iterator[Var]:
    """Distinct variables of a term, literal, clause or iterable, in first-occurrence order."""
    seen: set[Var] = set()
    stack = [obj]
    out: list[Var] = []
    while stack:
        t = stack.pop()
        if isinstance(t, Var):
            if t not in seen:
                seen.add(t)
                out.append(t)
        elif isinstance(t, Compound):
            stack.extend(reversed(t.args))
        elif isinstance(t, Literal):
            stack.extend(reversed(t.args))
        elif isinstance(t, Clause):
            stack.extend(reversed((t.head,) + t.body))
        elif isinstance(t, (tuple, list)):
            stack.extend(reversed(t))
    return iter(out)


def is_ground(t: Term) -> bool:
    return next(variables(t), None) is None


@dataclass(frozen=True)
class ConstraintState:
    """Substitution plus disequality store.

    ``bindings`` is triangular (a variable may map to a term containing other
    bound variables); :func:`apply` resolves to fixpoint.  ``disequalities``
    holds pairs that must never become identical.
    """

    bindings: Mapping[Var, Term] = field(default_factory=dict, hash=False)
    disequalities: tuple[tuple[Term, Term], ...] = ()


EMPTY = ConstraintState()


def walk(t: Term, s: ConstraintState | Mapping[Var, Term]) -> Term:
    b = s.bindings if isinstance(s, ConstraintState) else s
    while isinstance(t, Var) and t in b:
        t = b[t]
    return t


def apply(s: ConstraintState | Mapping[Var, Term], t: Term) -> Term:
    b = s.bindings if isinstance(s, ConstraintState) else s
    t = walk(_check(t), b)
    if isinstance(t, Compound):
        return Compound(t.functor, tuple(apply(b, a) for a in t.args))
    return t


def apply_literal(s: ConstraintState, lit: Literal) -> Literal:
    if not lit.args:
        return lit
    return replace(lit, args=tuple(apply(s, a) for a in lit.args))


def _occurs(v: Var, t: Term, b: Mapping[Var, Term]) -> bool:
    stack = [t]
    while stack:
        t = walk(stack.pop(), b)
        if t == v:
            return True
        if isinstance(t, Compound):
            stack.extend(t.args)
    return False


def _unify_into(a: Term, b: Term, bindings: dict[Var, Term]) -> bool:
    stack = [(a, b)]
    while stack:
        x, y = stack.pop()
        x, y = walk(x, bindings), walk(y, bindings)
        if x == y:
            continue
        if isinstance(x, Var) and isinstance(y, Var):
            # newer variables point at older ones so callers can tell scopes apart
            if x.id < y.id:
                x, y = y, x
            bindings[x] = y
        elif isinstance(x, Var):
            if _occurs(x, y, bindings):
                return False
            bindings[x] = y
        elif isinstance(y, Var):
            if _occurs(y, x, bindings):
                return False
            bindings[y] = x
        elif isinstance(x, Compound) and isinstance(y, Compound):
            if x.functor != y.functor or len(x.args) != len(y.args):
                return False
            stack.extend(zip(x.args, y.args))
        else:
            return False
    return True


def _revalidate(s: ConstraintState, fresh: set | None = None) -> ConstraintState | None:
    # fresh: the variables bound since the pairs were last normalised
    kept = []
    for left, right in s.disequalities:
        if (fresh is not None and isinstance(left, Var) and left not in fresh
                and (isinstance(right, Const) or (isinstance(right, Var) and right not in fresh))):
            kept.append((left, right))
            continue
        la, ra = apply(s, left), apply(s, right)
        if la == ra:
            return None
        pair = _normal_pair(la, ra)
        if pair is not None and pair not in kept:
            kept.append(pair)
    return ConstraintState(s.bindings, tuple(kept))


def unify(a: Term, b: Term, s: ConstraintState = EMPTY) -> ConstraintState | None:
    """Most general unifier of ``a`` and ``b`` extending ``s``, or ``None``."""
    return unify_args((a,), (b,), s)


def unify_args(xs: Iterable[Term], ys: Iterable[Term],
               s: ConstraintState = EMPTY) -> ConstraintState | None:
    xs, ys = tuple(xs), tuple(ys)
    if len(xs) != len(ys):
        return None
    for t in xs + ys:
        _check(t)
    bindings = dict(s.bindings)
    for x, y in zip(xs, ys):
        if not _unify_into(x, y, bindings):
            return None
    if len(bindings) == len(s.bindings):
        return s
    if not s.disequalities:
        return ConstraintState(bindings)
    # dict copies keep insertion order, so the new bindings are the last ones
    fresh = set(itertools.islice(reversed(bindings), len(bindings) - len(s.bindings)))
    return _revalidate(ConstraintState(bindings, s.disequalities), fresh)


def unifiable(a: Term, b: Term, s: ConstraintState = EMPTY) -> bool:
    return unify(a, b, s) is not None


def add_disequality(left: Term, right: Term,
                    s: ConstraintState = EMPTY) -> ConstraintState | None:
    """Add ``left ≠ right``.  ``None`` if the sides are already identical."""
    la, ra = apply(s, left), apply(s, right)
    if la == ra:
        return None
    pair = _normal_pair(la, ra)
    if pair is None:
        return s
    if pair in s.disequalities:
        return s
    return ConstraintState(s.bindings, s.disequalities + (pair,))


def _normal_pair(la: Term, ra: Term) -> tuple[Term, Term] | None:
    # None when the sides cannot unify, so the disequality holds for good
    mgu: dict[Var, Term] = {}
    if not _unify_into(la, ra, mgu):
        return None
    if len(mgu) == 1:
        # f(X, X) \= f(b, b) is the same constraint as X \= b
        ((la, ra),) = mgu.items()
    else:
        la, ra = _narrow(la, ra)
    if not isinstance(la, Var) and isinstance(ra, Var):
        la, ra = ra, la
    return la, ra


def _narrow(la: Term, ra: Term) -> tuple[Term, Term]:
    # f(a, X) \= f(a, b) is the same constraint as X \= b
    while (isinstance(la, Compound) and isinstance(ra, Compound)
           and la.functor == ra.functor and len(la.args) == len(ra.args)):
        differing = [(x, y) for x, y in zip(la.args, ra.args) if x != y]
        if len(differing) != 1:
            break
        la, ra = differing[0]
    return la, ra


def subsumes_args(general: Iterable[Term], specific: Iterable[Term],
                  s: ConstraintState = EMPTY) -> bool:
    """True if every instance of ``specific`` is an instance of ``general`` under ``s``.

    Variables of ``specific`` are treated as constants.  Disequalities on the
    general side must be entailed on the specific side.
    """
    general = tuple(apply(s, t) for t in general)
    specific = tuple(apply(s, t) for t in specific)
    if len(general) != len(specific):
        return False
    theta: dict[Var, Term] = {}
    stack = list(zip(general, specific))
    while stack:
        g, t = stack.pop()
        if isinstance(g, Var):
            if theta.setdefault(g, t) != t:
                return False
        elif isinstance(g, Const):
            if g != t:
                return False
        elif (isinstance(t, Compound) and t.functor == g.functor
              and len(t.args) == len(g.args)):
            stack.extend(zip(g.args, t.args))
        else:
            return False
    if not s.disequalities:
        return True
    for v, value in theta.items():
        if value == v:
            continue
        for other in constraints_on(v, s):
            other = _substitute(other, theta)
            if isinstance(value, Var):
                if other not in constraints_on(value, s):
                    return False
            elif unifiable(value, other, s):
                return False
    return True


def _substitute(t: Term, theta: Mapping[Var, Term]) -> Term:
    # one simultaneous pass, unlike apply() which chases bindings
    if isinstance(t, Var):
        return theta.get(t, t)
    if isinstance(t, Compound):
        return Compound(t.functor, tuple(_substitute(a, theta) for a in t.args))
    return t


def constraints_on(v: Var, s: ConstraintState) -> tuple[Term, ...]:
    """Terms the (unbound) variable ``v`` is constrained to differ from, in insertion order."""
    # stored pairs are kept resolved against the bindings, see _revalidate
    v = walk(v, s)
    out: list[Term] = []
    for la, ra in s.disequalities:
        if la == v:
            other = ra
        elif ra == v:
            other = la
        else:
            continue
        if other not in out:
            out.append(other)
    return tuple(out)


def rename(obj, mapping: dict[Var, Var], fresh: Callable[[str], Var] = fresh_var):
    """Copy ``obj`` replacing every variable by a fresh one (shared through ``mapping``)."""
    if isinstance(obj, Var):
        if obj not in mapping:
            mapping[obj] = fresh(obj.name)
        return mapping[obj]
    if isinstance(obj, Const):
        return obj
    if isinstance(obj, Compound):
        return Compound(obj.functor, tuple(rename(a, mapping, fresh) for a in obj.args))
    if isinstance(obj, Literal):
        if not obj.args:
            return obj
        return replace(obj, args=tuple(rename(a, mapping, fresh) for a in obj.args))
    if isinstance(obj, Clause):
        return Clause(rename(obj.head, mapping, fresh),
                      tuple(rename(b, mapping, fresh) for b in obj.body), obj.source)
    if isinstance(obj, tuple):
        return tuple(rename(o, mapping, fresh) for o in obj)
    raise TermError(f"cannot rename {obj!r}")


def rename_apart(clause: Clause, fresh: Callable[[str], Var] = fresh_var) -> Clause:
    return rename(clause, {}, fresh)
