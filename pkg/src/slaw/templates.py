"""Natural-language patterns declared with ``#pred`` and literal-to-text rendering."""

from __future__ import annotations

import re
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field

from .core import Compound, Const, Literal, Term, Var, quote_atom

_PLACEHOLDER = re.compile(r"@\(([A-Za-z_][A-Za-z0-9_]*)\)")

NO_EVIDENCE = "there is no evidence that "


@dataclass(frozen=True)
class PredTemplate:
    """``#pred head :: 'pattern'``.  A default-negated head gives the pattern for ``not head``."""

    head: Literal
    pattern: str
    source: tuple[str, int] | None = field(default=None, compare=False)

    @property
    def key(self) -> tuple[str, int, bool]:
        return self.head.key

    def placeholders(self) -> list[str]:
        return _PLACEHOLDER.findall(self.pattern)

    def __str__(self) -> str:
        return f"#pred {self.head} :: {quote_text(self.pattern)}."


def quote_text(text: str) -> str:
    return "'" + text.replace("\\", "\\\\").replace("'", "\\'") + "'"


class Namer:
    """Assigns display names ``Var0, Var1, ...`` to variables in first-seen order."""

    def __init__(self, constraints: Mapping[Var, tuple[Term, ...]] | None = None):
        self.constraints = dict(constraints or {})
        self.names: dict[Var, str] = {}

    def name(self, v: Var) -> str:
        if v not in self.names:
            self.names[v] = f"Var{len(self.names)}"
        return self.names[v]


def term_text(t: Term, namer: Namer, human: bool = True) -> str:
    if isinstance(t, Const):
        return t.name if human else quote_atom(t.name)
    if isinstance(t, Compound):
        functor = t.functor if human else quote_atom(t.functor)
        return f"{functor}({','.join(term_text(a, namer, human) for a in t.args)})"
    name = namer.name(t)
    excluded = namer.constraints.get(t, ())
    if not excluded:
        return name
    if human:
        texts = [term_text(c, namer, True) for c in excluded]
        return f"{name} not equal {texts[0]}" + "".join(f", nor {x}" for x in texts[1:])
    return f"{name} | {{" + ", ".join(
        f"{name} \\= {term_text(c, namer, False)}" for c in excluded) + "}"


def literal_raw(lit: Literal, namer: Namer, human: bool = False) -> str:
    if lit.is_builtin:
        a, b = (term_text(x, namer, human) for x in lit.args)
        text = f"{a} {lit.predicate} {b}"
    else:
        text = ("-" if lit.negated else "") + (lit.predicate if human else quote_atom(lit.predicate))
        if lit.args:
            text += "(" + ",".join(term_text(a, namer, human) for a in lit.args) + ")"
    return f"not {text}" if lit.naf else text


def _match(pattern: Term, t: Term, theta: dict[Var, Term]) -> bool:
    if isinstance(pattern, Var):
        if pattern in theta:
            return theta[pattern] == t
        theta[pattern] = t
        return True
    if isinstance(pattern, Const):
        return pattern == t
    return (isinstance(t, Compound) and t.functor == pattern.functor
            and len(t.args) == len(pattern.args)
            and all(_match(p, a, theta) for p, a in zip(pattern.args, t.args)))


def substitute_template(template: PredTemplate, lit: Literal,
                        namer: Namer | None = None) -> str | None:
    """Fill the template's ``@(Var)`` slots from ``lit``; ``None`` if the head does not match."""
    if template.key != lit.key or template.head.naf != lit.naf:
        return None
    theta: dict[Var, Term] = {}
    if not all(_match(p, a, theta) for p, a in zip(template.head.args, lit.args)):
        return None
    by_name = {v.name: t for v, t in theta.items()}
    namer = namer or Namer()
    return _PLACEHOLDER.sub(lambda m: term_text(by_name[m.group(1)], namer, True), template.pattern)


class TemplateSet:
    """Lookup of templates by predicate; the first matching declaration wins."""

    def __init__(self, templates: Iterable[PredTemplate] = ()):
        self.templates = tuple(templates)
        self._by_key: dict[tuple, list[PredTemplate]] = {}
        for t in self.templates:
            self._by_key.setdefault((t.key, t.head.naf), []).append(t)
        self._keys = {t.key for t in self.templates}

    def __bool__(self) -> bool:
        return bool(self.templates)

    def has_template(self, lit: Literal) -> bool:
        return lit.key in self._keys

    def find_text(self, lit: Literal, namer: Namer) -> str | None:
        for t in self._by_key.get((lit.key, lit.naf), ()):
            text = substitute_template(t, lit, namer)
            if text is not None:
                return text
        return None

    def render(self, lit: Literal, namer: Namer, human: bool = True) -> str:
        if not human:
            return literal_raw(lit, namer)
        text = self.find_text(lit, namer)
        if text is not None:
            return text
        if lit.naf:
            return NO_EVIDENCE + self.render(lit.positive(), namer, True)
        return literal_raw(lit, namer, human=True)
