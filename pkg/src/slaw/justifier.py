"""Justification trees and their rendering as indented text or HTML.

A tree is first filtered by detail level (hidden nodes are spliced out so
their children move up) and, in ``pos`` mode, stripped of negated nodes
that explain nothing.  Lines are joined with ", because", ", and" and "."
so the whole tree reads as one argument.
"""

from __future__ import annotations

import html
from collections.abc import Iterator, Mapping
from dataclasses import dataclass, field

from .core import Literal, Term, Var
from .templates import Namer, PredTemplate, TemplateSet, literal_raw, substitute_template

__all__ = ["JustificationNode", "render_text", "render_html", "render_html_document",
           "render_model", "summarize",
           "substitute_template", "DETAILS", "MODES"]

DETAILS = ("short", "mid", "long")
MODES = ("pos", "neg")


@dataclass(frozen=True)
class JustificationNode:
    """One step of a proof.

    ``reason`` is one of ``fact``, ``rule``, ``dual`` (a default-negated goal
    refuted through its dual), ``assumption`` (coinductive success),
    ``repeat`` (already proved above) or ``query`` for the root, whose
    ``literal`` is ``None``.  Only the root carries ``constraints``.
    """

    literal: Literal | None
    reason: str
    children: tuple[JustificationNode, ...] = ()
    constraints: Mapping[Var, tuple[Term, ...]] = field(default_factory=dict, hash=False, compare=False)

    def walk(self) -> Iterator[JustificationNode]:
        stack = [self]
        while stack:
            n = stack.pop()
            yield n
            stack.extend(reversed(n.children))


@dataclass(frozen=True)
class _View:
    node: JustificationNode
    children: tuple[_View, ...]


def _internal(lit: Literal) -> bool:
    return lit.predicate.startswith("$") or lit.is_builtin


def _shown(node: JustificationNode, detail: str, templates: TemplateSet) -> bool:
    lit = node.literal
    if lit is None or _internal(lit):
        return False
    if detail == "long" or not templates:
        return True
    if templates.has_template(lit):
        return True
    return detail == "mid" and node.reason in ("assumption", "repeat")


def _visible(node, detail, templates) -> list[_View]:
    kids = [v for c in node.children for v in _visible(c, detail, templates)]
    if _shown(node, detail, templates):
        return [_View(node, tuple(kids))]
    return kids


def _prune(views) -> tuple[_View, ...]:
    out = []
    for v in views:
        kids = _prune(v.children)
        if v.node.literal.naf and not kids:
            continue
        out.append(_View(v.node, kids))
    return tuple(out)


def _views(root: JustificationNode, detail: str, mode: str, templates: TemplateSet) -> tuple[_View, ...]:
    if detail not in DETAILS:
        raise ValueError(f"unknown detail level {detail!r}")
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}")
    if root.reason == "query":
        top = [v for c in root.children for v in _visible(c, detail, templates)]
        goals = set(map(id, root.children))
    else:
        top, goals = _visible(root, detail, templates), {id(root)}
    if mode == "neg":
        return tuple(top)
    out = []
    for v in top:
        if id(v.node) in goals:
            out.append(_View(v.node, _prune(v.children)))
        else:
            out.extend(_prune((v,)))
    return tuple(out)


def _node_text(node, namer, templates, human) -> str:
    lit = node.literal
    if not human:
        text = literal_raw(lit, namer)
        if node.reason == "assumption":
            return f"assume({text})"
        if node.reason == "repeat":
            return f"proved({text})"
        return text
    text = templates.render(lit, namer, True)
    if node.reason == "assumption":
        return "it is assumed that " + text
    if node.reason == "repeat":
        return text + ", justified above"
    return text


def _lines(views, depth, namer, templates, human, out) -> None:
    for i, v in enumerate(views):
        text = _node_text(v.node, namer, templates, human)
        last = i == len(views) - 1
        if human:
            text += ", because" if v.children else ("." if last else ", and")
        else:
            text += " :-" if v.children else ("." if last else ",")
        out.append("    " * depth + text)
        _lines(v.children, depth + 1, namer, templates, human, out)


def render_text(root: JustificationNode, templates: TemplateSet | None = None,
                detail: str = "mid", mode: str = "pos", human: bool = True) -> str:
    templates = templates or TemplateSet()
    out: list[str] = []
    namer = Namer(root.constraints)
    _lines(_views(root, detail, mode, templates), 0, namer, templates, human, out)
    return "\n".join(out)


def _html(views, namer, templates, human, out) -> None:
    for v in views:
        text = html.escape(_node_text(v.node, namer, templates, human))
        if v.children:
            out.append(f'<details open><summary class="node">{text}</summary>')
            out.append('<div class="children">')
            _html(v.children, namer, templates, human, out)
            out.append("</div></details>")
        else:
            out.append(f'<div class="node leaf">{text}</div>')


_STYLE = """body { font-family: sans-serif; }
.children { margin-left: 2em; border-left: 1px solid #ccc; padding-left: .5em; }
.node { margin: .2em 0; }"""


def render_html(root: JustificationNode, templates: TemplateSet | None = None,
                detail: str = "mid", mode: str = "pos", human: bool = True,
                title: str = "Justification") -> str:
    return render_html_document([(title, root)], templates, detail, mode, human, title)


def render_html_document(sections, templates: TemplateSet | None = None,
                         detail: str = "mid", mode: str = "pos", human: bool = True,
                         title: str = "Justification") -> str:
    """One page with a heading and a collapsible tree per ``(heading, root)`` pair."""
    templates = templates or TemplateSet()
    out = ["<!DOCTYPE html>", "<html><head><meta charset=\"utf-8\">",
           f"<title>{html.escape(title)}</title>", f"<style>{_STYLE}</style>", "</head><body>"]
    for heading, root in sections:
        out += [f"<h2>{html.escape(heading)}</h2>", '<div class="tree">']
        _html(_views(root, detail, mode, templates), Namer(root.constraints), templates, human, out)
        out.append("</div>")
    out.append("</body></html>")
    return "\n".join(out) + "\n"


def render_model(answer, templates: TemplateSet | None = None, human: bool = True) -> str:
    """``{ l1, l2, ... }`` in derivation order.  Human style leaves constants unquoted."""
    namer = Namer(getattr(answer, "constraints", {}))
    lits = [literal_raw(lit, namer, human=human) for lit in answer.model]
    return "{ " + ", ".join(lits) + (" }" if lits else "}")


def summarize(root: JustificationNode, templates: TemplateSet) -> tuple[Literal, ...]:
    """The literals worth reporting as the answer's model.

    Query goals, the leaves of the ``pos`` tree, and negated steps that rest
    on an assumption.
    """
    detail = "short" if templates else "long"
    views = _views(root, detail, "pos", templates)
    goals = {id(c) for c in root.children} if root.reason == "query" else {id(root)}
    out: dict[Literal, None] = {}

    def assumed(v: _View) -> bool:
        return v.node.reason == "assumption" or any(assumed(c) for c in v.children)

    def visit(v: _View) -> None:
        lit = v.node.literal
        if id(v.node) in goals or not v.children or (lit.naf and assumed(v)):
            out.setdefault(lit)
        for c in v.children:
            visit(c)

    for v in views:
        visit(v)
    return tuple(out)


def template_for(templates: TemplateSet, lit: Literal) -> PredTemplate | None:
    for t in templates.templates:
        if t.key == lit.key and t.head.naf == lit.naf:
            return t
    return None
