"""The school-admission knowledge base shipped as data, plus case-file ingestion.

``students.pl`` pulls in the rules (``ArticleESO.pl``), their natural-language
patterns (``ArticleESO.pred.pl``) and the evidence bridge, then lists the
evidence for six students.  Each student is also available on its own under
``cases/``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from ..core import Clause, Const, Literal, Var
from ..parser import FileResolver, ParseError, SourceProgram, parse_file, parse_program

log = logging.getLogger(__name__)

MANIFEST = (
    "large_family", "renta_minima_insercion", "sibling_enroll_center",
    "same_education_district", "b1_certificate", "foreign_student", "specific_etnia",
)

# every predicate/arity mentioned in ArticleESO.pl
RULE_PREDICATES = frozenset({
    ("obtain_place", 1), ("met_requirement", 1), ("exception", 1),
    ("met_common_requirement", 1), ("met_specific_requirement", 1), ("large_family", 1),
    ("recipient_social_benefits", 1), ("renta_minima_insercion", 1), ("ingreso_minimo_vital", 1),
    ("disability_status", 1), ("disabled_parent", 1), ("disabled_sibling", 1),
    ("sibling_enroll_center", 1), ("legal_guardian_work_center", 1),
    ("relative_former_student", 1), ("school_proximity", 1), ("same_education_district", 1),
    ("force_majeure", 0), ("n_force_majeure", 0), ("come_non_bilingual", 1),
    ("want_bilingual_section", 2), ("accredit_english", 2), ("b1_certificate", 1),
    ("b2_certificate", 1), ("met_complement_criterion", 2), ("n_met_complement_criterion", 2),
    ("school_criteria", 2), ("purpose", 1), ("unlawful", 1), ("promote_diversity", 1),
    ("sex_discrimination", 1), ("race_discrimination", 1), ("religion_discrimination", 1),
    ("foreign_student", 1), ("specific_etnia", 1),
})

STUDENTS = ("st01", "st02", "st03", "st04", "st05", "st06")

# '+' positive evidence, '-' negative evidence, '?' unknown
TABLE = {
    "large_family":            "+++---",
    "renta_minima_insercion":  "+++?--",
    "sibling_enroll_center":   "++-+--",
    "same_education_district": "++-+--",
    "b1_certificate":          "+-+?--",
    "foreign_student":         "----+-",
    "specific_etnia":          "-----+",
}

EXPECTED = {"st01": True, "st02": False, "st03": True, "st04": True, "st05": True, "st06": False}

CONTEXT = ("come_non_bilingual(St).", "want_bilingual_section(St,'2nd ESO').")

POSITIVE, NEGATIVE, UNKNOWN = "positive", "negative", "unknown"


class CaseFileError(ValueError):
    pass


@dataclass(frozen=True)
class EvidenceRecord:
    subject: str
    kind: str
    polarity: str

    def fact(self) -> str:
        sign = {POSITIVE: "", NEGATIVE: "-"}[self.polarity]
        return f"{sign}evidence({self.subject}, {self.kind})."


@dataclass(frozen=True)
class CaseFile:
    students: tuple[str, ...] = ()
    records: tuple[EvidenceRecord, ...] = ()
    context: tuple[Clause, ...] = ()
    warnings: tuple[str, ...] = field(default=(), compare=False)

    def polarity(self, subject: str, kind: str) -> str:
        for r in self.records:
            if r.subject == subject and r.kind == kind:
                return r.polarity
        return UNKNOWN

    def kinds(self, subject: str, polarity: str) -> set[str]:
        if polarity == UNKNOWN:
            known = {r.kind for r in self.records if r.subject == subject}
            return set(MANIFEST) - known
        return {r.kind for r in self.records if r.subject == subject and r.polarity == polarity}

    def fragment(self) -> str:
        """The ``student/1``, ``evidence/2`` and ``-evidence/2`` facts as program text."""
        lines = []
        for st in self.students:
            lines.append(f"student({st}).")
            lines += [r.fact() for r in self.records if r.subject == st]
            lines.append("")
        return "\n".join(lines)


def _constant(t, what: str, clause: Clause) -> str:
    if not isinstance(t, Const):
        raise CaseFileError(f"{what} must be a constant in {clause}")
    return t.name


def load_case_file(text: str, filename: str = "<case>") -> CaseFile:
    """Read student and evidence facts.  Includes are not followed; other clauses become context."""
    program = parse_program(text, filename=filename, follow_includes=False)
    students: list[str] = []
    records: dict[tuple[str, str], EvidenceRecord] = {}
    context: list[Clause] = []
    warnings: list[str] = []
    for c in program.clauses:
        h = c.head
        if not c.body and h.predicate == "student" and len(h.args) == 1 and not h.negated:
            st = _constant(h.args[0], "student", c)
            if st not in students:
                students.append(st)
        elif not c.body and h.predicate == "evidence" and len(h.args) == 2:
            st = _constant(h.args[0], "subject", c)
            kind = _constant(h.args[1], "evidence kind", c)
            polarity = NEGATIVE if h.negated else POSITIVE
            old = records.get((st, kind))
            if old is not None and old.polarity != polarity:
                raise CaseFileError(f"conflicting evidence for {st}, {kind}")
            if kind not in MANIFEST:
                msg = f"evidence kind {kind!r} is not in the manifest"
                if msg not in warnings:
                    log.warning(msg)
                    warnings.append(msg)
            records.setdefault((st, kind), EvidenceRecord(st, kind, polarity))
        else:
            context.append(c)
    missing = sorted({r.subject for r in records.values()} - set(students))
    if missing:
        raise CaseFileError(f"evidence for undeclared student(s): {', '.join(missing)}")
    return CaseFile(tuple(students), tuple(records.values()), tuple(context), tuple(warnings))


def bridge_rules(manifest=MANIFEST) -> tuple[Clause, ...]:
    """Rules linking ``evidence/2`` to the predicates used by the articles.

    Positive evidence proves the kind, negative evidence blocks it, and with
    no evidence either way an even loop leaves both outcomes open.
    """
    out = []
    for kind in manifest:
        st = Var("St", 0)
        e = Const(kind)
        head = Literal(kind, (st,))
        nhead = Literal(f"n_{kind}", (st,))
        out.append(Clause(head, (Literal("evidence", (st, e)),)))
        out.append(Clause(head, (
            Literal("student", (st,)),
            Literal("evidence", (st, e), naf=True),
            Literal("evidence", (st, e), negated=True, naf=True),
            nhead.complement(),
        )))
        out.append(Clause(nhead, (head.complement(),)))
    return tuple(out)


def bridge_text(manifest=MANIFEST) -> str:
    lines = ["% Evidence bridge: generated by slaw.corpus.bridge_rules.", ""]
    for c in bridge_rules(manifest):
        if c.head.predicate.startswith("n_"):
            lines.append(f"{c.head} :-\n  {c.body[0]}.")
            lines.append("")
        else:
            lines.append(f"{c.head} :-\n  " + ",\n  ".join(map(str, c.body)) + ".")
    return "\n".join(lines) + "\n"


def table_case(student: str) -> CaseFile:
    i = STUDENTS.index(student)
    records = []
    for kind in MANIFEST:
        mark = TABLE[kind][i]
        if mark != "?":
            records.append(EvidenceRecord(student, kind, POSITIVE if mark == "+" else NEGATIVE))
    return CaseFile((student,), tuple(records))


def students_text() -> str:
    lines = ["#include('ArticleESO.pl').", "#include('ArticleESO.pred.pl').",
             "#include('evidence_bridge.pl').", ""]
    lines += list(CONTEXT) + [""]
    for st in STUDENTS:
        lines.append(table_case(st).fragment())
    return "\n".join(lines).rstrip() + "\n"


def case_text(student: str) -> str:
    return f"% Table column for {student}; unknown kinds are left out.\n\n" + table_case(student).fragment()


def corpus_dir() -> Path:
    return Path(str(resources.files(__name__)))


def path(name: str) -> Path:
    return corpus_dir() / name


def students_program() -> SourceProgram:
    return parse_file(path("students.pl"))


def case_program(student: str, extra: str = "") -> SourceProgram:
    """Rules, patterns, bridge and context with exactly one student's evidence."""
    text = "\n".join([
        "#include('ArticleESO.pl').", "#include('ArticleESO.pred.pl').",
        "#include('evidence_bridge.pl').", *CONTEXT,
        path(f"cases/{student}.pl").read_text(), extra,
    ])
    return parse_program(text, FileResolver(corpus_dir()), filename=str(path("case.pl")))


def golden(name: str) -> list[str]:
    return path(f"golden/{name}.txt").read_text().splitlines()


__all__ = [
    "MANIFEST", "RULE_PREDICATES", "STUDENTS", "TABLE", "EXPECTED", "CONTEXT", "EvidenceRecord", "CaseFile",
    "CaseFileError", "ParseError", "load_case_file", "bridge_rules", "bridge_text",
    "table_case", "students_text", "case_text", "corpus_dir", "path", "students_program",
    "case_program", "golden",
]
