"""End-to-end acceptance checks, one per criterion.

Each check prints a single ``PASS``/``FAIL`` line, also when run as a script::

    python tests/test_acceptance.py
"""

import random
import subprocess
import sys
import time
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from helpers import GOLDEN_TREES, first_answer, matches_golden, students, tree_text  # noqa: E402
from oracle import random_program, stable_models, to_source  # noqa: E402
from slaw import corpus, epistemic  # noqa: E402
from slaw.compiler import compile_program  # noqa: E402
from slaw.core import Literal  # noqa: E402
from slaw.parser import parse_program, parse_query  # noqa: E402
from slaw.solver import solve  # noqa: E402

TABLE_SECONDS = 5.0
ORACLE_SECONDS = 60.0
ORACLE_PROGRAMS = 200
ORACLE_MAX_ATOMS = 12
ORACLE_MAX_RULES = 20
REPEATS = 3

ST01_MODEL = {
    "obtain_place(st01)", "large_family(st01)", "sibling_enroll_center(st01)",
    "come_non_bilingual(st01)", "want_bilingual_section(st01,'2nd ESO')", "b1_certificate(st01)",
}
CONSTRAINT_TEXT = "Var0 not equal foreign_student, nor specific_etnia"


def _holds(program, query):
    return any(True for _ in solve(program, parse_query(query)))


def criterion_1():
    start = time.perf_counter()
    program = compile_program(corpus.students_program())
    got = {st: _holds(program, f"obtain_place({st})") for st in corpus.STUDENTS}
    elapsed = time.perf_counter() - start
    right = sum(got[st] == corpus.EXPECTED[st] for st in corpus.STUDENTS)
    return right == 6 and elapsed < TABLE_SECONDS, f"{right}/6 outcomes in {elapsed:.2f}s"


def criterion_2():
    st01 = first_answer("obtain_place(st01)")
    st03 = first_answer("obtain_place(st03)")
    st04 = first_answer("obtain_place(st04)")
    ok01 = {str(x) for x in st01.model} == ST01_MODEL
    ok03 = "force_majeure" in map(str, st03.assumptions)
    assumed04 = set(map(str, st04.assumptions))
    ok04 = ("not exception(st04)" in map(str, st04.model)
            and {"renta_minima_insercion(st04)", "b1_certificate(st04)"} <= assumed04)
    return ok01 and ok03 and ok04, f"st01={ok01} st03={ok03} st04={ok04}"


def criterion_3():
    found = _holds(students(), "not force_majeure, obtain_place(st03)")
    return not found, "no models" if not found else "unexpected answer"


def criterion_4():
    good = [name for name, (q, mode) in GOLDEN_TREES.items()
            if matches_golden((tree_text(q, mode) or "").splitlines(), corpus.golden(name))]
    return len(good) == len(GOLDEN_TREES), f"{len(good)}/{len(GOLDEN_TREES)} trees"


def criterion_5():
    start = time.perf_counter()
    checked = 0
    for seed in range(ORACLE_PROGRAMS):
        atoms, rules = random_program(random.Random(seed), ORACLE_MAX_ATOMS, ORACLE_MAX_RULES)
        models = stable_models(atoms, rules)
        program = compile_program(to_source(rules))
        for a in atoms:
            for naf in (False, True):
                expected = any((a in m) != naf for m in models)
                got = any(True for _ in solve(program, (Literal(a, naf=naf),)))
                if got != expected:
                    return False, f"seed {seed}: {'not ' if naf else ''}{a}"
                checked += 1
    elapsed = time.perf_counter() - start
    return elapsed < ORACLE_SECONDS, f"{ORACLE_PROGRAMS} programs, {checked} queries in {elapsed:.1f}s"


def criterion_6():
    def answers(text, query):
        return list(solve(compile_program(parse_program(text)), parse_query(query)))
    even = "p :- not q. q :- not p."
    p_ans, q_ans = answers(even, "p"), answers(even, "q")
    ok_even = (len(p_ans) == 1 and len(q_ans) == 1
               and [str(x) for x in p_ans[0].assumptions] == ["p"]
               and "not q" in map(str, p_ans[0].full_model)
               and [str(x) for x in q_ans[0].assumptions] == ["q"]
               and "not p" in map(str, q_ans[0].full_model))
    ok_pos = answers("p :- p.", "p") == []
    ok_odd = answers("p :- not p.", "p") == []
    return ok_even and ok_pos and ok_odd, f"even={ok_even} positive={ok_pos} odd={ok_odd}"


def criterion_7():
    text = tree_text("not obtain_place(st02)", "neg") or ""
    hits = [line for line in text.splitlines() if CONSTRAINT_TEXT in line]
    return bool(hits), f"{len(hits)} line(s) with the constraint"


def _batch(*args):
    cmd = [sys.executable, "-m", "slaw.cli", str(corpus.path("students.pl")), *args]
    return subprocess.run(cmd, capture_output=True).stdout


def criterion_8():
    runs = [("-q", f"obtain_place({st})", "-s", "0", "--tree", "--short", "--human")
            for st in corpus.STUDENTS]
    runs += [("-q", q, "--tree", "--short", f"--{mode}", "--human") for q, mode in GOLDEN_TREES.values()]
    for args in runs:
        outputs = {_batch(*args) for _ in range(REPEATS)}
        if len(outputs) != 1:
            return False, f"differs: {' '.join(args)}"
    return True, f"{len(runs)} runs x{REPEATS} identical"


def criterion_9():
    program = students()
    queries = [f"obtain_place({st})" for st in corpus.STUDENTS]
    queries += [f"not obtain_place({st})" for st in corpus.STUDENTS]
    nonempty = 0
    for q in queries:
        ms = epistemic.enumerate_models(program, parse_query(q))
        if ms:
            nonempty += 1
            if not epistemic.cautious(ms) <= epistemic.brave(ms):
                return False, f"cautious not within brave for {q}"
    groups = epistemic.assumption_report(epistemic.enumerate_models(program, parse_query("obtain_place(st03)")))
    carried = bool(groups) and all("force_majeure" in g.assumptions for g in groups)
    return carried, f"{nonempty} queries with models, st03 groups={len(groups)} carry force_majeure={carried}"


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
            criterion_6, criterion_7, criterion_8, criterion_9]


def _line(n, ok, detail):
    return f"criterion {n}: {'PASS' if ok else 'FAIL'} ({detail})"


@pytest.mark.parametrize("n", range(1, 10))
def test_criterion(n, capsys):
    ok, detail = CRITERIA[n - 1]()
    with capsys.disabled():
        print("\n" + _line(n, ok, detail))
    assert ok, detail


if __name__ == "__main__":
    failed = 0
    for i, check in enumerate(CRITERIA, 1):
        ok, detail = check()
        failed += not ok
        print(_line(i, ok, detail))
    sys.exit(1 if failed else 0)
