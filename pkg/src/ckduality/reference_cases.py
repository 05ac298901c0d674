"""Published worked examples, with a runner that recomputes each one.

Triples are stated as ``(free_rank, torsion, marks)`` in the standard
presentation ``Z^r + Z/d_1 + ...``; a computed triple matches when it is
pointed-isomorphic to the stated one.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional, Sequence

from . import classify
from .ckalg import validate
from .fgab import FgAbGroup, MarkedGroup, Verdict, canonical_marked_display, pointed_iso_exists

MATRICES = {
    "B": [[1, 1], [1, 1]],
    "B_-": [[1, 1, 0, 0], [1, 1, 1, 0], [0, 1, 1, 1], [0, 0, 1, 1]],
    "F": [[1, 1], [1, 0]],
    "C": [[1, 1, 1], [1, 1, 1], [1, 0, 1]],
    "D": [[0, 1, 1], [1, 1, 1], [1, 0, 1]],
    "A": [[1, 1, 1], [1, 1, 1], [1, 0, 0]],
}

FIRST_FAMILY = ("B", "B_-", "F", "C", "D")


@dataclass(frozen=True)
class TripleCase:
    matrix: str
    transpose: bool
    free_rank: int
    torsion: tuple
    marks: tuple

    @property
    def label(self) -> str:
        name = self.matrix + ("^t" if self.transpose else "")
        return "triple(%s) ~ %s" % (name, format_marked(self.free_rank, self.torsion, self.marks))


@dataclass(frozen=True)
class VerdictCase:
    question: classify.Question
    left: str
    right: str
    expected: Verdict

    @property
    def label(self) -> str:
        return "%s_iso(%s, %s) = %s" % (self.question.value, self.left, self.right, self.expected.value)


def format_marked(free_rank: int, torsion: Sequence[int], marks: Sequence[Sequence[int]]) -> str:
    parts = (["Z"] * free_rank) + ["Z/%d" % d for d in torsion]
    group = " + ".join(parts) if parts else "0"
    shown = []
    for m in marks:
        shown.append(str(m[0]) if len(m) == 1 else "(%s)" % ", ".join(str(x) for x in m))
    return "(%s; %s)" % (group, ", ".join(shown))


def literal_marked_group(free_rank: int, torsion: Sequence[int], marks: Sequence[Sequence[int]]) -> MarkedGroup:
    G = FgAbGroup.from_invariants(free_rank, list(torsion))
    return MarkedGroup.of(G, *marks)


def _resolve(name: str):
    base = name[:-2] if name.endswith("^t") else name
    M = validate(MATRICES[base])
    return M.T if name.endswith("^t") else M


def default_table() -> list:
    table = [
        TripleCase("B", False, 1, (), ((1,), (0,))),
        TripleCase("B_-", False, 1, (), ((1,), (-1,))),
        TripleCase("F", False, 1, (), ((1,), (-2,))),
        TripleCase("C", False, 1, (), ((1,), (-1,))),
        TripleCase("D", False, 1, (), ((1,), (0,))),
        TripleCase("A", False, 1, (), ((2,), (-2,))),
        TripleCase("A", True, 1, (2,), ((1, 0), (-1, 1))),
        VerdictCase(classify.Question.TOEPLITZ, "B", "D^t", Verdict.YES),
        VerdictCase(classify.Question.TOEPLITZ, "B_-", "C^t", Verdict.YES),
    ]
    for other in ("B", "B_-", "C^t", "D^t"):
        table.append(VerdictCase(classify.Question.TOEPLITZ, "F", other, Verdict.NO))
    for x, y in itertools.combinations(FIRST_FAMILY, 2):
        table.append(VerdictCase(classify.Question.CK, x, y, Verdict.YES))
    table.append(VerdictCase(classify.Question.TOEPLITZ, "A", "A^t", Verdict.NO))
    table.append(VerdictCase(classify.Question.CK, "A", "A^t", Verdict.NO))
    return table


@dataclass(frozen=True)
class CaseResult:
    label: str
    ok: bool
    observed: str

    def to_dict(self) -> dict:
        return {"label": self.label, "ok": self.ok, "observed": self.observed}


def run_case(case) -> CaseResult:
    if isinstance(case, TripleCase):
        computed = classify.toeplitz_triple(_resolve(case.matrix), transpose_input=case.transpose)
        stated = literal_marked_group(case.free_rank, case.torsion, case.marks)
        decision = pointed_iso_exists(computed, stated)
        disp = canonical_marked_display(computed)
        observed = format_marked(disp["free_rank"], disp["torsion"], disp["marks"])
        return CaseResult(case.label, decision.verdict is Verdict.YES, observed)
    verdict = classify.decide(case.question, _resolve(case.left), _resolve(case.right)).verdict
    return CaseResult(case.label, verdict is case.expected, verdict.value)


def run_table(table: Optional[list] = None) -> list:
    return [run_case(c) for c in (default_table() if table is None else table)]
