"""Isomorphism decisions for Toeplitz and Cuntz-Krieger algebras.

All three questions reduce to pointed isomorphism of a finitely generated
abelian group with distinguished elements; the verdicts come from
:func:`ckduality.fgab.pointed_iso_exists`.
"""

from __future__ import annotations

import enum
import os
from dataclasses import dataclass
from functools import lru_cache

from . import ckalg
from .ckalg import CKMatrix
from .fgab import (
    DEFAULT_SEARCH_BUDGET,
    DEFAULT_TORSION_BOUND,
    Decision,
    MarkedGroup,
    Verdict,
    pointed_iso_exists,
)

TORSION_BOUND_ENV = "CKDUALITY_TORSION_BOUND"


def torsion_bound() -> int:
    value = os.environ.get(TORSION_BOUND_ENV)
    return int(value) if value else DEFAULT_TORSION_BOUND


class Question(str, enum.Enum):
    TOEPLITZ = "toeplitz"
    CK = "ck"
    EXT_W = "extw"


CRITERIA = {
    Question.TOEPLITZ: "T_A ~ T_B iff some iso Z^{N+1}/(I-A_1) -> Z^{M+1}/(I-B_1) fixes [(1,...,1)] and [(1,0,...,0)]",
    Question.CK: "O_A ~ O_B iff some iso K_0(O_A) -> K_0(O_B) fixes the unit class (Rordam)",
    Question.EXT_W: "pointed iso of Ext_w with [T_A]_w = -[1_N]",
}


@dataclass(frozen=True)
class IsoVerdict:
    question: Question
    inputs: tuple
    decision: Decision
    criterion: str

    @property
    def verdict(self) -> Verdict:
        return self.decision.verdict


def _ck(M) -> CKMatrix:
    return ckalg._ck(M)


@lru_cache(maxsize=8192)
def _triple(A: CKMatrix) -> MarkedGroup:
    return ckalg.invariants(A).k0_toeplitz


def toeplitz_triple(M, transpose_input: bool = False) -> MarkedGroup:
    """``(Z^{N+1}/(I - M_1), [e_0], [1_{N+1}])``, the invariant of ``T_{M^t}``.

    With ``transpose_input`` the matrix is transposed first, so the result
    describes ``T_M``.
    """
    M = _ck(M)
    return _triple(M.T if transpose_input else M)


@lru_cache(maxsize=8192)
def _unit_pair(A: CKMatrix) -> MarkedGroup:
    return ckalg.invariants(A).k0_ck


@lru_cache(maxsize=8192)
def _ext_w(A: CKMatrix) -> MarkedGroup:
    return ckalg.invariants(A).ext_w


def _decide(a: MarkedGroup, b: MarkedGroup) -> Decision:
    return pointed_iso_exists(a, b, torsion_bound=torsion_bound(), search_budget=DEFAULT_SEARCH_BUDGET)


def toeplitz_iso(A, B) -> IsoVerdict:
    """Decide ``T_A ~ T_B``. Matrix sizes may differ."""
    A, B = _ck(A), _ck(B)
    decision = _decide(toeplitz_triple(A), toeplitz_triple(B))
    return IsoVerdict(Question.TOEPLITZ, (A, B), decision, CRITERIA[Question.TOEPLITZ])


def ck_iso(A, B) -> IsoVerdict:
    """Decide ``O_A ~ O_B`` from ``(Z^N/(I - A^t), [1_N])``."""
    A, B = _ck(A), _ck(B)
    decision = _decide(_unit_pair(A.T), _unit_pair(B.T))
    return IsoVerdict(Question.CK, (A, B), decision, CRITERIA[Question.CK])


def ext_w_pointed_iso(A, B) -> IsoVerdict:
    A, B = _ck(A), _ck(B)
    decision = _decide(_ext_w(A), _ext_w(B))
    return IsoVerdict(Question.EXT_W, (A, B), decision, CRITERIA[Question.EXT_W])


def decide(question: Question, A, B) -> IsoVerdict:
    return {Question.TOEPLITZ: toeplitz_iso, Question.CK: ck_iso, Question.EXT_W: ext_w_pointed_iso}[question](A, B)


def corollary_consistency(A, B) -> bool:
    """``toeplitz_iso(A, B)`` and ``toeplitz_iso(A^t, B^t)`` agree (UNKNOWN is exempt)."""
    A, B = _ck(A), _ck(B)
    v1 = toeplitz_iso(A, B).verdict
    v2 = toeplitz_iso(A.T, B.T).verdict
    if Verdict.UNKNOWN in (v1, v2):
        return True
    return v1 is v2
