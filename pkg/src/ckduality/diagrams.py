"""Six-term exact sequences, the ladder between them, and their verification.

The cyclic sequences have two zero corners. They are stored as linear
sequences capped by explicit trivial groups, so injectivity and
surjectivity at the ends are ordinary exactness checks.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Optional

from . import ckalg
from .fgab import Element, FgAbGroup, GroupHom, exact_at, identity_hom, zero_hom


@dataclass(frozen=True)
class Node:
    label: str
    group: FgAbGroup


@dataclass(frozen=True)
class Arrow:
    label: str
    hom: GroupHom


@dataclass(frozen=True)
class MarkedIdentity:
    label: str
    lhs: Element
    rhs: Element


@dataclass(frozen=True)
class ExactSequenceSpec:
    """``nodes[0] -> nodes[1] -> ...`` with ``arrows[i]: nodes[i] -> nodes[i+1]``."""

    name: str
    nodes: tuple
    arrows: tuple
    identities: tuple = ()
    cyclic: bool = True

    def __post_init__(self):
        if len(self.arrows) != len(self.nodes) - 1:
            raise ValueError("need exactly one arrow between consecutive nodes")
        for i, a in enumerate(self.arrows):
            if a.hom.src != self.nodes[i].group or a.hom.tgt != self.nodes[i + 1].group:
                raise ValueError("arrow %r does not match its endpoints" % a.label)

    def with_arrow(self, index: int, hom: GroupHom) -> "ExactSequenceSpec":
        arrows = list(self.arrows)
        arrows[index] = Arrow(arrows[index].label, hom)
        return replace(self, arrows=tuple(arrows))


@dataclass(frozen=True)
class LadderSpec:
    """Two sequences of equal length joined by rungs ``left.nodes[i] -> right.nodes[i]``."""

    name: str
    left: ExactSequenceSpec
    right: ExactSequenceSpec
    rungs: tuple
    identities: tuple = ()

    def __post_init__(self):
        if not (len(self.left.nodes) == len(self.right.nodes) == len(self.rungs)):
            raise ValueError("ladder columns and rungs must have equal length")
        for i, r in enumerate(self.rungs):
            if r.hom.src != self.left.nodes[i].group or r.hom.tgt != self.right.nodes[i].group:
                raise ValueError("rung %r does not match its endpoints" % r.label)


@dataclass
class Check:
    kind: str
    label: str
    ok: bool
    witness: Optional[dict] = None
    detail: str = ""

    def to_dict(self) -> dict:
        d = {"kind": self.kind, "label": self.label, "ok": self.ok}
        if self.witness is not None:
            d["witness"] = self.witness
        if self.detail:
            d["detail"] = self.detail
        return d


@dataclass
class DiagramReport:
    name: str
    checks: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.ok for c in self.checks)

    def failures(self) -> list:
        return [c for c in self.checks if not c.ok]

    def of_kind(self, kind: str) -> list:
        return [c for c in self.checks if c.kind == kind]

    def extend(self, other: "DiagramReport") -> None:
        for c in other.checks:
            self.checks.append(Check(c.kind, "%s: %s" % (other.name, c.label), c.ok, c.witness, c.detail))

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "counts": {
                "total": len(self.checks),
                "failed": len(self.failures()),
            },
            "checks": [c.to_dict() for c in self.checks],
        }


def _witness(x: Element, where: str) -> dict:
    return {"where": where, "rep": list(x.rep), "coords": list(x.coords)}


def _check_identities(report: DiagramReport, identities) -> None:
    for ident in identities:
        ok = ident.lhs == ident.rhs
        w = None if ok else {"lhs": list(ident.lhs.rep), "rhs": list(ident.rhs.rep)}
        report.checks.append(Check("identity", ident.label, ok, w))


def _verify_sequence(spec: ExactSequenceSpec) -> DiagramReport:
    report = DiagramReport(spec.name)
    for i in range(1, len(spec.nodes) - 1):
        res = exact_at(spec.arrows[i - 1].hom, spec.arrows[i].hom)
        node = spec.nodes[i]
        w = None if res.ok else _witness(res.witness, node.label)
        report.checks.append(Check("exactness", node.label, res.ok, w, res.reason))
    _check_identities(report, spec.identities)
    return report


def _verify_ladder(spec: LadderSpec) -> DiagramReport:
    report = DiagramReport(spec.name)
    report.extend(_verify_sequence(spec.left))
    report.extend(_verify_sequence(spec.right))
    for i, rung in enumerate(spec.rungs):
        ok = rung.hom.is_isomorphism()
        report.checks.append(Check("isomorphism", rung.label, ok))
    for i in range(len(spec.rungs) - 1):
        down_left = spec.left.arrows[i].hom
        down_right = spec.right.arrows[i].hom
        top, bottom = spec.rungs[i].hom, spec.rungs[i + 1].hom
        label = "%s / %s" % (spec.left.arrows[i].label, spec.right.arrows[i].label)
        bad = None
        for g in down_left.src.gens():
            if bottom(down_left(g)) != down_right(top(g)):
                bad = g
                break
        w = None if bad is None else _witness(bad, spec.left.nodes[i].label)
        report.checks.append(Check("commutativity", label, bad is None, w))
    _check_identities(report, spec.identities)
    return report


def verify(spec) -> DiagramReport:
    """Check exactness, commutativity, rung isomorphisms and marked identities.

    Failures are recorded in the report with a witness element, never raised.
    """
    if isinstance(spec, LadderSpec):
        return _verify_ladder(spec)
    return _verify_sequence(spec)


# -- the concrete diagrams ---------------------------------------------------


_ZERO = FgAbGroup.free(0)


def _capped(name, inner_nodes, inner_arrows, identities=()) -> ExactSequenceSpec:
    first, last = inner_nodes[0].group, inner_nodes[-1].group
    nodes = (Node("0", _ZERO),) + tuple(inner_nodes) + (Node("0'", _ZERO),)
    arrows = (
        (Arrow("0 -> %s" % inner_nodes[0].label, zero_hom(_ZERO, first)),)
        + tuple(inner_arrows)
        + (Arrow("%s -> 0" % inner_nodes[-1].label, zero_hom(last, _ZERO)),)
    )
    return ExactSequenceSpec(name, nodes, arrows, tuple(identities))


def build_6termA(A) -> ExactSequenceSpec:
    """``0 -> Ker(I-A_hat)/i_1(Z) -> Ker(I-A) -> Z -> Z^N/(I-A_hat) -> Z^N/(I-A) -> 0``."""
    A = ckalg._ck(A)
    g = ckalg.groups(A)
    ijs = ckalg.maps_ijs(A)
    nodes = [
        Node("Ker(I-A_hat)/i1(Z)", g.ker_Ahat_mod_i1.group),
        Node("Ker(I-A)", g.ker_A),
        Node("Z", g.Z),
        Node("Z^N/(I-A_hat)", g.coker_Ahat),
        Node("Z^N/(I-A)", g.coker_A),
    ]
    arrows = [
        Arrow("j_A", ijs.j_A),
        Arrow("s_A", ijs.s_A),
        Arrow("iota_hat_A", ckalg.iota_hat_hom(A)),
        Arrow("q_hat_A", ckalg.q_hat_hom(A)),
    ]
    return _capped("6termA", nodes, arrows)


def build_sixtermA1(A) -> ExactSequenceSpec:
    """``0 -> Ker(s_A) -> Ker(I-A) -> Z -> Z^{N+1}/(I-A_1) -> Z^N/(I-A) -> 0``.

    Carries the identity ``iota_A1(1) = [e_0]``, evaluated through the arrow so
    a corrupted arrow shows up there as well.
    """
    A = ckalg._ck(A)
    g = ckalg.groups(A)
    ijs = ckalg.maps_ijs(A)
    a1 = ckalg.maps_A1(A)
    n = g.A.nrows
    nodes = [
        Node("Ker(s_A)", g.ker_sA),
        Node("Ker(I-A)", g.ker_A),
        Node("Z", g.Z),
        Node("Z^{N+1}/(I-A_1)", g.coker_A1),
        Node("Z^N/(I-A)", g.coker_A),
    ]
    arrows = [
        Arrow("iota_sA", a1.iota_sA),
        Arrow("s_A", ijs.s_A),
        Arrow("iota_A1", a1.iota_A1),
        Arrow("q_A1", a1.q_A1),
    ]
    spec = _capped("sixtermA1", nodes, arrows)
    iota = spec.arrows[3].hom
    e0 = g.coker_A1.element((1,) + (0,) * n)
    ident = MarkedIdentity("iota_A1(1) = [e_0]", iota(g.Z.element((1,))), e0)
    return replace(spec, identities=(ident,))


def _ladder_identities(left: ExactSequenceSpec, right: ExactSequenceSpec, xi: GroupHom, g) -> tuple:
    n = g.A.nrows
    one = g.Z.element((1,))
    ones_n = g.coker_Ahat.element((1,) * n)
    ones_n1 = g.coker_A1.element((1,) * (n + 1))
    iota_hat = left.arrows[3].hom
    q_A1 = right.arrows[4].hom
    return (
        MarkedIdentity("xi0(iota_hat(1) + [1_N]) = [1_{N+1}]", xi(iota_hat(one) + ones_n), ones_n1),
        MarkedIdentity("xi0([T_A]_s) = -[1_{N+1}]", xi(-iota_hat(one) - ones_n), -ones_n1),
        MarkedIdentity("q_A1(-[1_{N+1}]) = -[1_N]", q_A1(-ones_n1), g.coker_A.element((-1,) * n)),
    )


def build_ladder_xi(A, left: Optional[ExactSequenceSpec] = None, right: Optional[ExactSequenceSpec] = None) -> LadderSpec:
    """The commutative ladder from the 6termA sequence to the sixtermA1 sequence.

    Rungs: 0, xi0_tilde, identity, identity, xi0, identity, 0. Explicit
    ``left``/``right`` sequences may be supplied (used to test corrupted arrows).
    """
    A = ckalg._ck(A)
    g = ckalg.groups(A)
    left = left if left is not None else build_6termA(A)
    right = right if right is not None else build_sixtermA1(A)
    xi = ckalg.xi0(A).xi0
    rungs = (
        Arrow("0", zero_hom(_ZERO, _ZERO)),
        Arrow("xi0_tilde", ckalg.xi0_tilde(A)),
        Arrow("id Ker(I-A)", identity_hom(g.ker_A)),
        Arrow("id Z", identity_hom(g.Z)),
        Arrow("xi0", xi),
        Arrow("id Z^N/(I-A)", identity_hom(g.coker_A)),
        Arrow("0'", zero_hom(_ZERO, _ZERO)),
    )
    return LadderSpec("ladder_xi", left, right, rungs, _ladder_identities(left, right, xi, g))


def strong_duality_report(A) -> DiagramReport:
    """Every check for ``A`` and for ``A^t``; passes iff all of them pass."""
    A = ckalg._ck(A)
    report = DiagramReport("strong_duality")
    for tag, M in (("A", A), ("A^t", A.T)):
        for spec in (build_6termA(M), build_sixtermA1(M), build_ladder_xi(M)):
            sub = verify(spec)
            sub.name = "%s %s" % (tag, sub.name)
            report.extend(sub)
    return report
