import random

import pytest

from ckduality.cli import all_valid, sample_valid
from ckduality.diagrams import (
    Arrow,
    ExactSequenceSpec,
    Node,
    build_6termA,
    build_ladder_xi,
    build_sixtermA1,
    strong_duality_report,
    verify,
)
from ckduality.fgab import cokernel, hom
from ckduality.reference_cases import MATRICES

import mutation
import oracles

F = [[1, 1], [1, 0]]
G = [[0, 0, 0, 1], [0, 0, 1, 1], [0, 1, 1, 0], [1, 0, 1, 1]]
SMALL = all_valid(2) + all_valid(3)


def test_6termA_for_F():
    report = verify(build_6termA(F))
    assert report.passed
    assert len(report.of_kind("exactness")) == 5


def test_sixtermA1_for_F_carries_unit_identity():
    report = verify(build_sixtermA1(F))
    assert report.passed
    assert [c.label for c in report.of_kind("identity")] == ["iota_A1(1) = [e_0]"]


def test_doubled_sum_map_breaks_exactness():
    spec = build_6termA(G)
    s = spec.arrows[2].hom
    assert not s.is_zero()
    report = verify(spec.with_arrow(2, s * 2))
    assert not report.passed
    bad = report.failures()[0]
    assert bad.kind == "exactness" and bad.witness is not None


def test_endpoints_are_checked():
    spec = build_6termA(F)
    with pytest.raises(ValueError):
        ExactSequenceSpec("broken", spec.nodes, spec.arrows[:-1])
    wrong = Arrow("wrong", spec.arrows[2].hom)
    with pytest.raises(ValueError):
        ExactSequenceSpec("broken", spec.nodes, (wrong,) + spec.arrows[1:])


def test_ladder_for_F_and_A_example():
    for M in (F, MATRICES["A"], [list(r) for r in zip(*MATRICES["A"])]):
        report = verify(build_ladder_xi(M))
        assert report.passed
        assert len(report.of_kind("commutativity")) == 6
        assert len(report.of_kind("isomorphism")) == 7


@pytest.mark.parametrize("M", SMALL, ids=lambda M: str(M.tolist()))
def test_ladder_and_report_on_small_corpus(M):
    assert verify(build_ladder_xi(M)).passed
    report = strong_duality_report(M)
    assert report.passed
    assert report.passed == strong_duality_report(M.T).passed


def test_report_on_random_larger_matrices():
    for n, seed in ((4, 10), (5, 11), (6, 12)):
        for M in sample_valid(n, 8, seed):
            assert strong_duality_report(M).passed


def test_report_serialises():
    doc = strong_duality_report(F).to_dict()
    assert doc["passed"] and doc["counts"]["failed"] == 0
    labels = [c["label"] for c in doc["checks"]]
    assert any("xi0([T_A]_s) = -[1_{N+1}]" in label for label in labels)
    assert any(label.startswith("A^t ") for label in labels)


def test_mutations_flip_reports():
    rng = random.Random(1)
    for M in rng.sample(SMALL, 30):
        for name, index, flipped in mutation.corrupted_reports(M):
            assert flipped, (M.tolist(), name, index)


def test_verify_agrees_with_brute_force_exactness():
    rng = random.Random(13)
    for _ in range(60):
        G1, G2, G3, f, g = oracles.exactness_instance(rng)
        A, B, C = (cokernel(X.R) for X in (G1, G2, G3))
        spec = ExactSequenceSpec(
            "random",
            (Node("G1", A), Node("G2", B), Node("G3", C)),
            (Arrow("f", hom(A, B, f)), Arrow("g", hom(B, C, g))),
        )
        assert verify(spec).passed == oracles.is_exact(G1, G2, G3, f, g)
