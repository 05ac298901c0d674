import random

import pytest

from ckduality.ckalg import a_one
from ckduality.fgab import (
    FgAbGroup,
    GroupHom,
    GroupMismatch,
    MarkedGroup,
    NotInLattice,
    NotWellDefined,
    Verdict,
    canonical_marked_display,
    cokernel,
    element_eq,
    exact_at,
    hom,
    identity_hom,
    image,
    kernel,
    pointed_iso_exists,
    subquotient,
    verify_witness,
    zero_hom,
)
from ckduality.intmat import IntMatrix

import oracles

A_82 = [[1, 1, 1], [1, 1, 1], [1, 0, 0]]


def identity_minus(M):
    n = len(M)
    return [[int(i == j) - M[i][j] for j in range(n)] for i in range(n)]


def test_cokernel_trivial():
    G = cokernel(identity_minus([[1, 1], [1, 0]]))
    assert G.free_rank == 0 and G.torsion == () and G.is_trivial()


def test_cokernel_of_bordered_matrices():
    # the groups carrying the two triples of the A / A^t example
    G = cokernel(IntMatrix.identity(4) - a_one(A_82))
    assert (G.free_rank, G.torsion) == (1, ())
    At = [list(r) for r in zip(*A_82)]
    H = cokernel(IntMatrix.identity(4) - a_one(At))
    assert (H.free_rank, H.torsion) == (1, (2,))


def test_cokernel_of_unbordered_matrix_is_small():
    assert cokernel(identity_minus(A_82)).canonical == (0, (2,))


def test_cokernel_orders_match_determinant():
    rng = random.Random(3)
    for _ in range(50):
        R = oracles.random_presentation(rng)
        assert cokernel(R).order() == abs(oracles.det(R))


def test_subquotient_trivial_when_equal():
    sq = subquotient([[1], [0]], [[1], [0]])
    assert sq.group.is_trivial()


def test_subquotient_full_lattice_is_cokernel():
    R = [[2, 1], [0, 3]]
    sq = subquotient(IntMatrix.identity(2), R)
    assert sq.group.canonical == cokernel(R).canonical


def test_subquotient_empty_sublattice_is_free():
    L = IntMatrix([[1, 0], [1, 1], [0, 2]])
    sq = subquotient(L, IntMatrix.zeros(3, 0))
    assert sq.group.canonical == (2, ())


def test_subquotient_rejects_outside_columns():
    with pytest.raises(NotInLattice) as info:
        subquotient([[2], [0]], [[2, 1], [0, 0]])
    assert info.value.column == 1


def test_element_equality():
    G = cokernel([[2, 0], [0, 3]])
    assert element_eq(G.element((1, 1)), G.element((1, 1)))
    assert G.element((1, 1)) == G.element((3, -2))
    assert G.element((1, 0)) != G.element((0, 0))
    assert hash(G.element((1, 1))) == hash(G.element((3, 4)))
    with pytest.raises(GroupMismatch):
        element_eq(G.element((1, 0)), cokernel([[2]]).element((1,)))


def test_hom_identity_and_not_well_defined():
    G = cokernel([[4]])
    assert hom(G, G, [[1]]).equals(identity_hom(G))
    with pytest.raises(NotWellDefined) as info:
        hom(cokernel([[2]]), FgAbGroup.free(1), [[1]])
    assert info.value.column == 0


def test_kernel_of_sum_map():
    s = GroupHom(FgAbGroup.free(2), FgAbGroup.free(1), [[1, 1]])
    gens = kernel(s)
    assert [x.rep for x in gens if not x.is_zero()] == [(1, -1)]
    assert [x.rep for x in image(s)] == [(1,), (1,)]


def test_image_of_zero_and_kernel_of_identity():
    G = cokernel([[6]])
    z = zero_hom(G, G)
    assert all(x.is_zero() for x in image(z))
    assert all(x.is_zero() for x in kernel(identity_hom(G)))


def test_exact_at_simple_sequences():
    Z = FgAbGroup.free(1)
    zero = FgAbGroup.free(0)
    assert exact_at(zero_hom(zero, Z), identity_hom(Z)).ok
    Z2 = cokernel([[2]])
    assert exact_at(GroupHom(Z, Z, [[2]]), GroupHom(Z, Z2, [[1]])).ok
    res = exact_at(GroupHom(Z, Z, [[4]]), GroupHom(Z, Z2, [[1]]))
    assert not res.ok
    # the witness is a kernel element outside the image 4Z
    assert res.witness.rep[0] % 2 == 0 and res.witness.rep[0] % 4 != 0


def test_exact_at_endpoint_mismatch():
    Z = FgAbGroup.free(1)
    with pytest.raises(GroupMismatch):
        exact_at(identity_hom(Z), identity_hom(cokernel([[2]])))


def test_pointed_iso_negation():
    Z = FgAbGroup.free(1)
    d = pointed_iso_exists(MarkedGroup.of(Z, (1,), (0,)), MarkedGroup.of(Z, (-1,), (0,)))
    assert d.verdict is Verdict.YES
    assert d.witness.matrix == IntMatrix([[-1]])


def test_pointed_iso_distinct_triples():
    Z = FgAbGroup.free(1)
    d = pointed_iso_exists(MarkedGroup.of(Z, (1,), (-2,)), MarkedGroup.of(Z, (1,), (0,)))
    assert d.verdict is Verdict.NO


def test_pointed_iso_mark_count_mismatch():
    Z = FgAbGroup.free(1)
    with pytest.raises(ValueError):
        pointed_iso_exists(MarkedGroup.of(Z, (1,)), MarkedGroup.of(Z, (1,), (1,)))


def test_pointed_iso_torsion_bound_gives_unknown():
    G = cokernel([[7, 0], [0, 7]])
    d = pointed_iso_exists(MarkedGroup.of(G, (1, 0)), MarkedGroup.of(G, (0, 1)), torsion_bound=10)
    assert d.verdict is Verdict.UNKNOWN


def test_pointed_iso_mixed_free_and_torsion():
    G = FgAbGroup.from_invariants(1, [2])
    a = MarkedGroup.of(G, (1, 0), (-1, 1))
    b = MarkedGroup.of(G, (1, 1), (-1, 0))
    d = pointed_iso_exists(a, b)
    assert d.verdict is Verdict.YES and verify_witness(a, b, d.witness)
    c = MarkedGroup.of(G, (1, 0), (-1, 0))
    assert pointed_iso_exists(a, c).verdict is Verdict.NO


def test_pointed_iso_random_automorphisms_of_mixed_groups():
    # marks pushed through a random automorphism of Z^r + T are always reachable
    rng = random.Random(11)
    for _ in range(40):
        r = rng.randint(0, 2)
        # a divisor chain d_1 | d_2
        chain = []
        for d in (rng.choice([2, 3, 4, 6]) for _ in range(rng.randint(0, 2))):
            chain.append(d if not chain else chain[-1] * d)
        if not r and not chain:
            r = 1
        G = FgAbGroup.from_invariants(r, chain)
        n = G.ambient_rank
        marks = [tuple(rng.randint(-4, 4) for _ in range(n)) for _ in range(rng.randint(1, 3))]
        # block lower-triangular automorphism [[P, 0], [H, 1]]
        P = oracles.random_unimodular(rng, r) if r else []
        auto = [[0] * n for _ in range(n)]
        for i in range(r):
            for j in range(r):
                auto[i][j] = P[i][j]
        for i in range(r, n):
            auto[i][i] = 1
            for j in range(r):
                auto[i][j] = rng.randint(-3, 3)
        phi = hom(G, G, auto)
        a = MarkedGroup.of(G, *marks)
        b = MarkedGroup(G, tuple(phi(x) for x in a.marks))
        d = pointed_iso_exists(a, b)
        assert d.verdict is Verdict.YES
        assert verify_witness(a, b, d.witness)


def test_pointed_iso_matches_brute_force():
    rng = random.Random(2024)
    seen = set()
    for _ in range(80):
        R, m, R2, m2 = oracles.pointed_iso_instance(rng)
        expected = oracles.pointed_iso(oracles.FiniteGroup(R), m, oracles.FiniteGroup(R2), m2)
        a = MarkedGroup.of(cokernel(R), *m)
        b = MarkedGroup.of(cokernel(R2), *m2)
        d = pointed_iso_exists(a, b)
        assert (d.verdict is Verdict.YES) == expected
        if expected:
            assert verify_witness(a, b, d.witness)
        seen.add(expected)
    assert seen == {True, False}


def test_pointed_iso_is_symmetric_and_reflexive():
    rng = random.Random(99)
    for _ in range(40):
        R, m, R2, m2 = oracles.pointed_iso_instance(rng)
        a = MarkedGroup.of(cokernel(R), *m)
        b = MarkedGroup.of(cokernel(R2), *m2)
        assert pointed_iso_exists(a, a).verdict is Verdict.YES
        assert pointed_iso_exists(a, b).verdict is pointed_iso_exists(b, a).verdict


def test_exact_at_matches_brute_force():
    rng = random.Random(7)
    outcomes = set()
    for _ in range(60):
        G1, G2, G3, f, g = oracles.exactness_instance(rng)
        A, B, C = (cokernel(X.R) for X in (G1, G2, G3))
        res = exact_at(hom(A, B, f), hom(B, C, g))
        expected = oracles.is_exact(G1, G2, G3, f, g)
        assert res.ok == expected
        outcomes.add(expected)
    assert outcomes == {True, False}


def test_display_examples():
    Z = FgAbGroup.free(1)
    shown = canonical_marked_display(MarkedGroup.of(Z, (-1,), (2,)))
    assert shown == {"free_rank": 1, "torsion": [], "marks": [[1], [-2]]}
    empty = canonical_marked_display(MarkedGroup(FgAbGroup.free(0), ()))
    assert empty == {"free_rank": 0, "torsion": [], "marks": []}


def test_finite_group_elements_enumeration():
    G = cokernel([[2, 1], [0, 3]])
    elems = list(G.elements())
    assert len(elems) == 6 == G.order()
    assert len(set(elems)) == 6
