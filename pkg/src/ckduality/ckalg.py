"""Invariants of Cuntz-Krieger algebras and their Toeplitz extensions.

Orientation: an input matrix ``A`` yields the groups of ``O_{A^t}`` and
``T_{A^t}``. Callers wanting ``T_M`` pass ``M.T``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import lru_cache

from .fgab import (
    Element,
    FgAbGroup,
    GroupHom,
    MarkedGroup,
    Subquotient,
    cokernel,
    hom,
    subquotient,
)
from .intmat import IntMatrix, as_matrix, kernel_basis, solve_in_column_lattice


class InvalidMatrix(ValueError):
    pass


class NotSquare(InvalidMatrix):
    pass


class NotZeroOne(InvalidMatrix):
    pass


class NotIrreducible(InvalidMatrix):
    def __init__(self, pair):
        self.pair = pair
        super().__init__("matrix is not irreducible: no path from %d to %d" % pair)


class IsPermutation(InvalidMatrix):
    pass


class InternalConsistencyError(AssertionError):
    """An identity that must hold for every valid matrix failed."""


@dataclass(frozen=True)
class CKMatrix:
    matrix: IntMatrix

    @property
    def n(self) -> int:
        return self.matrix.nrows

    @property
    def T(self) -> "CKMatrix":
        return CKMatrix(self.matrix.T)

    def tolist(self) -> list:
        return self.matrix.tolist()


def _unreachable_pair(M: IntMatrix):
    """A pair (i, j) with no path of positive length from i to j, or None."""
    n = M.nrows
    succ = [[j for j in range(n) if M[i, j]] for i in range(n)]
    for start in range(n):
        seen = set()
        queue = deque(succ[start])
        seen.update(succ[start])
        while queue:
            v = queue.popleft()
            for w in succ[v]:
                if w not in seen:
                    seen.add(w)
                    queue.append(w)
        for j in range(n):
            if j not in seen:
                return (start, j)
    return None


def validate(M) -> CKMatrix:
    """Check a square 0-1 matrix is irreducible and not a permutation.

    Irreducible here means every vertex reaches every vertex, itself included,
    by a path of positive length; so ``[[0]]`` is rejected.
    """
    M = as_matrix(M)
    if M.nrows != M.ncols or M.nrows == 0:
        raise NotSquare("matrix must be square and nonempty, got shape %s" % (M.shape,))
    if any(x not in (0, 1) for row in M.rows() for x in row):
        raise NotZeroOne("entries must be 0 or 1")
    pair = _unreachable_pair(M)
    if pair is not None:
        raise NotIrreducible(pair)
    if all(sum(row) == 1 for row in M.rows()) and all(sum(c) == 1 for c in M.columns()):
        raise IsPermutation("matrix is a permutation matrix")
    return CKMatrix(M)


def _ck(A) -> CKMatrix:
    return A if isinstance(A, CKMatrix) else validate(A)


def r_one(n: int) -> IntMatrix:
    """First row all ones, zeros elsewhere."""
    return IntMatrix([[1] * n] + [[0] * n for _ in range(n - 1)], n)


def a_hat(A) -> IntMatrix:
    A = _ck(A).matrix
    R1 = r_one(A.nrows)
    return A + R1 - A @ R1


def a_one(A) -> IntMatrix:
    A = _ck(A).matrix
    n = A.nrows
    rows = [[1] * (n + 1)] + [[0] + list(A.row(i)) for i in range(n)]
    return IntMatrix(rows, n + 1)


def _e(n: int, i: int) -> tuple:
    return tuple(int(j == i) for j in range(n))


@dataclass(frozen=True)
class _Groups:
    """Every group attached to one matrix, built once."""

    A: IntMatrix
    I_A: IntMatrix
    I_Ahat: IntMatrix
    I_A1: IntMatrix
    Z: FgAbGroup
    coker_A: FgAbGroup
    coker_Ahat: FgAbGroup
    coker_A1: FgAbGroup
    ker_A_basis: IntMatrix
    ker_A: FgAbGroup
    ker_Ahat_basis: IntMatrix
    ker_Ahat: FgAbGroup
    ker_Ahat_mod_i1: Subquotient
    ker_sA_basis: IntMatrix
    ker_sA: FgAbGroup


@lru_cache(maxsize=4096)
def groups(A: CKMatrix) -> _Groups:
    M = A.matrix
    n = M.nrows
    I = IntMatrix.identity(n)
    I_A = I - M
    I_Ahat = I - a_hat(A)
    I_A1 = IntMatrix.identity(n + 1) - a_one(A)
    KA = kernel_basis(I_A)
    KAh = kernel_basis(I_Ahat)
    sA_on_basis = IntMatrix([[sum(col) for col in KA.columns()]], KA.ncols)
    KsA = kernel_basis(sA_on_basis)
    return _Groups(
        A=M,
        I_A=I_A,
        I_Ahat=I_Ahat,
        I_A1=I_A1,
        Z=FgAbGroup.free(1),
        coker_A=cokernel(I_A),
        coker_Ahat=cokernel(I_Ahat),
        coker_A1=cokernel(I_A1),
        ker_A_basis=KA,
        ker_A=FgAbGroup.free(KA.ncols),
        ker_Ahat_basis=KAh,
        ker_Ahat=FgAbGroup.free(KAh.ncols),
        ker_Ahat_mod_i1=subquotient(KAh, IntMatrix.column(_e(n, 0))),
        ker_sA_basis=KsA,
        ker_sA=FgAbGroup.free(KsA.ncols),
    )


def _coords_in(basis: IntMatrix, vectors) -> IntMatrix:
    """Matrix whose columns express ``vectors`` in the columns of ``basis``."""
    cols = []
    for v in vectors:
        c = solve_in_column_lattice(basis, v)
        if c is None:
            raise InternalConsistencyError("vector %s outside the expected lattice" % (list(v),))
        cols.append(c)
    return IntMatrix.from_columns(cols, basis.ncols)


def iota_hat(A, m: int = 1) -> Element:
    """``m`` mapped into ``Z^N/(I - A_hat)``: the class of ``(I - A)(m, 0, ..., 0)``."""
    g = groups(_ck(A))
    n = g.A.nrows
    k = (m,) + (0,) * (n - 1)
    return g.coker_Ahat.element(g.I_A.apply(k))


def iota_hat_of(A, k) -> Element:
    """The class of ``(I - A) k``; depends only on ``sum(k)``."""
    g = groups(_ck(A))
    return g.coker_Ahat.element(g.I_A.apply(k))


@dataclass(frozen=True)
class IJS:
    i1: GroupHom
    j_A: GroupHom
    s_A: GroupHom
    j_A_lifted: GroupHom


def _j_matrix(n: int) -> IntMatrix:
    # l -> (-(l_2 + ... + l_N), l_2, ..., l_N), which is I - R_1
    return IntMatrix.identity(n) - r_one(n)


def maps_ijs(A) -> IJS:
    """``i_1: Z -> Ker(I - A_hat)``, ``j_A`` on the quotient by ``i_1(Z)``, and ``s_A``.

    Kernel groups use coordinates relative to their lattice bases.
    ``j_A_lifted`` is ``j_A`` on ``Ker(I - A_hat)`` itself, before the quotient.
    """
    A = _ck(A)
    g = groups(A)
    n = g.A.nrows
    e1 = _e(n, 0)
    if any(g.I_Ahat.apply(e1)):
        raise InternalConsistencyError("e_1 is not in Ker(I - A_hat)")
    i1 = hom(g.Z, g.ker_Ahat, _coords_in(g.ker_Ahat_basis, [e1]))
    J = _j_matrix(n)
    j_cols = _coords_in(g.ker_A_basis, [J.apply(c) for c in g.ker_Ahat_basis.columns()])
    sq = g.ker_Ahat_mod_i1
    j_A = hom(sq.group, g.ker_A, j_cols)
    j_A_lifted = hom(g.ker_Ahat, g.ker_A, j_cols)
    s_A = hom(g.ker_A, g.Z, IntMatrix([[sum(c) for c in g.ker_A_basis.columns()]], g.ker_A_basis.ncols))
    if not (j_A_lifted @ i1).is_zero():
        raise InternalConsistencyError("j_A o i_1 is not zero")
    return IJS(i1=i1, j_A=j_A, s_A=s_A, j_A_lifted=j_A_lifted)


def iota_hat_hom(A) -> GroupHom:
    g = groups(_ck(A))
    n = g.A.nrows
    return hom(g.Z, g.coker_Ahat, IntMatrix.column(g.I_A.apply(_e(n, 0))))


def q_hat_hom(A) -> GroupHom:
    g = groups(_ck(A))
    return hom(g.coker_Ahat, g.coker_A, IntMatrix.identity(g.A.nrows))


@dataclass(frozen=True)
class A1Maps:
    iota_A1: GroupHom
    q_A1: GroupHom
    iota_sA: GroupHom


def maps_A1(A) -> A1Maps:
    A = _ck(A)
    g = groups(A)
    n = g.A.nrows
    col = (0,) + g.I_A.apply(_e(n, 0))
    iota_A1 = hom(g.Z, g.coker_A1, IntMatrix.column(col))
    drop_first = IntMatrix([[int(j == i + 1) for j in range(n + 1)] for i in range(n)], n + 1)
    q_A1 = hom(g.coker_A1, g.coker_A, drop_first)
    iota_sA = hom(g.ker_sA, g.ker_A, g.ker_sA_basis)
    if iota_A1(g.Z.element((1,))) != g.coker_A1.element(_e(n + 1, 0)):
        raise InternalConsistencyError("iota_A1(1) differs from [e_0]")
    return A1Maps(iota_A1=iota_A1, q_A1=q_A1, iota_sA=iota_sA)


def u_matrix(A) -> IntMatrix:
    M = _ck(A).matrix
    n = M.nrows
    U = IntMatrix.identity(n + 1).tolist()
    for i in range(n):
        U[i + 1][0] = int(i == 0) - M[i, 0]
    return IntMatrix(U, n + 1)


def v_matrix(n: int) -> IntMatrix:
    V = IntMatrix.identity(n + 1).tolist()
    V[0] = [int(j == 1) for j in range(n + 1)]
    V[1] = [-1, 0] + [-1] * (n - 1)
    return IntMatrix(V, n + 1)


@dataclass(frozen=True)
class Xi0:
    xi0: GroupHom
    U: IntMatrix
    V: IntMatrix


def xi0(A) -> Xi0:
    """The isomorphism ``Z^N/(I - A_hat) -> Z^{N+1}/(I - A_1)``, x -> (0, x).

    Also checks the conjugation ``U (I - A_1) V = 1 + (I - A_hat)`` and the
    unit identity; any failure raises InternalConsistencyError, which would
    mean the convention chosen for ``A_hat`` is wrong for this matrix.
    """
    A = _ck(A)
    g = groups(A)
    n = g.A.nrows
    U, V = u_matrix(A), v_matrix(n)
    if abs(U.det()) != 1 or abs(V.det()) != 1:
        raise InternalConsistencyError("U or V is not unimodular")
    expected = IntMatrix.identity(1).block_diag(g.I_Ahat)
    if U @ g.I_A1 @ V != expected:
        raise InternalConsistencyError("U (I - A_1) V != 1 + (I - A_hat)")
    embed = IntMatrix([[0] * n] + IntMatrix.identity(n).tolist(), n)
    try:
        x = hom(g.coker_Ahat, g.coker_A1, embed)
    except ValueError as exc:
        raise InternalConsistencyError("xi0 is not well defined: %s" % exc) from exc
    if not x.is_isomorphism():
        raise InternalConsistencyError("xi0 is not an isomorphism")
    ones_n = g.coker_Ahat.element((1,) * n)
    if x(iota_hat(A, 1) + ones_n) != g.coker_A1.element((1,) * (n + 1)):
        raise InternalConsistencyError("xi0(iota_hat(1) + [1_N]) != [1_{N+1}]")
    return Xi0(xi0=x, U=U, V=V)


def xi0_tilde(A) -> GroupHom:
    """``Ker(I - A_hat)/i_1(Z) -> Ker(s_A)`` induced by ``j_A``."""
    A = _ck(A)
    g = groups(A)
    n = g.A.nrows
    J = _j_matrix(n)
    vectors = [J.apply(c) for c in g.ker_Ahat_basis.columns()]
    in_kerA = _coords_in(g.ker_A_basis, vectors)
    cols = _coords_in(g.ker_sA_basis, in_kerA.columns())
    return hom(g.ker_Ahat_mod_i1.group, g.ker_sA, cols)


@dataclass(frozen=True)
class CKInvariants:
    """Invariants of ``O_{A^t}`` and ``T_{A^t}`` computed from ``A``."""

    ext_w: MarkedGroup
    ext_s: MarkedGroup
    k0_toeplitz: MarkedGroup
    k1_toeplitz: FgAbGroup
    k0_ck: MarkedGroup
    k1_ck: FgAbGroup


def toeplitz_class_strong(A) -> Element:
    """``[T_A]_s`` as the class of ``-(I - A) e_1 - 1_N``."""
    g = groups(_ck(A))
    n = g.A.nrows
    rep = tuple(-x - 1 for x in g.I_A.apply(_e(n, 0)))
    return g.coker_Ahat.element(rep)


def invariants(A) -> CKInvariants:
    A = _ck(A)
    g = groups(A)
    n = g.A.nrows
    ones = (1,) * n
    return CKInvariants(
        ext_w=MarkedGroup.of(g.coker_A, tuple(-1 for _ in ones)),
        ext_s=MarkedGroup(g.coker_Ahat, (toeplitz_class_strong(A),)),
        k0_toeplitz=MarkedGroup.of(g.coker_A1, _e(n + 1, 0), (1,) * (n + 1)),
        k1_toeplitz=g.ker_sA,
        k0_ck=MarkedGroup.of(g.coker_A, ones),
        k1_ck=g.ker_A,
    )
