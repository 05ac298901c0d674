"""Finitely generated abelian groups given by integer presentations.

A group is ``Z^n / R Z^m`` for a relation matrix ``R`` with ``n`` rows. It
keeps its ambient coordinates, so elements are stored as the integer vectors
one writes down by hand; the decomposition ``Z^r + Z/d_1 + ... + Z/d_k`` is a
derived view computed once at construction.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from functools import cached_property
from math import gcd, prod
from typing import Optional, Sequence

from .intmat import (
    IntMatrix,
    as_matrix,
    hnf_rows,
    inverse_unimodular,
    kernel_basis,
    snf,
    solve_in_column_lattice,
)

DEFAULT_TORSION_BOUND = 10**6
DEFAULT_SEARCH_BUDGET = 2 * 10**5


class NotWellDefined(ValueError):
    """A matrix does not send source relations into target relations."""

    def __init__(self, column: int, message: str = ""):
        self.column = column
        super().__init__(message or "relation column %d is not mapped into the target relations" % column)


class NotInLattice(ValueError):
    def __init__(self, column: int):
        self.column = column
        super().__init__("column %d of the sublattice is not in the ambient lattice" % column)


class GroupMismatch(ValueError):
    pass


class FgAbGroup:
    """``Z^n`` modulo the column lattice of ``relations``."""

    def __init__(self, relations):
        relations = as_matrix(relations)
        self.relations = relations
        self.ambient_rank = relations.nrows
        sd = snf(relations)
        self._snf = sd
        n = self.ambient_rank
        rank = sd.rank
        diag = sd.divisors
        self.free_rank = n - rank
        self.torsion = tuple(d for d in diag if d > 1)
        torsion_rows = [i for i, d in enumerate(diag) if d > 1]
        free_rows = list(range(rank, n))
        self._coord_rows = free_rows + torsion_rows
        self.to_canonical = sd.S.submatrix(self._coord_rows, range(n))
        self.from_canonical = sd.S_inv.submatrix(range(n), self._coord_rows)

    @classmethod
    def free(cls, rank: int) -> "FgAbGroup":
        return cls(IntMatrix.zeros(rank, 0))

    @classmethod
    def from_invariants(cls, free_rank: int, torsion: Sequence[int] = ()) -> "FgAbGroup":
        """``Z^free_rank + Z/d_1 + ...`` presented on the standard generators."""
        n = free_rank + len(torsion)
        cols = []
        for i, d in enumerate(torsion):
            c = [0] * n
            c[free_rank + i] = d
            cols.append(c)
        return cls(IntMatrix.from_columns(cols, n))

    # -- canonical view ------------------------------------------------------

    @property
    def canonical(self) -> tuple:
        return (self.free_rank, self.torsion)

    @property
    def canonical_rank(self) -> int:
        return self.free_rank + len(self.torsion)

    def canonical_coords(self, vector: Sequence[int]) -> tuple:
        """Canonical coordinates of a coset; torsion coordinates reduced mod d_i."""
        w = self.to_canonical.apply(vector)
        r = self.free_rank
        return tuple(w[:r]) + tuple(x % d for x, d in zip(w[r:], self.torsion))

    def order(self) -> Optional[int]:
        """Number of elements, or None when infinite."""
        if self.free_rank:
            return None
        return prod(self.torsion)

    def torsion_order(self) -> int:
        return prod(self.torsion)

    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    # -- elements ------------------------------------------------------------

    def contains(self, vector: Sequence[int]) -> bool:
        """Whether an ambient vector lies in the relation lattice (is zero here)."""
        return solve_in_column_lattice(self.relations, vector, self._snf) is not None

    def element(self, vector: Sequence[int]) -> "Element":
        if len(vector) != self.ambient_rank:
            raise ValueError("vector of length %d in a group of ambient rank %d" % (len(vector), self.ambient_rank))
        return Element(self, tuple(int(x) for x in vector))

    def zero(self) -> "Element":
        return Element(self, (0,) * self.ambient_rank)

    def gens(self) -> list:
        n = self.ambient_rank
        return [Element(self, tuple(int(i == j) for j in range(n))) for i in range(n)]

    def from_canonical_coords(self, coords: Sequence[int]) -> "Element":
        return Element(self, self.from_canonical.apply(coords))

    def elements(self):
        """Iterate over all elements of a finite group (canonical order)."""
        if self.free_rank:
            raise ValueError("infinite group")
        for coords in itertools.product(*(range(d) for d in self.torsion)):
            yield self.from_canonical_coords(coords)

    # -- value semantics -----------------------------------------------------

    def __eq__(self, other) -> bool:
        if not isinstance(other, FgAbGroup):
            return NotImplemented
        return self.relations == other.relations

    def __hash__(self) -> int:
        return hash(self.relations)

    def describe(self) -> str:
        parts = ["Z"] * self.free_rank
        if self.free_rank > 1:
            parts = ["Z^%d" % self.free_rank]
        parts += ["Z/%d" % d for d in self.torsion]
        return " + ".join(parts) if parts else "0"

    def __repr__(self) -> str:
        return "FgAbGroup(%s)" % self.describe()


@dataclass(frozen=True, eq=False)
class Element:
    """A coset ``rep + R``; equality is coset equality."""

    group: FgAbGroup
    rep: tuple

    def _check(self, other: "Element") -> None:
        if self.group != other.group:
            raise GroupMismatch("elements of different groups")

    def __add__(self, other: "Element") -> "Element":
        self._check(other)
        return Element(self.group, tuple(a + b for a, b in zip(self.rep, other.rep)))

    def __sub__(self, other: "Element") -> "Element":
        self._check(other)
        return Element(self.group, tuple(a - b for a, b in zip(self.rep, other.rep)))

    def __neg__(self) -> "Element":
        return Element(self.group, tuple(-a for a in self.rep))

    def __mul__(self, k: int) -> "Element":
        return Element(self.group, tuple(k * a for a in self.rep))

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, Element):
            return NotImplemented
        return element_eq(self, other)

    def __hash__(self) -> int:
        return hash(self.coords)

    def is_zero(self) -> bool:
        return self.group.contains(self.rep)

    @property
    def coords(self) -> tuple:
        return self.group.canonical_coords(self.rep)

    def __repr__(self) -> str:
        return "Element(%s, rep=%s)" % (self.group.describe(), list(self.rep))


def element_eq(x: Element, y: Element) -> bool:
    x._check(y)
    return x.group.contains(tuple(a - b for a, b in zip(x.rep, y.rep)))


def cokernel(R) -> FgAbGroup:
    return FgAbGroup(R)


# -- subgroups ---------------------------------------------------------------


def _stack(group: FgAbGroup, vectors: Sequence[Sequence[int]]) -> IntMatrix:
    gens = IntMatrix.from_columns(list(vectors), group.ambient_rank)
    return gens.hstack(group.relations)


def in_subgroup(group: FgAbGroup, generators: Sequence[Element], x: Element) -> bool:
    """Membership of ``x`` in the subgroup generated by ``generators``."""
    M = _stack(group, [g.rep for g in generators])
    return solve_in_column_lattice(M, x.rep) is not None


class SubgroupTest:
    """Repeated membership tests against one subgroup, sharing a single reduction."""

    def __init__(self, group: FgAbGroup, generators: Sequence[Element]):
        self.matrix = _stack(group, [g.rep for g in generators])
        self._snf = snf(self.matrix)

    def __contains__(self, x: Element) -> bool:
        return solve_in_column_lattice(self.matrix, x.rep, self._snf) is not None


@dataclass(frozen=True)
class Subquotient:
    """``span(L) / span(S)`` presented in coordinates relative to the columns of L."""

    group: FgAbGroup
    basis: IntMatrix

    def embed(self, x: Element) -> tuple:
        """Ambient vector ``L c`` for an element with coordinates ``c``."""
        return self.basis.apply(x.rep)

    def coords(self, vector: Sequence[int]) -> tuple:
        c = solve_in_column_lattice(self.basis, vector)
        if c is None:
            raise ValueError("vector %s is not in the lattice" % (list(vector),))
        return c

    def element(self, vector: Sequence[int]) -> Element:
        return self.group.element(self.coords(vector))


def subquotient(L, S) -> Subquotient:
    L = as_matrix(L)
    S = as_matrix(S)
    if S.nrows != L.nrows:
        raise ValueError("L and S must live in the same ambient space")
    sd = snf(L)
    coords = []
    for j, col in enumerate(S.columns()):
        c = solve_in_column_lattice(L, col, sd)
        if c is None:
            raise NotInLattice(j)
        coords.append(c)
    a = L.ncols
    rel = IntMatrix.from_columns(coords, a).hstack(kernel_basis(L))
    return Subquotient(FgAbGroup(rel), L)


# -- homomorphisms -----------------------------------------------------------


class GroupHom:
    """Homomorphism given by a matrix on ambient coordinates."""

    def __init__(self, src: FgAbGroup, tgt: FgAbGroup, matrix):
        matrix = as_matrix(matrix)
        if matrix.shape != (tgt.ambient_rank, src.ambient_rank):
            raise ValueError(
                "matrix shape %s does not fit %d -> %d" % (matrix.shape, src.ambient_rank, tgt.ambient_rank)
            )
        self.src = src
        self.tgt = tgt
        self.matrix = matrix

    def bad_relation(self) -> Optional[int]:
        """Index of a source relation not sent into the target relations, if any."""
        for j, col in enumerate(self.src.relations.columns()):
            if not self.tgt.contains(self.matrix.apply(col)):
                return j
        return None

    def __call__(self, x: Element) -> Element:
        if x.group != self.src:
            raise GroupMismatch("element not in the source group")
        return Element(self.tgt, self.matrix.apply(x.rep))

    def compose(self, inner: "GroupHom") -> "GroupHom":
        """``self o inner``."""
        if inner.tgt != self.src:
            raise GroupMismatch("cannot compose: endpoints differ")
        return GroupHom(inner.src, self.tgt, self.matrix @ inner.matrix)

    def __matmul__(self, inner: "GroupHom") -> "GroupHom":
        return self.compose(inner)

    def __mul__(self, k: int) -> "GroupHom":
        return GroupHom(self.src, self.tgt, self.matrix * k)

    __rmul__ = __mul__

    def equals(self, other: "GroupHom") -> bool:
        """Equality as maps, checked on the ambient generators."""
        if self.src != other.src or self.tgt != other.tgt:
            return False
        return all(self(g) == other(g) for g in self.src.gens())

    def is_zero(self) -> bool:
        return all(self(g).is_zero() for g in self.src.gens())

    def is_injective(self) -> bool:
        return all(x.is_zero() for x in kernel(self))

    def is_surjective(self) -> bool:
        test = SubgroupTest(self.tgt, image(self))
        return all(g in test for g in self.tgt.gens())

    def is_isomorphism(self) -> bool:
        return self.is_injective() and self.is_surjective()

    def __repr__(self) -> str:
        return "GroupHom(%s -> %s, %r)" % (self.src.describe(), self.tgt.describe(), self.matrix.tolist())


def hom(src: FgAbGroup, tgt: FgAbGroup, matrix) -> GroupHom:
    """Build a homomorphism, checking that it is well defined."""
    h = GroupHom(src, tgt, matrix)
    bad = h.bad_relation()
    if bad is not None:
        raise NotWellDefined(bad)
    return h


def identity_hom(group: FgAbGroup) -> GroupHom:
    return GroupHom(group, group, IntMatrix.identity(group.ambient_rank))


def zero_hom(src: FgAbGroup, tgt: FgAbGroup) -> GroupHom:
    return GroupHom(src, tgt, IntMatrix.zeros(tgt.ambient_rank, src.ambient_rank))


def image(h: GroupHom) -> list:
    return [h(g) for g in h.src.gens()]


def kernel(h: GroupHom) -> list:
    """Generators of ``{x : h(x) = 0}``; the source relations are among their span."""
    n = h.src.ambient_rank
    K = kernel_basis(h.matrix.hstack(h.tgt.relations))
    gens = [h.src.element(col[:n]) for col in K.columns()]
    return gens


@dataclass(frozen=True)
class ExactnessResult:
    ok: bool
    witness: Optional[Element] = None
    reason: str = ""


def exact_at(f: GroupHom, g: GroupHom) -> ExactnessResult:
    """Exactness of ``src(f) -f-> G -g-> tgt(g)`` at the middle group."""
    if f.tgt != g.src:
        raise GroupMismatch("f does not land where g starts")
    img = image(f)
    for y in img:
        if not g(y).is_zero():
            return ExactnessResult(False, y, "image element not in kernel")
    test = SubgroupTest(f.tgt, img)
    for x in kernel(g):
        if x not in test:
            return ExactnessResult(False, x, "kernel element not in image")
    return ExactnessResult(True)


# -- pointed groups ----------------------------------------------------------


@dataclass(frozen=True)
class MarkedGroup:
    group: FgAbGroup
    marks: tuple = ()

    def __post_init__(self):
        for m in self.marks:
            if m.group != self.group:
                raise GroupMismatch("mark does not belong to the group")

    @classmethod
    def of(cls, group: FgAbGroup, *vectors) -> "MarkedGroup":
        return cls(group, tuple(group.element(v) for v in vectors))


class Verdict(str, enum.Enum):
    YES = "yes"
    NO = "no"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class Decision:
    verdict: Verdict
    witness: Optional[GroupHom] = None
    reason: str = ""

    def __bool__(self) -> bool:
        return self.verdict is Verdict.YES


def _canonical_matrix(group: FgAbGroup, marks: Sequence[Element]) -> IntMatrix:
    cols = [group.canonical_coords(m.rep) for m in marks]
    return IntMatrix.from_columns(cols, group.canonical_rank)


def _residual_solver(F: IntMatrix, torsion: Sequence[int], mark_ids: Sequence[int]):
    """Return a function deciding whether a residual lies in the reachable set.

    The reachable residuals on the marks ``mark_ids`` are the tuples
    ``(h f_j)_j`` for ``h`` ranging over homomorphisms from the free part into
    the torsion part; coordinate by coordinate this is the row span of F
    modulo d_l.
    """
    cols = list(mark_ids)
    k = len(cols)
    Fsub_T = IntMatrix([[F[i, j] for i in range(F.nrows)] for j in cols], F.nrows)
    systems = []
    for d in torsion:
        M = Fsub_T.hstack(IntMatrix.identity(k) * d)
        systems.append((M, snf(M)))

    def solve(residual_rows):
        # residual_rows[l][idx] = residual of mark cols[idx] in torsion coordinate l
        sol = []
        for (M, sd), rhs in zip(systems, residual_rows):
            x = solve_in_column_lattice(M, rhs, sd)
            if x is None:
                return None
            sol.append(x[: F.nrows])
        return sol

    return solve


def _order_dividing(d: int, torsion: Sequence[int]) -> list:
    """All canonical torsion vectors killed by ``d``."""
    ranges = []
    for dl in torsion:
        step = dl // gcd(dl, d)
        ranges.append(range(0, dl, step))
    return [tuple(v) for v in itertools.product(*ranges)]


def _subgroup_order(columns: Sequence[Sequence[int]], torsion: Sequence[int]) -> int:
    """Order of the subgroup of ``+ Z/d_l`` generated by the given vectors."""
    k = len(torsion)
    M = IntMatrix.from_columns(list(columns), k).hstack(IntMatrix.diag(list(torsion)))
    return prod(torsion) // prod(snf(M).divisors)


def pointed_iso_exists(
    a: MarkedGroup,
    b: MarkedGroup,
    torsion_bound: int = DEFAULT_TORSION_BOUND,
    search_budget: int = DEFAULT_SEARCH_BUDGET,
) -> Decision:
    """Decide whether some isomorphism carries the marks of ``a`` onto those of ``b`` in order.

    In canonical coordinates an automorphism of ``Z^r + T`` is block lower
    triangular: a unimodular ``P`` on the free part, an arbitrary hom ``H``
    from the free part into ``T``, and an automorphism ``psi`` of ``T``. The
    free parts of the marks must be related by some ``P``, which is decided by
    comparing Hermite forms. What remains is a search over ``psi`` for a
    torsion residual that ``H`` can absorb. The search is exhaustive, so the
    answer is exact unless ``|T|`` exceeds ``torsion_bound`` or the search
    visits more than ``search_budget`` partial assignments, in which case the
    verdict is UNKNOWN.
    """
    if len(a.marks) != len(b.marks):
        raise ValueError("mark counts differ: %d vs %d" % (len(a.marks), len(b.marks)))
    G, Gp = a.group, b.group
    if G.canonical != Gp.canonical:
        return Decision(Verdict.NO, reason="groups are not isomorphic: %s vs %s" % (G.describe(), Gp.describe()))
    r = G.free_rank
    torsion = G.torsion
    kt = len(torsion)
    k = len(a.marks)
    A = _canonical_matrix(G, a.marks)
    B = _canonical_matrix(Gp, b.marks)
    F = A.submatrix(range(r), range(k))
    Fp = B.submatrix(range(r), range(k))
    ha, hb = hnf_rows(F), hnf_rows(Fp)
    if ha.H != hb.H:
        return Decision(Verdict.NO, reason="free parts of the marks lie in different orbits")
    P = inverse_unimodular(hb.transform) @ ha.transform if r else IntMatrix.zeros(0, 0)

    t_src = [tuple(A[r + l, j] for l in range(kt)) for j in range(k)]
    t_tgt = [tuple(B[r + l, j] for l in range(kt)) for j in range(k)]

    if kt and prod(torsion) > torsion_bound:
        return Decision(Verdict.UNKNOWN, reason="torsion subgroup of order %d exceeds bound %d" % (prod(torsion), torsion_bound))

    # marks whose torsion part involves only generators 0..i are fully
    # determined once psi is fixed on those generators
    last_gen = [max((l for l in range(kt) if t_src[j][l] % torsion[l]), default=-1) for j in range(k)]
    checks = {}
    for i in range(-1, kt):
        done = [j for j in range(k) if last_gen[j] <= i]
        if done:
            checks[i] = (done, _residual_solver(F, torsion, done))

    def residual(psi_cols, marks):
        rows = []
        for l in range(kt):
            d = torsion[l]
            rows.append(
                [
                    (t_tgt[j][l] - sum(psi_cols[g][l] * t_src[j][g] for g in range(len(psi_cols)) if t_src[j][g])) % d
                    for j in marks
                ]
            )
        return rows

    full = list(range(k))
    candidates = [_order_dividing(d, torsion) for d in torsion]
    # try the identity image first so equal marks are found immediately
    for i, cands in enumerate(candidates):
        ident = tuple(int(l == i) for l in range(kt))
        cands.sort(key=lambda v: v != ident)

    budget = [search_budget]
    found = []

    def search(psi_cols):
        i = len(psi_cols) - 1
        if i in checks:
            marks, solve = checks[i]
            if solve(residual(psi_cols, marks)) is None:
                return False
        if len(psi_cols) == kt:
            found.append(list(psi_cols))
            return True
        for v in candidates[len(psi_cols)]:
            budget[0] -= 1
            if budget[0] < 0:
                return False
            trial = psi_cols + [v]
            if _subgroup_order(trial, torsion) != prod(torsion[: len(trial)]):
                continue
            if search(trial):
                return True
        return False

    search([])
    if not found:
        if budget[0] < 0:
            return Decision(Verdict.UNKNOWN, reason="automorphism search exceeded budget %d" % search_budget)
        return Decision(Verdict.NO, reason="no torsion automorphism matches the marks")

    psi_cols = found[0]
    H_rows = _residual_solver(F, torsion, full)(residual(psi_cols, full)) if kt else []
    n_can = r + kt
    phi = [[0] * n_can for _ in range(n_can)]
    for i in range(r):
        for j in range(r):
            phi[i][j] = P[i, j]
    for l in range(kt):
        for j in range(r):
            phi[r + l][j] = H_rows[l][j]
        for g in range(kt):
            phi[r + l][r + g] = psi_cols[g][l]
    Phi = IntMatrix(phi, n_can)
    ambient = Gp.from_canonical @ Phi @ G.to_canonical
    witness = hom(G, Gp, ambient)
    return Decision(Verdict.YES, witness=witness, reason="explicit isomorphism found")


def verify_witness(a: MarkedGroup, b: MarkedGroup, witness: GroupHom) -> bool:
    """Independent re-check of a YES witness."""
    if witness.bad_relation() is not None:
        return False
    if not witness.is_isomorphism():
        return False
    return all(witness(x) == y for x, y in zip(a.marks, b.marks))


def canonical_marked_display(m: MarkedGroup) -> dict:
    """Reporting form: free rank, torsion, and mark coordinates.

    Free parts of the marks are put into Hermite form, which fixes signs;
    torsion coordinates are reduced. Equal displays imply pointed
    isomorphism, but not conversely.
    """
    G = m.group
    r = G.free_rank
    k = len(m.marks)
    A = _canonical_matrix(G, m.marks)
    H = hnf_rows(A.submatrix(range(r), range(k))).H
    marks = []
    for j in range(k):
        free = [H[i, j] for i in range(r)]
        tors = [A[r + l, j] % d for l, d in enumerate(G.torsion)]
        marks.append(free + tors)
    return {"free_rank": r, "torsion": list(G.torsion), "marks": marks}
