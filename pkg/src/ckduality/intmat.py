"""Exact integer matrices and the lattice normal forms built on them.

Entries are plain Python ints, so nothing overflows. Matrices are immutable;
the reduction routines copy into nested lists and work in place there.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence


class IntMatrix:
    """Immutable rows x cols matrix of Python integers."""

    __slots__ = ("_rows", "nrows", "ncols")

    def __init__(self, rows: Iterable[Iterable[int]], ncols: Optional[int] = None):
        data = tuple(tuple(int(x) for x in row) for row in rows)
        if ncols is None:
            if not data:
                raise ValueError("ncols is required for a matrix with no rows")
            ncols = len(data[0])
        for row in data:
            if len(row) != ncols:
                raise ValueError("ragged rows: expected %d columns, got %d" % (ncols, len(row)))
        self._rows = data
        self.nrows = len(data)
        self.ncols = ncols

    # -- constructors --------------------------------------------------------

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> "IntMatrix":
        return cls([[0] * ncols for _ in range(nrows)], ncols)

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls([[int(i == j) for j in range(n)] for i in range(n)], n)

    @classmethod
    def diag(cls, entries: Sequence[int]) -> "IntMatrix":
        n = len(entries)
        return cls([[entries[i] if i == j else 0 for j in range(n)] for i in range(n)], n)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]], nrows: int) -> "IntMatrix":
        cols = [tuple(c) for c in columns]
        for c in cols:
            if len(c) != nrows:
                raise ValueError("column of length %d, expected %d" % (len(c), nrows))
        return cls([[c[i] for c in cols] for i in range(nrows)], len(cols))

    @classmethod
    def column(cls, vector: Sequence[int]) -> "IntMatrix":
        return cls([[x] for x in vector], 1)

    # -- access --------------------------------------------------------------

    @property
    def shape(self) -> tuple:
        return (self.nrows, self.ncols)

    def __getitem__(self, index):
        i, j = index
        return self._rows[i][j]

    def row(self, i: int) -> tuple:
        return self._rows[i]

    def col(self, j: int) -> tuple:
        return tuple(row[j] for row in self._rows)

    def rows(self) -> tuple:
        return self._rows

    def columns(self) -> list:
        return [self.col(j) for j in range(self.ncols)]

    def tolist(self) -> list:
        return [list(r) for r in self._rows]

    @property
    def T(self) -> "IntMatrix":
        return IntMatrix([[self._rows[i][j] for i in range(self.nrows)] for j in range(self.ncols)], self.nrows)

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "IntMatrix":
        return IntMatrix([[self._rows[i][j] for j in cols] for i in rows], len(cols))

    # -- arithmetic ----------------------------------------------------------

    def _check_same_shape(self, other: "IntMatrix") -> None:
        if self.shape != other.shape:
            raise ValueError("shape mismatch: %s vs %s" % (self.shape, other.shape))

    def __add__(self, other: "IntMatrix") -> "IntMatrix":
        self._check_same_shape(other)
        return IntMatrix([[a + b for a, b in zip(r, s)] for r, s in zip(self._rows, other._rows)], self.ncols)

    def __sub__(self, other: "IntMatrix") -> "IntMatrix":
        self._check_same_shape(other)
        return IntMatrix([[a - b for a, b in zip(r, s)] for r, s in zip(self._rows, other._rows)], self.ncols)

    def __neg__(self) -> "IntMatrix":
        return IntMatrix([[-a for a in r] for r in self._rows], self.ncols)

    def __mul__(self, k: int) -> "IntMatrix":
        return IntMatrix([[k * a for a in r] for r in self._rows], self.ncols)

    __rmul__ = __mul__

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.ncols != other.nrows:
            raise ValueError("cannot multiply %s by %s" % (self.shape, other.shape))
        cols = other.columns()
        return IntMatrix([[sum(a * b for a, b in zip(r, c)) for c in cols] for r in self._rows], other.ncols)

    def apply(self, vector: Sequence[int]) -> tuple:
        """Matrix-vector product, returned as a tuple."""
        if len(vector) != self.ncols:
            raise ValueError("vector of length %d for a matrix with %d columns" % (len(vector), self.ncols))
        return tuple(sum(a * b for a, b in zip(r, vector)) for r in self._rows)

    def hstack(self, other: "IntMatrix") -> "IntMatrix":
        if self.nrows != other.nrows:
            raise ValueError("hstack needs equal row counts")
        return IntMatrix([r + s for r, s in zip(self._rows, other._rows)], self.ncols + other.ncols)

    def vstack(self, other: "IntMatrix") -> "IntMatrix":
        if self.ncols != other.ncols:
            raise ValueError("vstack needs equal column counts")
        return IntMatrix(self._rows + other._rows, self.ncols)

    def block_diag(self, other: "IntMatrix") -> "IntMatrix":
        top = [list(r) + [0] * other.ncols for r in self._rows]
        bottom = [[0] * self.ncols + list(r) for r in other._rows]
        return IntMatrix(top + bottom, self.ncols + other.ncols)

    def is_zero(self) -> bool:
        return all(a == 0 for r in self._rows for a in r)

    def det(self) -> int:
        """Determinant by fraction-free Bareiss elimination."""
        n = self.nrows
        if n != self.ncols:
            raise ValueError("determinant of a non-square matrix")
        if n == 0:
            return 1
        a = self.tolist()
        sign, prev = 1, 1
        for k in range(n - 1):
            if a[k][k] == 0:
                for i in range(k + 1, n):
                    if a[i][k] != 0:
                        a[k], a[i] = a[i], a[k]
                        sign = -sign
                        break
                else:
                    return 0
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            prev = a[k][k]
        return sign * a[n - 1][n - 1]

    # -- value semantics -----------------------------------------------------

    def __eq__(self, other) -> bool:
        if not isinstance(other, IntMatrix):
            return NotImplemented
        return self.shape == other.shape and self._rows == other._rows

    def __hash__(self) -> int:
        return hash((self.shape, self._rows))

    def __repr__(self) -> str:
        return "IntMatrix(%r, ncols=%d)" % (self.tolist(), self.ncols)


def as_matrix(m) -> IntMatrix:
    return m if isinstance(m, IntMatrix) else IntMatrix(m)


# -- Smith normal form -------------------------------------------------------


@dataclass(frozen=True)
class SmithDecomposition:
    """``S @ M @ T == D`` with S, T unimodular and D in Smith form.

    ``S_inv`` is carried along because cokernel coordinates need a section.
    """

    S: IntMatrix
    D: IntMatrix
    T: IntMatrix
    S_inv: IntMatrix
    source_shape: tuple

    @property
    def diagonal(self) -> list:
        return [self.D[i, i] for i in range(min(self.D.shape))]

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d != 0)

    @property
    def divisors(self) -> list:
        """Nonzero diagonal entries (the invariant factors, units included)."""
        return [d for d in self.diagonal if d != 0]


def snf(M) -> SmithDecomposition:
    """Smith normal form with transforms.

    Elementary row/column reduction, pivoting on the smallest nonzero entry
    in absolute value.
    """
    M = as_matrix(M)
    m, n = M.shape
    a = M.tolist()
    S = [[int(i == j) for j in range(m)] for i in range(m)]
    S_inv = [[int(i == j) for j in range(m)] for i in range(m)]
    T = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        S[i], S[j] = S[j], S[i]
        for row in S_inv:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):
        # row_dst += q * row_src
        if q == 0:
            return
        ad, as_ = a[dst], a[src]
        for k in range(n):
            ad[k] += q * as_[k]
        sd, ss = S[dst], S[src]
        for k in range(m):
            sd[k] += q * ss[k]
        for row in S_inv:
            row[src] -= q * row[dst]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in T:
            row[i], row[j] = row[j], row[i]

    def add_col(dst, src, q):
        if q == 0:
            return
        for row in a:
            row[dst] += q * row[src]
        for row in T:
            row[dst] += q * row[src]

    for t in range(min(m, n)):
        best = None
        for i in range(t, m):
            for j in range(t, n):
                v = a[i][j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
        if best is None:
            break
        swap_rows(t, best[1])
        swap_cols(t, best[2])
        while True:
            p = a[t][t]
            dirty = False
            for i in range(t + 1, m):
                if a[i][t]:
                    add_row(i, t, -(a[i][t] // p))
                    if a[i][t]:
                        dirty = True
            for j in range(t + 1, n):
                if a[t][j]:
                    add_col(j, t, -(a[t][j] // p))
                    if a[t][j]:
                        dirty = True
            if dirty:
                # a remainder smaller than the pivot survived; move it to (t, t)
                best = None
                for i in range(t + 1, m):
                    if a[i][t] and (best is None or abs(a[i][t]) < best[0]):
                        best = (abs(a[i][t]), i, "r")
                for j in range(t + 1, n):
                    if a[t][j] and (best is None or abs(a[t][j]) < best[0]):
                        best = (abs(a[t][j]), j, "c")
                if best[2] == "r":
                    swap_rows(t, best[1])
                else:
                    swap_cols(t, best[1])
                continue
            bad = None
            for i in range(t + 1, m):
                for j in range(t + 1, n):
                    if a[i][j] % p:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            add_row(t, bad, 1)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            S[t] = [-x for x in S[t]]
            for row in S_inv:
                row[t] = -row[t]

    return SmithDecomposition(
        S=IntMatrix(S, m),
        D=IntMatrix(a, n),
        T=IntMatrix(T, n),
        S_inv=IntMatrix(S_inv, m),
        source_shape=(m, n),
    )


# -- Hermite normal form -----------------------------------------------------


@dataclass(frozen=True)
class HermiteForm:
    """``transform @ M == H``; H is the canonical row-echelon form."""

    H: IntMatrix
    transform: IntMatrix

    @property
    def rank(self) -> int:
        return sum(1 for r in self.H.rows() if any(r))


def hnf_rows(M) -> HermiteForm:
    """Row-style Hermite normal form.

    Pivots are positive, entries above a pivot lie in ``[0, pivot)`` and zero
    rows come last, so equal row lattices give byte-identical ``H``.
    """
    M = as_matrix(M)
    m, n = M.shape
    h = M.tolist()
    W = [[int(i == j) for j in range(m)] for i in range(m)]
    p = 0
    for j in range(n):
        if p == m:
            break
        while True:
            best = None
            for i in range(p, m):
                if h[i][j] and (best is None or abs(h[i][j]) < abs(h[best][j])):
                    best = i
            if best is None:
                break
            h[p], h[best] = h[best], h[p]
            W[p], W[best] = W[best], W[p]
            piv = h[p][j]
            done = True
            for i in range(p + 1, m):
                if h[i][j]:
                    q = h[i][j] // piv
                    h[i] = [x - q * y for x, y in zip(h[i], h[p])]
                    W[i] = [x - q * y for x, y in zip(W[i], W[p])]
                    if h[i][j]:
                        done = False
            if done:
                break
        if p < m and h[p][j]:
            if h[p][j] < 0:
                h[p] = [-x for x in h[p]]
                W[p] = [-x for x in W[p]]
            piv = h[p][j]
            for i in range(p):
                q = h[i][j] // piv
                if q:
                    h[i] = [x - q * y for x, y in zip(h[i], h[p])]
                    W[i] = [x - q * y for x, y in zip(W[i], W[p])]
            p += 1
    return HermiteForm(H=IntMatrix(h, n), transform=IntMatrix(W, m))


# -- lattices ----------------------------------------------------------------


def kernel_basis(M) -> IntMatrix:
    """Columns form a lattice basis of ``{x in Z^n : M x = 0}``."""
    M = as_matrix(M)
    n = M.ncols
    hf = hnf_rows(M.T)
    rank = hf.rank
    kernel_rows = [hf.transform.row(i) for i in range(rank, n)]
    if not kernel_rows:
        return IntMatrix.zeros(n, 0)
    # tidy the basis into its own echelon form; same lattice, smaller entries
    reduced = hnf_rows(IntMatrix(kernel_rows, n)).H
    return IntMatrix.from_columns(reduced.rows(), n)


def solve_in_column_lattice(M, b: Sequence[int], decomposition: Optional[SmithDecomposition] = None):
    """Integer ``x`` with ``M x == b``, or ``None`` if ``b`` is not in the column lattice.

    A precomputed ``snf(M)`` may be passed to skip the reduction.
    """
    M = as_matrix(M)
    if len(b) != M.nrows:
        raise ValueError("right-hand side has length %d, matrix has %d rows" % (len(b), M.nrows))
    sd = decomposition if decomposition is not None else snf(M)
    c = sd.S.apply(b)
    diag = sd.diagonal
    y = [0] * M.ncols
    for i, ci in enumerate(c):
        d = diag[i] if i < len(diag) else 0
        if d == 0:
            if ci != 0:
                return None
        else:
            if ci % d:
                return None
            y[i] = ci // d
    return sd.T.apply(y)


def in_column_lattice(M, b: Sequence[int], decomposition: Optional[SmithDecomposition] = None) -> bool:
    return solve_in_column_lattice(M, b, decomposition) is not None


def inverse_unimodular(M) -> IntMatrix:
    M = as_matrix(M)
    n = M.nrows
    if M.ncols != n or abs(M.det()) != 1:
        raise ValueError("matrix is not unimodular")
    sd = snf(M)
    cols = [solve_in_column_lattice(M, [int(i == j) for i in range(n)], sd) for j in range(n)]
    return IntMatrix.from_columns(cols, n)
