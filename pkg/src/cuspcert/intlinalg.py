"""Exact integer linear algebra.

Everything here works on Python integers, so entries never overflow.  The
module provides a small immutable matrix type, Smith and Hermite normal
forms, Bareiss determinants and finite-index lattices of ``Z^N`` with an
integer membership solver.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import gcd
from typing import Iterable, Optional, Sequence

Vector = tuple[int, ...]


@dataclass(frozen=True)
class IntMatrix:
    """Dense integer matrix, stored row-major as a tuple of tuples."""

    rows: tuple[tuple[int, ...], ...]
    ncols: int

    def __init__(self, rows: Iterable[Iterable[int]], ncols: Optional[int] = None):
        data = tuple(tuple(int(x) for x in row) for row in rows)
        if ncols is None:
            if not data:
                raise ValueError("ncols is required for a matrix with no rows")
            ncols = len(data[0])
        if any(len(row) != ncols for row in data):
            raise ValueError("ragged rows")
        object.__setattr__(self, "rows", data)
        object.__setattr__(self, "ncols", ncols)

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(((1 if i == j else 0) for j in range(n)) for i in range(n))

    @classmethod
    def zeros(cls, m: int, n: int) -> "IntMatrix":
        return cls(((0,) * n for _ in range(m)), ncols=n)

    @classmethod
    def diag(cls, entries: Sequence[int]) -> "IntMatrix":
        n = len(entries)
        return cls(((entries[i] if i == j else 0) for j in range(n)) for i in range(n))

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]], nrows: Optional[int] = None) -> "IntMatrix":
        if not columns:
            if nrows is None:
                raise ValueError("nrows is required for a matrix with no columns")
            return cls((() for _ in range(nrows)), ncols=0)
        m = len(columns[0])
        return cls(((col[i] for col in columns) for i in range(m)), ncols=len(columns))

    def __getitem__(self, idx: tuple[int, int]) -> int:
        i, j = idx
        return self.rows[i][j]

    def column(self, j: int) -> Vector:
        return tuple(row[j] for row in self.rows)

    def columns(self) -> list[Vector]:
        return [self.column(j) for j in range(self.ncols)]

    @property
    def T(self) -> "IntMatrix":
        return IntMatrix(self.columns(), ncols=self.nrows)

    def __add__(self, other: "IntMatrix") -> "IntMatrix":
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")
        return IntMatrix(
            ((a + b for a, b in zip(r, s)) for r, s in zip(self.rows, other.rows)),
            ncols=self.ncols,
        )

    def __sub__(self, other: "IntMatrix") -> "IntMatrix":
        return self + other.scale(-1)

    def __neg__(self) -> "IntMatrix":
        return self.scale(-1)

    def scale(self, c: int) -> "IntMatrix":
        return IntMatrix(((c * x for x in row) for row in self.rows), ncols=self.ncols)

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.ncols != other.nrows:
            raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
        cols = other.columns()
        return IntMatrix(
            ((sum(a * b for a, b in zip(row, col)) for col in cols) for row in self.rows),
            ncols=other.ncols,
        )

    def apply(self, v: Sequence[int]) -> Vector:
        if len(v) != self.ncols:
            raise ValueError(f"vector of length {len(v)} for {self.shape} matrix")
        return tuple(sum(a * b for a, b in zip(row, v)) for row in self.rows)

    def is_square(self) -> bool:
        return self.nrows == self.ncols

    def tolist(self) -> list[list[int]]:
        return [list(row) for row in self.rows]

    def __repr__(self) -> str:
        return f"IntMatrix({self.tolist()})"


def determinant(M: IntMatrix) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    if not M.is_square():
        raise ValueError(f"determinant of non-square {M.shape} matrix")
    n = M.nrows
    if n == 0:
        return 1
    a = M.tolist()
    sign = 1
    prev = 1
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


@dataclass(frozen=True)
class SmithDecomposition:
    """``U @ M @ V == diag(d)`` with unimodular ``U`` and ``V``.

    ``d`` has length ``min(rows, cols)``; each entry divides the next and
    zeros sit at the tail.
    """

    U: IntMatrix
    V: IntMatrix
    d: tuple[int, ...]

    def diagonal_matrix(self, nrows: int, ncols: int) -> IntMatrix:
        return IntMatrix(
            ((self.d[i] if i == j else 0) for j in range(ncols)) for i in range(nrows)
        ) if nrows else IntMatrix.zeros(0, ncols)


def smith_normal_form(M: IntMatrix) -> SmithDecomposition:
    """Smith normal form with transforms, using smallest-magnitude pivots."""
    m, n = M.shape
    a = M.tolist()
    U = IntMatrix.identity(m).tolist()
    V = IntMatrix.identity(n).tolist()

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(src, dst, c):
        # row[dst] += c * row[src]
        a[dst] = [x + c * y for x, y in zip(a[dst], a[src])]
        U[dst] = [x + c * y for x, y in zip(U[dst], U[src])]

    def add_col(src, dst, c):
        for row in a:
            row[dst] += c * row[src]
        for row in V:
            row[dst] += c * row[src]

    for t in range(min(m, n)):
        while True:
            pivot = None
            for i in range(t, m):
                for j in range(t, n):
                    x = a[i][j]
                    if x and (pivot is None or abs(x) < abs(a[pivot[0]][pivot[1]])):
                        pivot = (i, j)
            if pivot is None:
                break
            swap_rows(t, pivot[0])
            swap_cols(t, pivot[1])
            p = a[t][t]
            done = True
            for i in range(t + 1, m):
                if a[i][t]:
                    add_row(t, i, -(a[i][t] // p))
                    done = done and a[i][t] == 0
            for j in range(t + 1, n):
                if a[t][j]:
                    add_col(t, j, -(a[t][j] // p))
                    done = done and a[t][j] == 0
            if not done:
                continue
            # pivot must divide the whole remaining block
            bad = next(
                (i for i in range(t + 1, m) for j in range(t + 1, n) if a[i][j] % p),
                None,
            )
            if bad is None:
                break
            add_row(bad, t, 1)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            U[t] = [-x for x in U[t]]
    d = tuple(a[i][i] for i in range(min(m, n)))
    return SmithDecomposition(IntMatrix(U, ncols=m), IntMatrix(V, ncols=n), d)


def invariant_factors(M: IntMatrix) -> tuple[int, ...]:
    return smith_normal_form(M).d


def hermite_normal_form(M: IntMatrix) -> tuple[IntMatrix, IntMatrix]:
    """Column-style Hermite form: returns ``(H, W)`` with ``M @ W == H``.

    ``H`` is lower echelon: the pivot of each nonzero column lies strictly
    below the pivot of the previous one, pivots are positive and entries to
    the left of a pivot are reduced modulo it.  ``W`` is unimodular.
    """
    m, n = M.shape
    # work on the transpose so column operations become row operations
    h = M.T.tolist()
    W = IntMatrix.identity(n).tolist()
    pivot_row = 0
    pivots = []
    for i in range(m):
        if pivot_row >= n:
            break
        while True:
            nz = [k for k in range(pivot_row, n) if h[k][i]]
            if not nz:
                break
            k = min(nz, key=lambda r: abs(h[r][i]))
            h[pivot_row], h[k] = h[k], h[pivot_row]
            W[pivot_row], W[k] = W[k], W[pivot_row]
            p = h[pivot_row][i]
            clean = True
            for r in range(pivot_row + 1, n):
                if h[r][i]:
                    c = h[r][i] // p
                    h[r] = [x - c * y for x, y in zip(h[r], h[pivot_row])]
                    W[r] = [x - c * y for x, y in zip(W[r], W[pivot_row])]
                    clean = clean and h[r][i] == 0
            if clean:
                break
        if not any(h[k][i] for k in range(pivot_row, n)):
            continue
        if h[pivot_row][i] < 0:
            h[pivot_row] = [-x for x in h[pivot_row]]
            W[pivot_row] = [-x for x in W[pivot_row]]
        p = h[pivot_row][i]
        for r in range(pivot_row):
            c = h[r][i] // p
            if c:
                h[r] = [x - c * y for x, y in zip(h[r], h[pivot_row])]
                W[r] = [x - c * y for x, y in zip(W[r], W[pivot_row])]
        pivots.append(i)
        pivot_row += 1
    H = IntMatrix(h, ncols=m).T if n else IntMatrix.zeros(m, 0)
    Wm = IntMatrix(W, ncols=n).T
    return H, Wm


def solve_integer(M: IntMatrix, v: Sequence[int]) -> Optional[Vector]:
    """Some integer ``x`` with ``M x = v``, or ``None`` if there is none."""
    if len(v) != M.nrows:
        raise ValueError("right-hand side has the wrong length")
    H, W = hermite_normal_form(M)
    pivots = []
    col = 0
    for i in range(H.nrows):
        if col < H.ncols and H[i, col] != 0:
            pivots.append(i)
            col += 1
    return _forward_substitute(H, W, pivots, v)


def rational_inverse(M: IntMatrix) -> list[list[Fraction]]:
    """Inverse over the rationals by Gauss-Jordan elimination."""
    if not M.is_square():
        raise ValueError("inverse of a non-square matrix")
    n = M.nrows
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(M.rows)]
    for c in range(n):
        p = next((r for r in range(c, n) if a[r][c] != 0), None)
        if p is None:
            raise ZeroDivisionError("singular matrix")
        a[c], a[p] = a[p], a[c]
        inv = 1 / a[c][c]
        a[c] = [x * inv for x in a[c]]
        for r in range(n):
            if r != c and a[r][c] != 0:
                f = a[r][c]
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    return [row[n:] for row in a]


def unimodular_inverse(M: IntMatrix) -> IntMatrix:
    inv = rational_inverse(M)
    if any(x.denominator != 1 for row in inv for x in row):
        raise ValueError("matrix is not unimodular")
    return IntMatrix((int(x) for x in row) for row in inv)


def _rank(M: IntMatrix) -> int:
    return sum(1 for d in smith_normal_form(M).d if d)


@dataclass(frozen=True)
class Lattice:
    """Sublattice of ``Z^N`` spanned by the columns of ``basis``."""

    basis: IntMatrix
    name: str = ""

    def __post_init__(self):
        N, r = self.basis.shape
        if r > N or _rank(self.basis) != r:
            raise ValueError("basis is not of full column rank")

    @classmethod
    def standard(cls, n: int, name: str = "") -> "Lattice":
        return cls(IntMatrix.identity(n), name or f"Z^{n}")

    @property
    def ambient_dim(self) -> int:
        return self.basis.nrows

    @property
    def rank(self) -> int:
        return self.basis.ncols

    @cached_property
    def _left_inverse(self) -> tuple[tuple[int, ...], tuple[tuple[int, ...], ...], int]:
        # rows picked so the square submatrix is invertible, then its inverse
        # scaled to integers by a common denominator
        N, r = self.basis.shape
        rows: list[int] = []
        for i in range(N):
            trial = IntMatrix([self.basis.rows[k] for k in rows + [i]], ncols=r)
            if _rank(trial) == len(rows) + 1:
                rows.append(i)
            if len(rows) == r:
                break
        sub = IntMatrix([self.basis.rows[k] for k in rows], ncols=r)
        inv = rational_inverse(sub)
        den = 1
        for row in inv:
            for x in row:
                den = den * x.denominator // gcd(den, x.denominator)
        P = tuple(tuple(int(x * den) for x in row) for row in inv)
        return tuple(rows), P, den

    def coordinates(self, v: Sequence[int]) -> Optional[Vector]:
        """Integer coordinates of ``v`` in the basis, ``None`` if ``v`` is not in the lattice."""
        if len(v) != self.ambient_dim:
            raise ValueError(f"vector of length {len(v)} in a lattice of ambient dimension {self.ambient_dim}")
        rows, P, den = self._left_inverse
        sub = [v[i] for i in rows]
        c = []
        for prow in P:
            num = sum(a * b for a, b in zip(prow, sub))
            if num % den:
                return None
            c.append(num // den)
        if self.basis.apply(c) != tuple(v):
            return None
        return tuple(c)

    def __contains__(self, v: Sequence[int]) -> bool:
        return self.coordinates(v) is not None

    def to_ambient(self, coords: Sequence[int]) -> Vector:
        return self.basis.apply(coords)

    def restrict(self, M: IntMatrix) -> IntMatrix:
        """Matrix of the ambient map ``M`` in basis coordinates.

        Raises ``ValueError`` when ``M`` does not map the lattice into itself.
        """
        if M.shape != (self.ambient_dim, self.ambient_dim):
            raise ValueError(f"{M.shape} map on a lattice in Z^{self.ambient_dim}")
        cols = []
        for b in self.basis.columns():
            c = self.coordinates(M.apply(b))
            if c is None:
                raise ValueError("map does not stabilize the lattice")
            cols.append(c)
        return IntMatrix.from_columns(cols, nrows=self.rank)

    def index_in_ambient(self) -> int:
        """Index in ``Z^N``; only finite for full rank lattices."""
        if self.rank != self.ambient_dim:
            raise ValueError("lattice is not of full rank")
        return abs(determinant(self.basis))


class LatticeSolver:
    """Repeated integer solves of ``M x = v`` inside a fixed lattice.

    The Hermite form of ``M`` in lattice coordinates is computed once.
    """

    def __init__(self, M: IntMatrix, L: Lattice):
        self.lattice = L
        self.matrix = L.restrict(M)
        self._H, self._W = hermite_normal_form(self.matrix)
        self._pivots = []
        col = 0
        for i in range(self._H.nrows):
            if col < self._H.ncols and self._H[i, col] != 0:
                self._pivots.append(i)
                col += 1

    def solve(self, v: Sequence[int]) -> Optional[Vector]:
        vc = self.lattice.coordinates(v)
        if vc is None:
            # M maps L into L, so targets outside L are unreachable
            return None
        xc = _forward_substitute(self._H, self._W, self._pivots, vc)
        return None if xc is None else self.lattice.to_ambient(xc)


def _forward_substitute(H: IntMatrix, W: IntMatrix, pivots: list[int], v: Sequence[int]) -> Optional[Vector]:
    residual = list(v)
    y = [0] * H.ncols
    for col, i in enumerate(pivots):
        if any(residual[k] for k in range(pivots[col - 1] + 1 if col else 0, i)):
            return None
        p = H[i, col]
        if residual[i] % p:
            return None
        c = residual[i] // p
        y[col] = c
        if c:
            for r in range(i, H.nrows):
                residual[r] -= c * H[r, col]
    if any(residual):
        return None
    return W.apply(y)


def solve_in_lattice(M: IntMatrix, v: Sequence[int], L: Lattice) -> Optional[Vector]:
    """Find ``x`` in ``L`` with ``M x = v``.

    ``M`` is an ambient endomorphism that must stabilize ``L``.  Returns the
    ambient vector ``x`` or ``None``.
    """
    return LatticeSolver(M, L).solve(v)


def integer_kernel(M: IntMatrix) -> list[Vector]:
    """Basis of ``{x in Z^n : M x = 0}``."""
    snf = smith_normal_form(M)
    n = M.ncols
    zero_cols = [j for j in range(n) if j >= len(snf.d) or snf.d[j] == 0]
    return [snf.V.column(j) for j in zero_cols]
