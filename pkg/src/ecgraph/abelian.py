"""Exact integer linear algebra for finitely generated abelian groups.

Everything is dense and uses Python integers, so there is no overflow.  The
Smith normal form keeps both transforms, which is what lets presented groups
map arbitrary ambient vectors to canonical coordinates.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from math import gcd
from typing import Iterable, Sequence


@dataclass(frozen=True)
class IntMatrix:
    rows: int
    cols: int
    entries: tuple[int, ...]

    def __post_init__(self):
        if len(self.entries) != self.rows * self.cols:
            raise ValueError(
                f"{len(self.entries)} entries for a {self.rows}x{self.cols} matrix"
            )

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: int | None = None) -> "IntMatrix":
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        if any(len(r) != cols for r in rows):
            raise ValueError("ragged rows")
        return cls(len(rows), cols, tuple(int(x) for r in rows for x in r))

    @classmethod
    def from_columns(cls, n: int, columns: Iterable[Sequence[int]]) -> "IntMatrix":
        columns = [list(c) for c in columns]
        if any(len(c) != n for c in columns):
            raise ValueError(f"columns must have length {n}")
        return cls.from_rows([[c[i] for c in columns] for i in range(n)], len(columns))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntMatrix":
        return cls(rows, cols, (0,) * (rows * cols))

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls.from_rows([[int(i == j) for j in range(n)] for i in range(n)], n)

    @classmethod
    def diagonal(cls, diag: Sequence[int], rows: int | None = None, cols: int | None = None):
        rows = len(diag) if rows is None else rows
        cols = len(diag) if cols is None else cols
        m = [[0] * cols for _ in range(rows)]
        for i, d in enumerate(diag):
            m[i][i] = d
        return cls.from_rows(m, cols)

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> list[int]:
        return list(self.entries[i * self.cols:(i + 1) * self.cols])

    def column(self, j: int) -> list[int]:
        return [self.entries[i * self.cols + j] for i in range(self.rows)]

    def tolist(self) -> list[list[int]]:
        return [self.row(i) for i in range(self.rows)]

    def columns(self) -> list[list[int]]:
        return [self.column(j) for j in range(self.cols)]

    @property
    def T(self) -> "IntMatrix":
        return IntMatrix.from_rows(self.columns(), self.rows)

    def __matmul__(self, other):
        if isinstance(other, IntMatrix):
            if self.cols != other.rows:
                raise ValueError("shape mismatch")
            a, b = self.tolist(), other.columns()
            return IntMatrix.from_rows(
                [[sum(x * y for x, y in zip(r, c)) for c in b] for r in a], other.cols
            )
        vec = list(other)
        if len(vec) != self.cols:
            raise ValueError("shape mismatch")
        return [sum(x * y for x, y in zip(self.row(i), vec)) for i in range(self.rows)]

    def hstack(self, other: "IntMatrix") -> "IntMatrix":
        if self.rows != other.rows:
            raise ValueError("row count mismatch")
        return IntMatrix.from_rows(
            [a + b for a, b in zip(self.tolist(), other.tolist())], self.cols + other.cols
        )

    def is_zero(self) -> bool:
        return not any(self.entries)

    def __repr__(self):
        return f"IntMatrix({self.tolist()!r})" if self.rows else f"IntMatrix(0x{self.cols})"


def block_diagonal(*blocks: IntMatrix) -> IntMatrix:
    rows = sum(b.rows for b in blocks)
    cols = sum(b.cols for b in blocks)
    m = [[0] * cols for _ in range(rows)]
    r0 = c0 = 0
    for b in blocks:
        for i in range(b.rows):
            for j in range(b.cols):
                m[r0 + i][c0 + j] = b[i, j]
        r0 += b.rows
        c0 += b.cols
    return IntMatrix.from_rows(m, cols)


@dataclass(frozen=True)
class FgAbelianGroup:
    """Z^rank ⊕ Z/d1 ⊕ ... ⊕ Z/dk with d1 | d2 | ... and every di >= 2."""

    rank: int = 0
    torsion: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "torsion", tuple(self.torsion))
        if self.rank < 0:
            raise ValueError("negative rank")
        for i, d in enumerate(self.torsion):
            if d < 2:
                raise ValueError(f"invariant factor {d} < 2")
            if i and d % self.torsion[i - 1]:
                raise ValueError(f"invariant factors {self.torsion} break the divisor chain")

    @classmethod
    def from_orders(cls, rank: int, orders: Iterable[int]) -> "FgAbelianGroup":
        """Canonicalize Z^rank ⊕ (⊕ Z/n) for arbitrary cyclic orders n >= 1."""
        orders = [abs(n) for n in orders]
        if any(n == 0 for n in orders):
            raise ValueError("use rank for infinite cyclic summands")
        snf = smith_normal_form(IntMatrix.diagonal(orders))
        return cls(rank, tuple(d for d in snf.diagonal if d > 1))

    def __add__(self, other: "FgAbelianGroup") -> "FgAbelianGroup":
        return FgAbelianGroup.from_orders(self.rank + other.rank, self.torsion + other.torsion)

    @property
    def is_trivial(self) -> bool:
        return self.rank == 0 and not self.torsion

    @property
    def order(self) -> int | None:
        if self.rank:
            return None
        n = 1
        for d in self.torsion:
            n *= d
        return n

    def descriptor(self) -> dict:
        return {"rank": self.rank, "torsion": list(self.torsion)}

    def __str__(self):
        parts = [f"Z/{d}" for d in self.torsion]
        if self.rank:
            parts.append("Z" if self.rank == 1 else f"Z^{self.rank}")
        return " + ".join(parts) if parts else "0"


@dataclass(frozen=True)
class SmithForm:
    U: IntMatrix
    D: IntMatrix
    V: IntMatrix

    @property
    def diagonal(self) -> list[int]:
        return [self.D[i, i] for i in range(min(self.D.rows, self.D.cols))]

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d)


def _pick_pivot(A, t):
    best = None
    for i in range(t, len(A)):
        row = A[i]
        for j in range(t, len(row)):
            x = row[j]
            if x and (best is None or abs(x) < best[0]):
                best = (abs(x), i, j)
                if best[0] == 1:
                    return best
    return best


def smith_normal_form(M: IntMatrix) -> SmithForm:
    """Return U, D, V with U·M·V = D, U and V unimodular, D a divisor chain.

    Pivots are the entries of least absolute value, ties broken by lowest
    row and then lowest column.
    """
    m, n = M.rows, M.cols
    A = M.tolist()
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap_rows(i, k):
        A[i], A[k] = A[k], A[i]
        U[i], U[k] = U[k], U[i]

    def swap_cols(j, k):
        for row in A:
            row[j], row[k] = row[k], row[j]
        for row in V:
            row[j], row[k] = row[k], row[j]

    def add_row(dst, src, q):  # row dst += q * row src
        if q:
            A[dst] = [a + q * b for a, b in zip(A[dst], A[src])]
            U[dst] = [a + q * b for a, b in zip(U[dst], U[src])]

    def add_col(dst, src, q):  # col dst += q * col src
        if q:
            for row in A:
                row[dst] += q * row[src]
            for row in V:
                row[dst] += q * row[src]

    t = 0
    while t < min(m, n):
        pivot = _pick_pivot(A, t)
        if pivot is None:
            break
        _, i, j = pivot
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            p = A[t][t]
            dirty = False
            for i in range(t + 1, m):
                if A[i][t]:
                    add_row(i, t, -(A[i][t] // p))
                    dirty = dirty or A[i][t] != 0
            for j in range(t + 1, n):
                if A[t][j]:
                    add_col(j, t, -(A[t][j] // p))
                    dirty = dirty or A[t][j] != 0
            if not dirty:
                bad = next(
                    (i for i in range(t + 1, m) for j in range(t + 1, n) if A[i][j] % p),
                    None,
                )
                if bad is None:
                    break
                add_row(t, bad, 1)
            # a nonzero remainder is smaller than the pivot, so re-pivoting terminates
            _, i, j = _pick_pivot(A, t)
            swap_rows(t, i)
            swap_cols(t, j)
        if A[t][t] < 0:
            A[t] = [-x for x in A[t]]
            U[t] = [-x for x in U[t]]
        t += 1
    return SmithForm(
        IntMatrix.from_rows(U, m), IntMatrix.from_rows(A, n), IntMatrix.from_rows(V, n)
    )


def kernel(M: IntMatrix) -> IntMatrix:
    """Basis (as columns) of the integer kernel {x : Mx = 0}."""
    snf = smith_normal_form(M)
    r = snf.rank
    return IntMatrix.from_columns(M.cols, [snf.V.column(j) for j in range(r, M.cols)])


def image_basis(gens: IntMatrix) -> tuple[IntMatrix, SmithForm]:
    """A basis of the lattice spanned by the columns of ``gens``."""
    snf = smith_normal_form(gens)
    span = gens @ snf.V
    r = snf.rank
    return IntMatrix.from_columns(gens.rows, [span.column(j) for j in range(r)]), snf


@dataclass(frozen=True)
class PresentedGroup:
    """The quotient Z^n / colspan(R), with canonical coordinates.

    Canonical coordinates list the torsion summands first (reduced modulo
    their orders) and then the free summands.
    """

    relations: IntMatrix
    smith: SmithForm = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "smith", smith_normal_form(self.relations))

    @property
    def ambient(self) -> int:
        return self.relations.rows

    @cached_property
    def _slots(self) -> list[tuple[int, int]]:
        # (row of U·x, modulus or 0 for free)
        diag = self.smith.diagonal
        out = [(i, d) for i, d in enumerate(diag) if d > 1]
        r = self.smith.rank
        out += [(i, 0) for i in range(r, self.ambient)]
        return out

    @cached_property
    def canonical(self) -> FgAbelianGroup:
        return FgAbelianGroup(
            sum(1 for _, d in self._slots if d == 0),
            tuple(d for _, d in self._slots if d),
        )

    def class_of(self, v: Sequence[int]) -> tuple[int, ...]:
        v = list(v)
        if len(v) != self.ambient:
            raise ValueError(f"expected a vector of length {self.ambient}, got {len(v)}")
        y = self.smith.U @ v
        return tuple(y[i] % d if d else y[i] for i, d in self._slots)

    def is_zero(self, v: Sequence[int]) -> bool:
        return not any(self.class_of(v))

    @classmethod
    def free(cls, n: int) -> "PresentedGroup":
        return cls(IntMatrix.zeros(n, 0))

    @classmethod
    def canonical_form(cls, group: FgAbelianGroup) -> "PresentedGroup":
        """The presentation whose ambient coordinates are already canonical."""
        t = len(group.torsion)
        return cls(IntMatrix.diagonal(group.torsion, t + group.rank, t))


def cokernel(M: IntMatrix) -> PresentedGroup:
    return PresentedGroup(M)


def class_of(G: PresentedGroup, v: Sequence[int]) -> tuple[int, ...]:
    return G.class_of(v)


def preimage_lattice(F: IntMatrix, B: PresentedGroup) -> IntMatrix:
    """Basis of {x : F x lies in the relation lattice of B} (columns)."""
    if F.rows != B.ambient:
        raise ValueError("map target does not match the presented group")
    stacked = kernel(F.hstack(B.relations))
    gens = IntMatrix.from_columns(F.cols, [c[: F.cols] for c in stacked.columns()])
    basis, _ = image_basis(gens)
    return basis


class NotWellDefined(ValueError):
    pass


def hom_kernel_cokernel(
    A: PresentedGroup, B: PresentedGroup, F: IntMatrix
) -> tuple[FgAbelianGroup, PresentedGroup]:
    """Kernel and cokernel of the map A -> B induced by the ambient matrix F."""
    if F.cols != A.ambient or F.rows != B.ambient:
        raise ValueError("map matrix has the wrong shape")
    for j, col in enumerate(A.relations.columns()):
        if not B.is_zero(F @ col):
            raise NotWellDefined(f"relation {j} of the source maps to a nonzero class")
    coker = PresentedGroup(F.hstack(B.relations))
    K = preimage_lattice(F, B)
    if K.cols == 0:
        return FgAbelianGroup(), coker
    # express the source relations in the basis of K, then take that quotient
    snf = smith_normal_form(K)
    d = snf.diagonal
    coords = []
    for col in A.relations.columns():
        y = snf.U @ col
        coords.append(snf.V @ [y[i] // d[i] for i in range(K.cols)])
    ker = PresentedGroup(IntMatrix.from_columns(K.cols, coords))
    return ker.canonical, coker


def determinant(M: IntMatrix) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    if M.rows != M.cols:
        raise ValueError("determinant of a non-square matrix")
    n = M.rows
    A = M.tolist()
    sign, prev = 1, 1
    for k in range(n - 1):
        if A[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if A[i][k]), None)
            if swap is None:
                return 0
            A[k], A[swap] = A[swap], A[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    return sign * A[n - 1][n - 1] if n else 1


def gcd_all(xs: Iterable[int]) -> int:
    g = 0
    for x in xs:
        g = gcd(g, x)
    return g
