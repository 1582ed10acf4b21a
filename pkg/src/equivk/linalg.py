"""Exact integer linear algebra.

Everything downstream (representation-ring modules, localization, homology)
reduces to three primitives over the integers: Smith normal form with
unimodular transforms, membership of a vector in the column lattice of a
matrix, and feasibility of short exact sequences of finite p-modules via
Littlewood-Richardson positivity.  All arithmetic uses Python's native
arbitrary-precision integers; nothing here is ever floating point.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

Partition = tuple[int, ...]


def check_partition(parts: Iterable[int]) -> Partition:
    """Validate and freeze a partition (weakly decreasing, all parts >= 1)."""
    t = tuple(int(x) for x in parts)
    for x in t:
        if x < 1:
            raise ValueError(f"partition parts must be >= 1, got {x}")
    for a, b in zip(t, t[1:]):
        if a < b:
            raise ValueError(f"partition must be weakly decreasing, got {t}")
    return t


@dataclass(frozen=True)
class IntMatrix:
    """Immutable integer matrix, row-major."""

    rows: int
    cols: int
    entries: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.rows < 0 or self.cols < 0:
            raise ValueError("matrix dimensions must be nonnegative")
        if len(self.entries) != self.rows * self.cols:
            raise ValueError(
                f"expected {self.rows * self.cols} entries, got {len(self.entries)}"
            )

    @staticmethod
    def from_rows(rows: Sequence[Sequence[int]], cols: int | None = None) -> "IntMatrix":
        """Build from a list of rows; `cols` disambiguates the zero-row case."""
        nrows = len(rows)
        if nrows == 0:
            return IntMatrix(0, cols or 0, ())
        ncols = len(rows[0])
        for r in rows:
            if len(r) != ncols:
                raise ValueError("ragged rows")
        if cols is not None and cols != ncols:
            raise ValueError("cols mismatch")
        return IntMatrix(nrows, ncols, tuple(int(x) for row in rows for x in row))

    @staticmethod
    def from_cols(cols: Sequence[Sequence[int]], rows: int | None = None) -> "IntMatrix":
        """Build from a list of columns; `rows` disambiguates the empty case."""
        ncols = len(cols)
        if ncols == 0:
            return IntMatrix(rows or 0, 0, ())
        nrows = len(cols[0])
        for c in cols:
            if len(c) != nrows:
                raise ValueError("ragged columns")
        if rows is not None and rows != nrows:
            raise ValueError("rows mismatch")
        return IntMatrix(
            nrows, ncols, tuple(int(cols[j][i]) for i in range(nrows) for j in range(ncols))
        )

    @staticmethod
    def identity(n: int) -> "IntMatrix":
        return IntMatrix(n, n, tuple(1 if i == j else 0 for i in range(n) for j in range(n)))

    @staticmethod
    def zeros(rows: int, cols: int) -> "IntMatrix":
        return IntMatrix(rows, cols, (0,) * (rows * cols))

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError(ij)
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple[int, ...]:
        return self.entries[i * self.cols : (i + 1) * self.cols]

    def col(self, j: int) -> tuple[int, ...]:
        return tuple(self.entries[i * self.cols + j] for i in range(self.rows))

    def to_rows(self) -> list[list[int]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def transpose(self) -> "IntMatrix":
        return IntMatrix(
            self.cols,
            self.rows,
            tuple(self[i, j] for j in range(self.cols) for i in range(self.rows)),
        )

    def __add__(self, other: "IntMatrix") -> "IntMatrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape mismatch in addition")
        return IntMatrix(
            self.rows, self.cols, tuple(a + b for a, b in zip(self.entries, other.entries))
        )

    def __sub__(self, other: "IntMatrix") -> "IntMatrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape mismatch in subtraction")
        return IntMatrix(
            self.rows, self.cols, tuple(a - b for a, b in zip(self.entries, other.entries))
        )

    def __neg__(self) -> "IntMatrix":
        return IntMatrix(self.rows, self.cols, tuple(-a for a in self.entries))

    def scale(self, k: int) -> "IntMatrix":
        return IntMatrix(self.rows, self.cols, tuple(k * a for a in self.entries))

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        out = []
        for i in range(self.rows):
            ri = self.row(i)
            for j in range(other.cols):
                out.append(sum(ri[k] * other[k, j] for k in range(self.cols)))
        return IntMatrix(self.rows, other.cols, tuple(out))

    def apply(self, vec: Sequence[int]) -> tuple[int, ...]:
        """Matrix-vector product."""
        if len(vec) != self.cols:
            raise ValueError("vector length mismatch")
        return tuple(
            sum(self.row(i)[k] * vec[k] for k in range(self.cols)) for i in range(self.rows)
        )

    def hstack(self, other: "IntMatrix") -> "IntMatrix":
        if self.rows != other.rows:
            raise ValueError("row count mismatch in hstack")
        rows = [list(self.row(i)) + list(other.row(i)) for i in range(self.rows)]
        return IntMatrix.from_rows(rows, cols=self.cols + other.cols)

    def vstack(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.cols:
            raise ValueError("column count mismatch in vstack")
        return IntMatrix(self.rows + other.rows, self.cols, self.entries + other.entries)

    def block_diag(self, other: "IntMatrix") -> "IntMatrix":
        top = self.hstack(IntMatrix.zeros(self.rows, other.cols))
        bot = IntMatrix.zeros(other.rows, self.cols).hstack(other)
        return top.vstack(bot)

    def is_zero(self) -> bool:
        return all(a == 0 for a in self.entries)

    def __str__(self) -> str:
        if self.rows == 0 or self.cols == 0:
            return f"<{self.rows}x{self.cols}>"
        return "\n".join(" ".join(str(x) for x in self.row(i)) for i in range(self.rows))


@dataclass(frozen=True)
class SnfResult:
    """Smith normal form data: u @ a @ v == diag(d), u and v unimodular.

    d is nonnegative with trailing zeros and d[i] | d[i+1] along the nonzero
    prefix, which makes it the unique normal form of the input lattice.
    """

    d: tuple[int, ...]
    u: IntMatrix
    v: IntMatrix

    @property
    def rank(self) -> int:
        return sum(1 for x in self.d if x != 0)

    def diagonal_matrix(self, rows: int, cols: int) -> IntMatrix:
        out = [[0] * cols for _ in range(rows)]
        for i, x in enumerate(self.d):
            out[i][i] = x
        return IntMatrix.from_rows(out, cols=cols)


def _nearest_quotient(a: int, b: int) -> int:
    """Quotient q minimizing |a - q*b|, for b > 0."""
    return (a + b // 2) // b


def snf(a: IntMatrix) -> SnfResult:
    """Smith normal form with transforms.

    Pivoting picks the minimal-absolute-value entry of the remaining block and
    reduces its row and column completely before moving on; the pivot is then
    forced to divide the rest of the block so the divisibility chain holds.
    """
    m, n = a.rows, a.cols
    A = a.to_rows()
    U = IntMatrix.identity(m).to_rows()
    V = IntMatrix.identity(n).to_rows()

    def swap_rows(i: int, k: int) -> None:
        A[i], A[k] = A[k], A[i]
        U[i], U[k] = U[k], U[i]

    def swap_cols(j: int, k: int) -> None:
        for row in A:
            row[j], row[k] = row[k], row[j]
        for row in V:
            row[j], row[k] = row[k], row[j]

    def add_row(i: int, k: int, q: int) -> None:
        # row_i -= q * row_k
        A[i] = [x - q * y for x, y in zip(A[i], A[k])]
        U[i] = [x - q * y for x, y in zip(U[i], U[k])]

    def add_col(j: int, k: int, q: int) -> None:
        # col_j -= q * col_k
        for row in A:
            row[j] -= q * row[k]
        for row in V:
            row[j] -= q * row[k]

    def negate_row(i: int) -> None:
        A[i] = [-x for x in A[i]]
        U[i] = [-x for x in U[i]]

    limit = min(m, n)
    t = 0
    while t < limit:
        # Locate the minimal-absolute-value nonzero entry of the trailing block.
        best = None
        for i in range(t, m):
            for j in range(t, n):
                x = A[i][j]
                if x != 0 and (best is None or abs(x) < abs(A[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        while True:
            bi, bj = best
            if bi != t:
                swap_rows(t, bi)
            if bj != t:
                swap_cols(t, bj)
            if A[t][t] < 0:
                negate_row(t)
            pivot = A[t][t]
            # Reduce column t, then row t, by nearest multiples of the pivot.
            dirty = False
            for i in range(t + 1, m):
                if A[i][t] != 0:
                    q = _nearest_quotient(A[i][t], pivot)
                    add_row(i, t, q)
                    if A[i][t] != 0:
                        dirty = True
            if not dirty:
                for j in range(t + 1, n):
                    if A[t][j] != 0:
                        q = _nearest_quotient(A[t][j], pivot)
                        add_col(j, t, q)
                        if A[t][j] != 0:
                            dirty = True
            if not dirty:
                # Row and column are clear; force the pivot to divide the block.
                offender = None
                for i in range(t + 1, m):
                    for j in range(t + 1, n):
                        if A[i][j] % pivot != 0:
                            offender = i
                            break
                    if offender is not None:
                        break
                if offender is None:
                    break
                add_row(t, offender, -1)  # pulls the nondivisible entry into row t
            # Re-pick the smallest entry and iterate; its magnitude shrinks.
            best = (t, t)
            for i in range(t, m):
                for j in range(t, n):
                    x = A[i][j]
                    if x != 0 and abs(x) < abs(A[best[0]][best[1]]):
                        best = (i, j)
        t += 1

    d = tuple(A[i][i] for i in range(limit))
    return SnfResult(d=d, u=IntMatrix.from_rows(U, cols=m), v=IntMatrix.from_rows(V, cols=n))


def solve_membership(a: IntMatrix, b: Sequence[int]) -> tuple[int, ...] | None:
    """Solve a @ x == b over the integers, or return None if b is outside the
    column lattice of a."""
    if len(b) != a.rows:
        raise ValueError(f"rhs length {len(b)} != row count {a.rows}")
    res = snf(a)
    c = res.u.apply(b)
    y = [0] * a.cols
    for i in range(a.rows):
        di = res.d[i] if i < len(res.d) else 0
        if di == 0:
            if c[i] != 0:
                return None
        else:
            if c[i] % di != 0:
                return None
            y[i] = c[i] // di
    return res.v.apply(y)


def kernel_basis(a: IntMatrix) -> IntMatrix:
    """Basis of the integer kernel lattice {x : a @ x == 0}, as columns."""
    res = snf(a)
    cols = [res.v.col(j) for j in range(res.rank, a.cols)]
    return IntMatrix.from_cols(cols, rows=a.cols)


def lattice_contains(lattice: IntMatrix, vec: Sequence[int]) -> bool:
    """Is vec an integer combination of the columns of lattice?"""
    return solve_membership(lattice, vec) is not None


def _p_valuation(x: int, p: int) -> int:
    if x == 0:
        raise ValueError("valuation of 0")
    e = 0
    while x % p == 0:
        x //= p
        e += 1
    return e


def lattice_contains_p_local(lattice: IntMatrix, vec: Sequence[int], p: int) -> bool:
    """Membership in the column span after inverting all primes other than p.

    Equivalent to: some multiple k*vec with gcd(k, p) = 1 lies in the integer
    column lattice.
    """
    if len(vec) != lattice.rows:
        raise ValueError("vector length mismatch")
    res = snf(lattice)
    c = res.u.apply(vec)
    for i in range(lattice.rows):
        di = res.d[i] if i < len(res.d) else 0
        if di == 0:
            if c[i] != 0:
                return False
        elif c[i] != 0:
            need = _p_valuation(di, p)
            if need and c[i] % p**need != 0:
                return False
    return True


def lattice_contains_matrix(lattice: IntMatrix, mat: IntMatrix, p: int | None = None) -> bool:
    """Are all columns of mat in the column lattice (p-locally if p given)?"""
    for j in range(mat.cols):
        col = mat.col(j)
        ok = (
            lattice_contains_p_local(lattice, col, p)
            if p is not None
            else lattice_contains(lattice, col)
        )
        if not ok:
            return False
    return True


def lr_extension_feasible(mid: Partition, sub: Partition, quot: Partition) -> bool:
    """Does a finite p-module of type `mid` admit a submodule of type `sub`
    with quotient of type `quot`?

    Equivalent to positivity of the Littlewood-Richardson coefficient
    c^mid_{sub,quot}, decided by searching for one LR skew tableau of shape
    mid/sub and content quot (rows weakly increase, columns strictly
    increase, reverse reading word is a lattice word).  The answer does not
    depend on the prime.
    """
    mid = check_partition(mid)
    sub = check_partition(sub)
    quot = check_partition(quot)
    if sum(mid) != sum(sub) + sum(quot):
        return False
    if len(sub) > len(mid):
        return False
    padded_sub = sub + (0,) * (len(mid) - len(sub))
    if any(s > m for s, m in zip(padded_sub, mid)):
        return False
    if len(quot) > len(mid):
        return False

    # Cells in reverse reading order: rows top to bottom, right to left.
    cells = []
    for r, (m_r, s_r) in enumerate(zip(mid, padded_sub)):
        for c in range(m_r - 1, s_r - 1, -1):
            cells.append((r, c))
    nvals = len(quot)
    if not cells:
        return not quot
    if nvals == 0:
        return False

    fill: dict[tuple[int, int], int] = {}
    counts = [0] * nvals

    def place(idx: int) -> bool:
        if idx == len(cells):
            return True
        r, c = cells[idx]
        right = fill.get((r, c + 1))
        above = fill.get((r - 1, c))
        for v in range(1, nvals + 1):
            if counts[v - 1] >= quot[v - 1]:
                continue
            if v > 1 and counts[v - 2] <= counts[v - 1]:
                continue  # lattice word would break
            if right is not None and v > right:
                continue  # rows weakly increase left to right
            if above is not None and v <= above:
                continue  # columns strictly increase downward
            fill[(r, c)] = v
            counts[v - 1] += 1
            if place(idx + 1):
                return True
            counts[v - 1] -= 1
            del fill[(r, c)]
        return False

    return place(0)
