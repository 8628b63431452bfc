"""Exact linear algebra over Q and F_p.

Dense routines (``rref``, ``solve``, ``kernel_basis``, ``in_span_with_witness``)
work on :class:`Matrix`.  The transfer code builds large but very sparse
systems, so there are column-sparse counterparts that split a system into
connected components and run the dense routines on each block.  Splitting
does not change the answer: the pivot set of a block-diagonal matrix is the
union of the blocks' pivot sets, so the "free variables zero" solution is
the same one the dense solver would return.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

SparseVec = dict  # index -> nonzero field element


class Field:
    """Arithmetic context.  Elements are plain Python numbers."""

    name: str
    characteristic: int

    def __call__(self, x) -> object:
        raise NotImplementedError

    def inv(self, a):
        raise NotImplementedError

    def parse(self, text: str):
        raise NotImplementedError

    def format(self, a) -> str:
        raise NotImplementedError

    @property
    def zero(self):
        return self(0)

    @property
    def one(self):
        return self(1)


class Rationals(Field):
    name = "rational"
    characteristic = 0

    def __call__(self, x):
        if isinstance(x, str):
            return self.parse(x)
        return Fraction(x)

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return 1 / Fraction(a)

    def parse(self, text):
        return Fraction(text.strip())

    def format(self, a):
        a = Fraction(a)
        return str(a.numerator) if a.denominator == 1 else f"{a.numerator}/{a.denominator}"

    def __eq__(self, other):
        return isinstance(other, Rationals)

    def __hash__(self):
        return hash("Q")

    def __repr__(self):
        return "QQ"


class PrimeField(Field):
    def __init__(self, p: int):
        if p < 2 or any(p % q == 0 for q in range(2, int(p**0.5) + 1)):
            raise ValueError(f"{p} is not prime")
        self.p = p
        self.characteristic = p
        self.name = f"prime:{p}"

    def __call__(self, x):
        if isinstance(x, str):
            return self.parse(x)
        if isinstance(x, Fraction):
            return (x.numerator * pow(x.denominator, -1, self.p)) % self.p
        return int(x) % self.p

    def inv(self, a):
        a %= self.p
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(a, -1, self.p)

    def parse(self, text):
        return self(Fraction(text.strip()))

    def format(self, a):
        return str(int(a) % self.p)

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("GF", self.p))

    def __repr__(self):
        return f"GF({self.p})"


QQ = Rationals()


def GF(p: int) -> PrimeField:
    return PrimeField(p)


def field_from_name(name: str) -> Field:
    """``"rational"`` or ``"prime:p"``."""
    name = name.strip().lower()
    if name in ("rational", "q", "qq"):
        return QQ
    if name.startswith("prime:"):
        return GF(int(name.split(":", 1)[1]))
    raise ValueError(f"unknown field {name!r}")


@dataclass
class Matrix:
    """Dense matrix, stored row-major as a list of rows."""

    field: Field
    rows: list[list]
    ncols: int

    @classmethod
    def from_rows(cls, field: Field, rows: Sequence[Sequence], ncols: int | None = None) -> Matrix:
        rows = [[field(x) for x in r] for r in rows]
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        if any(len(r) != ncols for r in rows):
            raise ValueError("ragged matrix")
        return cls(field, rows, ncols)

    @classmethod
    def zeros(cls, field: Field, nrows: int, ncols: int) -> Matrix:
        z = field.zero
        return cls(field, [[z] * ncols for _ in range(nrows)], ncols)

    @classmethod
    def identity(cls, field: Field, n: int) -> Matrix:
        m = cls.zeros(field, n, n)
        for i in range(n):
            m.rows[i][i] = field.one
        return m

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def entries(self) -> list:
        return [x for r in self.rows for x in r]

    def column(self, j: int) -> list:
        return [r[j] for r in self.rows]

    def hstack(self, other: Matrix) -> Matrix:
        if self.nrows != other.nrows:
            raise ValueError("row counts differ")
        return Matrix(self.field, [a + b for a, b in zip(self.rows, other.rows)], self.ncols + other.ncols)

    def __matmul__(self, other):
        F = self.field
        if isinstance(other, Matrix):
            if self.ncols != other.nrows:
                raise ValueError("shape mismatch")
            cols = list(zip(*other.rows)) if other.rows else [()] * other.ncols
            return Matrix(F, [[F(sum(a * b for a, b in zip(r, c))) for c in cols] for r in self.rows], other.ncols)
        v = list(other)
        if len(v) != self.ncols:
            raise ValueError("shape mismatch")
        return [F(sum(a * b for a, b in zip(r, v))) for r in self.rows]

    def __eq__(self, other):
        return isinstance(other, Matrix) and self.ncols == other.ncols and self.rows == other.rows


def _column_order(ncols: int, order: Sequence[int] | None, reverse: bool) -> list[int]:
    if order is not None:
        return list(order)
    cols = list(range(ncols))
    return cols[::-1] if reverse else cols


def _eliminate(field: Field, rows: list[list], ncols: int, order: list[int], extra: list[list] | None = None):
    """Gauss-Jordan in place.  ``extra`` rows are carried along (same row ops).

    Returns the pivot columns in the order they were found.
    """
    nrows = len(rows)
    pivots: list[int] = []
    r = 0
    for c in order:
        if r == nrows:
            break
        p = next((i for i in range(r, nrows) if rows[i][c] != 0), None)
        if p is None:
            continue
        if p != r:
            rows[p], rows[r] = rows[r], rows[p]
            if extra is not None:
                extra[p], extra[r] = extra[r], extra[p]
        inv = field.inv(rows[r][c])
        if inv != 1:
            rows[r] = [field(x * inv) for x in rows[r]]
            if extra is not None:
                extra[r] = [field(x * inv) for x in extra[r]]
        prow = rows[r]
        pext = extra[r] if extra is not None else None
        for i in range(nrows):
            if i == r:
                continue
            a = rows[i][c]
            if a == 0:
                continue
            rows[i] = [field(x - a * y) for x, y in zip(rows[i], prow)]
            if pext is not None:
                extra[i] = [field(x - a * y) for x, y in zip(extra[i], pext)]
        pivots.append(c)
        r += 1
    return pivots


def rref(M: Matrix, order: Sequence[int] | None = None, reverse: bool = False) -> tuple[Matrix, list[int], Matrix]:
    """Reduced row echelon form ``R = T @ M`` with its pivot columns.

    Pivots are searched in ``order`` (default left to right).  With the
    default order the pivot list is strictly increasing.
    """
    F = M.field
    rows = [list(r) for r in M.rows]
    T = Matrix.identity(F, M.nrows)
    pivots = _eliminate(F, rows, M.ncols, _column_order(M.ncols, order, reverse), T.rows)
    return Matrix(F, rows, M.ncols), pivots, T


def rank(M: Matrix) -> int:
    return len(rref(M)[1])


def solve(M: Matrix, b: Sequence, order: Sequence[int] | None = None, reverse: bool = False) -> list | None:
    """One solution of ``M x = b`` with every free variable zero, or None."""
    F = M.field
    if len(b) != M.nrows:
        raise ValueError("right-hand side has wrong length")
    rows = [list(r) + [F(x)] for r, x in zip(M.rows, b)]
    pivots = _eliminate(F, rows, M.ncols + 1, _column_order(M.ncols, order, reverse))
    for r in rows[len(pivots):]:
        if r[-1] != 0:
            return None
    x = [F.zero] * M.ncols
    for r, c in enumerate(pivots):
        x[c] = rows[r][-1]
    return x


def kernel_basis(M: Matrix, order: Sequence[int] | None = None, reverse: bool = False) -> list[list]:
    """Echelon basis of ``ker M``: one vector per free column, that column set to 1."""
    F = M.field
    rows = [list(r) for r in M.rows]
    cols = _column_order(M.ncols, order, reverse)
    pivots = _eliminate(F, rows, M.ncols, cols)
    pivset = set(pivots)
    basis = []
    for j in cols:
        if j in pivset:
            continue
        v = [F.zero] * M.ncols
        v[j] = F.one
        for r, c in enumerate(pivots):
            v[c] = F(-rows[r][j])
        basis.append(v)
    return basis


def in_span_with_witness(b: Sequence, A: Matrix, B: Matrix, reverse: bool = False) -> tuple[list, list] | None:
    """Find ``x1, x2`` with ``A x1 + B x2 = b``, or None if b is not in the sum of column spaces."""
    if A.nrows != len(b) or B.nrows != len(b):
        raise ValueError("row counts differ from len(b)")
    x = solve(A.hstack(B), b, reverse=reverse)
    if x is None:
        return None
    return x[: A.ncols], x[A.ncols:]


# ---------------------------------------------------------------------------
# Column-sparse systems.  A matrix is a list of columns, each a dict row -> value.


def _components(columns: Sequence[SparseVec], rows_of_interest: Iterable | None = None):
    """Connected components of the row/column incidence graph.

    Yields ``(cols, rows)`` with both lists sorted.  With ``rows_of_interest``
    only components touching one of those rows are produced, plus a
    component ``([], [r])`` for each such row that no column touches.
    """
    parent: dict = {}

    def find(a):
        root = a
        while parent[root] != root:
            root = parent[root]
        while parent[a] != root:
            parent[a], a = root, parent[a]
        return root

    for j, col in enumerate(columns):
        cj = ("c", j)
        parent.setdefault(cj, cj)
        for i in col:
            ri = ("r", i)
            if ri not in parent:
                parent[ri] = ri
            a, b = find(cj), find(ri)
            if a != b:
                parent[b] = a

    if rows_of_interest is not None:
        wanted = set()
        for i in rows_of_interest:
            ri = ("r", i)
            if ri not in parent:
                parent[ri] = ri
            wanted.add(find(ri))
    else:
        wanted = None

    groups: dict = {}
    for node in parent:
        root = find(node)
        if wanted is not None and root not in wanted:
            continue
        g = groups.setdefault(root, ([], []))
        (g[0] if node[0] == "c" else g[1]).append(node[1])
    for cols, rows in groups.values():
        cols.sort()
        rows.sort(key=_sort_key)
        yield cols, rows


def _sort_key(x):
    return (0, x) if isinstance(x, int) else (1, repr(x))


def _dense_block(field: Field, columns, cols, rows):
    rix = {r: i for i, r in enumerate(rows)}
    M = [[field.zero] * len(cols) for _ in rows]
    for jj, j in enumerate(cols):
        for i, v in columns[j].items():
            M[rix[i]][jj] = v
    return Matrix(field, M, len(cols))


def sparse_solve(field: Field, columns: Sequence[SparseVec], b: SparseVec, reverse: bool = False) -> SparseVec | None:
    """Sparse ``solve``: returns {column: value} (zeros omitted) or None."""
    b = {i: v for i, v in b.items() if v != 0}
    x: SparseVec = {}
    for cols, rows in _components(columns, b.keys()):
        if not cols:
            return None
        M = _dense_block(field, columns, cols, rows)
        sol = solve(M, [b.get(r, field.zero) for r in rows], reverse=reverse)
        if sol is None:
            return None
        for j, v in zip(cols, sol):
            if v != 0:
                x[j] = v
    return x


def sparse_kernel_basis(field: Field, columns: Sequence[SparseVec], reverse: bool = False) -> list[SparseVec]:
    """Echelon kernel basis, assembled block by block; ordered by free column."""
    out: list[tuple[int, SparseVec]] = []
    for cols, rows in _components(columns):
        if not rows:
            for j in cols:
                out.append((j, {j: field.one}))
            continue
        M = _dense_block(field, columns, cols, rows)
        rows_ = [list(r) for r in M.rows]
        order = _column_order(len(cols), None, reverse)
        pivots = _eliminate(field, rows_, len(cols), order)
        pivset = set(pivots)
        for jj in order:
            if jj in pivset:
                continue
            v = {cols[jj]: field.one}
            for r, c in enumerate(pivots):
                if rows_[r][jj] != 0:
                    v[cols[c]] = field(-rows_[r][jj])
            out.append((cols[jj], v))
    out.sort(key=lambda t: -t[0] if reverse else t[0])
    return [v for _, v in out]


def sparse_rank(field: Field, columns: Sequence[SparseVec]) -> int:
    total = 0
    for cols, rows in _components(columns):
        if rows:
            total += rank(_dense_block(field, columns, cols, rows))
    return total


def sparse_in_span_with_witness(
    field: Field, b: SparseVec, A: Sequence[SparseVec], B: Sequence[SparseVec], reverse: bool = False
) -> tuple[SparseVec, SparseVec] | None:
    x = sparse_solve(field, list(A) + list(B), b, reverse=reverse)
    if x is None:
        return None
    na = len(A)
    return {j: v for j, v in x.items() if j < na}, {j - na: v for j, v in x.items() if j >= na}


def sparse_matvec(field: Field, columns: Sequence[SparseVec], x: SparseVec) -> SparseVec:
    out: SparseVec = {}
    for j, a in x.items():
        for i, v in columns[j].items():
            out[i] = out.get(i, 0) + a * v
    return {i: field(v) for i, v in out.items() if field(v) != 0}
