"""Small dense exact linear algebra over Q.

Everything downstream (region-wise kernels, cokernels, homology) runs on
matrices whose dimensions rarely exceed a few dozen, so a plain
fraction-based Gaussian elimination is both exact and fast enough.
Matrices are immutable; shapes with zero rows or columns are first-class
citizens because zero-dimensional graded pieces occur everywhere.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

Q = Fraction

_ID_CACHE: dict[int, "QMat"] = {}
_ZERO_CACHE: dict[tuple[int, int], "QMat"] = {}


class QMat:
    """Immutable matrix over Q with explicit shape."""

    __slots__ = ("nrows", "ncols", "rows")

    def __init__(self, nrows: int, ncols: int, rows: Iterable[Iterable] = ()):
        self.nrows = nrows
        self.ncols = ncols
        data = tuple(tuple(Q(x) for x in row) for row in rows)
        if not data and nrows > 0:
            data = tuple(tuple(Q(0) for _ in range(ncols)) for _ in range(nrows))
        if len(data) != nrows or any(len(r) != ncols for r in data):
            raise ValueError("matrix data does not match declared shape")
        self.rows = data

    @classmethod
    def _new(cls, nrows: int, ncols: int, rows: tuple) -> "QMat":
        """Internal fast path: trusts that rows are tuples of Fractions."""
        obj = object.__new__(cls)
        obj.nrows = nrows
        obj.ncols = ncols
        obj.rows = rows
        return obj

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], ncols: int | None = None) -> "QMat":
        rows = [list(r) for r in rows]
        if ncols is None:
            if not rows:
                raise ValueError("ncols is required for a matrix with no rows")
            ncols = len(rows[0])
        return cls(len(rows), ncols, rows)

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> "QMat":
        key = (nrows, ncols)
        mat = _ZERO_CACHE.get(key)
        if mat is None:
            mat = cls(nrows, ncols)
            _ZERO_CACHE[key] = mat
        return mat

    @classmethod
    def identity(cls, n: int) -> "QMat":
        mat = _ID_CACHE.get(n)
        if mat is None:
            mat = cls(n, n, [[Q(1) if i == j else Q(0) for j in range(n)] for i in range(n)])
            _ID_CACHE[n] = mat
        return mat

    @classmethod
    def column(cls, entries: Sequence) -> "QMat":
        return cls(len(entries), 1, [[x] for x in entries])

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, QMat)
            and self.nrows == other.nrows
            and self.ncols == other.ncols
            and self.rows == other.rows
        )

    def __hash__(self) -> int:
        return hash((self.nrows, self.ncols, self.rows))

    def __repr__(self) -> str:
        return f"QMat({self.nrows}x{self.ncols}, {[[str(x) for x in r] for r in self.rows]})"

    def __add__(self, other: "QMat") -> "QMat":
        self._same_shape(other)
        rows = tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self.rows, other.rows))
        return QMat._new(self.nrows, self.ncols, rows)

    def __sub__(self, other: "QMat") -> "QMat":
        self._same_shape(other)
        rows = tuple(tuple(a - b for a, b in zip(r, s)) for r, s in zip(self.rows, other.rows))
        return QMat._new(self.nrows, self.ncols, rows)

    def __neg__(self) -> "QMat":
        return self.scale(-1)

    def scale(self, c) -> "QMat":
        c = Q(c)
        return QMat._new(self.nrows, self.ncols,
                         tuple(tuple(c * x for x in r) for r in self.rows))

    def __matmul__(self, other: "QMat") -> "QMat":
        if self.ncols != other.nrows:
            raise ValueError(
                f"shape mismatch in product: {self.nrows}x{self.ncols} @ {other.nrows}x{other.ncols}"
            )
        zero = Q(0)
        cols = tuple(zip(*other.rows)) if other.rows else ()
        out = tuple(
            tuple(sum((a * b for a, b in zip(r, c)), zero) for c in cols)
            if cols else (zero,) * other.ncols
            for r in self.rows
        )
        return QMat._new(self.nrows, other.ncols, out)

    def transpose(self) -> "QMat":
        return QMat(self.ncols, self.nrows, list(zip(*self.rows)) if self.rows else [])

    def is_zero(self) -> bool:
        return all(x == 0 for r in self.rows for x in r)

    def column_vectors(self) -> list[tuple[Fraction, ...]]:
        return [tuple(r[j] for r in self.rows) for j in range(self.ncols)]

    def hstack(self, other: "QMat") -> "QMat":
        if self.nrows != other.nrows:
            raise ValueError("hstack row mismatch")
        return QMat(
            self.nrows,
            self.ncols + other.ncols,
            [list(a) + list(b) for a, b in zip(self.rows, other.rows)],
        )

    def _same_shape(self, other: "QMat") -> None:
        if self.nrows != other.nrows or self.ncols != other.ncols:
            raise ValueError("shape mismatch")

    def rref(self) -> tuple["QMat", tuple[int, ...]]:
        """Reduced row echelon form and pivot column indices."""
        rows = [list(r) for r in self.rows]
        pivots: list[int] = []
        r = 0
        for c in range(self.ncols):
            if r >= self.nrows:
                break
            pivot = next((i for i in range(r, self.nrows) if rows[i][c] != 0), None)
            if pivot is None:
                continue
            rows[r], rows[pivot] = rows[pivot], rows[r]
            inv = Q(1) / rows[r][c]
            rows[r] = [x * inv for x in rows[r]]
            for i in range(self.nrows):
                if i != r and rows[i][c] != 0:
                    f = rows[i][c]
                    rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
            pivots.append(c)
            r += 1
        return QMat(self.nrows, self.ncols, rows), tuple(pivots)

    def rank(self) -> int:
        return len(self.rref()[1])

    def nullspace(self) -> "QMat":
        """Matrix whose columns form a basis of ker(self)."""
        red, pivots = self.rref()
        pivset = set(pivots)
        free = [c for c in range(self.ncols) if c not in pivset]
        cols = []
        for f in free:
            v = [Q(0)] * self.ncols
            v[f] = Q(1)
            for r, p in enumerate(pivots):
                v[p] = -red.rows[r][f]
            cols.append(v)
        return QMat(self.ncols, len(free), [list(x) for x in zip(*cols)] if cols else [])

    def solve(self, rhs: "QMat") -> "QMat | None":
        """One solution X of self @ X = rhs, or None if inconsistent."""
        if rhs.nrows != self.nrows:
            raise ValueError("solve: row mismatch")
        aug = self.hstack(rhs)
        red, pivots = aug.rref()
        # Inconsistent iff some pivot lands in the rhs block.
        if any(p >= self.ncols for p in pivots):
            return None
        sol = [[Q(0)] * rhs.ncols for _ in range(self.ncols)]
        for r, p in enumerate(pivots):
            for j in range(rhs.ncols):
                sol[p][j] = red.rows[r][self.ncols + j]
        return QMat(self.ncols, rhs.ncols, sol)

    def inverse(self) -> "QMat":
        if self.nrows != self.ncols:
            raise ValueError("inverse of a non-square matrix")
        sol = self.solve(QMat.identity(self.nrows))
        if sol is None or self.rank() != self.nrows:
            raise ValueError("matrix is singular")
        return sol


def cokernel_projection(a: QMat) -> tuple[QMat, QMat]:
    """Projection p and section s for coker(a) = target / im(a).

    p is c x m with ker(p) = im(a); s is m x c with p @ s = identity.
    The section picks standard basis vectors, so cokernel bases stay
    readable in terms of the ambient labels.
    """
    m = a.nrows
    _, pivots = a.rref()
    # Independent columns of a span the image.
    image_cols = [tuple(a.rows[i][p] for i in range(m)) for p in pivots]
    basis = [list(c) for c in image_cols]
    chosen: list[int] = []
    for j in range(m):
        e = [Q(0)] * m
        e[j] = Q(1)
        probe = QMat(m, len(basis) + 1, [list(row) for row in zip(*(basis + [e]))] if basis or e else [])
        if probe.rank() == len(basis) + 1:
            basis.append(e)
            chosen.append(j)
    c = len(chosen)
    if basis:
        p_full = QMat(m, len(basis), [list(row) for row in zip(*basis)]).inverse()
    else:
        p_full = QMat(0, m)
    proj = QMat(c, m, p_full.rows[len(image_cols):]) if m else QMat(c, 0)
    sect = QMat(m, c, [[Q(1) if chosen[k] == i else Q(0) for k in range(c)] for i in range(m)])
    return proj, sect
