"""
Exact rational matrices and the elimination primitives built on them.

Scalars are :class:`fractions.Fraction`, which keeps every value reduced with
a positive denominator. Matrices are stored row-sparse (one ``{col: value}``
dict per row, zeros omitted); the public surface still behaves like a dense
row-major matrix. Every elimination returns the reduced row echelon form,
which is unique, so kernel bases, pivot columns and particular solutions are
reproducible regardless of the order in which rows are reduced.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import InputError

Rational = Fraction

__all__ = [
    "Rational",
    "RationalMatrix",
    "RankProfile",
    "Quotient",
    "parse_rational",
    "format_rational",
    "rank_profile",
    "rank",
    "solve_linear",
    "solve_matrix",
    "inverse",
    "quotient_projection",
    "extend_to_basis",
    "same_span",
    "contains_span",
]


def parse_rational(text) -> Fraction:
    if isinstance(text, bool):
        raise InputError(f"not a rational: {text!r}")
    if isinstance(text, (int, Fraction)):
        return Fraction(text)
    try:
        return Fraction(str(text).strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"not a rational: {text!r}") from exc


def _norm(x):
    """Internal scalar form: ``int`` when integral, else ``Fraction``."""
    if type(x) is Fraction and x.denominator == 1:
        return x.numerator
    return x


def format_rational(q: Fraction) -> str:
    """Render as ``"p/q"``; integers keep an explicit ``/1``."""
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


class RationalMatrix:
    """Immutable ``rows x cols`` matrix over Q.

    Zero rows or zero columns are allowed and stand for maps to or from the
    zero space.
    """

    __slots__ = ("rows", "cols", "_data")

    def __init__(self, rows: Sequence[Sequence] = (), *, ncols: int | None = None):
        rows = [list(r) for r in rows]
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        data = []
        for i, r in enumerate(rows):
            if len(r) != ncols:
                raise InputError(f"row {i} has {len(r)} entries, expected {ncols}")
            d = {}
            for j, x in enumerate(r):
                x = _norm(parse_rational(x))
                if x:
                    d[j] = x
            data.append(d)
        self.rows = len(rows)
        self.cols = ncols
        self._data = tuple(data)

    @classmethod
    def _from_sparse(cls, rows: int, cols: int, data: Iterable[dict]) -> "RationalMatrix":
        m = cls.__new__(cls)
        m.rows = rows
        m.cols = cols
        m._data = tuple(data)
        return m

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "RationalMatrix":
        return cls._from_sparse(rows, cols, ({} for _ in range(rows)))

    @classmethod
    def identity(cls, n: int) -> "RationalMatrix":
        return cls._from_sparse(n, n, ({i: 1} for i in range(n)))

    @classmethod
    def scalar(cls, n: int, value) -> "RationalMatrix":
        value = _norm(Fraction(value))
        if not value:
            return cls.zeros(n, n)
        return cls._from_sparse(n, n, ({i: value} for i in range(n)))

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], nrows: int | None = None) -> "RationalMatrix":
        columns = [list(c) for c in columns]
        if nrows is None:
            if not columns:
                raise InputError("nrows is required when there are no columns")
            nrows = len(columns[0])
        data = [{} for _ in range(nrows)]
        for j, col in enumerate(columns):
            if len(col) != nrows:
                raise InputError(f"column {j} has {len(col)} entries, expected {nrows}")
            for i, x in enumerate(col):
                x = _norm(parse_rational(x))
                if x:
                    data[i][j] = x
        return cls._from_sparse(nrows, len(columns), data)

    @classmethod
    def from_entries(cls, rows: int, cols: int, entries: Sequence) -> "RationalMatrix":
        """Build from a row-major flat sequence of length ``rows * cols``."""
        entries = list(entries)
        if len(entries) != rows * cols:
            raise InputError(f"expected {rows * cols} entries, got {len(entries)}")
        return cls([entries[i * cols:(i + 1) * cols] for i in range(rows)], ncols=cols)

    @classmethod
    def block_diagonal(cls, blocks: Sequence["RationalMatrix"]) -> "RationalMatrix":
        data = []
        r0 = c0 = 0
        for b in blocks:
            for row in b._data:
                data.append({c0 + j: x for j, x in row.items()})
            r0 += b.rows
            c0 += b.cols
        return cls._from_sparse(r0, c0, data)

    # -- inspection -------------------------------------------------------

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    @property
    def entries(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(row.get(j, 0)) for row in self._data for j in range(self.cols))

    def __getitem__(self, key: tuple[int, int]) -> Fraction:
        i, j = key
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError(key)
        return Fraction(self._data[i].get(j, 0))

    def row(self, i: int) -> list[Fraction]:
        d = self._data[i]
        return [Fraction(d.get(j, 0)) for j in range(self.cols)]

    def column(self, j: int) -> list[Fraction]:
        return [Fraction(d.get(j, 0)) for d in self._data]

    def columns(self) -> list[list[Fraction]]:
        return [self.column(j) for j in range(self.cols)]

    def tolist(self) -> list[list[Fraction]]:
        return [self.row(i) for i in range(self.rows)]

    def to_strings(self) -> list[list[str]]:
        return [[format_rational(x) for x in r] for r in self.tolist()]

    @classmethod
    def from_strings(cls, rows: Sequence[Sequence[str]], ncols: int | None = None) -> "RationalMatrix":
        return cls(rows, ncols=ncols)

    def nnz(self) -> int:
        return sum(len(d) for d in self._data)

    def is_zero(self) -> bool:
        return not any(self._data)

    def is_square(self) -> bool:
        return self.rows == self.cols

    def is_identity(self) -> bool:
        if not self.is_square():
            return False
        return all(d == {i: 1} for i, d in enumerate(self._data))

    def __eq__(self, other) -> bool:
        if not isinstance(other, RationalMatrix):
            return NotImplemented
        return self.shape == other.shape and self._data == other._data

    __hash__ = None

    def __repr__(self) -> str:
        body = "; ".join(" ".join(str(x) for x in r) for r in self.tolist())
        return f"RationalMatrix({self.rows}x{self.cols}: [{body}])"

    # -- algebra ----------------------------------------------------------

    @property
    def T(self) -> "RationalMatrix":
        data = [{} for _ in range(self.cols)]
        for i, row in enumerate(self._data):
            for j, x in row.items():
                data[j][i] = x
        return RationalMatrix._from_sparse(self.cols, self.rows, data)

    def transpose(self) -> "RationalMatrix":
        return self.T

    def __matmul__(self, other: "RationalMatrix") -> "RationalMatrix":
        if not isinstance(other, RationalMatrix):
            return NotImplemented
        if self.cols != other.rows:
            raise InputError(f"shape mismatch: {self.shape} @ {other.shape}")
        odata = other._data
        out = []
        for row in self._data:
            acc: dict = {}
            for k, x in row.items():
                for j, y in odata[k].items():
                    acc[j] = acc.get(j, 0) + x * y
            out.append({j: _norm(v) for j, v in acc.items() if v})
        return RationalMatrix._from_sparse(self.rows, other.cols, out)

    def _combine(self, other: "RationalMatrix", sign: int) -> "RationalMatrix":
        if self.shape != other.shape:
            raise InputError(f"shape mismatch: {self.shape} vs {other.shape}")
        out = []
        for a, b in zip(self._data, other._data):
            d = dict(a)
            for j, y in b.items():
                v = d.get(j, 0) + sign * y
                if v:
                    d[j] = _norm(v)
                else:
                    d.pop(j, None)
            out.append(d)
        return RationalMatrix._from_sparse(self.rows, self.cols, out)

    def __add__(self, other: "RationalMatrix") -> "RationalMatrix":
        return self._combine(other, 1)

    def __sub__(self, other: "RationalMatrix") -> "RationalMatrix":
        return self._combine(other, -1)

    def __neg__(self) -> "RationalMatrix":
        return self.scale(-1)

    def scale(self, c) -> "RationalMatrix":
        c = _norm(Fraction(c))
        if not c:
            return RationalMatrix.zeros(self.rows, self.cols)
        return RationalMatrix._from_sparse(
            self.rows, self.cols, ({j: _norm(c * x) for j, x in d.items()} for d in self._data)
        )

    def hstack(self, *others: "RationalMatrix") -> "RationalMatrix":
        data = [dict(d) for d in self._data]
        off = self.cols
        for o in others:
            if o.rows != self.rows:
                raise InputError(f"hstack row mismatch: {self.rows} vs {o.rows}")
            for d, od in zip(data, o._data):
                for j, x in od.items():
                    d[off + j] = x
            off += o.cols
        return RationalMatrix._from_sparse(self.rows, off, data)

    def vstack(self, *others: "RationalMatrix") -> "RationalMatrix":
        data = list(self._data)
        for o in others:
            if o.cols != self.cols:
                raise InputError(f"vstack column mismatch: {self.cols} vs {o.cols}")
            data.extend(o._data)
        return RationalMatrix._from_sparse(len(data), self.cols, data)

    def select_columns(self, idx: Sequence[int]) -> "RationalMatrix":
        pos = {j: k for k, j in enumerate(idx)}
        out = []
        for d in self._data:
            out.append({pos[j]: x for j, x in d.items() if j in pos})
        if len(pos) != len(idx):
            # repeated indices: fall back to the dense path
            return RationalMatrix.from_columns([self.column(j) for j in idx], self.rows)
        return RationalMatrix._from_sparse(self.rows, len(idx), out)

    def select_rows(self, idx: Sequence[int]) -> "RationalMatrix":
        return RationalMatrix._from_sparse(len(idx), self.cols, (dict(self._data[i]) for i in idx))


# -- elimination ------------------------------------------------------------


def _rref(data: Sequence[dict], ncols: int) -> dict[int, dict[int, Fraction]]:
    """Reduced row echelon form of the row space, keyed by pivot column.

    Rows are folded in one at a time against a basis that is kept fully
    reduced; the result is the (unique) RREF.
    """
    basis: dict[int, dict[int, Fraction]] = {}
    holders: dict[int, set[int]] = {}  # column -> pivots of basis rows with an entry there

    for src in data:
        if not src:
            continue
        v = dict(src)
        for p in [c for c in v if c in basis]:
            f = v.pop(p, None)
            if f is None:
                continue
            for j, y in basis[p].items():
                if j == p:
                    continue
                w = v.get(j, 0) - f * y
                if w:
                    v[j] = _norm(w)
                else:
                    v.pop(j, None)
        if not v:
            continue
        c = min(v)
        lead = v[c]
        if lead != 1:
            inv = -1 if lead == -1 else 1 / Fraction(lead)
            v = {j: _norm(x * inv) for j, x in v.items()}
        for p in list(holders.get(c, ())):
            row = basis[p]
            f = row.pop(c)
            holders[c].discard(p)
            for j, y in v.items():
                if j == c:
                    continue
                w = row.get(j, 0) - f * y
                if w:
                    if j not in row:
                        holders.setdefault(j, set()).add(p)
                    row[j] = _norm(w)
                elif j in row:
                    del row[j]
                    holders[j].discard(p)
        basis[c] = v
        for j in v:
            if j != c:
                holders.setdefault(j, set()).add(c)
    return basis


@dataclass(frozen=True)
class RankProfile:
    rank: int
    kernel_basis: RationalMatrix
    image_basis: RationalMatrix
    pivot_cols: tuple[int, ...]

    @property
    def nullity(self) -> int:
        return self.kernel_basis.cols


def rref(M: RationalMatrix) -> tuple[RationalMatrix, tuple[int, ...]]:
    basis = _rref(M._data, M.cols)
    pivots = tuple(sorted(basis))
    rows = [basis[p] for p in pivots]
    return RationalMatrix._from_sparse(len(rows), M.cols, rows), pivots


def _kernel_from_rref(basis: dict[int, dict[int, Fraction]], ncols: int) -> RationalMatrix:
    free = [j for j in range(ncols) if j not in basis]
    fpos = {f: k for k, f in enumerate(free)}
    data = [{} for _ in range(ncols)]
    for f, k in fpos.items():
        data[f][k] = 1
    for p, row in basis.items():
        for j, x in row.items():
            if j != p:
                data[p][fpos[j]] = -x
    return RationalMatrix._from_sparse(ncols, len(free), data)


def rank_profile(M: RationalMatrix) -> RankProfile:
    """Rank, kernel basis, image basis and pivot columns of ``M``.

    The kernel basis has one column per non-pivot column ``f`` of ``M``
    (ascending), with a 1 at ``f`` and zeros at the other free positions.
    The image basis is the pivot columns of ``M`` itself.
    """
    basis = _rref(M._data, M.cols)
    pivots = tuple(sorted(basis))
    return RankProfile(
        rank=len(pivots),
        kernel_basis=_kernel_from_rref(basis, M.cols),
        image_basis=M.select_columns(pivots),
        pivot_cols=pivots,
    )


def rank(M: RationalMatrix) -> int:
    # the row space of the narrower orientation is cheaper to reduce
    src = M if M.rows <= M.cols else M.T
    return len(_rref(src._data, src.cols))


def _as_column(b, n: int) -> RationalMatrix:
    if isinstance(b, RationalMatrix):
        if b.cols != 1:
            raise InputError(f"right-hand side must be a column, got shape {b.shape}")
        col = b
    else:
        col = RationalMatrix.from_columns([list(b)], nrows=len(list(b)))
    if col.rows != n:
        raise InputError(f"dimension mismatch: matrix has {n} rows, right-hand side {col.rows}")
    return col


def solve_matrix(M: RationalMatrix, B: RationalMatrix) -> RationalMatrix | None:
    """Solve ``M X = B`` column by column; ``None`` if any column is inconsistent.

    Each solution column is zero in every non-pivot coordinate of ``M``.
    """
    if M.rows != B.rows:
        raise InputError(f"dimension mismatch: {M.shape} vs right-hand side {B.shape}")
    n = M.cols
    aug = M.hstack(B)
    basis = _rref(aug._data, aug.cols)
    if any(p >= n for p in basis):
        return None
    data = [{} for _ in range(n)]
    for p, row in basis.items():
        for j, x in row.items():
            if j >= n:
                data[p][j - n] = x
    return RationalMatrix._from_sparse(n, B.cols, data)


def solve_linear(M: RationalMatrix, b) -> RationalMatrix | None:
    """Particular solution of ``M x = b`` (zero at free coordinates), or ``None``."""
    return solve_matrix(M, _as_column(b, M.rows))


def inverse(M: RationalMatrix) -> RationalMatrix:
    if not M.is_square():
        raise InputError(f"cannot invert a {M.rows}x{M.cols} matrix")
    X = solve_matrix(M, RationalMatrix.identity(M.rows))
    if X is None or M @ X != RationalMatrix.identity(M.rows):
        raise InputError("matrix is singular")
    return X


@dataclass(frozen=True)
class Quotient:
    proj: RationalMatrix
    complement_basis: RationalMatrix
    complement_coords: tuple[int, ...]


def quotient_projection(dim: int, S: RationalMatrix) -> Quotient:
    """Projection ``Q^dim -> Q^dim / span(S)`` in complement coordinates.

    The complement is spanned by the standard vectors ``e_j`` whose index is
    not a pivot of ``S^T``; ``proj`` sends ``v = S c + E d`` to ``d``.
    """
    if S.rows != dim:
        raise InputError(f"subspace basis has {S.rows} rows, expected {dim}")
    basis = _rref(S.T._data, dim)
    if len(basis) != S.cols:
        raise InputError("subspace basis columns are linearly dependent")
    free = tuple(j for j in range(dim) if j not in basis)
    fpos = {f: k for k, f in enumerate(free)}
    data = [{} for _ in free]
    for k in range(len(free)):
        data[k][free[k]] = 1
    for p, row in basis.items():
        for j, x in row.items():
            if j != p:
                data[fpos[j]][p] = -x
    proj = RationalMatrix._from_sparse(len(free), dim, data)
    comp = RationalMatrix._from_sparse(
        dim, len(free), ({fpos[i]: 1} if i in fpos else {} for i in range(dim))
    )
    return Quotient(proj=proj, complement_basis=comp, complement_coords=free)


def extend_to_basis(V: RationalMatrix) -> tuple[RationalMatrix, tuple[int, ...]]:
    """Append standard vectors (in index order) to independent columns ``V``.

    Returns the square basis ``[V | e_j ...]`` and the indices ``j`` used.
    """
    n = V.rows
    prof = rank_profile(V.hstack(RationalMatrix.identity(n)))
    k = V.cols
    if prof.pivot_cols[:k] != tuple(range(k)):
        raise InputError("columns to extend are linearly dependent")
    extra = tuple(p - k for p in prof.pivot_cols[k:])
    E = RationalMatrix.identity(n).select_columns(extra)
    return V.hstack(E), extra


def contains_span(U: RationalMatrix, W: RationalMatrix) -> bool:
    """True when every column of ``W`` lies in the column span of ``U``."""
    if W.cols == 0:
        return True
    if U.cols == 0:
        return W.is_zero()
    return solve_matrix(U, W) is not None


def same_span(U: RationalMatrix, W: RationalMatrix) -> bool:
    return contains_span(U, W) and contains_span(W, U)
