"""Exact sparse linear algebra over a coefficient field.

Vectors are dicts {column index: nonzero scalar}.  The Echelon class keeps a
reduced row echelon form and is the workhorse behind rank, solving, kernels,
and the relation-quotient constructions used by the tensor carriers.
"""

from __future__ import annotations

from .errors import DimensionMismatch


def vec_add(field, u: dict, v: dict) -> dict:
    out = dict(u)
    for j, c in v.items():
        s = field.add(out.get(j, field.zero), c)
        if field.is_zero(s):
            out.pop(j, None)
        else:
            out[j] = s
    return out


def vec_scale(field, c, u: dict) -> dict:
    if field.is_zero(c):
        return {}
    return {j: field.mul(c, x) for j, x in u.items()}


def vec_axpy(field, out: dict, c, u: dict) -> None:
    """out += c*u in place."""
    if field.is_zero(c):
        return
    for j, x in u.items():
        s = field.add(out.get(j, field.zero), field.mul(c, x))
        if field.is_zero(s):
            out.pop(j, None)
        else:
            out[j] = s


class Echelon:
    """Reduced row echelon form maintained incrementally.

    Rows are stored normalized (pivot coefficient 1) and fully reduced against
    each other, so the stored form is the unique RREF of the row space; all
    derived data (kernel bases, solutions with zero free coordinates) is
    therefore canonical regardless of insertion order.
    """

    def __init__(self, field, ncols: int):
        self.field = field
        self.ncols = ncols
        self.rows: list[dict] = []
        self.pivots: list[int] = []
        self._pivot_set: dict[int, int] = {}

    @property
    def rank(self) -> int:
        return len(self.rows)

    def reduce(self, vec: dict) -> dict:
        """Return vec reduced modulo the row space (a fresh dict)."""
        f = self.field
        out = dict(vec)
        for r, p in zip(self.rows, self.pivots):
            c = out.get(p)
            if c is not None:
                vec_axpy(f, out, f.neg(c), r)
        return out

    def add_row(self, vec: dict) -> bool:
        """Insert a row; returns True if it enlarged the row space."""
        f = self.field
        res = self.reduce(vec)
        if not res:
            return False
        p = min(res)
        inv = f.inv(res[p])
        row = {j: f.mul(inv, c) for j, c in res.items()}
        # keep RREF: clear column p from existing rows
        for r in self.rows:
            c = r.get(p)
            if c is not None:
                vec_axpy(f, r, f.neg(c), row)
        k = 0
        while k < len(self.pivots) and self.pivots[k] < p:
            k += 1
        self.rows.insert(k, row)
        self.pivots.insert(k, p)
        self._pivot_set[p] = k
        for i in range(k, len(self.pivots)):
            self._pivot_set[self.pivots[i]] = i
        return True

    def add_rows(self, rows) -> None:
        for r in rows:
            self.add_row(r)

    def free_columns(self) -> list[int]:
        piv = set(self.pivots)
        return [j for j in range(self.ncols) if j not in piv]

    def kernel_basis(self) -> list[dict]:
        """Canonical basis of the kernel of the matrix whose rows were inserted.

        Only meaningful when the inserted rows are the rows of that matrix.
        """
        f = self.field
        out = []
        for j in self.free_columns():
            v = {j: f.one}
            for r, p in zip(self.rows, self.pivots):
                c = r.get(j)
                if c is not None:
                    v[p] = f.neg(c)
            out.append(v)
        return out

    def coords_on_free(self, vec: dict) -> dict:
        """Coordinates of a reduced vector on the free columns (quotient coords)."""
        res = self.reduce(vec)
        return res


class SparseMatrix:
    """Immutable-by-convention sparse matrix over an exact field.

    entries maps (row, col) to a nonzero scalar; indices are bounds-checked.
    """

    def __init__(self, field, nrows: int, ncols: int, entries: dict | None = None):
        self.field = field
        self.nrows = nrows
        self.ncols = ncols
        ent = {}
        if entries:
            for (i, j), c in entries.items():
                if not (0 <= i < nrows and 0 <= j < ncols):
                    raise DimensionMismatch(f"entry ({i},{j}) outside {nrows}x{ncols}")
                if not field.is_zero(c):
                    ent[(i, j)] = c
        self.entries = ent

    @classmethod
    def from_rows(cls, field, ncols, rows):
        ent = {}
        for i, row in enumerate(rows):
            for j, c in row.items():
                ent[(i, j)] = c
        return cls(field, len(rows), ncols, ent)

    @classmethod
    def from_cols(cls, field, nrows, cols):
        ent = {}
        for j, col in enumerate(cols):
            for i, c in col.items():
                ent[(i, j)] = c
        return cls(field, nrows, len(cols), ent)

    @classmethod
    def identity(cls, field, n):
        return cls(field, n, n, {(i, i): field.one for i in range(n)})

    @classmethod
    def zero(cls, field, nrows, ncols):
        return cls(field, nrows, ncols, {})

    def rows(self) -> list[dict]:
        out = [dict() for _ in range(self.nrows)]
        for (i, j), c in self.entries.items():
            out[i][j] = c
        return out

    def col(self, j) -> dict:
        return {i: c for (i, jj), c in self.entries.items() if jj == j}

    def cols(self) -> list[dict]:
        out = [dict() for _ in range(self.ncols)]
        for (i, j), c in self.entries.items():
            out[j][i] = c
        return out

    def transpose(self) -> "SparseMatrix":
        return SparseMatrix(
            self.field, self.ncols, self.nrows,
            {(j, i): c for (i, j), c in self.entries.items()},
        )

    def _by_col(self) -> dict[int, list]:
        if not hasattr(self, "_bycol"):
            by_col: dict[int, list] = {}
            for (i, j), c in self.entries.items():
                by_col.setdefault(j, []).append((i, c))
            self._bycol = by_col
        return self._bycol

    def mat_vec(self, v: dict) -> dict:
        f = self.field
        out: dict = {}
        by_col = self._by_col()
        for j, c in v.items():
            for i, m in by_col.get(j, ()):
                s = f.add(out.get(i, f.zero), f.mul(m, c))
                if f.is_zero(s):
                    out.pop(i, None)
                else:
                    out[i] = s
        return out

    def __matmul__(self, other: "SparseMatrix") -> "SparseMatrix":
        if self.ncols != other.nrows:
            raise DimensionMismatch("matmul shape mismatch")
        f = self.field
        cols = other.cols()
        out_cols = [self.mat_vec(c) for c in cols]
        return SparseMatrix.from_cols(f, self.nrows, out_cols)

    def add(self, other: "SparseMatrix") -> "SparseMatrix":
        if (self.nrows, self.ncols) != (other.nrows, other.ncols):
            raise DimensionMismatch("add shape mismatch")
        f = self.field
        ent = dict(self.entries)
        for k, c in other.entries.items():
            s = f.add(ent.get(k, f.zero), c)
            if f.is_zero(s):
                ent.pop(k, None)
            else:
                ent[k] = s
        return SparseMatrix(f, self.nrows, self.ncols, ent)

    def scale(self, c) -> "SparseMatrix":
        f = self.field
        return SparseMatrix(f, self.nrows, self.ncols,
                            {k: f.mul(c, v) for k, v in self.entries.items()})

    def is_zero(self) -> bool:
        return not self.entries

    def _echelon(self) -> Echelon:
        """Forward elimination with small-pivot preference, finished to RREF.

        Pivot rows are chosen by minimal coefficient cost to limit rational
        coefficient blowup; the final RREF is unique either way.
        """
        f = self.field
        rows = [r for r in self.rows() if r]
        ech = Echelon(f, self.ncols)
        remaining = rows
        for col in range(self.ncols):
            cand = [r for r in remaining if min(r) == col]
            if not cand:
                continue
            cand.sort(key=lambda r: f.cost(r[col]))
            best = cand[0]
            ech.add_row(best)
            nxt = []
            for r in remaining:
                if r is best:
                    continue
                red = ech.reduce(r)
                if red:
                    nxt.append(red)
            remaining = nxt
            if not remaining:
                break
        for r in remaining:
            ech.add_row(r)
        return ech

    def echelon(self) -> Echelon:
        if not hasattr(self, "_ech"):
            self._ech = self._echelon()
        return self._ech

    def rank(self) -> int:
        return self.echelon().rank

    def kernel_basis(self) -> list[dict]:
        return self.echelon().kernel_basis()

    def solve(self, b: list | dict) -> list | None:
        """Some x with Mx = b (free coordinates zero), or None if inconsistent.

        The returned solution is verified by substitution.
        """
        f = self.field
        if isinstance(b, dict):
            bvec = b
        else:
            if len(b) != self.nrows:
                raise DimensionMismatch("rhs length != row count")
            bvec = {i: c for i, c in enumerate(b) if not f.is_zero(c)}
        aug_col = self.ncols
        ech = Echelon(f, self.ncols + 1)
        rows = self.rows()
        for i, row in enumerate(rows):
            r = dict(row)
            if i in bvec:
                r[aug_col] = bvec[i]
            if r:
                ech.add_row(r)
        x: dict = {}
        for r, p in zip(ech.rows, ech.pivots):
            if p == aug_col:
                return None
            x[p] = r.get(aug_col, f.zero)
        out = [x.get(j, f.zero) for j in range(self.ncols)]
        # verify by substitution
        chk = self.mat_vec({j: c for j, c in enumerate(out) if not f.is_zero(c)})
        if chk != {i: c for i, c in bvec.items() if not f.is_zero(c)}:
            return None
        return out

    def column_space_echelon(self) -> Echelon:
        """RREF of the column space (canonical basis of the image)."""
        ech = Echelon(self.field, self.nrows)
        for c in self.cols():
            if c:
                ech.add_row(c)
        return ech

    def __repr__(self):
        return f"SparseMatrix({self.nrows}x{self.ncols}, nnz={len(self.entries)})"
