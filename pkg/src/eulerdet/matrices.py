"""Exact matrices and canonical-form linear algebra.

Matrices are immutable, row-major, over any ring object.  Characteristic
polynomials are computed division-free (Berkowitz) so the same code serves
fields, Z/p^n and Iwasawa coefficients.  Smith normal form is available over
the integers, fields, Z/p^n and (where divisibility pivots exist) the
truncated Iwasawa algebra, with deterministic pivoting: minimal norm first,
ties broken by lowest (row, col).
"""

from __future__ import annotations

from .poly import Polynomial
from .rings import UnsupportedRing


class NonSquare(Exception):
    pass


class Matrix:
    __slots__ = ("ring", "rows", "cols", "entries")

    def __init__(self, ring, rows, cols, entries):
        entries = tuple(entries)
        if len(entries) != rows * cols:
            raise ValueError("entry count does not match shape")
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "entries", entries)

    def __setattr__(self, *a):
        raise AttributeError("Matrix is immutable")

    # -- constructors --------------------------------------------------
    @classmethod
    def from_rows(cls, ring, rows):
        r = len(rows)
        c = len(rows[0]) if r else 0
        if any(len(row) != c for row in rows):
            raise ValueError("ragged rows")
        return cls(ring, r, c, [x for row in rows for x in row])

    @classmethod
    def zeros(cls, ring, rows, cols):
        return cls(ring, rows, cols, [ring.zero()] * (rows * cols))

    @classmethod
    def identity(cls, ring, n):
        z, o = ring.zero(), ring.one()
        return cls(ring, n, n, [o if i == j else z for i in range(n) for j in range(n)])

    @classmethod
    def diagonal(cls, ring, diag):
        n = len(diag)
        z = ring.zero()
        return cls(ring, n, n, [diag[i] if i == j else z for i in range(n) for j in range(n)])

    @classmethod
    def from_ints(cls, ring, rows):
        return cls.from_rows(ring, [[ring.from_int(x) for x in row] for row in rows])

    @classmethod
    def block_diagonal(cls, ring, blocks):
        rows = sum(b.rows for b in blocks)
        cols = sum(b.cols for b in blocks)
        out = [[ring.zero()] * cols for _ in range(rows)]
        r0 = c0 = 0
        for b in blocks:
            for i in range(b.rows):
                for j in range(b.cols):
                    out[r0 + i][c0 + j] = b[i, j]
            r0 += b.rows
            c0 += b.cols
        return cls.from_rows(ring, out)

    # -- access --------------------------------------------------------
    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i * self.cols + j]

    def row_list(self):
        return [list(self.entries[i * self.cols:(i + 1) * self.cols]) for i in range(self.rows)]

    def column(self, j):
        return [self[i, j] for i in range(self.rows)]

    def columns_sub(self, js):
        return Matrix(self.ring, self.rows, len(js),
                      [self[i, j] for i in range(self.rows) for j in js])

    def is_square(self):
        return self.rows == self.cols

    def is_zero(self):
        return all(self.ring.is_zero(x) for x in self.entries)

    def __eq__(self, other):
        return (
            isinstance(other, Matrix)
            and self.ring == other.ring
            and (self.rows, self.cols) == (other.rows, other.cols)
            and all(self.ring.eq(a, b) for a, b in zip(self.entries, other.entries))
        )

    def __hash__(self):
        return hash((self.ring, self.rows, self.cols, self.entries))

    def __repr__(self):
        return f"Matrix({self.rows}x{self.cols} over {self.ring.name()}, {self.row_list()})"

    # -- arithmetic ----------------------------------------------------
    def __add__(self, other):
        self._same_shape(other)
        R = self.ring
        return Matrix(R, self.rows, self.cols,
                      [R.add(a, b) for a, b in zip(self.entries, other.entries)])

    def __neg__(self):
        R = self.ring
        return Matrix(R, self.rows, self.cols, [R.neg(a) for a in self.entries])

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if self.cols != other.rows:
            raise ValueError("inner dimensions do not match")
        R = self.ring
        out = []
        for i in range(self.rows):
            ri = self.entries[i * self.cols:(i + 1) * self.cols]
            for j in range(other.cols):
                acc = R.zero()
                for k in range(self.cols):
                    a = ri[k]
                    if R.is_zero(a):
                        continue
                    acc = R.add(acc, R.mul(a, other[k, j]))
                out.append(acc)
        return Matrix(R, self.rows, other.cols, out)

    def scale(self, c):
        R = self.ring
        return Matrix(R, self.rows, self.cols, [R.mul(c, a) for a in self.entries])

    def transpose(self):
        return Matrix(self.ring, self.cols, self.rows,
                      [self[j, i] for i in range(self.cols) for j in range(self.rows)])

    def hstack(self, other):
        if self.rows != other.rows:
            raise ValueError("row counts differ")
        rows = [self.row_list()[i] + other.row_list()[i] for i in range(self.rows)]
        return Matrix.from_rows(self.ring, rows) if rows else Matrix(self.ring, 0, self.cols + other.cols, [])

    def map_entries(self, fn, new_ring=None):
        return Matrix(new_ring or self.ring, self.rows, self.cols,
                      [fn(a) for a in self.entries])

    def apply_to(self, vec):
        R = self.ring
        return [R.sum(R.mul(self[i, k], vec[k]) for k in range(self.cols))
                for i in range(self.rows)]

    def power(self, n):
        if not self.is_square():
            raise NonSquare("power of a non-square matrix")
        acc = Matrix.identity(self.ring, self.rows)
        base = self
        while n:
            if n & 1:
                acc = acc * base
            base = base * base
            n >>= 1
        return acc

    def _same_shape(self, other):
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shapes differ")


# ---------------------------------------------------------------------------
# Characteristic polynomials (division-free)
# ---------------------------------------------------------------------------

def _berkowitz_vector(m):
    """Coefficients [c_0 .. c_n] of det(X*I - m) = sum c_k X^(n-k), c_0 = 1."""
    R = m.ring
    n = m.rows
    if n == 0:
        return [R.one()]
    c = [R.one(), R.neg(m[0, 0])]
    for i in range(1, n):
        row = [m[i, k] for k in range(i)]
        col = [m[k, i] for k in range(i)]
        d = m[i, i]
        # q_j = row . M^j . col for the leading i x i block M
        qs = []
        v = col
        for j in range(i):
            qs.append(R.sum(R.mul(row[k], v[k]) for k in range(i)))
            if j < i - 1:
                v = [R.sum(R.mul(m[a, b], v[b]) for b in range(i)) for a in range(i)]
        col0 = [R.one(), R.neg(d)] + [R.neg(q) for q in qs]
        new = []
        for k in range(i + 2):
            acc = R.zero()
            for j in range(min(k, i) + 1):
                if k - j < len(col0):
                    acc = R.add(acc, R.mul(col0[k - j], c[j]))
            new.append(acc)
        c = new
    return c


def char_poly(m):
    """det(X*I - m), monic of degree n, over the matrix ring."""
    if not m.is_square():
        raise NonSquare("characteristic polynomial of a non-square matrix")
    c = _berkowitz_vector(m)
    return Polynomial(m.ring, list(reversed(c)))


def reversed_char_poly(m):
    """det(1 - X*m); the constant coefficient is always 1."""
    if not m.is_square():
        raise NonSquare("reversed characteristic polynomial of a non-square matrix")
    return Polynomial(m.ring, _berkowitz_vector(m))


def det(m):
    """Determinant over any commutative ring, via the Berkowitz vector."""
    if not m.is_square():
        raise NonSquare("determinant of a non-square matrix")
    R = m.ring
    c = _berkowitz_vector(m)
    d = c[-1]
    return d if m.rows % 2 == 0 else R.neg(d)


# ---------------------------------------------------------------------------
# Elimination over fields (and unit-pivot local rings)
# ---------------------------------------------------------------------------

def _field_lift(m):
    """Lift a matrix into a computable field when possible (ZZ -> QQ,
    polynomials over a field -> rational functions); identity otherwise."""
    from .rings import (IntegerRing, PolynomialRing, RationalField,
                        FractionField, QQ)
    from fractions import Fraction
    R = m.ring
    if R.is_field:
        return m
    if isinstance(R, IntegerRing):
        return m.map_entries(lambda x: Fraction(x), QQ)
    if isinstance(R, PolynomialRing) and R.base.is_field:
        F = FractionField(R)
        return m.map_entries(F.from_poly, F)
    return m


def _rref(m, unit_pivots_only=False):
    """Reduced row echelon form.  Returns (rows, pivot_cols).

    Over a field every nonzero entry is a pivot candidate; with
    ``unit_pivots_only`` elimination proceeds only through unit pivots and
    raises UnsupportedRing when stuck on a nonzero non-unit column.
    """
    R = m.ring
    if not R.is_field:
        unit_pivots_only = True
    rows = m.row_list()
    pivots = []
    r = 0
    for j in range(m.cols):
        sel = None
        for i in range(r, m.rows):
            if not R.is_zero(rows[i][j]):
                if R.is_unit(rows[i][j]):
                    sel = i
                    break
                if sel is None and not unit_pivots_only:
                    sel = i
        if sel is None:
            if unit_pivots_only and any(not R.is_zero(rows[i][j]) for i in range(r, m.rows)):
                raise UnsupportedRing("no unit pivot available")
            continue
        rows[r], rows[sel] = rows[sel], rows[r]
        inv = R.inv(rows[r][j])
        rows[r] = [R.mul(inv, x) for x in rows[r]]
        for i in range(m.rows):
            if i != r and not R.is_zero(rows[i][j]):
                f = rows[i][j]
                rows[i] = [R.sub(a, R.mul(f, b)) for a, b in zip(rows[i], rows[r])]
        pivots.append(j)
        r += 1
        if r == m.rows:
            break
    return rows, pivots


def rank(m):
    return len(_rref(_field_lift(m))[1])


def kernel_basis(m):
    """Columns spanning ker(m) over a field (or unit-pivot local ring)."""
    R = m.ring
    rows, pivots = _rref(m)
    free = [j for j in range(m.cols) if j not in pivots]
    cols = []
    for j in free:
        v = [R.zero()] * m.cols
        v[j] = R.one()
        for r_i, p_j in enumerate(pivots):
            v[p_j] = R.neg(rows[r_i][j])
        cols.append(v)
    return Matrix(R, m.cols, len(cols),
                  [cols[k][i] for i in range(m.cols) for k in range(len(cols))])


def column_space_basis(m):
    _, pivots = _rref(m)
    return m.columns_sub(pivots)


def solve(a, b):
    """Solve a.x = b (b a Matrix of column right-hand sides); None if unsolvable."""
    R = a.ring
    aug = a.hstack(b)
    rows, pivots = _rref(aug)
    if any(p >= a.cols for p in pivots):
        return None
    out = [[R.zero()] * b.cols for _ in range(a.cols)]
    for r_i, p_j in enumerate(pivots):
        for k in range(b.cols):
            out[p_j][k] = rows[r_i][a.cols + k]
    return Matrix.from_rows(R, out) if out else Matrix(R, 0, b.cols, [])

def inverse(m):
    if not m.is_square():
        raise NonSquare("inverse of a non-square matrix")
    x = solve(m, Matrix.identity(m.ring, m.rows))
    if x is None or rank(m) != m.rows:
        raise ValueError("matrix is not invertible")
    return x


def in_column_span(basis, m):
    """Whether every column of m lies in the span of basis columns."""
    return rank(basis) == rank(basis.hstack(m))


def same_column_span(a, b):
    return rank(a) == rank(b) == rank(a.hstack(b))


# ---------------------------------------------------------------------------
# Smith normal form
# ---------------------------------------------------------------------------

def _swap_rows(mat, i, j):
    mat[i], mat[j] = mat[j], mat[i]


def _swap_cols(mat, i, j):
    for row in mat:
        row[i], row[j] = row[j], row[i]


def _add_row(ring, mat, dst, src, c):
    mat[dst] = [ring.add(a, ring.mul(c, b)) for a, b in zip(mat[dst], mat[src])]


def _add_col(ring, mat, dst, src, c):
    for row in mat:
        row[dst] = ring.add(row[dst], ring.mul(c, row[src]))


def _scale_row(ring, mat, i, u):
    mat[i] = [ring.mul(u, a) for a in mat[i]]


def smith_normal_form(m):
    """Return (U, D, V) with U*m*V = D, D diagonal with d_i | d_{i+1}.

    U and V are invertible over the ring.  Supported rings: integers, fields,
    Z/p^n, and the Iwasawa ring when divisibility pivots exist; raises
    UnsupportedRing otherwise.
    """
    u, d, v, _ = smith_normal_form_with_inverse(m)
    return u, d, v


def smith_normal_form_with_inverse(m):
    """Like :func:`smith_normal_form` but also returns V^{-1} (used when
    expressing kernel coordinates for cohomology)."""
    R = m.ring
    a = m.row_list()
    u = Matrix.identity(R, m.rows).row_list()
    v = Matrix.identity(R, m.cols).row_list()
    vinv = Matrix.identity(R, m.cols).row_list()
    nr, nc = m.rows, m.cols

    def pick_pivot(t):
        best = None
        for i in range(t, nr):
            for j in range(t, nc):
                key = R.snf_norm(a[i][j])
                if key is None:
                    continue
                if best is None or key < best[0]:
                    best = (key, i, j)
        return best

    t = 0
    guard = 0
    max_rounds = 64 * (nr + 1) * (nc + 1)
    while t < min(nr, nc):
        guard += 1
        if guard > max_rounds:
            raise UnsupportedRing(
                f"Smith normal form does not terminate over {R.name()}: "
                "no divisibility pivot")
        picked = pick_pivot(t)
        if picked is None:
            break
        _, pi, pj = picked
        if pi != t:
            _swap_rows(a, t, pi)
            _swap_rows(u, t, pi)
        if pj != t:
            _swap_cols(a, t, pj)
            _swap_cols(v, t, pj)
            _swap_rows(vinv, t, pj)
        # clear row and column t; any leftover remainder forces a restart
        # with a smaller pivot
        dirty = False
        for i in range(t + 1, nr):
            if R.is_zero(a[i][t]):
                continue
            q, r = R.divmod(a[i][t], a[t][t])
            if not R.is_zero(q):
                _add_row(R, a, i, t, R.neg(q))
                _add_row(R, u, i, t, R.neg(q))
            if not R.is_zero(r):
                dirty = True
        for j in range(t + 1, nc):
            if R.is_zero(a[t][j]):
                continue
            q, r = R.divmod(a[t][j], a[t][t])
            if not R.is_zero(q):
                _add_col(R, a, j, t, R.neg(q))
                _add_col(R, v, j, t, R.neg(q))
                _add_row(R, vinv, t, j, q)
        if dirty or any(not R.is_zero(a[t][j]) for j in range(t + 1, nc)) \
                or any(not R.is_zero(a[i][t]) for i in range(t + 1, nr)):
            continue
        # pivot must divide the rest of the block for the divisibility chain
        offender = None
        for i in range(t + 1, nr):
            for j in range(t + 1, nc):
                q, r = R.divmod(a[i][j], a[t][t])
                if not R.is_zero(r):
                    offender = i
                    break
            if offender is not None:
                break
        if offender is not None:
            _add_row(R, a, t, offender, R.one())
            _add_row(R, u, t, offender, R.one())
            continue
        t += 1

    # sign normalization over the integers
    from .rings import IntegerRing
    if isinstance(R, IntegerRing):
        for i in range(min(nr, nc)):
            if a[i][i] < 0:
                _scale_row(R, a, i, -1)
                _scale_row(R, u, i, -1)

    U = Matrix.from_rows(R, u) if u else Matrix(R, 0, 0, [])
    V = Matrix.from_rows(R, v) if v else Matrix(R, 0, 0, [])
    D = Matrix.from_rows(R, a) if a else Matrix(R, 0, nc, [])
    Vinv = Matrix.from_rows(R, vinv) if vinv else Matrix(R, 0, 0, [])
    return U, D, V, Vinv


def snf_diagonal(m):
    _, d, _ = smith_normal_form(m)
    return [d[i, i] for i in range(min(d.rows, d.cols))]
