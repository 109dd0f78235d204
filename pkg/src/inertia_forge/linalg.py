"""Exact rational linear algebra for symmetric bilinear forms.

Everything here is over Q (fractions.Fraction); there are no tolerances
anywhere.  Vectors are tuples of Fractions, matrices are tuples of row
tuples.  Rank and determinant use fraction-free (Bareiss) elimination on
integer-scaled rows to keep intermediate entries small.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from math import gcd

Vec = tuple[Fraction, ...]
Mat = tuple[tuple[Fraction, ...], ...]


class DimensionMismatch(ValueError):
    pass


class NotSymmetric(ValueError):
    pass


def vec(entries) -> Vec:
    return tuple(Fraction(x) for x in entries)


def mat(rows) -> Mat:
    out = tuple(vec(r) for r in rows)
    if out and any(len(r) != len(out[0]) for r in out):
        raise DimensionMismatch("ragged rows")
    return out


def identity(n: int) -> Mat:
    one, zero = Fraction(1), Fraction(0)
    return tuple(tuple(one if i == j else zero for j in range(n)) for i in range(n))


def zeros(r: int, c: int) -> Mat:
    zero = Fraction(0)
    return tuple(tuple(zero for _ in range(c)) for _ in range(r))


def transpose(a: Mat) -> Mat:
    return tuple(zip(*a)) if a else ()


def mat_mul(a: Mat, b: Mat) -> Mat:
    if a and b and len(a[0]) != len(b):
        raise DimensionMismatch(f"cannot multiply {len(a)}x{len(a[0])} by {len(b)}x{len(b[0])}")
    bt = transpose(b)
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) for col in bt) for row in a)


def mat_vec(a: Mat, v: Vec) -> Vec:
    if a and len(a[0]) != len(v):
        raise DimensionMismatch("matrix/vector size mismatch")
    return tuple(sum(x * y for x, y in zip(row, v)) for row in a)


def dot(u: Vec, v: Vec) -> Fraction:
    if len(u) != len(v):
        raise DimensionMismatch("vector length mismatch")
    return sum((x * y for x, y in zip(u, v)), Fraction(0))


def vec_add(u: Vec, v: Vec) -> Vec:
    return tuple(x + y for x, y in zip(u, v))


def vec_scale(c, v: Vec) -> Vec:
    c = Fraction(c)
    return tuple(c * x for x in v)


def is_zero_vec(v: Vec) -> bool:
    return all(x == 0 for x in v)


# ---------------------------------------------------------------------------
# fraction-free elimination


def _integer_rows(a) -> list[list[int]]:
    """Scale each row by the lcm of its denominators; rank is unchanged."""
    out = []
    for row in a:
        den = 1
        for x in row:
            d = x.denominator
            den = den * d // gcd(den, d)
        out.append([int(x.numerator * (den // x.denominator)) for x in row])
    return out


def rank(a: Mat) -> int:
    """Rank over Q via Bareiss fraction-free elimination."""
    m = _integer_rows(a)
    nrows = len(m)
    ncols = len(m[0]) if nrows else 0
    r = 0
    prev = 1
    for c in range(ncols):
        if r == nrows:
            break
        piv = next((i for i in range(r, nrows) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        for i in range(r + 1, nrows):
            for j in range(c + 1, ncols):
                m[i][j] = (m[r][c] * m[i][j] - m[i][c] * m[r][j]) // prev
            m[i][c] = 0
        prev = m[r][c]
        r += 1
    return r


def det(a: Mat) -> Fraction:
    """Exact determinant via Bareiss on integer-scaled rows."""
    n = len(a)
    if any(len(row) != n for row in a):
        raise DimensionMismatch("determinant of a non-square matrix")
    if n == 0:
        return Fraction(1)
    scale = Fraction(1)
    m = []
    for row in a:
        den = 1
        for x in row:
            d = x.denominator
            den = den * d // gcd(den, d)
        scale *= den
        m.append([int(x.numerator * (den // x.denominator)) for x in row])
    sign = 1
    prev = 1
    for c in range(n):
        piv = next((i for i in range(c, n) if m[i][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            sign = -sign
        for i in range(c + 1, n):
            for j in range(c + 1, n):
                m[i][j] = (m[c][c] * m[i][j] - m[i][c] * m[c][j]) // prev
            m[i][c] = 0
        prev = m[c][c]
    return Fraction(sign * m[n - 1][n - 1]) / scale


def rref(a) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form; returns (nonzero rows, pivot column indices)."""
    m = [list(row) for row in a]
    nrows = len(m)
    ncols = len(m[0]) if nrows else 0
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        piv = next((i for i in range(r, nrows) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = m[r][c]
        m[r] = [x / inv for x in m[r]]
        for i in range(nrows):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    return m[:r], pivots


def nullspace(a, ncols: int | None = None) -> list[Vec]:
    """Basis of the right null space of `a` (rows may be empty)."""
    rows = [list(r) for r in a]
    if ncols is None:
        if not rows:
            raise DimensionMismatch("nullspace of empty matrix needs ncols")
        ncols = len(rows[0])
    reduced, pivots = rref(rows)
    pivot_set = set(pivots)
    basis = []
    for free in range(ncols):
        if free in pivot_set:
            continue
        v = [Fraction(0)] * ncols
        v[free] = Fraction(1)
        for row, p in zip(reduced, pivots):
            v[p] = -row[free]
        basis.append(tuple(v))
    return basis


# ---------------------------------------------------------------------------
# bilinear forms


@dataclass(frozen=True)
class BilinearForm:
    """Nondegenerate symmetric bilinear form on Q^m, given by its matrix."""

    matrix: Mat

    def __post_init__(self):
        n = len(self.matrix)
        if any(len(row) != n for row in self.matrix):
            raise DimensionMismatch("form matrix must be square")
        if self.matrix != transpose(self.matrix):
            raise NotSymmetric("form matrix must be symmetric")
        if det(self.matrix) == 0:
            raise ValueError("form matrix is singular")

    @property
    def m(self) -> int:
        return len(self.matrix)

    @staticmethod
    def from_rows(rows) -> "BilinearForm":
        return BilinearForm(mat(rows))

    @staticmethod
    def identity(m: int) -> "BilinearForm":
        return BilinearForm(identity(m))

    @staticmethod
    def diagonal(entries) -> "BilinearForm":
        d = vec(entries)
        n = len(d)
        zero = Fraction(0)
        return BilinearForm(tuple(tuple(d[i] if i == j else zero for j in range(n)) for i in range(n)))

    @staticmethod
    def signature(p: int, q: int) -> "BilinearForm":
        """diag(+1 x p, -1 x q)."""
        return BilinearForm.diagonal([1] * p + [-1] * q)


def bilinear(form: BilinearForm, u: Vec, v: Vec) -> Fraction:
    if len(u) != form.m or len(v) != form.m:
        raise DimensionMismatch("vector length does not match form dimension")
    return dot(u, mat_vec(form.matrix, v))


def gram(form: BilinearForm, vectors) -> Mat:
    vs = [vec(v) if not isinstance(v, tuple) else v for v in vectors]
    images = [mat_vec(form.matrix, v) for v in vs]
    return tuple(tuple(dot(u, img) for img in images) for u in vs)


def is_nondegenerate_set(form: BilinearForm, vectors) -> bool:
    """True iff the Gram determinant of the vectors is nonzero."""
    return det(gram(form, vectors)) != 0


# ---------------------------------------------------------------------------
# subspaces


@dataclass(frozen=True)
class Subspace:
    """Subspace of Q^ambient with a canonical reduced row-echelon basis.

    The canonical basis makes equality of subspaces literal tuple equality.
    """

    basis: tuple[Vec, ...]
    ambient: int

    @staticmethod
    def span(vectors, ambient: int) -> "Subspace":
        rows = [vec(v) if not isinstance(v, tuple) else v for v in vectors]
        for r in rows:
            if len(r) != ambient:
                raise DimensionMismatch("vector length does not match ambient dimension")
        reduced, _ = rref(rows)
        return Subspace(tuple(tuple(r) for r in reduced), ambient)

    @staticmethod
    def zero(ambient: int) -> "Subspace":
        return Subspace((), ambient)

    @staticmethod
    def full(ambient: int) -> "Subspace":
        return Subspace(identity(ambient), ambient)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def contains(self, v: Vec) -> bool:
        if len(v) != self.ambient:
            raise DimensionMismatch("vector length does not match ambient dimension")
        resid = list(v)
        for row in self.basis:
            lead = next(i for i, x in enumerate(row) if x != 0)
            if resid[lead] != 0:
                f = resid[lead]
                resid = [x - f * y for x, y in zip(resid, row)]
        return all(x == 0 for x in resid)


def contains(w: Subspace, v: Vec) -> bool:
    return w.contains(v)


def orthogonal_complement(form: BilinearForm, w: Subspace) -> Subspace:
    """All x with B(x, y) = 0 for every y in w."""
    if w.ambient != form.m:
        raise DimensionMismatch("subspace ambient does not match form dimension")
    if w.dim == 0:
        return Subspace.full(form.m)
    constraint = [mat_vec(form.matrix, b) for b in w.basis]
    return Subspace.span(nullspace(constraint, form.m), form.m)


def intersect(a: Subspace, b: Subspace) -> Subspace:
    if a.ambient != b.ambient:
        raise DimensionMismatch("subspaces live in different ambient spaces")
    if a.dim == 0 or b.dim == 0:
        return Subspace.zero(a.ambient)
    # columns are the basis vectors of a followed by the negated basis of b;
    # a null vector (c, d) gives the common point sum c_i a_i.
    stacked = tuple(
        tuple(list(col_a) + [-x for x in col_b])
        for col_a, col_b in zip(zip(*a.basis), zip(*b.basis))
    )
    coeffs = nullspace(stacked, a.dim + b.dim)
    points = []
    for cd in coeffs:
        x = [Fraction(0)] * a.ambient
        for c, bvec in zip(cd[: a.dim], a.basis):
            if c != 0:
                x = [xi + c * bi for xi, bi in zip(x, bvec)]
        points.append(tuple(x))
    return Subspace.span(points, a.ambient)


# ---------------------------------------------------------------------------
# inertia by congruence


@dataclass(frozen=True)
class Inertia:
    positive: int
    negative: int
    zero: int

    @property
    def rank(self) -> int:
        return self.positive + self.negative

    def as_tuple(self) -> tuple[int, int, int]:
        return (self.positive, self.negative, self.zero)


def inertia_congruence(a: Mat) -> Inertia:
    """Inertia by simultaneous row/column (congruence) diagonalization.

    A zero pivot with a nonzero off-diagonal entry is repaired by adding
    row+column j into row+column i, which creates the diagonal entry
    2*a[i][j]; this needs characteristic != 2.
    """
    n = len(a)
    if any(len(row) != n for row in a):
        raise DimensionMismatch("matrix must be square")
    for i in range(n):
        for j in range(i + 1, n):
            if a[i][j] != a[j][i]:
                raise NotSymmetric(f"entry ({i + 1},{j + 1}) != ({j + 1},{i + 1})")
    m = [list(row) for row in a]
    for i in range(n):
        if m[i][i] == 0:
            j = next((j for j in range(i + 1, n) if m[j][j] != 0), None)
            if j is not None:
                m[i], m[j] = m[j], m[i]
                for row in m:
                    row[i], row[j] = row[j], row[i]
            else:
                j = next((j for j in range(i + 1, n) if m[i][j] != 0), None)
                if j is None:
                    continue  # row i is zero on the active block
                for c in range(n):
                    m[i][c] += m[j][c]
                for r in range(n):
                    m[r][i] += m[r][j]
        pivot = m[i][i]
        for r in range(i + 1, n):
            if m[r][i] != 0:
                f = m[r][i] / pivot
                for c in range(n):
                    m[r][c] -= f * m[i][c]
                for rr in range(n):
                    m[rr][r] -= f * m[rr][i]
    pos = sum(1 for i in range(n) if m[i][i] > 0)
    neg = sum(1 for i in range(n) if m[i][i] < 0)
    return Inertia(pos, neg, n - pos - neg)


# ---------------------------------------------------------------------------
# serialization: rationals as "a/b" strings, matrices as JSON


def parse_rational(s: str) -> Fraction:
    s = s.strip()
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"bad rational {s!r}") from exc


def format_rational(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def matrix_to_json(a: Mat) -> dict:
    return {
        "rows": len(a),
        "cols": len(a[0]) if a else 0,
        "data": [[format_rational(x) for x in row] for row in a],
    }


def matrix_from_json(obj: dict) -> Mat:
    try:
        rows, cols, data = obj["rows"], obj["cols"], obj["data"]
    except (KeyError, TypeError) as exc:
        raise ValueError("matrix JSON needs rows, cols, data") from exc
    if len(data) != rows or any(len(r) != cols for r in data):
        raise ValueError("matrix JSON data does not match declared shape")
    return mat([[parse_rational(x) for x in row] for row in data])


def vector_to_strings(v: Vec) -> list[str]:
    return [format_rational(x) for x in v]


def vector_from_strings(items) -> Vec:
    return tuple(parse_rational(x) for x in items)


def dump_matrix(a: Mat, path) -> None:
    with open(path, "w") as fh:
        json.dump(matrix_to_json(a), fh, sort_keys=True, separators=(",", ":"))
        fh.write("\n")


def load_matrix(path) -> Mat:
    with open(path) as fh:
        return matrix_from_json(json.load(fh))
