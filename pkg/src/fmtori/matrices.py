"""Exact matrices over the integers and rationals.

Everything downstream (lattices, tori, slope subvarieties, audits) runs on
exact arithmetic: Python ints and ``fractions.Fraction``.  ``Mat`` is a small
immutable matrix type; the module-level functions supply the integer normal
forms (column Hermite and Smith, each with its unimodular transforms),
saturated integer kernels, and exact linear solvers.  No floating point
appears anywhere in the package.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Sequence

Scalar = int | Fraction
Vec = tuple[Scalar, ...]


def _exact(x: Scalar) -> Scalar:
    # normalize Fraction(n, 1) down to int so reprs and hashes stay clean
    if isinstance(x, int):
        return x
    if isinstance(x, Fraction):
        return int(x) if x.denominator == 1 else x
    raise TypeError(f"exact scalar expected, got {type(x).__name__}")


class Mat:
    """Immutable exact matrix (entries int or Fraction)."""

    __slots__ = ("rows", "cols", "data")

    def __init__(self, data: Iterable[Iterable[Scalar]]):
        d = tuple(tuple(_exact(x) for x in row) for row in data)
        object.__setattr__(self, "data", d)
        object.__setattr__(self, "rows", len(d))
        object.__setattr__(self, "cols", len(d[0]) if d else 0)
        for row in d:
            if len(row) != self.cols:
                raise ValueError("ragged matrix")

    def __setattr__(self, *a):  # pragma: no cover - immutability guard
        raise AttributeError("Mat is immutable")

    # -- construction -----------------------------------------------------

    @staticmethod
    def identity(n: int) -> "Mat":
        return Mat([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @staticmethod
    def zeros(r: int, c: int) -> "Mat":
        return Mat([[0] * c for _ in range(r)])

    @staticmethod
    def diag(entries: Sequence[Scalar]) -> "Mat":
        n = len(entries)
        return Mat([[entries[i] if i == j else 0 for j in range(n)] for i in range(n)])

    @staticmethod
    def from_cols(cols: Sequence[Sequence[Scalar]]) -> "Mat":
        if not cols:
            raise ValueError("need at least one column")
        n = len(cols[0])
        return Mat([[col[i] for col in cols] for i in range(n)])

    @staticmethod
    def hstack(*mats: "Mat") -> "Mat":
        r = mats[0].rows
        if any(m.rows != r for m in mats):
            raise ValueError("row count mismatch in hstack")
        return Mat([sum((m.data[i] for m in mats), ()) for i in range(r)])

    @staticmethod
    def vstack(*mats: "Mat") -> "Mat":
        c = mats[0].cols
        if any(m.cols != c for m in mats):
            raise ValueError("column count mismatch in vstack")
        return Mat([row for m in mats for row in m.data])

    @staticmethod
    def block(rows_of_blocks: Sequence[Sequence["Mat"]]) -> "Mat":
        return Mat.vstack(*[Mat.hstack(*row) for row in rows_of_blocks])

    # -- access ------------------------------------------------------------

    def __getitem__(self, ij: tuple[int, int]) -> Scalar:
        i, j = ij
        return self.data[i][j]

    def row(self, i: int) -> Vec:
        return self.data[i]

    def col(self, j: int) -> Vec:
        return tuple(self.data[i][j] for i in range(self.rows))

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "Mat":
        return Mat([[self.data[i][j] for j in cols] for i in rows])

    @property
    def T(self) -> "Mat":
        return Mat([self.col(j) for j in range(self.cols)])

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other: "Mat") -> "Mat":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape mismatch")
        return Mat(
            [
                [a + b for a, b in zip(r1, r2)]
                for r1, r2 in zip(self.data, other.data)
            ]
        )

    def __sub__(self, other: "Mat") -> "Mat":
        return self + (-other)

    def __neg__(self) -> "Mat":
        return Mat([[-x for x in row] for row in self.data])

    def __rmul__(self, c: Scalar) -> "Mat":
        return Mat([[c * x for x in row] for row in self.data])

    def __matmul__(self, other: "Mat") -> "Mat":
        if self.cols != other.rows:
            raise ValueError("shape mismatch in product")
        ot = other.T.data
        return Mat(
            [
                [sum(a * b for a, b in zip(row, col)) for col in ot]
                for row in self.data
            ]
        )

    def apply(self, v: Sequence[Scalar]) -> Vec:
        if len(v) != self.cols:
            raise ValueError("vector length mismatch")
        return tuple(sum(a * b for a, b in zip(row, v)) for row in self.data)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Mat) and self.data == other.data

    def __hash__(self) -> int:
        return hash(self.data)

    def __repr__(self) -> str:
        return f"Mat({[list(r) for r in self.data]})"

    # -- predicates and scalar invariants ------------------------------------

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def is_zero(self) -> bool:
        return all(x == 0 for row in self.data for x in row)

    def is_integral(self) -> bool:
        return all(isinstance(x, int) for row in self.data for x in row)

    def is_alternating(self) -> bool:
        return self.is_square and self.T == -self

    def denominator(self) -> int:
        """lcm of entry denominators (1 for an integer matrix)."""
        d = 1
        for row in self.data:
            for x in row:
                if isinstance(x, Fraction):
                    d = lcm(d, x.denominator)
        return d

    def content(self) -> int:
        """gcd of the absolute entries of an integral matrix (0 if zero)."""
        if not self.is_integral():
            raise ValueError("content is defined for integral matrices")
        g = 0
        for row in self.data:
            for x in row:
                g = gcd(g, abs(x))
        return g

    def to_int(self) -> "Mat":
        if not self.is_integral():
            raise ValueError("matrix is not integral")
        return self

    def det(self) -> Scalar:
        """Determinant by exact fraction-free-ish Gaussian elimination."""
        if not self.is_square:
            raise ValueError("determinant of a non-square matrix")
        n = self.rows
        a = [[Fraction(x) for x in row] for row in self.data]
        det = Fraction(1)
        for k in range(n):
            piv = next((i for i in range(k, n) if a[i][k] != 0), None)
            if piv is None:
                return 0
            if piv != k:
                a[k], a[piv] = a[piv], a[k]
                det = -det
            det *= a[k][k]
            inv = 1 / a[k][k]
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    f = a[i][k] * inv
                    for j in range(k, n):
                        a[i][j] -= f * a[k][j]
        return _exact(det)

    def inverse(self) -> "Mat":
        if not self.is_square:
            raise ValueError("inverse of a non-square matrix")
        n = self.rows
        a = [
            [Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
            for i, row in enumerate(self.data)
        ]
        for k in range(n):
            piv = next((i for i in range(k, n) if a[i][k] != 0), None)
            if piv is None:
                raise ValueError("matrix is singular")
            a[k], a[piv] = a[piv], a[k]
            inv = 1 / a[k][k]
            a[k] = [x * inv for x in a[k]]
            for i in range(n):
                if i != k and a[i][k] != 0:
                    f = a[i][k]
                    a[i] = [x - f * y for x, y in zip(a[i], a[k])]
        return Mat([row[n:] for row in a])

    def rank(self) -> int:
        a = [[Fraction(x) for x in row] for row in self.data]
        r = 0
        for j in range(self.cols):
            piv = next((i for i in range(r, self.rows) if a[i][j] != 0), None)
            if piv is None:
                continue
            a[r], a[piv] = a[piv], a[r]
            inv = 1 / a[r][j]
            a[r] = [x * inv for x in a[r]]
            for i in range(self.rows):
                if i != r and a[i][j] != 0:
                    f = a[i][j]
                    a[i] = [x - f * y for x, y in zip(a[i], a[r])]
            r += 1
            if r == self.rows:
                break
        return r


# -- vector helpers ---------------------------------------------------------


def vec_add(u: Sequence[Scalar], v: Sequence[Scalar]) -> Vec:
    return tuple(_exact(a + b) for a, b in zip(u, v))

def vec_sub(u: Sequence[Scalar], v: Sequence[Scalar]) -> Vec:
    return tuple(_exact(a - b) for a, b in zip(u, v))

def vec_scale(c: Scalar, v: Sequence[Scalar]) -> Vec:
    return tuple(_exact(c * x) for x in v)

def vec_is_integral(v: Sequence[Scalar]) -> bool:
    return all(Fraction(x).denominator == 1 for x in v)

def vec_mod1(v: Sequence[Scalar]) -> Vec:
    """Reduce each coordinate into [0, 1); the residue of a torus point."""
    return tuple(_exact(Fraction(x) - (Fraction(x).numerator // Fraction(x).denominator)) for x in v)


# -- normal forms -------------------------------------------------------------


def _row_hnf(a: list[list[int]]) -> tuple[list[list[int]], list[list[int]]]:
    """Row Hermite form H of a with unimodular U, H == U @ a.

    Canonical: pivots positive, entries above a pivot reduced into
    [0, pivot), zero rows last, pivot columns strictly increasing.
    """
    m = len(a)
    h = [row[:] for row in a]
    u = [[int(i == j) for j in range(m)] for i in range(m)]
    n = len(a[0]) if a else 0
    pr = 0
    for col in range(n):
        while True:
            nz = [i for i in range(pr, m) if h[i][col] != 0]
            if not nz:
                break
            i0 = min(nz, key=lambda i: (abs(h[i][col]), i))
            if i0 != pr:
                h[pr], h[i0] = h[i0], h[pr]
                u[pr], u[i0] = u[i0], u[pr]
            p = h[pr][col]
            done = True
            for i in range(pr + 1, m):
                if h[i][col] != 0:
                    q = h[i][col] // p
                    h[i] = [x - q * y for x, y in zip(h[i], h[pr])]
                    u[i] = [x - q * y for x, y in zip(u[i], u[pr])]
                    if h[i][col] != 0:
                        done = False  # remainder left, need a smaller pivot
            if done:
                break
        if pr < m and h[pr][col] != 0:
            if h[pr][col] < 0:
                h[pr] = [-x for x in h[pr]]
                u[pr] = [-x for x in u[pr]]
            p = h[pr][col]
            for i in range(pr):
                q = h[i][col] // p
                if q:
                    h[i] = [x - q * y for x, y in zip(h[i], h[pr])]
                    u[i] = [x - q * y for x, y in zip(u[i], u[pr])]
            pr += 1
            if pr == m:
                break
    return h, u


def hnf_columns(m: Mat) -> tuple[Mat, Mat]:
    """Column Hermite normal form: returns (h, u) with h == m @ u, u unimodular.

    h is the canonical column form of the column span; zero columns, if
    any, sit at the end.
    """
    mt = [list(m.col(j)) for j in range(m.cols)]
    for row in mt:
        for x in row:
            if not isinstance(x, int):
                raise ValueError("hermite form needs an integral matrix")
    h, u = _row_hnf(mt)
    return Mat(h).T, Mat(u).T


def snf(m: Mat) -> tuple[Mat, Mat, Mat]:
    """Smith normal form: returns (d, u, v) with d == u @ m @ v.

    u, v unimodular; d diagonal with nonnegative entries forming a
    divisibility chain d1 | d2 | ... (zeros last).  Pivots are chosen by
    minimal absolute value.
    """
    if not m.is_integral():
        raise ValueError("smith form needs an integral matrix")
    rows, cols = m.rows, m.cols
    a = [list(r) for r in m.data]
    u = [[int(i == j) for j in range(rows)] for i in range(rows)]
    v = [[int(i == j) for j in range(cols)] for i in range(cols)]
    t = 0
    while t < min(rows, cols):
        best = None
        for i in range(t, rows):
            for j in range(t, cols):
                x = a[i][j]
                if x != 0 and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
        if best is None:
            break
        _, i0, j0 = best
        if i0 != t:
            a[t], a[i0] = a[i0], a[t]
            u[t], u[i0] = u[i0], u[t]
        if j0 != t:
            for row in a:
                row[t], row[j0] = row[j0], row[t]
            for row in v:
                row[t], row[j0] = row[j0], row[t]
        while True:
            p = a[t][t]
            dirty = False
            for i in range(t + 1, rows):
                if a[i][t] != 0:
                    q = a[i][t] // p
                    a[i] = [x - q * y for x, y in zip(a[i], a[t])]
                    u[i] = [x - q * y for x, y in zip(u[i], u[t])]
                    if a[i][t] != 0:
                        # remainder is a strictly smaller pivot; promote it
                        a[t], a[i] = a[i], a[t]
                        u[t], u[i] = u[i], u[t]
                        dirty = True
                        break
            if dirty:
                continue
            for j in range(t + 1, cols):
                if a[t][j] != 0:
                    q = a[t][j] // p
                    for row in a:
                        row[j] -= q * row[t]
                    for row in v:
                        row[j] -= q * row[t]
                    if a[t][j] != 0:
                        for row in a:
                            row[t], row[j] = row[j], row[t]
                        for row in v:
                            row[t], row[j] = row[j], row[t]
                        dirty = True
                        break
            if dirty:
                continue
            # row and column are clear; enforce divisibility of the rest
            culprit = None
            for i in range(t + 1, rows):
                for j in range(t + 1, cols):
                    if a[i][j] % p != 0:
                        culprit = i
                        break
                if culprit is not None:
                    break
            if culprit is None:
                break
            a[t] = [x + y for x, y in zip(a[t], a[culprit])]
            u[t] = [x + y for x, y in zip(u[t], u[culprit])]
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
        t += 1
    return Mat(a), Mat(u), Mat(v)


def integer_kernel(m: Mat) -> Mat:
    """Saturated basis of {x in Z^n : m @ x = 0}, as matrix columns.

    Accepts a rational matrix (the kernel only depends on the row span).
    Returns an n x k matrix, k possibly 0.
    """
    d = m.denominator()
    mi = (d * m).to_int() if d != 1 else m.to_int()
    dd, _, v = snf(mi)
    r = sum(1 for i in range(min(dd.rows, dd.cols)) if dd[i, i] != 0)
    cols = [v.col(j) for j in range(r, v.cols)]
    if not cols:
        return Mat.zeros(m.cols, 0) if m.cols else Mat([[]])
    h, _ = hnf_columns(Mat.from_cols(cols))
    keep = [j for j in range(h.cols) if any(h[i, j] != 0 for i in range(h.rows))]
    return h.submatrix(range(h.rows), keep)


def solve_exact(a: Mat, b: Sequence[Scalar]) -> Vec | None:
    """One exact solution x of a @ x = b, or None if inconsistent.

    Free coordinates (if any) are set to zero; for a of full column rank
    the solution is unique.
    """
    if len(b) != a.rows:
        raise ValueError("dimension mismatch")
    aug = [[Fraction(x) for x in row] + [Fraction(y)] for row, y in zip(a.data, b)]
    n = a.cols
    pivots: list[int] = []
    r = 0
    for j in range(n):
        piv = next((i for i in range(r, a.rows) if aug[i][j] != 0), None)
        if piv is None:
            continue
        aug[r], aug[piv] = aug[piv], aug[r]
        inv = 1 / aug[r][j]
        aug[r] = [x * inv for x in aug[r]]
        for i in range(a.rows):
            if i != r and aug[i][j] != 0:
                f = aug[i][j]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[r])]
        pivots.append(j)
        r += 1
    for i in range(r, a.rows):
        if aug[i][n] != 0:
            return None
    x = [Fraction(0)] * n
    for i, j in enumerate(pivots):
        x[j] = aug[i][n]
    return tuple(_exact(xi) for xi in x)
