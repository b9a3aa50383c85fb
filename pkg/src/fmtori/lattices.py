"""Full and partial rank lattices in an ambient Q^n, with exact quotients.

A ``Lattice`` is stored by a canonical basis: the column Hermite form of a
minimal integer rescaling.  Two lattices are equal iff their canonical bases
are equal, so equality, containment and intersection are all decidable
exactly.  ``quotient_structure`` returns the elementary divisors of a finite
quotient; this is where kernel groups K(L) and slope kernels come from.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .matrices import Mat, Scalar, hnf_columns, integer_kernel, snf, solve_exact, vec_is_integral


class DegenerateFormError(ValueError):
    """Raised when a dual lattice of a degenerate form is requested."""


class LatticeContainmentError(ValueError):
    """Raised when a quotient of non-nested lattices is requested."""


@dataclass(frozen=True)
class FiniteGroupStructure:
    """Isomorphism type of a finite abelian group: divisors d1 | d2 | ..., each > 1."""

    divisors: tuple[int, ...]
    order: int

    @staticmethod
    def trivial() -> "FiniteGroupStructure":
        return FiniteGroupStructure((), 1)

    @staticmethod
    def from_diagonal(diag: tuple[int, ...]) -> "FiniteGroupStructure":
        ds = tuple(d for d in diag if d > 1)
        order = 1
        for d in ds:
            order *= d
        return FiniteGroupStructure(ds, order)

    @property
    def exponent(self) -> int:
        return self.divisors[-1] if self.divisors else 1


class Lattice:
    """A finitely generated subgroup of Q^n of full column rank basis."""

    __slots__ = ("ambient_dim", "basis")

    def __init__(self, ambient_dim: int, columns: Mat):
        if columns.rows != ambient_dim:
            raise ValueError("basis rows must match ambient dimension")
        d = columns.denominator()
        b = (d * columns).to_int()
        h, _ = hnf_columns(b)
        keep = [j for j in range(h.cols) if any(h[i, j] != 0 for i in range(h.rows))]
        h = h.submatrix(range(h.rows), keep) if keep else Mat.zeros(ambient_dim, 0)
        if keep:
            g = gcd(h.content(), d)
            if g > 1:
                h = Mat([[x // g for x in row] for row in h.data])
                d //= g
        basis = h if d == 1 else Fraction(1, d) * h
        object.__setattr__(self, "ambient_dim", ambient_dim)
        object.__setattr__(self, "basis", basis)

    def __setattr__(self, *a):  # pragma: no cover - immutability guard
        raise AttributeError("Lattice is immutable")

    @staticmethod
    def standard(n: int) -> "Lattice":
        return Lattice(n, Mat.identity(n))

    @property
    def rank(self) -> int:
        return self.basis.cols

    @property
    def is_full_rank(self) -> bool:
        return self.rank == self.ambient_dim

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Lattice)
            and self.ambient_dim == other.ambient_dim
            and self.basis == other.basis
        )

    def __hash__(self) -> int:
        return hash((self.ambient_dim, self.basis))

    def __repr__(self) -> str:
        return f"Lattice({self.ambient_dim}, {self.basis!r})"

    def scaled(self, c: Scalar) -> "Lattice":
        if c == 0:
            raise ValueError("zero scaling")
        return Lattice(self.ambient_dim, c * self.basis)

    def contains_vector(self, v) -> bool:
        x = solve_exact(self.basis, v)
        return x is not None and vec_is_integral(x)

    def contains_lattice(self, other: "Lattice") -> bool:
        if self.ambient_dim != other.ambient_dim:
            raise ValueError("ambient dimension mismatch")
        return all(self.contains_vector(other.basis.col(j)) for j in range(other.rank))

    def sum(self, other: "Lattice") -> "Lattice":
        if self.ambient_dim != other.ambient_dim:
            raise ValueError("ambient dimension mismatch")
        return Lattice(self.ambient_dim, Mat.hstack(self.basis, other.basis))

    def intersect(self, other: "Lattice") -> "Lattice":
        """Intersection of two lattices in the same ambient space."""
        if self.ambient_dim != other.ambient_dim:
            raise ValueError("ambient dimension mismatch")
        da = self.basis.denominator()
        db = other.basis.denominator()
        d = da * db // gcd(da, db)
        a = (d * self.basis).to_int()
        b = (d * other.basis).to_int()
        k = integer_kernel(Mat.hstack(a, -1 * b))
        alpha = k.submatrix(range(a.cols), range(k.cols))
        if alpha.cols == 0:
            return Lattice(self.ambient_dim, Mat.zeros(self.ambient_dim, 0))
        return Lattice(self.ambient_dim, Fraction(1, d) * (a @ alpha))

    def spans_subspace_of(self, other: "Lattice") -> bool:
        if self.rank == 0:
            return True
        joint = Mat.hstack(other.basis, self.basis)
        return joint.rank() == other.basis.rank()


def sublattice_where_integral(container: Lattice, conditions: Mat) -> Lattice:
    """{v in container : conditions @ v is integral}, as a lattice.

    ``conditions`` may be rational and of any rank; the result is a finite
    index sublattice of ``container``.
    """
    if conditions.cols != container.ambient_dim:
        raise ValueError("condition width must match ambient dimension")
    c = container.basis
    r = conditions @ c
    d = r.denominator()
    if d == 1:
        return container
    ri = (d * r).to_int()
    k = ri.rows
    blocked = Mat.hstack(ri, -d * Mat.identity(k))
    ker = integer_kernel(blocked)
    x = ker.submatrix(range(c.cols), range(ker.cols))
    return Lattice(container.ambient_dim, c @ x)


def dual_lattice_of_form(e: Mat, lam: Lattice) -> Lattice:
    """Dual lattice {v : e(v, w) integral for all w in lam} of an alternating form.

    Raises DegenerateFormError when e is singular (the dual is then not a
    lattice; callers wanting the degenerate variant intersect with a
    containing lattice via sublattice_where_integral).
    """
    if not e.is_alternating():
        raise ValueError("form must be alternating")
    if not lam.is_full_rank:
        raise ValueError("dual lattice needs a full rank lattice")
    if e.det() == 0:
        raise DegenerateFormError("form is degenerate")
    m = lam.basis.T @ e.T
    return Lattice(lam.ambient_dim, m.inverse())


def quotient_structure(sub: Lattice, sup: Lattice) -> FiniteGroupStructure:
    """Elementary divisors of sup/sub for nested full rank lattices."""
    if sub.ambient_dim != sup.ambient_dim:
        raise ValueError("ambient dimension mismatch")
    if not (sub.is_full_rank and sup.is_full_rank):
        raise ValueError("quotient needs full rank lattices")
    x = sup.basis.inverse() @ sub.basis
    if not x.is_integral():
        raise LatticeContainmentError("sub is not contained in sup")
    d, _, _ = snf(x)
    return FiniteGroupStructure.from_diagonal(
        tuple(d[i, i] for i in range(d.rows))
    )


def saturate(l: Lattice, ambient: Lattice) -> Lattice:
    """Smallest lattice containing l and every ambient point of its Q-span."""
    if l.ambient_dim != ambient.ambient_dim:
        raise ValueError("ambient dimension mismatch")
    if not l.spans_subspace_of(ambient):
        raise ValueError("lattice does not span a subspace of the ambient span")
    if l.rank == 0:
        return l
    # ambient points of span(l): annihilate the orthogonal complement of l
    y = integer_kernel(l.basis.T)  # columns span the complement
    if y.cols == 0:
        span_part = ambient
    else:
        c = ambient.basis
        sol = integer_kernel(y.T @ c)
        span_part = Lattice(l.ambient_dim, c @ sol) if sol.cols else Lattice(l.ambient_dim, Mat.zeros(l.ambient_dim, 0))
    return l.sum(span_part)
