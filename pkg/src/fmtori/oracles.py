"""Brute-force oracles for the normal-form machinery.

Everything here works by enumerating torsion points and doing modular
arithmetic, with a self-contained rational solver for coset membership.
Deliberately no Hermite or Smith forms: these functions are the second
route that the canonical-form pipeline is tested against, so they must not
share its failure modes.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from math import gcd

from .matrices import Mat
from .varieties import FiniteSubgroup


def mod1(v) -> tuple[Fraction, ...]:
    return tuple(Fraction(x) % 1 for x in v)


def is_integral_vector(v) -> bool:
    return all(Fraction(x).denominator == 1 for x in v)


def torsion_points(dim: int, n: int) -> list[tuple[Fraction, ...]]:
    """All points of order dividing n, as coordinate tuples in [0, 1)."""
    line = [Fraction(k, n) for k in range(n)]
    return [pt for pt in itertools.product(line, repeat=dim)]


def apply_mod1(m: Mat, point) -> tuple[Fraction, ...]:
    return mod1(m.apply(point))


def kernel_points_of_class(e: Mat, l: int) -> list[tuple[Fraction, ...]]:
    """Points of order dividing l annihilated by the class, by enumeration."""
    return [p for p in torsion_points(e.cols, l) if is_integral_vector(e.apply(p))]


def order_counts(points, upto: int) -> dict[int, int]:
    """For each k <= upto, how many of the points are killed by k."""
    out = {}
    for k in range(1, upto + 1):
        out[k] = sum(1 for p in points if all((k * x) % 1 == 0 for x in p))
    return out


def predicted_order_counts(divisors, upto: int) -> dict[int, int]:
    """Order counts of the abelian group with the given elementary divisors."""
    out = {}
    for k in range(1, upto + 1):
        n = 1
        for d in divisors:
            n *= gcd(d, k)
        out[k] = n
    return out


def _solve_columns(basis: Mat, rhs) -> list[Fraction] | None:
    """Plain Gaussian elimination on [basis | rhs], free of normal forms."""
    rows = [[Fraction(basis[i, j]) for j in range(basis.cols)] + [Fraction(rhs[i])]
            for i in range(basis.rows)]
    ncols = basis.cols
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        rows[r] = [x / rows[r][c] for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    for i in range(r, len(rows)):
        if rows[i][-1] != 0:
            return None
    sol = [Fraction(0)] * ncols
    for i, c in enumerate(pivots):
        sol[c] = rows[i][-1]
    return sol


def point_in_subgroup(point, sub: FiniteSubgroup) -> bool:
    """Coset membership by solving against the overlattice generators."""
    basis = sub.overlattice.basis
    sol = _solve_columns(basis, point)
    return sol is not None and all(x.denominator == 1 for x in sol)


def subgroup_points(sub: FiniteSubgroup) -> list[tuple[Fraction, ...]]:
    """All points of the subgroup, enumerated through its exponent torsion."""
    e = sub.structure.exponent
    pts = [p for p in torsion_points(sub.variety.dim, e) if point_in_subgroup(p, sub)]
    if len(pts) != sub.order:
        raise AssertionError(
            f"enumeration found {len(pts)} points, structure claims {sub.order}"
        )
    return pts


def same_point_sets(ps, qs) -> bool:
    return set(map(tuple, ps)) == set(map(tuple, qs))
