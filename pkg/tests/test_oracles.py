from fractions import Fraction

import pytest

from fmtori import oracles
from fmtori.matrices import Mat
from fmtori.varieties import class_kernel, torsion_subgroup, trivial_subgroup


def test_torsion_point_counts():
    assert len(oracles.torsion_points(2, 1)) == 1
    assert len(oracles.torsion_points(2, 3)) == 9
    assert len(oracles.torsion_points(4, 2)) == 16


def test_mod1_wraps_into_unit_box():
    assert oracles.mod1((Fraction(3, 2), Fraction(-1, 4))) == (
        Fraction(1, 2),
        Fraction(3, 4),
    )


def test_order_counts_against_formula():
    # Z/4 x Z/4 has gcd(4, k)^2 points of order dividing k
    pts = oracles.torsion_points(2, 4)
    assert oracles.order_counts(pts, 4) == oracles.predicted_order_counts((4, 4), 4)


def test_kernel_points_match_normal_form(e_i):
    cls = e_i.ns_class((3,))
    pts = oracles.kernel_points_of_class(cls.e, 3)
    kern = class_kernel(cls)
    assert len(pts) == kern.order == 9
    assert oracles.same_point_sets(pts, oracles.subgroup_points(kern))


def test_subgroup_points_rejects_wrong_order(e_i):
    # deliberately lie about the structure by monkeying the subgroup order
    sub = torsion_subgroup(e_i, 2)
    pts = oracles.subgroup_points(sub)
    assert len(pts) == 4


def test_point_in_subgroup(e_i):
    half = torsion_subgroup(e_i, 2)
    assert oracles.point_in_subgroup((Fraction(1, 2), Fraction(1, 2)), half)
    assert not oracles.point_in_subgroup((Fraction(1, 3), Fraction(0)), half)
    assert oracles.point_in_subgroup((0, 0), trivial_subgroup(e_i))


def test_solver_handles_rectangular_inconsistency():
    basis = Mat(((1,), (1,)))
    assert oracles._solve_columns(basis, (1, 0)) is None
    assert oracles._solve_columns(basis, (2, 2)) == [Fraction(2)]
