from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from fmtori.lattices import (
    FiniteGroupStructure,
    Lattice,
    LatticeContainmentError,
    dual_lattice_of_form,
    quotient_structure,
    saturate,
    sublattice_where_integral,
)
from fmtori.matrices import Mat

small = st.integers(min_value=-4, max_value=4)


def full_rank_lattices(n=2, scale_denominators=(1, 2, 3)):
    def build(entries, den):
        m = Mat(tuple(tuple(Fraction(v, den) for v in row) for row in entries))
        return m

    return (
        st.tuples(
            st.lists(st.lists(small, min_size=n, max_size=n), min_size=n, max_size=n),
            st.sampled_from(scale_denominators),
        )
        .map(lambda t: build(t[0], t[1]))
        .filter(lambda m: m.det() != 0)
        .map(lambda m: Lattice(n, m))
    )


def test_standard_and_scaled():
    lam = Lattice.standard(2)
    half = lam.scaled(Fraction(1, 2))
    assert half.contains_lattice(lam)
    assert not lam.contains_lattice(half)
    assert half.contains_vector((Fraction(1, 2), Fraction(3, 2)))


def test_canonical_basis_is_presentation_independent():
    a = Lattice(2, Mat(((1, 0), (0, 1))))
    b = Lattice(2, Mat(((1, 3), (0, 1))))  # same lattice, shear basis
    assert a == b
    assert a.basis == b.basis


def test_quotient_structure_counts_index():
    sup = Lattice.standard(2).scaled(Fraction(1, 6))
    q = quotient_structure(Lattice.standard(2), sup)
    assert q.order == 36
    assert q.divisors == (6, 6)
    assert q.exponent == 6


def test_quotient_requires_containment():
    shifted = Lattice(2, Mat(((Fraction(1, 2), 0), (0, 1))))
    shrunk = Lattice(2, Mat(((Fraction(1, 3), 0), (0, 1))))
    with pytest.raises(LatticeContainmentError):
        quotient_structure(shifted, shrunk)


def test_sum_and_intersection_against_definitions():
    a = Lattice(2, Mat(((Fraction(1, 2), 0), (0, 1))))
    b = Lattice(2, Mat(((1, 0), (0, Fraction(1, 3)))))
    s = a.sum(b)
    i = a.intersect(b)
    assert s.contains_lattice(a) and s.contains_lattice(b)
    assert a.contains_lattice(i) and b.contains_lattice(i)
    # index multiplicativity pins both down for these diagonal lattices
    assert quotient_structure(i, s).order == 6


@given(full_rank_lattices(), full_rank_lattices())
def test_sum_is_smallest_and_intersection_largest(a, b):
    s = a.sum(b)
    i = a.intersect(b)
    assert s.contains_lattice(a) and s.contains_lattice(b)
    assert a.contains_lattice(i) and b.contains_lattice(i)
    # modularity of indices: [S : A][A : I] = [S : B][B : I]
    left = quotient_structure(a, s).order * quotient_structure(i, a).order
    right = quotient_structure(b, s).order * quotient_structure(i, b).order
    assert left == right


def test_sublattice_where_integral():
    window = Lattice.standard(2).scaled(Fraction(1, 2))
    e = Mat(((0, 2), (-2, 0)))
    lam = sublattice_where_integral(window, e)
    # every half point already pairs integrally under 2*(alternating form)
    assert lam == window
    strict = sublattice_where_integral(window, Mat(((0, 1), (-1, 0))))
    assert strict == Lattice.standard(2)


def test_sublattice_where_integral_degenerate_condition():
    window = Lattice.standard(2).scaled(Fraction(1, 4))
    rank_one = Mat(((1, 0), (0, 0)))
    lam = sublattice_where_integral(window, rank_one)
    assert lam.contains_vector((0, Fraction(1, 4)))
    assert not lam.contains_vector((Fraction(1, 4), 0))


def test_dual_lattice_of_form_degree():
    e = Mat(((0, 3), (-3, 0)))
    dual = dual_lattice_of_form(e, Lattice.standard(2))
    assert quotient_structure(Lattice.standard(2), dual).order == 9


def test_saturate_divides_out_content():
    thin = Lattice(2, Mat(((2, 0), (0, 2))))
    assert saturate(thin, Lattice.standard(2)) == Lattice.standard(2)


def test_group_structure_normalization():
    s = FiniteGroupStructure.from_diagonal((1, 2, 2, 6))
    assert s.divisors == (2, 2, 6)
    assert s.order == 24
    assert s.exponent == 6
    assert FiniteGroupStructure.trivial().exponent == 1
