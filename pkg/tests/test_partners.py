import pytest

from fmtori.matrices import Mat
from fmtori.partners import (
    SEARCH_CANDIDATE_CAP,
    enumerate_partners,
    find_isomorphism_certificate,
    fingerprint,
    homomorphism_space_basis,
    partner_from_slope,
    ppav_rigidity_check,
)
from fmtori.slopes import Slope, reduce_slope
from fmtori.varieties import (
    PreconditionError,
    dual,
    is_isomorphism_certificate,
    validate,
)


def test_fingerprint_of_square_curve(e_i):
    fp = fingerprint(e_i)
    assert fp.g == 1 and fp.ns_rank == 1
    assert fp.profile_bound == 2
    # profiles at bound 2: the trivial one for +-E0 and (2,2) for +-2E0
    assert fp.profiles == ((), (), (2, 2), (2, 2))


def test_fingerprint_is_coarse(e_i, e_2i):
    assert fingerprint(e_i) == fingerprint(dual(e_i))
    # E_i and E_2i share every kernel profile; only the certificate search
    # (below) tells them apart
    assert fingerprint(e_i) == fingerprint(e_2i)


def test_fingerprint_sees_rank(e_i, e_i_squared):
    assert fingerprint(e_i).ns_rank != fingerprint(e_i_squared).ns_rank


def test_partner_record_certificate(e_i):
    rec = partner_from_slope(e_i, Slope(e_i.ns_class((1,)), 2))
    assert validate(rec.partner).ok
    assert is_isomorphism_certificate(rec.dual_certificate)
    assert fingerprint(rec.partner) == fingerprint(e_i)


def test_enumerate_partners_dedups_signs(e_i):
    entries = enumerate_partners(e_i, 1, 1)
    # +-E0 give the same member lattice; the zero class is skipped
    assert len(entries) == 1
    assert entries[0].coefficients == (1,)
    assert entries[0].denominator == 1


def test_enumerate_partners_ordering_and_threads(e_i):
    one = enumerate_partners(e_i, 2, 3)
    four = enumerate_partners(e_i, 2, 3, threads=4)
    assert [(e.coefficients, e.denominator) for e in one] == [
        (e.coefficients, e.denominator) for e in four
    ]
    denominators = [e.denominator for e in one]
    assert denominators == sorted(denominators)


def test_enumerate_partners_rejects_bad_bounds(e_i):
    with pytest.raises(PreconditionError):
        enumerate_partners(e_i, 0, 1)
    with pytest.raises(PreconditionError):
        enumerate_partners(e_i, 1, 0)


def test_homomorphism_space_of_square_curve(e_i):
    basis = homomorphism_space_basis(e_i, e_i)
    assert len(basis) == 2  # the order Z[i]
    assert Mat.identity(2) in basis or -Mat.identity(2) in basis


def test_homomorphism_space_between_distinct_curves(e_i, e_2i):
    basis = homomorphism_space_basis(e_i, e_2i)
    # Hom(E_i, E_2i) is still rank 2: multiplication by 2 composed with CM
    assert len(basis) == 2
    for m in basis:
        assert m @ e_i.j == e_2i.j @ m


def test_certificate_search_finds_rotation(e_i):
    cert = find_isomorphism_certificate(e_i, e_i, bound=1)
    assert cert is not None
    assert is_isomorphism_certificate(cert)


def test_certificate_search_respects_dimension_mismatch(e_i, e_i_squared):
    assert find_isomorphism_certificate(e_i, e_i_squared) is None


def test_certificate_search_between_nonisomorphic_curves(e_i, e_2i):
    assert find_isomorphism_certificate(e_i, e_2i, bound=4) is None


def test_rigidity_over_small_coprime_pairs(e_i):
    for n in range(1, 5):
        for l in range(1, 5):
            if __import__("math").gcd(n, l) != 1:
                continue
            check = ppav_rigidity_check(e_i, n, l)
            assert check.ok
            assert check.kernel.order == 1
            assert is_isomorphism_certificate(check.certificate)


def test_rigidity_preconditions(e_i, e_i_squared):
    with pytest.raises(PreconditionError):
        ppav_rigidity_check(e_i, 2, 2)
    with pytest.raises(PreconditionError):
        ppav_rigidity_check(e_i, 0, 1)
    # the full product polarization has degree 1, so it qualifies; a scaled
    # one does not
    from fmtori.varieties import TorusVariety

    scaled = TorusVariety(
        e_i.g, e_i.j, (2 * e_i.ns_basis[0],), (1,), name="non-principal"
    )
    with pytest.raises(PreconditionError):
        ppav_rigidity_check(scaled, 1, 2)


def test_partner_entries_on_product(e_i_squared):
    entries = enumerate_partners(e_i_squared, 1, 1)
    assert entries
    for entry in entries:
        assert entry.record.partner.g == 2
        assert is_isomorphism_certificate(entry.record.dual_certificate)


def test_search_cap_is_exposed():
    assert SEARCH_CANDIDATE_CAP >= 10_000
