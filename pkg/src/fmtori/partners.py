"""Derived-equivalence partner generation and rigidity certificates.

Every partner of a variety arises as the dual of one of its slope
subtori.  This module enumerates those duals over bounded slope ranges,
attaches cheap numerical fingerprints, searches for explicit unimodular
isomorphism certificates, and packages the principally-polarized rigidity
argument (coprime numerator and denominator force the subtorus to be the
variety itself).

Nothing here decides isomorphism.  A missing certificate at a bound means
exactly that and is reported as such.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .matrices import Mat, integer_kernel, snf
from .parallel import pmap
from .slopes import Slope, SlopeSubvariety, reduce_slope, slope_kernel, slope_subvariety
from .varieties import (
    FiniteSubgroup,
    Homomorphism,
    InternalInvariantViolation,
    NSClass,
    PreconditionError,
    TorusVariety,
    dual,
    is_isomorphism_certificate,
)

# keeps certificate searches from exploding on wide commutants
SEARCH_CANDIDATE_CAP = 500_000


@dataclass(frozen=True)
class Fingerprint:
    """Cheap presentation-level invariants used to compare varieties.

    profiles is the sorted multiset of elementary-divisor tuples of the
    class homomorphisms over all nonzero coefficient vectors bounded by
    profile_bound in the presented basis; degenerate classes contribute the
    marker (0,).  Equal varieties get equal fingerprints; the converse is
    of course false.
    """

    g: int
    ns_rank: int
    profile_bound: int
    profiles: tuple[tuple[int, ...], ...]


def _divisor_profile(c: NSClass) -> tuple[int, ...]:
    if c.is_degenerate():
        return (0,)
    # elementary divisors of the class kernel = Smith diagonal of the class
    d, _, _ = snf(c.e)
    return tuple(d[i, i] for i in range(d.rows) if d[i, i] > 1)


def fingerprint(a: TorusVariety, profile_bound: int | None = None) -> Fingerprint:
    r = len(a.ns_basis)
    if profile_bound is None:
        profile_bound = 2 if r <= 2 else 1
    profiles = []
    for coeffs in itertools.product(range(-profile_bound, profile_bound + 1), repeat=r):
        if not any(coeffs):
            continue
        profiles.append(_divisor_profile(a.ns_class(coeffs)))
    return Fingerprint(a.g, r, profile_bound, tuple(sorted(profiles)))


@dataclass(frozen=True)
class PartnerRecord:
    """A partner with its provenance: the slope, the subtorus, and the
    identity certificate dual(partner) -> subtorus."""

    source: TorusVariety
    slope: Slope
    subvariety: SlopeSubvariety
    partner: TorusVariety
    dual_certificate: Homomorphism


def partner_from_slope(a: TorusVariety, mu: Slope) -> PartnerRecord:
    sv = slope_subvariety(a, mu)
    b = dual(sv.variety, name=f"{a.name}_partner")
    # dualizing twice returns the complex structure on the nose, so the
    # identity matrix certifies dual(b) = subtorus as complex tori
    cert = Homomorphism(dual(b), sv.variety, Mat.identity(a.dim))
    if not is_isomorphism_certificate(cert):
        raise InternalInvariantViolation("identity certificate is not unimodular")
    return PartnerRecord(a, mu, sv, b, cert)


@dataclass(frozen=True)
class PartnerEntry:
    coefficients: tuple[int, ...]
    denominator: int
    slope: Slope
    record: PartnerRecord
    partner_fingerprint: Fingerprint


def _normalized_coefficient_vectors(rank: int, bound: int):
    # first nonzero coefficient positive: a slope and its negative cut out
    # the same subtorus, so only one representative is enumerated
    for coeffs in itertools.product(range(-bound, bound + 1), repeat=rank):
        nz = next((c for c in coeffs if c), None)
        if nz is None or nz < 0:
            continue
        yield coeffs


def enumerate_partners(
    a: TorusVariety, coeff_bound: int, denom_bound: int, threads: int = 1
) -> list[PartnerEntry]:
    """All partners from reduced slopes with bounded coefficients and denominator.

    Deduplication is by reduced-slope equality (never by isomorphism).  The
    result is ordered by (denominator, coefficient vector) of the first
    generating candidate, so output is deterministic for any thread count.
    """
    if coeff_bound < 1 or denom_bound < 1:
        raise PreconditionError("enumeration bounds must be at least 1")
    seen: set[tuple] = set()
    candidates: list[tuple[tuple[int, ...], int, Slope]] = []
    for l in range(1, denom_bound + 1):
        for coeffs in _normalized_coefficient_vectors(len(a.ns_basis), coeff_bound):
            mu = reduce_slope(a.ns_class(coeffs), l)
            key = (mu.numerator.e.data, mu.l)
            if key in seen:
                continue
            seen.add(key)
            candidates.append((coeffs, l, mu))

    def build(item):
        coeffs, l, mu = item
        rec = partner_from_slope(a, mu)
        return PartnerEntry(coeffs, l, mu, rec, fingerprint(rec.partner))

    return pmap(build, candidates, threads)


# -- certificate search ----------------------------------------------------------


def homomorphism_space_basis(src: TorusVariety, dst: TorusVariety) -> tuple[Mat, ...]:
    """Canonical basis of the lattice of integral matrices intertwining the J's.

    The basis is saturated: every integral intertwiner is an integer
    combination of it.
    """
    n, m = src.dim, dst.dim
    cols = []
    for p in range(m):
        for q in range(n):
            e_pq = Mat([[1 if (i, j) == (p, q) else 0 for j in range(n)] for i in range(m)])
            d = e_pq @ src.j - dst.j @ e_pq
            cols.append(tuple(x for row in d.data for x in row))
    ker = integer_kernel(Mat.from_cols(cols))
    out = []
    for j in range(ker.cols):
        v = ker.col(j)
        out.append(Mat([list(v[i * n : (i + 1) * n]) for i in range(m)]))
    return tuple(out)


def find_isomorphism_certificate(
    src: TorusVariety, dst: TorusVariety, bound: int = 3
) -> Homomorphism | None:
    """Deterministic bounded search for a unimodular intertwiner src -> dst.

    Returns the first certificate in lexicographic coefficient order, or
    None if no integral unimodular intertwiner exists with all matrix
    entries bounded by the given bound.  None never means "not isomorphic".
    """
    if src.dim != dst.dim:
        return None
    basis = homomorphism_space_basis(src, dst)
    if not basis:
        return None
    b = Mat.from_cols([tuple(x for row in m.data for x in row) for m in basis])
    # exact coefficient box: x = P @ vec(M) with P a left inverse of the
    # saturated basis, so |x_i| <= bound * (row sum of |P|)
    p = (b.T @ b).inverse() @ b.T
    boxes = []
    for i in range(p.rows):
        s = sum(abs(Fraction(p[i, j])) for j in range(p.cols))
        boxes.append(int(bound * s))
    total = 1
    for c in boxes:
        total *= 2 * c + 1
        if total > SEARCH_CANDIDATE_CAP:
            raise PreconditionError(
                "certificate search space exceeds the candidate cap at this bound"
            )
    for x in itertools.product(*(range(-c, c + 1) for c in boxes)):
        if not any(x):
            continue
        m = Mat.zeros(dst.dim, src.dim)
        for c, base in zip(x, basis):
            if c:
                m = m + c * base
        if any(abs(v) > bound for row in m.data for v in row):
            continue
        if abs(m.det()) != 1:
            continue
        return Homomorphism(src, dst, m)
    return None


# -- principally polarized rigidity ------------------------------------------------


@dataclass(frozen=True)
class RigidityCheck:
    ok: bool
    slope: Slope
    kernel: FiniteSubgroup
    certificate: Homomorphism


def ppav_rigidity_check(a: TorusVariety, n: int, l: int) -> RigidityCheck:
    """For a principal polarization and coprime (n, l): the slope subtorus is
    the variety itself, certified by the unimodular quotient map.

    The kernel of A -> A_mu is the l-torsion meeting the kernel of the n-th
    power of the polarization; coprimality forces it to be trivial, and the
    check verifies exactly that, then hands back the quotient as an
    isomorphism certificate.
    """
    h = a.polarization_class()
    if abs(int(h.det())) != 1:
        raise PreconditionError("designated polarization is not principal")
    if n < 1 or l < 1:
        raise PreconditionError("n and l must be positive")
    if gcd(n, l) != 1:
        raise PreconditionError("n and l must be coprime")
    mu = reduce_slope(NSClass(a, n * h), l)
    kern = slope_kernel(a, mu)
    sv = slope_subvariety(a, mu)
    cert = sv.quotient
    ok = kern.order == 1 and is_isomorphism_certificate(cert)
    if (kern.order == 1) != is_isomorphism_certificate(cert):
        raise InternalInvariantViolation(
            "trivial kernel and unimodular quotient must coincide"
        )
    return RigidityCheck(ok, mu, kern, cert)
