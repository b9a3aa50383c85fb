"""Exact Fourier-Mukai partners of abelian varieties presented as tori.

The package computes with polarizable complex tori given by a rational
complex structure on Z^2g and an integral Neron-Severi basis: duals, class
kernels, slope subtori, partner presentations, product-class equivalence
audits, and bounded searches for isomorphism certificates.  All arithmetic
is exact.
"""

from .lattices import (
    DegenerateFormError,
    FiniteGroupStructure,
    Lattice,
    LatticeContainmentError,
)
from .matrices import Mat
from .partners import (
    Fingerprint,
    PartnerEntry,
    PartnerRecord,
    RigidityCheck,
    enumerate_partners,
    find_isomorphism_certificate,
    fingerprint,
    homomorphism_space_basis,
    partner_from_slope,
    ppav_rigidity_check,
)
from .product_audit import (
    AuditItem,
    AuditReport,
    ProductNSClass,
    ProjectionIso,
    assemble,
    audit_equivalence,
    decompose,
    graph_subgroup_equalities,
    is_ample,
    partner_dual_certificate,
    projection_iso,
    search_kernel_class,
    search_product_classes,
    twist_to_ample,
)
from .slopes import (
    ProjectionInvariants,
    Slope,
    SlopeSubvariety,
    member_lattice,
    parse_slope_literal,
    projection_invariants,
    reduce_slope,
    slope_kernel,
    slope_subvariety,
)
from .varieties import (
    FiniteSubgroup,
    Homomorphism,
    InternalInvariantViolation,
    NSClass,
    NotAnIsogenyError,
    PreconditionError,
    TorusVariety,
    ValidationReport,
    VarietyMismatchError,
    class_kernel,
    dual,
    dual_hom,
    image_under,
    intersect_subgroups,
    is_isomorphism_certificate,
    kernel_of,
    ns_pullback,
    polarization_map,
    preimage_under,
    product,
    subgroup_equal,
    torsion_subgroup,
    trivial_subgroup,
    validate,
)

__version__ = "0.1.0"

__all__ = [
    "AuditItem",
    "AuditReport",
    "DegenerateFormError",
    "FiniteGroupStructure",
    "FiniteSubgroup",
    "Fingerprint",
    "Homomorphism",
    "InternalInvariantViolation",
    "Lattice",
    "LatticeContainmentError",
    "Mat",
    "NSClass",
    "NotAnIsogenyError",
    "PartnerEntry",
    "PartnerRecord",
    "PreconditionError",
    "ProductNSClass",
    "ProjectionInvariants",
    "ProjectionIso",
    "RigidityCheck",
    "Slope",
    "SlopeSubvariety",
    "TorusVariety",
    "ValidationReport",
    "VarietyMismatchError",
    "assemble",
    "audit_equivalence",
    "class_kernel",
    "decompose",
    "dual",
    "dual_hom",
    "enumerate_partners",
    "find_isomorphism_certificate",
    "fingerprint",
    "graph_subgroup_equalities",
    "homomorphism_space_basis",
    "image_under",
    "intersect_subgroups",
    "is_ample",
    "is_isomorphism_certificate",
    "kernel_of",
    "member_lattice",
    "ns_pullback",
    "parse_slope_literal",
    "partner_dual_certificate",
    "partner_from_slope",
    "polarization_map",
    "ppav_rigidity_check",
    "preimage_under",
    "product",
    "projection_invariants",
    "projection_iso",
    "reduce_slope",
    "search_kernel_class",
    "search_product_classes",
    "slope_kernel",
    "slope_subvariety",
    "subgroup_equal",
    "torsion_subgroup",
    "trivial_subgroup",
    "twist_to_ample",
    "validate",
]
