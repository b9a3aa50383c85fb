"""Block classes on a product of two tori and the kernel-bundle audit.

An alternating class on A x B decomposes into diagonal blocks (classes on
the factors) and an off-diagonal correspondence block, which is the matrix
of a homomorphism from A into the dual of B.  For a reduced slope built
from such a class, a battery of exact identities characterizes when the
class is the numerical shadow of a kernel bundle inducing a derived
equivalence: the slope-subtorus kernel has order l^2, the correspondence
homomorphism is an isogeny of degree l^(2g-2), its kernel sits inside the
right class kernels and torsion, the two partial graphs over torsion agree,
and the subtorus torsion is generated by the displayed tuples.

The audit never proves an equivalence; it machine-checks every numerical
consequence and reports each comparison separately.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd

from .lattices import Lattice, sublattice_where_integral
from .matrices import Mat
from .parallel import pmap
from .partners import find_isomorphism_certificate
from .slopes import Slope, reduce_slope, slope_kernel, slope_subvariety
from .varieties import (
    FiniteSubgroup,
    Homomorphism,
    InternalInvariantViolation,
    NSClass,
    PreconditionError,
    TorusVariety,
    dual,
    image_under,
    is_isomorphism_certificate,
    lift_second,
    product,
    torsion_subgroup,
)


def is_ample(c: NSClass) -> bool:
    """Positivity of the associated symmetric form, checked by exact minors."""
    s = c.e @ c.variety.j
    for k in range(1, s.rows + 1):
        if s.submatrix(range(k), range(k)).det() <= 0:
            return False
    return True


@lru_cache(maxsize=None)
def _product_variety(a: TorusVariety, b: TorusVariety) -> TorusVariety:
    return product(a, b).variety


@lru_cache(maxsize=None)
def _dual_product_variety(a: TorusVariety, b: TorusVariety) -> TorusVariety:
    return product(dual(a), dual(b), name=f"{a.name}^x{b.name}^").variety


@dataclass(frozen=True, eq=False)
class ProductNSClass:
    """An integral alternating compatible class on A x B, with block access."""

    a: TorusVariety
    b: TorusVariety
    m: Mat
    name: str = "M"

    def __post_init__(self):
        # full validation (integrality, alternation, block J-compatibility)
        NSClass(_product_variety(self.a, self.b), self.m)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, ProductNSClass)
            and self.a == other.a
            and self.b == other.b
            and self.m == other.m
        )

    def __hash__(self) -> int:
        return hash((self.a, self.b, self.m))

    @property
    def block_a(self) -> NSClass:
        n = self.a.dim
        return NSClass(self.a, self.m.submatrix(range(n), range(n)))

    @property
    def block_b(self) -> NSClass:
        n, k = self.a.dim, self.b.dim
        return NSClass(self.b, self.m.submatrix(range(n, n + k), range(n, n + k)))

    @property
    def correspondence(self) -> Mat:
        n, k = self.a.dim, self.b.dim
        return self.m.submatrix(range(n), range(n, n + k))

    def as_class(self) -> NSClass:
        return NSClass(_product_variety(self.a, self.b), self.m)


def assemble(a: TorusVariety, b: TorusVariety, block_a: Mat, corr: Mat, block_b: Mat) -> ProductNSClass:
    m = Mat.block([[block_a, corr], [-1 * corr.T, block_b]])
    return ProductNSClass(a, b, m)


def decompose(pc: ProductNSClass) -> tuple[NSClass, Homomorphism, NSClass]:
    """Diagonal blocks plus the correspondence homomorphism A -> dual(B).

    The homomorphism matrix is the transpose of the correspondence block:
    the block pairs A-coordinates against B-coordinates, and reading it on
    the dual basis of B transposes it.
    """
    pi = Homomorphism(pc.a, dual(pc.b), pc.correspondence.T)
    return pc.block_a, pi, pc.block_b


def check_pi_isogeny(pi: Homomorphism) -> bool:
    return pi.is_isogeny()


@dataclass(frozen=True)
class AuditItem:
    name: str
    passed: bool
    expected: str
    actual: str


@dataclass(frozen=True)
class AuditReport:
    a_name: str
    b_name: str
    l: int
    items: tuple[AuditItem, ...]
    all_pass: bool


def _item(name: str, expected, actual) -> AuditItem:
    return AuditItem(name, expected == actual, str(expected), str(actual))


def _kernel_inside(kernel: FiniteSubgroup, cls: Mat, l: int) -> bool:
    # kernel of an isogeny lies in ker(class hom) iff the class is integral
    # on the kernel's overlattice; torsion containment is a lattice inclusion
    over = kernel.overlattice
    shell = Lattice.standard(over.ambient_dim).scaled(Fraction(1, l))
    return shell.contains_lattice(over) and (cls @ over.basis).is_integral()


def _graph_homs(pc: ProductNSClass) -> tuple[Homomorphism, Homomorphism]:
    """The two partial-graph maps into dual(A) x dual(B).

    Composing the class homomorphism of the product class with the two
    factor inclusions splits the class matrix into its column halves; the
    images of l-torsion under these two maps are the graph subgroups the
    theory compares.
    """
    dp = _dual_product_variety(pc.a, pc.b)
    na = pc.a.dim
    cols_a = pc.m.submatrix(range(pc.m.rows), range(na))
    cols_b = pc.m.submatrix(range(pc.m.rows), range(na, pc.m.cols))
    return Homomorphism(pc.a, dp, cols_a), Homomorphism(pc.b, dp, cols_b)


@dataclass(frozen=True)
class GraphComparison:
    first: FiniteSubgroup
    second: FiniteSubgroup
    equal: bool
    order: int


def graph_subgroup_comparison(pc: ProductNSClass, l: int) -> GraphComparison:
    ga, gb = _graph_homs(pc)
    g1 = image_under(ga, torsion_subgroup(pc.a, l))
    g2 = image_under(gb, torsion_subgroup(pc.b, l))
    return GraphComparison(g1, g2, g1 == g2, g1.order)


def graph_subgroup_equalities(pc: ProductNSClass, l: int) -> bool:
    cmp = graph_subgroup_comparison(pc, l)
    return cmp.equal and cmp.order == l * l


def _slope_of(pc: ProductNSClass, l: int) -> Slope:
    cls = pc.as_class()
    if gcd(cls.e.content(), l) != 1:
        raise PreconditionError("slope of the product class is not reduced")
    return Slope(cls, l)


def audit_equivalence(pc: ProductNSClass, l: int) -> AuditReport:
    """Run every exact equivalence identity for the class over denominator l.

    Precondition: the slope is reduced, and for l > 1 the B-block is ample
    (twist_to_ample offers the standard normalization).  Dimension mismatch
    between the factors is reported as a failing audit, not an exception.
    """
    mu = _slope_of(pc, l)
    if pc.a.g != pc.b.g:
        item = _item("equal_dimensions", pc.a.g, pc.b.g)
        return AuditReport(pc.a.name, pc.b.name, l, (item,), False)
    if l > 1 and not is_ample(pc.block_b):
        raise PreconditionError(
            "the B-block of the class must be ample for l > 1; "
            "twist_to_ample provides the normalization"
        )
    g = pc.a.g
    prod = _product_variety(pc.a, pc.b)
    items: list[AuditItem] = []

    kern = slope_kernel(prod, mu)
    items.append(_item("subtorus_kernel_order", l * l, kern.order))

    _, pi, _ = decompose(pc)
    if pi.is_isogeny():
        items.append(_item("correspondence_degree", l ** (2 * g - 2), pi.degree()))
        ker_pi = pi.kernel()
        ker_pi_hat = pi.dual_hom().kernel()
        items.append(
            AuditItem(
                "correspondence_kernel_inclusions",
                _kernel_inside(ker_pi, pc.block_a.e, l)
                and _kernel_inside(ker_pi_hat, pc.block_b.e, l),
                "both inclusions",
                "checked",
            )
        )
        pi_divisors = ker_pi.divisors
    else:
        items.append(_item("correspondence_degree", l ** (2 * g - 2), "not an isogeny"))
        items.append(
            AuditItem("correspondence_kernel_inclusions", False, "both inclusions", "no isogeny")
        )
        pi_divisors = ()

    cmp = graph_subgroup_comparison(pc, l)
    items.append(_item("graph_subgroup_order", l * l, cmp.order))
    items.append(AuditItem("graph_subgroups_equal", cmp.equal, "equal", "equal" if cmp.equal else "different"))

    # torsion level: l times the largest elementary divisor in play; the
    # quotient onto the subtorus has kernel of exponent dividing l, so its
    # level-D torsion is generated by displayed tuples from (D*l)-torsion
    # points of the product, never from level D alone
    level = l * max((1,) + kern.divisors + pi_divisors)
    sv = slope_subvariety(prod, mu)
    n_amb = 2 * prod.dim
    window = Lattice.standard(n_amb).scaled(Fraction(1, level))
    w = Lattice(sv.annihilator.rows, sv.annihilator).basis
    on_subtorus = sublattice_where_integral(window, w.inverse() @ sv.annihilator)
    generated = Lattice(
        n_amb,
        Mat.hstack(Fraction(1, level * l) * sv.embedding, Mat.identity(n_amb)),
    ).intersect(window)
    items.append(
        AuditItem(
            "subtorus_torsion_generated_by_tuples",
            on_subtorus == generated,
            f"tuple generation at level {level}",
            "equal" if on_subtorus == generated else "mismatch",
        )
    )

    return AuditReport(pc.a.name, pc.b.name, l, tuple(items), all(i.passed for i in items))


@dataclass(frozen=True)
class ProjectionIso:
    to_b_side: Homomorphism
    to_a_side: Homomorphism
    eta: Homomorphism


def projection_iso(pc: ProductNSClass, l: int) -> ProjectionIso:
    """The two coordinate projections off the subtorus and their ratio.

    Both projections must be unimodular on an all-pass instance; their
    ratio eta maps A x dual(A) to B x dual(B), and the image of the
    dual-factor torsion lands on the subtorus of B cut out by the B-block
    slope.  Violations raise, because the theory proves they cannot occur.
    """
    report = audit_equivalence(pc, l)
    if not report.all_pass:
        raise PreconditionError("projection_iso requires an all-pass audit")
    mu = _slope_of(pc, l)
    prod = _product_variety(pc.a, pc.b)
    sv = slope_subvariety(prod, mu)
    na, nb = pc.a.dim, pc.b.dim
    half = na + nb
    emb = sv.to_ambient.m
    rows_q = list(range(na)) + list(range(half, half + na))
    rows_p = list(range(na, half)) + list(range(half + na, 2 * half))
    all_cols = range(emb.cols)
    q = Homomorphism(sv.variety, _product_variety(pc.a, dual(pc.a)), emb.submatrix(rows_q, all_cols))
    p = Homomorphism(sv.variety, _product_variety(pc.b, dual(pc.b)), emb.submatrix(rows_p, all_cols))
    if not (is_isomorphism_certificate(q) and is_isomorphism_certificate(p)):
        raise InternalInvariantViolation(
            "coordinate projections must be unimodular on an all-pass instance"
        )
    eta = p.compose(q.inverse())
    delta = reduce_slope(pc.block_b, l)
    b_delta = slope_subvariety(pc.b, delta)
    level = l * l
    for i in range(na):
        gen = [Fraction(0)] * (2 * na)
        gen[na + i] = Fraction(1, level)
        y = eta.m.apply(tuple(gen))
        if not b_delta.contains(y[:nb], y[nb:]):
            raise InternalInvariantViolation(
                "image of the dual-factor torsion leaves the B-block subtorus"
            )
    return ProjectionIso(to_b_side=p, to_a_side=q, eta=eta)


def partner_dual_certificate(pc: ProductNSClass, l: int, bound: int = 3) -> Homomorphism | None:
    """Bounded certificate search: dual(A) against the B-block subtorus."""
    delta = reduce_slope(pc.block_b, l)
    b_delta = slope_subvariety(pc.b, delta).variety
    return find_isomorphism_certificate(dual(pc.a), b_delta, bound)


# -- searches ---------------------------------------------------------------------


def kernel_torsion_subgroup(v: TorusVariety, cls: NSClass, l: int) -> FiniteSubgroup:
    """K(class) intersected with the l-torsion, tolerant of degenerate classes."""
    shell = Lattice.standard(v.dim).scaled(Fraction(1, l))
    return FiniteSubgroup(v, sublattice_where_integral(shell, cls.e))


def search_kernel_class(
    v: TorusVariety, l: int, target: FiniteSubgroup, coeff_bound: int, threads: int = 1
) -> NSClass | None:
    """First NS class (lexicographic coefficients) whose kernel meets the
    l-torsion in exactly the target subgroup; None if no bounded class works."""
    if not torsion_subgroup(v, l).contains(target):
        raise PreconditionError("target subgroup must lie in the l-torsion")

    def hit(coeffs) -> NSClass | None:
        if not any(coeffs):
            return None
        cls = v.ns_class(coeffs)
        if kernel_torsion_subgroup(v, cls, l) == target:
            return cls
        return None

    candidates = itertools.product(
        range(-coeff_bound, coeff_bound + 1), repeat=len(v.ns_basis)
    )
    return _first_hit(candidates, hit, threads)


def _first_hit(candidates, evaluate, threads: int):
    it = iter(candidates)
    chunk = max(16, 8 * max(1, threads))
    while True:
        block = list(itertools.islice(it, chunk))
        if not block:
            return None
        for result in pmap(evaluate, block, threads):
            if result is not None:
                return result


def search_product_classes(
    a: TorusVariety,
    b: TorusVariety,
    l: int,
    coeff_bound: int,
    threads: int = 1,
    limit: int = 1,
) -> list[ProductNSClass]:
    """Lexicographic scan for product classes passing the full audit.

    Cheap filters (reduced slope, ample B-block, correspondence isogeny,
    kernel order) run first; survivors get the complete audit.  Stops after
    `limit` hits; the result is deterministic for any thread count.
    """
    prod = _product_variety(a, b)
    rank = len(prod.ns_basis)
    na = a.dim

    def evaluate(coeffs) -> ProductNSClass | None:
        if not any(coeffs):
            return None
        m = prod.ns_class(coeffs).e
        if gcd(m.content(), l) != 1:
            return None
        pc = ProductNSClass(a, b, m)
        if l > 1 and not is_ample(pc.block_b):
            return None
        corr = pc.correspondence
        if not corr.is_square or corr.det() == 0:
            return None
        if slope_kernel(prod, Slope(pc.as_class(), l)).order != l * l:
            return None
        if audit_equivalence(pc, l).all_pass:
            return pc
        return None

    hits: list[ProductNSClass] = []
    candidates = itertools.product(range(-coeff_bound, coeff_bound + 1), repeat=rank)
    it = iter(candidates)
    chunk = max(16, 8 * max(1, threads))
    while len(hits) < limit:
        block = list(itertools.islice(it, chunk))
        if not block:
            break
        for result in pmap(evaluate, block, threads):
            if result is not None and len(hits) < limit:
                hits.append(result)
    return hits


def twist_to_ample(pc: ProductNSClass, l: int, ample_class: NSClass) -> tuple[ProductNSClass, int]:
    """Add multiples of l times an ample class on B to the B-block until it
    turns ample; the slope changes by an integral class, which the subtorus
    construction cannot see."""
    if ample_class.variety != pc.b or not is_ample(ample_class):
        raise PreconditionError("twisting requires an ample class on the B factor")
    step = l * lift_second(ample_class.e, pc.a.dim)
    m = pc.m
    for v in range(0, 10_000):
        candidate = ProductNSClass(pc.a, pc.b, m, name=pc.name)
        if is_ample(candidate.block_b):
            return candidate, v
        m = m + step
    raise PreconditionError("no ample twist found; is the twisting class ample?")
