"""Polarizable complex tori presented by exact lattice data.

A variety is (Z^2g, J, NS data): the lattice is implicitly Z^2g, J is a
rational complex structure (J^2 = -I), and the Neron-Severi data is a list
of integral alternating J-compatible forms together with integer
coefficients designating one ample class.  In characteristic zero this
presentation carries everything the package computes: duals, class
homomorphisms, kernels, degrees, finite subgroups and isomorphism
certificates.

Conventions fixed here (the literature leaves the signs open):

* the dual torus reuses the dual basis of Z^2g with complex structure -J^T;
* the homomorphism of a class e maps v to e @ v (so its matrix is e itself),
  which intertwines J with -J^T because J^T e J = e;
* dualizing a homomorphism transposes its matrix; under these choices the
  matrix of the dualized class homomorphism is the negative of the original,
  i.e. the two agree through the inversion automorphism, and all degrees and
  kernels match on the nose.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .lattices import (
    FiniteGroupStructure,
    Lattice,
    dual_lattice_of_form,
    quotient_structure,
)
from .matrices import Mat, integer_kernel, solve_exact


class NotAnIsogenyError(ValueError):
    """Raised when a finite kernel or degree of a non-isogeny is requested."""


class VarietyMismatchError(ValueError):
    """Raised when subgroup operations mix different varieties."""


class InternalInvariantViolation(AssertionError):
    """A machine-checked identity failed; this is a bug, never an input error."""


class PreconditionError(ValueError):
    """An operation was invoked outside its documented preconditions."""


@dataclass(frozen=True, eq=False)
class TorusVariety:
    """A polarizable complex torus (Z^2g, J, NS basis, designated polarization)."""

    g: int
    j: Mat
    ns_basis: tuple[Mat, ...]
    polarization: tuple[int, ...]
    name: str = "A"

    # name is a label only; two presentations are equal iff the data agree
    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, TorusVariety)
            and self.g == other.g
            and self.j == other.j
            and self.ns_basis == other.ns_basis
            and self.polarization == other.polarization
        )

    def __hash__(self) -> int:
        return hash((self.g, self.j, self.ns_basis, self.polarization))

    @property
    def dim(self) -> int:
        return 2 * self.g

    def polarization_class(self) -> Mat:
        return self.ns_class(self.polarization).e

    def ns_class(self, coeffs) -> "NSClass":
        if len(coeffs) != len(self.ns_basis):
            raise ValueError("coefficient vector length must match ns basis")
        acc = Mat.zeros(self.dim, self.dim)
        for c, e in zip(coeffs, self.ns_basis):
            if c:
                acc = acc + c * e
        return NSClass(self, acc)


@dataclass(frozen=True)
class NSClass:
    """An integral alternating J-compatible form on a fixed variety."""

    variety: TorusVariety
    e: Mat

    def __post_init__(self):
        n = self.variety.dim
        if (self.e.rows, self.e.cols) != (n, n):
            raise ValueError("class has the wrong shape")
        if not self.e.is_integral():
            raise ValueError("class must be integral")
        if not self.e.is_alternating():
            raise ValueError("class must be alternating")
        j = self.variety.j
        if j.T @ self.e @ j != self.e:
            raise ValueError("class is not compatible with the complex structure")

    def __add__(self, other: "NSClass") -> "NSClass":
        if self.variety != other.variety:
            raise VarietyMismatchError("classes live on different varieties")
        return NSClass(self.variety, self.e + other.e)

    def __rmul__(self, c: int) -> "NSClass":
        return NSClass(self.variety, c * self.e)

    def is_degenerate(self) -> bool:
        return self.e.det() == 0

    def degree(self) -> int:
        """Self-intersection degree |det e| (square of the Pfaffian)."""
        return abs(int(self.e.det()))


@dataclass(frozen=True)
class ValidationReport:
    failures: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return not self.failures


def _is_positive_definite(s: Mat) -> bool:
    # Sylvester: all leading principal minors positive (exact rationals)
    for k in range(1, s.rows + 1):
        if s.submatrix(range(k), range(k)).det() <= 0:
            return False
    return True


def validate(a: TorusVariety) -> ValidationReport:
    """Structural validation; returns a failure list instead of raising."""
    fails: list[str] = []
    n = a.dim
    if a.g < 1:
        fails.append("g must be at least 1")
        return ValidationReport(tuple(fails))
    if (a.j.rows, a.j.cols) != (n, n):
        fails.append("J has the wrong shape")
        return ValidationReport(tuple(fails))
    if a.j @ a.j != -1 * Mat.identity(n):
        fails.append("J^2 differs from -I")
    for idx, e in enumerate(a.ns_basis):
        label = f"ns_basis[{idx}]"
        if (e.rows, e.cols) != (n, n):
            fails.append(f"{label} has the wrong shape")
            continue
        if not e.is_integral():
            fails.append(f"{label} is not integral")
            continue
        if not e.is_alternating():
            fails.append(f"{label} is not alternating")
        if e.T != -e or a.j.T @ e @ a.j != e:
            if e.is_alternating():
                fails.append(f"{label} is not J-compatible")
    if a.ns_basis:
        vecs = Mat.from_cols([_vec(e) for e in a.ns_basis])
        if vecs.rank() < len(a.ns_basis):
            fails.append("ns_basis is not Z-linearly independent")
    else:
        fails.append("ns_basis is empty")
    if len(a.polarization) != len(a.ns_basis):
        fails.append("polarization coefficient vector length mismatch")
        return ValidationReport(tuple(fails))
    if not fails:
        h = a.polarization_class()
        if h.det() == 0:
            fails.append("designated polarization is degenerate")
        else:
            s = h @ a.j
            if s.T != s:
                fails.append("polarization pairing is not symmetric")
            elif not _is_positive_definite(s):
                fails.append("designated polarization is not positive")
    return ValidationReport(tuple(fails))


# -- matrix <-> vector plumbing for spaces of forms ---------------------------


def _vec(m: Mat) -> tuple:
    return tuple(x for row in m.data for x in row)


def _unvec(v, n: int) -> Mat:
    return Mat([list(v[i * n : (i + 1) * n]) for i in range(n)])


def integral_span_basis(mats: list[Mat]) -> tuple[Mat, ...]:
    """Canonical basis of the integral points of the Q-span of the given matrices."""
    nz = [m for m in mats if not m.is_zero()]
    if not nz:
        return ()
    n = nz[0].rows
    v = Mat.from_cols([_vec(m) for m in nz])
    y = integer_kernel(v.T)  # columns span the orthogonal complement
    if y.cols == 0:
        sol = Mat.identity(n * n)
    else:
        sol = integer_kernel(y.T)
    return tuple(_unvec(sol.col(j), n) for j in range(sol.cols))


def generated_span_basis(mats: list[Mat]) -> tuple[Mat, ...]:
    """Canonical basis of the lattice the given matrices generate (no saturation)."""
    nz = [m for m in mats if not m.is_zero()]
    if not nz:
        return ()
    n = nz[0].rows
    lat = Lattice(n * n, Mat.from_cols([_vec(m) for m in nz]))
    return tuple(_unvec(lat.basis.col(j), n) for j in range(lat.rank))


def coefficients_in_basis(target: Mat, basis: tuple[Mat, ...]) -> tuple[int, ...]:
    b = Mat.from_cols([_vec(m) for m in basis])
    x = solve_exact(b, _vec(target))
    if x is None or not all(Fraction(c).denominator == 1 for c in x):
        raise ValueError("matrix is not an integer combination of the basis")
    return tuple(int(c) for c in x)


# -- duality ------------------------------------------------------------------


def dual(a: TorusVariety, name: str | None = None) -> TorusVariety:
    """The dual torus: dual basis lattice, complex structure -J^T.

    NS data is transported through the designated polarization: the span of
    the presented classes is carried over by the inverse polarization map and
    re-saturated in the integral forms, and the dual polarization is the
    primitive ample class on the ray of the inverse of the designated one.
    On canonically presented inputs (saturated ns span, primitive ample
    class, canonical basis) the construction is an involution.
    """
    jd = -1 * a.j.T
    h = a.polarization_class()
    if h.det() == 0:
        raise ValueError("variety has a degenerate designated polarization")
    hi = h.inverse()
    transported = [hi.T @ e @ hi for e in a.ns_basis]
    ns_d = integral_span_basis(transported)
    hd_dir = -1 * hi
    d = hd_dir.denominator()
    m0 = (d * hd_dir).to_int()
    c = m0.content()
    hd = Mat([[x // c for x in row] for row in m0.data]) if c > 1 else m0
    if not _is_positive_definite(hd @ jd):
        hd = -1 * hd
    pol = coefficients_in_basis(hd, ns_d)
    return TorusVariety(a.g, jd, ns_d, pol, name if name is not None else a.name + "^")


# -- homomorphisms ------------------------------------------------------------


@dataclass(frozen=True)
class Homomorphism:
    """A lattice-level homomorphism: integral matrix intertwining the J's."""

    source: TorusVariety
    target: TorusVariety
    m: Mat

    def __post_init__(self):
        if (self.m.rows, self.m.cols) != (self.target.dim, self.source.dim):
            raise ValueError("matrix shape does not match source/target")
        if not self.m.is_integral():
            raise ValueError("homomorphism matrix must be integral")
        if self.m @ self.source.j != self.target.j @ self.m:
            raise ValueError("matrix does not intertwine the complex structures")

    def is_isogeny(self) -> bool:
        return self.m.is_square and self.m.det() != 0

    def degree(self) -> int:
        if not self.is_isogeny():
            raise NotAnIsogenyError("degree of a non-isogeny")
        return abs(int(self.m.det()))

    def kernel(self) -> "FiniteSubgroup":
        if not self.is_isogeny():
            raise NotAnIsogenyError("kernel of a non-isogeny is not finite")
        over = Lattice(self.source.dim, self.m.inverse())
        return FiniteSubgroup(self.source, over)

    def dual_hom(self) -> "Homomorphism":
        return Homomorphism(dual(self.target), dual(self.source), self.m.T)

    def inverse(self) -> "Homomorphism":
        if not (self.m.is_square and abs(self.m.det()) == 1):
            raise ValueError("only unimodular maps invert integrally")
        return Homomorphism(self.target, self.source, self.m.inverse().to_int())

    def compose(self, first: "Homomorphism") -> "Homomorphism":
        """self after first (matrix product self.m @ first.m)."""
        if first.target != self.source:
            raise VarietyMismatchError("composition of incompatible maps")
        return Homomorphism(first.source, self.target, self.m @ first.m)


def is_isomorphism_certificate(f: Homomorphism) -> bool:
    """True iff f is integral, unimodular, and intertwines the complex structures.

    Integrality and intertwining are enforced at construction, so the
    residual check is unimodularity.
    """
    return f.m.is_square and abs(f.m.det()) == 1


def polarization_map(c: NSClass, target: TorusVariety | None = None) -> Homomorphism:
    """The homomorphism into the dual induced by a class (matrix: the class)."""
    t = target if target is not None else dual(c.variety)
    return Homomorphism(c.variety, t, c.e)


def class_kernel(c: NSClass) -> "FiniteSubgroup":
    """K(L): the finite kernel of the class homomorphism, for nondegenerate c."""
    if c.is_degenerate():
        raise NotAnIsogenyError("kernel of a degenerate class is not finite")
    lam = Lattice.standard(c.variety.dim)
    return FiniteSubgroup(c.variety, dual_lattice_of_form(c.e, lam))


def kernel_of(f: Homomorphism) -> "FiniteSubgroup":
    return f.kernel()


def degree(f: Homomorphism) -> int:
    return f.degree()


def dual_hom(f: Homomorphism) -> Homomorphism:
    return f.dual_hom()


# -- finite subgroups ----------------------------------------------------------


@dataclass(frozen=True)
class FiniteSubgroup:
    """A finite subgroup of a torus, stored as an overlattice of Z^2g."""

    variety: TorusVariety
    overlattice: Lattice
    structure: FiniteGroupStructure = field(init=False)

    def __post_init__(self):
        std = Lattice.standard(self.variety.dim)
        if self.overlattice.ambient_dim != self.variety.dim:
            raise ValueError("overlattice has the wrong ambient dimension")
        # quotient_structure rejects overlattices not containing the periods
        object.__setattr__(
            self, "structure", quotient_structure(std, self.overlattice)
        )

    @property
    def order(self) -> int:
        return self.structure.order

    @property
    def divisors(self) -> tuple[int, ...]:
        return self.structure.divisors

    def _check_same_variety(self, other: "FiniteSubgroup"):
        if self.variety != other.variety:
            raise VarietyMismatchError("subgroups live on different varieties")

    def intersect(self, other: "FiniteSubgroup") -> "FiniteSubgroup":
        self._check_same_variety(other)
        return FiniteSubgroup(self.variety, self.overlattice.intersect(other.overlattice))

    def join(self, other: "FiniteSubgroup") -> "FiniteSubgroup":
        self._check_same_variety(other)
        return FiniteSubgroup(self.variety, self.overlattice.sum(other.overlattice))

    def contains(self, other: "FiniteSubgroup") -> bool:
        self._check_same_variety(other)
        return self.overlattice.contains_lattice(other.overlattice)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, FiniteSubgroup)
            and self.variety == other.variety
            and self.overlattice == other.overlattice
        )

    def __hash__(self) -> int:
        return hash((self.variety, self.overlattice))


def trivial_subgroup(a: TorusVariety) -> FiniteSubgroup:
    return FiniteSubgroup(a, Lattice.standard(a.dim))


def torsion_subgroup(a: TorusVariety, n: int) -> FiniteSubgroup:
    if n < 1:
        raise ValueError("torsion level must be positive")
    return FiniteSubgroup(a, Lattice.standard(a.dim).scaled(Fraction(1, n)))


def intersect_subgroups(s: FiniteSubgroup, t: FiniteSubgroup) -> FiniteSubgroup:
    return s.intersect(t)


def subgroup_equal(s: FiniteSubgroup, t: FiniteSubgroup) -> bool:
    return s == t


def image_under(f: Homomorphism, s: FiniteSubgroup) -> FiniteSubgroup:
    if s.variety != f.source:
        raise VarietyMismatchError("subgroup does not live on the source")
    pushed = Lattice(f.target.dim, f.m @ s.overlattice.basis)
    return FiniteSubgroup(f.target, pushed.sum(Lattice.standard(f.target.dim)))


def preimage_under(f: Homomorphism, s: FiniteSubgroup) -> FiniteSubgroup:
    if s.variety != f.target:
        raise VarietyMismatchError("subgroup does not live on the target")
    if not f.is_isogeny():
        raise NotAnIsogenyError("preimage under a non-isogeny may be infinite")
    over = Lattice(f.source.dim, f.m.inverse() @ s.overlattice.basis)
    return FiniteSubgroup(f.source, over)


# -- products -------------------------------------------------------------------


@dataclass(frozen=True)
class Product:
    """A product variety with its canonical injections and projections."""

    variety: TorusVariety
    proj_a: Homomorphism
    proj_b: Homomorphism
    inj_a: Homomorphism
    inj_b: Homomorphism


def correspondence_block_basis(a: TorusVariety, b: TorusVariety) -> tuple[Mat, ...]:
    """Canonical integral basis of {c : J_A^T c J_B = c} (correspondence blocks)."""
    na, nb = a.dim, b.dim
    cols = []
    for p in range(na):
        for q in range(nb):
            eij = Mat([[1 if (i, j) == (p, q) else 0 for j in range(nb)] for i in range(na)])
            cols.append(_vec(a.j.T @ eij @ b.j - eij))
    op = Mat.from_cols(cols)
    ker = integer_kernel(op)
    out = []
    for j in range(ker.cols):
        v = ker.col(j)
        out.append(Mat([list(v[i * nb : (i + 1) * nb]) for i in range(na)]))
    return tuple(out)


def lift_first(e: Mat, nb: int) -> Mat:
    return Mat.block([[e, Mat.zeros(e.rows, nb)], [Mat.zeros(nb, e.cols), Mat.zeros(nb, nb)]])


def lift_second(e: Mat, na: int) -> Mat:
    return Mat.block([[Mat.zeros(na, na), Mat.zeros(na, e.cols)], [Mat.zeros(e.rows, na), e]])


def correspondence_class(c: Mat, na: int, nb: int) -> Mat:
    return Mat.block([[Mat.zeros(na, na), c], [-1 * c.T, Mat.zeros(nb, nb)]])


def product(a: TorusVariety, b: TorusVariety, name: str | None = None) -> Product:
    """Product torus with block complex structure and the full block NS data."""
    na, nb = a.dim, b.dim
    j = Mat.block([[a.j, Mat.zeros(na, nb)], [Mat.zeros(nb, na), b.j]])
    ns = (
        tuple(lift_first(e, nb) for e in a.ns_basis)
        + tuple(lift_second(e, na) for e in b.ns_basis)
        + tuple(correspondence_class(c, na, nb) for c in correspondence_block_basis(a, b))
    )
    pol = a.polarization + b.polarization + (0,) * (len(ns) - len(a.ns_basis) - len(b.ns_basis))
    v = TorusVariety(a.g + b.g, j, ns, pol, name if name is not None else f"{a.name}x{b.name}")
    ia = Mat.vstack(Mat.identity(na), Mat.zeros(nb, na))
    ib = Mat.vstack(Mat.zeros(na, nb), Mat.identity(nb))
    pa = Mat.hstack(Mat.identity(na), Mat.zeros(na, nb))
    pb = Mat.hstack(Mat.zeros(nb, na), Mat.identity(nb))
    return Product(
        variety=v,
        proj_a=Homomorphism(v, a, pa),
        proj_b=Homomorphism(v, b, pb),
        inj_a=Homomorphism(a, v, ia),
        inj_b=Homomorphism(b, v, ib),
    )


def ns_pullback(f: Homomorphism, c: NSClass) -> NSClass:
    """Pullback of a class along a homomorphism: m^T e m on the source."""
    if c.variety != f.target:
        raise VarietyMismatchError("class does not live on the target")
    return NSClass(f.source, f.m.T @ c.e @ f.m)
