"""The regression gate: every identity the package promises, at desk scale.

Each criterion function returns a JSON-serializable dict with a ``name``, an
``ok`` flag and enough detail to diagnose a failure from the report alone.
The checks are the frozen contract of the library; loosening one is a release
decision, not a refactor.  Random draws are seeded so a report is a pure
function of the code.
"""

from __future__ import annotations

import random
from math import gcd

from . import oracles
from .corpus import (
    poincare_class,
    render_json,
    square_curve_product,
    square_lattice_curve,
)
from .matrices import Mat
from .partners import homomorphism_space_basis, ppav_rigidity_check
from .product_audit import (
    audit_equivalence,
    decompose,
    kernel_torsion_subgroup,
    partner_dual_certificate,
    projection_iso,
    search_kernel_class,
    search_product_classes,
)
from .slopes import (
    Slope,
    projection_invariants,
    reduce_slope,
    slope_kernel,
    slope_subvariety,
)
from .varieties import (
    Homomorphism,
    NSClass,
    class_kernel,
    dual,
    dual_hom,
    is_isomorphism_certificate,
    kernel_of,
    torsion_subgroup,
    trivial_subgroup,
)

_C2_SEED = 57201
_C9_SEED = 90114


def _result(name: str, ok: bool, **detail) -> dict:
    out = {"name": name, "ok": bool(ok)}
    out.update(detail)
    return out


def _intlist(m: Mat) -> list[list[int]]:
    return [[int(m[i, j]) for j in range(m.cols)] for i in range(m.rows)]


def criterion_degree_law() -> dict:
    """Multiples of the square curve polarization: degree n^2, divisors (n, n),
    counted twice, once through normal forms and once point by point."""
    a = square_lattice_curve()
    h = a.polarization_class()
    rows = []
    ok = True
    for n in range(1, 7):
        cls = NSClass(a, n * h)
        kern = class_kernel(cls)
        pts = oracles.kernel_points_of_class(cls.e, n)
        counts = oracles.order_counts(pts, 6)
        predicted = oracles.predicted_order_counts(kern.divisors, 6)
        good = (
            cls.degree() == n * n
            and kern.order == n * n
            and len(pts) == n * n
            and kern.divisors == ((n, n) if n > 1 else ())
            and counts == predicted
            and oracles.same_point_sets(pts, oracles.subgroup_points(kern))
        )
        ok = ok and good
        rows.append({"n": n, "degree": cls.degree(), "divisors": list(kern.divisors),
                     "enumerated": len(pts), "ok": good})
    return _result("degree_law", ok, cases=rows)


def criterion_paired_divisors() -> dict:
    """Kernels of nondegenerate classes on the product have divisors in pairs."""
    p = square_curve_product()
    rng = random.Random(_C2_SEED)
    checked = 0
    failures = []
    while checked < 50:
        coeffs = tuple(rng.randint(-5, 5) for _ in p.ns_basis)
        if not any(coeffs):
            continue
        cls = p.ns_class(coeffs)
        if cls.e.det() == 0:
            continue
        checked += 1
        divisors = class_kernel(cls).divisors
        full = (1,) * (p.dim - len(divisors)) + divisors
        if not all(full[i] == full[i + 1] for i in range(0, p.dim, 2)):
            failures.append({"coefficients": list(coeffs), "divisors": list(divisors)})
    return _result("paired_divisors", not failures, sampled=checked,
                   seed=_C2_SEED, failures=failures)


def criterion_ppav_rigidity() -> dict:
    """Coprime (n, l) up to 5 on a principally polarized curve: the slope
    subtorus is the curve itself, with an explicit unimodular certificate."""
    a = square_lattice_curve()
    rows = []
    ok = True
    for n in range(1, 6):
        for l in range(1, 6):
            if gcd(n, l) != 1:
                continue
            check = ppav_rigidity_check(a, n, l)
            good = (
                check.ok
                and check.kernel.order == 1
                and is_isomorphism_certificate(check.certificate)
            )
            ok = ok and good
            rows.append({"n": n, "l": l, "kernel_order": check.kernel.order,
                         "certificate": _intlist(check.certificate.m), "ok": good})
    return _result("ppav_rigidity", ok, cases=rows)


def criterion_projection_counts() -> dict:
    """Reduced slopes nE0/l, |n| <= 3, l <= 4: the projection degree is a
    perfect square, the rank is l for unimodular numerators, and the
    stabilizer has exactly that many points."""
    a = square_lattice_curve()
    h = a.polarization_class()
    rows = []
    ok = True
    for n in range(-3, 4):
        for l in range(1, 5):
            num = NSClass(a, n * h)
            if gcd(num.e.content(), l) != 1:
                continue
            mu = Slope(num, l)
            inv = projection_invariants(a, mu)
            good = inv.rank * inv.rank == inv.degree and inv.stabilizer.order == inv.degree
            if abs(int(num.e.det())) == 1:
                good = good and inv.rank == l
            ok = ok and good
            rows.append({"n": n, "l": l, "degree": inv.degree, "rank": inv.rank,
                         "stabilizer_order": inv.stabilizer.order, "ok": good})
    return _result("projection_counts", ok, cases=rows)


def _audit_summary(pc, l: int) -> dict:
    report = audit_equivalence(pc, l)
    return {
        "class": _intlist(pc.m),
        "l": l,
        "all_pass": report.all_pass,
        "items": [{"name": it.name, "ok": it.passed} for it in report.items],
    }


def _criterion_poincare() -> tuple[dict, list]:
    pc = poincare_class()
    summary = _audit_summary(pc, 1)
    m_a, pi, m_b = decompose(pc)
    kern = slope_kernel(_prod(pc), reduce_slope(pc.as_class(), 1))
    iso = projection_iso(pc, 1)
    good = (
        summary["all_pass"]
        and kern.order == 1
        and pi.degree() == 1
        and is_isomorphism_certificate(iso.to_a_side)
        and is_isomorphism_certificate(iso.to_b_side)
        and is_isomorphism_certificate(iso.eta)
    )
    detail = _result("poincare_audit", good, audit=summary,
                     kernel_order=kern.order, projection_degree=pi.degree(),
                     eta=_intlist(iso.eta.m))
    return detail, ([(pc, 1)] if good else [])


def _prod(pc):
    from .product_audit import _product_variety

    return _product_variety(pc.a, pc.b)


def _oracle_subgroup_checks(pc, l: int) -> dict:
    """Re-derive the audit's subgroup identities by enumerating torsion points."""
    prod = _prod(pc)
    m_a, pi, m_b = decompose(pc)

    # members of the slope lattice among l-torsion: x with l*x and M*x integral
    kernel_pts = [
        p
        for p in oracles.torsion_points(prod.dim, l)
        if oracles.is_integral_vector(pc.m.apply(p))
    ]
    kern_count = len(kernel_pts)
    kern_order = slope_kernel(prod, reduce_slope(pc.as_class(), l)).order

    def inside(points, cls_matrix, bound) -> bool:
        return all(
            oracles.is_integral_vector(cls_matrix.apply(p))
            and all((bound * x) % 1 == 0 for x in p)
            for p in points
        )

    # kernel of pi among torsion up to l^2, pointwise against h_{m_A} and A_l
    a_side = [
        p
        for p in oracles.torsion_points(pc.a.dim, l * l)
        if oracles.is_integral_vector(pi.m.apply(p))
    ]
    b_side = [
        p
        for p in oracles.torsion_points(pc.b.dim, l * l)
        if oracles.is_integral_vector(pi.m.T.apply(p))
    ]
    inclusion_a = inside(a_side, m_a.e, l)
    inclusion_b = inside(b_side, m_b.e, l)

    from .product_audit import _graph_homs

    into_a, into_b = _graph_homs(pc)
    set_a = {oracles.apply_mod1(into_a.m, p) for p in oracles.torsion_points(pc.a.dim, l)}
    set_b = {oracles.apply_mod1(into_b.m, p) for p in oracles.torsion_points(pc.b.dim, l)}
    graphs_equal = set_a == set_b
    graph_order = len(set_a)

    return {
        "kernel_points": kern_count,
        "kernel_two_routes_agree": kern_count == kern_order,
        "pi_kernel_inside_class_kernel": inclusion_a,
        "dual_pi_kernel_inside_class_kernel": inclusion_b,
        "graph_sets_equal": graphs_equal,
        "graph_order": graph_order,
    }


def _criterion_l2_search(threads: int) -> tuple[dict, list]:
    a = square_lattice_curve()
    hits = search_product_classes(a, a, 2, 2, threads=threads, limit=2)
    if not hits:
        return _result("l2_search_audit", False, hits=0), []
    rows = []
    ok = True
    instances = []
    for pc in hits:
        summary = _audit_summary(pc, 2)
        _, pi, _ = decompose(pc)
        oracle = _oracle_subgroup_checks(pc, 2)
        good = (
            summary["all_pass"]
            and oracle["kernel_points"] == 4
            and pi.degree() == 1
            and oracle["kernel_two_routes_agree"]
            and oracle["pi_kernel_inside_class_kernel"]
            and oracle["dual_pi_kernel_inside_class_kernel"]
            and oracle["graph_sets_equal"]
            and oracle["graph_order"] == 4
        )
        ok = ok and good
        rows.append({"audit": summary, "projection_degree": pi.degree(),
                     "oracle": oracle, "ok": good})
        if good:
            instances.append((pc, 2))
    return _result("l2_search_audit", ok, hits=len(hits), cases=rows), instances


def _criterion_dual_partner(instances) -> dict:
    """On every all-pass audit instance, dual(A) is isomorphic to the B-side
    slope subtorus, certified at search bound 3."""
    rows = []
    ok = bool(instances)
    for pc, l in instances:
        cert = partner_dual_certificate(pc, l, bound=3)
        good = cert is not None and is_isomorphism_certificate(cert)
        ok = ok and good
        rows.append({"class": _intlist(pc.m), "l": l,
                     "certificate": _intlist(cert.m) if cert else None, "ok": good})
    return _result("dual_partner_certificates", ok, instances=len(rows), cases=rows)


def criterion_kernel_class_search(threads: int = 1) -> dict:
    """For l in 1..3, bounded search recovers a class whose kernel meets the
    l-torsion in a prescribed subgroup; every answer is re-counted pointwise.

    Targets per l: the trivial subgroup, the full l-torsion, and the kernel of
    the dualized projection for the slope E0/l (the degree-one-determinant
    case, where the determinant degree divides every l).
    """
    a = square_lattice_curve()
    h = a.polarization_class()
    rows = []
    ok = True
    for l in (1, 2, 3):
        duals = dual(a)
        pihat = dual_hom(slope_subvariety(a, reduce_slope(NSClass(a, h), l)).projection)
        targets = [
            ("trivial", a, trivial_subgroup(a)),
            ("full_torsion", a, torsion_subgroup(a, l)),
            ("dual_projection_kernel", duals, kernel_of(pihat)),
        ]
        for label, v, target in targets:
            found = search_kernel_class(v, l, target, coeff_bound=3, threads=threads)
            if found is None:
                ok = False
                rows.append({"l": l, "target": label, "found": None, "ok": False})
                continue
            pts = oracles.kernel_points_of_class(found.e, l)
            verified = oracles.same_point_sets(pts, oracles.subgroup_points(target))
            recheck = kernel_torsion_subgroup(v, found, l) == target
            good = verified and recheck
            ok = ok and good
            rows.append({"l": l, "target": label, "found": _intlist(found.e),
                         "target_order": target.order, "oracle_points": len(pts),
                         "ok": good})
    return _result("kernel_class_search", ok, cases=rows)


def criterion_pullback_injectivity() -> dict:
    """Pullback along 20 seeded isogenies of the product kills no nonzero
    class with coefficients up to 2."""
    p = square_curve_product()
    basis = homomorphism_space_basis(p, p)
    rng = random.Random(_C9_SEED)
    rows = []
    ok = True
    draws = 0
    found = 0
    while found < 20 and draws < 10_000:
        draws += 1
        coeffs = [rng.randint(-2, 2) for _ in basis]
        m = Mat.zeros(p.dim, p.dim)
        for c, b in zip(coeffs, basis):
            if c:
                m = m + c * b
        if m.det() == 0 or max(abs(int(v)) for row in m.data for v in row) > 3:
            continue
        found += 1
        f = Homomorphism(p, p, m)
        pulled = [f.m.T @ e @ f.m for e in p.ns_basis]
        flat = [tuple(int(v) for row in g.data for v in row) for g in pulled]
        bad = []
        spread = range(-2, 3)
        for c0 in spread:
            for c1 in spread:
                for c2 in spread:
                    for c3 in spread:
                        if not (c0 or c1 or c2 or c3):
                            continue
                        if not any(
                            c0 * w + c1 * x + c2 * y + c3 * z
                            for w, x, y, z in zip(*flat)
                        ):
                            bad.append([c0, c1, c2, c3])
        good = not bad
        ok = ok and good
        rows.append({"isogeny": _intlist(m), "degree": abs(int(m.det())),
                     "killed": bad, "ok": good})
    ok = ok and found == 20
    return _result("pullback_injectivity", ok, seed=_C9_SEED,
                   isogenies=found, cases=rows)


def run_criteria(threads: int = 1) -> list[dict]:
    """Criteria one through nine, in gate order."""
    out = [
        criterion_degree_law(),
        criterion_paired_divisors(),
        criterion_ppav_rigidity(),
        criterion_projection_counts(),
    ]
    poincare, instances = _criterion_poincare()
    out.append(poincare)
    searched, more = _criterion_l2_search(threads)
    out.append(searched)
    out.append(_criterion_dual_partner(instances + more))
    out.append(criterion_kernel_class_search(threads))
    out.append(criterion_pullback_injectivity())
    return out


def run_all(threads: int = 1) -> dict:
    """The full gate: the nine identity criteria plus a byte-level determinism
    comparison between this thread count and the other canonical one."""
    primary = run_criteria(threads)
    other = 4 if threads == 1 else 1
    replay = run_criteria(other)
    det = _result(
        "determinism",
        render_json(primary) == render_json(replay),
        thread_counts=sorted([threads, other]),
    )
    criteria = primary + [det]
    return {"criteria": criteria, "ok": all(c["ok"] for c in criteria)}
