"""The release gate.

One test per criterion so the verbose run reads as a ten-line scorecard.
Criteria one through nine come from one shared evaluation of the gate
module; criterion ten drives the installed command line twice per thread
count and compares raw bytes.
"""

import subprocess
import sys

import pytest

from fmtori import acceptance


@pytest.fixture(scope="module")
def gate():
    results = acceptance.run_criteria(threads=1)
    return {c["name"]: c for c in results}


def _check(gate, name):
    crit = gate[name]
    assert crit["ok"], crit
    return crit


def test_c01_degree_law_matches_brute_force(gate):
    crit = _check(gate, "degree_law")
    assert [c["n"] for c in crit["cases"]] == [1, 2, 3, 4, 5, 6]
    assert all(c["degree"] == c["n"] ** 2 for c in crit["cases"])


def test_c02_kernel_divisors_come_in_pairs(gate):
    crit = _check(gate, "paired_divisors")
    assert crit["sampled"] == 50
    assert crit["failures"] == []


def test_c03_ppav_rigidity_with_certificates(gate):
    crit = _check(gate, "ppav_rigidity")
    # all coprime pairs with n, l <= 5
    assert len(crit["cases"]) == 19
    assert all(c["kernel_order"] == 1 for c in crit["cases"])


def test_c04_projection_degree_is_square_rank_is_l(gate):
    crit = _check(gate, "projection_counts")
    for case in crit["cases"]:
        assert case["degree"] == case["rank"] ** 2
        assert case["stabilizer_order"] == case["degree"]
        if abs(case["n"]) == 1:
            assert case["rank"] == case["l"]


def test_c05_poincare_class_audit(gate):
    crit = _check(gate, "poincare_audit")
    assert crit["audit"]["all_pass"]
    assert crit["kernel_order"] == 1
    assert crit["projection_degree"] == 1


def test_c06_bounded_search_at_denominator_two(gate):
    crit = _check(gate, "l2_search_audit")
    assert crit["hits"] >= 1
    for case in crit["cases"]:
        assert case["audit"]["all_pass"]
        assert case["oracle"]["kernel_points"] == 4
        assert case["projection_degree"] == 1
        assert case["oracle"]["graph_sets_equal"]
        assert case["oracle"]["pi_kernel_inside_class_kernel"]
        assert case["oracle"]["dual_pi_kernel_inside_class_kernel"]


def test_c07_dual_partner_certificates_at_bound_three(gate):
    crit = _check(gate, "dual_partner_certificates")
    assert crit["instances"] >= 2  # the Poincare class plus searched hits
    assert all(c["certificate"] is not None for c in crit["cases"])


def test_c08_kernel_class_search_with_coset_reverification(gate):
    crit = _check(gate, "kernel_class_search")
    seen = {(c["l"], c["target"]) for c in crit["cases"]}
    for l in (1, 2, 3):
        for label in ("trivial", "full_torsion", "dual_projection_kernel"):
            assert (l, label) in seen
    assert all(c["found"] is not None for c in crit["cases"])


def test_c09_pullback_injectivity_over_seeded_isogenies(gate):
    crit = _check(gate, "pullback_injectivity")
    assert crit["isogenies"] == 20
    assert all(c["killed"] == [] for c in crit["cases"])


def test_c10_regress_json_is_byte_identical(tmp_path):
    def regress(threads, path):
        proc = subprocess.run(
            [sys.executable, "-m", "fmtori", "regress",
             "--threads", str(threads), "--json", str(path)],
            capture_output=True, text=True, check=False,
        )
        assert proc.returncode == 0, proc.stdout + proc.stderr
        return path.read_bytes()

    first = regress(1, tmp_path / "r1.json")
    second = regress(1, tmp_path / "r2.json")
    forth = regress(4, tmp_path / "r4.json")
    assert first == second
    assert first == forth
