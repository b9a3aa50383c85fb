import json

import pytest

from fmtori import corpus
from fmtori.cli import main


@pytest.fixture(scope="session")
def corpus_dir(tmp_path_factory):
    d = tmp_path_factory.mktemp("corpus")
    corpus.write_corpus(d)
    return d


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out.splitlines(), out.err


def test_validate_golden(capsys, corpus_dir):
    code, lines, _ = run(capsys, "validate", corpus_dir / "e_i.json")
    assert code == 0
    assert lines == ["valid"]


def test_validate_failure_exits_one(capsys, tmp_path, corpus_dir):
    doc = json.loads(corpus.corpus_text("e_i.json"))
    doc["j"] = [["0", "1"], ["1", "0"]]
    bad = tmp_path / "bad.json"
    bad.write_text(corpus.render_json(doc), "utf-8")
    code, lines, _ = run(capsys, "validate", bad)
    assert code == 1
    assert any("J^2" in line for line in lines)


def test_validate_malformed_exits_two(capsys, tmp_path):
    bad = tmp_path / "junk.json"
    bad.write_text("{not json", "utf-8")
    code, _, err = run(capsys, "validate", bad)
    assert code == 2
    assert "error:" in err


def test_dual_golden(capsys, corpus_dir):
    code, lines, _ = run(capsys, "dual", corpus_dir / "e_2i.json")
    assert code == 0
    assert lines == [
        "dual of E_2i: g=1, ns rank 1",
        "complex structure [[0 -1/2] [2 0]]",
        "polarization coefficients (1)",
    ]


def test_kl_golden(capsys, corpus_dir):
    code, lines, _ = run(capsys, "kl", corpus_dir / "e_i.json", "--class", "2*E0")
    assert code == 0
    assert lines == ["elementary divisors: 2,2; order 4"]


def test_kl_rejects_slopes(capsys, corpus_dir):
    code, _, err = run(capsys, "kl", corpus_dir / "e_i.json", "--class", "1*E0/2")
    assert code == 2
    assert "integral class" in err


def test_amu_golden(capsys, corpus_dir):
    code, lines, _ = run(capsys, "amu", corpus_dir / "e_i.json", "--slope", "1*E0/2")
    assert code == 0
    assert lines == [
        "kernel of A -> A_mu: order 1, divisors none",
        "projection degree 4, bundle rank 2, stabilizer order 4",
        "subtorus: g=1, ns rank 1, polarization coefficients (5)",
    ]


def test_amu_notes_reduction(capsys, corpus_dir):
    code, lines, _ = run(capsys, "amu", corpus_dir / "e_i.json", "--slope", "2*E0/4")
    assert code == 0
    assert lines[0] == "slope reduced to denominator 2"


def test_partners_golden(capsys, corpus_dir):
    code, lines, _ = run(
        capsys,
        "partners", corpus_dir / "e_i.json",
        "--coeff-bound", "1", "--denom-bound", "2",
    )
    assert code == 0
    assert lines == [
        "slope (1)/1: partner g=1, fingerprint matches source, source certificate found",
        "slope (1)/2: partner g=1, fingerprint matches source, source certificate found",
        "2 partner presentations",
    ]


def test_ppav_check_golden(capsys, corpus_dir):
    code, lines, _ = run(
        capsys, "ppav-check", corpus_dir / "e_i.json", "--n", "3", "--l", "2"
    )
    assert code == 0
    assert lines == ["rigid: kernel trivial, quotient certificate unimodular"]
    code, _, err = run(
        capsys, "ppav-check", corpus_dir / "e_i.json", "--n", "2", "--l", "2"
    )
    assert code == 2


def test_audit_golden(capsys, corpus_dir):
    code, lines, _ = run(
        capsys,
        "audit", corpus_dir / "e_i.json", corpus_dir / "e_i.json",
        "--class", corpus_dir / "poincare_class.json", "--l", "1",
    )
    assert code == 0
    assert lines == [
        "subtorus_kernel_order: pass",
        "correspondence_degree: pass",
        "correspondence_kernel_inclusions: pass",
        "graph_subgroup_order: pass",
        "graph_subgroups_equal: pass",
        "subtorus_torsion_generated_by_tuples: pass",
        "all checks passed",
    ]


def test_audit_failure_exits_one(capsys, corpus_dir, tmp_path):
    doc = {
        "format": "fmtori/product-class",
        "name": "split",
        "matrix": [[0, 1, 0, 0], [-1, 0, 0, 0], [0, 0, 0, 1], [0, 0, -1, 0]],
    }
    f = tmp_path / "split.json"
    f.write_text(corpus.render_json(doc), "utf-8")
    code, lines, _ = run(
        capsys,
        "audit", corpus_dir / "e_i.json", corpus_dir / "e_i.json",
        "--class", f, "--l", "1",
    )
    assert code == 1
    assert lines[-1] == "audit failed"


def test_search_n_golden(capsys, corpus_dir):
    code, lines, _ = run(
        capsys,
        "search-n", corpus_dir / "e_i.json",
        "--l", "2", "--target", corpus_dir / "two_torsion.json", "--bound", "3",
    )
    assert code == 0
    assert lines[0] == "N = (-2) in the ns basis"


def test_search_n_not_found_exits_one(capsys, corpus_dir, tmp_path):
    doc = {
        "format": "fmtori/subgroup",
        "name": "quarter_line",
        "overlattice": [["1/4", "0"], ["0", "1"]],
    }
    f = tmp_path / "quarter.json"
    f.write_text(corpus.render_json(doc), "utf-8")
    code, lines, _ = run(
        capsys,
        "search-n", corpus_dir / "e_i.json",
        "--l", "4", "--target", f, "--bound", "3",
    )
    assert code == 1
    assert lines == ["not found at bound 3"]


def test_json_reports_are_byte_stable(capsys, corpus_dir, tmp_path):
    p1, p2 = tmp_path / "a.json", tmp_path / "b.json"
    for p in (p1, p2):
        code, _, _ = run(
            capsys, "amu", corpus_dir / "e_i.json", "--slope", "1*E0/2", "--json", p
        )
        assert code == 0
    assert p1.read_bytes() == p2.read_bytes()
    payload = json.loads(p1.read_text("utf-8"))
    assert payload["command"] == "amu"
    assert payload["projection_degree"] == 4


def test_regress_golden(capsys, corpus_dir):
    code, lines, _ = run(capsys, "regress")
    assert code == 0
    assert lines == [
        "degree_law: pass",
        "paired_divisors: pass",
        "ppav_rigidity: pass",
        "projection_counts: pass",
        "poincare_audit: pass",
        "l2_search_audit: pass",
        "dual_partner_certificates: pass",
        "kernel_class_search: pass",
        "pullback_injectivity: pass",
        "determinism: pass",
        "all criteria passed",
    ]


def test_unknown_command_exits_two(corpus_dir):
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 2
