"""CLI surface: commands, exit codes, report shape, determinism."""

import json

from quadrep.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    report = json.loads(out.out) if out.out.strip() else None
    return code, report, out.err


def test_generate_and_verify_exact(tmp_path, capsys):
    path = str(tmp_path / "phi.json")
    code, report, _ = run(capsys, "generate", "pi_np1:3", "-o", path)
    assert code == 0
    assert report["order"] == 3
    assert report["domain_dim"] == 5 and report["codomain_dim"] == 4
    assert report["certificate"]["verdict"] == "pass"

    code, report, _ = run(capsys, "verify", path, "--mode", "exact")
    assert code == 0
    assert report["checks"][0]["verdict"] == "pass"


def test_generate_circle_winding(tmp_path, capsys):
    path = str(tmp_path / "w2.json")
    code, report, _ = run(capsys, "generate", "pi_n:1,2", "-o", path)
    assert code == 0
    code, report, _ = run(capsys, "invariants", path, "--check", "degree")
    assert code == 0
    assert report["checks"][0]["value"] == 2


def test_generate_rejects_served_target(tmp_path, capsys):
    code, report, err = run(capsys, "generate", "pi_np1:2", "-o", str(tmp_path / "x.json"))
    assert code == 2
    assert "pi3_s2" in err


def test_verify_grid_mode(tmp_path, capsys):
    path = str(tmp_path / "w3.json")
    run(capsys, "generate", "pi_n:1,3", "-o", path)
    code, report, _ = run(capsys, "verify", path, "--mode", "grid")
    assert code == 0
    assert report["checks"][0]["method"] == "exact-evaluation"


def test_verify_sampled_mode(tmp_path, capsys):
    path = str(tmp_path / "phi.json")
    run(capsys, "generate", "pi_np1:3", "-o", path)
    code, report, _ = run(capsys, "verify", path, "--mode", "sampled", "--samples", "2000")
    assert code == 0
    check = report["checks"][0]
    assert check["value"] < check["tolerance"]


def test_verify_corrupted_document_fails(tmp_path, capsys):
    path = str(tmp_path / "phi.json")
    run(capsys, "generate", "pi_np1:3", "-o", path)
    doc = json.loads(open(path).read())
    doc["components"][0][0]["re"] = "9999"
    open(path, "w").write(json.dumps(doc))
    code, report, _ = run(capsys, "verify", path, "--mode", "exact")
    assert code == 3
    assert report["checks"][0]["verdict"] == "fail"
    assert report["checks"][0]["witness"]


def test_verify_malformed_document(tmp_path, capsys):
    path = str(tmp_path / "bad.json")
    open(path, "w").write("{not json")
    code, report, err = run(capsys, "verify", path, "--mode", "exact")
    assert code == 2 and report is None


def test_invariants_hemisphere_via_lineage(tmp_path, capsys):
    path = str(tmp_path / "phi.json")
    run(capsys, "generate", "pi_np1:3", "-o", path)
    code, report, _ = run(capsys, "invariants", path, "--check", "hemisphere", "--samples", "400")
    assert code == 0
    assert report["checks"][0]["verdict"] == "pass"


def test_invariants_hopf(tmp_path, capsys):
    path = str(tmp_path / "hopf.json")
    run(capsys, "generate", "pi3_s2:1", "-o", path)
    code, report, _ = run(capsys, "invariants", path, "--check", "hopf")
    assert code == 0
    assert abs(report["checks"][0]["value"]) == 1


def test_invariants_homotopies(tmp_path, capsys):
    path = str(tmp_path / "hopf.json")
    run(capsys, "generate", "pi3_s2:1", "-o", path)
    code, report, _ = run(capsys, "invariants", path, "--check", "homotopies", "--samples", "1000")
    assert code == 0
    names = [c["name"] for c in report["checks"]]
    assert "retraction-homotopy-residual" in names
    assert "even-order-contraction-residual" in names  # order 2 is even


def test_invariants_dimension_guard(tmp_path, capsys):
    path = str(tmp_path / "w1.json")
    run(capsys, "generate", "pi_n:1,1", "-o", path)
    code, _, err = run(capsys, "invariants", path, "--check", "hopf")
    assert code == 2


def test_export_byte_identity(tmp_path, capsys):
    src = str(tmp_path / "a.json")
    dst = str(tmp_path / "b.json")
    run(capsys, "generate", "pi_np2:2", "-o", src)
    code, _, _ = run(capsys, "export", src, "-o", dst)
    assert code == 0
    assert open(src, "rb").read() == open(dst, "rb").read()


def test_reports_deterministic(tmp_path, capsys):
    path = str(tmp_path / "phi.json")
    run(capsys, "generate", "pi_np1:3", "-o", path)
    _, r1, _ = run(capsys, "verify", path, "--mode", "sampled", "--seed", "5")
    _, r2, _ = run(capsys, "verify", path, "--mode", "sampled", "--seed", "5")
    r1.pop("wall_time_s")
    r2.pop("wall_time_s")
    assert r1 == r2


def test_report_key_set_stable(tmp_path, capsys):
    p1 = str(tmp_path / "a.json")
    p2 = str(tmp_path / "b.json")
    run(capsys, "generate", "pi_np1:3", "-o", p1)
    run(capsys, "generate", "pi_np2:2", "-o", p2)
    _, r1, _ = run(capsys, "verify", p1, "--mode", "exact")
    _, r2, _ = run(capsys, "verify", p2, "--mode", "exact")
    assert set(r1.keys()) == set(r2.keys())
    assert set(r1["checks"][0].keys()) == set(r2["checks"][0].keys())


def test_threads_flag_accepted(tmp_path, capsys):
    path = str(tmp_path / "phi.json")
    run(capsys, "generate", "pi_np1:3", "-o", path)
    code, r1, _ = run(capsys, "verify", path, "--mode", "sampled", "--threads", "1")
    code2, r2, _ = run(capsys, "verify", path, "--mode", "sampled", "--threads", "2")
    assert code == 0 and code2 == 0
    assert r1["checks"][0]["value"] == r2["checks"][0]["value"]


def test_generate_unmaterializable_target(tmp_path, capsys):
    code, _, err = run(capsys, "generate", "pi_np3:3", "-o", str(tmp_path / "x.json"))
    assert code == 2
    assert "materialized" in err or "budget" in err


def test_verify_grid_infeasible_on_large_document(tmp_path, capsys):
    path = str(tmp_path / "big.json")
    run(capsys, "generate", "pi_np2:2", "-o", path)
    code, report, err = run(capsys, "verify", path, "--mode", "grid")
    assert code == 2
    assert "grid zero test" in err
