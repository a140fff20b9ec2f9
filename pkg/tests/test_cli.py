"""Command-line behavior: documents, exit codes, traces, fan-out."""

import json
from fractions import Fraction

import pytest

from heunlab.cli import main

F = Fraction

A2_JSON = ('{"heun": {"a": "2", "q": "1", "alpha": "1", "beta": "1", '
           '"gamma": "1", "delta": "1", "lambda": "0"}, '
           '"analysis": {"x": "1/10"}, "precision": "exact"}')

REC_JSON = ('{"recurrence": {"k": 2, "lags": ['
            '{"num": ["1", "3", "3/2"], "den": ["2", "3", "1"]}, '
            '{"num": ["-1/4", "-1", "-1/2"], "den": ["2", "3", "1"]}]}}')


@pytest.fixture()
def a2_file(tmp_path):
    path = tmp_path / "a2.json"
    path.write_text(A2_JSON)
    return path


@pytest.fixture()
def rec_file(tmp_path):
    path = tmp_path / "rec.json"
    path.write_text(REC_JSON)
    return path


def run(capsys, argv):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def run_doc(capsys, argv):
    code, out, err = run(capsys, argv)
    assert code == 0, err
    return json.loads(out)


def test_eval_document(a2_file, capsys):
    doc = run_doc(capsys, ["eval", str(a2_file)])
    assert doc["command"] == "eval"
    assert doc["precision"] == "exact"
    out = doc["outputs"]
    assert out["n_used"] == 32
    assert out["converged"] and out["inside"] and not out["forced"]
    assert abs(float(F(out["value"])) - 1.0533616862337971) < 1e-12
    assert out["x"] == "1/10"
    assert out["r_star"].startswith("0.561552812808830274910")
    assert float(F(out["membership_sum"])) == pytest.approx(0.155)


def test_eval_origin(a2_file, capsys):
    doc = run_doc(capsys, ["eval", str(a2_file), "--x", "0"])
    assert doc["outputs"]["value"] == "1"


def test_eval_outside_domain_exits_2(a2_file, capsys):
    code, out, err = run(capsys, ["eval", str(a2_file), "--x", "9/10"])
    assert code == 2
    assert out == ""
    assert "membership sum" in err and "force" in err


def test_eval_force(a2_file, capsys):
    doc = run_doc(capsys, ["eval", str(a2_file), "--x", "9/10", "--force",
                           "--precision", "128"])
    out = doc["outputs"]
    assert out["forced"] and not out["inside"]
    assert float(out["value"]) == pytest.approx(2.3527158167797426)


def test_eval_needs_a_point(tmp_path, capsys):
    path = tmp_path / "nopoint.json"
    path.write_text(A2_JSON.replace('"analysis": {"x": "1/10"}, ', ""))
    code, _, err = run(capsys, ["eval", str(path)])
    assert code == 3
    assert "analysis.x" in err


def test_eval_rejects_recurrence_instance(rec_file, capsys):
    code, _, err = run(capsys, ["eval", str(rec_file), "--x", "1/10"])
    assert code == 3
    assert "heun block" in err


def test_domain_document(a2_file, capsys):
    doc = run_doc(capsys, ["domain", str(a2_file), "--x", "1/2"])
    out = doc["outputs"]
    assert out["limits"] == ["3/2", "-1/2"]
    assert float(out["r_star"]) == pytest.approx(0.5615528128088303)
    assert float(out["eta"]) == pytest.approx(0.8423292192132454)
    assert float(out["z"]) == pytest.approx(0.1576707807867546)
    assert float(out["eta_plus_z"]) == pytest.approx(1.0, abs=1e-25)
    assert out["membership"]["inside"]
    assert float(out["membership"]["sum"]) == pytest.approx(0.875)


def test_domain_works_for_recurrence_kind(rec_file, capsys):
    doc = run_doc(capsys, ["domain", str(rec_file)])
    assert doc["outputs"]["limits"] == ["3/2", "-1/2"]


def test_classify_document(a2_file, capsys):
    doc = run_doc(capsys, ["classify", str(a2_file)])
    out = doc["outputs"]
    assert out["case"] == "CASE1"
    assert out["h_labels"] == ["h1", "h2"]
    assert out["lag1"] == {"num_sub": "1", "den_sub": "2", "strictly_less": True}
    assert out["lag2"]["num_sub"] == "0" and out["lag2"]["strictly_less"]


def test_classify_degenerate_exits_3(tmp_path, capsys):
    path = tmp_path / "deg.json"
    path.write_text(A2_JSON.replace('"a": "2"', '"a": "-1"'))
    code, _, err = run(capsys, ["classify", str(path)])
    assert code == 3


def test_boundary_converging_probe(a2_file, tmp_path, capsys):
    out_dir = tmp_path / "out"
    doc = run_doc(capsys, ["boundary", str(a2_file), "--n-max", "16384",
                           "--radius-scale", "9/10", "--out", str(out_dir)])
    out = doc["outputs"]
    assert out["which"] == "modulus"
    assert out["verdict"] == "converges-empirically"
    assert out["r"] == pytest.approx(0.9 * 0.5615528128088303)
    assert doc["trace_files"] == ["a2.boundary.csv"]
    csv_text = (out_dir / "a2.boundary.csv").read_text()
    assert csv_text.splitlines()[0] == "n,value_re,value_im,log_mag,term_at_r,partial_sum"
    assert (out_dir / "a2.boundary.json").exists()


def test_boundary_diverging_probe(a2_file, capsys):
    doc = run_doc(capsys, ["boundary", str(a2_file), "--n-max", "16384",
                           "--radius", "2"])
    assert doc["outputs"]["verdict"] == "diverges-empirically"
    assert doc["outputs"]["r"] == 2.0


def test_boundary_signed_channel(a2_file, capsys):
    doc = run_doc(capsys, ["boundary", str(a2_file), "--n-max", "16384",
                           "--which", "signed"])
    assert doc["outputs"]["offset"] == 0
    assert len(doc["outputs"]["gaps"]) == 4


def test_gauss_convergent(capsys, tmp_path):
    out_dir = tmp_path / "g"
    doc = run_doc(capsys, ["gauss", "1/2", "1/2", "2",
                           "--n-max", "65536", "--out", str(out_dir)])
    assert doc["command"] == "gauss"
    assert doc["precision"] == "float64"
    assert doc["outputs"]["verdict"] == "ABS_CONVERGENT"
    assert doc["outputs"]["trend"] == "shrinking"
    assert (out_dir / "gauss.json").read_bytes() == (json.dumps(doc, sort_keys=True,
                                                                indent=2) + "\n").encode()


def test_gauss_divergent(capsys):
    doc = run_doc(capsys, ["gauss", "1/2", "1/2", "1", "--n-max", "65536"])
    assert doc["outputs"]["verdict"] == "DIVERGENT"
    assert doc["outputs"]["s"] == 0.0


def test_gauss_bad_c_exits_3(capsys):
    code, _, err = run(capsys, ["gauss", "1/2", "1/2", "0"])
    assert code == 3


def test_proof_audit_heun(a2_file, capsys):
    doc = run_doc(capsys, ["proof-audit", str(a2_file), "--n-check", "5000"])
    assert doc["command"] == "proof-audit"
    assert doc["root"] == "0"
    assert doc["constants"]["h_lag1"] == 2 and doc["constants"]["h_lag2"] == 3
    assert doc["constants"]["N"] == 301
    assert doc["verdicts"]["overall"] is True
    assert doc["minorant"]["regime"] == "divergent"


def test_proof_audit_recurrence(rec_file, capsys):
    doc = run_doc(capsys, ["proof-audit", str(rec_file), "--n-check", "5000"])
    assert doc["root"] is None
    assert doc["verdicts"]["overall"] is True


def test_directory_fan_out(tmp_path, capsys):
    (tmp_path / "one.json").write_text(A2_JSON)
    (tmp_path / "two.json").write_text(REC_JSON)
    code, out, err = run(capsys, ["domain", str(tmp_path), "--jobs", "2"])
    assert code == 0
    lines = out.strip().splitlines()
    assert len(lines) == 2
    assert all(line.endswith(": ok") for line in lines)
    assert (tmp_path / "one.domain.json").exists()
    assert (tmp_path / "two.domain.json").exists()


def test_directory_fan_out_reports_failures(tmp_path, capsys):
    (tmp_path / "good.json").write_text(A2_JSON)
    (tmp_path / "bad.json").write_text("{broken")
    code, out, _ = run(capsys, ["domain", str(tmp_path)])
    assert code == 3
    lines = out.strip().splitlines()
    assert any("exit 3" in line for line in lines)
    assert any(line.endswith(": ok") for line in lines)


def test_empty_directory_exits_3(tmp_path, capsys):
    code, _, err = run(capsys, ["domain", str(tmp_path)])
    assert code == 3
    assert "no .json" in err


def test_env_precision(tmp_path, capsys, monkeypatch):
    path = tmp_path / "noprec.json"
    path.write_text(A2_JSON.replace(', "precision": "exact"', ""))
    monkeypatch.setenv("HEUNLAB_PRECISION", "128")
    doc = run_doc(capsys, ["domain", str(path)])
    assert doc["precision"] == 128
    monkeypatch.setenv("HEUNLAB_PRECISION", "junk")
    code, _, err = run(capsys, ["domain", str(path)])
    assert code == 3


def test_precision_flag_beats_instance(a2_file, capsys):
    doc = run_doc(capsys, ["domain", str(a2_file), "--precision", "96"])
    assert doc["precision"] == 96


def test_bad_flag_exits_3(a2_file, capsys):
    with pytest.raises(SystemExit) as exc:
        main(["eval", str(a2_file), "--nope"])
    assert exc.value.code == 3
    capsys.readouterr()


def test_missing_file_exits_3(tmp_path, capsys):
    code, _, err = run(capsys, ["domain", str(tmp_path / "absent.json")])
    assert code == 3
