import json

import pytest

from bephase import __version__, cli, formats, states


def run(capsys, *argv):
    code = cli.main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, (json.loads(out) if out.strip() else None), err


@pytest.fixture
def files(tmp_path, capsys):
    paths = {}
    for name, args in {
        "singlet": ["max-ent", "--m", 2],
        "cv": ["cv-bes", "--a", 0.4, "--c", 0.6, "--n", 5],
        "iso": ["isotropic", "--m", 3, "--f", 0.7],
        "spurious": ["spurious", "--blocks", 2],
    }.items():
        paths[name] = tmp_path / f"{name}.json"
        code, _, _ = run(capsys, "make-state", *args, "--state-out", paths[name])
        assert code == 0
    paths["product"] = tmp_path / "product.json"
    prod = states.product_density(states.random_density(2, 1, seed=1).mat, states.random_density(3, 1, seed=2).mat)
    formats.dump_json(formats.state_to_json(prod), paths["product"])
    return paths


def test_make_state_reports(capsys):
    code, rep, _ = run(capsys, "make-state", "cv-bes", "--a", 0.4, "--c", 0.6, "--n", 5)
    assert code == 0
    assert rep["artifact"] == "bephase" and rep["version"] == __version__
    assert rep["summary"]["ppt"] is True
    assert rep["summary"]["trace"] == pytest.approx(1.0)
    code, rep, _ = run(capsys, "make-state", "max-ent", "--m", 3)
    assert "amps" in rep["state"]
    code, rep, _ = run(capsys, "make-state", "isotropic", "--m", 3, "--f", 0.7)
    assert rep["state"]["F"] == 0.7


def test_analyze_singlet(capsys, files):
    code, rep, _ = run(capsys, "analyze", files["singlet"], "--p", 2)
    assert code == 0
    assert rep["summary"]["ppt"] is False
    vals = {v["candidate"]: v["value"] for v in rep["lambda_p"] if v["p"] == 2}
    assert vals["psi_plus"] == pytest.approx(-0.5)


def test_analyze_ppt_inputs_nonnegative(capsys, files):
    for name in ("cv", "product"):
        code, rep, _ = run(capsys, "analyze", files[name])
        assert rep["summary"]["ppt"] is True
        assert all(v["value"] >= -1e-10 for v in rep["lambda_p"])


def test_analyze_isotropic_bound(capsys, files):
    _, rep, _ = run(capsys, "analyze", files["iso"], "--p", 3)
    assert rep["isotropic"]["schmidt_lower_bound"] == 3


def test_distill_exit_codes(capsys, files):
    code, rep, _ = run(capsys, "distill", files["singlet"], "--n-max", 1)
    assert code == 0
    assert rep["certificate"]["epsilon"] == pytest.approx(-0.5, abs=1e-9)
    code, rep, _ = run(capsys, "distill", files["cv"])
    assert code == 2 and rep["result"] == "inconclusive"


def test_ball_singlet(capsys, files, tmp_path):
    code, rep, _ = run(capsys, "ball", files["singlet"], "--eta", 0.1, "--samples", 100)
    assert code == 0
    assert rep["ball"]["violations"] == 0
    assert rep["radius"] == pytest.approx(1 / 8)
    cert_path = tmp_path / "cert.json"
    run(capsys, "distill", files["singlet"], "--out", cert_path)
    code, rep, _ = run(capsys, "ball", files["singlet"], "--eta", 0.1, "--samples", 10, "--certificate", cert_path)
    assert code == 0 and rep["ball"]["violations"] == 0


def test_ball_lambda_p(capsys, files):
    code, rep, _ = run(capsys, "ball", files["iso"], "--eta", 0.01, "--p", 3, "--samples", 20)
    assert code == 0 and rep["ball"]["violations"] == 0


def test_density_csv(capsys, tmp_path):
    state = tmp_path / "cv8.json"
    run(capsys, "make-state", "cv-bes", "--n", 8, "--state-out", state)
    csv_path = tmp_path / "d.csv"
    code, rep, _ = run(capsys, "density", state, "--n-min", 2, "--n-max", 4, "--csv", csv_path)
    assert code == 0
    lines = csv_path.read_text().splitlines()
    assert lines[0] == "N,distance,epsilon" and len(lines) == 4
    assert all(r["revalidated"] for r in rep["rows"])


def test_protocol(capsys, files):
    code, rep, _ = run(capsys, "protocol", files["iso"], "--p", 3)
    assert code == 0 and rep["certificate"]["F"] == pytest.approx(0.7)
    code, rep, _ = run(capsys, "protocol", files["cv"], "--p", 2)
    assert code == 2


def test_witness(capsys, files):
    code, rep, _ = run(capsys, "witness", files["spurious"], "--restarts", 5, "--samples", 500)
    assert code == 0
    assert rep["value_on_state"] == pytest.approx(-rep["witness"]["epsilon"], abs=1e-10)


def test_sweep(capsys, tmp_path):
    csv_path = tmp_path / "s.csv"
    code, rep, _ = run(capsys, "sweep", "--states", 1, "--s", 2, "--csv", csv_path)
    assert code == 0
    assert csv_path.read_text().splitlines()[0] == "state,s,found,value"


def test_error_exit(capsys, tmp_path):
    code, _, err = run(capsys, "analyze", tmp_path / "missing.json")
    assert code == 1
    assert json.loads(err)["error"]["type"] == "ParseError"
    code, _, err = run(capsys, "make-state", "isotropic", "--f", 2.0)
    assert code == 1


def test_seed_precedence(capsys, tmp_path, monkeypatch):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"seed": 5, "tolerances": {"psd": 1e-9}}))
    _, rep, _ = run(capsys, "make-state", "random", "--config", cfg)
    assert rep["config"]["seed"] == 5
    assert rep["config"]["tolerances"]["psd"] == 1e-9
    monkeypatch.setenv("BEPHASE_SEED", "7")
    _, rep, _ = run(capsys, "make-state", "random", "--config", cfg)
    assert rep["config"]["seed"] == 7
    _, rep, _ = run(capsys, "make-state", "random", "--config", cfg, "--seed", 9)
    assert rep["config"]["seed"] == 9


def test_reports_reproducible(capsys, files):
    _, a, _ = run(capsys, "distill", files["iso"], "--seed", 3)
    _, b, _ = run(capsys, "distill", files["iso"], "--seed", 3)
    assert json.dumps(a) == json.dumps(b)
