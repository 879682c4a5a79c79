import json

import pytest

from flatiso import catalog, cli, exprio


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture()
def perturbed_file(tmp_path, perturbed_klein):
    doc = exprio.serialize_pvf(perturbed_klein)
    p = tmp_path / "perturbed.json"
    p.write_text(json.dumps(doc))
    return str(p)


def test_catalog_list(capsys):
    code, out, err = run(capsys, "catalog", "list")
    assert code == 0
    assert json.loads(out)["ids"] == catalog.catalog_list()
    assert "LT8" in err


def test_verify_wdvv_pass(capsys):
    code, out, err = run(capsys, "verify-wdvv", "--catalog", "LT8")
    assert code == 0
    rep = json.loads(out)
    assert rep["pass"] and rep["failing_commutators"] == []
    assert "tolerances" in rep


def test_verify_wdvv_perturbed_fails(capsys, perturbed_file):
    code, out, err = run(capsys, "verify-wdvv", "--input", perturbed_file)
    assert code == 1
    rep = json.loads(out)
    assert rep["failing_commutators"] == [[1, 2]]


def test_unknown_catalog_id(capsys):
    code, out, err = run(capsys, "verify-wdvv", "--catalog", "nope")
    assert code == 2
    assert "input error" in err


def test_missing_input(capsys):
    code, out, err = run(capsys, "verify-wdvv")
    assert code == 2


def test_saito_and_logvf(capsys):
    code, out, _ = run(capsys, "saito", "--catalog", "H3")
    assert code == 0
    rep = json.loads(out)
    assert rep["saito_relations_ok"] and rep["flat_normalization_ok"]
    code, out, _ = run(capsys, "logvf", "--catalog", "H3")
    assert code == 0
    assert json.loads(out)["saito_criterion_c"] == "1"


def test_extract_p6_json_file(capsys, tmp_path):
    target = tmp_path / "report.json"
    code, out, err = run(capsys, "extract-p6", "--catalog", "LT8",
                         "--json", str(target))
    assert code == 0
    assert out == ""
    rep = json.loads(target.read_text())
    assert rep["pvi_residual"] < 1e-6
    assert rep["samples_csv"].startswith("s,t1,t2,t,y,dy,d2y,residual")


def test_extract_p6_entry_flag(capsys):
    # a non-default entry gives a different PVI branch with its own
    # parameter dictionary (theta_inf = lam_3 - lam_1 here)
    code, out, err = run(capsys, "extract-p6", "--catalog", "LT8",
                         "--entry", "3,1")
    assert code == 0
    rep = json.loads(out)
    assert rep["entry"] == [3, 1]
    assert abs(rep["params"]["theta"]["inf"][0] - 5 / 7) < 1e-12


def test_extract_p6_degenerate_entry(capsys):
    # (1,3) is identically zero in the lambda_3 = 0 normalization
    code, out, err = run(capsys, "extract-p6", "--catalog", "LT8",
                         "--entry", "1,3")
    assert code == 2


def test_schlesinger_and_midconv(capsys):
    code, out, _ = run(capsys, "schlesinger", "--catalog", "LT8")
    assert code == 0
    assert json.loads(out)["schlesinger_residual"] < 1e-6
    code, out, _ = run(capsys, "midconv", "--catalog", "LT8")
    assert code == 0
    rep = json.loads(out)
    assert rep["gamma_inf_error"] < 1e-8 and rep["trace_error"] < 1e-8


def test_jm_roundtrip_deterministic(capsys):
    code1, out1, _ = run(capsys, "jm-roundtrip", "--seed", "11", "--steps", "200")
    code2, out2, _ = run(capsys, "jm-roundtrip", "--seed", "11", "--steps", "200")
    assert code1 == code2 == 0
    assert out1 == out2          # identical inputs and seeds: identical reports
    rep = json.loads(out1)
    assert rep["pvi_residual"] < 1e-6 and rep["schlesinger_residual"] < 1e-6


def test_catalog_verify_single(capsys):
    code, out, err = run(capsys, "catalog", "verify", "--catalog", "LT26",
                         "--depth", "numeric")
    assert code == 0
    rep = json.loads(out)
    assert rep["entries"]["LT26"]["numeric"]["pvi_residual"] < 1e-6


def test_custom_path_file(capsys, tmp_path):
    p = tmp_path / "path.json"
    p.write_text(json.dumps({"t1": 1.0, "t2_start": 0.45, "t2_end": 0.55,
                             "points": 21, "z_seed": None}))
    code, out, _ = run(capsys, "schlesinger", "--catalog", "LT8",
                       "--path", str(p))
    assert code == 0
    assert json.loads(out)["schlesinger_residual"] < 1e-6
