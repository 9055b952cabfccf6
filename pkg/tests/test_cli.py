import json

import numpy as np
import pytest

from cpmfrob import cpmap as cp
from cpmfrob import io
from cpmfrob import randomgen as rg
from cpmfrob.cli import main


@pytest.fixture
def gen(tmp_path):
    def make(*argv, name="x.json"):
        path = tmp_path / name
        assert main(["generate", *argv, "--out", str(path)]) == 0
        return str(path)

    return make


def run_json(capsys, *argv):
    code = main([*argv, "--json", "--no-timing"])
    return code, json.loads(capsys.readouterr().out)


def test_check_pass_fail_and_parse_error(gen, capsys, tmp_path):
    assert run_json(capsys, "check", gen("spider", "3"))[0] == 0
    code, rep = run_json(capsys, "check", gen("spider", "3", "--double", "--mix", name="m.json"))
    assert code == 1 and rep["verdict"] == "fail" and rep["failing"]
    bad = tmp_path / "bad.json"
    bad.write_text(open(gen("spider", "2")).read()[:50])
    assert main(["check", str(bad)]) == 2
    assert main(["check", str(tmp_path / "missing.json")]) == 2


def test_check_reports_snake_trace(gen, capsys):
    _, rep = run_json(capsys, "check", gen("matrix", "2"))
    assert rep["expected_snake_trace"] == 16
    assert abs(abs(rep["axioms"]["snake_trace"]) - 16) < 1e-9


def test_canonicalize_spider_rechecks(gen, capsys, tmp_path):
    out = tmp_path / "canon.json"
    code, rep = run_json(capsys, "canonicalize", gen("spider", "2", "--double"), "--out", str(out))
    assert code == 0 and rep["verdict"] == "canonical"
    assert main(["check", str(out), "--no-timing"]) == 0
    capsys.readouterr()


def test_canonicalize_matrix(gen, capsys):
    code, rep = run_json(capsys, "canonicalize", gen("matrix", "2", "--double"))
    assert code == 0
    assert rep["residual_delta"] <= 1e-8 and rep["residual_epsilon"] <= 1e-8
    assert max(rep["algebra_axioms"]["residuals"].values()) <= 1e-8


def test_canonicalize_mixture_rejected(gen, capsys):
    code, rep = run_json(capsys, "canonicalize", gen("spider", "2", "--double", "--mix"))
    assert code == 1 and rep["verdict"] == "hypotheses_failed"
    assert max(rep["axioms"]["residuals"][k] for k in rep["failing"]) > 1e-8


def test_canonicalize_needs_comonoid(gen):
    assert main(["canonicalize", gen("spider", "2")]) == 2


def test_generate_double(gen):
    obj, meta = io.read_structure(gen("spider", "3", "--double"))
    assert type(obj).__name__ == "CpComonoid" and obj.dim == 3
    assert meta["generator"] == "spider 3"


def test_generate_perturbed_phases(gen, capsys):
    code, rep = run_json(capsys, "check", gen("matrix", "2", "--perturb-phases", "0.7"))
    assert code == 1
    assert abs(rep["phases"]["lambda"] - 0.7) < 1e-9


def test_generate_direct_sum(gen, capsys):
    path = gen("direct_sum", "spider:2", "matrix:2")
    assert io.read_structure(path)[0].dim == 6
    assert run_json(capsys, "check", path)[0] == 0


def test_decompose_pure_isometry(gen, capsys):
    code, rep = run_json(capsys, "decompose", gen("isometry", "1", "2", "3"))
    assert code == 0 and rep["decomposition"]["n"] == 1
    assert abs(rep["decomposition"]["coeffs"][0] - 1) < 1e-12


def test_decompose_two_terms(tmp_path, capsys):
    r = np.random.default_rng(3)
    vs = rg.orthogonal_isometries(r, 2, 2, 5)
    w = 1 / np.sqrt(2)
    path = tmp_path / "two.json"
    path.write_text(io.emit(cp.add([cp.cpm_double(v) for v in vs], [w, w])))
    code, rep = run_json(capsys, "decompose", str(path))
    assert code == 0 and rep["decomposition"]["n"] == 2
    assert np.allclose(np.square(rep["decomposition"]["coeffs"]), [0.5, 0.5], atol=1e-10)
    assert rep["reconstruction_residual"] < 1e-10


def test_decompose_rejects_channel(gen, capsys):
    code, rep = run_json(capsys, "decompose", gen("depolarizing", "0.3"))
    assert code == 1 and rep["verdict"] == "not_isometry" and rep["choi_distance"] > 1e-3


@pytest.mark.parametrize(
    "argv",
    [
        ["generate", "spider", "0"],
        ["generate", "spider", "two"],
        ["generate", "spider"],
        ["generate", "direct_sum", "spider:2"],
        ["generate", "direct_sum", "spider:2", "banana:2"],
        ["generate", "isometry", "2", "2", "3"],
        ["generate", "depolarizing", "1.5"],
        ["generate", "spider", "2", "--mix"],
        ["generate", "spider", "2", "--double", "--mix", "2"],
        ["generate", "nonsense", "2"],
        ["check"],
        [],
    ],
)
def test_usage_errors(argv, capsys):
    assert main(argv) == 2
    capsys.readouterr()


def test_tol_env_override(gen, capsys, monkeypatch):
    path = gen("spider", "2", "--double", "--mix", "0.999999")
    assert main(["check", path, "--no-timing"]) == 1
    capsys.readouterr()
    monkeypatch.setenv("CPMFROB_TOL", "1e-2")
    code, rep = run_json(capsys, "check", path)
    assert rep["tolerance"] == 1e-2 and code == 0
    assert main(["check", path, "--tol", "1e-12", "--no-timing"]) == 1
    monkeypatch.setenv("CPMFROB_TOL", "abc")
    assert main(["check", path]) == 2
    monkeypatch.setenv("CPMFROB_TOL", "-1")
    assert main(["check", path]) == 2
    capsys.readouterr()


@pytest.mark.parametrize("cmd", ["check", "canonicalize"])
@pytest.mark.parametrize("fmt", ["--json", "--text"])
def test_byte_deterministic(gen, capsys, cmd, fmt):
    path = gen("matrix", "2", "--double")
    outs = []
    for _ in range(2):
        main([cmd, path, fmt, "--no-timing"])
        outs.append(capsys.readouterr().out)
    assert outs[0] == outs[1] and outs[0]


def test_generate_deterministic(gen, tmp_path):
    a = gen("channel", "2", "3", "2", "--seed", "5", name="a.json")
    b = gen("channel", "2", "3", "2", "--seed", "5", name="b.json")
    assert open(a).read() == open(b).read()


def test_report_file(gen, tmp_path, capsys):
    rep = tmp_path / "rep.json"
    assert main(["check", gen("spider", "2"), "--json", "--report", str(rep)]) == 0
    assert capsys.readouterr().out == ""
    data = json.loads(rep.read_text())
    assert data["verdict"] == "pass" and "timing" in data


def test_text_residual_precision(gen, capsys):
    main(["check", gen("spider", "2"), "--no-timing"])
    out = capsys.readouterr().out
    assert "frobenius" in out
    assert all(len(line.split()[1]) == 8 for line in out.splitlines() if line.startswith("  ") and "phases" not in line)
