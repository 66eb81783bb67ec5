import io
import json
import math

import pytest

from conftest import DATA
from psentropy.cli import run


def invoke(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out=out, err=err)
    return code, out.getvalue(), err.getvalue()


def records(text):
    rows = {}
    for line in filter(None, text.splitlines()):
        key, value, tol = line.split("\t")
        rows[key] = (value, tol)
    return rows


def test_entropy_catalog():
    code, out, _ = invoke("entropy", "--catalog", "theta", "--format", "records")
    assert code == 0
    rows = records(out)
    assert float(rows["h"][0]) == pytest.approx(2.0794415417, abs=1e-9)
    assert rows["h"][1] == "1e-12"


def test_entropy_graph_file():
    code, out, _ = invoke("entropy", "--graph", str(DATA / "rose2.graph"), "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert doc["h"]["value"] == pytest.approx(2 * math.log(3), abs=1e-9)


def test_fraction_lengths():
    code, out, _ = invoke("entropy", "--catalog", "K4", "--lengths", ",".join(["1/6"] * 6), "--format", "json")
    assert json.loads(out)["h"]["value"] == pytest.approx(6 * math.log(2), abs=1e-9)


def test_env_tolerance(monkeypatch):
    monkeypatch.setenv("ENTROPY_TOL", "1e-10")
    _, out, _ = invoke("entropy", "--catalog", "theta", "--format", "json")
    assert json.loads(out)["h"]["tol"] == 1e-10


def test_weights_sum_one():
    _, out, _ = invoke("weights", "--catalog", "theta", "--scaling", "sum-one", "--format", "json")
    doc = json.loads(out)
    ws = [v["value"] for k, v in doc.items() if k.startswith("w.")]
    assert len(ws) == 6 and sum(ws) == pytest.approx(1.0)


def test_currents_export():
    _, out, _ = invoke("currents", "--catalog", "theta", "--max-edges", "1", "--format", "records")
    rows = records(out)
    assert float(rows["nu.a+.raw"][0]) == pytest.approx(1 / 3)
    assert float(rows["nu.a+.projective"][0]) == pytest.approx(1 / 6)


def test_grad():
    _, out, _ = invoke("grad", "--catalog", "theta", "--format", "json")
    doc = json.loads(out)
    assert doc["grad.a+"]["value"] == pytest.approx(-1.5 * math.log(2))
    assert doc["grad_sym.a"]["value"] == pytest.approx(-3 * math.log(2))
    assert doc["euler_residual"]["value"] <= 1e-8


def test_critical_non_regular_error(tmp_path):
    path = tmp_path / "irregular.graph"
    path.write_text("vertex u\nvertex v\nedge x u u\nedge a u v\nedge b u v\n")
    code, _, err = invoke("critical", "--graph", str(path))
    assert code == 1
    assert err.startswith("error\tvalidation")


def test_minimize():
    code, out, _ = invoke("minimize", "--catalog", "theta", "--init", "0.5,0.3,0.2", "--format", "json")
    doc = json.loads(out)
    assert code == 0 and doc["converged"]
    for e in "abc":
        assert doc[f"argmin.{e}"]["value"] == pytest.approx(1 / 3, abs=1e-4)


def test_walk_reproducible(tmp_path):
    argv = ["oracle", "walk", "--catalog", "theta", "--steps", "10000", "--trials", "50", "--seed", "7", "--format", "records"]
    first, second = invoke(*argv), invoke(*argv)
    assert first == second
    csv_path = tmp_path / "freq.csv"
    invoke(*argv, "--csv", str(csv_path))
    assert csv_path.read_text().splitlines()[0] == "edge,frequency"


def test_oracle_count_and_growth(tmp_path):
    _, out, _ = invoke("oracle", "count", "--catalog", "theta", "--radius", "2.0", "--format", "json")
    assert json.loads(out)["count"] == 189
    csv_path = tmp_path / "growth.csv"
    _, out, _ = invoke("oracle", "growth", "--catalog", "theta", "--csv", str(csv_path), "--format", "json")
    assert json.loads(out)["h_hat"]["value"] == pytest.approx(3 * math.log(2), rel=0.05)
    assert csv_path.read_text().startswith("R,N")


def test_poincare():
    _, out, _ = invoke("oracle", "poincare", "--catalog", "theta", "--s", "5", "--max-edges", "0", "--format", "json")
    assert json.loads(out)["poincare.0"] == 1.0


def test_demo_sup():
    _, out, _ = invoke("demo", "sup", "--format", "json")
    doc = json.loads(out)
    assert doc["sup.1e-06"]["value"] > 10


def test_catalog_list():
    code, out, _ = invoke("catalog", "list")
    assert code == 0 and "K4" in out


def test_each_preserves_order():
    _, out, _ = invoke("entropy", "--catalog", "K4", "--catalog", "theta", "--each", "--format", "records")
    inputs = [line.split("\t")[1] for line in out.splitlines() if line.startswith("input\t")]
    assert inputs == ["K4", "theta"]


def test_multiple_inputs_need_each():
    code, _, err = invoke("entropy", "--catalog", "K4", "--catalog", "theta")
    assert code == 1


@pytest.mark.parametrize(
    "argv,kind",
    [
        (["entropy", "--catalog", "nonsense"], "catalog"),
        (["entropy", "--catalog", "rose(2)", "--lengths", "0,1"], "singular"),
        (["entropy", "--catalog", "theta", "--lengths=-1,1,1"], "metric"),
        (["entropy", "--graph", "/nonexistent/file.graph"], "input"),
    ],
)
def test_error_kinds(argv, kind):
    code, _, err = invoke(*argv, "--format", "json")
    assert code == 1
    assert json.loads(err)["error"] == kind


def test_syntax_error_kind(tmp_path):
    f = tmp_path / "bad.graph"
    f.write_text("vertex p\nedge a p\n")
    code, _, err = invoke("entropy", "--graph", str(f))
    assert code == 1 and err.startswith("error\tsyntax\tline 2")


def test_unknown_flag_rejected():
    with pytest.raises(SystemExit):
        run(["entropy", "--catalog", "theta", "--bogus"])


def test_non_positive_option_rejected():
    with pytest.raises(SystemExit):
        run(["currents", "--catalog", "theta", "--max-edges", "0"])
