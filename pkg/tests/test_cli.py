import json
import subprocess
import sys
from importlib import resources

import jsonschema
import pytest

from fixtures import dense_from_upper, UPPER_7, matrix_12
from robinsonian.cli import main
from robinsonian.instances import claw, cycle_graph, path_graph, random_robinsonian, worst_case
from robinsonian.matrix import dumps_matrix_market
from robinsonian.sfs import is_sfs_ordering, LinearOrder
from fixtures import matrix_7


@pytest.fixture(scope="module")
def schema():
    text = resources.files("robinsonian").joinpath("report.schema.json").read_text()
    return json.loads(text)


@pytest.fixture
def files(tmp_path):
    out = {}
    p = tmp_path / "seven.csv"
    p.write_text("\n".join(",".join(map(str, r)) for r in dense_from_upper(UPPER_7)) + "\n")
    out["seven"] = p
    for name, A in [("c4", cycle_graph(4)), ("c5", cycle_graph(5)), ("claw", claw()), ("p5", path_graph(5)),
                    ("twelve", matrix_12())]:
        q = tmp_path / f"{name}.mtx"
        q.write_text(dumps_matrix_market(A))
        out[name] = q
    return out


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    cap = capsys.readouterr()
    return code, cap.out, cap.err


def test_recognize_seven(capsys, files):
    code, out, _ = run(capsys, "recognize", files["seven"])
    assert code == 0 and "status: Robinsonian" in out
    line = next(t for t in out.splitlines() if t.startswith("order:"))
    assert line.split()[1:] in (list("1234567"), list("7654321"))


def test_recognize_worst_case_with_sigma0(capsys, tmp_path):
    assert run(capsys, "generate", "worst_case", "--n", 11, "-o", tmp_path / "w.mtx")[0] == 0
    sigma = tmp_path / "w.sigma0.txt"
    assert sigma.read_text().split() == "2 3 4 5 6 7 8 9 10 11 1".split()
    code, out, _ = run(capsys, "recognize", tmp_path / "w.mtx", "--seed-order", sigma, "--json")
    rep = json.loads(out)
    assert code == 0 and rep["sweeps_used"] == 10 and rep["seed"] == 0
    code, out, _ = run(capsys, "recognize", tmp_path / "w.mtx", "--initial", sigma, "--json", "--no-early-exit")
    assert json.loads(out)["sweeps_used"] == 10


def test_recognize_c4_certificate(capsys, files, schema):
    code, out, _ = run(capsys, "recognize", files["c4"], "--json")
    rep = json.loads(out)
    assert code == 1 and rep["status"] == "NotRobinsonian"
    assert len(rep["certificate"]["triple"]) == 3
    jsonschema.validate(rep, schema)


def test_recognize_binary(capsys, files):
    assert run(capsys, "recognize", files["p5"], "--binary")[0] == 0
    assert run(capsys, "recognize", files["claw"], "--binary")[0] == 1
    assert run(capsys, "recognize", files["seven"], "--binary")[0] == 2


def test_verify_examples(capsys, files):
    assert run(capsys, "verify", files["seven"], "identity")[0] == 0
    assert run(capsys, "verify", files["seven"], "reversed", "--oracle")[0] == 0
    code, out, _ = run(capsys, "verify", files["seven"], "7 2 3 4 5 6 1", "--oracle")
    assert code == 1 and "violation" in out


def test_sweep_examples(capsys, files, tmp_path):
    code, out, _ = run(capsys, "sweep", files["seven"])
    order = LinearOrder.parse(out)
    assert code == 0 and is_sfs_ordering(matrix_7(), order)
    assert run(capsys, "sweep", files["seven"], "--plus", "identity")[1].split() == "7 6 5 4 3 2 1".split()
    w = tmp_path / "w5.mtx"
    w.write_text(dumps_matrix_market(worst_case(5)[0]))
    code, out, err = run(capsys, "sweep", w, "--plus", "(2,3,4,5,1)", "--trace")
    assert out.split() == ["1", "4", "3", "2", "5"]
    assert len(err.strip().splitlines()) == 5
    code, _, err = run(capsys, "sweep", w, "--plus", "1 2 3")
    assert code == 2 and "error" in err
    bad = tmp_path / "bad.txt"
    bad.write_text("1 2 banana\n")
    assert run(capsys, "sweep", w, "--plus", bad)[0] == 2


def test_sweep_dissimilarity(capsys, tmp_path):
    p = tmp_path / "d.csv"
    p.write_text("0,1,2\n1,0,1\n2,1,0\n")
    code, out, _ = run(capsys, "sweep", p, "--dissimilarity", "--seed-order", "2 1 3")
    assert code == 0 and sorted(out.split()) == ["1", "2", "3"]
    assert run(capsys, "recognize", p, "--dissimilarity")[0] == 0


def test_input_errors(capsys, tmp_path):
    assert run(capsys, "recognize", tmp_path / "missing.mtx")[0] == 2
    p = tmp_path / "neg.csv"
    p.write_text("0,-1\n-1,0\n")
    assert run(capsys, "recognize", p)[0] == 2
    assert run(capsys, "recognize", p, "--shift")[0] == 0
    q = tmp_path / "ragged.csv"
    q.write_text("0,1\n1\n")
    assert run(capsys, "recognize", q)[0] == 2
    with pytest.raises(SystemExit) as e:
        main(["recognize"])
    assert e.value.code == 2


def test_scale_flag_and_env(capsys, tmp_path, monkeypatch):
    p = tmp_path / "r.csv"
    p.write_text("0,0.5,0.25\n0.5,0,0.5\n0.25,0.5,0\n")
    code, out, _ = run(capsys, "recognize", p, "--scale", "100", "--json")
    assert code == 0
    monkeypatch.setenv("SFS_SCALE", "bogus")
    assert run(capsys, "recognize", p)[0] == 2
    monkeypatch.setenv("SFS_SCALE", "1000")
    assert run(capsys, "recognize", p)[0] == 0


def test_recognize_then_verify_roundtrip(capsys, tmp_path, schema):
    for seed in range(10):
        A, _ = random_robinsonian(15, 10, seed)
        m = tmp_path / f"r{seed}.mtx"
        m.write_text(dumps_matrix_market(A))
        o = tmp_path / f"r{seed}.txt"
        code, out, _ = run(capsys, "recognize", m, "--json", "--output-order", o)
        assert code == 0
        jsonschema.validate(json.loads(out), schema)
        assert run(capsys, "verify", m, o)[0] == 0


def test_exit_codes_on_corpus(capsys, files, schema):
    expected = {"seven": 0, "c4": 1, "c5": 1, "claw": 1, "p5": 0, "twelve": 0}
    for name, code in expected.items():
        got, out, _ = run(capsys, "recognize", files[name], "--json")
        assert got == code, name
        jsonschema.validate(json.loads(out), schema)


def test_generate_sidecars(capsys, tmp_path):
    out = tmp_path / "r.mtx"
    assert run(capsys, "generate", "random_robinsonian", "--n", 9, "--seed", 5, "-o", out)[0] == 0
    meta = json.loads((tmp_path / "r.json").read_text())
    assert meta["spec"]["seed"] == 5 and len(meta["hidden_order"]) == 9
    assert run(capsys, "verify", out, tmp_path / "r.order.txt")[0] == 0
    again = tmp_path / "again.mtx"
    run(capsys, "generate", "random_robinsonian", "--n", 9, "--seed", 5, "-o", again)
    assert again.read_bytes() == out.read_bytes()


def test_oracle_check(capsys, files):
    code, out, _ = run(capsys, "oracle-check", files["c4"])
    assert code == 0 and "agree" in out
    assert run(capsys, "oracle-check", files["twelve"])[0] == 2


def test_bench(capsys):
    code, out, _ = run(capsys, "bench", "--grid", "0")
    assert code == 0 and out.strip().splitlines() == ["kind,n,m,sweeps,sweep_seconds,total_seconds,ns_per_edge"]
    code, out, _ = run(capsys, "bench", "--grid", "200,400", "--kind", "binary", "--repeats", "1")
    lines = out.strip().splitlines()
    assert code == 0 and len(lines) == 3 and lines[1].startswith("binary,200,")
    code, out, _ = run(capsys, "bench", "--grid", "200", "--format", "text", "--repeats", "1")
    assert "random_robinsonian" in out
    assert run(capsys, "bench", "--grid", "1,x")[0] == 2


def test_module_entry_point(files):
    proc = subprocess.run([sys.executable, "-m", "robinsonian", "recognize", str(files["c5"])],
                          capture_output=True, text=True)
    assert proc.returncode == 1 and "NotRobinsonian" in proc.stdout
