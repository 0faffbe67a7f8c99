import io
import json
import subprocess
import sys

import pytest

from shiftopt import ColumnMatrix, CostMatrix, sco_objective
from shiftopt.cli import run


def call(*argv):
    out = io.StringIO()
    code = run(list(argv), out=out)
    text = out.getvalue()
    return code, (json.loads(text) if text else None), text


@pytest.fixture
def files(tmp_path):
    def write(name, doc):
        path = tmp_path / name
        path.write_text(doc if isinstance(doc, str) else json.dumps(doc), encoding="utf-8")
        return str(path)
    return write


def test_domset_round_trip(files):
    graph = files("p3.json", {"n": 3, "edges": [[0, 1], [1, 2]]})
    code, inst, _ = call("gen-domset", "--graph", graph, "--r", "1")
    assert code == 0 and inst["n"] == 3 and inst["r"] == 1
    code, doc, _ = call("solve-explicit", "--instance", files("inst.json", inst))
    assert code == 0
    assert doc["status"] == "optimal" and doc["objective"] == 3
    c = CostMatrix.from_rows(inst["c"])
    assert sco_objective(c, ColumnMatrix(tuple(map(tuple, doc["columns"])))) == doc["objective"]
    assert sum(doc["composition"]) == inst["r"]


@pytest.mark.parametrize("algo", ["auto", "enum", "concave", "brute"])
def test_solvers_agree_on_file(files, algo):
    inst = files("i.json", {"n": 1, "r": 3, "S": [[2], [1], [0]], "c": [[3, 1, 0]]})
    code, doc, _ = call("solve-explicit", "--instance", inst, "--algo", algo)
    assert code == 0 and doc["objective"] == 8 and doc["composition"] == [2, 0, 1]


def test_graph_commands(files):
    k4 = files("k4.json", {"n": 4, "edges": [[0, 1], [0, 2], [0, 3], [1, 2], [1, 3], [2, 3]]})
    assert call("chromatic", "--graph", k4)[1] == {"status": "optimal", "objective": 4}
    assert call("domatic", "--graph", k4)[1] == {"status": "optimal", "objective": 4}
    code, doc, _ = call("solve-partition", "--graph", k4, "--predicate", "indep", "--parts", "4")
    assert doc["parts"] == [[0], [1], [2], [3]]
    assert call("solve-partition", "--graph", k4, "--predicate", "indep", "--parts", "3")[1] == {"status": "infeasible"}
    c5 = files("c5.json", {"n": 5, "edges": [[i, (i + 1) % 5] for i in range(5)]})
    code, doc, _ = call("ab-color", "--graph", c5, "--a", "5", "--b", "2")
    assert code == 0 and doc["objective"] == 10 and all(len(cs) == 2 for cs in doc["colors"])
    assert call("ab-color", "--graph", c5, "--a", "4", "--b", "2")[1]["status"] == "infeasible"


def test_msc_and_wsm(files):
    msc = files("msc.json", {"n": 1, "r": 2, "demands": [[2]], "family": [[0]]})
    code, inst, _ = call("gen-msc", "--instance", msc)
    assert inst["c"] == [[0, 1]]
    wsm = files("wsm.json", {"k": 1, "demands": [2], "sets": [{"members": [0], "cum_weights": [0, 1, 4]}]})
    assert call("solve-wsm", "--instance", wsm)[1] == {"status": "optimal", "objective": 4, "multiplicities": [2]}
    short = files("short.json", {"k": 1, "demands": [2], "sets": [{"members": [0], "cum_weights": [0, 1]}]})
    assert call("solve-wsm", "--instance", short) == (0, {"status": "infeasible"}, '{"status": "infeasible"}\n')


def test_verify_modes(files):
    code, doc, _ = call("verify", "--random", "100", "--seed", "7")
    assert code == 0 and doc["agree"] is True and doc["instances"] == 100
    inst = files("i.json", {"n": 2, "r": 2, "S": [[1, 0], [0, 1]], "c": [[1, 0], [1, 0]]})
    code, doc, _ = call("verify", "--instance", inst, "--algo", "concave")
    assert doc["agree"] is True and doc["solver"]["objective"] == doc["oracle"]["objective"] == 2


def test_determinism(files):
    inst = files("i.json", {"n": 2, "r": 3, "S": [[1, 0], [0, 1], [1, 1]], "c": [[2, 0, -1], [1, 1, -3]]})
    first = call("solve-explicit", "--instance", inst)[2]
    assert first == call("solve-explicit", "--instance", inst)[2]
    assert call("verify", "--random", "20", "--seed", "3")[2] == call("--seed", "3", "verify", "--random", "20")[2]


def test_exit_codes(files):
    assert call("bogus")[0] == 2
    assert call("solve-explicit")[0] == 2
    assert call("chromatic", "--graph", files("bad.json", "{not json"))[0] == 3
    assert call("chromatic", "--graph", files("loop.json", {"n": 2, "edges": [[0, 0]]}))[0] == 3
    assert call("chromatic", "--graph", "/nonexistent/graph.json")[0] == 3
    ragged = files("r.json", {"n": 2, "r": 2, "S": [[1, 0]], "c": [[1, 0]]})
    assert call("solve-explicit", "--instance", ragged)[0] == 3
    unshifted = files("u.json", {"n": 1, "r": 2, "S": [[1], [0]], "c": [[0, 1]]})
    assert call("solve-explicit", "--instance", unshifted, "--algo", "concave")[0] == 3
    huge = files("h.json", {"n": 1, "r": 2, "S": [[1]], "c": [[2**62, 2**62]]})
    assert call("solve-explicit", "--instance", huge)[0] == 4


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "shiftopt"], capture_output=True, text=True)
    assert proc.returncode == 2 and proc.stdout == "" and "usage" in proc.stderr
