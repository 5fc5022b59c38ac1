import io
import json
import subprocess
import sys


from incistrata.cli import run


def call(argv, doc=None, tmp_path=None):
    if doc is not None:
        path = tmp_path / "input.json"
        path.write_text(json.dumps(doc))
        argv = argv + ["--input", str(path)]
    out = io.StringIO()
    code = run(argv, out)
    return code, json.loads(out.getvalue())


def test_nk(tmp_path):
    code, doc = call(["nk", "--weights", "1,2"])
    assert code == 0 and doc["N"] == 3 and doc["verified"]
    assert doc["certificate"] == {"3,1": "4/3", "2,2": "1/2", "2,1,1": "-1", "1,1,1,1": "1/6"}
    assert [w["degree"] for w in doc["witnesses"]] == [1, 2, 3]


def test_inadmissible_error():
    code, doc = call(["nk", "--weights", "1,-1"])
    assert code == 1 and doc["error"]["code"] == "inadmissible_profile"


def test_cap_exceeded_error():
    code, doc = call(["nk", "--weights", "1,2,4", "--degree-cap", "4"])
    assert code == 1 and doc["error"]["code"] == "cap_exceeded"


def test_schema_violation():
    code, doc = call(["nk"])
    assert code == 1 and doc["error"]["code"] == "schema_violation"


def test_symbolic_relation_and_propagate(tmp_path):
    code, doc = call(["relation", "--k", "2", "--degree", "4"])
    assert code == 0 and doc["status"] == "member"
    code, out = call(["propagate", "--t", "2"], {"certificate": doc["certificate"]}, tmp_path)
    assert code == 0 and out["verified"] and out["certificate"]["target"] == 5


def test_symbolic_relation_non_member():
    code, doc = call(["relation", "--k", "2", "--degree", "3"])
    assert code == 0 and doc["status"] == "non_member"


def test_numeric_relation():
    code, doc = call(["relation", "--weights", "1,2", "--degree", "3"])
    assert code == 0 and doc["member"] is False and doc["verified"]


def test_identities():
    code, doc = call(["identities"])
    assert code == 0 and doc["all_zero"]


def test_branches_and_classify(tmp_path):
    case = {"profile": [[1, 1], [1, 1], [2, 0], [0, 2], [100, 101]], "point_profile": [[102, 103], [2, 2]]}
    code, doc = call(["branches"], case, tmp_path)
    assert code == 0 and len(doc["branches"]) == 2 and sorted(doc["immersion"]) == [False, True]
    code, doc = call(["classify"], {"profile": [[1], [1]], "point_profile": [[2]]}, tmp_path)
    assert code == 0 and doc["smooth"] is True


def test_sum_mismatch(tmp_path):
    code, doc = call(["classify"], {"profile": [[1], [2]], "point_profile": [[4]]}, tmp_path)
    assert code == 1 and doc["error"]["code"] == "sum_mismatch"


def test_codim_and_exhaustion():
    code, doc = call(["codim", "--weights", "3,1,1,1"])
    assert code == 0 and doc["codim"] == 1
    code, doc = call(["codim", "--weights", ",".join(["1"] * 13)])
    assert code == 1 and doc["error"]["code"] == "exhaustion_bound"


def test_farb_wolfson():
    code, doc = call(["farb-wolfson", "--d", "2", "--n", "2"])
    assert code == 0 and (doc["codim_poly"], doc["codim_rat"], doc["verdict"]) == (1, 2, "distinct")


def test_embed_and_equal(tmp_path):
    cfg = {"points": [[1], [2]], "weights": [[2], [1]]}
    code, doc = call(["embed", "--N", "3"], {"configuration": cfg}, tmp_path)
    assert code == 0 and doc["embedding"] == [["-4", "5", "-2"]] and doc["discriminant_vanishes"]
    pair = {"a": {"points": [[1], [1]], "weights": [[1], [1]]}, "b": {"points": [[1]], "weights": [[2]]}}
    code, doc = call(["equal"], pair, tmp_path)
    assert code == 0 and doc["equal"] is True


def test_admissible():
    code, doc = call(["admissible", "--weights", "1,2,-3"])
    assert code == 0 and doc["admissible"] is False


def test_oracle_command():
    code, doc = call(["oracle", "--count", "10"])
    assert code == 0 and doc["count"] == 10 and doc["all_agree"]


def test_recursion_command():
    code, doc = call(["recursion", "--k", "2", "--weights", "1,2"])
    assert code == 0
    assert doc["w_sequence"] == [1, 2] and doc["annihilator"]["degree"] == 8
    assert doc["relation"]["target"] == 9 and all(doc["cross_check"].values())


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "incistrata", "admissible", "--weights", "1,2"],
                          capture_output=True, text=True, check=True)
    assert json.loads(proc.stdout) == {"admissible": True}


def test_output_is_deterministic():
    a = call(["relation", "--k", "2", "--degree", "4"])[1]
    b = call(["relation", "--k", "2", "--degree", "4"])[1]
    assert a == b
