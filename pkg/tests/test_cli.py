import json
import subprocess
import sys

import pytest

from ffchains.cli import generate, main, parse_params
from ffchains.poset import dumps, poset_from_json, poset_to_json


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def write(tmp_path, name, obj):
    p = tmp_path / name
    p.write_text(dumps(obj))
    return str(p)


def test_generate_sizes(capsys):
    code, out, _ = run(capsys, "generate", "ladder", "4")
    assert code == 0 and json.loads(out)["n"] == 8
    code, out, _ = run(capsys, "generate", "reservoir", "3")
    bundle = json.loads(out)
    assert len(bundle["order"]) == 17 and len(bundle["wall"]["chains"]) == 7
    code, out, _ = run(capsys, "generate", "butterfly-lb", "2")
    assert len(json.loads(out)["wall"]["chains"]) == 21


@pytest.mark.parametrize("family, param", [("chain", "5"), ("antichain", "3"), ("ladder", "3"), ("n", None),
                                           ("butterfly", None), ("stacked", "3"), ("skewed", None),
                                           ("reservoir", "3"), ("butterfly-lb", "3")])
def test_round_trip_is_byte_identical(capsys, family, param):
    argv = ["generate", family] + ([param] if param else [])
    code, out, _ = run(capsys, *argv)
    assert code == 0
    obj = json.loads(out)
    if "poset" in obj:
        obj["poset"] = poset_to_json(poset_from_json(obj["poset"]))
    else:
        obj = poset_to_json(poset_from_json(obj))
    assert dumps(obj) == out


def test_generate_usage_errors(capsys):
    assert run(capsys, "generate", "ladder")[0] == 2
    assert run(capsys, "generate", "n", "3")[0] == 2
    assert run(capsys, "generate", "butterfly-lb", "4")[0] == 2
    with pytest.raises(SystemExit) as exc:
        main(["generate", "hexagon", "3"])
    assert exc.value.code == 2


def test_firstfit_examples(capsys, tmp_path):
    bundle = write(tmp_path, "r2.json", generate("reservoir", 2))
    code, out, _ = run(capsys, "firstfit", bundle)
    assert code == 0 and json.loads(out)["maxChains"] == 3
    chain5 = write(tmp_path, "c5.json", generate("chain", 5))
    code, out, _ = run(capsys, "firstfit", chain5, "--random-orders", "10", "--seed", "3")
    assert json.loads(out)["maxChains"] == 1 and json.loads(out)["seed"] == 3
    anti = write(tmp_path, "a4.json", generate("antichain", 4))
    code, out, _ = run(capsys, "firstfit", anti, "--random-orders", "5")
    assert json.loads(out)["maxChains"] == 4


def test_firstfit_order_file_and_trace(capsys, tmp_path):
    poset = write(tmp_path, "a3.json", generate("antichain", 3))
    order = write(tmp_path, "o.json", [2, 0, 1])
    code, out, _ = run(capsys, "firstfit", poset, "--order", order, "--trace")
    run_ = json.loads(out)["runs"][0]
    assert run_["chains"] == 3
    assert [s["rejected"] for s in run_["trace"]] == [[], [1], [1, 2]]


def test_firstfit_random_orders_are_seeded(capsys, tmp_path):
    bundle = write(tmp_path, "r3.json", generate("reservoir", 3))
    a = run(capsys, "firstfit", bundle, "--random-orders", "5", "--seed", "9")[1]
    b = run(capsys, "firstfit", bundle, "--random-orders", "5", "--seed", "9")[1]
    assert a == b


def test_schema_errors(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run(capsys, "firstfit", str(bad))[0] == 2
    cyc = write(tmp_path, "cyc.json", {"n": 2, "relations": [[0, 1], [1, 0]]})
    code, _, err = run(capsys, "export-dot", cyc)
    assert code == 2 and "cycle" in err.lower()
    poset = write(tmp_path, "c3.json", generate("chain", 3))
    short = write(tmp_path, "o.json", [0, 1])
    assert run(capsys, "firstfit", poset, "--order", short)[0] == 2
    assert run(capsys, "firstfit", str(tmp_path / "missing.json"))[0] == 2


def test_classify(capsys, tmp_path):
    sk = write(tmp_path, "sk.json", generate("skewed"))
    code, out, _ = run(capsys, "classify", sk)
    assert code == 0 and json.loads(out)["bound"]["kind"] == "exponentialLower"
    bf = write(tmp_path, "bf.json", generate("butterfly"))
    assert json.loads(run(capsys, "classify", bf)[1])["inQ"] is True
    c1 = write(tmp_path, "c1.json", generate("chain", 1))
    verdict = json.loads(run(capsys, "classify", c1, "--gamma", "2.5")[1])
    assert verdict["bound"]["C"] == pytest.approx(8.5)
    wide = write(tmp_path, "a3.json", generate("antichain", 3))
    assert run(capsys, "classify", wide, "--gamma", "1")[0] == 2
    assert run(capsys, "classify", c1, "--gamma", "-1")[0] == 2


def test_export_dot(capsys, tmp_path):
    c3 = write(tmp_path, "c3.json", generate("chain", 3))
    dot = run(capsys, "export-dot", c3)[1]
    assert dot.count("->") == 2 and dot.count("label=") == 3
    bf = write(tmp_path, "bf.json", generate("butterfly"))
    assert run(capsys, "export-dot", bf)[1].count("->") == 4
    r2 = write(tmp_path, "r2.json", generate("reservoir", 2))
    dot = run(capsys, "export-dot", r2)[1]
    assert dot.count("->") == len(json.loads(open(r2).read())["poset"]["relations"])


def test_bounds_eval(capsys):
    code, out, _ = run(capsys, "bounds", "eval", "--kind", "seriesComposition", "--params", "s=1,t=2,w=2")
    assert code == 0 and json.loads(out)["value"] == 14
    out = run(capsys, "bounds", "eval", "--kind", "corollarySeries", "--params", "cs=1:1,w=4")[1]
    assert json.loads(out)["exponentLog2"] == 56
    out = run(capsys, "bounds", "eval", "--kind", "reservoirLower", "--params", "w=70")[1]
    assert json.loads(out)["value"] == 2**70 - 1
    assert run(capsys, "bounds", "eval", "--kind", "ksLadder", "--params", "n=4,w=8")[0] == 2
    assert run(capsys, "bounds", "eval", "--kind", "ksLadder", "--params", "n=4")[0] == 2


def test_parse_params():
    assert parse_params("sizes=2:3,gamma=1.5,w=16") == {"sizes": [2, 3], "gamma": 1.5, "w": 16}
    assert parse_params("cs=4") == {"cs": [4]}
    assert parse_params("") == {}


def test_maxwall_and_checkwall(capsys, tmp_path):
    r2 = write(tmp_path, "r2.json", generate("reservoir", 2))
    out = json.loads(run(capsys, "maxwall", r2)[1])
    assert out["size"] == 3 and out["exact"]
    code, out, _ = run(capsys, "checkwall", r2)
    assert code == 0 and json.loads(out)["isWall"]
    c2 = write(tmp_path, "c2.json", generate("chain", 2))
    split = write(tmp_path, "w.json", {"chains": [[0], [1]]})
    assert run(capsys, "checkwall", c2, "--wall", split)[0] == 1


def test_out_flag_writes_file(capsys, tmp_path):
    target = tmp_path / "l.json"
    code, out, _ = run(capsys, "generate", "ladder", "2", "--out", str(target))
    assert code == 0 and out == ""
    assert json.loads(target.read_text())["n"] == 4


def test_verify_targets(capsys):
    code, out, _ = run(capsys, "verify", "reservoir", "--kmax", "4")
    report = json.loads(out)
    assert code == 0 and report["passed"] and report["parameters"]["seed"] is not None
    assert [r["wall"] for r in report["records"]] == [1, 3, 7, 15]
    code, out, _ = run(capsys, "verify", "butterfly", "--q", "3")
    assert code == 0 and json.loads(out)["records"][0]["butterflyFree"]
    code, out, _ = run(capsys, "verify", "classifier", "--nmax", "4")
    assert code == 0
    code, out, _ = run(capsys, "verify", "dilworth", "--nmax", "4", "--workers", "2")
    assert code == 0


def test_verify_is_deterministic_under_seed(capsys):
    a = run(capsys, "verify", "reservoir", "--kmax", "3", "--seed", "5", "--workers", "3")[1]
    b = run(capsys, "verify", "reservoir", "--kmax", "3", "--seed", "5")[1]
    assert a == b


def test_verify_failure_exit_code(capsys, monkeypatch):
    from ffchains import verify

    def broken(**kw):
        rep = verify.ExperimentReport("reservoir", {"seed": kw["seed"]})
        rep.check(False, "forced failure")
        return rep

    monkeypatch.setitem(verify.TARGETS, "reservoir", broken)
    code, _, err = run(capsys, "verify", "reservoir")
    assert code == 1 and "forced failure" in err


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "ffchains", "generate", "n"], capture_output=True, text=True)
    assert res.returncode == 0
    assert json.loads(res.stdout)["relations"] == [[0, 2], [1, 2], [1, 3]]
