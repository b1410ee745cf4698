import json
import logging

import pytest

from aromatic.cache import BasisCache, cache_get_or_build
from aromatic.cli import main
from aromatic.config import DEFAULT_CAPS, load_config
from aromatic.report import run_suite


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_enumerate_count(capsys, tmp_path):
    code, out, _ = run(capsys, "enumerate", "trees", "--n", "4", "--count", "--cache-dir", str(tmp_path))
    assert code == 0 and out.strip() == "64"
    code, out, _ = run(capsys, "enumerate", "unlabelled-trees", "--n", "4", "--cache-dir", str(tmp_path))
    assert out.split() == ["(((())))", "((()()))", "((())())", "(()()())"]


def test_cache_cold_warm_and_tampered(tmp_path, caplog):
    cache = BasisCache(tmp_path)
    trees = cache.get("trees", 4)
    assert len(trees) == 64 and cache.builds == 1
    path = cache.path("trees", 4, "")
    first = path.read_bytes()
    assert cache.get("trees", 4) == trees and cache.builds == 1
    assert path.read_bytes() == first
    other = BasisCache(tmp_path / "other")
    other.get("trees", 4)
    assert other.path("trees", 4, "").read_bytes() == first
    path.write_text(first.decode().replace("[", "[9,", 1))
    with caplog.at_level(logging.WARNING):
        assert cache.get("trees", 4) == trees
    assert cache.builds == 2 and "regenerating" in caplog.text
    assert path.read_bytes() == first
    path.write_text("not json")
    assert cache.get("trees", 4) == trees and cache.builds == 3


def test_cache_version_mismatch(tmp_path):
    cache = BasisCache(tmp_path)
    cache.get("aromas", 3, "plus")
    path = cache.path("aromas", 3, "plus")
    data = json.loads(path.read_text())
    data["format"] = 0
    path.write_text(json.dumps(data))
    assert len(cache.get("aromas", 3, "plus")) == 8
    assert cache.builds == 2
    assert len(cache_get_or_build("forests", 2, "", cache_dir=tmp_path)) == 9


def test_op_commands(capsys):
    code, out, _ = run(capsys, "op", "compose", "s(1,3)", "s", "c(a)")
    assert code == 0 and out.strip() == "c(a(1,3)) + c(3,a(1)) + c(1,a(3)) + c(1,3,a)"
    code, out, _ = run(capsys, "op", "brace", "1", "2", "3")
    assert out.strip() == "cycle[1;2;3] + cycle[1;3;2]"
    code, out, _ = run(capsys, "op", "div0", "1")
    assert out.strip() == "0"
    code, out, _ = run(capsys, "op", "canonical", "cycle[2(3);1]")
    assert out.strip() == "cycle[(());()]"
    code, _, err = run(capsys, "op", "div", "1(2")
    assert code == 2 and "error" in err
    code, _, err = run(capsys, "op", "prelie", "1")
    assert code == 2


def test_homology_json_and_dump(capsys, tmp_path):
    report = tmp_path / "h.json"
    dump = tmp_path / "mats"
    code, out, _ = run(capsys, "homology", "--complex", "ce-Ltilde", "--arity", "3", "--json", str(report),
                       "--dump-matrices", str(dump))
    assert code == 0
    data = json.loads(report.read_text())
    assert data["schema"] == 1 and data["complex"] == "ce-Ltilde" and data["arity"] == 3
    assert {d["degree"]: d["dim_homology"] for d in data["degrees"]} == {0: 1, 1: 0, 2: 0, 3: 0}
    assert all(c["pass"] for c in data["checks"])
    files = sorted(p.name for p in dump.iterdir())
    assert files == ["ce-Ltilde_n3_d1.txt", "ce-Ltilde_n3_d2.txt", "ce-Ltilde_n3_d3.txt"]
    dims = {d["degree"]: d["dim_chain"] for d in data["degrees"]}
    assert (dump / files[0]).read_text().startswith(f"matrix {dims[0]} {dims[1]}\n")


@pytest.mark.parametrize("complex_", ["ce-L", "aromatic", "aromatic-df", "graphs", "graphs-cr"])
def test_homology_variants(capsys, complex_):
    code, out, _ = run(capsys, "homology", "--complex", complex_, "--arity", "2")
    assert code == 0 and "dim homology" in out


def test_homology_cap(capsys):
    code, _, err = run(capsys, "homology", "--complex", "ce-L", "--arity", "9")
    assert code == 2 and "cap" in err


def test_bseries_commands(capsys, tmp_path):
    code, out, _ = run(capsys, "bseries", "--check-divergence", "--max-order", "3", "--dim", "2")
    assert code == 0 and out.count("[pass]") == 4
    coeffs = tmp_path / "b.json"
    coeffs.write_text(json.dumps({"1": [{"tree": "()", "value": "1"}], "2": [{"tree": "(())", "value": "1/2"}]}))
    code, out, _ = run(capsys, "bseries", "--obstruction", str(coeffs), "--max-order", "4", "--json", "-")
    assert code == 0 and out.startswith("order 2: 1/2*cycle[();()]")
    coeffs.write_text(json.dumps({"()": "1"}))
    code, out, _ = run(capsys, "bseries", "--obstruction", str(coeffs))
    assert "vanishes through order 6" in out
    code, _, err = run(capsys, "bseries", "--obstruction", str(coeffs), "--max-order", "9")
    assert code == 2


def test_verify_identities_json(capsys, tmp_path):
    path = tmp_path / "r.json"
    code, out, _ = run(capsys, "verify", "identities", "--max-n", "3", "--json", str(path))
    assert code == 0 and "0 failed" in out
    data = json.loads(path.read_text())
    assert data["schema"] == 1 and data["pass"] is True
    assert all({"claim", "anchor", "params", "expected", "computed", "pass", "seconds"} <= set(c) for c in data["checks"])


def test_verify_refuses_above_cap(capsys):
    code, _, err = run(capsys, "verify", "kernels", "--max-n", "9")
    assert code == 2 and "refused" in err


def test_verify_failure_sets_exit_code(capsys):
    # the product formula gives -1 at arity one while H0 vanishes there
    code, out, _ = run(capsys, "verify", "characters", "--max-n", "1")
    assert code == 1 and "FAIL" in out and "expected -1, computed \"0\"" in out


def test_parallel_report_is_order_stable(tmp_path):
    a = run_suite("embedding", load_config({"max_n": 3}, environ={})).to_json(timings=False)
    b = run_suite("embedding", load_config({"max_n": 3, "parallel": True}, environ={})).to_json(timings=False)
    assert a == b


def test_config_precedence(tmp_path):
    f = tmp_path / "afl.conf"
    f.write_text("# defaults for the lab machine\nseed = 5\nmax_n = 3\ncap.kernels = 7\n")
    cfg = load_config({}, path=f, environ={})
    assert (cfg.seed, cfg.max_n, cfg.cap("kernels")) == (5, 3, 7)
    cfg = load_config({}, path=f, environ={"AFL_SEED": "9", "AFL_CAP_GRAPH_COMPLEX": "6"})
    assert cfg.seed == 9 and cfg.cap("graph-complex") == 6
    cfg = load_config({"seed": 11}, path=f, environ={"AFL_SEED": "9"})
    assert cfg.seed == 11 and cfg.max_n == 3
    assert load_config({}, environ={}).caps == DEFAULT_CAPS
    f.write_text("bogus = 1\n")
    with pytest.raises(ValueError):
        load_config({}, path=f, environ={})
