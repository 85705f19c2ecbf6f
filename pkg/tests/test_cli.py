import io
import json

import pytest

from bgcompact import fingroup
from bgcompact.cli import builtin_group, render_table, reproduce, run


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(["--no-cache", *argv], stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def test_weyl_order():
    assert call("weyl", "order", "B2") == (0, "8\n", "")


def test_nt_json():
    code, out, _ = call("pcompact", "nt", "F4", "--format", "json")
    assert code == 0
    assert json.loads(out) == {"variant": "all_except", "primes": [2, 3]}


def test_json_canonical_round_trip():
    _, out, _ = call("weyl", "show", "G2", "--format", "json")
    assert json.dumps(json.loads(out), sort_keys=True, indent=2, ensure_ascii=True) + "\n" == out


def test_classify_table():
    code, out, _ = call("classify", "--max-rank", "4", "--format", "json")
    assert code == 0
    admitted = {(r["ambient"], r["sub"]) for r in json.loads(out) if r["admitted"]}
    assert admitted == {("A1", "T"), ("B2", "T"), ("B2", "D2"), ("B3", "D3"), ("B4", "D4"), ("C2", "A1^2"), ("G2", "A2")}
    _, table, _ = call("classify", "--max-rank", "2")
    assert table.isascii() and "admitted" in table.splitlines()[0]


def test_group_verbs():
    assert call("group", "nilpotent", "--from", "Q8")[1] == "true\n"
    assert call("group", "pnilpotent", "-p", "3", "--from", "S3")[1] == "false\n"
    code, out, _ = call("group", "sylow", "-p", "3", "--from", "F4", "--format", "json")
    assert code == 0 and json.loads(out)["order"] == 9
    assert json.loads(call("group", "center", "--from", "Q8", "--format", "json")[1])["order"] == 2
    assert call("group", "iso", "S3", "--from", "W(A2)")[1] == "true\n"


def test_group_from_cache_file(tmp_path):
    path = tmp_path / "g.json"
    path.write_text(json.dumps(builtin_group("G2").to_json()))
    assert call("group", "nilpotent", "--from", str(path))[1] == "false\n"


def test_molien_verb():
    code, out, _ = call("molien", "B2", "--format", "json")
    data = json.loads(out)
    assert code == 0 and data["degrees"] == [2, 4]
    assert json.loads(call("molien", "Z3cyc", "--format", "json")[1])["degrees"] is None


def test_pcompact_verbs(tmp_path):
    assert json.loads(call("pcompact", "finite", "S3", "--format", "json")[1]) == {"variant": "all_except", "primes": [3]}
    assert json.loads(call("pcompact", "wreath", "3", "--format", "json")[1])["prime_set"] == {
        "variant": "greater_than",
        "n": 3,
    }
    q = json.loads(call("pcompact", "quotient", "A2<G2", "--nu", "3", "--format", "json")[1])
    assert q == {"variant": "all_except", "primes": [3]}
    pair = json.loads(call("pcompact", "pair", "D<B3", "--format", "json")[1])
    assert pair["two_realizable"] is False
    desc = tmp_path / "nt_a1.json"
    desc.write_text(json.dumps({"torus_rank": 1, "pi0": {"builtin": "S2"}, "action": [[["-1"]]]}))
    assert call("pcompact", "toral", str(desc), "-p", "2")[1] == "true\n"
    assert call("pcompact", "toral", str(desc), "-p", "3")[1] == "false\n"


def test_psi_verb():
    data = json.loads(call("psi", "--bound", "3", "--format", "json")[1])
    assert data["psi"] == [["-1/1", "1/1"], ["1/1", "0/1"]]
    assert data["mod3_intertwiner_absent"] is True


def test_usage_error():
    code, _, err = call("nonsense")
    assert code == 2 and "classify --max-rank" in err
    assert call("weyl", "order")[0] == 2


def test_computation_errors():
    code, _, err = call("weyl", "order", "E8")
    assert code == 1 and "UnsupportedType" in err
    assert call("group", "iso", "M11", "--from", "S3")[0] == 1
    assert call("pcompact", "quotient", "D<B3", "--nu", "3")[0] == 1


def test_reproduce_rows():
    bundle = reproduce().to_json()
    titles = [s["title"] for s in bundle["sections"]]
    assert len(titles) == len(set(titles))
    rows = {s["title"]: s["rows"] for s in bundle["sections"]}
    wreath = rows["wreath products Sp(1) wr Sigma_n"]
    n3 = next(r for r in wreath if r["n"] == 3)
    assert n3["set"] == ">3" and n3["reflection_witness"] is False
    s3 = next(r for r in rows["prime sets of symmetric groups"] if r["group"] == "S3")
    assert s3["set"] == "all - {3}"
    q8 = next(r for r in rows["Q8 extension data"] if r["group"] == "Q8")
    assert q8["complement"] is False and q8["char_norm"] == 8
    assert render_table(bundle).isascii()


def test_cache_env(tmp_path, monkeypatch):
    monkeypatch.setenv("WEYLCACHE_DIR", str(tmp_path))
    fingroup._CATALOG.clear()
    out = io.StringIO()
    assert run(["group", "nilpotent", "--from", "D8"], stdout=out) == 0
    assert list(tmp_path.glob("*.json"))
    assert fingroup._CACHE_DIR is None
