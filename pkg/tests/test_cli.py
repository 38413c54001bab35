import json
from pathlib import Path

import pytest
from click.testing import CliRunner

from wfcalc import charclasses, cli

DATA = Path(__file__).resolve().parents[1] / "data"


def run(*args, env=None):
    return CliRunner().invoke(cli.main, [str(a) for a in args], env=env)


@pytest.mark.parametrize("args, text", [
    (("eis", "--weight", 4, "--order", 2), "1 + 240q + 2160q^2"),
    (("eta", "--order", 1), "q^{1/24}(1 − q)"),
    (("phi", "--order", 5), "1 − q − q^2 + q^5"),
    (("delta", "--order", 4), "q − 24q^2 + 252q^3 − 1472q^4"),
    (("witten", "--manifest", DATA / "dim6.json", "--order", 10), "0"),
    (("witten", "--manifest", DATA / "dim4_string.json", "--order", 10), "0"),
    (("komf", "--degree", 4), "MF^Z_2"),
    (("komf", "--degree", 5), "0"),
])
def test_compute_examples(args, text):
    res = run(*args)
    assert res.exit_code == 0
    assert res.output.strip() == text


def test_witten_dim8_is_negative_e4():
    res = run("witten", "--manifest", DATA / "dim8_string.json", "--order", 2)
    assert res.output.strip() == "−1 − 240q − 2160q^2"


@pytest.mark.parametrize("args", [
    ("check", "weierstrass", "--qorder", 8, "--zorder", 8),
    ("check", "euler-char", "--rank", 2, "--dim", 6, "--order", 8),
    ("check", "semigroup", "--seed", 7, "--trials", 50),
    ("check", "eta-h", "--dim", 8, "--order", 4),
    ("check", "anomaly", "--rank", 2, "--dim", 6, "--order", 4),
    ("check", "mckean-singer", "--seed", 3, "--trials", 10),
    ("check", "eft", "--rank", 2, "--dim", 4, "--order", 3),
])
def test_checks_pass(args):
    res = run(*args)
    assert res.exit_code == 0, res.output
    assert res.output.startswith("PASS")


def test_check_json_report():
    res = run("check", "euler-char", "--rank", 2, "--dim", 6, "--order", 8, "--format", "json")
    rep = json.loads(res.output)
    assert rep["passed"] and rep["command"] == "check euler-char"
    (c,) = rep["checks"]
    assert c["precision"] == {"dim": 6, "q": 8, "rank": 2} and c["certificate"] is None


def test_failing_check_exits_one(monkeypatch):
    real = charclasses.euler_character_check

    def broken(n, dim, N):
        r = real(n, dim, N)
        return charclasses._compare(r.lhs, r.rhs.scale(2))
    monkeypatch.setattr(charclasses, "euler_character_check", broken)
    res = run("check", "euler-char", "--rank", 2, "--dim", 4, "--order", 3)
    assert res.exit_code == 1
    assert res.output.startswith("FAIL") and "first failure" in res.output


def test_seed_is_required():
    assert run("check", "semigroup").exit_code == 2
    assert run("check", "mckean-singer").exit_code == 2


def test_seeded_output_is_deterministic():
    a = run("check", "semigroup", "--seed", 11, "--trials", 5, "--format", "json")
    b = run("check", "semigroup", "--seed", 11, "--trials", 5, "--format", "json")
    strip = lambda o: [{k: v for k, v in c.items() if k != "seconds"} for c in json.loads(o)["checks"]]
    assert strip(a.output) == strip(b.output)


def test_malformed_manifest_exits_two(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run("witten", "--manifest", bad).exit_code == 2
    bad.write_text(json.dumps({"pontryagin_numbers": {}}))
    assert run("witten", "--manifest", bad).exit_code == 2


def test_odd_rank_is_input_error():
    assert run("euler-char", "--rank", 3, "--dim", 6, "--order", 4).exit_code == 2


def test_precision_error_exits_three():
    res = run("mf-basis", "--weight", 36, "--order", 1)
    assert res.exit_code == 3


def test_default_order_env():
    res = run("eis", "--weight", 4, env={"WF_DEFAULT_ORDER": "1"})
    assert res.output.strip() == "1 + 240q"
    assert run("eis", "--weight", 4, env={"WF_DEFAULT_ORDER": "x"}).exit_code == 2


def test_output_file(tmp_path):
    out = tmp_path / "e.json"
    res = run("eis", "--weight", 6, "--order", 2, "--format", "json", "--output", out)
    assert res.exit_code == 0
    assert json.loads(out.read_text()) == json.loads(res.output)


@pytest.mark.parametrize("name, order", [("e2over12.json", 24), ("e2over24.json", 48)])
def test_bn_order(name, order):
    res = run("bn-order", "--series", DATA / name, "--weight", 2, "--lattice-scale", 2, "--pole", 2,
              "--order", 50, "--max-d", 100, "--format", "json")
    assert json.loads(res.output) == {"order": order, "P": 2, "N": 50}


def test_bn_order_none_up_to():
    res = run("bn-order", "--series", DATA / "e2over24.json", "--weight", 2, "--lattice-scale", 2,
              "--pole", 2, "--order", 50, "--max-d", 20)
    assert res.output.strip() == "none up to 20"


def test_komf_table():
    lines = run("komf", "--table").output.strip().splitlines()
    assert len(lines) == 8 and lines[0] == "8k: MF^Z_{4k}"


def test_basis_commands():
    assert run("mf-basis", "--weight", 12, "--order", 2).output.strip().splitlines() == [
        "1 + 196560q^2", "q − 24q^2"]
    assert run("wh-basis", "--weight", 0, "--pole", 1, "--order", 1).output.splitlines()[0] == "q^{-1} + 196884q"
