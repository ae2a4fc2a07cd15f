import json

from cubicalc.cli import run


def test_derive_example(capsys):
    assert run(["derive", "--expr", "f(x)=x^2", "--n", "1"]) == 0
    assert capsys.readouterr().out.strip() == "(v0^2, 2*v0*v1 + t1*v1^2, t1)"


def test_derive_alpha_and_json(capsys):
    assert run(["derive", "--expr", "f(x)=x^2", "--N", "1,2", "--alpha", "2",
                "--format", "json"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["alpha"] == [2]
    assert payload["inputs"] == ["v0", "v2", "t1", "t2", "t12"]


def test_eval_slope_examples(capsys):
    assert run(["eval", "--expr", "f(x)=x^2", "--order", "1", "--point", "1",
                "--v", "1", "--t", "1"]) == 0
    assert capsys.readouterr().out.strip() == "3"
    assert run(["eval", "--expr", "f(x)=x^2", "--order", "1", "--point", "1",
                "--v", "1", "--t", "0"]) == 0
    assert capsys.readouterr().out.strip() == "2"


def test_eval_closed_n2(capsys):
    assert run(["eval", "--expr", "f(x)=x^2", "--order", "2", "--point", "0",
                "--v", "2,3,0", "--t", "1,1"]) == 0
    assert capsys.readouterr().out.strip() == "12"  # 2 v1 v2


def test_eval_digits(capsys):
    assert run(["eval", "--expr", "f(x)=x^2", "--order", "1", "--point", "1/2",
                "--v", "1", "--t", "0", "--digits", "3"]) == 0
    assert capsys.readouterr().out.strip() == "1.000"


def test_eval_closed_non_unit_exits_2(capsys):
    assert run(["eval", "--expr", "f(x)=x^2", "--order", "2", "--point", "0",
                "--v", "1,1,0", "--t", "0,1", "--mode", "closed"]) == 2


def test_parse_error_exit_2(capsys):
    assert run(["slope", "--expr", "f(x) = 1/x"]) == 2
    assert "non-polynomial" in capsys.readouterr().err


def test_table_vertex_bytes(capsys):
    assert run(["table", "--construction", "gfull", "--N", "1,2",
                "--what", "vertex"]) == 0
    out = capsys.readouterr().out
    assert "(v0,v2,t1,t2,t12)" in out
    assert "U^{2} x_{0^{2}} 0^{12}" in out


def test_table_edge_row(capsys):
    assert run(["table", "--construction", "scaleoid", "--N", "1,2",
                "--what", "edge", "--edge", "1>12"]) == 0
    out = capsys.readouterr().out
    assert "pi(t1,t2,t12) = (t1 + t2*t12, t2)" in out


def test_check_gsy_exit_codes(capsys):
    assert run(["check", "--construction", "gsy", "--n", "2", "--t", "1,1",
                "--seed", "7", "--samples", "20"]) == 0
    out = capsys.readouterr().out
    assert "all pass" in out


def test_check_json_roundtrip(capsys):
    assert run(["check", "--construction", "pg", "--n", "1", "--seed", "3",
                "--samples", "5", "--format", "json"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert all(r["status"] == "pass" for r in payload["reports"])
    for r in payload["reports"]:
        assert {"law", "location", "status", "samples", "seed"} <= set(r)


def test_check_goverline(capsys):
    assert run(["check", "--construction", "goverline", "--n", "1",
                "--samples", "10"]) == 0


def test_stdin_file(capsys, monkeypatch):
    import io

    monkeypatch.setattr("sys.stdin", io.StringIO("f(x) = x^3"))
    assert run(["slope", "--file", "-"]) == 0
    assert "3*x^2" in capsys.readouterr().out


def test_mod_ring_cli(capsys):
    assert run(["eval", "--expr", "f(x)=x^2", "--order", "1", "--point", "1",
                "--v", "1", "--t", "1", "--ring", "mod:5"]) == 0
    assert capsys.readouterr().out.strip() == "3"
