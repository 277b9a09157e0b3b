import json

import pytest

from exactnum.series import TruncSeries, parse_series
from weyl.text_format import op_from_json, parse_op
from weyl.weyl_op import WeylOp
from weylforms import EXIT_FAILED, EXIT_OK, EXIT_USAGE, main, parse_bounds

SMALL = ["max_modulus=2", "identity_modulus=2", "identity_index=3", "identity_power=2"]


def _json_out(capsys):
    return json.loads(capsys.readouterr().out)


def test_op_mul_and_comm(capsys):
    assert main(["--json", "op", "mul", "d", "x"]) == EXIT_OK
    assert op_from_json(_json_out(capsys)) == parse_op("x*d + 1")
    assert main(["--json", "op", "comm", "d", "x"]) == EXIT_OK
    assert op_from_json(_json_out(capsys)) == WeylOp.one()


def test_op_from_file(tmp_path, capsys):
    path = tmp_path / "p.json"
    path.write_text(json.dumps([{"i": 1, "j": 0, "coeff": "1/2"}, {"i": 0, "j": 2, "coeff": "1"}]))
    assert main(["--json", "op", "eval", f"@{path}"]) == EXIT_OK
    assert op_from_json(_json_out(capsys)) == parse_op("1/2*x + d^2")


def test_parse_errors_exit_2(tmp_path):
    assert main(["op", "eval", "x**d"]) == EXIT_USAGE
    assert main(["op", "eval", f"@{tmp_path / 'missing.json'}"]) == EXIT_USAGE
    assert main(["op", "mul", "x"]) == EXIT_USAGE
    assert main(["qp-tail", "1"]) == EXIT_USAGE
    with pytest.raises(SystemExit) as exc:
        main(["no-such-command"])
    assert exc.value.code == EXIT_USAGE


def test_decompose(capsys):
    assert main(["--json", "decompose", "x", "d + x^3"]) == EXIT_OK
    assert _json_out(capsys) == {"ok": True, "word": "PhiP(3,1)"}
    assert main(["--json", "decompose", "x", "2*d"]) == EXIT_FAILED
    payload = _json_out(capsys)
    assert payload["ok"] is False and payload["step"] == 0


def test_ode_solve(capsys):
    assert main(["--json", "ode", "solve", "--g=1,1", "--A", "2", "--d", "2"]) == EXIT_OK
    payload = _json_out(capsys)
    assert payload["solvable"] is True and payload["roots"] == 1
    assert main(["--json", "ode", "solve", "--g=0,-1,1", "--A", "1", "--d", "3"]) == EXIT_OK
    assert _json_out(capsys)["solvable"] is False


def test_recurse_json(capsys):
    assert main(["--json", "recurse", "x + d^2 + 2*x*d + x^2 + 1", "d + x"]) == EXIT_OK
    payload = _json_out(capsys)
    assert payload["verdict"] == "order below 1"
    assert [s["ord"] for s in payload["steps"]] == [1, 0]


def test_verify_exit_codes(capsys):
    assert main(["--json", "verify", "--seed", "3", "--only", "identities", "--bounds", *SMALL]) == EXIT_OK
    payload = _json_out(capsys)
    assert payload["passed"] and [c["check_id"] for c in payload["checks"]] == ["identities"]
    assert main(["--json", "verify", "--seed", "3", "--only", "identities", "--corrupt",
                 "--bounds", *SMALL]) == EXIT_FAILED
    assert _json_out(capsys)["passed"] is False


def test_parse_bounds():
    assert parse_bounds(["words=4", " depth = 2"]) == {"words": 4, "depth": 2}
    assert parse_bounds(None) == {}
    assert main(["verify", "--bounds", "words"]) == EXIT_USAGE
    assert main(["verify", "--bounds", "words=many"]) == EXIT_USAGE


def test_series_command(capsys):
    assert main(["--json", "series", "mul", "1 + x + O(x^4)", "1 - x + O(x^4)"]) == EXIT_OK
    payload = _json_out(capsys)
    assert parse_series(payload["series"]) == TruncSeries([1, 0, -1], 4)
    assert payload["precision"] == 4
    assert main(["--json", "series", "root", "1 + 2*x + x^2 + O(x^5)", "--n", "2"]) == EXIT_OK
    assert parse_series(_json_out(capsys)["series"]) == TruncSeries([1, 1], 5)
    assert main(["series", "inv", "x + O(x^4)"]) == EXIT_USAGE
    assert main(["series", "add", "1 + O(x^2)"]) == EXIT_USAGE


def test_negative_exponent_in_file_exits_2(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps([{"i": -1, "j": 0, "coeff": "1"}]))
    assert main(["op", "eval", f"@{path}"]) == EXIT_USAGE
