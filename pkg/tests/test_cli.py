import json

import pytest

from schwarz.cli import SCHEMA_VERSION, main, parse_complex, run
from schwarz.exact import ExactComplex


def call(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out.strip(), out.err.strip()


def call_json(capsys, *argv):
    code, out, _ = call(capsys, *argv, "--json")
    data = json.loads(out)
    assert data["schema_version"] == SCHEMA_VERSION
    return code, data


def test_complexify_text(capsys):
    assert call(capsys, "complexify", "--curve", "x^2+y^2-1")[:2] == (0, "z*w - 1")


def test_condition_a_line(capsys):
    code, out, _ = call(capsys, "condition-a", "--curve", "y")
    assert code == 0 and out == "false, single branch w = z"
    code, data = call_json(capsys, "condition-a", "--curve", "y")
    assert data["result"]["holds"] is False and data["result"]["witness"] is None


def test_blaschke_check(capsys):
    assert call(capsys, "blaschke-check", "--map", "(z-1/2)/(1-z/2)")[:2] == (0, "true")
    assert call(capsys, "blaschke-check", "--map", "z+1")[:2] == (0, "false")


@pytest.mark.parametrize(
    "argv, key",
    [
        (["complexify", "--curve", "x^2+y^2-2*x"], "Q"),
        (["realify", "--qform", "z*w-z-w"], "P"),
        (["branches", "--curve", "x^2+y^2-2*x", "--order", "3"], "branches"),
        (["classify", "--curve", "x^2/4+y^2-1"], "branches"),
        (["singular", "--curve", "y^2-x^3"], "points"),
        (["preset", "--kind", "rose", "--params", "1", "2", "1"], "P"),
        (["image", "--map", "z^2", "--curve", "x^2+y^2-1"], "P"),
        (["maps-into", "--map", "z+1/z", "--source", "x^2+y^2-1", "--target", "y"], "result"),
        (["blaschke-factor", "--map", "(z-1/2)/(1-z/2)"], "lambda"),
        (["unimodular-locus", "--map", "z+1"], "P"),
        (["ps-bound", "--p1", "z", "--p2", "z+1"], "result"),
        (["verify-identity", "--map", "exp(z+1/z)", "--source", "x^2+y^2-1", "--target", "y",
          "--base", "1,0", "--samples", "10"], "max_residual"),
        (["verify-involution", "--curve", "x^2+y^2-1", "--base", "3/5,4/5", "--samples", "10"], "passed"),
    ],
)
def test_every_command_emits_json(capsys, argv, key):
    code, data = call_json(capsys, *argv)
    assert code == 0 and data["status"] == "ok"
    assert key in data["result"]
    assert data["command"] == argv[0]


def test_json_values(capsys):
    _, data = call_json(capsys, "ps-bound", "--p1", "z", "--p2", "z^2")
    assert data["result"] == {"result": "SHARED_BLASCHKE_STRUCTURE", "bound": 9}
    _, data = call_json(capsys, "maps-into", "--map", "z+2", "--source", "x^2+y^2-1", "--target", "x^2+y^2-1")
    assert data["result"]["result"] is False
    _, data = call_json(capsys, "branches", "--curve", "x^2+y^2-1")
    assert data["result"]["branches"] == [{"m": 1, "terms": [[-1, 1, 1.0, 0.0]], "class": "DECAY_TO_ZERO",
                                           "limit": [0.0, 0.0]}]


def test_dump_samples(capsys):
    _, data = call_json(capsys, "verify-involution", "--curve", "x^2+y^2-1", "--base", "1,0",
                        "--samples", "6", "--dump-samples")
    assert len(data["result"]["sample_points"]) == 6


def test_usage_errors(capsys):
    assert call(capsys, "bogus")[0] == 2
    assert call(capsys)[0] == 2
    assert call(capsys, "complexify")[0] == 2
    assert call(capsys, "verify-involution", "--curve", "y", "--base", "1,2,3")[0] == 2
    assert call(capsys, "complexify", "--curve", "y", "--prec", "4")[0] == 2


def test_operation_errors(capsys):
    code, out, err = call(capsys, "complexify", "--curve", "x^2+")
    assert code == 1 and "parse_error" in err and "position 4" in err
    code, data = call_json(capsys, "blaschke-factor", "--map", "z+2")
    assert code == 1 and data["status"] == "error" and data["error"]["code"] == "bad_parameter"
    code, data = call_json(capsys, "realify", "--qform", "z*w-i*z")
    assert code == 1 and data["error"]["code"] == "symmetry_violation"


def test_failed_verification_exits_nonzero(capsys):
    code, data = call_json(capsys, "verify-identity", "--map", "z^2", "--source", "x^2+y^2-1",
                           "--target", "x^2+y^2-2*x", "--base", "0.8660254037844386,0.5", "--samples", "10")
    assert code == 1 and data["result"]["passed"] is False


def test_warnings_become_diagnostics(capsys):
    code, data = call_json(capsys, "complexify", "--curve", "(x^2+y^2-1)^2")
    assert code == 0 and data["diagnostics"]


def test_parse_complex():
    assert parse_complex("1/2,-3") == ExactComplex(0.5, -3)
    assert parse_complex("0.25") == ExactComplex(0.25)


def test_run_returns_command_result():
    res = run(["complexify", "--curve", "y"])
    assert res.status == "ok" and res.exit_code == 0 and res.payload["Q"] == "z - w"


def test_paper_suite(capsys):
    code, data = call_json(capsys, "paper-suite")
    rows = data["result"]["checks"]
    assert len(rows) >= 30
    assert code == (0 if all(r["passed"] for r in rows) else 1)
    code, out, _ = call(capsys, "paper-suite", "--only", "gcd(z^3-z, z^2-1)")
    assert code == 0 and out.startswith("PASS")
