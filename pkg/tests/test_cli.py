import json

import pytest

import main
from cli.session_io import (ConfigError, parse_config, parse_element_literal, read_session, parse_ring_expression,
                            config_text)
from cli import commands
from cli.commands import EXIT_OK, EXIT_FAILED, EXIT_USAGE, run, run_fixtures
from cli.reports import render
from utils.file_io import read_config_file
from utils.paths import get_fixtures_dir

Z9_HEAD = """\
[ring]
construct = zmod(9)

[ideal]
generators = 3

[matrix_ring]
n = 4
"""


def fixture_config(name):
    return parse_config(read_config_file(get_fixtures_dir() / f"{name}.cfg"))


@pytest.mark.parametrize("text, line", [
    ("[matrix_ring]\nn = 4\n", 1),
    ("[ring]\nconstruct = zmod(9)\n[bogus]\n", 3),
    ("[ring]\nconstruct = zmod(9)\n[matrix_ring]\nn = 1\n", 4),
    ("[ring]\nconstruct = zmod(9\n[matrix_ring]\nn = 3\n", 2),
    (Z9_HEAD + "[run]\ncommand = frobnicate\n", 10),
    (Z9_HEAD + "[table D]\ngen (5,1) 1 -> 0\n", 10),
    (Z9_HEAD + "[map f]\ndomain = L\n", 10),
])
def test_parse_errors_are_located(text, line):
    with pytest.raises(ConfigError) as error:
        parse_config(text)
    assert error.value.line == line
    assert str(error.value).startswith(f"line {line}")


def test_element_outside_pattern_is_located():
    text = Z9_HEAD + "[table D]\ngen (1,2) 1 -> 0\n"
    config = parse_config(text)
    with pytest.raises(ConfigError) as error:
        read_session(text)
    assert error.value.line == 10
    code, report = run(config, "verify")
    assert code == EXIT_USAGE
    assert report.error["type"] == "ConfigError"


def test_ring_expressions():
    assert parse_ring_expression("zmod(9)") == ("zmod", 9)
    assert parse_ring_expression("product(zmod(9), zmod(3))") == ("product", ("zmod", 9), ("zmod", 3))
    assert parse_ring_expression("table") == ("table",)
    assert parse_element_literal("(3, 0)") == (3, 0)
    assert parse_element_literal(" -2 ") == -2
    with pytest.raises(ConfigError):
        parse_ring_expression("zmod(9) zmod(3)")


def test_table_ring_session():
    text = """\
[ring]
construct = table
moduli = 9
unit = 1
mul(1,1) = 1

[ideal]
generators = 3

[matrix_ring]
n = 3
"""
    session = read_session(text)
    assert session.k.order == 9
    assert session.r.j.order == 3


@pytest.mark.parametrize("name, expected", [
    ("zmod9-extremal", EXIT_OK),
    ("zmod9-not-jordan", EXIT_FAILED),
    ("m2z3", EXIT_OK),
    ("z4-negative", EXIT_USAGE),
])
def test_fixture_exit_codes(name, expected):
    config = fixture_config(name)
    assert int(config.option("expect", 0)) == expected
    code, report = run(config)
    assert code == expected


def test_not_jordan_counterexample():
    code, report = run(fixture_config("zmod9-not-jordan"))
    assert report.verdict is False
    assert not report.details["jordan"]
    assert "counterexample" in report.details


def test_torsion_witness():
    code, report = run(fixture_config("z4-negative"))
    assert report.error["type"] == "TorsionError"
    assert report.error["witness"] == "2"


def test_build_round_trip():
    code, report = run(fixture_config("zmod9-extremal"))
    assert code == EXIT_OK
    assert report.details["derivation"] is False
    text = render(report, "text")
    assert text.startswith("# command: build")
    again = parse_config(text)
    assert again.command == "verify"
    code, verified = run(again)
    assert code == EXIT_OK
    assert verified.details["proper"] is True


def test_build_rejects_invalid_parameters():
    text = Z9_HEAD + """
[map pi]
domain = K
1 -> 1

[run]
command = build
family = ring
params = pi
"""
    code, report = run(parse_config(text))
    assert code == EXIT_FAILED
    assert report.details["violation"]["map"] == "pi"


def test_build_a3_rejects_a_table_that_is_not_jordan():
    text = Z9_HEAD.replace("n = 4", "n = 3") + """
[map z]
3 -> 0

[map one]
3 -> 3

[map two]
3 -> 6

[run]
command = build
family = a3
params = z, z, z, one, two, one, z, z
"""
    code, report = run(parse_config(text))
    assert code == EXIT_FAILED
    assert report.verdict is False
    assert report.details["violation"]["relation"] == "Jordan identity on the built table"


def test_unknown_family_is_a_usage_error(monkeypatch):
    text = Z9_HEAD + "\n[map alpha]\n3 -> 3\n\n[run]\ncommand = build\nfamily = extremal\nparams = alpha, alpha, alpha\n"
    monkeypatch.delitem(commands._FAMILIES, "extremal")
    code, report = run(parse_config(text))
    assert code == EXIT_USAGE
    assert report.error["type"] == "KeyError"


def test_unknown_map_is_a_usage_error():
    text = Z9_HEAD + "\n[map alpha]\n3 -> 3\n\n[run]\ncommand = build\nfamily = extremal\nparams = alpha, alpha, alpha\n"
    config = parse_config(text)
    del config.maps["alpha"]
    code, report = run(config)
    assert code == EXIT_USAGE
    assert report.error["type"] == "KeyError"


def test_ill_defined_map_is_a_usage_error():
    # 3 has order 3 in Z_9 but 1 has order 9
    text = Z9_HEAD + "\n[map alpha]\n3 -> 1\n\n[run]\ncommand = build\nfamily = extremal\nparams = alpha, alpha, alpha\n"
    code, report = run(parse_config(text))
    assert code == EXIT_USAGE
    assert report.error["type"] == "ConfigError"


def test_build_inner_and_diagonal():
    base = Z9_HEAD + "\n[run]\ncommand = build\n"
    code, report = run(parse_config(base + "family = diagonal\ndiagonal = 0, 1, 2, 3\n"))
    assert code == EXIT_OK
    assert report.details["derivation"] is True
    code, report = run(parse_config(base + "family = inner\nmatrix = 0, 0, 0, 0; 1, 0, 0, 0; 0, 0, 0, 0; 0, 0, 0, 0\n"))
    assert code == EXIT_OK
    assert report.details["derivation"] is True


def test_annihilator_command():
    code, report = run(fixture_config("zmod9-n4"), "annihilator")
    assert code == EXIT_OK
    assert report.orders == {"ann_r": 3, "formula": 3}


@pytest.mark.parametrize("path", sorted(get_fixtures_dir().glob("*.cfg")), ids=lambda p: p.stem)
def test_annihilator_formula_on_fixtures(path):
    code, report = run(parse_config(read_config_file(path)), "annihilator")
    assert code == EXIT_OK
    assert report.orders["ann_r"] == report.orders["formula"]


def test_solve_command():
    code, report = run(fixture_config("m2z3"))
    assert report.orders == {"jder": 27, "der": 27}


def test_solver_bounds_exit_usage():
    config = fixture_config("zmod9-n4")
    config.max_unknowns = 10
    code, report = run(config, "solve")
    assert code == EXIT_USAGE
    assert report.error["type"] == "BoundsExceeded"


def test_json_is_deterministic():
    config = fixture_config("zmod9-not-jordan")
    first = render(run(config)[1], "json")
    second = render(run(config)[1], "json")
    assert first == second
    data = json.loads(first)
    assert list(data) == ["command", "ring", "verdict", "orders", "stages", "details"]
    assert data["verdict"] is False


def test_config_text_reproduces_tables():
    session = read_session(read_config_file(get_fixtures_dir() / "zmod9-not-jordan.cfg"))
    text = config_text(session, session.tables)
    again = read_session(text)
    assert again.tables["D"] == session.tables["D"]


def test_main(tmp_path, monkeypatch, capsys):
    monkeypatch.setenv("HOME", str(tmp_path))
    path = tmp_path / "d.cfg"
    path.write_text(read_config_file(get_fixtures_dir() / "zmod9-not-jordan.cfg"))
    assert main.main(["verify", "-i", str(path), "-f", "json"]) == EXIT_FAILED
    assert json.loads(capsys.readouterr().out)["command"] == "verify"

    out = tmp_path / "report.txt"
    assert main.main(["verify", "-i", str(path), "-o", str(out)]) == EXIT_FAILED
    assert out.read_text().startswith("command: verify")

    assert main.main(["verify", "-i", str(tmp_path / "missing.cfg")]) == EXIT_USAGE
    assert "FileNotFoundError" in capsys.readouterr().out

    with pytest.raises(SystemExit):
        main.main(["verify"])


@pytest.mark.slow
def test_all_fixtures():
    code, report = run_fixtures()
    assert code == EXIT_OK, [s for s in report.stages if not s["ok"]]
