import xml.etree.ElementTree as ET

import pytest

from lipgerm import cli
from lipgerm.germ import write_germ
from tests.conftest import counterexample_pair

SQUARE = """\
lipgerm v1
component closed
x = t; y = t
x = -t; y = t
x = -t; y = -t
x = t; y = -t
"""

PINCH = """\
lipgerm v1
component open
x = t; y = t^2
x = 0; y = 0
x = t; y = -t^2
"""

BAD = """\
lipgerm v1
component open
x = t^1/2; y = 0
x = t; y = t
"""


@pytest.fixture
def square_file(tmp_path):
    p = tmp_path / "square.germ"
    p.write_text(SQUARE)
    return str(p)


def test_validate_ok(square_file, capsys):
    assert cli.main(["validate", square_file]) == cli.EXIT_OK
    out = capsys.readouterr().out
    assert "1 component(s), 4 vertex arc(s)" in out


def test_validate_bad_germ(tmp_path, capsys):
    p = tmp_path / "bad.germ"
    p.write_text(BAD)
    assert cli.main(["validate", str(p)]) == cli.EXIT_INVALID
    assert "invalid germ" in capsys.readouterr().err


def test_missing_file(capsys):
    assert cli.main(["validate", "/no/such/file.germ"]) == cli.EXIT_INVALID


def test_classify_square(square_file, capsys):
    assert cli.main(["classify", square_file]) == cli.EXIT_OK
    assert capsys.readouterr().out.strip() == "Horn beta=1 (cone)"


def test_classify_pinch_not_lne(tmp_path, capsys):
    p = tmp_path / "pinch.germ"
    p.write_text(PINCH)
    assert cli.main(["classify", str(p)]) == cli.EXIT_NOT_LNE
    assert "not LNE" in capsys.readouterr().err


def test_cert_failure_exit_code(square_file, monkeypatch, capsys):
    def boom(g, **kw):
        raise cli.ClearanceFailed("synthetic")

    monkeypatch.setattr(cli, "classify_connected", boom)
    assert cli.main(["classify", square_file]) == cli.EXIT_CERT_FAILURE
    assert "certificate failure" in capsys.readouterr().err


def test_invariants_json(square_file, capsys):
    assert cli.main(["invariants", square_file, "--json"]) == cli.EXIT_OK
    import json

    report = json.loads(capsys.readouterr().out)
    assert report["lne"] == "LNE"
    assert report["components"][0]["edge_exponents"] == ["1", "1", "1", "1"]


def test_reduce_writes_trace(square_file, tmp_path, capsys):
    out = tmp_path / "trace.txt"
    assert cli.main(["reduce", square_file, "-o", str(out)]) == cli.EXIT_OK
    text = out.read_text()
    assert "Horn" in text


def test_compare_counterexample(tmp_path, capsys):
    X1, X2 = counterexample_pair()
    p1 = tmp_path / "x1.germ"
    p2 = tmp_path / "x2.germ"
    p1.write_text(write_germ(X1))
    p2.write_text(write_germ(X2))
    assert cli.main(["compare", str(p1), str(p2)]) == cli.EXIT_OK
    out = capsys.readouterr().out
    assert "Inequivalent" in out
    assert "slit-bearing face area exponent differs" in out


def test_tree_output(square_file, capsys):
    assert cli.main(["tree", square_file]) == cli.EXIT_OK
    out = capsys.readouterr().out
    assert "vertex 0" in out and "canonical:" in out


def test_render_svg_and_table(square_file, tmp_path, capsys):
    assert cli.main(["render", square_file, "--svg", str(tmp_path)]) == cli.EXIT_OK
    out = capsys.readouterr().out
    svgs = list(tmp_path.glob("*.svg"))
    tsvs = list(tmp_path.glob("*.tsv"))
    assert len(svgs) == 1 and len(tsvs) == 1
    root = ET.parse(svgs[0]).getroot()
    assert root.tag == "{http://www.w3.org/2000/svg}svg"
    assert root.get("version") == "1.1"
    header = tsvs[0].read_text().splitlines()[0]
    assert header.split("\t") == ["component", "closed", "vertex", "x", "y"]
    assert str(svgs[0]) in out


def test_verify_map_translate(square_file, capsys):
    rc = cli.main(
        ["verify-map", square_file, "--map", "translate", "--grid-depth", "4"]
    )
    assert rc == cli.EXIT_OK
    out = capsys.readouterr().out
    assert "verdict: Bounded" in out


def test_fuzz_deterministic_stdout(capsys):
    argv = ["fuzz", "--closed", "2", "--open", "2", "--pinch", "1", "--seed", "7"]
    assert cli.main(argv) == cli.EXIT_OK
    first = capsys.readouterr().out
    assert cli.main(argv) == cli.EXIT_OK
    second = capsys.readouterr().out
    assert first == second
    assert first.splitlines()[0] == "kind\ttag\texpected\tresult"
