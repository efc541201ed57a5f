import json
import xml.etree.ElementTree as ET

import pytest

from zomekit import io
from zomekit.cli import FilterSyntaxError, main, parse_filter, parse_vector
from zomekit.golden import PHI, golden
from zomekit.zome import And, ColorSet, HalfSpace, LayerRange, Not, Ring, default_catalog


@pytest.fixture(scope="module")
def files(tmp_path_factory):
    d = tmp_path_factory.mktemp("cli")
    assert main(["generate", "H4 x o o o", "-o", str(d / "c120.json")]) == 0
    assert main(["project", str(d / "c120.json"), "--kind", "cell", "-o", str(d / "cell.json")]) == 0
    assert main(["project", str(d / "c120.json"), "--kind", "vertex", "-o", str(d / "vertex.json")]) == 0
    return d


def test_generate_hexagon(tmp_path, capsys):
    out = tmp_path / "hex.json"
    assert main(["generate", "A2 x x", "-o", str(out)]) == 0
    assert io.load(out).f_vector == (6, 6)
    assert "(6, 6)" in capsys.readouterr().out


def test_generate_to_stdout_is_pure_json(capsys):
    assert main(["generate", "A2 x x"]) == 0
    cap = capsys.readouterr()
    assert json.loads(cap.out)["schema"].startswith("zomekit.")
    assert "f-vector" in cap.err


def test_output_dir_env(tmp_path, monkeypatch):
    monkeypatch.setenv("ZOMEKIT_OUTPUT_DIR", str(tmp_path))
    assert main(["generate", "A2 x x", "-o", "sub/hex.json"]) == 0
    assert (tmp_path / "sub" / "hex.json").exists()


def test_parse_error_exit_code():
    assert main(["generate", "Z9 x"]) == 2


def test_bad_filter_exit_code(files):
    assert main(["zome", "filter", str(files / "cell.json"), "--filter", "wobble(3)"]) == 2


def test_io_error_exit_code(tmp_path):
    assert main(["project", str(tmp_path / "missing.json"), "--kind", "cell"]) == 5


def test_geometry_error_exit_code(tmp_path):
    src = tmp_path / "hex.json"
    main(["generate", "A2 x x", "-o", str(src)])
    assert main(["project", str(src), "--kind", "cell"]) == 3


def test_check_strict(files, capsys):
    assert main(["zome", "check", str(files / "cell.json"), "--strict"]) == 0
    assert "verdict: constructible" in capsys.readouterr().err
    assert main(["zome", "check", str(files / "vertex.json"), "--strict"]) == 1
    err = capsys.readouterr().err
    assert "verdict: not" in err
    assert "length^2" in err and "no-parallel-line" in err


def test_check_without_strict_is_ok(files):
    assert main(["zome", "check", str(files / "vertex.json")]) == 0


def test_parts_of_unconstructible_input(files):
    assert main(["zome", "parts", str(files / "vertex.json")]) == 4


def test_parts_output(files, capsys):
    assert main(["zome", "parts", str(files / "cell.json")]) == 0
    out = capsys.readouterr().out
    assert out.splitlines()[0] == "Balls = 330"


def test_layers_upto_one_is_core(files, tmp_path):
    svg = tmp_path / "core.svg"
    assert main(["zome", "layers", str(files / "cell.json"), "--upto", "1", "-o", str(svg)]) == 0
    lines = ET.parse(svg).getroot().findall("{http://www.w3.org/2000/svg}line")
    assert len(lines) == 30  # the central dodecahedron


def test_layers_diff(files, tmp_path):
    svg = tmp_path / "l2.svg"
    assert main(["zome", "layers", str(files / "cell.json"), "--upto", "2", "--diff", "-o", str(svg)]) == 0
    lines = ET.parse(svg).getroot().findall("{http://www.w3.org/2000/svg}line")
    assert sum(1 for ln in lines if ln.get("stroke-opacity")) == 30


def test_filter_to_json(files, tmp_path):
    out = tmp_path / "half.json"
    rc = main(["zome", "filter", str(files / "cell.json"), "--filter", "half(0,0,1) & !color(red)", "-o", str(out)])
    assert rc == 0
    part = io.load(out)
    assert part.balls and "red" not in part.colors


def test_paths_command(files, capsys):
    assert main(["zome", "paths", str(files / "cell.json"), "--filter", "ring(red0,below)"]) == 0
    assert "closed" in capsys.readouterr().err


def test_coxplane_svg(files, tmp_path):
    svg = tmp_path / "plane.svg"
    assert main(["project", str(files / "c120.json"), "--kind", "coxplane", "-o", str(svg)]) == 0
    assert svg.read_bytes().startswith(b"<")


def test_pipeline_is_deterministic(files, tmp_path):
    a, b = tmp_path / "a.svg", tmp_path / "b.svg"
    for p in (a, b):
        assert main(["zome", "filter", str(files / "cell.json"), "--filter", "layer(0..1)", "-o", str(p)]) == 0
    assert a.read_bytes() == b.read_bytes()


# -- grammar -------------------------------------------------------------------


def test_parse_vector_golden_entries():
    assert parse_vector("1, phi, 1/2-phi") == (golden(1), PHI, golden("1/2") - PHI)


def test_parse_vector_catalog_name():
    assert parse_vector("red0") == default_catalog().by_color("red")[0].rep


def test_filter_grammar():
    p = parse_filter("half(0,0,1) & !color(red)")
    assert isinstance(p, And)
    assert isinstance(p.preds[0], HalfSpace) and isinstance(p.preds[1], Not)
    assert isinstance(parse_filter("layer(2..3)"), LayerRange)
    assert isinstance(parse_filter("color(blue,yellow)"), ColorSet)
    assert isinstance(parse_filter("ring(red0,below)"), Ring)


@pytest.mark.parametrize("bad", ["", "half()", "layer(a..b)", "color(green)", "half(1,0,0) &"])
def test_filter_grammar_rejects(bad):
    with pytest.raises(FilterSyntaxError):
        parse_filter(bad)
