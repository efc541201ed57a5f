import json
import re
import xml.etree.ElementTree as ET
from pathlib import Path

import numpy as np
import pytest

from zomekit import build_polytope, io
from zomekit.export import RenderStyle, export_obj, export_svg
from zomekit.golden import ZERO, golden
from zomekit.projection import PlanarImage, stereographic
from zomekit.zome import Strut, ZomeModel, check_constructible, model_diff, filter_model, LayerRange

SVG = "{http://www.w3.org/2000/svg}"


def _lines(svg: bytes):
    return ET.fromstring(svg).findall(f"{SVG}line")


def test_polytope_round_trip():
    poly = build_polytope("H3 o o x")
    back = io.from_dict(json.loads(io.dumps(poly)))
    assert back.vertices == poly.vertices
    assert back.faces == poly.faces
    assert back.provenance == poly.provenance
    assert io.dumps(back) == io.dumps(poly)


def test_float_polytope_round_trip(quiet):
    poly = build_polytope("B3 x x x")
    back = io.polytope_from_dict(io.polytope_to_dict(poly))
    assert np.array_equal(back.float_vertices(), poly.float_vertices())


def test_stereographic_paths_round_trip():
    poly = stereographic(build_polytope("B4 x x o o"), "north", arc_samples=3)
    back = io.from_dict(json.loads(io.dumps(poly)))
    assert len(back.edge_paths) == len(poly.edge_paths)
    assert np.allclose(back.edge_paths[5], poly.edge_paths[5])


def test_model_round_trip(cell120_model):
    model, _ = cell120_model
    back = io.model_from_dict(json.loads(io.dumps(model)))
    assert back.balls == model.balls
    assert back.struts == model.struts
    assert [c.balls for c in back.cells] == [c.balls for c in model.cells]
    assert back.adjacency == model.adjacency
    assert io.dumps(back) == io.dumps(model)


def test_certificate_round_trip():
    cert = check_constructible([(ZERO, ZERO, ZERO), tuple(golden(x) for x in (1, 1, 0))], [(0, 1)])
    back = io.from_dict(json.loads(io.dumps(cert)))
    assert back.verdict == "not"
    assert back.offending == cert.offending
    assert all(back.replay())


def test_save_and_load(tmp_path):
    poly = build_polytope("A2 x x")
    path = tmp_path / "hexagon.json"
    io.save(poly, path)
    assert io.load(path).f_vector == (6, 6)


def test_schema_checked():
    with pytest.raises(io.SchemaError):
        io.from_dict({"schema": "something/9"})
    with pytest.raises(io.SchemaError):
        io.model_from_dict(io.polytope_to_dict(build_polytope("A1 x")))


def test_every_document_has_a_schema(cell120_model):
    for obj in (build_polytope("A1 x"), cell120_model[0]):
        assert json.loads(io.dumps(obj))["schema"].startswith("zomekit.")


# -- SVG ---------------------------------------------------------------------


def test_empty_model_svg():
    svg = export_svg(ZomeModel([], []))
    root = ET.fromstring(svg)
    assert root.tag == f"{SVG}svg"
    assert not list(root)


def test_one_blue_strut_is_dashed():
    m = ZomeModel([(ZERO, ZERO, ZERO), (golden(2), ZERO, ZERO)], [Strut(0, 1, "blue", 0, 1)])
    (line,) = _lines(export_svg(m))
    assert line.get("stroke-dasharray")
    assert line.get("stroke") == RenderStyle().strokes["blue"].color


def test_legend_styles():
    st = RenderStyle()
    assert st.strokes["blue"].dash  # dashed
    assert st.strokes["yellow"].dash is None  # solid
    red = st.strokes["red"].dash.split()
    assert len(red) == 4 and red[0] != red[2]  # dash, gap, dot, gap


def test_background_struts_are_dotted(cell120_model):
    from zomekit.zome import layer_decomposition
    import copy

    model = copy.deepcopy(cell120_model[0])
    layer_decomposition(model)
    tagged = model_diff(filter_model(model, LayerRange(0, 1)), filter_model(model, LayerRange(0, 0)))
    lines = _lines(export_svg(tagged))
    bg = [ln for ln in lines if ln.get("stroke-opacity")]
    assert len(bg) == sum(s.tag == "background" for s in tagged.struts)
    assert {ln.get("stroke-dasharray") for ln in bg} == {RenderStyle().background_dash}


def test_svg_deterministic(cell120_model):
    a = export_svg(cell120_model[0])
    b = export_svg(cell120_model[0])
    assert a == b
    assert len(_lines(a)) == len(cell120_model[0].struts)


def test_planar_image_svg():
    img = PlanarImage(np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]]), [(0, 1), (1, 2), (0, 2)], 3)
    assert len(_lines(export_svg(img))) == 3


def test_svg_refuses_4d(cell120):
    with pytest.raises(ValueError):
        export_svg(cell120)


def test_stereographic_svg_uses_polylines():
    poly = stereographic(build_polytope("B4 x x o o"), "north", arc_samples=4)
    root = ET.fromstring(export_svg(poly))
    assert len(root.findall(f"{SVG}polyline")) == 120


# -- OBJ ---------------------------------------------------------------------


def test_obj_export(cell120_model):
    model = cell120_model[0]
    text = export_obj(model).decode()
    assert len(re.findall(r"^v ", text, re.M)) == len(model.balls)
    assert len(re.findall(r"^l ", text, re.M)) == len(model.struts)
    first = re.search(r"^l (\d+) (\d+)", text, re.M)
    assert int(first.group(1)) >= 1
    assert export_obj(model) == export_obj(model)


def test_obj_of_polytope():
    text = export_obj(build_polytope("H3 o o x")).decode()
    assert text.count("\nv ") == 12 and text.count("\nl ") == 30


def test_frozen_cell120_svg(cell120_model):
    # regenerate with export_svg(build_model(cell-first 120-cell)) after a deliberate style change
    frozen = (Path(__file__).parent / "data" / "cell120_cell_first.svg").read_bytes()
    assert export_svg(cell120_model[0]) == frozen
