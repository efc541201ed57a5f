import math

import numpy as np
import pytest

from conftest import element_first
from oracles import rotation_matched
from zomekit import build_polytope
from zomekit.coxeter import coxeter_element, parse_diagram, simple_roots
from zomekit.golden import PHI, ZERO, dot, golden, norm2
from zomekit.projection import (
    PoleError,
    ZeroAxisError,
    choose_face,
    complete_basis,
    coxeter_plane_basis,
    element_first_axis,
    identity_basis,
    orthogonal_project,
    project_to_plane,
    rotation_defect,
    stereographic,
)
from zomekit.wythoff import ExactnessWarning


def _g(*xs):
    return tuple(golden(x) for x in xs)


def test_vertex_first_axis_is_the_vertex(cell120):
    assert element_first_axis(cell120, 0, 7) == tuple(cell120.vertices[7])


def test_edge_first_axis_is_the_midpoint(cell120):
    a, b = cell120.edges[3]
    mid = tuple((x + y) / 2 for x, y in zip(cell120.vertices[a], cell120.vertices[b]))
    assert element_first_axis(cell120, 1, 3) == mid


def test_cell_first_axis_is_the_centroid(cell120):
    ids = cell120.faces[3][5]
    c = tuple(sum((cell120.vertices[i][k] for i in ids), ZERO) / len(ids) for k in range(4))
    assert element_first_axis(cell120, 3, 5) == c


def test_complete_basis_standard_axis():
    b = complete_basis(_g(0, 0, 0, 1))
    assert b.mode == "exact"
    assert b.rows == [_g(1, 0, 0, 0), _g(0, 1, 0, 0), _g(0, 0, 1, 0)]


@pytest.mark.parametrize("axis", [(1, 1, 1, 1), (1, 1, 1, PHI), (1, PHI, 0, 0)])
def test_complete_basis_exact_equal_norms(axis):
    axis = _g(*axis)
    b = complete_basis(axis)
    assert b.mode == "exact" and b.warning is None
    assert len(b.rows) == 3
    for r in b.rows:
        assert dot(r, axis) == ZERO
        assert norm2(r) == b.norm2
    for i in range(3):
        for j in range(i):
            assert dot(b.rows[i], b.rows[j]) == ZERO


def test_complete_basis_rational_for_all_ones():
    b = complete_basis(_g(1, 1, 1, 1))
    assert all(x.is_rational() for r in b.rows for x in r)


def test_complete_basis_float_fallback():
    with pytest.warns(ExactnessWarning):
        b = complete_basis(_g(1, 2, 3, 5))
    assert b.mode == "float" and b.warning
    R = b.float_rows()
    assert np.allclose(R @ R.T, np.eye(3), atol=1e-12)
    assert np.allclose(R @ np.array([1, 2, 3, 5.0]), 0, atol=1e-12)


def test_zero_axis():
    with pytest.raises(ZeroAxisError):
        complete_basis(_g(0, 0, 0))


def test_identity_projection_is_identity(cell120):
    out = orthogonal_project(cell120, identity_basis(4))
    assert out.vertices == cell120.vertices
    assert out.faces == cell120.faces


def test_24_cell_first_three_coordinates():
    poly = build_polytope("F4 x o o o")
    basis = complete_basis(_g(0, 0, 0, 1))
    out = orthogonal_project(poly, basis)
    assert out.dim == 3 and out.mode == "exact"
    assert all(x.is_rational() for v in out.vertices for x in v)
    assert out.edges == poly.edges
    assert all(out.vertices[i] == tuple(poly.vertices[i][:3]) for i in range(len(poly.vertices)))


def test_120_cell_cell_first_is_exact(cell120_cell_first):
    assert cell120_cell_first.dim == 3
    assert cell120_cell_first.mode == "exact"
    assert cell120_cell_first.rank == 4


def test_choose_face_is_deterministic(cell120):
    assert choose_face(cell120, 3) == choose_face(cell120, 3)


def test_projection_records_basis(cell120_cell_first):
    info = cell120_cell_first.provenance["projection"]
    assert golden(info["scale2"]) > 0
    assert cell120_cell_first.provenance["diagram"] == "H4"


# -- stereographic -----------------------------------------------------------


def test_stereographic_equator_is_fixed():
    poly = build_polytope("F4 x o o o")  # 24-cell: no vertex on the last axis
    out = stereographic(poly, "north")
    X, Y = poly.float_vertices(), out.float_vertices()
    eq = np.abs(X[:, -1]) < 1e-12
    assert eq.sum() == 12
    assert np.allclose(np.linalg.norm(Y[eq], axis=1), np.linalg.norm(X[eq], axis=1), atol=1e-12)
    assert out.dim == 3 and out.mode == "float"


def test_stereographic_south_point_goes_to_origin():
    from zomekit.wythoff import Polytope

    c = math.sqrt(3) / 2
    tri = Polytope(2, 2, "float", np.array([[0.0, -1.0], [c, 0.5], [-c, 0.5]]), {1: [(0, 1), (0, 2), (1, 2)]})
    out = stereographic(tri, "north")
    Y = out.float_vertices()
    assert np.allclose(Y[0], 0, atol=1e-12)
    # (c, 1/2) sits at height 1/2: radius grows by R / (R - h) = 2
    assert abs(abs(Y[1, 0]) - 2 * c) < 1e-12


def test_stereographic_pole_on_vertex():
    poly = build_polytope("B4 x o o o")
    with pytest.raises(PoleError):
        stereographic(poly, 0)


def test_stereographic_counts_preserved():
    poly = build_polytope("B4 x x o o")  # truncated 16-cell
    out = stereographic(poly, "north", arc_samples=6)
    assert len(out.vertices) == len(poly.vertices) == 48
    assert len(out.edges) == len(poly.edges) == 120
    assert len(out.edge_paths) == 120
    assert all(len(p) == 7 for p in out.edge_paths)


# -- Coxeter planes ----------------------------------------------------------


def _plane(spec, nodes=None):
    d, _ = parse_diagram(spec)
    info = coxeter_element(simple_roots(d), nodes)
    return info, coxeter_plane_basis(info)


def test_dihedral_plane_is_whole_plane():
    info, plane = _plane("I2(7) x x")
    B = np.asarray(plane.basis)
    assert B.shape == (2, 2)
    assert abs(abs(np.linalg.det(B)) - 1) < 1e-12


@pytest.mark.parametrize("spec, h", [("H3 x x x", 10), ("H4 x x x x", 30), ("F4 x x x x", 12)])
def test_coxeter_plane_eigenvalue(spec, h):
    info, plane = _plane(spec)
    assert plane.h == h
    assert plane.eigenvalue == pytest.approx(math.cos(2 * math.pi / h), abs=1e-10)
    B = np.asarray(plane.basis)
    assert np.allclose(B @ B.T, np.eye(2), atol=1e-10)


def test_coxeter_plane_h3_is_phi_over_two():
    _, plane = _plane("H3 x x x")
    assert plane.eigenvalue == pytest.approx(float(PHI) / 2, abs=1e-10)


def test_120_cell_h4_plane_symmetry(cell120):
    _, plane = _plane("H4 x o o o")
    img = project_to_plane(cell120, plane)
    P = np.asarray(img.points)
    assert rotation_defect(P, 30) < 1e-6
    assert rotation_matched(P, 30) < 1e-6
    assert rotation_defect(P, 7) > 1e-3


def test_120_cell_h3_plane_symmetry(cell120):
    _, plane = _plane("H4 x o o o", (0, 1, 2))
    img = project_to_plane(cell120, plane)
    assert rotation_defect(np.asarray(img.points), 10) < 1e-6


def test_square_on_its_own_plane():
    poly = build_polytope("B2 x o")
    _, plane = _plane("B2 x o")
    img = project_to_plane(poly, plane)
    P = np.asarray(img.points)
    assert len(P) == 4 and len(img.edges) == 4
    d = sorted(np.linalg.norm(P[a] - P[b]) for a, b in img.edges)
    assert d[-1] - d[0] < 1e-12
    assert rotation_defect(P, 4) < 1e-12


def test_omnitruncated_element_first_views(omni120, quiet):
    cell = element_first(omni120, 3, 0)
    assert cell.mode == "exact"
    vertex = element_first(omni120, 0)
    assert vertex.dim == 3
