import math

import numpy as np
import pytest

from oracles import degree_order
from zomekit.coxeter import (
    DiagramError,
    NotFiniteTypeError,
    ReducibleDiagramError,
    check_relations,
    coxeter_element,
    family_matrix,
    group_order,
    load_diagram_file,
    parse_diagram,
    parse_rings,
    simple_roots,
)
from zomekit.golden import identity, mat_equal, matmul, PHI


def test_parse_family_and_rings():
    d, rings = parse_diagram("H3 x x o")
    assert d.family == "H3" and d.n == 3
    assert rings.active_nodes == [0, 1]
    assert str(rings) == "x x o"


def test_parse_all_active():
    d, rings = parse_diagram("H4 all-active")
    assert rings.active_nodes == [0, 1, 2, 3]


def test_parse_single_node():
    d, rings = parse_diagram("A1 x")
    assert d.n == 1 and rings.active_nodes == [0]


def test_parse_matrix_form():
    d, rings = parse_diagram("matrix:[[1,5],[5,1]] rings:xo")
    assert d.m[0][1] == 5 and rings.active_nodes == [0]


@pytest.mark.parametrize("text", ["E9 x x x x x x x x x", "Z9 x", "H3 x x", "H3 o o o", "A2 x y"])
def test_parse_errors(text):
    with pytest.raises(DiagramError):
        parse_diagram(text)


def test_affine_rejected():
    with pytest.raises(NotFiniteTypeError):
        parse_diagram("E9 x o o o o o o o o")
    with pytest.raises(NotFiniteTypeError):
        parse_diagram("matrix:[[1,3,3],[3,1,3],[3,3,1]] rings:xoo")


def test_reducible_has_no_coxeter_plane():
    d, _ = parse_diagram("matrix:[[1,2],[2,1]] rings:xx")
    with pytest.raises(ReducibleDiagramError):
        coxeter_element(simple_roots(d))


def test_family_matrix_h4():
    m = family_matrix("H", 4)
    assert m[0][1] == 5 and m[1][2] == 3 and m[2][3] == 3 and m[0][3] == 2


def test_parse_rings_length_mismatch():
    with pytest.raises(DiagramError):
        parse_rings("x o", 3)


def test_diagram_file(tmp_path):
    f = tmp_path / "d.txt"
    f.write_text("# two diagrams\nH3 o o x\n\nA2 x x\n")
    out = load_diagram_file(f)
    assert [str(r) for _, r in out] == ["o o x", "x x"]


def test_h4_roots_are_golden():
    rep = simple_roots(parse_diagram("H4 x o o o")[0])
    assert rep.mode == "exact"
    assert any(PHI in (x, -x) or (x - PHI) in (1, -1) for r in rep.roots for x in r)


@pytest.mark.parametrize(
    "family",
    ["A1", "A2", "A3", "A4", "B2", "B3", "B4", "D4", "F4", "H3", "H4", "I2(3)", "I2(4)", "I2(5)", "I2(6)", "E6"],
)
def test_relations_exact(family):
    n = int(family[1]) if not family.startswith("I2") else 2
    rep = simple_roots(parse_diagram(family + " " + " ".join("x" * n))[0])
    assert rep.mode == "exact"
    assert check_relations(rep)


@pytest.mark.parametrize("p", [7, 8, 10])
def test_relations_float_dihedral(p):
    rep = simple_roots(parse_diagram(f"I2({p}) x o")[0])
    assert rep.mode == "float"
    assert check_relations(rep, tol=1e-10)


def test_h3_rotation_order_five():
    rep = simple_roots(parse_diagram("H3 x o o")[0])
    R1, R2 = rep.reflections[:2]
    P = matmul(R1, R2)
    acc = identity(3)
    for k in range(1, 6):
        acc = matmul(acc, P)
        assert mat_equal(acc, identity(3)) == (k == 5)


@pytest.mark.parametrize("family", ["A2", "A3", "B3", "H3", "A4", "B4", "D4", "F4", "H4"])
def test_group_order_matches_degrees(family):
    n = int(family[1])
    rep = simple_roots(parse_diagram(family + " " + " ".join("x" * n))[0])
    assert group_order(rep) == degree_order(family)


@pytest.mark.parametrize("family, h", [("A2", 3), ("B3", 6), ("H3", 10), ("F4", 12), ("H4", 30)])
def test_coxeter_number(family, h):
    n = int(family[1])
    rep = simple_roots(parse_diagram(family + " " + " ".join("x" * n))[0])
    info = coxeter_element(rep)
    assert info.h == h
    # C^h = I exactly, and no smaller power is the identity
    M = np.asarray(info.float_matrix())
    assert np.allclose(np.linalg.matrix_power(M, h), np.eye(len(M)), atol=1e-9)
    assert all(not np.allclose(np.linalg.matrix_power(M, k), np.eye(len(M)), atol=1e-9) for k in range(1, h))


def test_coxeter_element_top_eigenvalue_h3():
    info = coxeter_element(simple_roots(parse_diagram("H3 x x x")[0]))
    ev = np.linalg.eigvals(np.asarray(info.float_matrix()))
    assert max(ev.real) == pytest.approx(math.cos(math.pi / 5), abs=1e-10)


def test_parabolic_coxeter_element():
    # the H3 parabolic inside H4 has h = 10
    rep = simple_roots(parse_diagram("H4 x o o o")[0])
    assert coxeter_element(rep, (0, 1, 2)).h == 10
