"""End-to-end acceptance checks.

Each test records one PASS/FAIL line through the ``verdict`` fixture; the
lines are repeated in the terminal summary under "acceptance criteria".
"""

import itertools
import random
import time
from collections import Counter
from fractions import Fraction

import numpy as np
import pytest

from conftest import element_first
from oracles import archimedean_key, coordinate_chart, degree_order, face_sizes, hull_face_counts, rotation_matched
from zomekit import build_polytope, io
from zomekit.cli import main
from zomekit.coxeter import check_relations, coxeter_element, group_order, parse_diagram, simple_roots
from zomekit.export import export_svg
from zomekit.golden import PHI, ZERO, golden
from zomekit.projection import coxeter_plane_basis, project_to_plane
from zomekit.zome import (
    Ring,
    build_model,
    check_constructible,
    default_catalog,
    merge_skeleton,
    monochrome_paths,
    replay_offense,
)
from zomekit.zome.check import phi_power_residue
from zomekit.zome.catalog import axis_rotation, verify

ZOME_COLORS = {"blue", "yellow", "red"}

OMNI_PARTS = "Balls = 7200\nR2 = 2880\nR1 = 2880\nB2 = 3600\nY2 = 4800\n"


def test_omnitruncated_parts_list(tmp_path, verdict):
    t0 = time.perf_counter()
    assert main(["generate", "H4 all-active", "-o", str(tmp_path / "omni.json")]) == 0
    assert main(["project", str(tmp_path / "omni.json"), "--kind", "cell", "-o", str(tmp_path / "cf.json")]) == 0
    assert main(["zome", "parts", str(tmp_path / "cf.json"), "-o", str(tmp_path / "parts.txt")]) == 0
    elapsed = time.perf_counter() - t0

    projected = io.load(tmp_path / "cf.json")
    cell = projected.provenance["projection"]["face"]
    text = (tmp_path / "parts.txt").read_text()
    total = sum(int(line.split("=")[1]) for line in text.splitlines())
    ok = (
        text == OMNI_PARTS
        and total == 21360
        and projected.mode == "exact"
        and len(io.load(tmp_path / "omni.json").faces[3][cell]) == 120
        and elapsed <= 600
    )
    verdict("omnitruncated 120-cell parts list", ok, f"total {total}, {elapsed:.1f}s")
    assert text == OMNI_PARTS
    assert total == 21360
    assert elapsed <= 600


def test_constructibility_verdicts(cell120, cell600, cell120_vertex_first, verdict):
    checks = {}

    m = merge_skeleton(cell120_vertex_first)
    cert = check_constructible(m.balls, m.edges)
    checks["120-cell vertex-first not constructible"] = cert.verdict == "not" and bool(cert.offending)
    checks["offenses replay"] = all(replay_offense(o.vector, cert.reference) == o.reason for o in cert.offending)

    for name, poly in (("120-cell", cell120), ("600-cell", cell600)):
        try:
            model, _ = build_model(element_first(poly, 3))
            checks[f"{name} cell-first {{blue, yellow, red}}"] = model.colors == ZOME_COLORS
        except Exception as exc:  # NotConstructibleError carries the certificate
            n = len(getattr(exc, "certificate").offending) if hasattr(exc, "certificate") else "?"
            checks[f"{name} cell-first {{blue, yellow, red}}"] = False
            checks[f"{name} cell-first offending edges: {n}"] = False

    failed = [k for k, v in checks.items() if not v]
    verdict("constructibility verdicts", not failed, "; ".join(failed) or f"{len(cert.offending)} offending edges")
    assert not failed, failed


@pytest.mark.parametrize("spec, expected", [("H3 o o x", (12, 30, 20)), ("F4 x o o o", (24, 96, 96, 24))])
def test_f_vectors_match_hull_oracle(spec, expected, verdict):
    poly = build_polytope(spec)
    oracle = hull_face_counts(coordinate_chart(poly.vertices))
    ok = poly.f_vector == oracle == expected
    verdict(f"f-vector oracle {spec}", ok, f"{poly.f_vector} vs {oracle}")
    assert ok


EXACT_FAMILIES = ["A1", "A2", "A3", "A4", "B2", "B3", "B4", "D4", "F4", "H3", "H4", "I2(3)", "I2(4)", "I2(5)", "I2(6)"]


def _rep(family):
    n = 2 if family.startswith("I2") else int(family[1])
    return simple_roots(parse_diagram(family + " " + " ".join("x" * n))[0])


def test_group_orders_relations_euler(verdict, quiet):
    problems = []
    for family, order in (("H3", 120), ("H4", 14400), ("F4", 1152)):
        got = group_order(_rep(family))
        if not got == order == degree_order(family):
            problems.append(f"|{family}| = {got}")
    for family in EXACT_FAMILIES:
        rep = _rep(family)
        if rep.mode != "exact" or not check_relations(rep):
            problems.append(f"relations {family}")
    euler = 0
    for family in ("A4", "B4", "D4", "F4", "H4"):
        for bits in itertools.product("xo", repeat=4):
            if "x" in bits:
                poly = build_polytope(f"{family} {' '.join(bits)}")
                euler += 1
                if poly.euler_characteristic() != 0:
                    problems.append(f"euler {family} {bits}")
    verdict("group orders, relations, Euler sums", not problems, "; ".join(problems) or f"{euler} polytopes")
    assert not problems


@pytest.mark.parametrize("spec, h", [("F4 x o o o", 12), ("H4 x o o o", 30)])
def test_coxeter_plane_symmetry(spec, h, verdict):
    d, _ = parse_diagram(spec)
    plane = coxeter_plane_basis(coxeter_element(simple_roots(d)))
    points = np.asarray(project_to_plane(build_polytope(spec), plane).points)
    defect = rotation_matched(points, h)
    ok = plane.h == h and defect < 1e-6
    verdict(f"Coxeter-plane symmetry {spec}", ok, f"h={plane.h}, defect {defect:.1e}")
    assert ok


def test_wythoffian_coverage(verdict, quiet):
    keys = {}
    for family in ("A3", "B3", "H3"):
        for bits in itertools.product("xo", repeat=3):
            if "x" in bits:
                poly = build_polytope(f"{family} {' '.join(bits)}")
                keys.setdefault(archimedean_key(poly), poly)
    archimedean = [p for p in keys.values() if len(face_sizes(p)) > 1]
    platonic = [p for p in keys.values() if len(face_sizes(p)) == 1]
    ok = len(archimedean) == 11 and len(platonic) == 5
    verdict("Wythoffian coverage", ok, f"{len(archimedean)} Archimedean, {len(platonic)} Platonic, {len(keys)} distinct")
    assert len(archimedean) == 11
    assert len(platonic) == 5


def test_property_suites(cell120_cell_first, omni_model, verdict):
    problems = []
    rng = random.Random(7)

    # golden field axioms on random elements
    for _ in range(200):
        a, b, c = (
            golden(Fraction(rng.randint(-9, 9), rng.randint(1, 9))) + PHI * rng.randint(-9, 9) for _ in range(3)
        )
        if not ((a + b) * c == a * c + b * c and (a * b) * c == a * (b * c) and (a == 0 or a * a.inv() == 1)):
            problems.append("field axioms")
            break
    # phi-power residue uniqueness
    for k in range(-6, 7):
        q = Fraction(rng.randint(1, 9), rng.randint(1, 9))
        if phi_power_residue(golden(q) * PHI**k) != (k, q):
            problems.append(f"residue phi^{k}")
    # catalog
    try:
        verify(default_catalog())
    except Exception as exc:
        problems.append(f"catalog: {exc}")
    if default_catalog().counts() != {"blue": 15, "yellow": 10, "red": 6}:
        problems.append("catalog counts")
    # scale and rotation invariance of the verdict and strut assignment
    m = merge_skeleton(cell120_cell_first)
    base = check_constructible(m.balls, m.edges)
    sig = Counter((s.color, s.size) for s in base.model.struts)
    R = axis_rotation(default_catalog().by_color("yellow")[0].rep, 3)
    f = golden("3/2") * PHI**3
    for label, verts in (
        ("scale", [tuple(f * x for x in v) for v in m.balls]),
        ("rotation", [tuple(sum((R[i][j] * v[j] for j in range(3)), ZERO) for i in range(3)) for v in m.balls]),
    ):
        cert = check_constructible(verts, m.edges)
        if cert.verdict != base.verdict or Counter((s.color, s.size) for s in cert.model.struts) != sig:
            problems.append(f"{label} invariance")
    # collapse accounting
    _, report = omni_model
    if not (report.accounts() and report.dropped_edges + 2 * report.struts == report.edges):
        problems.append("collapse accounting")
    # determinism
    model = base.model
    if export_svg(model) != export_svg(model) or io.dumps(model) != io.dumps(model):
        problems.append("determinism")
    verdict("property suites", not problems, "; ".join(problems))
    assert not problems


# -- supplementary: the blue string paths of the omnitruncated model --------


def test_four_blue_string_paths_below_equator(omni_model, verdict):
    # closed blue cycles at constant height under the equator, taking the
    # red 5-fold axis as the vertical; four are expected as hanging paths
    model, _ = omni_model
    axis = default_catalog().by_color("red")[0].rep
    closed = [p for p in monochrome_paths(model, "blue", Ring(axis, below=True)) if p.closed]
    verdict("blue string paths: four closed cycles in the lower half", len(closed) == 4, f"found {len(closed)} closed decagons")
    assert len(closed) == 4
