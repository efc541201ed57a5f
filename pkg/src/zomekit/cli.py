"""Command-line front end: ``zomekit generate | project | zome ...``.

Exit codes: 0 success, 2 parse errors (bad diagram, filter or arguments),
3 geometry errors (degenerate axis, pole on a vertex, wrong dimension),
4 constructibility input errors (float or empty skeleton, model not
buildable where a model is required), 5 I/O errors.

Relative output paths are resolved against ``$ZOMEKIT_OUTPUT_DIR`` when it
is set.

Filter expressions (``--filter``) are atoms joined by ``&``, each
optionally negated with ``!``::

    half(0,0,1)        <(0,0,1), p> >= 0      half(0,0,-1;2)  with offset 2
    orthant(++*)       sign per axis, * = any
    layer(0..2)        layer(3)   layer(2..)
    color(blue,red)
    ring(red0) ring(red0,below) meridian(blue2)
    true

Vectors are comma-separated golden numbers (``1+phi``, ``-1/2*phi``) or a
catalog line name such as ``red0``, ``blue3`` or ``yellow1``.
"""

from __future__ import annotations

import argparse
import itertools
import json
import os
import re
import sys
import warnings
from collections import Counter
from pathlib import Path

import numpy as np

from . import io
from .coxeter import (
    Diagram,
    DiagramError,
    OrbitCapError,
    coxeter_element,
    family_matrix,
    parse_diagram,
    simple_roots,
)
from .export import RenderStyle, export_obj, export_svg
from .golden import golden, norm2
from .projection import (
    ProjectionBasis,
    ProjectionError,
    choose_face,
    complete_basis,
    coxeter_plane_basis,
    element_first_axis,
    orthogonal_project,
    project_to_plane,
    span_rows,
    stereographic,
)
from .wythoff import DEFAULT_VERTEX_CAP, ExactnessWarning, Polytope, RankError, build_polytope
from .zome.build import NotConstructibleError, build_model
from .zome.catalog import default_catalog
from .zome.check import SkeletonError, check_constructible
from .zome.model import ZomeModel, parts_list
from .zome.ops import (
    TRUE,
    And,
    ColorSet,
    HalfSpace,
    LayerRange,
    Meridian,
    Not,
    Orthant,
    Predicate,
    Ring,
    filter_model,
    layer_decomposition,
    model_diff,
    monochrome_paths,
)

EXIT_OK, EXIT_PARSE, EXIT_GEOMETRY, EXIT_ZOME_INPUT, EXIT_IO = 0, 2, 3, 4, 5
OUTPUT_DIR_ENV = "ZOMEKIT_OUTPUT_DIR"

KIND_RANK = {"vertex": 0, "edge": 1, "face": 2, "cell": 3}


class FilterSyntaxError(ValueError):
    pass


class _Exit(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


# -- helpers -----------------------------------------------------------------


def _out_path(path: str | None) -> Path | None:
    if path is None or path == "-":
        return None
    p = Path(path)
    base = os.environ.get(OUTPUT_DIR_ENV)
    if base and not p.is_absolute():
        p = Path(base) / p
    return p


def _emit(data: bytes | str, path: str | None) -> None:
    if isinstance(data, str):
        data = data.encode()
    p = _out_path(path)
    if p is None:
        sys.stdout.buffer.write(data)
        sys.stdout.flush()
        return
    p.parent.mkdir(parents=True, exist_ok=True)
    p.write_bytes(data)


def _info(msg: str, args) -> None:
    # keep stdout clean when a document is written there
    stream = sys.stderr if getattr(args, "output", None) in (None, "-") else sys.stdout
    print(msg, file=stream)


def _load(path: str):
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise _Exit(EXIT_IO, f"cannot read {path}: {exc.strerror or exc}") from None
    except json.JSONDecodeError as exc:
        raise _Exit(EXIT_IO, f"{path} is not JSON: {exc}") from None
    try:
        return io.from_dict(doc)
    except io.SchemaError as exc:
        raise _Exit(EXIT_IO, f"{path}: {exc}") from None


def parse_vector(text: str):
    text = text.strip()
    m = re.fullmatch(r"(blue|yellow|red)(\d+)", text)
    if m:
        lines = default_catalog().by_color(m.group(1))
        k = int(m.group(2))
        if k >= len(lines):
            raise FilterSyntaxError(f"{m.group(1)} has only {len(lines)} lines")
        return lines[k].rep
    try:
        return tuple(golden(x.strip()) for x in text.split(","))
    except (ValueError, ZeroDivisionError) as exc:
        raise FilterSyntaxError(f"bad vector {text!r}: {exc}") from None


def parse_filter(expr: str) -> Predicate:
    """Parse the small filter language described in the module docstring."""
    parts = [p.strip() for p in expr.split("&")]
    if not parts or any(not p for p in parts):
        raise FilterSyntaxError(f"empty term in {expr!r}")
    preds = [_parse_term(p) for p in parts]
    return preds[0] if len(preds) == 1 else And(*preds)


def _parse_term(term: str) -> Predicate:
    if term.startswith("!"):
        return Not(_parse_term(term[1:].strip()))
    if term == "true":
        return TRUE
    m = re.fullmatch(r"(\w+)\((.*)\)", term)
    if not m:
        raise FilterSyntaxError(f"cannot parse filter term {term!r}")
    name, arg = m.group(1), m.group(2).strip()
    if name == "half":
        vec, _, off = arg.partition(";")
        return HalfSpace(parse_vector(vec), golden(off.strip()) if off.strip() else 0)
    if name == "orthant":
        try:
            return Orthant(arg)
        except ValueError as exc:
            raise FilterSyntaxError(str(exc)) from None
    if name == "layer":
        lm = re.fullmatch(r"(\d+)?(\.\.)?(\d+)?", arg)
        if not lm or (lm.group(1) is None and lm.group(3) is None):
            raise FilterSyntaxError(f"bad layer range {arg!r}")
        lo = int(lm.group(1)) if lm.group(1) else 0
        if lm.group(2):
            hi = int(lm.group(3)) if lm.group(3) else None
        else:
            hi = lo
        return LayerRange(lo, hi)
    if name == "color":
        colors = [c.strip() for c in arg.split(",")]
        bad = [c for c in colors if c not in ("blue", "yellow", "red")]
        if bad:
            raise FilterSyntaxError(f"unknown color {bad[0]!r}")
        return ColorSet(colors)
    if name == "ring":
        vec, _, side = arg.rpartition(",") if arg.endswith(("below", "above")) else (arg, "", "")
        return Ring(parse_vector(vec), below=side == "below", above=side == "above")
    if name == "meridian":
        return Meridian(parse_vector(arg))
    raise FilterSyntaxError(f"unknown filter {name!r}")


def _plane_nodes(diagram: Diagram, plane: str) -> tuple[int, ...] | None:
    """Node subset for ``--plane``: ambient, ``nodes:0,1,2`` or a family like H3."""
    if plane in ("ambient", "", None):
        return None
    if plane.startswith("nodes:"):
        return tuple(int(x) for x in plane[6:].split(","))
    m = re.fullmatch(r"([A-Z])(\d+)(?:\((\d+)\))?", plane)
    if not m:
        raise DiagramError(f"bad --plane {plane!r}")
    fam, n = m.group(1), int(m.group(2))
    target = family_matrix(fam, n, int(m.group(3)) if m.group(3) else None)
    for nodes in itertools.combinations(range(diagram.n), n):
        sub = [[diagram.m[i][j] for j in nodes] for i in nodes]
        for perm in itertools.permutations(range(n)):
            if all(sub[perm[i]][perm[j]] == target[i][j] for i in range(n) for j in range(n)):
                return tuple(nodes[p] for p in perm)
    raise DiagramError(f"{diagram} has no {plane} subdiagram")


def _diagram_of(poly: Polytope):
    prov = poly.provenance
    d, rings = prov.get("diagram"), prov.get("rings")
    if not d or not rings:
        raise _Exit(EXIT_GEOMETRY, "polytope has no diagram provenance; Coxeter planes need the generating diagram")
    spec = f"{d} rings:{rings}" if d.startswith("matrix:") else f"{d} {rings}"
    return parse_diagram(spec)


def _to_model(obj, args) -> ZomeModel:
    if isinstance(obj, ZomeModel):
        return obj
    if isinstance(obj, Polytope):
        model, report = build_model(obj, align=not args.no_align, size_offset=args.size_offset)
        _info(
            f"collapse: {report.vertices} vertices -> {report.balls} balls; {report.edges} edges -> "
            f"{report.struts} struts ({report.dropped_edges} dropped, {report.merged_struts} merged)",
            args,
        )
        return model
    raise _Exit(EXIT_ZOME_INPUT, "expected a projected polytope or a Zome model")


def _write_model_output(model: ZomeModel, args) -> None:
    out = args.output
    if out and out != "-" and out.endswith(".obj"):
        _emit(export_obj(model), out)
    elif out and out != "-" and out.endswith(".json"):
        _emit(io.dumps(model), out)
    else:
        _emit(export_svg(model, _style(args)), out)


def _style(args) -> RenderStyle:
    st = RenderStyle()
    tilt = getattr(args, "tilt", None)
    if tilt:
        st.tilt = tuple(float(x) for x in tilt.split(","))
    return st


# -- commands ----------------------------------------------------------------


def cmd_generate(args) -> int:
    poly = build_polytope(args.spec, cap=args.cap)
    _info(f"f-vector: {tuple(poly.f_vector)}", args)
    _info(f"mode: {poly.mode}", args)
    _emit(io.dumps(poly), args.output)
    return EXIT_OK


def cmd_project(args) -> int:
    poly = _load(args.input)
    if not isinstance(poly, Polytope):
        raise _Exit(EXIT_GEOMETRY, "project needs a polytope document")
    kind = args.kind
    if kind in KIND_RANK:
        rank = KIND_RANK[kind]
        if rank >= poly.rank:
            raise _Exit(EXIT_GEOMETRY, f"{kind}-first needs rank > {rank}")
        fid = args.index if args.index is not None else choose_face(poly, rank)
        axis = element_first_axis(poly, rank, fid)
        basis = complete_basis(axis, span_rows(poly))
        out = orthogonal_project(poly, basis, {"kind": f"{kind}-first", "face": fid})
    elif kind == "basis":
        if args.axis:
            basis = complete_basis(parse_vector(args.axis), span_rows(poly))
        elif args.basis:
            rows = [parse_vector(r) for r in args.basis.split(";")]
            basis = ProjectionBasis(rows, "exact", None)
        else:
            raise _Exit(EXIT_PARSE, "--kind basis needs --axis or --basis")
        out = orthogonal_project(poly, basis, {"kind": "basis"})
    elif kind == "stereo":
        pole = args.pole
        if pole.startswith("vertex:"):
            pole = int(pole[7:])
        elif pole not in ("north", "south"):
            pole = parse_vector(pole)
        out = stereographic(poly, pole, arc_samples=args.arc_samples)
    elif kind == "coxplane":
        d, _rings = _diagram_of(poly)
        rep = simple_roots(d)
        info = coxeter_element(rep, _plane_nodes(d, args.plane))
        plane = coxeter_plane_basis(info)
        img = project_to_plane(poly, plane)
        _info(f"Coxeter number h = {info.h}", args)
        _emit(export_svg(img, _style(args)), args.output)
        return EXIT_OK
    else:  # pragma: no cover - argparse restricts choices
        raise _Exit(EXIT_PARSE, f"unknown kind {kind}")
    _info(f"projected to {out.dim}D ({out.mode})", args)
    if args.output and args.output.endswith(".svg"):
        _emit(export_svg(out, _style(args)), args.output)
    elif args.output and args.output.endswith(".obj"):
        _emit(export_obj(out), args.output)
    else:
        _emit(io.dumps(out), args.output)
    return EXIT_OK


def cmd_zome(args) -> int:
    obj = _load(args.input)
    sub = args.zcmd
    if sub == "check":
        if isinstance(obj, Polytope):
            try:
                model, _ = build_model(obj, align=not args.no_align, size_offset=args.size_offset)
                cert = check_constructible(model.balls, [(s.a, s.b) for s in model.struts], size_offset=args.size_offset)
                cert.model = model
                cert.transform = None
            except NotConstructibleError as exc:
                cert = exc.certificate
        elif isinstance(obj, ZomeModel):
            cert = check_constructible(obj.balls, [(s.a, s.b) for s in obj.struts], size_offset=args.size_offset)
        else:
            raise _Exit(EXIT_ZOME_INPUT, "check needs a projected polytope or a Zome model")
        _info(f"verdict: {cert.verdict}", args)
        if cert.constructible:
            _info("colors: " + ", ".join(sorted(cert.model.colors)), args)
        else:
            reasons = Counter(o.reason for o in cert.offending)
            _info(f"offending edges: {len(cert.offending)} (" + ", ".join(f"{k}: {v}" for k, v in sorted(reasons.items())) + ")", args)
            seen = set()
            for o in cert.offending:
                key = (tuple(str(x) for x in o.vector), o.reason)
                if key in seen:
                    continue
                seen.add(key)
                if len(seen) > args.show:
                    break
                _info(f"  edge {o.edge}: ({', '.join(key[0])}) length^2 {norm2(o.vector)} {o.reason}", args)
        for w in cert.warnings:
            _info(f"warning: {w}", args)
        if args.output:
            _emit(io.dumps(cert), args.output)
        return 1 if (args.strict and not cert.constructible) else EXIT_OK
    model = _to_model(obj, args)
    if sub == "parts":
        _emit(parts_list(model).render(), args.output)
        return EXIT_OK
    if sub == "layers":
        layers = layer_decomposition(model)
        hist = Counter(layers)
        _info("layers: " + ", ".join(f"{k}:{hist[k]}" for k in sorted(hist, key=lambda x: (x is None, x))), args)
        # --upto N keeps the first N layers (the core is layer 0)
        last = args.upto - 1 if args.upto is not None else max((x for x in layers if x is not None), default=0)
        if last < args.start:
            raise _Exit(EXIT_PARSE, "--upto must exceed --from")
        part = filter_model(model, LayerRange(args.start, last))
        if args.diff:
            part = model_diff(part, filter_model(model, LayerRange(args.start, last - 1)))
        _info(f"kept {len(part.cells or [])} cells, {len(part.balls)} balls, {len(part.struts)} struts", args)
        _write_model_output(part, args)
        return EXIT_OK
    if sub == "filter":
        if model.cells is not None and any(c.layer is None for c in model.cells):
            layer_decomposition(model)
        part = filter_model(model, parse_filter(args.filter))
        _info(f"kept {len(part.balls)} balls, {len(part.struts)} struts", args)
        _write_model_output(part, args)
        return EXIT_OK
    if sub == "diff":
        if model.cells is not None:
            layer_decomposition(model)
        top = filter_model(model, parse_filter(args.filter))
        base = filter_model(model, parse_filter(args.base))
        tagged = model_diff(top, base)
        fg = sum(1 for s in tagged.struts if s.tag == "foreground")
        _info(f"foreground struts: {fg}, background struts: {len(tagged.struts) - fg}", args)
        _write_model_output(tagged, args)
        return EXIT_OK
    if sub == "paths":
        pred = parse_filter(args.filter) if args.filter else None
        paths = monochrome_paths(model, args.color, pred)
        closed = [p for p in paths if p.closed]
        _info(f"{args.color} paths: {len(paths)} ({len(closed)} closed)", args)
        for p in paths:
            if len(p) >= args.min_length:
                kind = "cycle" if p.closed else "path"
                _info(f"  {kind} of {len(p)} struts: balls {list(p.balls)}", args)
        if args.output:
            keep = {s for p in paths if len(p) >= args.min_length for s in p.struts}
            tags = ["foreground" if i in keep else "background" for i in range(len(model.struts))]
            _write_model_output(model.with_tags(tags), args)
        return EXIT_OK
    raise _Exit(EXIT_PARSE, f"unknown zome command {sub}")  # pragma: no cover


# -- parser ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="zomekit", description="Wythoff polytopes, projections and Zome models.")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="build a polytope from a Coxeter diagram")
    g.add_argument("spec", help='diagram and rings, e.g. "H4 x o o o" or "H4 all-active"')
    g.add_argument("-o", "--output", help="output JSON (default stdout)")
    g.add_argument("--cap", type=int, default=DEFAULT_VERTEX_CAP, help="vertex count limit")
    g.set_defaults(func=cmd_generate)

    pr = sub.add_parser("project", help="project a polytope")
    pr.add_argument("input")
    pr.add_argument("--kind", required=True, choices=["vertex", "edge", "face", "cell", "basis", "stereo", "coxplane"])
    pr.add_argument("--index", "--cell-index", dest="index", type=int, help="face id for element-first views")
    pr.add_argument("--axis", help="projection axis (comma-separated golden numbers)")
    pr.add_argument("--basis", help="explicit basis rows separated by ';'")
    pr.add_argument("--pole", default="north", help="north, south, vertex:N or a vector")
    pr.add_argument("--plane", default="ambient", help="ambient, nodes:i,j,.. or a subdiagram such as H3")
    pr.add_argument("--arc-samples", type=int, default=0, help="samples per stereographic edge arc")
    pr.add_argument("--tilt", help="SVG tilt angles in degrees, 'a,b'")
    pr.add_argument("-o", "--output", help="output .json, .svg or .obj (default JSON on stdout)")
    pr.set_defaults(func=cmd_project)

    z = sub.add_parser("zome", help="Zome constructibility, parts and build plans")
    zs = z.add_subparsers(dest="zcmd", required=True)

    def common(sp):
        sp.add_argument("input", help="projected 3D polytope JSON or Zome model JSON")
        sp.add_argument("-o", "--output", help="output file (.svg, .json or .obj)")
        sp.add_argument("--no-align", action="store_true", help="do not search for a catalog-aligned frame")
        sp.add_argument("--size-offset", type=int, default=0, help="shift all size labels")
        sp.add_argument("--tilt", help="SVG tilt angles in degrees, 'a,b'")
        return sp

    c = common(zs.add_parser("check", help="decide constructibility and print the certificate"))
    c.add_argument("--show", type=int, default=10, help="offending vectors to list")
    c.add_argument("--strict", action="store_true", help="exit 1 when not constructible")
    common(zs.add_parser("parts", help="parts list"))
    ly = common(zs.add_parser("layers", help="cells by layer around the core"))
    ly.add_argument("--from", dest="start", type=int, default=0, help="first layer kept (core = 0)")
    ly.add_argument("--upto", type=int, default=None, help="keep the first N layers")
    ly.add_argument("--diff", action="store_true", help="draw all but the outermost kept layer dotted")
    f = common(zs.add_parser("filter", help="keep part of a model"))
    f.add_argument("--filter", required=True)
    d = common(zs.add_parser("diff", help="tag struts to add on top of a base part"))
    d.add_argument("--filter", required=True, help="the part to build")
    d.add_argument("--base", required=True, help="the part already built")
    pa = common(zs.add_parser("paths", help="single-color paths and cycles"))
    pa.add_argument("--color", default="blue", choices=["blue", "yellow", "red"])
    pa.add_argument("--filter", help="strut filter, e.g. 'ring(red0,below)'")
    pa.add_argument("--min-length", type=int, default=2)
    for sp in (c, zs.choices["parts"], ly, f, d, pa):
        sp.set_defaults(func=cmd_zome)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("always", ExactnessWarning)
            warnings.showwarning = lambda msg, *a, **k: print(f"warning: {msg}", file=sys.stderr)
            return args.func(args)
    except _Exit as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except (DiagramError, FilterSyntaxError) as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (ProjectionError, RankError, OrbitCapError, IndexError, np.linalg.LinAlgError) as exc:
        print(f"geometry error: {exc}", file=sys.stderr)
        return EXIT_GEOMETRY
    except NotConstructibleError as exc:
        print(f"error: {exc}; run 'zome check' for the certificate", file=sys.stderr)
        return EXIT_ZOME_INPUT
    except SkeletonError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ZOME_INPUT
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
