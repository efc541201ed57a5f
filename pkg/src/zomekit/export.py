"""SVG and OBJ output.

Zome struts follow the usual legend: blue dashed, yellow solid, red
dash-dot; struts tagged ``background`` by a diff are drawn dotted and
faded.  3D input is tilted by two small rotations and then viewed from
above.  Output depends only on the input and the style, so repeated runs
produce identical bytes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .projection import PlanarImage
from .wythoff import Polytope
from .zome.model import ZomeModel

__all__ = ["StrokeStyle", "RenderStyle", "export_svg", "export_obj"]


@dataclass(frozen=True)
class StrokeStyle:
    color: str
    dash: str | None = None  # SVG stroke-dasharray


def _default_strokes():
    return {
        "blue": StrokeStyle("#1f5fbf", "8 4"),
        "yellow": StrokeStyle("#d9a400", None),
        "red": StrokeStyle("#c0202a", "8 3 2 3"),
    }


@dataclass
class RenderStyle:
    strokes: dict[str, StrokeStyle] = field(default_factory=_default_strokes)
    plain: StrokeStyle = StrokeStyle("#222222", None)  # polytope edges
    background_dash: str = "1 3"
    background_opacity: float = 0.45
    tilt: tuple[float, float] = (5.0, 5.0)  # degrees about x, then y
    size: int = 800
    margin: int = 20
    stroke_width: float = 1.2
    ball_radius: float = 0.0  # 0 draws no balls


def _tilt(X: np.ndarray, tilt) -> np.ndarray:
    a, b = (math.radians(t) for t in tilt)
    Rx = np.array([[1, 0, 0], [0, math.cos(a), -math.sin(a)], [0, math.sin(a), math.cos(a)]])
    Ry = np.array([[math.cos(b), 0, math.sin(b)], [0, 1, 0], [-math.sin(b), 0, math.cos(b)]])
    return X @ (Ry @ Rx).T


def _fmt(x: float) -> str:
    s = f"{x:.3f}"
    return "0.000" if s == "-0.000" else s


class _Canvas:
    def __init__(self, pts2d: np.ndarray, style: RenderStyle):
        self.style = style
        n = style.size
        if len(pts2d):
            lo, hi = pts2d.min(axis=0), pts2d.max(axis=0)
            span = float(max(hi - lo)) or 1.0
            self.scale = (n - 2 * style.margin) / span
            self.offset = lo
            self.extra = ((n - 2 * style.margin) - (hi - lo) * self.scale) / 2
        else:
            self.scale, self.offset, self.extra = 1.0, np.zeros(2), np.zeros(2)
        self.items: list[str] = []

    def xy(self, p) -> tuple[str, str]:
        m = self.style.margin
        x = (p[0] - self.offset[0]) * self.scale + m + self.extra[0]
        # SVG y grows downward
        y = self.style.size - ((p[1] - self.offset[1]) * self.scale + m + self.extra[1])
        return _fmt(x), _fmt(y)

    def line(self, p, q, stroke: StrokeStyle, dash=None, opacity=None):
        (x1, y1), (x2, y2) = self.xy(p), self.xy(q)
        self.items.append(
            f'<line x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}"{self._attrs(stroke, dash, opacity)}/>'
        )

    def polyline(self, pts, stroke: StrokeStyle):
        coords = " ".join(",".join(self.xy(p)) for p in pts)
        self.items.append(f'<polyline points="{coords}" fill="none"{self._attrs(stroke, None, None)}/>')

    def circle(self, p, r):
        x, y = self.xy(p)
        self.items.append(f'<circle cx="{x}" cy="{y}" r="{_fmt(r)}" fill="#ffffff" stroke="#444444"/>')

    def _attrs(self, stroke, dash, opacity):
        dash = dash if dash is not None else stroke.dash
        out = f' stroke="{stroke.color}" stroke-width="{self.style.stroke_width}"'
        if dash:
            out += f' stroke-dasharray="{dash}"'
        if opacity is not None:
            out += f' stroke-opacity="{opacity}"'
        return out

    def render(self) -> bytes:
        n = self.style.size
        head = (
            '<?xml version="1.0" encoding="UTF-8"?>\n'
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{n}" height="{n}" viewBox="0 0 {n} {n}">\n'
        )
        body = "".join(f"  {it}\n" for it in self.items)
        return (head + body + "</svg>\n").encode()


def _float3(points) -> np.ndarray:
    if isinstance(points, np.ndarray) and points.dtype != object:
        return points.astype(float).reshape(len(points), -1)
    return np.array([[float(x) for x in p] for p in points], dtype=float).reshape(len(points), -1)


def _view(X: np.ndarray, style: RenderStyle) -> tuple[np.ndarray, np.ndarray]:
    """2D screen points and depth for 2D or 3D coordinates."""
    if X.shape[1] == 3:
        T = _tilt(X, style.tilt)
        return T[:, :2], T[:, 2]
    if X.shape[1] == 2:
        return X, np.zeros(len(X))
    if X.shape[1] == 1:
        return np.column_stack([X[:, 0], np.zeros(len(X))]), np.zeros(len(X))
    raise ValueError(f"cannot draw {X.shape[1]}-dimensional coordinates; project first")


def _model_svg(model: ZomeModel, style: RenderStyle) -> bytes:
    X = _float3(model.balls) if model.balls else np.zeros((0, 3))
    P, depth = _view(X, style) if len(X) else (np.zeros((0, 2)), np.zeros(0))
    cv = _Canvas(P, style)
    # far struts first; ties broken by id for a stable order
    order = sorted(range(len(model.struts)), key=lambda i: (_mid_depth(depth, model.struts[i]), i))
    for i in order:
        s = model.struts[i]
        stroke = style.strokes.get(s.color, style.plain)
        if s.tag == "background":
            cv.line(P[s.a], P[s.b], stroke, style.background_dash, style.background_opacity)
        else:
            cv.line(P[s.a], P[s.b], stroke)
    if style.ball_radius > 0:
        for b in range(len(P)):
            cv.circle(P[b], style.ball_radius)
    return cv.render()


def _mid_depth(depth, s) -> float:
    return round(float(depth[s.a] + depth[s.b]) / 2, 9)


def _poly_svg(poly: Polytope, style: RenderStyle) -> bytes:
    X = poly.float_vertices()
    P, _ = _view(X, style) if len(X) else (np.zeros((0, 2)), None)
    if poly.edge_paths is not None:
        paths = [_view(np.asarray(p, dtype=float), style)[0] for p in poly.edge_paths]
        allp = np.vstack([P] + paths) if paths else P
        cv = _Canvas(allp, style)
        for pts in paths:
            cv.polyline(pts, style.plain)
        return cv.render()
    cv = _Canvas(P, style)
    for a, b in poly.edges:
        cv.line(P[a], P[b], style.plain)
    return cv.render()


def _planar_svg(img: PlanarImage, style: RenderStyle) -> bytes:
    cv = _Canvas(np.asarray(img.points, dtype=float), style)
    for a, b in img.edges:
        cv.line(img.points[a], img.points[b], style.plain)
    return cv.render()


def export_svg(obj, style: RenderStyle | None = None) -> bytes:
    """SVG bytes for a :class:`ZomeModel`, :class:`PlanarImage` or 2D/3D :class:`Polytope`."""
    style = style or RenderStyle()
    if isinstance(obj, ZomeModel):
        return _model_svg(obj, style)
    if isinstance(obj, PlanarImage):
        return _planar_svg(obj, style)
    if isinstance(obj, Polytope):
        return _poly_svg(obj, style)
    raise TypeError(f"cannot render {type(obj).__name__}")


def export_obj(obj) -> bytes:
    """Wavefront OBJ with ``v`` rows and ``l`` line elements (1-based)."""
    if isinstance(obj, ZomeModel):
        X = _float3(obj.balls) if obj.balls else np.zeros((0, 3))
        segs = [(s.a, s.b) for s in obj.struts]
        name = "zome model"
    elif isinstance(obj, Polytope):
        X = obj.float_vertices()
        segs = [tuple(e) for e in obj.edges]
        name = "polytope"
    else:
        raise TypeError(f"cannot export {type(obj).__name__}")
    if X.shape[1] > 3:
        raise ValueError("OBJ needs at most 3 coordinates; project first")
    if X.shape[1] < 3:
        X = np.column_stack([X, np.zeros((len(X), 3 - X.shape[1]))])
    lines = [f"# zomekit {name}: {len(X)} vertices, {len(segs)} lines"]
    lines += ["v " + " ".join(f"{x:.9f}" for x in row) for row in X]
    lines += [f"l {a + 1} {b + 1}" for a, b in segs]
    return ("\n".join(lines) + "\n").encode()
