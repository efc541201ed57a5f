"""zomekit: exact Wythoff polytopes over Q(phi), projections and Zome models.

Typical pipeline::

    from zomekit import build_polytope, element_first_axis, complete_basis, orthogonal_project
    from zomekit.zome import build_model, parts_list

    poly = build_polytope("H4 all-active")
    axis = element_first_axis(poly, 3, 0)
    shadow = orthogonal_project(poly, complete_basis(axis))
    model, report = build_model(shadow)
    print(parts_list(model).render())

Set ``ZOMEKIT_NUMBA=0`` before import to run the numeric kernels in plain
numpy instead of numba.
"""

from .coxeter import (
    Diagram,
    DiagramError,
    RingPattern,
    check_relations,
    coxeter_element,
    group_order,
    parse_diagram,
    simple_roots,
)
from .golden import PHI, GoldenScalar, golden
from .projection import (
    ProjectionError,
    choose_face,
    complete_basis,
    coxeter_plane_basis,
    element_first_axis,
    orthogonal_project,
    project_to_plane,
    stereographic,
)
from .wythoff import ExactnessWarning, Polytope, build_polytope

__version__ = "0.1.0"

__all__ = [
    "PHI", "Diagram", "DiagramError", "ExactnessWarning", "GoldenScalar", "Polytope", "ProjectionError",
    "RingPattern", "build_polytope", "check_relations", "choose_face", "complete_basis", "coxeter_element",
    "coxeter_plane_basis", "element_first_axis", "golden", "group_order", "orthogonal_project",
    "parse_diagram", "project_to_plane", "simple_roots", "stereographic",
]
