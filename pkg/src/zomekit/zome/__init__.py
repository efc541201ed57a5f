"""Zometool constructibility, parts lists and build plans."""

from .build import CollapseReport, NotConstructibleError, build_model, merge_skeleton
from .catalog import COLORS, CatalogError, Line, StrutCatalog, default_catalog
from .check import (
    REASONS,
    AdvisoryReport,
    Certificate,
    Classification,
    Offense,
    PhiPowerBoundError,
    SkeletonError,
    advisory_check,
    align_to_catalog,
    check_constructible,
    classify_vector,
    phi_power_residue,
    replay_offense,
)
from .model import Cell, PartsList, Strut, ZomeModel, parts_list
from .ops import (
    TRUE,
    And,
    ColorSet,
    Custom,
    DiffError,
    HalfSpace,
    LayerRange,
    Meridian,
    NoCellDataError,
    Not,
    Orthant,
    Path,
    Predicate,
    Ring,
    filter_model,
    layer_decomposition,
    model_diff,
    monochrome_paths,
)

__all__ = [
    "COLORS", "REASONS", "TRUE",
    "AdvisoryReport", "And", "CatalogError", "Cell", "Certificate", "Classification", "CollapseReport",
    "ColorSet", "Custom", "DiffError", "HalfSpace", "LayerRange", "Line", "Meridian", "NoCellDataError",
    "Not", "NotConstructibleError", "Offense", "Orthant", "PartsList", "Path", "PhiPowerBoundError",
    "Predicate", "Ring", "SkeletonError", "Strut", "StrutCatalog", "ZomeModel",
    "advisory_check", "align_to_catalog", "build_model", "check_constructible", "classify_vector",
    "default_catalog", "filter_model", "layer_decomposition", "merge_skeleton", "model_diff",
    "monochrome_paths", "parts_list", "phi_power_residue", "replay_offense",
]
