"""Uncertainty quantification and glyph geometry for ensemble vector fields."""

from .depth import (
    DepthMatrix,
    DepthResult,
    depth_all_members,
    filter_outliers,
    vector_depth_bruteforce,
    vector_depth_fast,
)
from .field import (
    Brick,
    EnsembleField,
    GridIndex,
    Region,
    brick_to_ensemble,
    generate_synthetic,
    load_brick,
    load_dataset,
    slice_region,
    write_dataset,
)
from .glyphs import (
    GlyphMesh,
    GlyphStyle,
    build_comparison,
    build_glyph,
    build_squid,
    export_obj,
    normalize_scene,
    superellipse_profile,
    validate_mesh,
)
from .spherical import cartesian_to_spherical, spherical_to_cartesian, to_spherical
from .summary import (
    UncertaintySummary,
    magnitude_stats,
    magvar_series,
    magvar_slice,
    max_angular_deviation,
    plane_intersections,
    principal_spread,
    summarize,
    summarize_field,
    summarize_region,
)

__version__ = "0.1.0"

__all__ = [
    "Brick",
    "DepthMatrix",
    "DepthResult",
    "EnsembleField",
    "GlyphMesh",
    "GlyphStyle",
    "GridIndex",
    "Region",
    "UncertaintySummary",
    "brick_to_ensemble",
    "build_comparison",
    "build_glyph",
    "build_squid",
    "cartesian_to_spherical",
    "depth_all_members",
    "export_obj",
    "filter_outliers",
    "generate_synthetic",
    "load_brick",
    "load_dataset",
    "magnitude_stats",
    "magvar_series",
    "magvar_slice",
    "max_angular_deviation",
    "normalize_scene",
    "plane_intersections",
    "principal_spread",
    "slice_region",
    "spherical_to_cartesian",
    "summarize",
    "summarize_field",
    "summarize_region",
    "superellipse_profile",
    "to_spherical",
    "validate_mesh",
    "vector_depth_bruteforce",
    "vector_depth_fast",
    "write_dataset",
]
