"""Gallai colorings, rainbow-triangle repair and testing, and Behrend-type hardness constructions."""

from .gallai import (
    GallaiTree,
    RainbowTriangleError,
    closeness_cost,
    compose,
    decompose,
    monochromatic_partition,
    random_gallai_tree,
)
from .graphs import (
    BudgetExceeded,
    ColoredGraph,
    CopyFamily,
    Digraph,
    EditTranscript,
    VertexPartition,
    apply_edits,
    color_projection,
    count_rainbow_triangles,
    cross_pair_count,
    d3_pattern,
    enumerate_copies,
    f4_pattern,
    rainbow_triangle,
    triangles_avoiding_color,
    verify_pair_disjoint,
)
from .hardness import (
    EquationFamily,
    avoiding_set,
    blowup,
    d3_hardness,
    design_family,
    f4_hardness,
    lift_to_digraph,
    triangle_hardness,
    verify_avoiding_set,
)
from .repair import RepairConfig, approximate_partition, repair, test_rainbow_free

__all__ = [
    "BudgetExceeded",
    "ColoredGraph",
    "CopyFamily",
    "Digraph",
    "EditTranscript",
    "EquationFamily",
    "GallaiTree",
    "RainbowTriangleError",
    "RepairConfig",
    "VertexPartition",
    "apply_edits",
    "approximate_partition",
    "avoiding_set",
    "blowup",
    "closeness_cost",
    "color_projection",
    "compose",
    "count_rainbow_triangles",
    "cross_pair_count",
    "d3_hardness",
    "d3_pattern",
    "decompose",
    "design_family",
    "enumerate_copies",
    "f4_hardness",
    "f4_pattern",
    "lift_to_digraph",
    "monochromatic_partition",
    "rainbow_triangle",
    "random_gallai_tree",
    "repair",
    "test_rainbow_free",
    "triangle_hardness",
    "triangles_avoiding_color",
    "verify_avoiding_set",
    "verify_pair_disjoint",
]

__version__ = "0.1.0"
