"""Path-class colorings of the multigraphs G1 and G2."""

from .classify import (Classification, MarkingError, MarkSet, classify_edges, compute_roles,
                       find_black_cycle, mark_edges, nice_violations)
from .multigraph import (K4, K4_PRIME, K8, Coloring, EdgeCopy, LayeredMultigraph, build_g1,
                         build_g2, class_weights)
from .phases import (ColoringOutcome, LayerContext, color_g1, color_g2, color_layer,
                     coloring_dot, commit_unmarked, phase1, phase2, phase3)
from .search import ColoringBudgetExceeded, complete, exhaustive_color
from .verify import ColoringReport, verify_coloring

__all__ = [
    "Classification", "ColoringBudgetExceeded", "ColoringOutcome", "ColoringReport", "Coloring",
    "EdgeCopy", "K4", "K4_PRIME", "K8", "LayerContext", "LayeredMultigraph", "MarkSet",
    "MarkingError", "build_g1", "build_g2", "class_weights", "classify_edges", "color_g1",
    "color_g2", "color_layer", "coloring_dot", "commit_unmarked", "complete", "compute_roles",
    "exhaustive_color", "find_black_cycle", "mark_edges", "nice_violations", "phase1", "phase2",
    "phase3", "verify_coloring",
]
