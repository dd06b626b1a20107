"""Approximation of maximum asymmetric TSP via relaxed cycle covers and path colorings."""

from .cycle_cover import CycleCover, max_cycle_cover
from .instance import Instance, Tour, load_instance, random_instance, render_instance, tour_weight
from .tour import PathSet, SolveResult, best_class, patch_to_tour, solve

__all__ = [
    "CycleCover", "Instance", "PathSet", "SolveResult", "Tour", "best_class", "load_instance",
    "max_cycle_cover", "patch_to_tour", "random_instance", "render_instance", "solve", "tour_weight",
]
__version__ = "0.1.0"
