"""Random square-tiled and polygon-tiled surfaces."""
from .exact import ExactDistribution, exact_dist, theory, tv_distance, word_probability
from .holonomy import HolonomyReport, holonomy_report, is_holonomy_torus, visibility_sufficient
from .partitions import Partition, YoungDiagram, diagram, dim_irrep, mn_character, partitions_of
from .perm import Permutation, WordKind, compose, evaluate_word, format_cycles, parse_cycles
from .surface import TiledSurface, TopologySummary, from_cycles, topology

__version__ = "0.1.0"

__all__ = [
    "ExactDistribution",
    "HolonomyReport",
    "Partition",
    "Permutation",
    "TiledSurface",
    "TopologySummary",
    "WordKind",
    "YoungDiagram",
    "compose",
    "diagram",
    "dim_irrep",
    "evaluate_word",
    "exact_dist",
    "format_cycles",
    "from_cycles",
    "holonomy_report",
    "is_holonomy_torus",
    "mn_character",
    "parse_cycles",
    "partitions_of",
    "theory",
    "topology",
    "tv_distance",
    "visibility_sufficient",
    "word_probability",
]
