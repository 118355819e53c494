"""Embeddings of polynomial-growth graphs into integer lattices with the sup metric."""

from gridembed.grid import Box, box_contains, is_grid_edge, linf_distance
from gridembed.graph import FiniteGraph, GrowthStats, generate_graph, growth_stats, load_graph
from gridembed.maps import (
    LatticeMap,
    Verdict,
    check_distance_lower_bound,
    extend_lipschitz,
    fold_map,
    is_k_lipschitz,
    is_r_locally_injective,
    is_valid_embedding,
)
from gridembed.solver import (
    EmbeddingCertificate,
    SearchLimits,
    embedding_dimension,
    embedding_dimension_oracle,
    embeds_in_dim,
    local_box_map,
)
from gridembed.covers import Cover, CoverReport, make_cover, validate_cover
from gridembed.pipeline import (
    Cocycle,
    PipelineReport,
    extract_cocycle,
    key_lemma_map,
    merge_maps,
    shift_chart,
    strong_embedding,
    verify_cocycle,
)

__version__ = "0.1.0"
