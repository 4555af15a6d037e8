from graphrl.invariants.linalg import eigvalsh, jacobi_eigh
from graphrl.invariants.paths import distance_matrices, edge_matrices, is_connected, transmissions
from graphrl.invariants.matching import MAX_MATCHING_ORDER, matching_number
from graphrl.invariants.core import (
    InvariantFn,
    SpectralScratch,
    conjecture1_inner,
    degree_square_sum,
    degrees,
    edge_bound_gap,
    energy_matching_inner,
    evaluate64,
    graph_energy,
    laplacian_spectral_radius,
    lookup,
    monochromatic_directed_triangles,
    mostar_index,
    penalize_disconnected,
    register,
    registered_names,
    vertex_bound_gap,
    zero_color_count_squared,
)

conjecture1_score = lookup("conjecture1")
energy_matching_score = lookup("energy_matching")
mostar_score = lookup("mostar")
