"""Homology of unordered configuration spaces of graphs.

The Świątkowski complex computes ``H_*(UF_n(G))`` for all ``n`` at once as
a module over the edge ring ``Z[x_e]``.  This package builds the complex
and its reduced subcomplex, reads off integral homology by Smith normal
form, computes graded Betti numbers of the homology modules, scans
edge-linear FI-graph families for Betti stabilization, and checks the
blow-up exact sequences.  A discretized cube-complex model serves as an
independent oracle.
"""

from .blowup import (
    Blowup,
    HalfEdgeDifferenceModule,
    blow_up,
    half_edge_differences,
    ses_matrices,
    star_example_regression,
    verify_les,
)
from .errors import *  # noqa: F401,F403
from .families import (
    FIGraphFamily,
    LinearPolynomial,
    StabilizationReport,
    betti_sequence,
    bipartite_family,
    detect_polynomial,
    edge_count_check,
    evaluate,
    family_from_dict,
    load_family,
    scan_family,
    star_family,
    support_stabilization,
    transition,
    wedge_family,
)
from .graph import (
    Graph,
    GraphHom,
    HalfEdge,
    build_graph,
    complete_bipartite,
    compose_or_check_hom,
    cycle_graph,
    load_graph,
    path_graph,
    segment,
    star_graph,
    subdivide,
    theta_graph,
)
from .homology import AbelianGroup, configuration_homology, euler_characteristic, field_betti, homology_at
from .linalg import Field, IntegerMatrix, invariant_factors, smith_form, smith_normal_form
from .modules import BettiTable, betti_table, generator_degrees, homology_betti_table, koszul_betti, truncated_module
from .oracle import discretized_complex, oracle_homology
from .swiatkowski import (
    EMPTY,
    VERTEX,
    BigradeSlice,
    Half,
    HalfDiff,
    PureTensor,
    boundary_matrix,
    differential,
    enumerate_basis,
    induced_chain_map,
)

__version__ = "0.1.0"
