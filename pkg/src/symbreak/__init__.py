"""Seed-deterministic simulator for symmetry breaking on massive graphs.

Subpackages cover the k-machine execution model (random vertex
partition, budgeted links, randomized routing), beeping-model programs
and their k-machine simulation, hierarchical-sampling and two-phase
ruling-set algorithms, one-pass streaming ruling sets for insertion-only
and insertion-deletion streams, L0 sampling, and independent
verification oracles.
"""

from .beeping import (
    BeepingMIS,
    BeepNonTermination,
    BeepTrace,
    beeping_mis,
    mis_kmachine,
    run_beeping,
    simulate_in_kmachine,
)
from .graph import (
    Graph,
    GraphError,
    from_edges,
    gen_gadget,
    gen_gnp,
    gen_lower_bound_graph,
    induced_subgraph,
    is_valid_vector,
    load_edge_list,
    save_edge_list,
    valid_vectors,
)
from .kmachine import (
    Engine,
    Message,
    Partition,
    RoundMetrics,
    default_budget,
    partition_vertices,
    route,
)
from .l0 import EMPTY, FAIL, L0Sampler, SparseRecoverySketch
from .ruling import (
    TwoPhaseConfig,
    beta_ruling_set_kmachine,
    msg_efficient_two_ruling,
    optimal_eps,
    two_phase_two_ruling,
)
from .streaming import (
    LevelAssignment,
    SketchRecoveryError,
    StreamError,
    StreamEvent,
    VertexStore,
    assign_levels,
    post_process,
    process_dynamic_stream,
    process_insertion_stream,
    read_stream,
    stream_ruling_set,
    write_stream,
)
from .verify import Verdict, brute_force_all_mis, is_beta_ruling_set, is_independent_set

__version__ = "0.1.0"
