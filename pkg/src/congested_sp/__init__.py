"""Shortest paths with node congestion: solvers, subpath-swap merges and counterexample checks."""

from .errors import (
    BudgetExceeded,
    CongestedPathError,
    CongestionViolation,
    FormatError,
    GraphError,
    OrderingError,
    PreconditionFailure,
    StructuralInconsistency,
    SupplierExhausted,
    SwapError,
    UnreachableError,
    UnsupportedGraph,
)
from .graph import (
    DistanceOracle,
    Graph,
    all_pairs_distances,
    canonical_shortest_path,
    has_shortest_path_through,
    is_shortest_path_ordering,
    on_shortest_path,
    parse_graph,
    path_through_ordering,
    render_graph,
    shortest_path_orderings,
)
from .merge import MergeTrace, merge_dag, merge_undirected
from .paths import (
    AddRecord,
    Path,
    PathCollection,
    SwapRecord,
    apply_swap,
    congestion_map,
    max_congestion_nodes,
    parse_trace,
    render_trace,
    replay,
    subpath,
    subpath_swap,
    validate_path,
)
from .reduction import (
    BlowupMapping,
    brute_force_dsp,
    congestion_blowup,
    dag_dsp,
    spc_via_dsp_reduction,
)
from .roundtrip import (
    CriticalSpec,
    PathKind,
    SegmentPartition,
    SinglePath,
    TwoPaths,
    check_cover,
    classify_segments,
    critical_node_reroute,
    find_cyclic_break,
    roundtrip_cover,
    trapping_nodes,
)
from .spc import (
    SpcInstance,
    SpcSolution,
    brute_force_spc,
    enumerate_shortest_paths,
    key_property_check,
    parse_instance,
    render_instance,
    validate_solution,
)
from .supplier import Supplier
