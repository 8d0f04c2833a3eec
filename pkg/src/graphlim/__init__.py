"""Step-kernel graph limits: direct sums, connectedness, component
decomposition, kernel-random graph sampling, balanced cuts, and a seeded
Monte Carlo harness that checks the limit theory at desk scale.
"""

from .catalog import TestGraphCatalog, enumerate_connected
from .errors import EnumerationBudgetError, InvariantError
from .graphs import (
    Graph,
    complete_graph,
    components,
    cut_distance_iso,
    cut_norm_distance,
    cut_size,
    cycle_graph,
    direct_sum_graphs,
    empty_graph,
    hom_density_graph,
    is_connected_graph,
    path_graph,
)
from .kernels import (
    ComponentDecomposition,
    DensityFingerprint,
    StepKernel,
    constant_kernel,
    decompose_kernel,
    direct_sum_kernels,
    fingerprint,
    graph_as_kernel,
    hom_density_kernel,
    is_connected_kernel,
    make_step_kernel,
    zero_kernel,
)
from .limits import (
    GraphLimit,
    Step,
    Sum,
    Zero,
    decompose_limit,
    is_connected_limit,
    largest_component_weight,
    limit_density,
    limit_from_json_dict,
    limits_equal_up_to,
    realize,
)
from .sampling import (
    ComponentStats,
    LabeledSample,
    component_stats,
    density_convergence,
    sample_graph,
    subgraph_frequency,
)
from .cuts import (
    BalancedCutResult,
    balanced_cut_heuristic,
    min_balanced_cut_exact,
    perturb,
)
from .experiments import (
    ExperimentConfig,
    ExperimentReport,
    run_components_experiment,
    run_cut_experiment,
    run_density_fingerprint_experiment,
    run_sum_convergence_experiment,
    write_report,
)

__version__ = "0.1.0"
