"""Covering codes over [q]^n: constructions, exact optima, density bounds."""

from .bounds import (
    BoundParams,
    ChainCheckReport,
    OptimizationResult,
    RecurrenceSpec,
    classic_bound,
    closed_form_bound,
    closed_form_chain_check,
    feasibility,
    nested_parametric_bound,
    optimize_parametric_bound,
    parametric_bound,
    parametric_bound_factored,
    parametric_bound_geometric,
    recurrence_depth,
    recurrence_limit_bound,
    simulate_recurrence,
    telescoped_error_bound,
)
from .codes import (
    Code,
    CoverVerdict,
    DensityValue,
    SampleVerdict,
    code_from_dict,
    code_to_dict,
    density,
    read_code,
    sphere_covering_lower_bound,
    verify_covering,
    verify_covering_sampled,
    verify_covering_scan,
    write_code,
)
from .construct import (
    ConstructionTrace,
    DominationResult,
    RegularGraphView,
    complete_graph_view,
    direct_sum,
    dominating_partial,
    empty_graph_view,
    greedy_ball_cover,
    greedy_dominating_partial,
    hamming_graph_view,
    nbar_of,
    recursive_construct,
)
from .errors import (
    BudgetExceededError,
    DominationFailure,
    InfeasibleParamsError,
    SpaceTooLargeError,
)
from .hamming import (
    DEFAULT_ENUMERATION_GUARD,
    HammingSpace,
    Word,
    ball_volume,
    enumerate_ball,
    enumerate_space,
    hamming_distance,
    index_word,
    word_index,
)
from .solver import EXACT_SOLVER_GUARD, SolveResult, minimal_covering_code, minimal_density

__version__ = "0.1.0"
