"""blockwake: overlapping block coordinate descent on discrete grids.

The toolkit searches finite parameter grids by exhaustively optimizing one
active block of parameters at a time, with memoized evaluation so overlapping
blocks share structure instead of repeating work.  Sweep structures are named
by a compact grammar (``B5-O2``, ``T-B4-O1``, ``B6,8,6-O5``), can be repeated
over recombination schedules that shift and reverse each cycle, and every run
can be scored by a family of search-structure indicators (commonality flow,
search-wake freshness, move novelty, and their composites).  A brute-force
oracle, seedable synthetic landscapes, and an experiment harness support
desk-scale studies of which structures search well.
"""

from .bench import (
    BruteForceResult,
    ConflictPairLandscape,
    ExperimentReport,
    LANDSCAPE_KINDS,
    PlanEntry,
    SeededRandomLandscape,
    SeparableConvexLandscape,
    TrapLandscape,
    brute_force,
    correlate,
    make_landscape,
    oracle_bounds,
    parse_plan_file,
    pearson,
    random_orderings,
    run_experiment,
)
from .engine import (
    SearchState,
    SearchTrace,
    TraceRecord,
    initial_point,
    read_trace_csv,
    run_search,
    write_trace_csv,
)
from .errors import (
    BlockwakeError,
    BudgetError,
    CacheCapacityError,
    ConfigError,
    DegenerateStructureError,
    DomainError,
    EvaluationError,
    NonTerminatingStructureError,
    PlanError,
    StructureParseError,
    StructureValidationError,
)
from .indicators import (
    IndicatorEngine,
    IndicatorRow,
    IndicatorTrace,
    IndicatorVariants,
    SizeLedger,
    active_block_size,
    compute_indicators,
    local_overlap_size,
    write_indicators_csv,
)
from .plan import (
    Block,
    Cycle,
    StructureSpec,
    SweepPlan,
    assemble_plan,
    build_recombination_schedule,
    expand_cycle,
    is_canonical_schedule,
    parse_structure_name,
    plan_to_dict,
    render_structure_name,
)
from .reporting import write_brute, write_report
from .space import (
    CombinedValue,
    MemoCache,
    ObjectiveSpec,
    Parameter,
    ParameterSpace,
    Point,
    combine_bi_objective,
    evaluate,
    point_from_str,
    point_to_str,
    uniform_space,
)

__version__ = "0.1.0"
