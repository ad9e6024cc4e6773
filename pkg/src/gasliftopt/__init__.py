"""Gas-lifted oil production optimization with learned early fixing.

Pipeline: a synthetic well model is tabulated on a fixed breakpoint grid,
production maximization becomes a small LP once the active grid region is
chosen, enumeration over the 25 regions gives exact optima, and neural
models learn to pick the region directly from instance parameters.
"""

from .well_model import (
    BreakpointGrid,
    FlowTable,
    ProblemParams,
    build_flow_table,
    default_grid,
    synthetic_liquid_flow,
)
from .formulation import (
    LinearProgram,
    RegionAssignment,
    Solution,
    build_early_fixed_lp,
    dump_lp,
    enumerate_assignments,
    pin_variable,
)
from .lp_solver import IterationLimitError, SimplexConfig, SimplexSolver, solve
from .exact import AllInfeasibleError, ExactResult, objective_for, solve_exact
from .neural import (
    AdamState,
    HeadSpec,
    MlpModel,
    Normalizer,
    adam_init,
    adam_step,
    backward,
    forward,
    init_mlp,
    load_model,
    loss_bce_two_heads,
    loss_squared,
    model_from_json,
    model_to_json,
    round_assignment,
    save_model,
)
from .training import (
    SupRecord,
    TrainConfig,
    TrainResult,
    WeakRecord,
    baseline_assignment,
    build_dsup,
    build_dweak,
    predict_assignment,
    sample_params,
    split_records,
    supervised_config,
    surrogate_config,
    train_supervised,
    train_surrogate,
    train_weak,
    weak_config,
)
from .bench import (
    EvalReport,
    TimingReport,
    aggregate_reports,
    benchmark_runtime,
    emit_report,
    evaluate_assignments,
    evaluate_heuristic,
    report_from_json,
)

__version__ = "0.1.0"
