"""sigran: signaling-cost models and mobility simulations for a
centralized-SDN 5G RAN compared against the standard architecture."""

from .callflows import (
    Callflow,
    CallflowVariant,
    MessageSpec,
    NodeKind,
    ProcessingStep,
    ValidationReport,
    build_callflow,
    callflow_records,
    message_catalog,
    validate_callflow,
)
from .costs import (
    ComparisonTable,
    CostParams,
    CostPolynomial,
    InvalidCallflowError,
    ParameterError,
    compare_report,
    improvement,
    registration_breakeven,
    signaling_time,
    symbolic_cost,
)
from .engine import (
    ArrivalProcess,
    CallflowStats,
    EmptyResultError,
    SimEvent,
    Workload,
    mean_completion,
    run_callflow,
    trace_digest,
)
from .mobility import (
    HandoverPolicyConfig,
    MobilityStats,
    PolicyKind,
    UeState,
    a3_decide,
    centralized_decide,
    run_mobility,
)
from .radio import (
    CellConfig,
    PathlossParams,
    cell_load,
    pathloss_db,
    rsrp_dbm,
    sinr_db,
    thermal_noise_dbm,
    ue_throughput_bps,
)
from .scenario import Scenario, ScenarioError, builtin_scenario, load_scenario, parse_scenario

__version__ = "0.1.0"
