"""Planar surface code simulator and analysis toolkit for fabrication errors."""

from .decoder import (
    Correction,
    DecoderConsistencyError,
    MatchingGraph,
    build_matching_graph,
    logical_failure,
    mwpm,
    pairing_to_correction,
)
from .effective import (
    EffectiveCode,
    FabricationSpec,
    SupercheckGroup,
    analytic_percolation_estimate,
    build_effective_code,
    effective_distance,
    format_fabrication_spec,
    map_to_disabled,
    parse_fabrication_file,
    percolation_status,
    sample_fabrication,
)
from .experiments import (
    CampaignPoint,
    FitResult,
    NativeComparison,
    ThresholdEstimate,
    TrialConfig,
    TrialOutcome,
    estimate_threshold,
    fit_exponential,
    mean_effective_distance,
    native_vs_effective,
    percolation_rate,
    run_campaign,
    run_trial,
    supercheck_weight_stats,
)
from .geometry import (
    CheckOperator,
    CodeLayout,
    Coord,
    Link,
    adjacent_checks,
    build_layout,
)
from .noise import NoiseParams, classical_flip, single_qubit_fault, two_qubit_fault
from .schedule import RoundSchedule, build_schedule, run_round
from .syndrome import (
    DefectSet,
    SyndromeHistory,
    detection_events,
    format_history,
    supercheck_value,
)
from .tableau import Tableau, new_tableau

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
