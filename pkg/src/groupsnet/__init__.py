"""Group meeting analytics and group-aware opportunistic forwarding.

The pipeline: ingest or synthesize a pairwise contact trace, slice it into
fixed windows and keep socially meaningful edges, detect per-window groups
by clique percolation, track them across windows into timelines, model
their re-meeting regularity as constant-rate processes, and use the
resulting probabilistic group graph to pick forwarding relays. A replay
engine and experiment harness compare that policy against a static
community/centrality scheme and flooding.
"""

from .baselines import (
    BubbleState,
    CommunityAssignment,
    RankTable,
    bubble_forward_decision,
    build_bubble_state,
    flood_decision,
)
from .cpm import CliqueCapExceeded, k_cliques, maximal_cliques, percolate
from .experiment import (
    ExperimentConfig,
    ExperimentResult,
    MetricCurve,
    build_timelines,
    overhead_scaling,
    run_experiment,
    sample_messages,
    snowball_subset,
)
from .policy import (
    GroupGraph,
    GroupNode,
    Route,
    build_group_graph,
    forwarding_list,
    most_probable_route,
    poisson_pmf,
    remeet_probability,
)
from .regularity import (
    FitError,
    Histogram,
    PoissonFit,
    fit_all,
    fit_poisson,
    group_remeeting_pdf,
    hourly_contact_histogram,
    re_encounter_pdf,
)
from .replay import (
    BubblePolicy,
    FloodingPolicy,
    GroupsNetPolicy,
    MessageSpec,
    SimRun,
    epidemic_cogroup_experiment,
    flood_reach,
    replay_message,
)
from .slicing import SlicingParams, WindowGraph, slice_and_threshold, slice_trace, threshold
from .synth import SynthConfig, SynthPlan, generate_synthetic, plan_synthetic, realize_plan
from .trace import ContactEvent, CsvSchema, Trace, TraceFormatError, ingest_csv
from .tracking import (
    GroupMeeting,
    GroupTimeline,
    RecentGroup,
    detect_meetings,
    recent_groups,
    similarity,
    track,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
