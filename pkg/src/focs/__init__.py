"""Flow-based optimal charging schedules for groups of electric vehicles."""

from .instance import (
    AtomicInterval,
    InfeasibleInstanceError,
    InstanceError,
    Job,
    PowerProfile,
    Schedule,
    Timeline,
    aggregate_profile,
    build_jobs,
    check_schedule,
    discretize,
    objective,
)
from .maxflow import FlowNetwork, FlowResult, MaxFlowMethod, build_network, max_flow
from .scheduler import RoundLog, SolveReport, SolverError, peak, solve, solve_prefix

__version__ = "0.1.0"
