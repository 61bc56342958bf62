"""Minimum-congestion routing of unsplittable flows in three-stage Clos networks."""
from .algorithms import (
    ALGORITHMS,
    AlgorithmConfig,
    ecmp,
    melen_turner,
    route,
    route_two_phase,
    run_two_phase,
    sorted_greedy,
    unsorted_greedy,
)
from .core import ClosDims, Flow, FlowSet, Routing, congestion, lower_bound_L, max_congestion
from .oracle import exact_opt

__version__ = "0.1.0"

__all__ = [
    "ALGORITHMS",
    "AlgorithmConfig",
    "ClosDims",
    "Flow",
    "FlowSet",
    "Routing",
    "congestion",
    "ecmp",
    "exact_opt",
    "lower_bound_L",
    "max_congestion",
    "melen_turner",
    "route",
    "route_two_phase",
    "run_two_phase",
    "sorted_greedy",
    "unsorted_greedy",
]
