"""Online routing harness and the adaptive adversary.

A router sees flows one at a time together with the current link loads and
commits each flow to a middle switch; nothing is ever re-routed. Randomised
routers are deterministic routers parameterised by a seed.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Protocol

from .algorithms import LinkLoads, sorted_greedy
from .core import ClosDims, Flow, FlowSet, Routing, is_link_disjoint, max_congestion
from .instances import (
    FlowSequence,
    online_sequences,
    prefix_property_p1,
    supersequence_witness,
    supersequences,
)


class OnlineRouter(Protocol):
    name: str

    def reset(self, dims: ClosDims) -> None: ...

    def route(self, flow: Flow, loads: LinkLoads) -> int: ...


class GreedyRouter:
    """Least-congested path at arrival time, lowest index on ties."""

    name = "unsorted-greedy"

    def reset(self, dims):
        pass

    def route(self, flow, loads):
        return loads.best_middle(flow.in_switch, flow.out_switch)


class SortedGreedyRouter:
    """Sorted greedy re-run on the prefix seen so far; emits the newcomer's switch.

    Decisions depend only on the prefix, so this is a valid online algorithm.
    On equal demands it coincides with :class:`GreedyRouter`.
    """

    name = "sorted-greedy"

    def reset(self, dims):
        self.dims = dims
        self.seen: List[Flow] = []

    def route(self, flow, loads):
        k = len(self.seen) + 1
        self.seen.append(Flow(k, flow.in_switch, flow.src_server, flow.out_switch, flow.dst_server, flow.demand))
        return sorted_greedy(FlowSet(self.dims, tuple(self.seen)))[k]


class RoundRobinRouter:
    """Ignores loads: M_1, M_2, ..., M_N, M_1, ..."""

    name = "round-robin"

    def reset(self, dims):
        self.n = dims.n_middle
        self.next = 0

    def route(self, flow, loads):
        m = self.next % self.n + 1
        self.next += 1
        return m


class ECMPRouter:
    name = "ecmp"

    def __init__(self, seed: int = 0):
        self.seed = seed

    def reset(self, dims):
        self.n = dims.n_middle
        self.rng = random.Random(self.seed)

    def route(self, flow, loads):
        return self.rng.randint(1, self.n)


DETERMINISTIC_ROUTERS = {
    "unsorted-greedy": GreedyRouter,
    "sorted-greedy": SortedGreedyRouter,
    "round-robin": RoundRobinRouter,
}


def make_router(name: str, seed: Optional[int] = None) -> OnlineRouter:
    if name == "ecmp":
        if seed is None:
            raise ValueError("the ecmp router needs a seed")
        return ECMPRouter(seed)
    try:
        return DETERMINISTIC_ROUTERS[name]()
    except KeyError:
        raise ValueError(f"unknown router {name!r}") from None


class OnlineSession:
    """Feeds flows to a router one by one and records its commitments."""

    def __init__(self, router: OnlineRouter, dims: ClosDims):
        self.router = router
        self.dims = dims
        self.loads = LinkLoads(dims.n_middle)
        self.assignment: Dict[int, int] = {}
        router.reset(dims)

    def feed(self, flow: Flow) -> int:
        m = self.router.route(flow, self.loads)
        if not isinstance(m, int) or not 1 <= m <= self.dims.n_middle:
            raise ValueError(f"router {self.router.name} chose middle switch {m!r} outside [1, {self.dims.n_middle}]")
        self.loads.add(flow.in_switch, m, flow.out_switch, flow.demand)
        self.assignment[flow.id] = m
        return m

    def routing(self) -> Routing:
        return Routing(self.assignment)


def run_online(router: OnlineRouter, seq: FlowSequence) -> Routing:
    session = OnlineSession(router, seq.flowset.dims)
    for fid in seq.order:
        session.feed(seq.flowset.flow(fid))
    return session.routing()


@dataclass
class AdversaryOutcome:
    chosen: str
    chosen_sequence: FlowSequence
    routing: Routing
    final_congestion: Fraction
    opt_witness: Routing
    opt_witness_congestion: Fraction
    prefix_satisfied_p1: bool


def adversary_xy(router: OnlineRouter, n: int) -> AdversaryOutcome:
    """Feed X1, then Y2 if the router's X1 routing has property P1, else X2."""
    pair = online_sequences(n)
    session = OnlineSession(router, pair.X.flowset.dims)
    for fid in pair.X.order[: pair.prefix_len]:
        session.feed(pair.X.flowset.flow(fid))
    p1 = prefix_property_p1(session.routing(), n)
    name = "Y" if p1 else "X"
    seq = pair.Y if p1 else pair.X
    for fid in seq.order[pair.prefix_len :]:
        session.feed(seq.flowset.flow(fid))
    r = session.routing()
    witness = pair.witnesses[name]
    return AdversaryOutcome(
        name, seq, r, max_congestion(seq.flowset, r), witness, max_congestion(seq.flowset, witness), p1
    )


def adversary_blocks(router: OnlineRouter, n: int, s: int) -> AdversaryOutcome:
    """Blockwise adaptive adversary over S blocks of C_{N,3S}.

    Each block's suffix is picked after seeing the router's routing of that
    block's prefix; the chosen supersequence index is returned in ``chosen``.
    """
    seqs = supersequences(n, 3 * s)
    dims = seqs[0].flowset.dims
    session = OnlineSession(router, dims)
    idx = 0
    start = 0
    for block in range(s):
        # the prefix of this block is identical in every sequence sharing the earlier choices
        probe = seqs[idx]
        for fid in probe.order[start : start + n]:
            session.feed(probe.flowset.flow(fid))
        if prefix_property_p1(session.routing(), n, offset=start):
            idx |= 1 << block
        chosen = seqs[idx]
        suffix = n if (idx >> block) & 1 else n // 2
        for fid in chosen.order[start + n : start + n + suffix]:
            session.feed(chosen.flowset.flow(fid))
        start += n + suffix
    seq = seqs[idx]
    r = session.routing()
    witness = supersequence_witness(n, 3 * s, idx)
    return AdversaryOutcome(
        format(idx, f"0{s}b")[::-1], seq, r, max_congestion(seq.flowset, r), witness,
        max_congestion(seq.flowset, witness), False,
    )


@dataclass
class ExperimentReport:
    mean_congestion: Fraction
    link_disjoint_count: int
    runs: int
    per_sequence: Dict[int, List[Fraction]] = field(default_factory=dict)


def randomized_experiment(
    router_factory: Callable[[int], OnlineRouter],
    n: int,
    s: int,
    trials: Optional[int] = None,
    seed: int = 0,
) -> ExperimentReport:
    """Mean congestion of a (seeded) router over the 2^S supersequences.

    With ``trials=None`` every supersequence is run once with router seed 0.
    Otherwise ``trials`` (sequence, router seed) pairs are drawn uniformly.
    ``link_disjoint_count`` counts distinct supersequences that ever received
    a link-disjoint routing.
    """
    seqs = supersequences(n, 3 * s)
    rng = random.Random(seed)
    if trials is None:
        plan = [(i, 0) for i in range(len(seqs))]
    else:
        plan = [(rng.randrange(len(seqs)), rng.getrandbits(64)) for _ in range(trials)]
    per_seq: Dict[int, List[Fraction]] = {}
    good = set()
    for idx, router_seed in plan:
        seq = seqs[idx]
        r = run_online(router_factory(router_seed), seq)
        per_seq.setdefault(idx, []).append(max_congestion(seq.flowset, r))
        if is_link_disjoint(seq.flowset, r):
            good.add(idx)
    values = [c for cs in per_seq.values() for c in cs]
    return ExperimentReport(sum(values, Fraction(0)) / len(values), len(good), len(values), per_seq)
