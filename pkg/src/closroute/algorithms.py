"""Routing algorithms for unsplittable flows in Clos networks.

Baselines (unsorted/sorted greedy, ECMP, Melen-Turner) and the two-phase
algorithm: Phase 1 admits a subset of flows into copies of the ToR switches
under a demand budget ``P = p * L`` and routes it link-disjointly in the
expanded network; Phase 2 places the remaining flows greedily.
"""
from __future__ import annotations

import random
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

from .core import ZERO, FlowSet, Routing, lower_bound_L, validate_flowset
from .matching import BipartiteMultigraph, edge_color, is_proper

TIE_BREAKS = ("lowest", "highest")


@dataclass(frozen=True)
class AlgorithmConfig:
    p: Fraction = Fraction(9, 5)
    q: int = 3
    tie_break: str = "lowest"
    rng_seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "p", Fraction(self.p))
        if self.q < 1:
            raise ValueError("q must be a positive integer")
        harmonic = sum((Fraction(1, k) for k in range(1, self.q)), Fraction(0))
        if self.p < harmonic:
            raise ValueError(f"p={self.p} is below 1 + 1/2 + ... + 1/(q-1) = {harmonic}")
        if self.tie_break not in TIE_BREAKS:
            raise ValueError(f"unknown tie_break {self.tie_break!r}; choose from {TIE_BREAKS}")


class LinkLoads:
    """Mutable per-link congestion of ToR-middle links."""

    def __init__(self, n_middle: int):
        self.n_middle = n_middle
        self.up: Dict[Tuple[int, int], Fraction] = defaultdict(Fraction)
        self.down: Dict[Tuple[int, int], Fraction] = defaultdict(Fraction)

    def path(self, i: int, m: int, j: int) -> Fraction:
        return max(self.up.get((i, m), ZERO), self.down.get((m, j), ZERO))

    def add(self, i: int, m: int, j: int, demand: Fraction) -> None:
        self.up[(i, m)] += demand
        self.down[(m, j)] += demand

    def best_middle(self, i: int, j: int, tie_break: str = "lowest") -> int:
        middles = range(1, self.n_middle + 1)
        if tie_break == "highest":
            middles = reversed(middles)
        best, best_val = None, None
        for m in middles:
            val = self.path(i, m, j)
            if best_val is None or val < best_val:
                best, best_val = m, val
        return best

    def peak(self) -> Fraction:
        return max(list(self.up.values()) + list(self.down.values()) + [ZERO])


def _greedy(fs: FlowSet, order: Sequence[int], loads: Optional[LinkLoads] = None, tie_break: str = "lowest") -> Dict[int, int]:
    loads = loads if loads is not None else LinkLoads(fs.dims.n_middle)
    out = {}
    for fid in order:
        f = fs.flow(fid)
        m = loads.best_middle(f.in_switch, f.out_switch, tie_break)
        loads.add(f.in_switch, m, f.out_switch, f.demand)
        out[fid] = m
    return out


def unsorted_greedy(fs: FlowSet, order: Optional[Sequence[int]] = None, tie_break: str = "lowest") -> Routing:
    """Assign flows in ``order`` (default: id order) to a least-congested path."""
    order = list(fs.ids) if order is None else list(order)
    if sorted(order) != list(fs.ids):
        raise ValueError("order must be a permutation of the flow ids")
    return Routing(_greedy(fs, order, tie_break=tie_break))


def sorted_greedy(fs: FlowSet, tie_break: str = "lowest") -> Routing:
    return unsorted_greedy(fs, fs.demand_order(), tie_break)


def ecmp(fs: FlowSet, seed: int) -> Routing:
    rng = random.Random(seed)
    n = fs.dims.n_middle
    return Routing({f.id: rng.randint(1, n) for f in fs})


# --- expanded network ------------------------------------------------------


def copy_graph(fs: FlowSet, copies: Dict[int, Tuple[int, int]]) -> BipartiteMultigraph:
    """Bipartite graph on ToR-switch copies: left vertex ``(k-1)*R + i`` is copy k of I_i."""
    r = fs.dims.n_tor
    k_max = max([max(k, l) for k, l in copies.values()] + [1])
    edges = []
    for fid in sorted(copies):
        f = fs.flow(fid)
        k, l = copies[fid]
        edges.append((fid, (k - 1) * r + f.in_switch, (l - 1) * r + f.out_switch))
    return BipartiteMultigraph(r * k_max, r * k_max, tuple(edges))


def route_copies(fs: FlowSet, copies: Dict[int, Tuple[int, int]], order: Optional[Sequence[int]] = None) -> Routing:
    """Link-disjoint routing of the flows in ``copies`` within the expanded network."""
    if not copies:
        return Routing({})
    g = copy_graph(fs, copies)
    return Routing(edge_color(g, fs.dims.n_middle, order))


def is_copy_link_disjoint(fs: FlowSet, copies: Dict[int, Tuple[int, int]], r: Routing) -> bool:
    if not copies:
        return True
    return is_proper(copy_graph(fs, copies), {fid: r[fid] for fid in copies}, fs.dims.n_middle)


def melen_turner_copies(fs: FlowSet) -> Dict[int, Tuple[int, int]]:
    """Fill copies of every ToR switch with N flows each, in non-increasing demand order."""
    n = fs.dims.n_middle
    in_pos: Dict[int, int] = defaultdict(int)
    out_pos: Dict[int, int] = defaultdict(int)
    copies = {}
    for fid in fs.demand_order():
        f = fs.flow(fid)
        k = in_pos[f.in_switch] // n + 1
        l = out_pos[f.out_switch] // n + 1
        in_pos[f.in_switch] += 1
        out_pos[f.out_switch] += 1
        copies[fid] = (k, l)
    return copies


def melen_turner(fs: FlowSet, decomposition_order: Optional[Sequence[int]] = None) -> Routing:
    """Copy expansion followed by a matching decomposition.

    ``decomposition_order`` is the order (flow ids) in which the expanded
    graph's edges are coloured; different orders give different, equally
    valid, decompositions.
    """
    return route_copies(fs, melen_turner_copies(fs), decomposition_order)


# --- two-phase algorithm ---------------------------------------------------


@dataclass
class Phase1State:
    k_copies: int
    n_middle: int
    in_count: Dict[Tuple[int, int], int] = field(default_factory=lambda: defaultdict(int))
    in_max: Dict[Tuple[int, int], Fraction] = field(default_factory=dict)
    in_min: Dict[Tuple[int, int], Fraction] = field(default_factory=dict)
    out_count: Dict[Tuple[int, int], int] = field(default_factory=lambda: defaultdict(int))
    out_max: Dict[Tuple[int, int], Fraction] = field(default_factory=dict)
    out_min: Dict[Tuple[int, int], Fraction] = field(default_factory=dict)
    accepted: Dict[int, Tuple[int, int]] = field(default_factory=dict)
    rejected_by: Dict[int, Tuple[bool, bool]] = field(default_factory=dict)
    proposed: Dict[int, Tuple[int, int]] = field(default_factory=dict)

    def first_open(self, counts, switch: int) -> int:
        k = 1
        while counts[(switch, k)] >= self.n_middle:
            k += 1
        return k

    def sum_max(self, maxima, switch: int, upto: Optional[int] = None) -> Fraction:
        """Sum of per-copy maximum demands over copies 1..upto (all copies by default)."""
        upto = self.k_copies if upto is None else upto
        return sum((maxima.get((switch, k), ZERO) for k in range(1, upto + 1)), ZERO)

    def sum_min(self, minima, switch: int) -> Fraction:
        return sum((minima.get((switch, k), ZERO) for k in range(1, self.k_copies + 1)), ZERO)


def _accepts(state: Phase1State, counts, maxima, switch: int, demand: Fraction, P: Fraction, Q: int) -> Tuple[bool, int]:
    x = state.first_open(counts, switch)
    if x < Q:
        return True, x
    total = state.sum_max(maxima, switch, x - 1) + max(maxima.get((switch, x), ZERO), demand)
    return total <= P, x


def uphold_properties(fs: FlowSet, cfg: AlgorithmConfig = AlgorithmConfig(), L: Optional[Fraction] = None) -> Tuple[FrozenSet[int], Phase1State]:
    """Admit flows, largest first, into ToR-switch copies while P1-P3 hold."""
    L = lower_bound_L(fs) if L is None else Fraction(L)
    P = cfg.p * L
    n = fs.dims.n_middle
    inc_in: Dict[int, int] = defaultdict(int)
    inc_out: Dict[int, int] = defaultdict(int)
    for f in fs:
        inc_in[f.in_switch] += 1
        inc_out[f.out_switch] += 1
    busiest = max(list(inc_in.values()) + list(inc_out.values()) + [0])
    state = Phase1State(k_copies=max(1, -(-busiest // n)), n_middle=n)

    for fid in fs.demand_order():
        f = fs.flow(fid)
        ok_in, x = _accepts(state, state.in_count, state.in_max, f.in_switch, f.demand, P, cfg.q)
        ok_out, y = _accepts(state, state.out_count, state.out_max, f.out_switch, f.demand, P, cfg.q)
        state.proposed[fid] = (x, y)
        if not (ok_in and ok_out):
            state.rejected_by[fid] = (not ok_in, not ok_out)
            continue
        state.accepted[fid] = (x, y)
        for counts, maxima, minima, key in (
            (state.in_count, state.in_max, state.in_min, (f.in_switch, x)),
            (state.out_count, state.out_max, state.out_min, (f.out_switch, y)),
        ):
            counts[key] += 1
            maxima[key] = max(maxima.get(key, ZERO), f.demand)
            minima[key] = min(minima.get(key, f.demand), f.demand)
    return frozenset(state.accepted), state


def check_phase1_properties(fs: FlowSet, state: Phase1State, P: Fraction, Q: int) -> List[str]:
    """Return descriptions of every P1/P2/P3 violation in ``state`` (empty if none)."""
    problems = []
    n = state.n_middle
    rank = {fid: pos for pos, fid in enumerate(fs.demand_order())}
    for side, counts, maxima, sw in (
        ("input", state.in_count, state.in_max, lambda f: f.in_switch),
        ("output", state.out_count, state.out_max, lambda f: f.out_switch),
    ):
        switches = {key[0] for key, c in counts.items() if c}
        for s in switches:
            for k in range(1, state.k_copies + 1):
                c = counts.get((s, k), 0)
                if c > n:
                    problems.append(f"P1: {side} {s} copy {k} holds {c} > {n} flows")
                if c > 0 and k > 1 and counts.get((s, k - 1), 0) != n:
                    problems.append(f"P1: {side} {s} copy {k} used before copy {k - 1} is full")
            if counts.get((s, Q), 0) > 0 and state.sum_max(maxima, s) > P:
                problems.append(f"P3: {side} {s} sum of copy maxima {state.sum_max(maxima, s)} > {P}")
        side_idx = 0 if side == "input" else 1
        groups = defaultdict(list)
        for fid in state.accepted:
            groups[sw(fs.flow(fid))].append(fid)
        for s, ids in groups.items():
            ids.sort(key=rank.get)
            copies = [state.accepted[fid][side_idx] for fid in ids]
            if copies != sorted(copies):
                problems.append(f"P2: {side} {s} copies not monotone in demand order")
    return problems


@dataclass
class TwoPhaseResult:
    routing: Routing
    phase1: Routing
    accepted: FrozenSet[int]
    state: Phase1State
    L: Fraction
    P: Fraction

    @property
    def rejected(self) -> List[int]:
        return sorted(set(self.routing.assignment) - self.accepted)


def run_two_phase(fs: FlowSet, cfg: AlgorithmConfig = AlgorithmConfig()) -> TwoPhaseResult:
    violation = validate_flowset(fs)
    if violation is not None:
        raise ValueError(str(violation))
    L = lower_bound_L(fs)
    accepted, state = uphold_properties(fs, cfg, L)
    phase1 = route_copies(fs, state.accepted)

    loads = LinkLoads(fs.dims.n_middle)
    for fid, m in phase1.items():
        f = fs.flow(fid)
        loads.add(f.in_switch, m, f.out_switch, f.demand)
    rest = [fid for fid in fs.demand_order() if fid not in accepted]
    assignment = dict(phase1.assignment)
    assignment.update(_greedy(fs, rest, loads, cfg.tie_break))
    return TwoPhaseResult(Routing(assignment), phase1, accepted, state, L, cfg.p * L)


def route_two_phase(fs: FlowSet, cfg: AlgorithmConfig = AlgorithmConfig()) -> Routing:
    return run_two_phase(fs, cfg).routing


ALGORITHMS = ("two-phase", "sorted-greedy", "unsorted-greedy", "ecmp", "melen-turner")


def route(name: str, fs: FlowSet, cfg: AlgorithmConfig = AlgorithmConfig()) -> Routing:
    if name == "two-phase":
        return route_two_phase(fs, cfg)
    if name == "sorted-greedy":
        return sorted_greedy(fs, cfg.tie_break)
    if name == "unsorted-greedy":
        return unsorted_greedy(fs, tie_break=cfg.tie_break)
    if name == "ecmp":
        return ecmp(fs, cfg.rng_seed)
    if name == "melen-turner":
        return melen_turner(fs)
    raise ValueError(f"unknown algorithm {name!r}; choose from {ALGORITHMS}")
