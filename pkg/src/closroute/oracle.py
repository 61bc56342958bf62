"""Exact solvers for desk-scale instances.

``exact_opt`` is a depth-first branch and bound over middle-switch
assignments. ``naive_opt`` enumerates every routing and is kept as the
independent check on it. ``three_edge_colorable`` backtracks over edges.
"""
from __future__ import annotations

import itertools
import math
import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .core import ZERO, FlowSet, Routing, lower_bound_L

DEFAULT_BUDGET = 10**8
BUDGET_ENV = "CLOSROUTE_ORACLE_BUDGET"


def default_budget() -> int:
    return int(os.environ.get(BUDGET_ENV, DEFAULT_BUDGET))


@dataclass(frozen=True)
class OracleResult:
    opt: Fraction
    witness: Routing
    nodes_explored: int


class BudgetExceeded(RuntimeError):
    def __init__(self, nodes: int, incumbent: Optional[Fraction]):
        self.nodes = nodes
        self.incumbent = incumbent
        super().__init__(f"oracle node budget exhausted after {nodes} nodes (incumbent {incumbent})")


def _scaled(fs: FlowSet) -> Tuple[int, List[int]]:
    """Common denominator and integer demands, indexed by flow id - 1."""
    den = 1
    for f in fs:
        den = den * f.demand.denominator // math.gcd(den, f.demand.denominator)
    return den, [int(f.demand * den) for f in fs]


class _Search:
    def __init__(self, fs: FlowSet, budget: int):
        self.fs = fs
        self.n = fs.dims.n_middle
        self.budget = budget
        self.nodes = 0
        self.den, self.dem = _scaled(fs)
        self.up = [[0] * (self.n + 1) for _ in range(fs.dims.n_tor + 1)]
        self.down = [[0] * (self.n + 1) for _ in range(fs.dims.n_tor + 1)]

    def tick(self, incumbent):
        self.nodes += 1
        if self.nodes > self.budget:
            raise BudgetExceeded(self.nodes, incumbent)

    def min_congestion(self, order: Sequence[int], floor: int) -> Tuple[int, List[int]]:
        """Best (scaled congestion, assignment) exploring flows in ``order``.

        Middle switches not used so far are interchangeable, so each flow only
        tries the used ones plus the lowest unused one.
        """
        best = [None, None]
        assign = [0] * (len(self.fs) + 1)
        flows = [self.fs.flow(fid) for fid in order]

        def rec(depth, peak, used):
            if best[0] is not None and best[0] == floor:
                return
            self.tick(best[0])
            if depth == len(flows):
                best[0], best[1] = peak, assign[:]
                return
            f = flows[depth]
            d = self.dem[f.id - 1]
            for m in range(1, min(used + 1, self.n) + 1):
                new_peak = max(peak, self.up[f.in_switch][m] + d, self.down[f.out_switch][m] + d)
                if best[0] is not None and new_peak >= best[0]:
                    continue
                self.up[f.in_switch][m] += d
                self.down[f.out_switch][m] += d
                assign[f.id] = m
                rec(depth + 1, new_peak, max(used, m))
                self.up[f.in_switch][m] -= d
                self.down[f.out_switch][m] -= d

        rec(0, 0, 0)
        return best[0], best[1]

    def lex_smallest(self, limit: int) -> List[int]:
        """Lexicographically smallest assignment (by flow id) with congestion <= limit."""
        flows = list(self.fs.flows)
        assign = [0] * (len(flows) + 1)

        def rec(depth, used):
            self.tick(limit)
            if depth == len(flows):
                return True
            f = flows[depth]
            d = self.dem[f.id - 1]
            for m in range(1, min(used + 1, self.n) + 1):
                if self.up[f.in_switch][m] + d > limit or self.down[f.out_switch][m] + d > limit:
                    continue
                self.up[f.in_switch][m] += d
                self.down[f.out_switch][m] += d
                assign[f.id] = m
                found = rec(depth + 1, max(used, m))
                self.up[f.in_switch][m] -= d
                self.down[f.out_switch][m] -= d
                if found:
                    return True
            return False

        if not rec(0, 0):
            raise AssertionError("no routing within the optimum just found")
        return assign


def exact_opt(fs: FlowSet, budget: Optional[int] = None) -> OracleResult:
    """Minimum congestion over all routings, with the lexicographically smallest optimal witness.

    Raises :class:`BudgetExceeded` instead of returning a possibly wrong value.
    """
    if not len(fs):
        return OracleResult(ZERO, Routing({}), 0)
    search = _Search(fs, default_budget() if budget is None else budget)
    # scaled congestions are integers, so nothing can beat ceil(L * den)
    floor = math.ceil(lower_bound_L(fs) * search.den)
    best, _ = search.min_congestion(fs.demand_order(), floor)
    witness = search.lex_smallest(best)
    return OracleResult(Fraction(best, search.den), Routing({fid: witness[fid] for fid in fs.ids}), search.nodes)


def naive_opt(fs: FlowSet) -> Fraction:
    """Minimum congestion by enumerating all N^|F| routings (no pruning)."""
    if not len(fs):
        return ZERO
    n, r = fs.dims.n_middle, fs.dims.n_tor
    best = None
    for combo in itertools.product(range(1, n + 1), repeat=len(fs)):
        up: Dict[Tuple[int, int], Fraction] = {}
        down: Dict[Tuple[int, int], Fraction] = {}
        for f, m in zip(fs.flows, combo):
            up[(f.in_switch, m)] = up.get((f.in_switch, m), ZERO) + f.demand
            down[(m, f.out_switch)] = down.get((m, f.out_switch), ZERO) + f.demand
        peak = max(max(up.values()), max(down.values()))
        if best is None or peak < best:
            best = peak
    return best


# --- 3-edge colouring --------------------------------------------------------


@dataclass(frozen=True)
class SimpleGraph:
    """Undirected simple graph on vertices 1..n_vertices; edges are numbered 1.. in order."""

    n_vertices: int
    edges: Tuple[Tuple[int, int], ...]

    def __post_init__(self):
        edges = tuple(tuple(e) for e in self.edges)
        object.__setattr__(self, "edges", edges)
        seen = set()
        for u, v in edges:
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            if not (1 <= u <= self.n_vertices and 1 <= v <= self.n_vertices):
                raise ValueError(f"edge ({u}, {v}) has an endpoint outside 1..{self.n_vertices}")
            key = frozenset((u, v))
            if key in seen:
                raise ValueError(f"parallel edge ({u}, {v})")
            seen.add(key)

    def neighbors(self, v: int) -> List[int]:
        """Neighbours of ``v`` in edge-list order."""
        out = []
        for a, b in self.edges:
            if a == v:
                out.append(b)
            elif b == v:
                out.append(a)
        return out

    def degree(self, v: int) -> int:
        return len(self.neighbors(v))

    def max_degree(self) -> int:
        return max((self.degree(v) for v in range(1, self.n_vertices + 1)), default=0)


def is_proper_edge_coloring(g: SimpleGraph, coloring: Dict[int, int], n_colors: int = 3) -> bool:
    if set(coloring) != set(range(1, len(g.edges) + 1)):
        return False
    seen = set()
    for m, (u, v) in enumerate(g.edges, start=1):
        c = coloring[m]
        if not 1 <= c <= n_colors or (u, c) in seen or (v, c) in seen:
            return False
        seen.add((u, c))
        seen.add((v, c))
    return True


def three_edge_colorable(g: SimpleGraph) -> Optional[Dict[int, int]]:
    """A proper 3-edge-colouring (edge number -> colour) or ``None`` if none exists."""
    for v in range(1, g.n_vertices + 1):
        if g.degree(v) > 3:
            raise ValueError(f"vertex {v} has degree {g.degree(v)} > 3")
    used = {v: set() for v in range(1, g.n_vertices + 1)}
    coloring: Dict[int, int] = {}

    def rec(m):
        if m > len(g.edges):
            return True
        u, v = g.edges[m - 1]
        for c in (1, 2, 3):
            if c in used[u] or c in used[v]:
                continue
            used[u].add(c)
            used[v].add(c)
            coloring[m] = c
            if rec(m + 1):
                return True
            used[u].discard(c)
            used[v].discard(c)
            del coloring[m]
        return False

    return dict(coloring) if rec(1) else None
