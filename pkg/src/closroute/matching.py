"""Edge colouring of bipartite multigraphs and link-disjoint routing.

A bipartite multigraph of maximum degree at most N splits into N matchings
(König). Here the colouring is built one edge at a time: an edge takes the
lowest colour free at both ends, and otherwise an alternating two-colour
path is flipped to make one colour free at both ends.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Dict, Iterable, Optional, Sequence, Tuple

from .core import FlowSet, Routing


@dataclass(frozen=True)
class BipartiteMultigraph:
    left_count: int
    right_count: int
    edges: Tuple[Tuple[int, int, int], ...]  # (edge id, left vertex, right vertex)

    def __post_init__(self):
        edges = tuple(tuple(e) for e in self.edges)
        object.__setattr__(self, "edges", edges)
        seen = set()
        for eid, u, v in edges:
            if eid in seen:
                raise ValueError(f"duplicate edge id {eid}")
            seen.add(eid)
            if not (1 <= u <= self.left_count and 1 <= v <= self.right_count):
                raise ValueError(f"edge {eid} has endpoint outside the vertex ranges")

    def degrees(self) -> Tuple[Counter, Counter]:
        return Counter(u for _, u, _ in self.edges), Counter(v for _, _, v in self.edges)

    def max_degree(self) -> int:
        left, right = self.degrees()
        return max(list(left.values()) + list(right.values()) + [0])


EdgeColoring = Dict[int, int]


class DegreeError(ValueError):
    pass


def _lowest_free(used: Dict[int, int], n_colors: int, start: int = 1) -> Optional[int]:
    for c in range(start, n_colors + 1):
        if c not in used:
            return c
    return None


def edge_color(g: BipartiteMultigraph, n_colors: int, order: Optional[Sequence[int]] = None) -> EdgeColoring:
    """Properly colour the edges of ``g`` with colours ``1..n_colors``.

    ``order`` optionally fixes the sequence in which edges are coloured
    (a permutation of the edge ids); by default edges are taken in the order
    they appear in ``g.edges``. The result depends only on ``g`` and ``order``.
    """
    left_deg, right_deg = g.degrees()
    for side, deg in (("left", left_deg), ("right", right_deg)):
        for vertex in sorted(deg):
            if deg[vertex] > n_colors:
                raise DegreeError(f"{side} vertex {vertex} has degree {deg[vertex]} > {n_colors}")

    by_id = {eid: (u, v) for eid, u, v in g.edges}
    if order is None:
        order = [eid for eid, _, _ in g.edges]
    elif sorted(order) != sorted(by_id):
        raise ValueError("order must be a permutation of the edge ids")

    # at[(side, vertex)][colour] -> edge id
    at: Dict[Tuple[str, int], Dict[int, int]] = {}
    color: EdgeColoring = {}

    def slot(side, vertex):
        return at.setdefault((side, vertex), {})

    for eid in order:
        u, v = by_id[eid]
        cu, cv = slot("L", u), slot("R", v)
        common = next((c for c in range(1, n_colors + 1) if c not in cu and c not in cv), None)
        if common is None:
            a = _lowest_free(cu, n_colors)  # free at u, busy at v
            b = _lowest_free(cv, n_colors)  # free at v, busy at u
            _flip_path(at, color, by_id, ("R", v), a, b)
            common = a
        color[eid] = common
        cu[common] = eid
        cv[common] = eid
    return color


def _flip_path(at, color, by_id, start, a, b):
    """Swap colours a and b along the a/b alternating path leaving ``start`` on colour a."""
    path = []
    node, want = start, a
    while want in at.get(node, {}):
        eid = at[node][want]
        path.append(eid)
        u, v = by_id[eid]
        node = ("R", v) if node[0] == "L" else ("L", u)
        want = b if want == a else a
    for eid in path:
        u, v = by_id[eid]
        old = color[eid]
        del at[("L", u)][old]
        del at[("R", v)][old]
    for eid in path:
        u, v = by_id[eid]
        new = b if color[eid] == a else a
        color[eid] = new
        at[("L", u)][new] = eid
        at[("R", v)][new] = eid


def is_proper(g: BipartiteMultigraph, coloring: EdgeColoring, n_colors: Optional[int] = None) -> bool:
    if set(coloring) != {eid for eid, _, _ in g.edges}:
        return False
    seen = set()
    for eid, u, v in g.edges:
        c = coloring[eid]
        if n_colors is not None and not 1 <= c <= n_colors:
            return False
        if ("L", u, c) in seen or ("R", v, c) in seen:
            return False
        seen.add(("L", u, c))
        seen.add(("R", v, c))
    return True


def switch_graph(fs: FlowSet, ids: Optional[Iterable[int]] = None) -> BipartiteMultigraph:
    """Input switches on the left, output switches on the right, one edge per flow."""
    flows = fs.flows if ids is None else [fs.flow(k) for k in ids]
    r = fs.dims.n_tor
    return BipartiteMultigraph(r, r, tuple((f.id, f.in_switch, f.out_switch) for f in flows))


def link_disjoint_routing(fs: FlowSet, order: Optional[Sequence[int]] = None) -> Routing:
    """Route with no two flows on a common ToR-middle link.

    Requires at most N flows per input switch and per output switch, which
    holds for unit demands under the hose model.
    """
    g = switch_graph(fs)
    try:
        colors = edge_color(g, fs.dims.n_middle, order)
    except DegreeError as exc:
        raise ValueError(f"no link-disjoint routing: {exc}") from None
    return Routing(colors)
