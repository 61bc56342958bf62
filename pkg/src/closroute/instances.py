"""Instance families with witness routings and recorded expectations.

Every generator returns a :class:`NamedInstance`. Where a construction leaves the
server-level placement open, flows are packed onto the lowest-index servers
that keep the hose constraints; each generator says what it chose.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations
from typing import Dict, List, Optional, Sequence, Tuple

from .algorithms import melen_turner, melen_turner_copies
from .core import ONE, ClosDims, Flow, FlowSet, Routing, max_congestion
from .oracle import SimpleGraph, is_proper_edge_coloring

HALF = Fraction(1, 2)


@dataclass
class NamedInstance:
    name: str
    flowset: FlowSet
    witnesses: Dict[str, Routing] = field(default_factory=dict)
    expected: Dict[str, Fraction] = field(default_factory=dict)
    meta: dict = field(default_factory=dict)

    def recheck(self) -> Dict[str, Tuple[Fraction, Optional[Fraction]]]:
        """Recomputed congestion of every witness next to the recorded value."""
        return {
            name: (max_congestion(self.flowset, r), self.expected.get(name))
            for name, r in self.witnesses.items()
        }


@dataclass(frozen=True)
class FlowSequence:
    """A flow set together with its arrival order (flow ids)."""

    flowset: FlowSet
    order: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "order", tuple(self.order))
        if sorted(self.order) != list(self.flowset.ids):
            raise ValueError("order must be a permutation of the flow ids")

    def __len__(self):
        return len(self.order)

    def prefix(self, k: int) -> "FlowSequence":
        ids = self.order[:k]
        sub = FlowSet(self.flowset.dims, self.flowset.flows[:k])
        if tuple(sorted(ids)) != tuple(range(1, k + 1)):
            raise ValueError("prefixes are only defined for id-ordered sequences")
        return FlowSequence(sub, ids)


def _require_int(value: int, least: int, what: str):
    if not isinstance(value, int) or value < least:
        raise ValueError(f"{what} must be an integer >= {least}, got {value!r}")


# --- cross gadget and the 3/2 instance -------------------------------------


def _gadget_specs(n: int, in_offset: int = 0, out_offset: int = 0):
    for i in range(1, n + 1):
        for j in range(1, n):
            yield (in_offset + i, j, out_offset + j, i, ONE), (i, j)


def elemental_middle(i: int, j: int, n: int) -> int:
    """Middle switch of flow (s^j_i, t^i_j) in the elemental routing."""
    return (i + j - 2) % n + 1


def cross_gadget(n: int) -> NamedInstance:
    """N(N-1) unit flows (s^j_i, t^i_j) in C_{N,N}, i in [N], j in [N-1]."""
    _require_int(n, 2, "n")
    specs, roles = zip(*_gadget_specs(n))
    fs = FlowSet.build(ClosDims(n, n), specs)
    elemental = Routing({k: elemental_middle(i, j, n) for k, (i, j) in enumerate(roles, start=1)})
    return NamedInstance(
        f"cross-gadget-{n}", fs, {"elemental": elemental}, {"elemental": ONE, "opt": ONE}, {"roles": list(roles)}
    )


def gadget_free_middles(fs: FlowSet, r: Routing, n: int) -> Dict[int, Optional[int]]:
    """For each input switch, the unique middle switch it does not use (None if not unique)."""
    out = {}
    for i in range(1, n + 1):
        used = {r[f.id] for f in fs if f.in_switch == i}
        free = set(range(1, n + 1)) - used
        out[i] = free.pop() if len(free) == 1 else None
    return out


def gadget_properties(fs: FlowSet, r: Routing, n: int) -> Tuple[bool, bool]:
    """Both structural properties of a congestion-1 routing of the cross gadget."""
    distinct_in = all(
        len({r[f.id] for f in fs if f.in_switch == i}) == n - 1 for i in range(1, n + 1)
    )
    distinct_out = all(
        len({r[f.id] for f in fs if f.out_switch == j}) == n for j in range(1, n)
    )
    free = gadget_free_middles(fs, r, n)
    pairwise = None not in free.values() and len(set(free.values())) == n
    return distinct_in and distinct_out, pairwise


def theorem6_instance(n: int) -> NamedInstance:
    """Cross gadget plus N half-unit flows into O_N and one unit flow from I_{N+1}.

    Minimum congestion is 3/2.
    """
    _require_int(n, 2, "n")
    specs, roles = zip(*_gadget_specs(n))
    specs = list(specs)
    specs += [(i, n, n, -(-i // 2), HALF) for i in range(1, n + 1)]
    specs.append((n + 1, n, n, n, ONE))
    fs = FlowSet.build(ClosDims(n, n + 1), specs)
    witness = {k: elemental_middle(i, j, n) for k, (i, j) in enumerate(roles, start=1)}
    base = len(roles)
    for i in range(1, n + 1):
        witness[base + i] = (i - 2) % n + 1
    witness[base + n + 1] = n
    return NamedInstance(
        f"three-halves-{n}",
        fs,
        {"optimal": Routing(witness)},
        {"optimal": Fraction(3, 2), "opt": Fraction(3, 2)},
        {"type1": list(range(1, base + 1)), "type2": list(range(base + 1, base + n + 1)), "type3": [base + n + 1]},
    )


# --- Melen-Turner worst case -----------------------------------------------


def mt_formula(n: int, eps: Fraction) -> Fraction:
    return 2 - eps - (1 - eps) / n


def mt_worstcase(n: int, eps) -> NamedInstance:
    """One unit flow and (N-1)/eps flows of demand eps, all from I_1 to O_1.

    The unit flow uses s^1_1 -> t^1_1; server k >= 2 hosts 1/eps of the small
    flows on both sides. Witness "mt-adversarial" is the matching
    decomposition that puts the first flow of every copy on M_1; its
    congestion is 1 + (K - 1) * eps with K = ceil((1 + (N-1)/eps) / N) copies,
    which equals ``mt_formula`` exactly when N divides 1 + (N-1)/eps.
    """
    _require_int(n, 2, "n")
    eps = Fraction(eps)
    if not (0 < eps <= 1):
        raise ValueError("eps must lie in (0, 1]")
    per_server = 1 / eps
    if per_server.denominator != 1 or ((n - 1) / eps).denominator != 1:
        raise ValueError("1/eps and (n-1)/eps must be integers")
    per_server = int(per_server)
    specs = [(1, 1, 1, 1, ONE)]
    for server in range(2, n + 1):
        specs += [(1, server, 1, server, eps)] * per_server
    fs = FlowSet.build(ClosDims(n, 1), specs)

    optimal = Routing({f.id: f.src_server for f in fs})
    copies = melen_turner_copies(fs)
    # colouring copies in id order puts the leader of every copy on M_1
    order = list(fs.ids)
    adversarial = melen_turner(fs, decomposition_order=order)
    k_copies = max(k for k, _ in copies.values())
    return NamedInstance(
        f"mt-worstcase-{n}-{eps.numerator}_{eps.denominator}",
        fs,
        {"optimal": optimal, "mt-adversarial": adversarial},
        {
            "optimal": ONE,
            "opt": ONE,
            "mt-adversarial": 1 + (k_copies - 1) * eps,
            "mt-formula": mt_formula(n, eps),
        },
        {"copies": copies, "decomposition_order": order, "k_copies": k_copies},
    )


# --- 3-edge-colouring reduction --------------------------------------------


NAMED_GRAPHS = {
    "k4": SimpleGraph(4, ((1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4))),
    # K4 with edge (3, 4) replaced by the path 3-5-4; 7 edges but matchings have at most 2
    "subdivided-k4": SimpleGraph(5, ((1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 5), (5, 4))),
    "petersen": SimpleGraph(
        10,
        tuple((k, k % 5 + 1) for k in range(1, 6))
        + tuple((k, k + 5) for k in range(1, 6))
        + tuple((k + 5, (k + 1) % 5 + 6) for k in range(1, 6)),
    ),
}


def default_ranks(g: SimpleGraph) -> Dict[int, Dict[int, int]]:
    return {v: {u: k for k, u in enumerate(g.neighbors(v), start=1)} for v in range(1, g.n_vertices + 1)}


def coloring_reduction(g: SimpleGraph, ranks: Optional[Dict[int, Dict[int, int]]] = None) -> NamedInstance:
    """Flows in C_{3, 3|V|+|E|} admitting congestion 1 iff ``g`` is 3-edge-colourable.

    Flow ids: vertex flows (6 per vertex), then edge flows (2 per edge), then
    incident flows (2 per edge, the lower-ranked endpoint of the edge first).
    """
    if g.max_degree() > 3:
        raise ValueError("graph has a vertex of degree > 3")
    ranks = default_ranks(g) if ranks is None else ranks
    for v in range(1, g.n_vertices + 1):
        nb = g.neighbors(v)
        rk = ranks.get(v, {})
        if sorted(rk) != sorted(nb) or len(set(rk.values())) != len(nb) or not set(rk.values()) <= {1, 2, 3}:
            raise ValueError(f"ranks of vertex {v} must map its neighbours to distinct values in {{1, 2, 3}}")
    nv, ne = g.n_vertices, len(g.edges)
    specs = []
    vertex_flows: Dict[int, List[Tuple[int, int, int]]] = {}
    for k in range(1, nv + 1):
        block = []
        for spec, (i, j) in _gadget_specs(3, 3 * (k - 1), 3 * (k - 1)):
            specs.append(spec)
            block.append((len(specs), i, j))
        vertex_flows[k] = block
    edge_flows: Dict[int, Tuple[int, int]] = {}
    for m in range(1, ne + 1):
        t = 3 * nv + m
        specs.append((t, 1, t, 1, ONE))
        specs.append((t, 2, t, 2, ONE))
        edge_flows[m] = (len(specs) - 1, len(specs))
    incident: Dict[int, Tuple[int, int]] = {}
    incident_from: Dict[int, Dict[int, int]] = {v: {} for v in range(1, nv + 1)}
    for m, (a, b) in enumerate(g.edges, start=1):
        t = 3 * nv + m
        pair = []
        for v, w in ((a, b), (b, a)):
            specs.append((3 * (v - 1) + ranks[v][w], 3, t, 3, HALF))
            pair.append(len(specs))
            incident_from[v][ranks[v][w]] = len(specs)
        incident[m] = tuple(pair)
    fs = FlowSet.build(ClosDims(3, 3 * nv + ne), specs)
    meta = {
        "graph": g,
        "ranks": ranks,
        "vertex_flows": vertex_flows,
        "edge_flows": edge_flows,
        "incident": incident,
        "incident_from": incident_from,
    }
    return NamedInstance(f"reduction-{nv}v-{ne}e", fs, {}, {}, meta)


def routing_from_coloring(inst: NamedInstance, coloring: Dict[int, int]) -> Routing:
    """Congestion-1 routing of a reduction instance built from a proper 3-edge-colouring."""
    meta = inst.meta
    g: SimpleGraph = meta["graph"]
    if not is_proper_edge_coloring(g, coloring):
        raise ValueError("coloring is not a proper 3-edge-colouring")
    assign: Dict[int, int] = {}
    for m, (e1, e2) in meta["edge_flows"].items():
        c = coloring[m]
        rest = [x for x in (1, 2, 3) if x != c]
        assign[e1], assign[e2] = rest
        for fid in meta["incident"][m]:
            assign[fid] = c
    for k, block in meta["vertex_flows"].items():
        # colour each local input switch must leave free, by rank
        need = {r: assign[fid] for r, fid in meta["incident_from"][k].items()}
        perm = _relabel_for(need)
        for fid, i, j in block:
            assign[fid] = perm[elemental_middle(i, j, 3)]
    return Routing(assign)


def _relabel_for(need: Dict[int, int]) -> Dict[int, int]:
    """Permutation of {1,2,3} sending input i's elemental free middle to ``need[i]``."""
    for image in permutations((1, 2, 3)):
        perm = dict(zip((1, 2, 3), image))
        if all(perm[(i - 2) % 3 + 1] == c for i, c in need.items()):
            return perm
    raise ValueError(f"no relabelling satisfies {need}")


def coloring_from_routing(inst: NamedInstance, r: Routing) -> Optional[Dict[int, int]]:
    """Edge colouring read off the incident flows, or ``None`` if a pair disagrees."""
    out = {}
    for m, (a, b) in inst.meta["incident"].items():
        if r[a] != r[b]:
            return None
        out[m] = r[a]
    return out


# --- online sequences ------------------------------------------------------


def _xy_specs(n: int, block: int = 0):
    h = n // 2
    lo, hi = range(1, h + 1), range(h + 1, n + 1)
    b = 3 * block
    x1 = [(b + 1, s, b + 1, s) for s in lo] + [(b + 2, s, b + 2, s) for s in lo]
    x2 = [(b + 1, s, b + 2, s) for s in hi]
    y2 = [(b + 3, s, b + 1, s + h) for s in lo] + [(b + 3, s, b + 2, s) for s in hi]
    return x1, x2, y2


@dataclass
class OnlinePair:
    n: int
    X: FlowSequence
    Y: FlowSequence
    prefix_len: int
    witnesses: Dict[str, Routing]


def online_sequences(n: int) -> OnlinePair:
    """Sequences X = (X1, X2) and Y = (X1, Y2) in C_{N,3} with unit demands.

    X1: N/2 flows (I1,O1) then N/2 flows (I2,O2) on servers 1..N/2.
    X2: N/2 flows (I1,O2) on servers N/2+1..N.
    Y2: N/2 flows (I3,O1) then N/2 flows (I3,O2); I3's servers 1..N/2 feed O1,
    the rest feed O2; destinations on O1 and O2 use servers N/2+1..N.
    """
    _require_int(n, 2, "n")
    if n % 2:
        raise ValueError("n must be even")
    h = n // 2
    x1, x2, y2 = _xy_specs(n)
    dims = ClosDims(n, 3)
    X = FlowSet.build(dims, [s + (ONE,) for s in x1 + x2])
    Y = FlowSet.build(dims, [s + (ONE,) for s in x1 + y2])
    lower, upper = list(range(1, h + 1)), list(range(h + 1, n + 1))
    wx = dict(zip(range(1, h + 1), lower))
    wx.update(zip(range(h + 1, n + 1), lower))
    wx.update(zip(range(n + 1, n + h + 1), upper))
    wy = dict(zip(range(1, h + 1), lower))
    wy.update(zip(range(h + 1, n + 1), upper))
    wy.update(zip(range(n + 1, n + h + 1), upper))
    wy.update(zip(range(n + h + 1, 2 * n + 1), lower))
    return OnlinePair(
        n,
        FlowSequence(X, tuple(X.ids)),
        FlowSequence(Y, tuple(Y.ids)),
        n,
        {"X": Routing(wx), "Y": Routing(wy)},
    )


def _prefix_sets(r: Routing, n: int, offset: int = 0):
    h = n // 2
    a = [r[offset + k] for k in range(1, h + 1)]
    b = [r[offset + k] for k in range(h + 1, n + 1)]
    return a, b


def prefix_property_p1(r: Routing, n: int, offset: int = 0) -> bool:
    """(I1,O1) flows and (I2,O2) flows of X1 sit on the same N/2 distinct middles."""
    a, b = _prefix_sets(r, n, offset)
    return len(set(a)) == len(a) and len(set(b)) == len(b) and set(a) == set(b)


def prefix_property_p2(r: Routing, n: int, offset: int = 0) -> bool:
    """(I1,O1) flows and (I2,O2) flows of X1 sit on complementary sets of N/2 middles."""
    a, b = _prefix_sets(r, n, offset)
    return len(set(a)) == len(a) and len(set(b)) == len(b) and set(a) | set(b) == set(range(1, n + 1))


def supersequences(n: int, r: int) -> List[FlowSequence]:
    """All 2^S concatenations of per-block X or Y, S = r / 3.

    Sequence index i (0-based) uses Y in block j (1-based) iff bit j-1 of i is set.
    Blocks arrive in order 1..S.
    """
    _require_int(n, 2, "n")
    if n % 2:
        raise ValueError("n must be even")
    if r < 3 or r % 3:
        raise ValueError("r must be a positive multiple of 3")
    s = r // 3
    dims = ClosDims(n, r)
    out = []
    for idx in range(2 ** s):
        specs = []
        for block in range(s):
            x1, x2, y2 = _xy_specs(n, block)
            specs += x1 + (y2 if (idx >> block) & 1 else x2)
        fs = FlowSet.build(dims, [sp + (ONE,) for sp in specs])
        out.append(FlowSequence(fs, tuple(fs.ids)))
    return out


def supersequence_witness(n: int, r: int, idx: int) -> Routing:
    """Blockwise link-disjoint routing of supersequence ``idx``."""
    pair = online_sequences(n)
    assign = {}
    offset = 0
    for block in range(r // 3):
        use_y = (idx >> block) & 1
        w = pair.witnesses["Y" if use_y else "X"]
        for fid, m in w.items():
            assign[offset + fid] = m
        offset += len(w)
    return Routing(assign)


# --- small worked instances ----------------------------------------------


def greedy_worstcase(n: int, eps) -> Tuple[FlowSequence, FlowSequence]:
    """The X/Y layout with prefix demands 1 - eps and suffix demands 1.

    With a = ceil(N/2): X1 = a flows (I1,O1) and a flows (I2,O2); X2 = N - a
    flows (I1,O2); Y2 = N - a flows (I3,O1) and N - a flows (I3,O2). For even
    N this is the online X/Y pair; for odd N it is the hose-feasible variant.
    """
    _require_int(n, 2, "n")
    eps = Fraction(eps)
    if not (0 < eps < 1):
        raise ValueError("eps must lie in (0, 1)")
    a = -(-n // 2)
    b = n - a
    heavy, light = ONE, 1 - eps
    x1 = [(1, s, 1, s, light) for s in range(1, a + 1)] + [(2, s, 2, s, light) for s in range(1, a + 1)]
    x2 = [(1, s, 2, s, heavy) for s in range(a + 1, n + 1)]
    y2 = [(3, s, 1, a + s, heavy) for s in range(1, b + 1)] + [(3, b + s, 2, a + s, heavy) for s in range(1, b + 1)]
    dims = ClosDims(n, 3)
    X = FlowSet.build(dims, x1 + x2)
    Y = FlowSet.build(dims, x1 + y2)
    return FlowSequence(X, tuple(X.ids)), FlowSequence(Y, tuple(Y.ids))


ADMISSION_EXAMPLE_DESTINATIONS = (1, 2, 2, 2, 2, 3, 3, 3, 3)


def admission_example(destinations: Sequence[int] = ADMISSION_EXAMPLE_DESTINATIONS) -> NamedInstance:
    """Nine flows leaving I_1 of C_{4,3}: demand 1, four of 1/2, four of 1/4.

    Sources: f1 on s^1, f2-f3 on s^2, f4-f5 on s^3, f6-f9 on s^4.
    ``destinations`` gives each flow's output switch; destination servers are
    packed lowest-first under the hose constraint.
    """
    demands = [ONE] + [HALF] * 4 + [Fraction(1, 4)] * 4
    sources = [1, 2, 2, 3, 3, 4, 4, 4, 4]
    fill: Dict[Tuple[int, int], Fraction] = {}
    specs = []
    for d, s, j in zip(demands, sources, destinations):
        t = 1
        while fill.get((j, t), Fraction(0)) + d > 1:
            t += 1
        fill[(j, t)] = fill.get((j, t), Fraction(0)) + d
        specs.append((1, s, j, t, d))
    fs = FlowSet.build(ClosDims(4, 3), specs)
    return NamedInstance("admission-example", fs, {}, {"P": Fraction(5, 3), "L": ONE}, {"Q": 3})


# --- random corpus ---------------------------------------------------------


def random_hose_instance(dims: ClosDims, target_flows: int, max_denominator: int, seed: int) -> FlowSet:
    """Random flows respecting the hose constraints; deterministic in ``seed``.

    Endpoints are drawn among sources/destinations with residual capacity and
    demands are fractions with denominator at most ``max_denominator``. Stops
    early when no further flow fits.
    """
    if max_denominator < 1:
        raise ValueError("max_denominator must be >= 1")
    rng = random.Random(seed)
    n, r = dims.n_middle, dims.n_tor
    src = {(i, s): ONE for i in range(1, r + 1) for s in range(1, n + 1)}
    dst = {(j, t): ONE for j in range(1, r + 1) for t in range(1, n + 1)}
    specs = []
    attempts = 0
    while len(specs) < target_flows and attempts < 20 * max(target_flows, 1):
        attempts += 1
        open_src = [k for k, v in src.items() if v > 0]
        open_dst = [k for k, v in dst.items() if v > 0]
        if not open_src or not open_dst:
            break
        a = rng.choice(open_src)
        b = rng.choice(open_dst)
        cap = min(src[a], dst[b])
        den = rng.randint(1, max_denominator)
        top = (cap * den).numerator // (cap * den).denominator
        if top < 1:
            continue
        demand = Fraction(rng.randint(1, top), den)
        src[a] -= demand
        dst[b] -= demand
        specs.append((a[0], a[1], b[0], b[1], demand))
    return FlowSet.build(dims, specs)


def random_corpus(count: int, seed: int, max_n: int = 3, max_r: int = 3, max_flows: int = 9, dens=(1, 2, 3, 4, 6)):
    """``count`` random instances with N <= max_n, R <= max_r, |F| <= max_flows."""
    rng = random.Random(seed)
    for _ in range(count):
        dims = ClosDims(rng.randint(1, max_n), rng.randint(1, max_r))
        yield random_hose_instance(dims, rng.randint(1, max_flows), rng.choice(dens), rng.getrandbits(64))
