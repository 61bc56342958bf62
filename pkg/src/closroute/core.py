"""Clos networks, flows, routings and their congestion.

All demands and congestion values are :class:`fractions.Fraction` so that
thresholds and ties compare exactly. Switch, server and middle-switch indices
are 1-based throughout.
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, Iterator, Mapping, Optional, Sequence, Tuple

Rational = Fraction

ZERO = Fraction(0)
ONE = Fraction(1)


def as_fraction(value) -> Fraction:
    """Coerce ints, Fractions and ``"num/den"`` strings. Floats are rejected."""
    if isinstance(value, float):
        raise TypeError("floating-point demands are not allowed; use Fraction")
    return Fraction(value)


@dataclass(frozen=True)
class ClosDims:
    """The Clos network with ``n_middle`` middle switches and ``n_tor`` ToR pairs."""

    n_middle: int
    n_tor: int

    def __post_init__(self):
        if self.n_middle < 1 or self.n_tor < 1:
            raise ValueError(f"Clos dimensions must be positive, got N={self.n_middle}, R={self.n_tor}")

    @property
    def middles(self) -> range:
        return range(1, self.n_middle + 1)


@dataclass(frozen=True)
class Flow:
    id: int
    in_switch: int
    src_server: int
    out_switch: int
    dst_server: int
    demand: Fraction

    def __post_init__(self):
        object.__setattr__(self, "demand", as_fraction(self.demand))
        if not (ZERO < self.demand <= ONE):
            raise ValueError(f"flow {self.id}: demand {self.demand} outside (0, 1]")

    @property
    def source(self) -> Tuple[int, int]:
        return (self.in_switch, self.src_server)

    @property
    def destination(self) -> Tuple[int, int]:
        return (self.out_switch, self.dst_server)


@dataclass(frozen=True)
class FlowSet:
    dims: ClosDims
    flows: Tuple[Flow, ...] = ()

    def __post_init__(self):
        flows = tuple(self.flows)
        object.__setattr__(self, "flows", flows)
        n, r = self.dims.n_middle, self.dims.n_tor
        for pos, f in enumerate(flows, start=1):
            if f.id != pos:
                raise ValueError(f"flow ids must be 1..{len(flows)} in order; position {pos} has id {f.id}")
            if not (1 <= f.in_switch <= r and 1 <= f.out_switch <= r):
                raise ValueError(f"flow {f.id}: switch index outside [1, {r}]")
            if not (1 <= f.src_server <= n and 1 <= f.dst_server <= n):
                raise ValueError(f"flow {f.id}: server index outside [1, {n}]")

    def __len__(self) -> int:
        return len(self.flows)

    def __iter__(self) -> Iterator[Flow]:
        return iter(self.flows)

    def flow(self, fid: int) -> Flow:
        if not 1 <= fid <= len(self.flows):
            raise KeyError(f"no flow with id {fid}")
        return self.flows[fid - 1]

    @property
    def ids(self) -> range:
        return range(1, len(self.flows) + 1)

    def demand_order(self) -> list:
        """Flow ids sorted by non-increasing demand, ties by ascending id."""
        return [f.id for f in sorted(self.flows, key=lambda f: (-f.demand, f.id))]

    @classmethod
    def build(cls, dims: ClosDims, specs: Iterable[Tuple[int, int, int, int, object]]) -> "FlowSet":
        """Build from ``(i, s, j, t, demand)`` tuples, numbering flows 1, 2, ..."""
        flows = tuple(Flow(k, i, s, j, t, as_fraction(d)) for k, (i, s, j, t, d) in enumerate(specs, start=1))
        return cls(dims, flows)


@dataclass(frozen=True)
class Routing:
    """Assignment of flow ids to middle switches."""

    assignment: Mapping[int, int] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "assignment", dict(sorted(self.assignment.items())))

    def __getitem__(self, fid: int) -> int:
        return self.assignment[fid]

    def __contains__(self, fid) -> bool:
        return fid in self.assignment

    def __len__(self) -> int:
        return len(self.assignment)

    def items(self):
        return self.assignment.items()

    def restricted(self, ids: Iterable[int]) -> "Routing":
        return Routing({fid: self.assignment[fid] for fid in ids})

    def as_tuple(self) -> Tuple[int, ...]:
        return tuple(self.assignment[k] for k in sorted(self.assignment))


@dataclass(frozen=True)
class CongestionReport:
    up_links: Dict[Tuple[int, int], Fraction]
    down_links: Dict[Tuple[int, int], Fraction]
    max_congestion: Fraction

    def argmax_links(self) -> list:
        """All links attaining the maximum, as ``("up", i, m)`` / ``("down", m, j)``."""
        out = [("up", i, m) for (i, m), v in self.up_links.items() if v == self.max_congestion]
        out += [("down", m, j) for (m, j), v in self.down_links.items() if v == self.max_congestion]
        return out if self.max_congestion > 0 else []


@dataclass(frozen=True)
class HoseViolation:
    side: str  # "source" or "destination"
    switch: int
    server: int
    total: Fraction

    def __str__(self):
        return f"hose violation at {self.side} ({self.switch}, {self.server}), total {self.total}"


class RoutingError(ValueError):
    pass


def validate_flowset(fs: FlowSet) -> Optional[HoseViolation]:
    """Return ``None`` if the hose constraints hold, else the first violation found."""
    out_tot: Dict[Tuple[int, int], Fraction] = defaultdict(Fraction)
    in_tot: Dict[Tuple[int, int], Fraction] = defaultdict(Fraction)
    for f in fs:
        out_tot[f.source] += f.demand
        in_tot[f.destination] += f.demand
    for (i, s), tot in sorted(out_tot.items()):
        if tot > 1:
            return HoseViolation("source", i, s, tot)
    for (j, t), tot in sorted(in_tot.items()):
        if tot > 1:
            return HoseViolation("destination", j, t, tot)
    return None


def check_routing(fs: FlowSet, r: Routing) -> None:
    missing = [fid for fid in fs.ids if fid not in r]
    if missing:
        raise RoutingError(f"routing does not assign flows {missing}")
    extra = sorted(set(r.assignment) - set(fs.ids))
    if extra:
        raise RoutingError(f"routing assigns unknown flows {extra}")
    for fid, m in r.items():
        if not 1 <= m <= fs.dims.n_middle:
            raise RoutingError(f"flow {fid} assigned to middle switch {m} outside [1, {fs.dims.n_middle}]")


def congestion(fs: FlowSet, r: Routing) -> CongestionReport:
    """Per-link loads on ToR-middle links and their maximum."""
    check_routing(fs, r)
    n, rr = fs.dims.n_middle, fs.dims.n_tor
    up = {(i, m): ZERO for i in range(1, rr + 1) for m in range(1, n + 1)}
    down = {(m, j): ZERO for m in range(1, n + 1) for j in range(1, rr + 1)}
    for f in fs:
        m = r[f.id]
        up[(f.in_switch, m)] += f.demand
        down[(m, f.out_switch)] += f.demand
    peak = max(max(up.values()), max(down.values())) if len(fs) else ZERO
    return CongestionReport(up, down, peak)


def max_congestion(fs: FlowSet, r: Routing) -> Fraction:
    return congestion(fs, r).max_congestion


def lower_bound_L(fs: FlowSet) -> Fraction:
    """max over ToR switches of max(largest incident demand, incident total / N)."""
    if not len(fs):
        return ZERO
    n = fs.dims.n_middle
    tot_in: Dict[int, Fraction] = defaultdict(Fraction)
    tot_out: Dict[int, Fraction] = defaultdict(Fraction)
    big = ZERO
    for f in fs:
        tot_in[f.in_switch] += f.demand
        tot_out[f.out_switch] += f.demand
        big = max(big, f.demand)
    avg = max(max(tot_in.values()), max(tot_out.values())) / n
    return max(big, avg)


def is_link_disjoint(fs: FlowSet, r: Routing) -> bool:
    check_routing(fs, r)
    up, down = set(), set()
    for f in fs:
        m = r[f.id]
        if (f.in_switch, m) in up or (m, f.out_switch) in down:
            return False
        up.add((f.in_switch, m))
        down.add((m, f.out_switch))
    return True


def switch_incidence(fs: FlowSet) -> Tuple[Dict[int, list], Dict[int, list]]:
    """Flow ids grouped by input switch and by output switch, in id order."""
    ins: Dict[int, list] = defaultdict(list)
    outs: Dict[int, list] = defaultdict(list)
    for f in fs:
        ins[f.in_switch].append(f.id)
        outs[f.out_switch].append(f.id)
    return dict(ins), dict(outs)


def relabel_middles(r: Routing, perm: Sequence[int]) -> Routing:
    """Apply ``perm`` (a permutation of 1..N given as a list, ``perm[m-1]`` = new label)."""
    return Routing({fid: perm[m - 1] for fid, m in r.items()})
