from collections import defaultdict
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from closroute.algorithms import (
    AlgorithmConfig,
    check_phase1_properties,
    ecmp,
    is_copy_link_disjoint,
    melen_turner,
    melen_turner_copies,
    route,
    run_two_phase,
    sorted_greedy,
    unsorted_greedy,
)
from closroute.core import ClosDims, FlowSet, Routing, lower_bound_L, max_congestion
from closroute.instances import admission_example, greedy_worstcase, theorem6_instance
from closroute.oracle import exact_opt

from .conftest import flowsets

H = Fraction(1, 2)
P = Fraction(9, 5)


def _phase1_subinstance(fs, res):
    ids = sorted(res.accepted)
    sub = FlowSet.build(fs.dims, [(f.in_switch, f.src_server, f.out_switch, f.dst_server, f.demand) for f in (fs.flow(k) for k in ids)])
    return sub, Routing({pos: res.phase1[fid] for pos, fid in enumerate(ids, start=1)})


def test_config_rejects_small_p():
    with pytest.raises(ValueError):
        AlgorithmConfig(p=Fraction(7, 5), q=3)
    AlgorithmConfig(p=Fraction(11, 6), q=4)
    with pytest.raises(ValueError):
        AlgorithmConfig(tie_break="random")


def test_single_unit_flow_goes_to_phase1():
    fs = FlowSet.build(ClosDims(3, 1), [(1, 1, 1, 1, 1)])
    res = run_two_phase(fs)
    assert res.accepted == {1} and max_congestion(fs, res.routing) == 1


def test_half_flows_all_admitted():
    # N half-unit flows I1 -> O1: total N/2, L = 1/2, one copy of each switch
    fs = FlowSet.build(ClosDims(3, 1), [(1, s, 1, s, H) for s in range(1, 4)])
    res = run_two_phase(fs)
    assert res.L == H
    assert res.accepted == {1, 2, 3}
    assert max_congestion(fs, res.routing) == H


def test_two_phase_rejects_hose_violation():
    fs = FlowSet.build(ClosDims(2, 1), [(1, 1, 1, 1, 1), (1, 1, 1, 2, H)])
    with pytest.raises(ValueError, match="hose"):
        run_two_phase(fs)


def test_three_halves_instance():
    fs = theorem6_instance(3).flowset
    c = max_congestion(fs, run_two_phase(fs).routing)
    assert Fraction(3, 2) <= c <= P * 1


def test_worked_example_admission():
    inst = admission_example()
    fs = inst.flowset
    cfg = AlgorithmConfig(p=inst.expected["P"], tie_break="highest")
    res = run_two_phase(fs, cfg)
    assert res.L == 1 and res.P == Fraction(5, 3)
    assert res.accepted == frozenset(range(1, 9))
    assert res.state.proposed[9] == (3, 1)
    assert res.state.rejected_by[9] == (True, False)
    # sum of copy maxima on I1 with f9 in copy 3 would be 1 + 1/2 + 1/4 > 5/3
    assert 1 + H + Fraction(1, 4) > res.P
    assert res.routing[9] == 4


def test_worked_example_lowest_tie_break_differs():
    fs = admission_example().flowset
    res = run_two_phase(fs, AlgorithmConfig(p=Fraction(5, 3)))
    assert res.routing[9] != 4


def test_unsorted_greedy_respects_order():
    fs = FlowSet.build(ClosDims(2, 1), [(1, 1, 1, 1, H), (1, 2, 1, 2, 1)])
    assert unsorted_greedy(fs).as_tuple() == (1, 2)
    assert unsorted_greedy(fs, [2, 1]).as_tuple() == (2, 1)
    assert sorted_greedy(fs).as_tuple() == (2, 1)


def test_ecmp_seeded():
    fs = theorem6_instance(3).flowset
    assert ecmp(fs, 5) == ecmp(fs, 5)
    assert route("ecmp", fs, AlgorithmConfig(rng_seed=5)) == ecmp(fs, 5)


def test_unknown_algorithm():
    with pytest.raises(ValueError):
        route("magic", FlowSet(ClosDims(1, 1)))


def test_empty_instance_all_algorithms():
    fs = FlowSet(ClosDims(2, 2))
    for name in ("two-phase", "sorted-greedy", "unsorted-greedy", "ecmp", "melen-turner"):
        assert route(name, fs) == Routing({})


@given(flowsets())
def test_phase1_properties_hold(fs):
    res = run_two_phase(fs)
    assert check_phase1_properties(fs, res.state, res.P, 3) == []
    assert is_copy_link_disjoint(fs, res.state.accepted, res.phase1)


@given(flowsets())
def test_phase1_congestion_within_P(fs):
    res = run_two_phase(fs)
    sub, r1 = _phase1_subinstance(fs, res)
    assert max_congestion(sub, r1) <= res.P


@given(flowsets())
def test_large_flows_always_admitted(fs):
    # flows above L/q can never be rejected
    res = run_two_phase(fs)
    for f in fs:
        if f.demand > res.L / 3:
            assert f.id in res.accepted


@given(flowsets(max_n=3, max_r=3, max_flows=7))
def test_two_phase_ratio(fs):
    opt = exact_opt(fs).opt
    assert max_congestion(fs, run_two_phase(fs).routing) <= P * min(opt, 1)


@given(flowsets(max_flows=8))
def test_greedy_within_three_L(fs):
    assert max_congestion(fs, unsorted_greedy(fs)) <= 3 * max(lower_bound_L(fs), Fraction(0))


@given(flowsets())
def test_hose_count_bound(fs):
    # at most N(k-1) flows above 1/k leave any switch
    n = fs.dims.n_middle
    for k in range(2, 6):
        per = defaultdict(int)
        for f in fs:
            if f.demand > Fraction(1, k):
                per[("in", f.in_switch)] += 1
                per[("out", f.out_switch)] += 1
        assert all(c <= n * (k - 1) for c in per.values())


@given(flowsets(unit=True, max_r=4, max_flows=12))
def test_melen_turner_unit_demands(fs):
    assert max_congestion(fs, melen_turner(fs)) <= 1


@given(flowsets())
def test_melen_turner_output_is_matching_decomposition(fs):
    copies = melen_turner_copies(fs)
    assert is_copy_link_disjoint(fs, copies, melen_turner(fs))


@given(flowsets(), st.sampled_from(["two-phase", "sorted-greedy", "unsorted-greedy", "melen-turner"]))
def test_routings_are_total(fs, name):
    r = route(name, fs)
    assert sorted(r.assignment) == list(fs.ids)
    assert all(1 <= m <= fs.dims.n_middle for _, m in r.items())


def _all_greedy_outcomes(fs, order):
    """Congestion of every run of greedy in ``order`` over all ways of breaking ties."""
    out = set()

    def rec(k, up, down):
        if k == len(order):
            out.add(max(list(up.values()) + list(down.values()) + [Fraction(0)]))
            return
        f = fs.flow(order[k])
        vals = {m: max(up.get((f.in_switch, m), 0), down.get((m, f.out_switch), 0)) for m in fs.dims.middles}
        best = min(vals.values())
        for m, v in vals.items():
            if v == best:
                u, d = dict(up), dict(down)
                u[(f.in_switch, m)] = u.get((f.in_switch, m), 0) + f.demand
                d[(m, f.out_switch)] = d.get((m, f.out_switch), 0) + f.demand
                rec(k + 1, u, d)

    rec(0, {}, {})
    return out


def test_sorted_greedy_xy_family_every_tie_break():
    # heavy suffix flows are placed first once sorted, so no tie-break rule reaches 2 - eps
    X, Y = greedy_worstcase(3, Fraction(1, 4))
    worst = max(max(_all_greedy_outcomes(s.flowset, s.flowset.demand_order())) for s in (X, Y))
    assert worst < Fraction(7, 4)


def test_arrival_order_greedy_hits_two_minus_eps():
    X, Y = greedy_worstcase(3, Fraction(1, 4))
    assert max_congestion(Y.flowset, unsorted_greedy(Y.flowset, Y.order)) == Fraction(7, 4)
    assert Fraction(7, 4) in _all_greedy_outcomes(Y.flowset, list(Y.order))
