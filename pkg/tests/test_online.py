from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from closroute.algorithms import sorted_greedy, unsorted_greedy
from closroute.core import ClosDims, FlowSet, max_congestion
from closroute.instances import FlowSequence, online_sequences
from closroute.online import (
    DETERMINISTIC_ROUTERS,
    ECMPRouter,
    GreedyRouter,
    OnlineSession,
    SortedGreedyRouter,
    adversary_blocks,
    adversary_xy,
    make_router,
    randomized_experiment,
    run_online,
)

from .conftest import flowsets


@given(flowsets(max_flows=10), st.randoms(use_true_random=False))
def test_greedy_router_matches_offline(fs, rnd):
    order = list(fs.ids)
    rnd.shuffle(order)
    assert run_online(GreedyRouter(), FlowSequence(fs, order)) == unsorted_greedy(fs, order)


@given(flowsets(max_flows=10))
def test_sorted_router_on_full_sequence_matches_last_replay(fs):
    r = run_online(SortedGreedyRouter(), FlowSequence(fs, fs.ids))
    if len(fs):
        assert r[len(fs)] == sorted_greedy(fs)[len(fs)]


@given(flowsets(max_flows=10), st.sampled_from(sorted(DETERMINISTIC_ROUTERS)))
def test_prefix_decisions_do_not_depend_on_future(fs, name):
    full = run_online(make_router(name), FlowSequence(fs, fs.ids))
    for k in range(len(fs) + 1):
        seq = FlowSequence(fs, fs.ids).prefix(k)
        assert run_online(make_router(name), seq) == full.restricted(range(1, k + 1))


def test_single_flow():
    fs = FlowSet.build(ClosDims(3, 1), [(1, 1, 1, 1, Fraction(2, 3))])
    r = run_online(GreedyRouter(), FlowSequence(fs, [1]))
    assert r[1] == 1 and max_congestion(fs, r) == Fraction(2, 3)


class _Broken:
    name = "broken"

    def reset(self, dims):
        pass

    def route(self, flow, loads):
        return 7


def test_out_of_range_choice_is_an_error():
    fs = FlowSet.build(ClosDims(3, 1), [(1, 1, 1, 1, 1)])
    with pytest.raises(ValueError, match="outside"):
        run_online(_Broken(), FlowSequence(fs, [1]))


def test_ecmp_router_needs_seed():
    with pytest.raises(ValueError):
        make_router("ecmp")
    with pytest.raises(ValueError):
        make_router("oracle")


def test_ecmp_router_reproducible():
    pair = online_sequences(4)
    assert run_online(ECMPRouter(9), pair.X) == run_online(ECMPRouter(9), pair.X)


@pytest.mark.parametrize("name", sorted(DETERMINISTIC_ROUTERS))
@pytest.mark.parametrize("n", [2, 4, 6])
def test_adversary_forces_congestion_two(name, n):
    out = adversary_xy(make_router(name), n)
    assert out.final_congestion >= 2
    assert out.opt_witness_congestion == 1
    assert out.chosen == ("Y" if out.prefix_satisfied_p1 else "X")


@pytest.mark.parametrize("name", sorted(DETERMINISTIC_ROUTERS))
def test_blockwise_adversary(name):
    out = adversary_blocks(make_router(name), 4, 3)
    assert out.final_congestion >= 2
    assert out.opt_witness_congestion == 1
    assert len(out.routing) == len(out.chosen_sequence)


def test_blockwise_adversary_replays():
    # re-running the router offline on the chosen sequence gives the same routing
    out = adversary_blocks(GreedyRouter(), 4, 2)
    assert run_online(GreedyRouter(), out.chosen_sequence) == out.routing


@pytest.mark.parametrize("name", sorted(DETERMINISTIC_ROUTERS))
def test_single_block_experiment(name):
    rep = randomized_experiment(lambda seed: make_router(name), 4, 1)
    assert rep.link_disjoint_count <= 1
    assert rep.mean_congestion >= Fraction(3, 2)


def test_ecmp_experiment_sampled():
    rep = randomized_experiment(ECMPRouter, 4, 2, trials=200, seed=5)
    assert rep.runs == 200
    assert rep.mean_congestion >= 1
    again = randomized_experiment(ECMPRouter, 4, 2, trials=200, seed=5)
    assert again.mean_congestion == rep.mean_congestion


def test_session_tracks_loads():
    pair = online_sequences(2)
    s = OnlineSession(GreedyRouter(), pair.X.flowset.dims)
    for fid in pair.X.order:
        s.feed(pair.X.flowset.flow(fid))
    assert s.loads.peak() == max_congestion(pair.X.flowset, s.routing())
