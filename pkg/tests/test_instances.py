import itertools
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from closroute.algorithms import is_copy_link_disjoint
from closroute.core import ClosDims, Routing, is_link_disjoint, max_congestion, relabel_middles, validate_flowset
from closroute.instances import (
    NAMED_GRAPHS,
    coloring_from_routing,
    coloring_reduction,
    cross_gadget,
    gadget_properties,
    greedy_worstcase,
    mt_formula,
    mt_worstcase,
    online_sequences,
    prefix_property_p1,
    prefix_property_p2,
    random_corpus,
    random_hose_instance,
    routing_from_coloring,
    supersequence_witness,
    supersequences,
    theorem6_instance,
)
from closroute.oracle import SimpleGraph, three_edge_colorable

H = Fraction(1, 2)


@pytest.mark.parametrize("n", range(2, 7))
def test_gadget_elemental_routing(n):
    inst = cross_gadget(n)
    assert len(inst.flowset) == n * (n - 1)
    assert validate_flowset(inst.flowset) is None
    for name, (got, want) in inst.recheck().items():
        assert got == want == 1
    assert gadget_properties(inst.flowset, inst.witnesses["elemental"], n) == (True, True)


def test_gadget_rejects_small_n():
    with pytest.raises(ValueError):
        cross_gadget(1)


@given(st.permutations([1, 2, 3, 4]))
def test_relabelled_elemental_routing_still_works(perm):
    inst = cross_gadget(4)
    r = relabel_middles(inst.witnesses["elemental"], perm)
    assert max_congestion(inst.flowset, r) == 1
    assert gadget_properties(inst.flowset, r, 4) == (True, True)


def test_gadget_properties_detect_clash():
    inst = cross_gadget(3)
    # every flow on M1
    r = Routing({f.id: 1 for f in inst.flowset})
    assert gadget_properties(inst.flowset, r, 3) == (False, False)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_three_halves_instance_shape(n):
    inst = theorem6_instance(n)
    fs = inst.flowset
    assert fs.dims == ClosDims(n, n + 1)
    assert len(fs) == n * (n - 1) + n + 1
    assert validate_flowset(fs) is None
    assert max_congestion(fs, inst.witnesses["optimal"]) == Fraction(3, 2)


def test_mt_formula_values():
    assert mt_formula(4, H) == Fraction(11, 8)
    assert mt_formula(4, Fraction(1, 5)) == Fraction(8, 5)


def test_mt_worstcase_formula_reached_when_copies_divide():
    # 1 + 3*5 = 16 flows fill exactly 4 copies of I1
    inst = mt_worstcase(4, Fraction(1, 5))
    fs = inst.flowset
    assert validate_flowset(fs) is None
    assert max_congestion(fs, inst.witnesses["optimal"]) == 1
    adv = inst.witnesses["mt-adversarial"]
    assert is_copy_link_disjoint(fs, inst.meta["copies"], adv)
    assert max_congestion(fs, adv) == inst.expected["mt-formula"] == Fraction(8, 5)


@pytest.mark.parametrize("n,eps", [(2, H), (3, Fraction(1, 3)), (4, H), (4, Fraction(1, 4))])
def test_mt_worstcase_witnesses_recheck(n, eps):
    inst = mt_worstcase(n, eps)
    assert inst.recheck()["optimal"] == (1, 1)
    got, want = inst.recheck()["mt-adversarial"]
    assert got == want


def test_mt_worstcase_bad_eps():
    with pytest.raises(ValueError):
        mt_worstcase(4, Fraction(2, 5))


def test_reduction_k4_round_trip():
    g = NAMED_GRAPHS["k4"]
    inst = coloring_reduction(g)
    assert validate_flowset(inst.flowset) is None
    c = three_edge_colorable(g)
    r = routing_from_coloring(inst, c)
    assert max_congestion(inst.flowset, r) == 1
    assert coloring_from_routing(inst, r) == c


def test_reduction_all_colourings_of_k4():
    g = NAMED_GRAPHS["k4"]
    inst = coloring_reduction(g)
    seen = 0
    for combo in itertools.product((1, 2, 3), repeat=6):
        c = dict(enumerate(combo, start=1))
        try:
            r = routing_from_coloring(inst, c)
        except ValueError:
            continue
        seen += 1
        assert max_congestion(inst.flowset, r) == 1
        assert coloring_from_routing(inst, r) == c
    assert seen == 6  # K4 has exactly 3! proper 3-edge-colourings


def test_reduction_rejects_improper_colouring():
    inst = coloring_reduction(NAMED_GRAPHS["k4"])
    with pytest.raises(ValueError):
        routing_from_coloring(inst, {m: 1 for m in range(1, 7)})


def test_reduction_size():
    g = SimpleGraph(3, ((1, 2), (2, 3), (3, 1)))
    inst = coloring_reduction(g)
    assert inst.flowset.dims == ClosDims(3, 12)
    assert len(inst.flowset) == 6 * 3 + 4 * 3


@pytest.mark.parametrize("n", [2, 4, 6])
def test_online_pair(n):
    pair = online_sequences(n)
    assert pair.X.order[: pair.prefix_len] == pair.Y.order[: pair.prefix_len]
    for name in "XY":
        seq = getattr(pair, name)
        assert validate_flowset(seq.flowset) is None
        w = pair.witnesses[name]
        assert is_link_disjoint(seq.flowset, w)
    assert prefix_property_p1(pair.witnesses["X"], n)
    assert prefix_property_p2(pair.witnesses["Y"], n)


def test_online_pair_needs_even_n():
    with pytest.raises(ValueError):
        online_sequences(3)


def test_prefix_properties_are_exclusive_for_link_disjoint_routings():
    # exhaustive over X1 routings at n=4: at most one property can hold
    n = 4
    for combo in itertools.product(range(1, 5), repeat=n):
        r = Routing(dict(enumerate(combo, start=1)))
        assert not (prefix_property_p1(r, n) and prefix_property_p2(r, n))


def test_every_link_disjoint_routing_of_x_has_p1():
    pair = online_sequences(4)
    fs = pair.X.flowset
    for combo in itertools.product(range(1, 5), repeat=len(fs)):
        r = Routing(dict(enumerate(combo, start=1)))
        if is_link_disjoint(fs, r):
            assert prefix_property_p1(r, 4)


def test_every_link_disjoint_routing_of_y_has_p2():
    pair = online_sequences(2)
    fs = pair.Y.flowset
    for combo in itertools.product(range(1, 3), repeat=len(fs)):
        r = Routing(dict(enumerate(combo, start=1)))
        if is_link_disjoint(fs, r):
            assert prefix_property_p2(r, 2)


def test_supersequences():
    seqs = supersequences(4, 6)
    assert len(seqs) == 4
    for idx, seq in enumerate(seqs):
        assert validate_flowset(seq.flowset) is None
        assert is_link_disjoint(seq.flowset, supersequence_witness(4, 6, idx))
    with pytest.raises(ValueError):
        supersequences(4, 5)


def test_greedy_worstcase_layout():
    X, Y = greedy_worstcase(3, Fraction(1, 4))
    assert validate_flowset(X.flowset) is None and validate_flowset(Y.flowset) is None
    assert X.order[:4] == Y.order[:4]
    assert {f.demand for f in X.flowset} == {Fraction(3, 4), 1}


def test_random_instances_are_hose_feasible_and_seeded():
    a = random_hose_instance(ClosDims(3, 3), 9, 6, 11)
    assert a == random_hose_instance(ClosDims(3, 3), 9, 6, 11)
    for fs in random_corpus(50, 3):
        assert validate_flowset(fs) is None
        assert len(fs) <= 9 and fs.dims.n_middle <= 3 and fs.dims.n_tor <= 3


def test_mt_worstcase_every_decomposition_at_half():
    # all proper colourings of the copy graph at n=4, eps=1/2: loads are multiples of 1/2
    from closroute.algorithms import copy_graph
    from closroute.matching import is_proper

    inst = mt_worstcase(4, H)
    fs = inst.flowset
    g = copy_graph(fs, inst.meta["copies"])
    values = set()
    for combo in itertools.product(range(1, 5), repeat=len(fs)):
        c = dict(enumerate(combo, start=1))
        if is_proper(g, c, 4):
            values.add(max_congestion(fs, Routing(c)))
    assert max(values) == Fraction(3, 2)
    assert all((2 * v).denominator == 1 for v in values)
