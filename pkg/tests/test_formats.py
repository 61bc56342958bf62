from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from closroute.core import Routing
from closroute.formats import (
    ParseError,
    format_instance,
    format_rational,
    format_routing,
    instance_digest,
    parse_instance,
    parse_rational,
    parse_routing,
)
from closroute.instances import theorem6_instance

from .conftest import flowsets


def test_rational_always_has_denominator():
    assert format_rational(Fraction(1)) == "1/1"
    assert parse_rational("2/4") == Fraction(1, 2)


@pytest.mark.parametrize("bad", ["0.5", "1/0", "a/b", "1"])
def test_bad_rationals(bad):
    with pytest.raises(ParseError):
        parse_rational(bad)


@given(flowsets())
def test_instance_round_trip(fs):
    text = format_instance(fs)
    assert parse_instance(text) == fs
    assert format_instance(parse_instance(text)) == text


@given(flowsets(), st.randoms(use_true_random=False))
def test_routing_round_trip(fs, rnd):
    r = Routing({f.id: rnd.randint(1, fs.dims.n_middle) for f in fs})
    text = format_routing(r, instance_digest(fs), {"congestion": Fraction(3, 2)})
    back = parse_routing(text)
    assert back.routing == r
    assert back.expect == {"congestion": Fraction(3, 2)}
    assert back.instance_id == instance_digest(fs)


def test_comments_and_blank_lines():
    fs = parse_instance("# demo\n\nclos 2 1   # dims\nflow 1 1 1 1 1 1/2\n")
    assert len(fs) == 1 and fs.flow(1).demand == Fraction(1, 2)


def test_parse_error_carries_line_number():
    with pytest.raises(ParseError) as info:
        parse_instance("clos 2 1\nflow 1 1 1 1 1 1/2\nflow 2 1 1 1\n")
    assert info.value.line == 3


def test_duplicate_assignment_rejected():
    with pytest.raises(ParseError):
        parse_routing("routing -\nassign 1 1\nassign 1 2\n")


def test_digest_is_stable():
    a = instance_digest(theorem6_instance(3).flowset)
    assert a == instance_digest(parse_instance(format_instance(theorem6_instance(3).flowset)))
    assert a != instance_digest(theorem6_instance(2).flowset)
