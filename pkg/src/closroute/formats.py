"""Line-oriented text formats for instances and routings.

Instance::

    clos N R
    flow <id> <i> <s> <j> <t> <num>/<den>

Routing::

    routing <instance-id or ->
    expect <name> <num>/<den>      (optional, any number)
    assign <flow-id> <m>

Blank lines and ``#`` comments are ignored on input. Writers always emit
demands as ``num/den`` so that ``parse(format(x)) == x`` and
``format(parse(text)) == text`` for canonical text.
"""
from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Optional

from .core import ClosDims, Flow, FlowSet, Routing


class ParseError(ValueError):
    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


def format_rational(q: Fraction) -> str:
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def parse_rational(text: str, line: Optional[int] = None) -> Fraction:
    if "/" not in text:
        raise ParseError(f"expected <num>/<den>, got {text!r}", line)
    num, _, den = text.partition("/")
    try:
        n, d = int(num), int(den)
    except ValueError:
        raise ParseError(f"bad rational {text!r}", line) from None
    if d <= 0:
        raise ParseError(f"non-positive denominator in {text!r}", line)
    return Fraction(n, d)


def _content_lines(text: str):
    for no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield no, line.split()


def _int(tok: str, no: int) -> int:
    try:
        return int(tok)
    except ValueError:
        raise ParseError(f"expected integer, got {tok!r}", no) from None


def format_instance(fs: FlowSet) -> str:
    lines = [f"clos {fs.dims.n_middle} {fs.dims.n_tor}"]
    for f in fs:
        lines.append(
            f"flow {f.id} {f.in_switch} {f.src_server} {f.out_switch} {f.dst_server} {format_rational(f.demand)}"
        )
    return "\n".join(lines) + "\n"


def parse_instance(text: str) -> FlowSet:
    dims = None
    flows = []
    for no, toks in _content_lines(text):
        if dims is None:
            if toks[0] != "clos" or len(toks) != 3:
                raise ParseError("first line must be 'clos N R'", no)
            try:
                dims = ClosDims(_int(toks[1], no), _int(toks[2], no))
            except ValueError as exc:
                if isinstance(exc, ParseError):
                    raise
                raise ParseError(str(exc), no) from None
            continue
        if toks[0] != "flow" or len(toks) != 7:
            raise ParseError("expected 'flow <id> <i> <s> <j> <t> <num>/<den>'", no)
        fid, i, s, j, t = (_int(x, no) for x in toks[1:6])
        if fid != len(flows) + 1:
            raise ParseError(f"flow id {fid} out of sequence (expected {len(flows) + 1})", no)
        try:
            flow = Flow(fid, i, s, j, t, parse_rational(toks[6], no))
        except ValueError as exc:
            if isinstance(exc, ParseError):
                raise
            raise ParseError(str(exc), no) from None
        if not (1 <= i <= dims.n_tor and 1 <= j <= dims.n_tor and 1 <= s <= dims.n_middle and 1 <= t <= dims.n_middle):
            raise ParseError(f"flow {fid} endpoints outside C_{{{dims.n_middle},{dims.n_tor}}}", no)
        flows.append(flow)
    if dims is None:
        raise ParseError("empty instance file (missing 'clos N R')")
    return FlowSet(dims, tuple(flows))


def instance_digest(fs: FlowSet) -> str:
    """Short stable identifier of an instance (sha256 of its canonical text)."""
    return hashlib.sha256(format_instance(fs).encode()).hexdigest()[:16]


@dataclass
class RoutingFile:
    routing: Routing
    instance_id: str = "-"
    expect: Dict[str, Fraction] = field(default_factory=dict)


def format_routing(r: Routing, instance_id: str = "-", expect: Optional[Dict[str, Fraction]] = None) -> str:
    lines = [f"routing {instance_id}"]
    for name, val in (expect or {}).items():
        lines.append(f"expect {name} {format_rational(val)}")
    lines += [f"assign {fid} {m}" for fid, m in r.items()]
    return "\n".join(lines) + "\n"


def parse_routing(text: str) -> RoutingFile:
    header = None
    assignment: Dict[int, int] = {}
    expect: Dict[str, Fraction] = {}
    for no, toks in _content_lines(text):
        if header is None:
            if toks[0] != "routing" or len(toks) != 2:
                raise ParseError("first line must be 'routing <instance-id-or-dash>'", no)
            header = toks[1]
            continue
        if toks[0] == "expect" and len(toks) == 3:
            expect[toks[1]] = parse_rational(toks[2], no)
        elif toks[0] == "assign" and len(toks) == 3:
            fid, m = _int(toks[1], no), _int(toks[2], no)
            if fid in assignment:
                raise ParseError(f"flow {fid} assigned twice", no)
            assignment[fid] = m
        else:
            raise ParseError(f"unrecognised line {' '.join(toks)!r}", no)
    if header is None:
        raise ParseError("empty routing file (missing 'routing' header)")
    return RoutingFile(Routing(assignment), header, expect)
