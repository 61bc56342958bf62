"""Command-line workbench.

Subcommands: gen, route, opt, verify, adversary, bench. Every report is
printed as text, or with ``--json`` as one JSON object per line. Rationals are
always written as ``num/den``.

Exit codes: 0 success, 1 verification failure or violation, 2 usage or parse
error.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction
from pathlib import Path
from typing import Dict, List, Optional

from . import instances as inst
from .algorithms import ALGORITHMS, TIE_BREAKS, AlgorithmConfig, route
from .core import (
    ClosDims,
    FlowSet,
    RoutingError,
    check_routing,
    congestion,
    is_link_disjoint,
    max_congestion,
    validate_flowset,
)
from .formats import (
    ParseError,
    format_instance,
    format_rational,
    format_routing,
    instance_digest,
    parse_instance,
    parse_rational,
    parse_routing,
)
from .online import DETERMINISTIC_ROUTERS, adversary_blocks, adversary_xy, make_router
from .oracle import BUDGET_ENV, BudgetExceeded, exact_opt

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
FAMILIES = ("cross-gadget", "theorem6", "mt-worstcase", "reduction", "online-xy", "supersequences", "random")


class UsageError(Exception):
    pass


def _q(x: Optional[Fraction]) -> Optional[str]:
    return None if x is None else format_rational(x)


def _emit(args, record: dict, text_lines: List[str]) -> None:
    if args.json:
        print(json.dumps(record, sort_keys=True))
    else:
        print("\n".join(text_lines))


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _load_instance(path: str) -> FlowSet:
    return parse_instance(_read(path))


def _link_table(fs, r) -> List[dict]:
    rep = congestion(fs, r)
    rows = [{"link": f"I{i}-M{m}", "load": _q(v)} for (i, m), v in sorted(rep.up_links.items()) if v]
    rows += [{"link": f"M{m}-O{j}", "load": _q(v)} for (m, j), v in sorted(rep.down_links.items()) if v]
    return rows


# --- gen ---------------------------------------------------------------------


def _need(args, name):
    val = getattr(args, name)
    if val is None:
        raise UsageError(f"--family {args.family} needs --{name.replace('_', '-')}")
    return val


def _generate(args) -> Dict[str, inst.NamedInstance]:
    """Family -> {file stem suffix: instance}."""
    fam = args.family
    try:
        if fam == "cross-gadget":
            return {"": inst.cross_gadget(_need(args, "n"))}
        if fam == "theorem6":
            return {"": inst.theorem6_instance(_need(args, "n"))}
        if fam == "mt-worstcase":
            return {"": inst.mt_worstcase(_need(args, "n"), parse_rational(_need(args, "eps")))}
        if fam == "reduction":
            name = _need(args, "graph")
            if name not in inst.NAMED_GRAPHS:
                raise UsageError(f"unknown graph {name!r}; choose from {sorted(inst.NAMED_GRAPHS)}")
            return {"": inst.coloring_reduction(inst.NAMED_GRAPHS[name])}
        if fam == "online-xy":
            pair = inst.online_sequences(_need(args, "n"))
            return {
                f"-{k}": inst.NamedInstance(f"online-{k}", seq.flowset, {"optimal": pair.witnesses[k]}, {"optimal": Fraction(1)})
                for k, seq in (("X", pair.X), ("Y", pair.Y))
            }
        if fam == "supersequences":
            n, s = _need(args, "n"), _need(args, "s")
            out = {}
            for idx, seq in enumerate(inst.supersequences(n, 3 * s)):
                bits = format(idx, f"0{s}b")[::-1]
                w = inst.supersequence_witness(n, 3 * s, idx)
                out[f"-{bits}"] = inst.NamedInstance(f"super-{bits}", seq.flowset, {"optimal": w}, {"optimal": Fraction(1)})
            return out
        if fam == "random":
            seed = _need(args, "seed")
            dims = ClosDims(args.n or 3, args.r or 3)
            fs = inst.random_hose_instance(dims, args.flows, args.max_den, seed)
            return {"": inst.NamedInstance("random", fs)}
    except ParseError:
        raise
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    raise UsageError(f"unknown family {fam!r}")


def cmd_gen(args) -> int:
    generated = _generate(args)
    if args.out is None:
        for suffix, ni in generated.items():
            if len(generated) > 1:
                print(f"# {ni.name}")
            sys.stdout.write(format_instance(ni.flowset))
        return EXIT_OK
    written = []
    for suffix, ni in generated.items():
        stem = f"{args.out}{suffix}"
        Path(f"{stem}.inst").write_text(format_instance(ni.flowset))
        written.append(f"{stem}.inst")
        digest = instance_digest(ni.flowset)
        for wname, r in ni.witnesses.items():
            expect = {"congestion": ni.expected[wname]} if wname in ni.expected else None
            Path(f"{stem}.{wname}.route").write_text(format_routing(r, digest, expect))
            written.append(f"{stem}.{wname}.route")
    _emit(args, {"cmd": "gen", "family": args.family, "files": written}, written)
    return EXIT_OK


# --- route / opt ---------------------------------------------------------------


def _report(args, cmd, fs, r, extra: dict, started: float) -> dict:
    c = max_congestion(fs, r)
    rec = {
        "cmd": cmd,
        "digest": instance_digest(fs),
        "congestion": _q(c),
        "link_disjoint": is_link_disjoint(fs, r),
        "links": _link_table(fs, r),
        **extra,
    }
    rec["wall_seconds"] = round(time.perf_counter() - started, 6)
    return rec


def _text(rec: dict) -> List[str]:
    lines = []
    for k, v in rec.items():
        if k in ("links", "routing"):
            continue
        if isinstance(v, dict):
            v = " ".join(f"{a}={b}" for a, b in v.items())
        lines.append(f"{k}: {v}")
    lines += [f"  {row['link']} {row['load']}" for row in rec.get("links", [])]
    return lines


def cmd_route(args) -> int:
    fs = _load_instance(args.instance)
    violation = validate_flowset(fs)
    if violation is not None:
        print(f"error: {violation}", file=sys.stderr)
        return EXIT_FAIL
    if args.algorithm == "ecmp" and args.seed is None:
        raise UsageError("ecmp needs --seed")
    try:
        cfg = AlgorithmConfig(p=parse_rational(args.p), q=args.q, tie_break=args.tie_break, rng_seed=args.seed or 0)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    started = time.perf_counter()
    r = route(args.algorithm, fs, cfg)
    extra = {"algorithm": args.algorithm, "config": {"p": _q(cfg.p), "q": cfg.q, "tie_break": cfg.tie_break, "seed": args.seed}}
    if args.with_opt:
        try:
            res = exact_opt(fs)
        except BudgetExceeded as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_FAIL
        extra["opt"] = _q(res.opt)
        extra["ratio"] = _q(max_congestion(fs, r) / res.opt) if res.opt else None
    if args.out:
        Path(args.out).write_text(format_routing(r, instance_digest(fs)))
    rec = _report(args, "route", fs, r, extra, started)
    _emit(args, rec, _text(rec))
    return EXIT_OK


def cmd_opt(args) -> int:
    fs = _load_instance(args.instance)
    started = time.perf_counter()
    try:
        res = exact_opt(fs, args.budget)
    except BudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    if args.out:
        Path(args.out).write_text(format_routing(res.witness, instance_digest(fs), {"congestion": res.opt}))
    rec = _report(args, "opt", fs, res.witness, {"opt": _q(res.opt), "nodes": res.nodes_explored}, started)
    _emit(args, rec, _text(rec))
    return EXIT_OK


# --- verify ------------------------------------------------------------------


def cmd_verify(args) -> int:
    fs = _load_instance(args.instance)
    rf = parse_routing(_read(args.routing))
    started = time.perf_counter()
    try:
        check_routing(fs, rf.routing)
    except RoutingError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    digest = instance_digest(fs)
    c = max_congestion(fs, rf.routing)
    mismatches = []
    if rf.instance_id not in ("-", digest):
        mismatches.append(f"routing is for instance {rf.instance_id}, not {digest}")
    for name, val in rf.expect.items():
        if name == "congestion" and val != c:
            mismatches.append(f"expected congestion {_q(val)}, recomputed {_q(c)}")
    hose = validate_flowset(fs)
    rec = _report(args, "verify", fs, rf.routing, {"hose_violation": None if hose is None else str(hose), "mismatches": mismatches, "ok": not mismatches}, started)
    _emit(args, rec, _text(rec))
    return EXIT_FAIL if mismatches else EXIT_OK


# --- adversary -------------------------------------------------------------------


def cmd_adversary(args) -> int:
    if args.router == "ecmp" and args.seed is None:
        raise UsageError("the ecmp router needs --seed")
    try:
        router = make_router(args.router, args.seed)
        if args.mode == "xy":
            out = adversary_xy(router, args.n)
        else:
            out = adversary_blocks(router, args.n, args.s)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    fs = out.chosen_sequence.flowset
    rec = {
        "cmd": "adversary",
        "router": args.router,
        "mode": args.mode,
        "n": args.n,
        "chosen": out.chosen,
        "digest": instance_digest(fs),
        "congestion": _q(out.final_congestion),
        "witness_congestion": _q(out.opt_witness_congestion),
        "ratio": _q(out.final_congestion / out.opt_witness_congestion),
        "routing": {str(k): m for k, m in out.routing.items()},
    }
    lines = _text(rec) + ["routing: " + " ".join(f"{k}->{m}" for k, m in out.routing.items())]
    _emit(args, rec, lines)
    return EXIT_OK


# --- bench -------------------------------------------------------------------


def cmd_bench(args) -> int:
    algos = [a for a in args.algorithms.split(",") if a]
    for a in algos:
        if a not in ALGORITHMS:
            raise UsageError(f"unknown algorithm {a!r}; choose from {ALGORITHMS}")
    corpus = list(inst.random_corpus(args.count, args.seed, args.n, args.r, args.flows))
    stats = {a: {"max": None, "sum": Fraction(0), "max_ratio": None, "runs": 0} for a in algos}
    skipped = 0
    for k, fs in enumerate(corpus):
        opt = None
        if args.with_opt:
            try:
                opt = exact_opt(fs).opt
            except BudgetExceeded:
                skipped += 1
                continue
        for a in algos:
            c = max_congestion(fs, route(a, fs, AlgorithmConfig(rng_seed=args.seed * 1_000_003 + k)))
            st = stats[a]
            st["runs"] += 1
            st["sum"] += c
            st["max"] = c if st["max"] is None else max(st["max"], c)
            if opt:
                ratio = c / opt
                st["max_ratio"] = ratio if st["max_ratio"] is None else max(st["max_ratio"], ratio)
    rows = []
    for a in algos:
        st = stats[a]
        rows.append({
            "cmd": "bench",
            "algorithm": a,
            "instances": st["runs"],
            "max_congestion": _q(st["max"]),
            "mean_congestion": _q(st["sum"] / st["runs"]) if st["runs"] else None,
            "max_ratio": _q(st["max_ratio"]),
        })
    summary = {"cmd": "bench", "corpus": len(corpus), "skipped_budget": skipped, "seed": args.seed}
    if args.json:
        for row in rows + [summary]:
            print(json.dumps(row, sort_keys=True))
    else:
        print(f"{'algorithm':<16} {'n':>5} {'max':>8} {'mean':>10} {'max ratio':>10}")
        for row in rows:
            print(f"{row['algorithm']:<16} {row['instances']:>5} {row['max_congestion'] or '-':>8} "
                  f"{row['mean_congestion'] or '-':>10} {row['max_ratio'] or '-':>10}")
        print(f"corpus {len(corpus)}, skipped (oracle budget) {skipped}")
    return EXIT_OK


# --- entry point -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="closroute", description="Minimum-congestion routing in Clos networks.")
    ap.add_argument("--json", action="store_true", help="line-delimited JSON output")
    sub = ap.add_subparsers(dest="cmd", required=True)

    g = sub.add_parser("gen", help="generate an instance family")
    g.add_argument("--family", required=True, choices=FAMILIES)
    g.add_argument("--n", type=int)
    g.add_argument("--r", type=int)
    g.add_argument("--s", type=int)
    g.add_argument("--eps")
    g.add_argument("--graph")
    g.add_argument("--flows", type=int, default=9)
    g.add_argument("--max-den", type=int, default=4)
    g.add_argument("--seed", type=int)
    g.add_argument("--out", help="file stem; writes <out>.inst and <out>.<witness>.route")
    g.set_defaults(func=cmd_gen)

    r = sub.add_parser("route", help="route an instance file")
    r.add_argument("instance")
    r.add_argument("--algorithm", "-a", default="two-phase", choices=ALGORITHMS)
    r.add_argument("--p", default="9/5")
    r.add_argument("--q", type=int, default=3)
    r.add_argument("--tie-break", default="lowest", choices=TIE_BREAKS)
    r.add_argument("--seed", type=int)
    r.add_argument("--with-opt", action="store_true", help="also run the exact oracle and report the ratio")
    r.add_argument("--out")
    r.set_defaults(func=cmd_route)

    o = sub.add_parser("opt", help=f"exact optimum (node budget from ${BUDGET_ENV})")
    o.add_argument("instance")
    o.add_argument("--budget", type=int)
    o.add_argument("--out")
    o.set_defaults(func=cmd_opt)

    v = sub.add_parser("verify", help="recompute a routing's congestion")
    v.add_argument("instance")
    v.add_argument("routing")
    v.set_defaults(func=cmd_verify)

    a = sub.add_parser("adversary", help="run the online adversary against a router")
    a.add_argument("--router", required=True, choices=sorted(DETERMINISTIC_ROUTERS) + ["ecmp"])
    a.add_argument("--n", type=int, default=4)
    a.add_argument("--mode", choices=("xy", "super"), default="xy")
    a.add_argument("--s", type=int, default=2)
    a.add_argument("--seed", type=int)
    a.set_defaults(func=cmd_adversary)

    b = sub.add_parser("bench", help="random-corpus comparison")
    b.add_argument("--count", type=int, default=100)
    b.add_argument("--seed", type=int, required=True)
    b.add_argument("--n", type=int, default=3)
    b.add_argument("--r", type=int, default=3)
    b.add_argument("--flows", type=int, default=9)
    b.add_argument("--algorithms", default=",".join(ALGORITHMS))
    b.add_argument("--with-opt", action="store_true")
    b.set_defaults(func=cmd_bench)

    # allow --json after the subcommand too
    for p in (g, r, o, v, a, b):
        p.add_argument("--json", action="store_true", default=argparse.SUPPRESS)
    return ap


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, ParseError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
