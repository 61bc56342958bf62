"""Adaptive adversary and exhaustive supersequence runs for the shipped online routers.

    python scripts/online_lower_bound.py --n 4 --max-s 4 --ecmp-trials 1000
"""
import argparse
from fractions import Fraction

from closroute.online import DETERMINISTIC_ROUTERS, ECMPRouter, adversary_blocks, adversary_xy, make_router, randomized_experiment


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, default=4)
    ap.add_argument("--max-s", type=int, default=4)
    ap.add_argument("--ecmp-trials", type=int, default=1000)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    print(f"X/Y adversary, N={args.n}")
    for name in sorted(DETERMINISTIC_ROUTERS):
        out = adversary_xy(make_router(name), args.n)
        print(f"  {name:<16} chose {out.chosen}  congestion {out.final_congestion}  witness {out.opt_witness_congestion}")

    print("\nall 2^S supersequences (deterministic routers)")
    print(f"  {'router':<16}{'S':>3}{'link-disjoint':>15}{'mean':>8}{'2 - 2^-S':>10}")
    for name in sorted(DETERMINISTIC_ROUTERS):
        for s in range(1, args.max_s + 1):
            rep = randomized_experiment(lambda seed: make_router(name), args.n, s)
            bound = 2 - Fraction(1, 2**s)
            print(f"  {name:<16}{s:>3}{rep.link_disjoint_count:>15}{str(rep.mean_congestion):>8}{str(bound):>10}")

    print("\nblockwise adaptive adversary")
    for name in sorted(DETERMINISTIC_ROUTERS):
        out = adversary_blocks(make_router(name), args.n, args.max_s)
        print(f"  {name:<16} blocks {out.chosen}  congestion {out.final_congestion}")

    for s in range(1, args.max_s + 1):
        rep = randomized_experiment(ECMPRouter, args.n, s, trials=args.ecmp_trials, seed=args.seed)
        print(f"ECMP, S={s}: mean {float(rep.mean_congestion):.4f} over {rep.runs} runs, "
              f"{rep.link_disjoint_count} supersequences ever routed link-disjoint")


if __name__ == "__main__":
    main()
