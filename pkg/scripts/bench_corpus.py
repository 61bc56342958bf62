"""Ratio table of every algorithm against the exact optimum on a random corpus.

    python scripts/bench_corpus.py --count 1000 --seed 2024
"""
import argparse
import time
from dataclasses import dataclass
from fractions import Fraction

from closroute.algorithms import ALGORITHMS, AlgorithmConfig, route
from closroute.core import max_congestion
from closroute.instances import random_corpus
from closroute.oracle import BudgetExceeded, exact_opt


@dataclass
class BenchConfig:
    count: int = 1000
    seed: int = 2024
    max_n: int = 3
    max_r: int = 3
    max_flows: int = 9


def main():
    ap = argparse.ArgumentParser()
    for name, default in vars(BenchConfig()).items():
        ap.add_argument(f"--{name.replace('_', '-')}", type=int, default=default)
    cfg = BenchConfig(**vars(ap.parse_args()))

    t0 = time.perf_counter()
    worst = {a: Fraction(0) for a in ALGORITHMS}
    total = {a: Fraction(0) for a in ALGORITHMS}
    done = skipped = 0
    for k, fs in enumerate(random_corpus(cfg.count, cfg.seed, cfg.max_n, cfg.max_r, cfg.max_flows)):
        try:
            opt = exact_opt(fs).opt
        except BudgetExceeded:
            skipped += 1
            continue
        if opt == 0:
            continue
        done += 1
        for a in ALGORITHMS:
            ratio = max_congestion(fs, route(a, fs, AlgorithmConfig(rng_seed=k))) / opt
            worst[a] = max(worst[a], ratio)
            total[a] += ratio

    print(f"{done} instances with OPT > 0 ({skipped} over oracle budget), {time.perf_counter() - t0:.1f}s")
    print(f"{'algorithm':<16}{'max ratio':>12}{'mean ratio':>14}")
    for a in ALGORITHMS:
        mean = total[a] / done if done else Fraction(0)
        print(f"{a:<16}{str(worst[a]):>12}{float(mean):>14.4f}")


if __name__ == "__main__":
    main()
