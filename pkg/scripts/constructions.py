"""Recompute every hand-built construction and print what each witness achieves.

    python scripts/constructions.py
"""
from fractions import Fraction

from closroute.algorithms import AlgorithmConfig, run_two_phase, sorted_greedy, unsorted_greedy
from closroute.core import max_congestion
from closroute.instances import (
    NAMED_GRAPHS,
    admission_example,
    coloring_reduction,
    cross_gadget,
    greedy_worstcase,
    mt_worstcase,
    theorem6_instance,
)
from closroute.oracle import exact_opt, three_edge_colorable


def main():
    print("cross gadget")
    for n in range(2, 7):
        inst = cross_gadget(n)
        print(f"  n={n}: {len(inst.flowset)} flows, elemental congestion {inst.recheck()['elemental'][0]}")

    print("3/2 instance")
    for n in (2, 3, 4):
        inst = theorem6_instance(n)
        opt = exact_opt(inst.flowset).opt if n <= 3 else "-"
        two = max_congestion(inst.flowset, run_two_phase(inst.flowset).routing)
        print(f"  n={n}: witness {inst.recheck()['optimal'][0]}, oracle {opt}, two-phase {two}")

    print("Melen-Turner worst case (adversarial decomposition vs 2 - eps - (1-eps)/N)")
    for n, eps in ((2, Fraction(1, 2)), (4, Fraction(1, 2)), (4, Fraction(1, 5)), (3, Fraction(1, 4)), (5, Fraction(1, 6))):
        inst = mt_worstcase(n, eps)
        print(f"  n={n} eps={eps}: copies {inst.meta['k_copies']}, adversarial "
              f"{inst.recheck()['mt-adversarial'][0]}, formula {inst.expected['mt-formula']}")

    print("X/Y family with demands 1 - eps then 1 (eps = 1/4)")
    for n in (2, 3, 4, 6):
        X, Y = greedy_worstcase(n, Fraction(1, 4))
        row = []
        for label, seq in (("X", X), ("Y", Y)):
            fs = seq.flowset
            row.append(f"{label}: sorted {max_congestion(fs, sorted_greedy(fs))}, "
                       f"arrival order {max_congestion(fs, unsorted_greedy(fs, seq.order))}")
        print(f"  n={n}: " + "; ".join(row))

    print("worked admission example (p = 5/3)")
    inst = admission_example()
    for tb in ("lowest", "highest"):
        res = run_two_phase(inst.flowset, AlgorithmConfig(p=Fraction(5, 3), tie_break=tb))
        print(f"  tie-break {tb}: accepted {sorted(res.accepted)}, f9 proposed copies "
              f"{res.state.proposed[9]}, routed to M{res.routing[9]}")

    print("3-edge-colouring reduction")
    for name, g in NAMED_GRAPHS.items():
        red = coloring_reduction(g)
        c = max_congestion(red.flowset, run_two_phase(red.flowset).routing)
        print(f"  {name}: colourable {three_edge_colorable(g) is not None}, "
              f"{len(red.flowset)} flows in C_{{3,{red.flowset.dims.n_tor}}}, two-phase {c}")


if __name__ == "__main__":
    main()
