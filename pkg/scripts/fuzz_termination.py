"""Build tableaux for seeded random formulas and report their sizes."""

import argparse
import random
import statistics
import sys
import time
from pathlib import Path

from csltl.constraints import FlatSystem, load_table
from csltl.formula import show
from csltl.fuzz import random_formula
from csltl.tableau import BudgetExceeded, TableauOptions, build_tableau

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--count", type=int, default=1000)
    ap.add_argument("--seed", type=int, default=8)
    ap.add_argument("--depth", type=int, default=3)
    ap.add_argument("--size", type=int, default=5)
    ap.add_argument("--budget", type=int, default=10**6)
    args = ap.parse_args(argv)

    flat = FlatSystem()
    four = load_table(FIXTURES / "four.table")
    pools = [(flat, [flat.eq("x", 1), flat.eq("x", 2), flat.eq("y", 1), flat.prop("p")]), (four, [four.atom(n) for n in "abcd"])]
    opts = TableauOptions(node_budget=args.budget)
    rng = random.Random(args.seed)
    sizes, exceeded, worst = [], [], (0, None)
    start = time.perf_counter()
    for i in range(args.count):
        cs, pool = pools[i % 2]
        g = random_formula(rng, rng.sample(pool, rng.randint(1, len(pool))), args.depth, args.size)
        try:
            n = len(build_tableau([g], cs, opts).nodes)
        except BudgetExceeded:
            exceeded.append(g)
            continue
        sizes.append(n)
        worst = max(worst, (n, g), key=lambda t: t[0])
    elapsed = time.perf_counter() - start
    print(f"formulas={args.count} within_budget={len(sizes)} exceeded={len(exceeded)} seconds={elapsed:.1f}")
    if sizes:
        q = statistics.quantiles(sizes, n=10) if len(sizes) > 1 else [sizes[0]] * 9
        print(f"nodes: median={statistics.median(sizes):.0f} p90={q[-1]:.0f} max={worst[0]}")
        print(f"largest: {show(worst[1])}")
    for g in exceeded:
        print(f"  over budget: {show(g)}")
    return 1 if exceeded else 0


if __name__ == "__main__":
    sys.exit(main())
