"""Differential check of the tableau against the bounded lasso oracle.

Sat verdicts are confirmed by evaluating the extracted model; Unsat
verdicts by exhaustive search over the oracle's bounded lassos.
"""

import argparse
import random
import sys
import time
from pathlib import Path

from csltl.constraints import FlatSystem, load_table
from csltl.formula import show
from csltl.fuzz import random_set
from csltl.oracle import OracleBounds, SatWitness, evaluate_all, oracle_sat, relevant_atoms
from csltl.tableau import check_sat

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--cases", type=int, default=400)
    ap.add_argument("--seed", type=int, default=6)
    ap.add_argument("--depth", type=int, default=3, help="maximum temporal depth")
    ap.add_argument("--prefix", type=int, default=4, help="oracle prefix bound")
    ap.add_argument("--cycle", type=int, default=3, help="oracle cycle bound")
    args = ap.parse_args(argv)

    flat = FlatSystem()
    four = load_table(FIXTURES / "four.table")
    pools = [(flat, [flat.eq("x", 1), flat.eq("x", 2), flat.eq("y", 1)]), (four, [four.atom(n) for n in "abcd"])]
    bounds = OracleBounds(args.prefix, args.cycle)
    rng = random.Random(args.seed)
    n_sat, bad = 0, []
    start = time.perf_counter()
    for i in range(args.cases):
        cs, pool = pools[0] if i % 4 == 0 else pools[1]
        atoms = rng.sample(pool, rng.randint(2, 3))
        fs = random_set(rng, atoms, args.depth)
        res = check_sat(fs, cs)
        if res.satisfiable:
            n_sat += 1
            if not evaluate_all(res.model, fs, cs):
                bad.append(("model fails", fs))
        elif isinstance(oracle_sat(fs, cs, relevant_atoms(fs), bounds), SatWitness):
            bad.append(("oracle finds a model", fs))
    elapsed = time.perf_counter() - start
    print(f"cases={args.cases} sat={n_sat} unsat={args.cases - n_sat} disagreements={len(bad)} seconds={elapsed:.2f}")
    for why, fs in bad:
        print(f"  {why}: {', '.join(show(g) for g in fs)}")
    return 1 if bad else 0


if __name__ == "__main__":
    sys.exit(main())
