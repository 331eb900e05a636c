"""Compare the oracle's lasso count with a brute force over store sequences."""

import argparse
import sys
from itertools import product

from csltl.constraints import FlatSystem
from csltl.oracle import count_traces


def brute_force(cs, atoms, max_prefix):
    stores = [cs.join_all(s) for k in range(len(atoms) + 1) for s in product(atoms, repeat=k)]
    stores = [s for s in dict.fromkeys(stores) if not cs.is_false(s)]
    seen = set()
    for n in range(max_prefix + 1):
        for seq in product(stores, repeat=n + 1):
            if all(cs.entails(b, a) for a, b in zip(seq, seq[1:])):
                seen.add(seq)
    return len(seen)


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("atoms", nargs="*", default=["a"], help="atoms in the flat system, e.g. x=1 p")
    ap.add_argument("--prefix", type=int, default=1)
    args = ap.parse_args(argv)
    cs = FlatSystem()
    atoms = [cs.parse_atom(a) for a in args.atoms]
    mine, brute = count_traces(cs, atoms, args.prefix, 1), brute_force(cs, atoms, args.prefix)
    print(f"atoms={args.atoms} prefix<={args.prefix} enumerator={mine} brute_force={brute}")
    return 0 if mine == brute else 1


if __name__ == "__main__":
    sys.exit(main())
