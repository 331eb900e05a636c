"""Empirical check that every tableau rule preserves satisfiability.

For random labels the bounded oracle decides the parent and each child
set; a rule is violated when the parent's answer differs from the
disjunction of its children's answers.
"""

import argparse
import random
import sys
from collections import Counter
from pathlib import Path

from csltl.constraints import load_table
from csltl.formula import Atom, Kind, Next, Not, Until, classify, is_elementary
from csltl.fuzz import random_formula
from csltl.oracle import OracleBounds, SatWitness, oracle_sat
from csltl.tableau import alpha_rule, apply_alpha, apply_beta, beta_rule, is_inconsistent, make_label, next_label

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def elementary(rng, atoms):
    k = rng.random()
    if k < 0.3:
        return Atom(rng.choice(atoms))
    if k < 0.45:
        return Not(Atom(rng.choice(atoms)))
    g = random_formula(rng, atoms, 1, 2)
    return Next(g) if k < 0.8 else Not(Next(g))


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--labels", type=int, default=500)
    ap.add_argument("--seed", type=int, default=5)
    ap.add_argument("--prefix", type=int, default=4)
    ap.add_argument("--cycle", type=int, default=3)
    args = ap.parse_args(argv)

    cs = load_table(FIXTURES / "four.table")
    pool = [cs.atom(n) for n in "abcd"]
    bounds = OracleBounds(args.prefix, args.cycle)
    rng = random.Random(args.seed)
    counts, violations = Counter(), []

    def sat(label, atoms):
        return isinstance(oracle_sat(label.formulas, cs, atoms, bounds), SatWitness)

    def record(name, label, parent, children):
        counts[name] += 1
        if parent != children:
            violations.append((name, label))

    for i in range(args.labels):
        atoms = rng.sample(pool, 2)
        n = rng.randint(1, 5)
        fs = [elementary(rng, atoms) if i % 3 == 0 else random_formula(rng, atoms, 2, 3) for _ in range(n)]
        label = make_label(fs)
        s = sat(label, atoms)
        for g in label.ordered():
            kind = classify(g)
            if kind is Kind.ALPHA:
                record(alpha_rule(g).value, label, s, sat(apply_alpha(label, g), atoms))
            elif kind is Kind.BETA:
                b1, b2 = apply_beta(label, g)
                record(beta_rule(g).value, label, s, sat(b1, atoms) or sat(b2, atoms))
                if isinstance(g, Until):
                    b1, b2 = apply_beta(label.with_distinguished(g), g, use_context=True)
                    record("R6", label, s, sat(b1, atoms) or sat(b2, atoms))
        if all(is_elementary(g) for g in label.formulas) and not is_inconsistent(label, cs):
            record("next", label, s, sat(next_label(label, cs), atoms))

    print("applications: " + ", ".join(f"{k}={v}" for k, v in sorted(counts.items())))
    print(f"violations: {len(violations)}")
    for name, label in violations:
        print(f"  {name}: {label}")
    return 1 if violations else 0


if __name__ == "__main__":
    sys.exit(main())
