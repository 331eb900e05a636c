"""Write GraphViz DOT files for the two worked tableaux of the running example."""

import argparse
import sys
from pathlib import Path

from csltl.constraints import FlatSystem
from csltl.parsing import parse_formula
from csltl.render import tableau_to_dot
from csltl.tableau import build_tableau

PHI_EVENTUALLY = "((`y=1` & X `x=5` & X F `y=1`) | (~`y=1` & X `y=1`))"
PHI_ALWAYS = "((`y=1` & X `x=5` & X G `y=1`) | (~`y=1` & X `y=1`))"
ROOTS = {
    "closed": f"(E x. {PHI_EVENTUALLY}) & G ~`y=1`",
    "open": f"(E x. {PHI_ALWAYS}) & F ~`y=1`",
}


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", type=Path, default=Path("worked_tableaux"))
    args = ap.parse_args(argv)
    cs = FlatSystem()
    args.out.mkdir(parents=True, exist_ok=True)
    for name, text in ROOTS.items():
        tab = build_tableau([parse_formula(text, cs)], cs)
        path = args.out / f"{name}.dot"
        path.write_text(tableau_to_dot(tab, name), encoding="utf-8")
        print(f"{path}: {tab.verdict}, {len(tab.nodes)} nodes, {len(tab.leaves())} leaves")
    return 0


if __name__ == "__main__":
    sys.exit(main())
