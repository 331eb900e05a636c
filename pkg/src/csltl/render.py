"""Tableau serialization: JSON and GraphViz DOT."""

from __future__ import annotations

from .tableau import Mark, Tableau

MARK_GLYPH = {Mark.CLOSED: "×", Mark.OPEN: "⊙", Mark.UNMARKED: ""}


def tableau_to_json(tab: Tableau) -> dict:
    nodes = []
    for n in tab.nodes:
        nodes.append(
            {
                "id": n.id,
                "parent": n.parent,
                "children": list(n.children),
                "label": [str(f) for f in n.label.ordered()],
                "distinguished": None if n.label.distinguished is None else str(n.label.distinguished),
                "rule": None if n.rule is None else n.rule.value,
                "mark": n.mark.value,
                "cycle_to": n.cycle_to,
            }
        )
    return {
        "verdict": tab.verdict,
        "witness": tab.witness,
        "node_count": len(tab.nodes),
        "branch_count": len(tab.leaves()),
        "nodes": nodes,
    }


def _dot_escape(s: str) -> str:
    return s.replace("\\", "\\\\").replace('"', '\\"')


def tableau_to_dot(tab: Tableau, name: str = "tableau") -> str:
    lines = [f"digraph {name} {{", "  node [shape=box, fontname=monospace];"]
    for n in tab.nodes:
        text = _dot_escape(str(n.label))
        glyph = MARK_GLYPH[n.mark]
        if glyph:
            text = f"{text}\\n{glyph}"
        lines.append(f'  n{n.id} [label="{text}"];')
    for n in tab.nodes:
        for c in n.children:
            lines.append(f'  n{n.id} -> n{c} [label="{tab.nodes[c].rule.edge}"];')
        if n.cycle_to is not None:
            lines.append(f"  n{n.id} -> n{n.cycle_to} [style=dashed];")
    lines.append("}")
    return "\n".join(lines) + "\n"
