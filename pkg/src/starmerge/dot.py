"""Graphviz DOT text for Hasse diagrams."""

from __future__ import annotations

from typing import Mapping, Sequence


def _quote(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def lattice_dot(
    name: str,
    n_nodes: int,
    covers: Sequence[tuple[int, int]],
    *,
    node_labels: Mapping[int, str] | None = None,
    below: Mapping[int, Sequence[str]] | None = None,
    above: Mapping[int, Sequence[str]] | None = None,
    clusters: Sequence[Sequence[int]] | None = None,
) -> str:
    """Bottom-to-top digraph with one edge per covering pair.

    ``below``/``above`` become xlabels under/over the node (``rankdir=BT``
    puts larger elements higher).  Each entry of ``clusters`` is drawn as a
    filled subgraph cluster.
    """
    lines = [f"digraph {_quote(name)} {{", "  rankdir=BT;", "  node [shape=circle];"]
    in_cluster = set()
    for k, members in enumerate(clusters or ()):
        lines.append(f"  subgraph cluster_{k} {{")
        lines.append("    style=filled; color=grey90;")
        for v in members:
            lines.append(f"    n{v};")
            in_cluster.add(v)
        lines.append("  }")
    for v in range(n_nodes):
        attrs = [f"label={_quote(node_labels[v] if node_labels else '')}"]
        lo = (below or {}).get(v)
        hi = (above or {}).get(v)
        if lo or hi:
            parts = []
            if hi:
                parts.append(",".join(hi))
            if lo:
                parts.append(",".join(lo))
            attrs.append(f"xlabel={_quote(' / '.join(parts))}")
        if node_labels is None:
            attrs.append("width=0.2")
        lines.append(f"  n{v} [{', '.join(attrs)}];")
    for a, b in covers:
        lines.append(f"  n{a} -> n{b} [arrowhead=none];")
    lines.append("}")
    return "\n".join(lines) + "\n"
