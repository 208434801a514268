"""Figure rendering for dual complexes (1-skeleton view)."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import networkx as nx

from .strata import StrataModel


def skeleton_graph(model: StrataModel) -> nx.MultiGraph:
    """Vertices = one-component strata, edges = double-point strata."""
    g = nx.MultiGraph()
    for s in model.strata:
        if len(s.psi) == 1:
            g.add_node(s.id, component=next(iter(s.psi)))
    for s in model.strata:
        if len(s.psi) == 2:
            a, b = sorted(s.psi)
            g.add_edge(s.faces[b], s.faces[a], key=s.id)
    return g


def render_skeleton(model: StrataModel, path: str) -> str:
    """Draw the 1-skeleton of the dual complex to an image file."""
    g = skeleton_graph(model)
    pos = nx.spring_layout(g, seed=7)
    fig, ax = plt.subplots(figsize=(6, 6))
    nx.draw_networkx_nodes(g, pos, ax=ax, node_color="#7fb3d5", node_size=900)
    nx.draw_networkx_labels(g, pos, ax=ax, font_size=9)
    seen: dict[tuple, int] = {}
    for u, v, key in g.edges(keys=True):
        pair = tuple(sorted((u, v)))
        bend = seen.get(pair, 0)
        seen[pair] = bend + 1
        rad = 0.0 if bend == 0 else 0.25 * ((bend + 1) // 2) * (-1) ** bend
        ax.annotate(
            "",
            xy=pos[v],
            xytext=pos[u],
            arrowprops={
                "arrowstyle": "-",
                "connectionstyle": f"arc3,rad={rad}",
                "color": "#555555",
            },
        )
    ax.set_title("dual complex, 1-skeleton")
    ax.set_axis_off()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path
