"""Deterministic drawings of trapezia: SVG, DOT and PNG."""

from __future__ import annotations

from html import escape

from .bands import ALPHA_K, A_K, LENS, OMEGA_K, Q, LetterKinds, classify_figures, trace_bands
from .grid import Trapezium

COLOURS = {Q: "#c0392b", ALPHA_K: "#2471a3", OMEGA_K: "#1e8449", A_K: "#999999"}
UNIT, ROW = 36, 40


def _layout(t: Trapezium):
    width = max(len(w) for w in t.words)

    def x(path, k):
        # centre each word over the widest one
        return (k + (width - len(t.words[path])) / 2) * UNIT + UNIT

    def y(path):
        return (t.height - path) * ROW + ROW

    return width, x, y


def _lens_outline(t: Trapezium, fig, x, y):
    """Closed polygon following the alpha edges up and the q edges down."""
    pts_l = [(x(p, k), y(p)) for p, k in fig.alpha_band.crossings]
    pts_r = [(x(p, k + 1), y(p)) for p, k in fig.q_band.crossings]
    first, last = fig.q_band.first, fig.q_band.last
    bottom = (x(first[0], first[1]) + UNIT / 2, y(first[0]))
    top = (x(last[0] + 1, last[1]) + UNIT / 2, y(last[0] + 1))
    return [bottom] + pts_l + [top] + pts_r[::-1]


def render_svg(t: Trapezium, kinds: LetterKinds | None = None) -> str:
    kinds = kinds or LetterKinds()
    width, x, y = _layout(t)
    W = (width + 2) * UNIT
    H = (t.height + 2) * ROW
    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{W:.0f}" height="{H:.0f}" '
           f'viewBox="0 0 {W:.0f} {H:.0f}">']
    for i in range(t.height):
        for a, b in t.vertical_edges(i):
            out.append(f'<line x1="{x(i, a):.1f}" y1="{y(i):.1f}" x2="{x(i + 1, b):.1f}" '
                       f'y2="{y(i + 1):.1f}" stroke="#444" stroke-width="0.8"/>')
    rows = [(path, y(path), w) for path, w in enumerate(t.words)]
    if t.height == 0:
        # bottom and top coincide; draw them apart
        rows.append((0, y(0) - ROW, t.words[0]))
    for path, yy, w in rows:
        out.append(f'<line class="path" x1="{x(path, 0):.1f}" y1="{yy:.1f}" '
                   f'x2="{x(path, len(w)):.1f}" y2="{yy:.1f}" stroke="#000" stroke-width="0.5"/>')
        for k, letter in enumerate(w):
            colour = COLOURS.get(kinds(letter), "#000")
            out.append(f'<line x1="{x(path, k):.1f}" y1="{yy:.1f}" x2="{x(path, k + 1):.1f}" '
                       f'y2="{yy:.1f}" stroke="{colour}" stroke-width="2"/>')
            out.append(f'<text x="{x(path, k) + UNIT / 2:.1f}" y="{yy - 3:.1f}" '
                       f'font-size="8" text-anchor="middle">{escape(letter)}</text>')
    bands = trace_bands(t, kinds, only=(Q, ALPHA_K, OMEGA_K))
    for b in bands:
        pts = " ".join(f"{x(p, k) + UNIT / 2:.1f},{y(p):.1f}" for p, k in b.crossings)
        out.append(f'<polyline points="{pts}" fill="none" stroke="{COLOURS[b.kind]}" '
                   f'stroke-opacity="0.5" stroke-width="4"/>')
    figs = classify_figures(t, kinds, bands=[b for b in bands if b.kind in (Q, ALPHA_K)])
    for f in figs.of_kind(LENS):
        pts = " ".join(f"{px:.1f},{py:.1f}" for px, py in _lens_outline(t, f, x, y))
        out.append(f'<polygon class="lens" points="{pts}" fill="#f4d03f" fill-opacity="0.2" '
                   f'stroke="#b7950b" stroke-width="1.5"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def render_dot(t: Trapezium, kinds: LetterKinds | None = None) -> str:
    """Vertices are (path, position); edges carry their letters."""
    kinds = kinds or LetterKinds()
    out = ["digraph trapezium {", "  rankdir=BT;", "  node [shape=point];"]
    for path, w in enumerate(t.words):
        for k, letter in enumerate(w):
            colour = COLOURS.get(kinds(letter), "#000000")
            out.append(f'  "v{path}_{k}" -> "v{path}_{k + 1}" [label="{letter}", color="{colour}"];')
    for i in range(t.height):
        for a, b in t.vertical_edges(i):
            out.append(f'  "v{i}_{a}" -> "v{i + 1}_{b}" [arrowhead=none, style=dashed];')
    out.append("}")
    return "\n".join(out) + "\n"


def render_png(t: Trapezium, path, kinds: LetterKinds | None = None) -> None:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    from matplotlib.collections import LineCollection

    kinds = kinds or LetterKinds()
    width, x, y = _layout(t)
    fig, ax = plt.subplots(figsize=(min(30, max(4, width * 0.5)), min(30, max(3, t.height * 0.35))))
    verticals = [[(x(i, a), -y(i)), (x(i + 1, b), -y(i + 1))]
                 for i in range(t.height) for a, b in t.vertical_edges(i)]
    ax.add_collection(LineCollection(verticals, colors="#444", linewidths=0.5))
    segs, colours = [], []
    for p, w in enumerate(t.words):
        for k, letter in enumerate(w):
            segs.append([(x(p, k), -y(p)), (x(p, k + 1), -y(p))])
            colours.append(COLOURS.get(kinds(letter), "#000"))
    ax.add_collection(LineCollection(segs, colors=colours, linewidths=1.5))
    for b in trace_bands(t, kinds, only=(Q, ALPHA_K, OMEGA_K)):
        ax.plot([x(p, k) + UNIT / 2 for p, k in b.crossings], [-y(p) for p, _ in b.crossings],
                color=COLOURS[b.kind], lw=3, alpha=0.5)
    ax.autoscale()
    ax.set_axis_off()
    fig.savefig(path, dpi=100, metadata={"Software": None})
    plt.close(fig)
