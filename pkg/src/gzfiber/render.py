"""Deterministic renderings of GZ patterns: ascii, dot, tikz, matplotlib."""

from __future__ import annotations

from gzfiber.pattern import Pattern, Vertex


class RenderError(ValueError):
    pass


def _coords(p: Pattern, v: Vertex) -> tuple[float, float]:
    k, j = v
    return (j - 1) - (k - 1) / 2.0, float(k)


def render(p: Pattern, fmt: str = "ascii") -> str:
    if fmt == "ascii":
        return render_ascii(p)
    if fmt == "dot":
        return render_dot(p)
    if fmt == "tikz":
        return render_tikz(p)
    raise RenderError(f"unknown format {fmt!r} (expected ascii, dot or tikz)")


def render_ascii(p: Pattern) -> str:
    """Triangle with the top row first; '*' black, 'o' white, with -, / and
    \\ marking equality edges."""
    n1 = p.nrows
    width = 4 * n1
    grid = [[" "] * width for _ in range(2 * n1 - 1)]

    def cell(k: int, j: int) -> tuple[int, int]:
        return 2 * (n1 - k), 2 * (n1 - k) + 4 * (j - 1)

    for k in range(1, n1 + 1):
        for j in range(1, k + 1):
            r, c = cell(k, j)
            grid[r][c] = "o" if p.color((k, j)) == "white" else "*"
    for e in p.edges:
        (k1, j1), (k2, j2) = sorted(e)
        if k1 == k2:  # same row
            r, c = cell(k1, j1)
            for cc in range(c + 1, c + 4):
                grid[r][cc] = "-"
        else:  # k2 = k1 + 1; vertex (k1, j1) sits below-right of (k2, j1)
            r_lo, c_lo = cell(k1, j1)
            if j2 == j1:  # edge up-left
                grid[r_lo - 1][c_lo - 1] = "\\"
            else:  # j2 == j1 + 1: edge up-right
                grid[r_lo - 1][c_lo + 1] = "/"
    lines = ["".join(row).rstrip() for row in grid]
    return "\n".join(lines) + "\n"


def render_dot(p: Pattern) -> str:
    lines = ["graph pattern {", "  node [shape=circle, style=filled];"]
    for k in range(1, p.nrows + 1):
        for j in range(1, k + 1):
            x, y = _coords(p, (k, j))
            fill = "white" if p.color((k, j)) == "white" else "black"
            lines.append(f'  v_{k}_{j} [fillcolor={fill}, pos="{x:.2f},{y:.2f}!"];')
    for e in sorted(p.edges, key=lambda e: sorted(e)):
        (k1, j1), (k2, j2) = sorted(e)
        lines.append(f"  v_{k1}_{j1} -- v_{k2}_{j2};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def render_tikz(p: Pattern) -> str:
    lines = [
        "\\documentclass[tikz]{standalone}",
        "\\begin{document}",
        "\\begin{tikzpicture}[scale=0.8]",
    ]
    for e in sorted(p.edges, key=lambda e: sorted(e)):
        (k1, j1), (k2, j2) = sorted(e)
        x1, y1 = _coords(p, (k1, j1))
        x2, y2 = _coords(p, (k2, j2))
        lines.append(f"\\draw[thick] ({x1:.2f},{y1:.2f}) -- ({x2:.2f},{y2:.2f});")
    for k in range(1, p.nrows + 1):
        for j in range(1, k + 1):
            x, y = _coords(p, (k, j))
            fill = "white" if p.color((k, j)) == "white" else "black"
            lines.append(f"\\draw[fill={fill}] ({x:.2f},{y:.2f}) circle (2.5pt);")
    lines.append("\\end{tikzpicture}")
    lines.append("\\end{document}")
    return "\n".join(lines) + "\n"


def render_figure(p: Pattern, path: str, dpi: int = 150) -> None:
    """Draw the pattern with matplotlib and write it to ``path``."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(max(3.0, 0.7 * p.nrows), max(2.5, 0.55 * p.nrows)))
    for e in p.edges:
        (k1, j1), (k2, j2) = sorted(e)
        x1, y1 = _coords(p, (k1, j1))
        x2, y2 = _coords(p, (k2, j2))
        ax.plot([x1, x2], [y1, y2], color="black", lw=1.8, zorder=1)
    xs, ys, colors = [], [], []
    for k in range(1, p.nrows + 1):
        for j in range(1, k + 1):
            x, y = _coords(p, (k, j))
            xs.append(x)
            ys.append(y)
            colors.append("white" if p.color((k, j)) == "white" else "black")
    ax.scatter(xs, ys, s=70, c=colors, edgecolors="black", zorder=2)
    ax.set_aspect("equal")
    ax.axis("off")
    fig.tight_layout()
    fig.savefig(path, dpi=dpi)
    plt.close(fig)
