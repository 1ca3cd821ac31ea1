"""Minimal dependency-free SVG line charts for series overlays."""

from __future__ import annotations

WIDTH = 800
HEIGHT = 400
MARGIN_LEFT = 60
MARGIN_RIGHT = 30
MARGIN_TOP = 30
MARGIN_BOTTOM = 50


def series_points(values) -> list[tuple[float, float]]:
    """Viewport coordinates for a series of values already scaled to [0, 1].

    x spreads evenly over the plot width; y is flipped (1.0 at the top
    margin). This transform is the one the chart tests recompute.
    """
    n = len(values)
    plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT
    plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM
    points = []
    for i, v in enumerate(values):
        x = MARGIN_LEFT + (plot_w * i / (n - 1) if n > 1 else plot_w / 2)
        y = MARGIN_TOP + (1.0 - float(v)) * plot_h
        points.append((x, y))
    return points


def _polyline(values, color: str, dashed: bool) -> str:
    pts = " ".join(f"{x:.3f},{y:.3f}" for x, y in series_points(values))
    dash = ' stroke-dasharray="6,4"' if dashed else ""
    return (
        f'<polyline fill="none" stroke="{color}" stroke-width="2"{dash} points="{pts}" />'
    )


def two_series_svg(
    path: str,
    values_a,
    values_b,
    label_a: str,
    label_b: str,
    title: str = "",
    x_labels: tuple[str, str] | None = None,
) -> None:
    """Write a two-line overlay chart (values pre-scaled to [0, 1])."""
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}">',
        f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white" />',
        f'<rect x="{MARGIN_LEFT}" y="{MARGIN_TOP}" '
        f'width="{WIDTH - MARGIN_LEFT - MARGIN_RIGHT}" '
        f'height="{HEIGHT - MARGIN_TOP - MARGIN_BOTTOM}" '
        'fill="none" stroke="#cccccc" />',
    ]
    if title:
        parts.append(
            f'<text x="{WIDTH / 2:.0f}" y="20" text-anchor="middle" '
            f'font-family="sans-serif" font-size="14">{title}</text>'
        )
    parts.append(_polyline(values_a, "#1f4e9c", dashed=False))
    parts.append(_polyline(values_b, "#c23b22", dashed=True))
    legend_y = HEIGHT - 18
    parts.append(
        f'<line x1="{MARGIN_LEFT}" y1="{legend_y}" x2="{MARGIN_LEFT + 30}" y2="{legend_y}" '
        'stroke="#1f4e9c" stroke-width="2" />'
    )
    parts.append(
        f'<text x="{MARGIN_LEFT + 36}" y="{legend_y + 4}" font-family="sans-serif" '
        f'font-size="12">{label_a}</text>'
    )
    mid = MARGIN_LEFT + 250
    parts.append(
        f'<line x1="{mid}" y1="{legend_y}" x2="{mid + 30}" y2="{legend_y}" '
        'stroke="#c23b22" stroke-width="2" stroke-dasharray="6,4" />'
    )
    parts.append(
        f'<text x="{mid + 36}" y="{legend_y + 4}" font-family="sans-serif" '
        f'font-size="12">{label_b}</text>'
    )
    if x_labels:
        parts.append(
            f'<text x="{MARGIN_LEFT}" y="{HEIGHT - MARGIN_BOTTOM + 16}" '
            f'font-family="sans-serif" font-size="11">{x_labels[0]}</text>'
        )
        parts.append(
            f'<text x="{WIDTH - MARGIN_RIGHT}" y="{HEIGHT - MARGIN_BOTTOM + 16}" '
            f'text-anchor="end" font-family="sans-serif" font-size="11">{x_labels[1]}</text>'
        )
    parts.append("</svg>")
    with open(path, "w", encoding="utf-8") as f:
        f.write("\n".join(parts) + "\n")
