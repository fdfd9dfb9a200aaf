"""Server-side SVG rendering of chart results.

Output is a standalone SVG document, deterministic for fixed inputs: fixed
canvas width, fixed margins, 24px bars, sans-serif 12px text, and all
coordinates formatted to two decimals. Countable chart marks (bars, bins,
series lines, bar segments, flow links) carry class="mark"; axes, labels,
and bands use other classes so tooling can count marks against the
underlying result.

Layout constants (documented contract): canvas width 800, margins
left 160 / right 40 / top 40 / bottom 40, bar height 24, bar gap 8.
"""

from __future__ import annotations

from xml.sax.saxutils import escape, quoteattr

WIDTH = 800
MARGIN_LEFT = 160
MARGIN_RIGHT = 40
MARGIN_TOP = 40
MARGIN_BOTTOM = 40
BAR_HEIGHT = 24
BAR_GAP = 8
PLOT_HEIGHT = 360  # vertical charts: histogram, partition, sankey


def _fmt(value: float) -> str:
    return f"{value:.2f}"


def _svg(height: float, body: list) -> str:
    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{_fmt(height)}" '
        'font-family="sans-serif" font-size="12">',
        f'<rect class="bg" x="0" y="0" width="{WIDTH}" height="{_fmt(height)}" fill="#FFFFFF"/>',
    ]
    lines.extend(body)
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def _title(text: str) -> str:
    return (
        f'<text class="title" x="{MARGIN_LEFT}" y="24" font-weight="bold">{escape(text)}</text>'
    )


def _plot_width() -> float:
    return WIDTH - MARGIN_LEFT - MARGIN_RIGHT


def render_rollup(result, title: str) -> str:
    """Horizontal bar chart: one mark rect per level, labels on the left."""
    levels = result.levels
    height = MARGIN_TOP + len(levels) * (BAR_HEIGHT + BAR_GAP) + MARGIN_BOTTOM
    max_count = max((l["count"] for l in levels), default=0) or 1
    body = [_title(title)]
    y = float(MARGIN_TOP)
    for entry in levels:
        width = _plot_width() * entry["count"] / max_count
        body.append(
            f'<rect class="mark" x="{MARGIN_LEFT}" y="{_fmt(y)}" width="{_fmt(width)}" '
            f'height="{BAR_HEIGHT}" fill={quoteattr(entry["color"])}/>'
        )
        body.append(
            f'<text class="label" x="{MARGIN_LEFT - 8}" y="{_fmt(y + BAR_HEIGHT - 7)}" '
            f'text-anchor="end">{escape(entry["level"])}</text>'
        )
        body.append(
            f'<text class="value" x="{_fmt(MARGIN_LEFT + width + 6)}" '
            f'y="{_fmt(y + BAR_HEIGHT - 7)}">{entry["count"]}</text>'
        )
        y += BAR_HEIGHT + BAR_GAP
    return _svg(height, body)


def render_histogram(result, title: str) -> str:
    """Vertical histogram: one mark rect per bin."""
    bins = result.bins
    height = MARGIN_TOP + PLOT_HEIGHT + MARGIN_BOTTOM
    body = [_title(title)]
    if bins:
        max_count = max(b["count"] for b in bins) or 1
        bin_width = _plot_width() / len(bins)
        for index, entry in enumerate(bins):
            bar_height = PLOT_HEIGHT * entry["count"] / max_count
            x = MARGIN_LEFT + index * bin_width
            y = MARGIN_TOP + PLOT_HEIGHT - bar_height
            body.append(
                f'<rect class="mark" x="{_fmt(x)}" y="{_fmt(y)}" width="{_fmt(bin_width - 1)}" '
                f'height="{_fmt(bar_height)}" fill="#59A14F"/>'
            )
            body.append(
                f'<text class="label" x="{_fmt(x)}" y="{MARGIN_TOP + PLOT_HEIGHT + 16}">'
                f"{escape(_short_number(entry['lo']))}</text>"
            )
        body.append(
            f'<text class="label" x="{_fmt(MARGIN_LEFT + len(bins) * bin_width)}" '
            f'y="{MARGIN_TOP + PLOT_HEIGHT + 16}" text-anchor="end">'
            f"{escape(_short_number(bins[-1]['hi']))}</text>"
        )
    return _svg(height, body)


def _short_number(value: float) -> str:
    return f"{value:g}"


def render_partition(result, title: str, colors: dict) -> str:
    """Multi-line chart: one mark polyline per level, optional min/max bands."""
    height = MARGIN_TOP + PLOT_HEIGHT + MARGIN_BOTTOM
    body = [_title(title)]
    buckets = sorted({p["bucket_start"] for s in result.series for p in s["points"]})
    if buckets:
        top = max(
            (p["band_max"] for s in result.series for p in s["points"]),
            default=0.0,
        ) or 1.0
        x_of = {
            bucket: MARGIN_LEFT
            + (_plot_width() * index / max(len(buckets) - 1, 1))
            for index, bucket in enumerate(buckets)
        }

        def y_of(value: float) -> float:
            return MARGIN_TOP + PLOT_HEIGHT - (PLOT_HEIGHT * value / top)

        for series in result.series:
            color = colors.get(series["level"], "#4E79A7")
            points = series["points"]
            if any(p["band_min"] != p["band_max"] for p in points):
                upper = " ".join(
                    f"{_fmt(x_of[p['bucket_start']])},{_fmt(y_of(p['band_max']))}" for p in points
                )
                lower = " ".join(
                    f"{_fmt(x_of[p['bucket_start']])},{_fmt(y_of(p['band_min']))}"
                    for p in reversed(points)
                )
                body.append(
                    f'<polygon class="band" points="{upper} {lower}" '
                    f"fill={quoteattr(color)} opacity=\"0.2\"/>"
                )
            path = " ".join(
                f"{_fmt(x_of[p['bucket_start']])},{_fmt(y_of(p['value']))}" for p in points
            )
            body.append(
                f'<polyline class="mark" points="{path}" fill="none" '
                f"stroke={quoteattr(color)} stroke-width=\"2\"/>"
            )
        body.append(
            f'<text class="label" x="{MARGIN_LEFT}" y="{MARGIN_TOP + PLOT_HEIGHT + 16}">'
            f"{buckets[0].isoformat()}</text>"
        )
        body.append(
            f'<text class="label" x="{WIDTH - MARGIN_RIGHT}" y="{MARGIN_TOP + PLOT_HEIGHT + 16}" '
            f'text-anchor="end">{buckets[-1].isoformat()}</text>'
        )
    return _svg(height, body)


def render_cross_tab(result, title: str, segment_colors: dict, percentage: bool = False) -> str:
    """Horizontal segmented bars: one mark rect per segment entry."""
    bars = result.bars
    height = MARGIN_TOP + len(bars) * (BAR_HEIGHT + BAR_GAP) + MARGIN_BOTTOM
    max_total = max((bar["total"] for bar in bars), default=0) or 1
    body = [_title(title)]
    y = float(MARGIN_TOP)
    for bar in bars:
        body.append(
            f'<text class="label" x="{MARGIN_LEFT - 8}" y="{_fmt(y + BAR_HEIGHT - 7)}" '
            f'text-anchor="end">{escape(bar["bar_level"])}</text>'
        )
        x = float(MARGIN_LEFT)
        for segment in bar["segments"]:
            if percentage:
                fraction = segment["percent"] / 100.0
            else:
                fraction = segment["count"] / max_total
            width = _plot_width() * fraction
            color = segment_colors.get(segment["segment_level"], "#BAB0AC")
            body.append(
                f'<rect class="mark" x="{_fmt(x)}" y="{_fmt(y)}" width="{_fmt(width)}" '
                f'height="{BAR_HEIGHT}" fill={quoteattr(color)}/>'
            )
            x += width
        body.append(
            f'<text class="value" x="{_fmt(x + 6)}" y="{_fmt(y + BAR_HEIGHT - 7)}">'
            f"{bar['total']}</text>"
        )
        y += BAR_HEIGHT + BAR_GAP
    return _svg(height, body)


def render_sankey(result, title: str, stage_colors: list) -> str:
    """Flow diagram: node rects per stage, one mark path per link."""
    height = MARGIN_TOP + PLOT_HEIGHT + MARGIN_BOTTOM
    body = [_title(title)]
    n_stages = len(result.stages)
    node_width = 18.0
    gap = 6.0
    span = (_plot_width() - node_width) / max(n_stages - 1, 1)

    # stack nodes per stage, heights proportional to totals
    geometry: list = []
    for stage_index, stage_nodes in enumerate(result.nodes):
        total = sum(node["total"] for node in stage_nodes) or 1
        usable = PLOT_HEIGHT - gap * max(len(stage_nodes) - 1, 0)
        x = MARGIN_LEFT + stage_index * span
        y = float(MARGIN_TOP)
        placed = {}
        for node in stage_nodes:
            node_height = usable * node["total"] / total
            placed[node["level"]] = {
                "x": x,
                "y": y,
                "height": node_height,
                "out_used": 0.0,
                "in_used": 0.0,
                "total": node["total"],
            }
            y += node_height + gap
        geometry.append(placed)

    link_lines = []
    for link in result.links:
        source = geometry[link["from_stage"]].get(link["from_level"])
        target = geometry[link["from_stage"] + 1].get(link["to_level"])
        if source is None or target is None:
            continue
        source_scale = source["height"] / source["total"] if source["total"] else 0.0
        target_scale = target["height"] / target["total"] if target["total"] else 0.0
        thickness = max(min(link["weight"] * source_scale, source["height"]), 0.5)
        y0 = source["y"] + source["out_used"] + thickness / 2
        y1 = target["y"] + target["in_used"] + (link["weight"] * target_scale) / 2
        source["out_used"] += link["weight"] * source_scale
        target["in_used"] += link["weight"] * target_scale
        x0 = source["x"] + node_width
        x1 = target["x"]
        mid = (x0 + x1) / 2
        link_lines.append(
            f'<path class="mark" d="M {_fmt(x0)} {_fmt(y0)} C {_fmt(mid)} {_fmt(y0)}, '
            f'{_fmt(mid)} {_fmt(y1)}, {_fmt(x1)} {_fmt(y1)}" fill="none" '
            f'stroke="#999999" stroke-opacity="0.5" stroke-width="{_fmt(thickness)}"/>'
        )
    body.extend(link_lines)

    for stage_index, placed in enumerate(geometry):
        colors = stage_colors[stage_index] if stage_index < len(stage_colors) else {}
        for level, node in placed.items():
            color = colors.get(level, "#4E79A7")
            body.append(
                f'<rect class="node" x="{_fmt(node["x"])}" y="{_fmt(node["y"])}" '
                f'width="{_fmt(node_width)}" height="{_fmt(node["height"])}" '
                f"fill={quoteattr(color)}/>"
            )
            anchor = "end" if stage_index == 0 else "start"
            label_x = node["x"] - 6 if stage_index == 0 else node["x"] + node_width + 6
            body.append(
                f'<text class="label" x="{_fmt(label_x)}" '
                f'y="{_fmt(node["y"] + node["height"] / 2 + 4)}" '
                f'text-anchor="{anchor}">{escape(level)}</text>'
            )
    return _svg(height, body)
