"""Plain-text SVG figure emission: no plotting library involved.

Every emitter writes a standalone SVG file. Shapes carry ``class`` and
``data-*`` attributes with the underlying numbers so the figures are
machine-checkable as well as viewable.
"""

from __future__ import annotations

from pathlib import Path

from ..stats import RankSummary, histogram as bin_values, ols_slope_test

_FONT = 'font-family="Helvetica, Arial, sans-serif"'


def _escape(text: str) -> str:
    return (
        text.replace("&", "&amp;")
        .replace("<", "&lt;")
        .replace(">", "&gt;")
        .replace('"', "&quot;")
    )


def _write(path, width: int, height: int, body: list[str]) -> Path:
    path = Path(path)
    content = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        '<rect x="0" y="0" width="100%" height="100%" fill="#ffffff"/>',
        *body,
        "</svg>",
    ]
    try:
        path.write_text("\n".join(content) + "\n")
    except OSError as exc:
        raise ValueError(f"cannot write figure to {path}: {exc}") from exc
    return path


def _rank_groups(sorted_ranks: list[float], cd: float) -> list[tuple[int, int]]:
    """Maximal index intervals whose rank spread is below the critical difference."""
    k = len(sorted_ranks)
    intervals = []
    for i in range(k):
        j = i
        while j + 1 < k and sorted_ranks[j + 1] - sorted_ranks[i] < cd:
            j += 1
        if j > i:
            intervals.append((i, j))
    return [
        (i, j)
        for i, j in intervals
        if not any((p <= i and j <= q) and (p, q) != (i, j) for p, q in intervals)
    ]


def emit_cd_diagram(ranks: RankSummary, out) -> Path:
    """Critical-difference diagram: a rank axis, one tick per classifier and
    bars joining groups whose average ranks differ by less than the CD."""
    if len(ranks.classifiers) < 2:
        raise ValueError("need at least 2 classifiers")
    if ranks.critical_difference is None:
        raise ValueError("rank summary carries no critical difference")
    cd = ranks.critical_difference
    k = len(ranks.classifiers)

    width = 640
    margin = 70
    axis_y = 70.0
    scale = (width - 2 * margin) / (k - 1)

    def x_of(rank: float) -> float:
        return margin + (rank - 1.0) * scale

    order = sorted(range(k), key=lambda i: (ranks.average_ranks[i], ranks.classifiers[i]))
    sorted_ranks = [ranks.average_ranks[i] for i in order]
    groups = _rank_groups(sorted_ranks, cd)

    body = []
    # Rank axis with integer ticks.
    body.append(
        f'<line class="axis" x1="{x_of(1):.3f}" y1="{axis_y:.3f}" '
        f'x2="{x_of(k):.3f}" y2="{axis_y:.3f}" stroke="#000" stroke-width="1.5"/>'
    )
    for tick in range(1, k + 1):
        x = x_of(tick)
        body.append(
            f'<line x1="{x:.3f}" y1="{axis_y - 4:.3f}" x2="{x:.3f}" y2="{axis_y:.3f}" '
            'stroke="#000" stroke-width="1"/>'
        )
        body.append(
            f'<text x="{x:.3f}" y="{axis_y - 8:.3f}" text-anchor="middle" '
            f'font-size="11" {_FONT}>{tick}</text>'
        )
    # Critical-difference reference bar.
    body.append(
        f'<line class="cd-bar" data-cd="{cd!r}" x1="{x_of(1):.3f}" y1="30" '
        f'x2="{x_of(1 + cd):.3f}" y2="30" stroke="#000" stroke-width="2"/>'
    )
    for x in (x_of(1), x_of(1 + cd)):
        body.append(f'<line x1="{x:.3f}" y1="26" x2="{x:.3f}" y2="34" stroke="#000" stroke-width="1"/>')
    body.append(
        f'<text x="{x_of(1 + cd) + 8:.3f}" y="34" font-size="11" {_FONT}>CD = {cd:.4f}</text>'
    )
    # Group bars just below the axis, stacked to avoid overlap.
    for depth, (i, j) in enumerate(groups):
        y = axis_y + 8 + depth * 7
        body.append(
            f'<line class="group-bar" x1="{x_of(sorted_ranks[i]) - 3:.3f}" y1="{y:.3f}" '
            f'x2="{x_of(sorted_ranks[j]) + 3:.3f}" y2="{y:.3f}" '
            'stroke="#444" stroke-width="4"/>'
        )
    # Classifier ticks and labels: best half on the left, rest on the right.
    label_top = axis_y + 14 + len(groups) * 7
    left = order[: (k + 1) // 2]
    right = order[(k + 1) // 2 :]
    for side, members in (("left", left), ("right", right)):
        for row, idx in enumerate(members if side == "left" else reversed(members)):
            rank = ranks.average_ranks[idx]
            name = ranks.classifiers[idx]
            x = x_of(rank)
            y = label_top + row * 16
            label_x = margin - 8 if side == "left" else width - margin + 8
            anchor = "end" if side == "left" else "start"
            body.append(
                f'<polyline class="marker" data-rank="{rank!r}" fill="none" '
                f'points="{x:.3f},{axis_y:.3f} {x:.3f},{y:.3f} {label_x:.3f},{y:.3f}" '
                'stroke="#000" stroke-width="1"/>'
            )
            body.append(
                f'<text x="{label_x:.3f}" y="{y - 3:.3f}" text-anchor="{anchor}" '
                f'font-size="12" {_FONT}>{_escape(str(name))} ({rank:.3f})</text>'
            )
    height = int(label_top + max(len(left), len(right)) * 16 + 20)
    return _write(out, width, height, body)


def emit_histogram(values, bin_width: float, out, origin: float = 0.0) -> Path:
    """Bar chart over the half-open bins produced by the stats binning."""
    bins = bin_values(values, bin_width, origin=origin)
    width, height = 560, 320
    margin_left, margin_bottom, margin_top = 50, 40, 20
    plot_w = width - margin_left - 20
    plot_h = height - margin_top - margin_bottom
    peak = max(count for _, count in bins)
    bar_w = plot_w / len(bins)

    body = []
    for i, (edge, count) in enumerate(bins):
        bar_h = plot_h * count / peak if peak else 0.0
        x = margin_left + i * bar_w
        y = margin_top + plot_h - bar_h
        body.append(
            f'<rect class="bar" data-edge="{edge!r}" data-count="{count}" '
            f'x="{x:.3f}" y="{y:.3f}" width="{bar_w * 0.92:.3f}" height="{bar_h:.3f}" '
            'fill="#4878a8"/>'
        )
        body.append(
            f'<text x="{x:.3f}" y="{height - margin_bottom + 14:.3f}" font-size="10" '
            f'{_FONT}>{edge:g}</text>'
        )
    axis_y = margin_top + plot_h
    body.append(
        f'<line class="axis" x1="{margin_left}" y1="{axis_y:.3f}" '
        f'x2="{margin_left + plot_w}" y2="{axis_y:.3f}" stroke="#000" stroke-width="1.5"/>'
    )
    body.append(
        f'<line x1="{margin_left}" y1="{margin_top}" x2="{margin_left}" y2="{axis_y:.3f}" '
        'stroke="#000" stroke-width="1.5"/>'
    )
    body.append(
        f'<text x="{margin_left - 6}" y="{margin_top + 12}" text-anchor="end" font-size="10" '
        f'{_FONT}>{peak}</text>'
    )
    return _write(out, width, height, body)


def emit_scatter_regression(x, y, out) -> Path:
    """Scatter plot with its least-squares line overlaid."""
    xs = [float(v) for v in x]
    ys = [float(v) for v in y]
    fit = ols_slope_test(xs, ys)
    width, height = 560, 360
    margin = 50
    plot_w = width - 2 * margin
    plot_h = height - 2 * margin

    x_lo, x_hi = min(xs), max(xs)
    fitted = [fit.intercept + fit.slope * v for v in xs]
    y_lo = min(min(ys), min(fitted))
    y_hi = max(max(ys), max(fitted))
    x_span = x_hi - x_lo or 1.0
    y_span = y_hi - y_lo or 1.0

    def px(v: float) -> float:
        return margin + (v - x_lo) / x_span * plot_w

    def py(v: float) -> float:
        return margin + plot_h - (v - y_lo) / y_span * plot_h

    body = []
    body.append(
        f'<line class="axis" x1="{margin}" y1="{margin + plot_h}" '
        f'x2="{margin + plot_w}" y2="{margin + plot_h}" stroke="#000" stroke-width="1.5"/>'
    )
    body.append(
        f'<line x1="{margin}" y1="{margin}" x2="{margin}" y2="{margin + plot_h}" '
        'stroke="#000" stroke-width="1.5"/>'
    )
    body.append(
        f'<line class="fit" data-slope="{fit.slope!r}" data-intercept="{fit.intercept!r}" '
        f'data-p="{fit.p_value!r}" '
        f'x1="{px(x_lo):.3f}" y1="{py(fit.intercept + fit.slope * x_lo):.3f}" '
        f'x2="{px(x_hi):.3f}" y2="{py(fit.intercept + fit.slope * x_hi):.3f}" '
        'stroke="#b03030" stroke-width="1.5"/>'
    )
    for vx, vy in zip(xs, ys):
        body.append(
            f'<circle class="point" cx="{px(vx):.3f}" cy="{py(vy):.3f}" r="3" '
            'fill="#30508c" fill-opacity="0.8"/>'
        )
    body.append(
        f'<text x="{margin}" y="{margin - 6}" font-size="11" {_FONT}>'
        f"slope = {fit.slope:.6g}, p = {fit.p_value:.4g}</text>"
    )
    return _write(out, width, height, body)
