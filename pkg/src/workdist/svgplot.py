"""Hand-emitted SVG figures (plain XML shapes, no plotting dependency).

Output is deterministic: fixed canvas geometry, fixed 12-significant-digit
float formatting, no timestamps.
"""

WIDTH = 640
HEIGHT = 440
MARGIN_L = 64
MARGIN_R = 20
MARGIN_T = 28
MARGIN_B = 48

LINE_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd")

# dark-blue -> yellow ramp for heatmaps
_RAMP = ((68, 1, 84), (59, 82, 139), (33, 145, 140), (94, 201, 98), (253, 231, 37))


def fmt(x):
    """Locale-independent float at 12 significant digits; -0 normalized."""
    if x == 0:
        x = 0.0
    s = f"{x:.12g}"
    return "0" if s == "-0" else s


def _ticks(lo, hi, count=5):
    return [lo + (hi - lo) * i / (count - 1) for i in range(count)]


def _axes(lo_x, hi_x, lo_y, hi_y, xlabel, ylabel, title):
    px0, px1 = MARGIN_L, WIDTH - MARGIN_R
    py0, py1 = HEIGHT - MARGIN_B, MARGIN_T

    def sx(x):
        return px0 + (x - lo_x) / (hi_x - lo_x) * (px1 - px0)

    def sy(y):
        return py0 + (y - lo_y) / (hi_y - lo_y) * (py1 - py0)

    parts = [f'<rect x="{px0}" y="{py1}" width="{px1 - px0}" height="{py0 - py1}" '
             'fill="none" stroke="#333" stroke-width="1"/>']
    for t in _ticks(lo_x, hi_x):
        x = fmt(sx(t))
        parts.append(f'<line x1="{x}" y1="{py0}" x2="{x}" y2="{py0 + 5}" stroke="#333"/>')
        parts.append(f'<text x="{x}" y="{py0 + 18}" font-size="11" text-anchor="middle" '
                     f'font-family="monospace">{t:.4g}</text>')
    for t in _ticks(lo_y, hi_y):
        y = fmt(sy(t))
        parts.append(f'<line x1="{px0 - 5}" y1="{y}" x2="{px0}" y2="{y}" stroke="#333"/>')
        parts.append(f'<text x="{px0 - 8}" y="{y}" font-size="11" text-anchor="end" '
                     f'dominant-baseline="middle" font-family="monospace">{t:.4g}</text>')
    parts.append(f'<text x="{(px0 + px1) // 2}" y="{HEIGHT - 10}" font-size="12" '
                 f'text-anchor="middle" font-family="monospace">{xlabel}</text>')
    parts.append(f'<text x="16" y="{(py0 + py1) // 2}" font-size="12" text-anchor="middle" '
                 f'font-family="monospace" transform="rotate(-90 16 {(py0 + py1) // 2})">'
                 f'{ylabel}</text>')
    parts.append(f'<text x="{(px0 + px1) // 2}" y="18" font-size="13" text-anchor="middle" '
                 f'font-family="monospace">{title}</text>')
    return parts, sx, sy


def _document(parts):
    body = "\n".join(parts)
    return (f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
            f'viewBox="0 0 {WIDTH} {HEIGHT}">\n<rect width="{WIDTH}" height="{HEIGHT}" '
            f'fill="white"/>\n{body}\n</svg>\n')


def _padded_range(values, pad_frac=0.05):
    lo, hi = float(min(values)), float(max(values))
    if hi == lo:
        hi = lo + 1.0
    pad = (hi - lo) * pad_frac
    return lo - pad, hi + pad


def line_plot(xs, series, labels, title, xlabel, ylabel):
    """Polyline plot of one or more series sharing the x grid."""
    all_y = [y for ys in series for y in ys]
    lo_x, hi_x = float(xs[0]), float(xs[-1])
    lo_y, hi_y = _padded_range(all_y)
    parts, sx, sy = _axes(lo_x, hi_x, lo_y, hi_y, xlabel, ylabel, title)
    for idx, ys in enumerate(series):
        color = LINE_COLORS[idx % len(LINE_COLORS)]
        pts = " ".join(f"{fmt(sx(x))},{fmt(sy(y))}" for x, y in zip(xs, ys))
        parts.append(f'<polyline points="{pts}" fill="none" stroke="{color}" '
                     'stroke-width="1.5"/>')
        parts.append(f'<text x="{WIDTH - MARGIN_R - 8}" y="{MARGIN_T + 16 + 14 * idx}" '
                     f'font-size="11" text-anchor="end" fill="{color}" '
                     f'font-family="monospace">{labels[idx]}</text>')
    return _document(parts)


def stem_plot(xs, heights, title, xlabel, ylabel):
    """Stem/bar chart for atomic distributions (signed heights)."""
    lo_x, hi_x = _padded_range(list(xs) + [0.0], 0.15)
    lo_y, hi_y = _padded_range(list(heights) + [0.0], 0.1)
    parts, sx, sy = _axes(lo_x, hi_x, lo_y, hi_y, xlabel, ylabel, title)
    y0 = fmt(sy(0.0))
    parts.append(f'<line x1="{MARGIN_L}" y1="{y0}" x2="{WIDTH - MARGIN_R}" y2="{y0}" '
                 'stroke="#999" stroke-dasharray="4 3"/>')
    for x, h in zip(xs, heights):
        color = LINE_COLORS[0] if h >= 0 else LINE_COLORS[1]
        px = fmt(sx(x))
        parts.append(f'<line x1="{px}" y1="{y0}" x2="{px}" y2="{fmt(sy(h))}" '
                     f'stroke="{color}" stroke-width="4"/>')
        parts.append(f'<circle cx="{px}" cy="{fmt(sy(h))}" r="4" fill="{color}"/>')
    return _document(parts)


def _ramp_color(frac):
    frac = min(1.0, max(0.0, frac))
    pos = frac * (len(_RAMP) - 1)
    i = min(int(pos), len(_RAMP) - 2)
    t = pos - i
    rgb = [round(a + (b - a) * t) for a, b in zip(_RAMP[i], _RAMP[i + 1])]
    return "#{:02x}{:02x}{:02x}".format(*rgb)


def heatmap(re_axis, im_axis, values, title, xlabel, ylabel):
    """Cell heatmap of values[a, b] at (re_axis[a], im_axis[b])."""
    lo_x, hi_x = float(re_axis[0]), float(re_axis[-1])
    lo_y, hi_y = float(im_axis[0]), float(im_axis[-1])
    frame, sx, sy = _axes(lo_x, hi_x, lo_y, hi_y, xlabel, ylabel, title)
    vmax = max(max(row) for row in values)
    vmax = vmax if vmax > 0 else 1.0
    na, nb = len(re_axis), len(im_axis)
    dx = (WIDTH - MARGIN_L - MARGIN_R) / na
    dy = (HEIGHT - MARGIN_T - MARGIN_B) / nb
    cells = []
    for a in range(na):
        for b in range(nb):
            color = _ramp_color(values[a][b] / vmax)
            x = fmt(MARGIN_L + a * dx)
            y = fmt(MARGIN_T + (nb - 1 - b) * dy)
            cells.append(f'<rect x="{x}" y="{y}" width="{fmt(dx + 0.5)}" '
                         f'height="{fmt(dy + 0.5)}" fill="{color}"/>')
    # cells first so the frame and labels paint on top
    parts = cells + frame
    parts.append(f'<text x="{WIDTH - MARGIN_R - 8}" y="{MARGIN_T + 16}" font-size="11" '
                 f'text-anchor="end" fill="#333" font-family="monospace">'
                 f'max Q = {vmax:.4g}</text>')
    return _document(parts)
