"""Deterministic exporters: CSV samples, SVG plots, and PGM rasters.

All output is a pure function of the input values, with fixed float
formatting and fixed element order, so writing the same scene twice gives
byte-identical files. Worlds are drawn one panel per vertex, side by side;
the vertical flip between world and pixel coordinates happens only here.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

PALETTE = ("#1f6fb4", "#c23b22", "#2c8c4b", "#8a56a5", "#b8860b", "#3aa0a0")


@dataclass(frozen=True)
class PlotSpec:
    """Canvas geometry and styling shared by the SVG and PGM renderers.

    Explicit axis ranges apply to every panel and clip content outside them;
    otherwise each panel gets a snug range around its own content.
    """

    width: int = 900
    height: int = 600
    margin: int = 40
    x_range: tuple[float, float] | None = None
    y_range: tuple[float, float] | None = None
    point_radius: float = 3.0
    colors: tuple[str, ...] = PALETTE

    def __post_init__(self):
        if self.width <= 0 or self.height <= 0:
            raise ValueError("canvas dimensions must be positive")
        if self.margin < 0:
            raise ValueError("margin must be nonnegative")
        if 2 * self.margin >= self.width or 2 * self.margin >= self.height:
            raise ValueError("margins leave no drawing area")
        if self.point_radius <= 0:
            raise ValueError("point_radius must be positive")
        for rng in (self.x_range, self.y_range):
            if rng is not None and not rng[1] > rng[0]:
                raise ValueError(f"axis range {rng} is empty")

    def color(self, alpha: int) -> str:
        return self.colors[(alpha - 1) % len(self.colors)]


def export_csv(path, family=None, clouds=None) -> None:
    """Write `vertex,x,y` rows with 17 significant digits, sorted by (vertex, x, y).

    Exactly one of `family` (curve samples) or `clouds` (attractor points)
    must be given. 17 significant digits round-trip every float exactly.
    """
    rows = _collect_rows(family, clouds)
    rows.sort()
    with open(path, "w", newline="\n") as fh:
        fh.write("vertex,x,y\n")
        for vertex, x, y in rows:
            fh.write(f"{vertex},{x:.17g},{y:.17g}\n")


def _collect_rows(family, clouds) -> list[tuple[int, float, float]]:
    if (family is None) == (clouds is None):
        raise ValueError("pass exactly one of family or clouds")
    rows: list[tuple[int, float, float]] = []
    if family is not None:
        for fn in family:
            for x, y in zip(fn.grid, fn.values):
                rows.append((fn.vertex, float(x), float(y)))
    else:
        for cloud in clouds:
            for x, y in cloud.points:
                rows.append((cloud.vertex, float(x), float(y)))
    return rows


def _content_by_vertex(datasets, family, clouds):
    """Collect drawable content per vertex: (data points, curve, cloud points)."""
    content: dict[int, dict] = {}

    def slot(alpha):
        return content.setdefault(alpha, {"data": None, "curve": None, "cloud": None})

    if datasets is not None:
        for alpha, ds in enumerate(datasets, start=1):
            slot(alpha)["data"] = np.array(ds.points)
    if family is not None:
        for fn in family:
            slot(fn.vertex)["curve"] = (fn.grid, fn.values)
    if clouds is not None:
        for cloud in clouds:
            slot(cloud.vertex)["cloud"] = cloud.points
    if not content:
        raise ValueError("nothing to draw")
    return dict(sorted(content.items()))


def _panel_range(entry, spec: PlotSpec):
    """World ranges for one panel: explicit spec ranges win, else snug + pad."""
    xs, ys = [], []
    for key in ("data", "cloud"):
        if entry[key] is not None:
            xs.append(entry[key][:, 0])
            ys.append(entry[key][:, 1])
    if entry["curve"] is not None:
        xs.append(entry["curve"][0])
        ys.append(entry["curve"][1])
    all_x = np.concatenate(xs)
    all_y = np.concatenate(ys)
    x_range = spec.x_range or _padded(float(all_x.min()), float(all_x.max()))
    y_range = spec.y_range or _padded(float(all_y.min()), float(all_y.max()))
    return x_range, y_range


def _padded(lo: float, hi: float) -> tuple[float, float]:
    if hi > lo:
        pad = 0.04 * (hi - lo)
    else:
        pad = 0.5
    return (lo - pad, hi + pad)


class _Panel:
    """World-to-pixel transform for one vertex's drawing area."""

    def __init__(self, px0, py0, pw, ph, x_range, y_range):
        self.px0, self.py0, self.pw, self.ph = px0, py0, pw, ph
        self.x_range, self.y_range = x_range, y_range

    def to_px(self, x, y):
        fx = (x - self.x_range[0]) / (self.x_range[1] - self.x_range[0])
        fy = (y - self.y_range[0]) / (self.y_range[1] - self.y_range[0])
        return self.px0 + fx * self.pw, self.py0 + (1.0 - fy) * self.ph

    def inside(self, x, y):
        return (self.x_range[0] <= x <= self.x_range[1]
                and self.y_range[0] <= y <= self.y_range[1])


def _layout(content, spec: PlotSpec):
    n = len(content)
    pw = (spec.width - spec.margin * (n + 1)) / n
    ph = spec.height - 2 * spec.margin
    if pw <= 0 or ph <= 0:
        raise ValueError("canvas too small for the requested panel count")
    panels = {}
    for k, (alpha, entry) in enumerate(content.items()):
        px0 = spec.margin + k * (pw + spec.margin)
        x_range, y_range = _panel_range(entry, spec)
        panels[alpha] = _Panel(px0, spec.margin, pw, ph, x_range, y_range)
    return panels


def render_svg(path, spec: PlotSpec = PlotSpec(), datasets=None, family=None, clouds=None) -> None:
    """Write an SVG scene: curves as polylines, clouds as round dots, data
    points as open circles of class "knot". At least one of the three inputs
    must be given; content outside explicit axis ranges is clipped away.
    """
    content = _content_by_vertex(datasets, family, clouds)
    panels = _layout(content, spec)
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{spec.width}" '
        f'height="{spec.height}" viewBox="0 0 {spec.width} {spec.height}">',
        f'<rect width="{spec.width}" height="{spec.height}" fill="#ffffff"/>',
    ]
    for alpha, entry in content.items():
        panel = panels[alpha]
        color = spec.color(alpha)
        parts.append(
            f'<rect x="{panel.px0:.3f}" y="{panel.py0:.3f}" width="{panel.pw:.3f}" '
            f'height="{panel.ph:.3f}" fill="none" stroke="#cccccc"/>'
        )
        if entry["cloud"] is not None:
            for chunk in _dot_paths(entry["cloud"], panel):
                parts.append(
                    f'<path d="{chunk}" stroke="{color}" stroke-opacity="0.55" '
                    f'stroke-width="{spec.point_radius * 0.6:.3f}" '
                    f'stroke-linecap="round" fill="none"/>'
                )
        if entry["curve"] is not None:
            for run in _polyline_runs(entry["curve"], panel):
                parts.append(
                    f'<polyline points="{run}" fill="none" stroke="{color}" '
                    f'stroke-width="1.4"/>'
                )
        if entry["data"] is not None:
            for x, y in entry["data"]:
                if not panel.inside(x, y):
                    continue
                px, py = panel.to_px(x, y)
                parts.append(
                    f'<circle class="knot" cx="{px:.3f}" cy="{py:.3f}" '
                    f'r="{spec.point_radius:.3f}" fill="none" stroke="#222222" '
                    f'stroke-width="1.2"/>'
                )
    parts.append("</svg>")
    with open(path, "w", newline="\n") as fh:
        fh.write("\n".join(parts))
        fh.write("\n")


def _dot_paths(points, panel, chunk_size=2000):
    """Cloud dots as zero-length path segments, chunked to keep lines sane."""
    moves = []
    for x, y in points:
        if not panel.inside(x, y):
            continue
        px, py = panel.to_px(x, y)
        moves.append(f"M{px:.2f} {py:.2f}h0")
    for lo in range(0, len(moves), chunk_size):
        yield "".join(moves[lo:lo + chunk_size])


def _polyline_runs(curve, panel):
    """Curve samples as runs of consecutive in-range points."""
    grid, values = curve
    run: list[str] = []
    for x, y in zip(grid, values):
        if panel.inside(x, y):
            px, py = panel.to_px(x, y)
            run.append(f"{px:.3f},{py:.3f}")
        elif run:
            yield " ".join(run)
            run = []
    if run:
        yield " ".join(run)


def render_pgm(path, spec: PlotSpec = PlotSpec(), clouds=None) -> None:
    """Write a binary 8-bit grayscale raster of the clouds.

    White background, one black pixel per point, same panel layout as the
    SVG renderer. Points outside explicit axis ranges are clipped.
    """
    if not clouds:
        raise ValueError("nothing to draw")
    content = _content_by_vertex(None, None, clouds)
    panels = _layout(content, spec)
    img = np.full((spec.height, spec.width), 255, dtype=np.uint8)
    for alpha, entry in content.items():
        panel = panels[alpha]
        for x, y in entry["cloud"]:
            if not panel.inside(x, y):
                continue
            px, py = panel.to_px(x, y)
            col = min(max(int(round(px)), 0), spec.width - 1)
            row = min(max(int(round(py)), 0), spec.height - 1)
            img[row, col] = 0
    with open(path, "wb") as fh:
        fh.write(f"P5 {spec.width} {spec.height} 255\n".encode("ascii"))
        fh.write(img.tobytes())
