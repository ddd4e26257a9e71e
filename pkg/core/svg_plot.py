"""
SVG plots on a fixed layout grid, each with a CSV sidecar of its series.

Every plotted number is written to the SVG as a ``data-*`` attribute using
the same float repr the CSV uses, so the two always agree exactly.
"""

from collections.abc import Mapping, Sequence

import numpy as np
import pandas as pd
from lxml import etree

from common.models import PlotArtifact, ProfileCurve, RankDistribution

SVG_NS = "http://www.w3.org/2000/svg"

WIDTH = 640
HEIGHT = 400
MARGIN = 48

# fixed palette, cycled by algorithm position
PALETTE = (
    "#1f77b4",
    "#ff7f0e",
    "#2ca02c",
    "#d62728",
    "#9467bd",
    "#8c564b",
    "#e377c2",
    "#7f7f7f",
)

MEAN_PANEL = "__mean__"


def number(value: float) -> str:
    """Shortest repr that round-trips; shared by the SVG and the CSV."""
    return repr(float(value))


def _coord(value: float) -> str:
    return f"{value:.3f}"


def _svg_root(title: str, width: int = WIDTH, height: int = HEIGHT) -> etree._Element:
    root = etree.Element(
        f"{{{SVG_NS}}}svg",
        nsmap={None: SVG_NS},
        width=str(width),
        height=str(height),
        viewBox=f"0 0 {width} {height}",
    )
    etree.SubElement(root, f"{{{SVG_NS}}}title").text = title
    return root


def _el(parent: etree._Element, tag: str, **attrs: str) -> etree._Element:
    # data_value -> data-value, class_ -> class
    return etree.SubElement(
        parent, f"{{{SVG_NS}}}{tag}", {k.rstrip("_").replace("_", "-"): v for k, v in attrs.items()}
    )


def _to_text(root: etree._Element) -> str:
    return etree.tostring(root, pretty_print=True, encoding="unicode")


def _to_csv(rows: list[dict], columns: list[str]) -> str:
    return pd.DataFrame(rows, columns=columns).to_csv(index=False, lineterminator="\n")


class _Frame:
    """Maps unit coordinates onto the plotting area of a panel."""

    def __init__(self, left: float, top: float, width: float, height: float):
        self.left, self.top, self.width, self.height = left, top, width, height

    def x(self, unit: float) -> float:
        return self.left + unit * self.width

    def y(self, unit: float) -> float:
        return self.top + (1.0 - unit) * self.height

    def draw_axes(self, parent: etree._Element) -> None:
        bottom = self.top + self.height
        _el(parent, "line", x1=_coord(self.left), y1=_coord(bottom), x2=_coord(self.left + self.width), y2=_coord(bottom), stroke="black")
        _el(parent, "line", x1=_coord(self.left), y1=_coord(self.top), x2=_coord(self.left), y2=_coord(bottom), stroke="black")


def _tau_positions(taus: np.ndarray, rescale: Mapping[float, float] | None) -> np.ndarray:
    if rescale is not None:
        return np.array([rescale[float(t)] for t in taus])
    if taus.size == 1:
        return np.zeros(1)
    return (taus - taus[0]) / (taus[-1] - taus[0])


def _step_path(xs: np.ndarray, ys: np.ndarray, frame: _Frame) -> str:
    parts = [f"M {_coord(frame.x(xs[0]))} {_coord(frame.y(ys[0]))}"]
    for i in range(1, xs.size):
        parts.append(f"H {_coord(frame.x(xs[i]))}")
        parts.append(f"V {_coord(frame.y(ys[i]))}")
    return " ".join(parts)


def _band_polygon(xs: np.ndarray, lower: np.ndarray, upper: np.ndarray, frame: _Frame) -> str:
    top, bottom = [], []
    for i in range(xs.size):
        x_start = xs[i]
        x_stop = xs[i + 1] if i + 1 < xs.size else xs[i]
        top += [(x_start, upper[i]), (x_stop, upper[i])]
        bottom += [(x_start, lower[i]), (x_stop, lower[i])]
    points = top + bottom[::-1]
    return " ".join(f"{_coord(frame.x(x))},{_coord(frame.y(y))}" for x, y in points)


def profile_plot(
    curves: Sequence[ProfileCurve],
    rescale: Mapping[float, float] | None = None,
    name: str = "profiles",
) -> PlotArtifact:
    """
    Step curves of performance profiles on a shared grid, with shaded bands
    where the curves carry them.

    Args:
        curves: Profiles sharing one tau grid
        rescale: Optional tau -> [0, 1] axis mapping
        name: Artifact base name

    Returns:
        PlotArtifact; CSV columns are algorithm, tau, value and, when any
        curve has bands, lower and upper
    """
    with_bands = any(c.has_bands for c in curves)
    root = _svg_root("Performance profiles")
    frame = _Frame(MARGIN, MARGIN / 2, WIDTH - 1.5 * MARGIN, HEIGHT - 1.5 * MARGIN)
    frame.draw_axes(root)

    taus = curves[0].taus
    xs = _tau_positions(taus, rescale)
    ticks = _el(root, "g", class_="ticks", data_axis="rescaled" if rescale else "linear")
    for tau, x in zip(taus, xs):
        _el(ticks, "line", class_="tick", x1=_coord(frame.x(x)), y1=_coord(frame.y(0)), x2=_coord(frame.x(x)), y2=_coord(frame.y(0) + 4), stroke="black", data_tau=number(tau), data_position=number(x))

    rows = []
    for i, curve in enumerate(curves):
        color = PALETTE[i % len(PALETTE)]
        group = _el(root, "g", class_="profile", data_algorithm=curve.algorithm_id)
        if curve.has_bands:
            _el(group, "polygon", class_="band", points=_band_polygon(xs, curve.lower, curve.upper, frame), fill=color, fill_opacity="0.2", stroke="none")
        _el(group, "path", class_="curve", d=_step_path(xs, curve.values, frame), fill="none", stroke=color)
        for j, record in enumerate(curve.to_records()):
            attrs = {f"data_{k}": number(v) for k, v in record.items()}
            _el(group, "circle", class_="point", cx=_coord(frame.x(xs[j])), cy=_coord(frame.y(record["value"])), r="1.5", fill=color, **attrs)
            rows.append({"algorithm": curve.algorithm_id, **record})
        _el(group, "text", x=_coord(frame.x(1.0) - 96), y=_coord(frame.top + 14 * (i + 1)), fill=color, font_size="11").text = curve.algorithm_id

    columns = ["algorithm", "tau", "value"] + (["lower", "upper"] if with_bands else [])
    return PlotArtifact(name, _to_text(root), _to_csv(rows, columns))


def rank_plot(distribution: RankDistribution, name: str = "ranks") -> PlotArtifact:
    """
    Stacked bars of rank probabilities: one panel for the task average and
    one per task, one bar per algorithm, one segment per rank.

    CSV columns: task, algorithm, rank, probability; the task average uses
    the task name ``__mean__``.
    """
    panels = [(MEAN_PANEL, distribution.mean_matrix)] + list(distribution.per_task.items())
    size = len(distribution.algorithms)
    panel_width = 24 * size + 24
    width = int(MARGIN + panel_width * len(panels) + MARGIN / 2)
    root = _svg_root("Rank distributions", width=width)
    bar_width = 20

    rows = []
    for p, (task, matrix) in enumerate(panels):
        frame = _Frame(MARGIN + p * panel_width, MARGIN / 2, panel_width - 12, HEIGHT - 1.5 * MARGIN)
        frame.draw_axes(root)
        panel = _el(root, "g", class_="panel", data_task=task)
        _el(panel, "text", x=_coord(frame.left), y=_coord(frame.top + frame.height + 16), font_size="10").text = "mean" if task == MEAN_PANEL else task
        for i, algorithm in enumerate(distribution.algorithms):
            bar = _el(panel, "g", class_="bar", data_algorithm=algorithm)
            x = frame.left + 6 + i * 24
            base = 0.0
            for r in range(size):
                probability = float(matrix[i, r])
                _el(
                    bar,
                    "rect",
                    class_="segment",
                    x=_coord(x),
                    y=_coord(frame.y(base + probability)),
                    width=str(bar_width),
                    height=_coord(probability * frame.height),
                    fill=PALETTE[r % len(PALETTE)],
                    data_rank=str(r + 1),
                    data_value=number(probability),
                )
                base += probability
                rows.append({"task": task, "algorithm": algorithm, "rank": r + 1, "probability": probability})

    return PlotArtifact(name, _to_text(root), _to_csv(rows, ["task", "algorithm", "rank", "probability"]))
