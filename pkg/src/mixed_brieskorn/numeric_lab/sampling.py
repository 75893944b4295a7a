"""Seeded point clouds on the surfaces, drawn through the closed-form chart."""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ..mixed_core import ExponentData
from ..surface_geometry import SurfaceChart, to_real

CSV_COLUMNS = ("x1", "y1", "x2", "y2", "radius")


def csv_columns(dim: int) -> list:
    return [f"{c}{i + 1}" for i in range(dim // 2) for c in "xy"] + ["radius"]


@dataclass
class PointCloud:
    points: np.ndarray  # (N, 4) real
    radii: np.ndarray
    seed: object = None
    source: str = ""
    params: object = None  # (r, angle, branch) chart parameters when known

    @classmethod
    def from_points(cls, points, seed=None, source="") -> "PointCloud":
        pts = np.asarray(points, dtype=float)
        return cls(pts, np.linalg.norm(pts, axis=-1), seed, source)

    def __len__(self):
        return len(self.points)

    def to_csv_text(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(csv_columns(self.points.shape[1]))
        for p, r in zip(self.points, self.radii):
            w.writerow(["%.17g" % v for v in (*p, r)])
        return buf.getvalue()

    def to_csv(self, path) -> None:
        Path(path).write_text(self.to_csv_text())

    @classmethod
    def from_csv(cls, path, source="") -> "PointCloud":
        data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
        return cls(data[:, :-1], data[:, -1], None, source or str(path))


def chart_radius_to_r(chart: SurfaceChart, radius, iters: int = 80):
    """Invert ``r -> |points(r)|`` (monotone) by bisection."""
    radius = np.asarray(radius, dtype=float)
    g = float(chart.gamma)
    lo = np.zeros_like(radius)
    hi = radius.copy()  # |point| >= r
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        too_big = np.sqrt(mid**2 + mid ** (2 * g)) > radius
        hi = np.where(too_big, mid, hi)
        lo = np.where(too_big, lo, mid)
    return 0.5 * (lo + hi)


def sample_surface(E: ExponentData, count: int, r_range=(1e-3, 1.0), seed=0) -> PointCloud:
    """``count`` points with log-uniform Euclidean radii in ``r_range`` and
    uniform angles and branches."""
    r_min, r_max = (float(x) for x in r_range)
    if not (0 < r_min < r_max):
        raise ValueError(f"degenerate radius range {r_range}")
    if count < 1:
        raise ValueError("count must be positive")
    chart = SurfaceChart(E)
    rng = np.random.default_rng(seed)
    radius = np.exp(rng.uniform(np.log(r_min), np.log(r_max), count))
    angle = rng.uniform(0, 2 * np.pi, count)
    branch = rng.integers(0, chart.n_branches, count)
    r = chart_radius_to_r(chart, radius)
    pts = to_real(chart.points(r, angle, branch))
    return PointCloud(
        pts, np.linalg.norm(pts, axis=-1), seed,
        f"chart a={E.a} b={E.b}", (r, angle, branch),
    )
