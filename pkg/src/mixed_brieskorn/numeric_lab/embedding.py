"""Inner versus outer geometry: horn exponents, normal embedding, link components."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from ..mixed_core import ExponentData
from ..surface_geometry import (
    SurfaceChart,
    probe_parameters,
    surface_type,
    to_real,
)
from .fits import ExponentFit, default_t_grid, fit_exponent, fit_log, log_norm
from .geodesic import knn_graph, inner_distance, surface_mesh_graph
from .sampling import sample_surface

NE_THRESHOLD = 0.05
MESH_N_R = 24
MESH_R_MAX = 1.5  # radius 1 sits on grid ring 16
# Exponents alpha - 1 near 1/9 converge slowly; the mesh works in rescaled
# coordinates, so scales far below double-precision limits are usable.
NE_T_GRID = 2.0 ** -np.arange(8, 129, 8)


def branch_components(chart: SurfaceChart) -> np.ndarray:
    """Component label of each chart branch (orbits of the angle monodromy)."""
    labels = -np.ones(chart.n_branches, dtype=int)
    c = 0
    for b in range(chart.n_branches):
        if labels[b] >= 0:
            continue
        k = b
        while labels[k] < 0:
            labels[k] = c
            k = int(chart.wrap(k))
        c += 1
    return labels


def expected_divergence(E: ExponentData) -> Fraction:
    """Stated divergence exponent of the inner/outer ratio: alpha - 1 for T1,
    beta - 1 for T3, 0 otherwise."""
    st = surface_type(E)
    if st.tag in ("T1", "T3"):
        return SurfaceChart(E).gamma - 1
    return Fraction(0)


@dataclass
class NormalEmbeddingResult:
    fit: ExponentFit
    exponent: float  # e with inner/outer ~ t^-e
    normally_embedded: bool
    expected_exponent: Fraction
    t: np.ndarray
    inner: np.ndarray
    outer: np.ndarray  # may underflow to 0; log_ratio does not
    log_ratio: np.ndarray

    def to_json(self) -> dict:
        return {
            "exponent": self.exponent,
            "normally_embedded": self.normally_embedded,
            "expected_exponent": str(self.expected_exponent),
            "fit": self.fit.to_json(),
        }


def check_normal_embedding(E: ExponentData, t_grid=None, seed=0,
                           n_ang: int = 128) -> NormalEmbeddingResult:
    """Fit the growth of inner/outer distance between the probe arcs.

    Outer distances come from the arcs' term-wise difference.  Inner
    distances are shortest paths on a parameter mesh of ``X / t`` (so one
    mesh resolution serves every ``t``), scaled back by ``t``.  ``seed`` is
    accepted for interface uniformity; the mesh is deterministic.
    """
    del seed
    t = NE_T_GRID if t_grid is None else np.asarray(t_grid, dtype=float)
    chart = SurfaceChart(E)
    expected = expected_divergence(E)
    (a1, b1), (a2, b2) = probe_parameters(E)
    if n_ang % 2:
        raise ValueError("n_ang must be even so that angle pi is a grid node")
    ring = int(round(MESH_N_R / MESH_R_MAX))

    def ang_index(a):
        return int(round(a / (2 * np.pi) * n_ang)) % n_ang

    diff = chart.arc(a1, b1) - chart.arc(a2, b2)
    log_outer = log_norm(diff, t)
    inner = np.empty_like(t)
    for i, ti in enumerate(t):
        g, vertex = surface_mesh_graph(chart, ti, MESH_N_R, n_ang, MESH_R_MAX)
        u, v = vertex(ring, ang_index(a1), b1), vertex(ring, ang_index(a2), b2)
        inner[i] = ti * inner_distance(g, u, v)
    log_ratio = np.log(inner) - log_outer
    fit = fit_log(np.log(t), log_ratio)
    e = -fit.slope
    fit = ExponentFit(e, fit.intercept, fit.r_squared, fit.rational_snap and -fit.rational_snap,
                      fit.stable)
    return NormalEmbeddingResult(fit, e, bool(e <= NE_THRESHOLD), expected, t, inner,
                                 np.exp(log_outer), log_ratio)


def estimate_beta(E: ExponentData, arc_pairs: int = 16, seed=0, t_grid=None) -> ExponentFit:
    """Smallest contact order between arcs of one connected component.

    Arcs are evaluated pointwise through the chart; pairs share a component
    and differ in angle (and possibly branch).
    """
    t = default_t_grid() if t_grid is None else np.asarray(t_grid, dtype=float)
    chart = SurfaceChart(E)
    labels = branch_components(chart)
    rng = np.random.default_rng(seed)
    best = None
    for _ in range(arc_pairs):
        b1 = int(rng.integers(chart.n_branches))
        same = np.flatnonzero(labels == labels[b1])
        b2 = int(rng.choice(same))
        a1, a2 = rng.uniform(0, 2 * np.pi, 2)
        p1 = to_real(chart.points(t, a1, b1))
        p2 = to_real(chart.points(t, a2, b2))
        dist = np.linalg.norm(p1 - p2, axis=-1)
        if np.any(dist <= 0):
            continue
        fit = fit_exponent(t, dist)
        if best is None or fit.slope < best.slope:
            best = fit
    if best is None:
        raise RuntimeError("no usable arc pair sampled")
    return best


def estimate_link_components(E: ExponentData, count: int = 4000, seed=0, k: int = 8) -> int:
    """Connected components of a k-NN graph on points of ``X`` with radius in [1, 2]."""
    cloud = sample_surface(E, count, (1.0, 2.0), seed)
    g = knn_graph(cloud, k=k, include_origin=False)
    return g.annulus_components(1.0, 2.0 + 1e-9)
