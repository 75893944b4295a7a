"""Discrete inner distances: shortest paths on graphs spanned by surface points."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components, dijkstra
from scipy.spatial import cKDTree

from ..surface_geometry import SurfaceChart, to_real
from .sampling import PointCloud


@dataclass
class GeodesicGraph:
    points: np.ndarray  # vertex coordinates, origin included when present
    edges: np.ndarray  # (E, 2) int, i < j
    lengths: np.ndarray  # (E,) Euclidean lengths
    k: Optional[int] = None
    origin: Optional[int] = None  # vertex index of the origin
    _labels: Optional[np.ndarray] = field(default=None, repr=False)

    @property
    def n_vertices(self) -> int:
        return len(self.points)

    def matrix(self):
        n = self.n_vertices
        return coo_matrix((self.lengths, (self.edges[:, 0], self.edges[:, 1])), shape=(n, n)).tocsr()

    @property
    def component_labels(self) -> np.ndarray:
        if self._labels is None:
            self._labels = connected_components(self.matrix(), directed=False)[1]
        return self._labels

    def annulus_components(self, r_lo: float, r_hi: float) -> int:
        """Connected components of the subgraph on vertices with radius in [r_lo, r_hi)."""
        rad = np.linalg.norm(self.points, axis=-1)
        keep = (rad >= r_lo) & (rad < r_hi)
        idx = np.flatnonzero(keep)
        remap = -np.ones(self.n_vertices, dtype=int)
        remap[idx] = np.arange(len(idx))
        e = self.edges[keep[self.edges[:, 0]] & keep[self.edges[:, 1]]]
        g = coo_matrix((np.ones(len(e)), (remap[e[:, 0]], remap[e[:, 1]])),
                       shape=(len(idx), len(idx)))
        return int(connected_components(g, directed=False)[0])


def _build(points, pairs, k=None, origin=None) -> GeodesicGraph:
    pairs = np.sort(np.asarray(pairs, dtype=int).reshape(-1, 2), axis=1)
    pairs = np.unique(pairs[pairs[:, 0] != pairs[:, 1]], axis=0)
    lengths = np.linalg.norm(points[pairs[:, 0]] - points[pairs[:, 1]], axis=-1)
    keep = lengths > 0
    return GeodesicGraph(points, pairs[keep], lengths[keep], k, origin)


def knn_graph(cloud: PointCloud, k: int = 12, include_origin: bool = True,
              max_edge_factor: float = 3.0) -> GeodesicGraph:
    """Symmetric k-nearest-neighbour graph.

    An edge is dropped when it is longer than ``max_edge_factor`` times the
    larger of its endpoints' median neighbour distances, so that sparse
    samples across a narrow gap are not bridged.  The origin vertex joins
    every point of radius at most ``2 * r_min``.
    """
    pts = np.asarray(cloud.points, dtype=float)
    n = len(pts)
    if n <= k:
        raise ValueError(f"need more than k={k} points")
    d, nn = cKDTree(pts).query(pts, k + 1)
    local = np.median(d[:, 1:], axis=1)
    rows = np.repeat(np.arange(n), k)
    cols = nn[:, 1:].ravel()
    dist = d[:, 1:].ravel()
    ok = dist <= max_edge_factor * np.maximum(local[rows], local[cols])
    pairs = np.stack([rows[ok], cols[ok]], axis=1)
    origin = None
    if include_origin:
        rad = np.linalg.norm(pts, axis=-1)
        near = np.flatnonzero(rad <= 2 * rad.min())
        origin = n
        pts = np.vstack([pts, np.zeros(pts.shape[1])])
        pairs = np.vstack([pairs, np.stack([near, np.full_like(near, origin)], axis=1)])
    return _build(pts, pairs, k, origin)


def surface_mesh_graph(E, scale: float = 1.0, n_r: int = 24, n_ang: int = 128,
                       r_max: float = 1.5):
    """Mesh of the rescaled surface ``X / scale`` on a (radius, angle, branch) grid.

    Returns ``(graph, vertex)`` where ``vertex(i_r, i_ang, branch)`` gives
    the index of a grid node; radius ``i_r / n_r * r_max``.  Neighbours are
    grid neighbours (with diagonals); crossing angle ``2 pi`` follows the
    branch monodromy.  Radius 0 collapses to a single origin vertex.
    """
    chart = E if isinstance(E, SurfaceChart) else SurfaceChart(E)
    nb = chart.n_branches
    rg = np.arange(1, n_r + 1) * (r_max / n_r)
    ag = np.linspace(0, 2 * np.pi, n_ang, endpoint=False)
    R, A, B = np.meshgrid(rg, ag, np.arange(nb), indexing="ij")
    pts = to_real(chart.points(R, A, B, scale)).reshape(-1, 4)
    origin = len(pts)
    pts = np.vstack([pts, np.zeros(4)])

    def vid(i, j, b):
        return (np.asarray(i) * n_ang + np.asarray(j)) * nb + np.asarray(b)

    I, J, Bb = (x.ravel() for x in np.meshgrid(np.arange(n_r), np.arange(n_ang),
                                               np.arange(nb), indexing="ij"))
    j_next = (J + 1) % n_ang
    b_next = np.where(J + 1 == n_ang, chart.wrap(Bb), Bb)
    j_prev = (J - 1) % n_ang
    b_prev = np.where(J == 0, _unwrap(chart, Bb), Bb)
    src = [vid(I, J, Bb)]
    dst = [vid(I, j_next, b_next)]
    up = I + 1 < n_r
    for jj, bb in ((J, Bb), (j_next, b_next), (j_prev, b_prev)):
        src.append(vid(I[up], J[up], Bb[up]))
        dst.append(vid(I[up] + 1, jj[up], bb[up]))
    inner = I == 0
    src.append(vid(I[inner], J[inner], Bb[inner]))
    dst.append(np.full(int(inner.sum()), origin))
    pairs = np.stack([np.concatenate(src), np.concatenate(dst)], axis=1)
    g = _build(pts, pairs, None, origin)

    def vertex(i_r, i_ang, branch):
        if i_r == 0:
            return origin
        return int(vid(i_r - 1, i_ang, branch))

    return g, vertex


def _unwrap(chart: SurfaceChart, branch):
    """Inverse of ``chart.wrap``."""
    if chart.holomorphic_small:
        return (np.asarray(branch) - chart.a_big) % chart.a_small
    return np.asarray(branch)


def inner_distance(g: GeodesicGraph, i: int, j) -> np.ndarray:
    """Shortest-path lengths from vertex ``i`` to ``j`` (int or array);
    ``inf`` across graph components."""
    d = dijkstra(g.matrix(), directed=False, indices=i)
    return d[j]
