"""Tangent cones from the rescaling criterion ``d(t v, X) / t -> 0``.

``d(t v, X) / t`` equals the distance from ``v`` to the rescaled surface
``X / t``, which the chart evaluates without cancellation at tiny ``t``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components
from scipy.spatial import cKDTree

from ..mixed_core import ExponentData, build_family, evaluate_real_polynomial, lowest_forms
from ..surface_geometry import (
    PLANE_Z1_ZERO,
    PLANE_Z2_ZERO,
    RAY_UNION,
    WHOLE_SURFACE,
    ConeDescription,
    SurfaceChart,
    tangent_cone,
    to_real,
)

DEFAULT_SCALES = 2.0 ** -np.array([4, 8, 16, 32, 64, 128])
CANDIDATE_SCALE = 2.0 ** -200
TINY_RATIO = 1e-6
MIN_DECAY_SLOPE = 0.05
CLUSTER_LINK = 0.1  # radians
R_MAX = 2.0  # nearest point to a unit vector has norm <= 2


def _refine(chart: SurfaceChart, V, scale, r, ang, br, dr, da, iters=24):
    """Pattern search over (r, angle) per direction, branch fixed."""
    offs = np.array([(i, j) for i in (-1, 0, 1) for j in (-1, 0, 1)], dtype=float)
    best = np.linalg.norm(to_real(chart.points(r, ang, br, scale)) - V, axis=-1)
    dr = np.full_like(r, dr)
    da = np.full_like(r, da)
    for _ in range(iters):
        rr = np.clip(r[:, None] + offs[:, 0] * dr[:, None], 0.0, R_MAX)
        aa = ang[:, None] + offs[:, 1] * da[:, None]
        pts = to_real(chart.points(rr, aa, br[:, None], scale))
        d = np.linalg.norm(pts - V[:, None, :], axis=-1)
        j = np.argmin(d, axis=1)
        idx = np.arange(len(r))
        moved = d[idx, j] < best
        best = np.minimum(best, d[idx, j])
        r = np.where(moved, rr[idx, j], r)
        ang = np.where(moved, aa[idx, j], ang)
        shrink = np.where(moved, 1.0, 0.5)
        dr, da = dr * shrink, da * shrink
    return best


def distance_to_rescaled(chart: SurfaceChart, V, scale: float, seeds=None,
                         n_r: int = 65, n_ang: int = 256) -> np.ndarray:
    """``d(V, X / scale)`` for unit vectors ``V`` (N, 4).

    Global start from a parameter grid; ``seeds`` adds a local start
    ``(r, angle, branch)`` per direction and the smaller result is kept.
    """
    V = np.asarray(V, dtype=float)
    rg = np.linspace(0, R_MAX, n_r)
    ag = np.linspace(0, 2 * np.pi, n_ang, endpoint=False)
    R, A, B = np.meshgrid(rg, ag, np.arange(chart.n_branches), indexing="ij")
    grid = to_real(chart.points(R.ravel(), A.ravel(), B.ravel(), scale))
    _, nn = cKDTree(grid).query(V)
    out = _refine(chart, V, scale, R.ravel()[nn], A.ravel()[nn], B.ravel()[nn],
                  rg[1], ag[1])
    if seeds is not None:
        r0, a0, b0 = (np.asarray(s) for s in seeds)
        out = np.minimum(out, _refine(chart, V, scale, r0.astype(float), a0.astype(float),
                                      b0, rg[1] / 8, ag[1] / 8))
    return out


def candidate_directions(chart: SurfaceChart, count: int):
    """Unit directions of points of ``X`` at a scale far below the tested ones,
    with their chart parameters."""
    per = max(count // chart.n_branches, 8)
    ang = np.tile(np.linspace(0, 2 * np.pi, per, endpoint=False), chart.n_branches)
    br = np.repeat(np.arange(chart.n_branches), per)
    pts = to_real(chart.points(np.ones_like(ang), ang, br, CANDIDATE_SCALE))
    norms = np.linalg.norm(pts, axis=-1)
    return pts / norms[:, None], (1.0 / norms, ang, br)


def angular_distance(U, V) -> np.ndarray:
    """Angles between rows of ``U`` and their nearest rows of ``V`` (unit vectors)."""
    chord, _ = cKDTree(V).query(U)
    return 2 * np.arcsin(np.clip(chord / 2, 0, 1))


def hausdorff_angle(U, V) -> float:
    if len(U) == 0 or len(V) == 0:
        return float("inf")
    return float(max(angular_distance(U, V).max(), angular_distance(V, U).max()))


def _clusters(psi: np.ndarray):
    """Group angles on the circle; returns (labels, count)."""
    pts = np.stack([np.cos(psi), np.sin(psi)], axis=1)
    pairs = cKDTree(pts).query_pairs(2 * np.sin(CLUSTER_LINK / 2), output_type="ndarray")
    n = len(psi)
    g = coo_matrix((np.ones(len(pairs)), (pairs[:, 0], pairs[:, 1])), shape=(n, n))
    return connected_components(g, directed=False)[::-1]


def infer_kind(D: np.ndarray, tol_angle: float):
    """Cone kind and dimension from accepted unit directions."""
    if len(D) == 0:
        return None, 0, 0
    s1 = np.hypot(D[:, 0], D[:, 1])
    s2 = np.hypot(D[:, 2], D[:, 3])
    if s1.max() <= tol_angle:
        kind, psi = PLANE_Z1_ZERO, np.arctan2(D[:, 3], D[:, 2])
    elif s2.max() <= tol_angle:
        kind, psi = PLANE_Z2_ZERO, np.arctan2(D[:, 1], D[:, 0])
    else:
        return WHOLE_SURFACE, 2, 0
    labels, k = _clusters(psi)
    spread = 0.0
    for c in range(k):
        p = psi[labels == c]
        centre = np.angle(np.mean(np.exp(1j * p)))
        spread = max(spread, float(np.abs(np.angle(np.exp(1j * (p - centre)))).max()))
    if spread <= 5 * tol_angle and k < len(D):
        return RAY_UNION, 1, k
    return kind, 2, k


@dataclass
class ConeEstimate:
    directions: np.ndarray
    kind: Optional[str]
    dimension: int
    clusters: int
    hausdorff: float
    expected: ConeDescription
    stable: bool
    algebraic_residual: float
    rejected_random: int
    n_random: int
    notes: list = field(default_factory=list)

    @property
    def matched(self) -> bool:
        return self.kind == self.expected.kind and self.stable

    def summary(self) -> dict:
        return {
            "kind": self.kind,
            "expected": self.expected.kind,
            "dimension": self.dimension,
            "clusters": self.clusters,
            "hausdorff": self.hausdorff,
            "stable": self.stable,
            "algebraic_residual": self.algebraic_residual,
            "random_rejected": f"{self.rejected_random}/{self.n_random}",
        }


def _accept(ratios: np.ndarray, scales: np.ndarray) -> np.ndarray:
    """Rescaling criterion on a (directions, scales) table of ratios."""
    final = ratios[:, -1]
    tiny = final <= TINY_RATIO
    lr = np.log(np.maximum(ratios, 1e-300))
    lt = np.log(scales)
    lt_c = lt - lt.mean()
    slope = ((lr - lr.mean(axis=1, keepdims=True)) * lt_c).sum(axis=1) / (lt_c**2).sum()
    decaying = (slope >= MIN_DECAY_SLOPE) & (final < ratios[:, 0])
    return tiny | decaying


def estimate_tangent_cone(E: ExponentData, scales=None, tol_angle: float = 1e-2,
                          n_candidates: int = 2048, n_random: int = 128,
                          seed=0) -> ConeEstimate:
    scales = DEFAULT_SCALES if scales is None else np.asarray(scales, dtype=float)
    if np.any(np.diff(scales) >= 0):
        raise ValueError("scales must decrease")
    expected = tangent_cone(E)
    chart = SurfaceChart(E)
    D_T, seeds = candidate_directions(chart, n_candidates)
    rng = np.random.default_rng(seed)
    R = rng.normal(size=(n_random, 4))
    R /= np.linalg.norm(R, axis=1, keepdims=True)

    ratios_T = np.stack([distance_to_rescaled(chart, D_T, s, seeds) for s in scales], axis=1)
    ratios_R = np.stack([distance_to_rescaled(chart, R, s) for s in scales], axis=1)
    acc_T = _accept(ratios_T, scales)
    acc_R = _accept(ratios_R, scales)
    D = np.concatenate([D_T[acc_T], R[acc_R]])
    kind, dim, k = infer_kind(D, tol_angle)

    # same decision with the scales cut at 2^-64
    cut = scales >= 2.0**-64
    D_cut = np.concatenate([D_T[_accept(ratios_T[:, cut], scales[cut])],
                            R[_accept(ratios_R[:, cut], scales[cut])]])
    stable = infer_kind(D_cut, tol_angle)[0] == kind

    haus = hausdorff_angle(D, expected.unit_samples(E)) if len(D) else float("inf")
    re_lo, im_lo = lowest_forms(build_family(E))
    alg = 0.0
    for poly in (re_lo, im_lo):
        if poly:
            alg = max(alg, float(np.abs(evaluate_real_polynomial(poly, D)).max()))
    notes = [f"{int(acc_T.sum())}/{len(D_T)} surface directions accepted"]
    return ConeEstimate(D, kind, dim, k, haus, expected, stable, alg,
                        int((~acc_R).sum()), n_random, notes)
