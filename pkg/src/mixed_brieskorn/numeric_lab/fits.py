"""Log-log exponent fits, rational snapping and contact orders of arcs."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from ..surface_geometry import ArcSpec

SNAP_DENOMINATOR = 12
SNAP_WINDOW = 0.02
# Coefficients of a merged arc difference below this (relative to the
# largest input coefficient) are float noise from cos/sin of equal angles.
COEFF_NOISE = 1e-13
# Term-wise differences have no cancellation floor, so contact orders are fitted
# far below the sampling scales, where correction terms have died out.
CONTACT_T_GRID = 2.0 ** -np.arange(16, 129, 8)


def default_t_grid(k_min: int = 4, k_max: int = 16) -> np.ndarray:
    return 2.0 ** -np.arange(k_min, k_max + 1)


def snap_rational(x: float, max_den: int = SNAP_DENOMINATOR,
                  window: float = SNAP_WINDOW) -> Optional[Fraction]:
    """Best continued-fraction approximant with denominator <= ``max_den``,
    or ``None`` when it is farther than ``window`` from ``x``."""
    if not np.isfinite(x):
        return None
    q = Fraction(float(x)).limit_denominator(max_den)
    return q if abs(float(q) - x) <= window else None


@dataclass(frozen=True)
class ExponentFit:
    slope: float
    intercept: float
    r_squared: float
    rational_snap: Optional[Fraction]
    stable: bool = True

    @property
    def infinite(self) -> bool:
        return self.slope == float("inf")

    def to_json(self) -> dict:
        snap = None if self.rational_snap is None else (
            f"{self.rational_snap.numerator}/{self.rational_snap.denominator}")
        return {
            "slope": self.slope if np.isfinite(self.slope) else None,
            "intercept": self.intercept if np.isfinite(self.intercept) else None,
            "r_squared": self.r_squared,
            "rational_snap": snap,
        }

    @classmethod
    def from_json(cls, d: dict) -> "ExponentFit":
        snap = d.get("rational_snap")
        slope = d["slope"]
        return cls(
            slope=float("inf") if slope is None else float(slope),
            intercept=float("nan") if d["intercept"] is None else float(d["intercept"]),
            r_squared=float(d["r_squared"]),
            rational_snap=None if snap is None else Fraction(snap),
        )


INFINITE_ORDER = ExponentFit(float("inf"), float("nan"), 1.0, None)


def fit_exponent(x: Sequence[float], y: Sequence[float], min_r2: float = 0.999) -> ExponentFit:
    """Least-squares ``log y = slope * log x + intercept``."""
    return fit_log(np.log(np.asarray(x, dtype=float)), np.log(np.asarray(y, dtype=float)), min_r2)


def fit_log(lx, ly, min_r2: float = 0.999) -> ExponentFit:
    """:func:`fit_exponent` on values that are already logarithms."""
    lx, ly = np.asarray(lx, dtype=float), np.asarray(ly, dtype=float)
    if lx.size < 2 or not np.all(np.isfinite(ly)):
        raise ValueError("need at least two points with positive ordinates")
    A = np.stack([lx, np.ones_like(lx)], axis=1)
    (slope, intercept), *_ = np.linalg.lstsq(A, ly, rcond=None)
    resid = ly - A @ np.array([slope, intercept])
    ss_tot = float(np.sum((ly - ly.mean()) ** 2))
    r2 = 1.0 if ss_tot == 0 else max(0.0, 1.0 - float(np.sum(resid**2)) / ss_tot)
    return ExponentFit(float(slope), float(intercept), r2, snap_rational(slope), r2 >= min_r2)


def contact_order(arc1: ArcSpec, arc2: ArcSpec, t_grid=None) -> ExponentFit:
    """Slope of ``log |gamma_1(t) - gamma_2(t)|`` against ``log t``.

    The difference is formed term by term so that shared leading terms
    cancel exactly instead of leaving a rounding floor, and its norm is
    taken as ``t^q0 * |sum c_k t^(q_k - q0)|`` in logarithms so that deep
    grids do not underflow.
    """
    t = CONTACT_T_GRID if t_grid is None else np.asarray(t_grid, dtype=float)
    if t.size < 2:
        raise ValueError("t_grid needs at least two points")
    diff = arc1 - arc2
    scale = max([np.linalg.norm(c) for c, _ in arc1.terms + arc2.terms] or [1.0])
    diff = ArcSpec([(c, q) for c, q in diff.terms if np.linalg.norm(c) > COEFF_NOISE * scale])
    if diff.is_zero:
        return INFINITE_ORDER
    return fit_log(np.log(t), log_norm(diff, t))


def log_norm(arc: ArcSpec, t) -> np.ndarray:
    """``log |arc(t)|`` without underflow for tiny ``t``."""
    if arc.is_zero:
        raise ValueError("zero arc")
    lt = np.log(np.asarray(t, dtype=float))
    q0 = arc.order
    scaled = sum(np.multiply.outer(np.exp(float(q - q0) * lt), c) for c, q in arc.terms)
    return float(q0) * lt + np.log(np.linalg.norm(scaled, axis=-1))
