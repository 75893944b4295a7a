"""Conjugation and homogeneity residual checks in any dimension."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..classifier import apply_phi, topological_normal_form
from ..mixed_core import ExponentData, build_family
from .fits import fit_exponent

MULTIPLICITY_T = 2.0 ** -np.arange(8, 21)


def _complex_normal(rng, shape):
    return rng.normal(size=shape) + 1j * rng.normal(size=shape)


def verify_conjugation(E: ExponentData, samples: int = 10_000, seed=0) -> float:
    """``max |N(phi(z)) - f(z)| / (1 + |f(z)|)`` over seeded samples, with
    ``N`` the topological normal form.  A tenth of the samples lie on
    coordinate axes."""
    rng = np.random.default_rng(seed)
    z = _complex_normal(rng, (samples, E.n))
    n_axis = samples // 10
    if n_axis:
        keep = rng.integers(0, E.n, n_axis)
        mask = np.zeros((n_axis, E.n), dtype=bool)
        mask[np.arange(n_axis), keep] = True
        z[:n_axis] = np.where(mask, z[:n_axis], 0)
    f = build_family(E).evaluate(z)
    g = topological_normal_form(E).as_polynomial().evaluate(apply_phi(E, z))
    return float(np.max(np.abs(g - f) / (1 + np.abs(f))))


@dataclass(frozen=True)
class MultiplicityEstimate:
    value: int
    slopes: tuple
    stable: bool


def verify_multiplicity_numeric(E: ExponentData, rays: int = 16, seed=0,
                                detail: bool = False):
    """Smallest log-log slope of ``|f(t v)|`` over random unit rays ``v``,
    rounded to an integer."""
    rng = np.random.default_rng(seed)
    f = build_family(E)
    slopes = []
    for _ in range(rays):
        v = _complex_normal(rng, E.n)
        v /= np.linalg.norm(v)
        vals = np.abs(f.evaluate(np.multiply.outer(MULTIPLICITY_T, v)))
        slopes.append(fit_exponent(MULTIPLICITY_T, vals).slope)
    s = min(slopes)
    est = MultiplicityEstimate(int(round(s)), tuple(slopes), abs(s - round(s)) < 0.1)
    return est if detail else est.value
