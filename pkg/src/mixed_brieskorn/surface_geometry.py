"""
Geometry of the mixed surfaces ``X = f_{a,b}^{-1}(0)`` in ``C^2``.

All coordinates are canonical (``a_1 <= a_2``).  Real coordinates are
ordered ``(x1, y1, x2, y2)``.

Surface types, with ``m_i = a_i + 2 b_i``::

    T1  a_1 >= 1, m_1 < m_2     cone {z_1 = 0}
    T2  a_1 >= 1, m_1 = m_2     cone = X
    T3  a_1 = 0,  2 b_1 < m_2   cone = finitely many rays in {z_1 = 0}
    T4  a_1 = 0,  2 b_1 > m_2   cone {z_2 = 0}
    T5  a_1 = 0,  2 b_1 = m_2   cone = X

When ``a_1 >= 1`` and ``m_1 > m_2`` the roles of the coordinates are
exchanged and the type is reported as ``Swapped(T1)``; the cone is then
``{z_2 = 0}`` in canonical coordinates.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, pi
from typing import Optional, Sequence

import numpy as np

from .classifier import EquivalenceVerdict, Status
from .mixed_core import ExponentData, MixedMonomial, MixedPolynomial

PLANE_Z1_ZERO = "PlaneZ1Zero"
PLANE_Z2_ZERO = "PlaneZ2Zero"
WHOLE_SURFACE = "WholeSurface"
RAY_UNION = "RayUnion"


def _require_surface(E: ExponentData):
    if E.n != 2:
        raise ValueError(f"surface geometry needs n = 2, got n = {E.n}")
    if E.a[0] == 0 and E.b[0] == 0:
        raise ValueError("a_1 = b_1 = 0: the zero set does not pass through the origin")


@dataclass(frozen=True)
class SurfaceType:
    tag: str  # T1..T5 or Regular
    swapped: bool = False

    @property
    def regular(self) -> bool:
        return self.tag == "Regular"

    def __str__(self):
        return f"Swapped({self.tag})" if self.swapped else self.tag


def is_regular(E: ExponentData) -> bool:
    return any(ai == 1 and bi == 0 for ai, bi in zip(E.a, E.b))


def surface_type(E: ExponentData) -> SurfaceType:
    _require_surface(E)
    if is_regular(E):
        return SurfaceType("Regular")
    (a1, a2), (b1, _), (m1, m2) = E.a, E.b, E.m
    if a1 >= 1:
        if m1 < m2:
            return SurfaceType("T1")
        if m1 == m2:
            return SurfaceType("T2")
        return SurfaceType("T1", swapped=True)
    if 2 * b1 < m2:
        return SurfaceType("T3")
    if 2 * b1 > m2:
        return SurfaceType("T4")
    return SurfaceType("T5")


def _classified(E: ExponentData) -> SurfaceType:
    st = surface_type(E)
    if st.regular:
        raise ValueError(f"{E} is a regular surface germ; it is not classified")
    return st


def admissible_rays(a2: int) -> np.ndarray:
    """Angles with ``a2 * theta = pi (mod 2 pi)``: where ``Re z^a2 < 0``."""
    return (pi + 2 * pi * np.arange(a2)) / a2


class SurfaceChart:
    """Closed-form parameterization of ``X`` by a radius, an angle and a branch.

    One coordinate (``big``) has modulus ``r``; the other has modulus
    ``r ** gamma`` with ``gamma >= 1``.  ``points(r, angle, branch, scale)``
    returns canonical complex points divided by ``scale`` for radius
    ``r * scale``, which keeps tiny scales well conditioned.

    For ``a_1 >= 1`` the angle is the argument of ``big`` and the branch picks
    one of the ``a_small`` roots for the other coordinate.  For ``a_1 = 0``
    the branch picks an admissible ray of ``z_2`` and the angle is the free
    phase of ``z_1``.  Turning the angle once around maps branch ``k`` to
    ``wrap(k)``.
    """

    def __init__(self, E: ExponentData):
        _require_surface(E)
        self.E = E
        (a1, a2), (b1, b2), (m1, m2) = E.a, E.b, E.m
        self.holomorphic_small = a1 >= 1
        if a1 >= 1:
            self.big = 0 if m1 > m2 else 1
            self.small = 1 - self.big
            self.a_big, self.a_small = E.a[self.big], E.a[self.small]
            self.gamma = Fraction(E.m[self.big], E.m[self.small])
            self.n_branches = self.a_small
            self.rays = None
        else:
            self.rays = admissible_rays(a2)
            self.n_branches = a2
            beta = Fraction(m2, 2 * b1)
            if beta >= 1:
                self.big, self.small, self.gamma = 1, 0, beta
            else:
                self.big, self.small, self.gamma = 0, 1, 1 / beta

    def wrap(self, branch):
        if self.holomorphic_small:
            return (np.asarray(branch) + self.a_big) % self.a_small
        return np.asarray(branch)

    def angles(self, angle, branch):
        """Arguments of (big, small) coordinates."""
        angle = np.asarray(angle, dtype=float)
        branch = np.asarray(branch)
        if self.holomorphic_small:
            big_arg = angle
            small_arg = (pi + self.a_big * angle + 2 * pi * branch) / self.a_small
        elif self.big == 1:
            big_arg = self.rays[branch] + 0 * angle
            small_arg = angle + 0 * self.rays[branch]
        else:
            big_arg = angle + 0 * self.rays[branch]
            small_arg = self.rays[branch] + 0 * angle
        return big_arg, small_arg

    def points(self, r, angle, branch, scale: float = 1.0) -> np.ndarray:
        r = np.asarray(r, dtype=float)
        big_arg, small_arg = self.angles(angle, branch)
        g = float(self.gamma)
        c = scale ** (g - 1.0) if g != 1 else 1.0
        big = r * np.exp(1j * big_arg)
        small = c * r**g * np.exp(1j * small_arg)
        big, small = np.broadcast_arrays(big, small)
        out = np.empty(big.shape + (2,), dtype=complex)
        out[..., self.big] = big
        out[..., self.small] = small
        return out

    def arc(self, angle: float, branch: int) -> "ArcSpec":
        """The arc ``t -> points(t, angle, branch)``."""
        big_arg, small_arg = self.angles(angle, branch)
        big_vec = np.zeros(4)
        small_vec = np.zeros(4)
        big_vec[2 * self.big: 2 * self.big + 2] = np.cos(big_arg), np.sin(big_arg)
        small_vec[2 * self.small: 2 * self.small + 2] = np.cos(small_arg), np.sin(small_arg)
        return ArcSpec([(big_vec, Fraction(1)), (small_vec, self.gamma)])


def to_real(z) -> np.ndarray:
    """Complex ``(..., n)`` to real ``(..., 2n)`` as ``(x1, y1, x2, y2, ...)``."""
    z = np.asarray(z, dtype=complex)
    out = np.empty(z.shape[:-1] + (2 * z.shape[-1],))
    out[..., 0::2] = z.real
    out[..., 1::2] = z.imag
    return out


def to_complex(x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    return x[..., 0::2] + 1j * x[..., 1::2]


@dataclass(frozen=True)
class ConeDescription:
    kind: str
    dimension: int
    rays: tuple = ()  # admissible z_2 angles for RayUnion
    stated_rays: tuple = ()  # all angles with Im z_2^a_2 = 0, Re unconstrained

    def unit_samples(self, E: ExponentData, count: int = 4096) -> np.ndarray:
        """Dense real samples of the cone intersected with the unit sphere."""
        psi = np.linspace(0, 2 * pi, count, endpoint=False)
        if self.kind == PLANE_Z1_ZERO:
            z = np.stack([0 * psi, np.exp(1j * psi)], axis=-1)
        elif self.kind == PLANE_Z2_ZERO:
            z = np.stack([np.exp(1j * psi), 0 * psi], axis=-1)
        elif self.kind == RAY_UNION:
            z = np.stack([np.zeros(len(self.rays)), np.exp(1j * np.array(self.rays))], axis=-1)
        else:
            chart = SurfaceChart(E)
            per = max(count // chart.n_branches, 16)
            ang = np.linspace(0, 2 * pi, per, endpoint=False)
            z = np.concatenate(
                [chart.points(np.ones(per), ang, np.full(per, k)) for k in range(chart.n_branches)]
            )
        x = to_real(z)
        return x / np.linalg.norm(x, axis=-1, keepdims=True)


def tangent_cone(E: ExponentData) -> ConeDescription:
    st = _classified(E)
    if st.tag == "T1":
        return ConeDescription(PLANE_Z2_ZERO if st.swapped else PLANE_Z1_ZERO, 2)
    if st.tag in ("T2", "T5"):
        return ConeDescription(WHOLE_SURFACE, 2)
    if st.tag == "T4":
        return ConeDescription(PLANE_Z2_ZERO, 2)
    a2 = E.a[1]
    return ConeDescription(
        RAY_UNION,
        1,
        rays=tuple(float(x) for x in admissible_rays(a2)),
        stated_rays=tuple(pi * j / a2 for j in range(2 * a2)),
    )


def horn_index(E: ExponentData) -> Fraction:
    """``beta = (a_2 + 2 b_2) / (2 b_1)`` for ``a_1 = 0``.

    Also evaluated for the regular germs with ``a_1 = 0`` (``a_2 = 1,
    b_2 = 0``), where it is below 1.
    """
    st = surface_type(E)
    if E.a[0] != 0:
        raise ValueError(f"horn index is defined for a_1 = 0 types, got {st}")
    return Fraction(E.m[1], 2 * E.b[0])


@dataclass(frozen=True)
class InnerClass:
    beta: Fraction
    components: int
    components_derived: bool = True


def link_components(E: ExponentData) -> int:
    """Connected components of ``X - {0}`` near the origin.

    ``a_1 = 0``: one per admissible ray of ``z_2`` (``a_2``).  ``a_1 >= 1``:
    the branches are glued by ``k -> k + a_big mod a_small``, leaving
    ``gcd(a_1, a_2)`` orbits.
    """
    _require_surface(E)
    if E.a[0] == 0:
        return E.a[1]
    return gcd(E.a[0], E.a[1])


def inner_class(E: ExponentData) -> InnerClass:
    st = _classified(E)
    beta = horn_index(E) if st.tag == "T3" else Fraction(1)
    return InnerClass(beta, link_components(E))


def normally_embedded(E: ExponentData) -> bool:
    """Stated criterion: not normally embedded exactly for types T1 and T3."""
    return _classified(E).tag not in ("T1", "T3")


@dataclass(frozen=True)
class SurfaceProfile:
    type: SurfaceType
    cone: ConeDescription
    beta: Fraction
    components: int
    normally_embedded: bool
    components_derived: bool = True


def surface_profile(E: ExponentData) -> SurfaceProfile:
    st = _classified(E)
    ic = inner_class(E)
    return SurfaceProfile(st, tangent_cone(E), ic.beta, ic.components, normally_embedded(E))


class ArcSpec:
    """``gamma(t) = sum_k c_k t^(q_k)`` in ``R^4``, ``t in [0, eps)``.

    Terms with equal exponents are merged, exponents kept increasing and
    zero coefficients dropped, so differences of arcs cancel exactly.
    """

    def __init__(self, terms):
        merged: dict = {}
        for c, q in terms:
            q = Fraction(q)
            merged[q] = merged.get(q, 0) + np.asarray(c, dtype=float)
        self.terms = tuple(
            (c, q) for q, c in sorted(merged.items()) if np.any(c != 0)
        )
        for _, q in self.terms:
            if q <= 0:
                raise ValueError("arc exponents must be positive so that gamma(0) = 0")

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def order(self) -> Optional[Fraction]:
        return self.terms[0][1] if self.terms else None

    def __sub__(self, other: "ArcSpec") -> "ArcSpec":
        return ArcSpec(list(self.terms) + [(-c, q) for c, q in other.terms])

    def __call__(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        out = np.zeros(t.shape + (4,))
        for c, q in self.terms:
            out = out + np.multiply.outer(t ** float(q), c)
        return out

    def complex_points(self, t) -> np.ndarray:
        return to_complex(self(t))

    def __repr__(self):
        body = " + ".join(f"{np.round(c, 4).tolist()} t^{q}" for c, q in self.terms)
        return f"ArcSpec({body or '0'})"


def probe_parameters(E: ExponentData) -> tuple[tuple[float, int], tuple[float, int]]:
    """Chart ``(angle, branch)`` of the two probe arcs: branches 0 and 1 at
    angle 0, or angles 0 and pi on the only branch."""
    if SurfaceChart(E).n_branches >= 2:
        return (0.0, 0), (0.0, 1)
    return (0.0, 0), (pi, 0)


def _arc_pair(E: ExponentData) -> tuple[ArcSpec, ArcSpec]:
    chart = SurfaceChart(E)
    p1, p2 = probe_parameters(E)
    return chart.arc(*p1), chart.arc(*p2)


def witness_arcs(E: ExponentData) -> tuple[ArcSpec, ArcSpec]:
    """Two arcs on ``X`` in distinct sheets (T1) or components (T3, T4).

    With a single sheet/component available the second arc uses the
    opposite angle instead.
    """
    st = _classified(E)
    if st.tag not in ("T1", "T3", "T4"):
        raise ValueError(f"witness arcs are defined for T1, T3, T4; got {st}")
    return _arc_pair(E)


def probe_arcs(E: ExponentData) -> tuple[ArcSpec, ArcSpec]:
    """Same construction as :func:`witness_arcs` for every classified type."""
    _classified(E)
    return _arc_pair(E)


def parameterize_surface(E: ExponentData, rho, theta, k=0, phase=0.0) -> np.ndarray:
    """Point of ``X`` in canonical coordinates.

    ``a_1 >= 1``: ``z_2 = rho e^{i theta}`` and
    ``z_1 = rho^(m_2/m_1) e^{i (pi + a_2 theta + 2 pi k) / a_1}``.
    ``a_1 = 0``: ``theta`` must satisfy ``a_2 theta = pi (mod 2 pi)`` and
    ``z_1 = rho^(m_2 / 2 b_1) e^{i phase}``.
    """
    _require_surface(E)
    (a1, a2), (b1, _), (m1, m2) = E.a, E.b, E.m
    rho = np.asarray(rho, dtype=float)
    theta = np.asarray(theta, dtype=float)
    k = np.asarray(k)
    if np.any(rho < 0):
        raise ValueError("rho must be nonnegative")
    z2 = rho * np.exp(1j * theta)
    if a1 >= 1:
        if np.any((k < 0) | (k >= a1)):
            raise ValueError(f"branch k must lie in [0, {a1})")
        z1 = rho ** (m2 / m1) * np.exp(1j * (pi + a2 * theta + 2 * pi * k) / a1)
    else:
        resid = np.angle(np.exp(1j * (a2 * theta - pi)))
        if np.any(np.abs(resid) > 1e-9):
            raise ValueError("theta is not on an admissible ray (a_2 theta = pi mod 2 pi)")
        z1 = rho ** (m2 / (2 * b1)) * np.exp(1j * np.asarray(phase, dtype=float))
    z1, z2 = np.broadcast_arrays(z1, z2)
    return np.stack([z1, z2], axis=-1)


def _su3_pattern(E: ExponentData) -> Optional[int]:
    if E.n != 2 or E.a[0] < 1:
        return None
    (a1, a2), (m1, m2) = E.a, E.m
    if a1 == a2 and m1 != m2:
        return 1
    if a1 != a2 and m1 == m2:
        return 2
    return None


def never_ambient_to_complex_curve(E: ExponentData) -> bool:
    """True for the patterns that are never ambient equivalent to a complex
    plane curve germ (nor outer equivalent to their normal form)."""
    return _su3_pattern(E) is not None


def outer_obstruction(E1: ExponentData, E2: ExponentData) -> EquivalenceVerdict:
    if E1.n != 2 or E2.n != 2:
        raise ValueError("outer comparison needs two surfaces in C^2")
    t1, t2 = _classified(E1), _classified(E2)
    if E1 == E2:
        return EquivalenceVerdict(Status.EQUIVALENT, "identity", "identical surfaces")
    for X, Y in ((E1, E2), (E2, E1)):
        pattern = _su3_pattern(X)
        if pattern and Y.b == (0, 0) and Y.a == X.a:
            return EquivalenceVerdict(
                Status.NOT_EQUIVALENT, "su3", f"pattern {pattern} against its normal form"
            )
    ne1, ne2 = normally_embedded(E1), normally_embedded(E2)
    if ne1 != ne2:
        return EquivalenceVerdict(
            Status.NOT_EQUIVALENT, "p2", f"types {t1} and {t2} differ in normal embedding"
        )
    c1, c2 = tangent_cone(E1), tangent_cone(E2)
    if c1.dimension != c2.dimension:
        return EquivalenceVerdict(
            Status.NOT_EQUIVALENT, "tsam", f"cone dimensions {c1.dimension} vs {c2.dimension}"
        )
    if c1.kind == RAY_UNION and len(c1.rays) != len(c2.rays):
        return EquivalenceVerdict(
            Status.NOT_EQUIVALENT, "tsam", f"{len(c1.rays)} vs {len(c2.rays)} cone rays"
        )
    return EquivalenceVerdict(Status.UNDETERMINED, "tsam", "no outer obstruction found")


def ambient_obstruction(E1: ExponentData, E2: ExponentData) -> EquivalenceVerdict:
    for E in (E1, E2):
        if E.n != 2 or _classified(E).tag not in ("T1", "T2"):
            raise ValueError(f"ambient comparison needs types T1 or T2, got {E}")
    if E1 == E2:
        return EquivalenceVerdict(Status.EQUIVALENT, "identity", "identical surfaces")
    if E1.a != E2.a:
        return EquivalenceVerdict(Status.NOT_EQUIVALENT, "etsu", f"a = {E1.a} != {E2.a}")
    outer = outer_obstruction(E1, E2)
    if outer.status is Status.NOT_EQUIVALENT:
        return EquivalenceVerdict(Status.NOT_EQUIVALENT, outer.reason, outer.witness)
    return EquivalenceVerdict(Status.UNDETERMINED, "su5", "no ambient obstruction found")


@dataclass(frozen=True)
class HornMembership:
    member: bool
    realization: Optional[MixedPolynomial] = None
    b: Optional[int] = None
    d: Optional[int] = None


def horn_realization(beta: Fraction) -> Optional[tuple[int, int]]:
    """``(b, d)`` with ``beta = (2d + 1) / (2b)``, if the parity allows."""
    beta = Fraction(beta)
    p, q = beta.numerator, beta.denominator
    if p % 2 == 1 and q % 2 == 0:
        return q // 2, (p - 1) // 2
    return None


def beta_horn_membership(beta, p: Sequence[float], rtol: float = 1e-9) -> HornMembership:
    """Is ``p`` on ``x^2 + y^2 = z^(2 beta), z >= 0``?  Also returns the
    mixed realization ``|z_1|^(2b) + z_2^(1+d) conj(z_2)^d`` when it exists."""
    beta = Fraction(beta)
    if beta < 1:
        raise ValueError("horn exponent must be >= 1")
    x, y, z = (float(v) for v in p)
    lhs, rhs = x * x + y * y, (z ** (2 * float(beta)) if z >= 0 else np.nan)
    member = bool(z >= 0 and abs(lhs - rhs) <= rtol * max(1.0, abs(lhs), abs(rhs)))
    bd = horn_realization(beta)
    if bd is None:
        return HornMembership(member)
    b, d = bd
    h = MixedPolynomial(
        [MixedMonomial(1, (b, 0), (b, 0)), MixedMonomial(1, (0, 1 + d), (0, d))], 2
    )
    return HornMembership(member, h, b, d)
