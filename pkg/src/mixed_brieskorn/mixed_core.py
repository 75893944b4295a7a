"""
Mixed polynomials of Pham-Brieskorn type.

A mixed monomial is ``c * z^nu * conj(z)^mu``.  The family studied throughout
the package is

    f_{a,b} = sum_i z_i^(a_i + b_i) * conj(z_i)^(b_i)

and every member is described by an :class:`ExponentData` pair of integer
vectors.  Symbolic operations here are exact (integers, :class:`Fraction`);
floating point only appears in :meth:`MixedPolynomial.evaluate`.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Iterable, NamedTuple, Sequence

import numpy as np

GaussianRational = tuple  # (Fraction real, Fraction imag)


def _to_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, np.integer)):
        return Fraction(int(x))
    return Fraction(float(x))  # exact for binary floats


def _to_gaussian(z) -> GaussianRational:
    if isinstance(z, tuple) and len(z) == 2:
        return (_to_fraction(z[0]), _to_fraction(z[1]))
    if isinstance(z, (complex, np.complexfloating)):
        return (_to_fraction(z.real), _to_fraction(z.imag))
    return (_to_fraction(z), Fraction(0))


def _gmul(p: GaussianRational, q: GaussianRational) -> GaussianRational:
    return (p[0] * q[0] - p[1] * q[1], p[0] * q[1] + p[1] * q[0])


def _gpow(p: GaussianRational, k: int) -> GaussianRational:
    out = (Fraction(1), Fraction(0))
    for _ in range(k):
        out = _gmul(out, p)
    return out


@dataclass(frozen=True)
class ExponentData:
    """Exponent vectors ``(a, b)`` of a family member.

    Storage is canonical: the pairs ``(a_i, b_i)`` are sorted
    lexicographically, so ``a`` is nondecreasing and ``b`` travels with it.
    ``perm[p]`` is the user index that landed at canonical position ``p``.
    Two inputs that differ by a relabeling of coordinates compare equal.

    Raises
    ------
    ValueError
        On length mismatch, empty or negative entries, or an all-zero ``a``.
    """

    a: tuple
    b: tuple
    perm: tuple = field(default=None, compare=False)

    def __post_init__(self):
        a = tuple(int(x) for x in self.a)
        b = tuple(int(x) for x in self.b)
        if len(a) != len(b):
            raise ValueError(f"length mismatch: a has {len(a)} entries, b has {len(b)}")
        if len(a) == 0:
            raise ValueError("need at least one variable")
        if any(x < 0 for x in a + b):
            raise ValueError("exponents must be nonnegative")
        if all(x == 0 for x in a):
            raise ValueError("degenerate family: all entries of a are zero")
        order = sorted(range(len(a)), key=lambda i: (a[i], b[i]))
        if self.perm is not None:
            # already canonical: trust the caller's witness
            order_perm = tuple(self.perm)
            if sorted(zip(a, b)) != list(zip(a, b)):
                raise ValueError("perm given for non-canonical vectors")
        else:
            order_perm = tuple(order)
            a = tuple(a[i] for i in order)
            b = tuple(b[i] for i in order)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "perm", order_perm)

    @property
    def n(self) -> int:
        return len(self.a)

    @property
    def m(self) -> tuple:
        """Multiplicities ``a_i + 2 b_i`` of the individual terms."""
        return tuple(ai + 2 * bi for ai, bi in zip(self.a, self.b))

    @property
    def k_zero(self) -> int:
        """Number of indices with ``a_i = 0``."""
        return sum(1 for x in self.a if x == 0)

    @property
    def vanishes_at_origin(self) -> bool:
        # a term with a_i = b_i = 0 is the constant 1
        return all(mi > 0 for mi in self.m)

    @property
    def user_a(self) -> tuple:
        out = [0] * self.n
        for p, i in enumerate(self.perm):
            out[i] = self.a[p]
        return tuple(out)

    @property
    def user_b(self) -> tuple:
        out = [0] * self.n
        for p, i in enumerate(self.perm):
            out[i] = self.b[p]
        return tuple(out)

    def to_canonical_point(self, z):
        z = np.asarray(z)
        return z[..., list(self.perm)]

    def to_user_point(self, w):
        w = np.asarray(w)
        out = np.empty_like(w)
        out[..., list(self.perm)] = w
        return out

    def __str__(self):
        return f"a={self.a}, b={self.b}"


@dataclass(frozen=True)
class MixedMonomial:
    """``coeff * prod z_i^nu_i * conj(z_i)^mu_i``."""

    coeff: complex
    nu: tuple
    mu: tuple

    def __post_init__(self):
        nu = tuple(int(x) for x in self.nu)
        mu = tuple(int(x) for x in self.mu)
        if len(nu) != len(mu):
            raise ValueError("nu and mu must have the same length")
        if any(x < 0 for x in nu + mu):
            raise ValueError("negative exponent")
        object.__setattr__(self, "nu", nu)
        object.__setattr__(self, "mu", mu)

    @property
    def n(self) -> int:
        return len(self.nu)

    @property
    def degree(self) -> int:
        return sum(self.nu) + sum(self.mu)

    @property
    def key(self) -> tuple:
        return (self.nu, self.mu)

    def __mul__(self, other: "MixedMonomial") -> "MixedMonomial":
        if self.n != other.n:
            raise ValueError("dimension mismatch")
        return MixedMonomial(
            self.coeff * other.coeff,
            tuple(x + y for x, y in zip(self.nu, other.nu)),
            tuple(x + y for x, y in zip(self.mu, other.mu)),
        )

    def evaluate(self, z) -> np.ndarray:
        z = np.asarray(z, dtype=complex)
        zc = np.conj(z)
        out = np.full(z.shape[:-1], self.coeff, dtype=complex)
        for i, (p, q) in enumerate(zip(self.nu, self.mu)):
            if p:
                out = out * z[..., i] ** p
            if q:
                out = out * zc[..., i] ** q
        return out

    def real_expansion(self) -> tuple[dict, dict]:
        """Expand in real coordinates ``(x_1, y_1, ..., x_n, y_n)``.

        Returns the real and imaginary parts as dicts mapping exponent tuples
        of length ``2n`` to exact :class:`Fraction` coefficients.
        """
        # (x + iy)^p (x - iy)^q, coordinate by coordinate, exact
        poly = {(): (Fraction(1), Fraction(0))}
        for p, q in zip(self.nu, self.mu):
            factor: dict = {}
            for j in range(p + 1):
                # C(p,j) x^(p-j) (iy)^j
                for l in range(q + 1):
                    c = comb(p, j) * comb(q, l) * (-1) ** l
                    ipow = (j + l) % 4  # i^j * i^l, sign of (-i)^l folded into c
                    unit = [(1, 0), (0, 1), (-1, 0), (0, -1)][ipow]
                    e = (p + q - j - l, j + l)
                    re, im = factor.get(e, (0, 0))
                    factor[e] = (re + c * unit[0], im + c * unit[1])
            new: dict = {}
            for e1, c1 in poly.items():
                for e2, c2 in factor.items():
                    e = e1 + e2
                    re, im = new.get(e, (Fraction(0), Fraction(0)))
                    pr = _gmul(c1, (Fraction(c2[0]), Fraction(c2[1])))
                    new[e] = (re + pr[0], im + pr[1])
            poly = new
        c = _to_gaussian(self.coeff)
        re_part, im_part = {}, {}
        for e, v in poly.items():
            w = _gmul(c, v)
            if w[0]:
                re_part[e] = w[0]
            if w[1]:
                im_part[e] = w[1]
        return re_part, im_part

    def __str__(self):
        parts = []
        for i, (p, q) in enumerate(zip(self.nu, self.mu), start=1):
            if p:
                parts.append(f"z{i}" + (f"^{p}" if p > 1 else ""))
            if q:
                parts.append(f"conj(z{i})" + (f"^{q}" if q > 1 else ""))
        body = "*".join(parts) if parts else "1"
        if self.coeff == 1:
            return body
        return f"({self.coeff})*{body}"


class MixedPolynomial:
    """Finite sum of :class:`MixedMonomial` terms in ``n`` complex variables.

    Terms with the same ``(nu, mu)`` are merged and zero coefficients dropped.
    """

    def __init__(self, terms: Iterable[MixedMonomial], n: int):
        merged: dict = {}
        for t in terms:
            if t.n != n:
                raise ValueError(f"term has {t.n} variables, polynomial has {n}")
            merged[t.key] = merged.get(t.key, 0) + t.coeff
        self.n = int(n)
        self.terms = tuple(
            MixedMonomial(c, nu, mu) for (nu, mu), c in sorted(merged.items()) if c != 0
        )

    def __eq__(self, other):
        if not isinstance(other, MixedPolynomial):
            return NotImplemented
        return self.n == other.n and set(self.terms) == set(other.terms)

    def __hash__(self):
        return hash((self.n, frozenset(self.terms)))

    def __add__(self, other: "MixedPolynomial") -> "MixedPolynomial":
        if self.n != other.n:
            raise ValueError("dimension mismatch")
        return MixedPolynomial(self.terms + other.terms, self.n)

    def __repr__(self):
        return f"MixedPolynomial({self})"

    def __str__(self):
        return " + ".join(str(t) for t in self.terms) if self.terms else "0"

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def evaluate(self, z) -> np.ndarray:
        """Evaluate at ``z`` of shape ``(n,)`` or ``(..., n)``."""
        z = np.asarray(z, dtype=complex)
        if z.shape[-1] != self.n:
            raise ValueError(f"point has {z.shape[-1]} coordinates, expected {self.n}")
        out = np.zeros(z.shape[:-1], dtype=complex)
        for t in self.terms:
            out = out + t.evaluate(z)
        return out

    def evaluate_exact(self, z: Sequence) -> GaussianRational:
        """Exact value at a point with rational (or binary float) parts.

        Coordinates may be ints, floats, complex numbers, Fractions or
        ``(re, im)`` pairs.  Returns ``(Fraction, Fraction)``.
        """
        if len(z) != self.n:
            raise ValueError(f"point has {len(z)} coordinates, expected {self.n}")
        zs = [_to_gaussian(v) for v in z]
        zcs = [(v[0], -v[1]) for v in zs]
        total = (Fraction(0), Fraction(0))
        for t in self.terms:
            val = _to_gaussian(t.coeff)
            for i, (p, q) in enumerate(zip(t.nu, t.mu)):
                val = _gmul(val, _gmul(_gpow(zs[i], p), _gpow(zcs[i], q)))
            total = (total[0] + val[0], total[1] + val[1])
        return total

    def real_expansion(self) -> tuple[dict, dict]:
        """Real and imaginary parts as exact real polynomials in ``(x_i, y_i)``."""
        re_total: dict = {}
        im_total: dict = {}
        for t in self.terms:
            re, im = t.real_expansion()
            for e, c in re.items():
                re_total[e] = re_total.get(e, 0) + c
            for e, c in im.items():
                im_total[e] = im_total.get(e, 0) + c
        return (
            {e: c for e, c in re_total.items() if c},
            {e: c for e, c in im_total.items() if c},
        )


def build_family(E: ExponentData) -> MixedPolynomial:
    """``f_{a,b}`` in canonical coordinates, one unit-coefficient term per index."""
    n = E.n
    terms = []
    for i, (ai, bi) in enumerate(zip(E.a, E.b)):
        nu = [0] * n
        mu = [0] * n
        nu[i] = ai + bi
        mu[i] = bi
        terms.append(MixedMonomial(1, nu, mu))
    return MixedPolynomial(terms, n)


def holomorphic_family(a: Sequence[int]) -> MixedPolynomial:
    """Pham-Brieskorn polynomial ``g_a = sum z_i^a_i`` (no sorting)."""
    n = len(a)
    terms = []
    for i, ai in enumerate(a):
        nu = [0] * n
        nu[i] = int(ai)
        terms.append(MixedMonomial(1, nu, [0] * n))
    return MixedPolynomial(terms, n)


def evaluate(f: MixedPolynomial, z) -> np.ndarray:
    return f.evaluate(z)


def _lowest_degree(expansion: dict):
    return min((sum(e) for e in expansion), default=None)


def multiplicity(f: MixedPolynomial) -> int:
    """Lowest total real degree in the real-coordinate Taylor expansion."""
    re, im = f.real_expansion()
    degs = [d for d in (_lowest_degree(re), _lowest_degree(im)) if d is not None]
    if not degs:
        raise ValueError("multiplicity of the zero polynomial is undefined")
    return min(degs)


def initial_form(f: MixedPolynomial) -> MixedPolynomial:
    """Sum of the terms of minimal degree."""
    if f.is_zero:
        raise ValueError("initial form of the zero polynomial is undefined")
    m = multiplicity(f)
    return MixedPolynomial([t for t in f.terms if t.degree == m], f.n)


def lowest_forms(f: MixedPolynomial) -> tuple[dict, dict]:
    """Lowest-degree homogeneous parts of ``Re f`` and ``Im f`` separately."""
    out = []
    for part in f.real_expansion():
        d = _lowest_degree(part)
        out.append({e: c for e, c in part.items() if sum(e) == d})
    return out[0], out[1]


def evaluate_real_polynomial(poly: dict, x: np.ndarray) -> np.ndarray:
    """Evaluate a ``{exponent tuple: coeff}`` real polynomial at rows of ``x``."""
    x = np.asarray(x, dtype=float)
    out = np.zeros(x.shape[:-1])
    for e, c in poly.items():
        term = np.full(x.shape[:-1], float(c))
        for j, p in enumerate(e):
            if p:
                term = term * x[..., j] ** p
        out = out + term
    return out


def _rank(rows: list[list[Fraction]]) -> int:
    rows = [list(r) for r in rows]
    rank = 0
    ncols = len(rows[0]) if rows else 0
    for col in range(ncols):
        pivot = next((r for r in range(rank, len(rows)) if rows[r][col] != 0), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        for r in range(len(rows)):
            if r != rank and rows[r][col] != 0:
                factor = rows[r][col] / rows[rank][col]
                rows[r] = [x - factor * y for x, y in zip(rows[r], rows[rank])]
        rank += 1
    return rank


def rank_at_origin(f: MixedPolynomial) -> int:
    """Rank of the real differential at 0 of ``f`` seen as ``R^2n -> R^2``."""
    dim = 2 * f.n
    jac = []
    for part in f.real_expansion():
        row = [Fraction(0)] * dim
        for e, c in part.items():
            if sum(e) == 1:
                row[e.index(1)] = Fraction(c)
        jac.append(row)
    return _rank(jac)


class JacobianTerm(NamedTuple):
    matrix: np.ndarray
    det: complex


def jacobian_term(a_i: int, b_i: int, z: complex) -> JacobianTerm:
    """Wirtinger-type 2x2 matrix of one family term and its determinant.

    Rows are the ``z``/``conj(z)`` derivatives of ``2 Re g`` and ``2i Im g``
    for ``g = z^(a+b) conj(z)^b``, scaled by 1/2.  The determinant equals
    ``(b^2 - (a+b)^2) / 2 * |z|^(2(a + 2b - 1))``.
    """
    if a_i + b_i < 1:
        raise ValueError("need a_i + b_i >= 1")
    z = complex(z)
    zc = z.conjugate()
    s = a_i + b_i

    def mono(c, p, q):
        # zero coefficient kills possibly negative powers
        return 0j if c == 0 else c * z ** p * zc ** q

    A = mono(s, s - 1, b_i)
    B = mono(b_i, b_i - 1, s)
    C = mono(b_i, s, b_i - 1)
    D = mono(s, b_i, s - 1)
    M = 0.5 * np.array([[A + B, C + D], [A - B, C - D]], dtype=complex)
    det = M[0, 0] * M[1, 1] - M[0, 1] * M[1, 0]
    return JacobianTerm(M, complex(det))


def jacobian_det_closed_form(a_i: int, b_i: int, z: complex) -> float:
    m = a_i + 2 * b_i
    return 0.5 * (b_i**2 - (a_i + b_i) ** 2) * abs(z) ** (2 * (m - 1))


def has_isolated_singularity(E: ExponentData) -> bool:
    return all(ai >= 1 for ai in E.a)
