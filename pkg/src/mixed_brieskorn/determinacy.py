"""
Weighted homogeneity, filtrations and bi-Lipschitz triviality of deformations.

A conjugate variable carries the same weight as its holomorphic partner,
because ``z -> lambda^r z`` scales ``conj(z)`` identically for real lambda.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from math import lcm
from typing import Optional, Sequence, Union

from .classifier import is_topological_submersion
from .mixed_core import ExponentData, MixedMonomial, MixedPolynomial, build_family

LENIENT_THRESHOLD = False  # default for the lenient_threshold switch


@dataclass(frozen=True)
class WeightedHomType:
    r: tuple  # Fractions
    d: Fraction

    @property
    def n(self) -> int:
        return len(self.r)

    @property
    def r_max(self) -> Fraction:
        return max(self.r)

    @property
    def r_min(self) -> Fraction:
        return min(self.r)


def _weights_from_multiplicities(m: Sequence[int]) -> WeightedHomType:
    if any(mi < 1 for mi in m):
        raise ValueError("every term needs positive multiplicity")
    d = lcm(*m)
    return WeightedHomType(tuple(Fraction(d, mi) for mi in m), Fraction(d))


def weighted_type(E: ExponentData) -> WeightedHomType:
    """``d = lcm(a_i + 2 b_i)`` and ``r_i = d / (a_i + 2 b_i)``."""
    if any(ai == 0 for ai in E.a):
        raise ValueError("weighted type requires a_i >= 1 for all i")
    return _weights_from_multiplicities(E.m)


def filtration(m: MixedMonomial, w: WeightedHomType) -> Fraction:
    if m.n != w.n:
        raise ValueError(f"monomial has {m.n} variables, weights have {w.n}")
    return sum((ri * (p + q) for ri, p, q in zip(w.r, m.nu, m.mu)), Fraction(0))


def threshold(w: WeightedHomType, lenient_threshold: Optional[bool] = None) -> Fraction:
    """``d + r_max - r_min``, or ``d - r_max + r_min`` when ``lenient_threshold``."""
    if lenient_threshold is None:
        lenient_threshold = LENIENT_THRESHOLD
    if lenient_threshold:
        return w.d - w.r_max + w.r_min
    return w.d + w.r_max - w.r_min


@dataclass(frozen=True)
class DeformationTerm:
    monomial: MixedMonomial
    target_component: int = 1

    def __post_init__(self):
        if self.target_component not in (1, 2):
            raise ValueError("target_component must be 1 (real) or 2 (imaginary)")
        if self.monomial.degree == 0:
            raise ValueError("deformation terms must be non-constant")


class Triviality(str, Enum):
    ALONG_INTERVAL = "TrivialAlongInterval"
    SMALL_T = "TrivialSmallT"
    UNKNOWN = "Unknown"


_RANK = {Triviality.UNKNOWN: 0, Triviality.SMALL_T: 1, Triviality.ALONG_INTERVAL: 2}


@dataclass(frozen=True)
class TrivialityVerdict:
    status: Triviality
    threshold_used: Fraction
    filtration_found: Optional[Fraction]  # None when no terms hit any component
    per_component: dict = field(default_factory=dict)

    @property
    def interval_status(self) -> Triviality:
        """Answer to "trivial along [0, 1]?": only the strict inequality decides."""
        if self.status is Triviality.ALONG_INTERVAL:
            return Triviality.ALONG_INTERVAL
        return Triviality.UNKNOWN

    def rank(self) -> int:
        return _RANK[self.status]


def _compare(fl: Fraction, thr: Fraction) -> Triviality:
    if fl > thr:
        return Triviality.ALONG_INTERVAL
    if fl == thr:
        return Triviality.SMALL_T
    return Triviality.UNKNOWN


def check_deformation_triviality(
    E: Union[ExponentData, WeightedHomType],
    terms: Sequence[DeformationTerm],
    lenient_threshold: Optional[bool] = None,
) -> TrivialityVerdict:
    """Compare the filtration of a deformation against the determinacy threshold.

    ``E`` may be a family member or an explicit weighted type (for germs
    outside the family, e.g. ``|z|^2``).  The verdict is the weakest over
    the two target components; components without terms impose nothing.
    """
    w = E if isinstance(E, WeightedHomType) else weighted_type(E)
    if not terms:
        raise ValueError("need at least one deformation term")
    thr = threshold(w, lenient_threshold)
    per: dict = {}
    for t in terms:
        fl = filtration(t.monomial, w)
        c = t.target_component
        per[c] = fl if c not in per else min(per[c], fl)
    statuses = [_compare(fl, thr) for fl in per.values()]
    status = min(statuses, key=_RANK.__getitem__)
    return TrivialityVerdict(status, thr, min(per.values()), per)


def deformed(E: ExponentData, terms: Sequence[DeformationTerm], t: float = 1.0) -> MixedPolynomial:
    """``f_{a,b} + t * Theta`` with both target components folded into one
    complex polynomial (imaginary-component terms get a factor ``i``)."""
    extra = [
        MixedMonomial(t * term.monomial.coeff * (1 if term.target_component == 1 else 1j),
                      term.monomial.nu, term.monomial.mu)
        for term in terms
    ]
    return build_family(E) + MixedPolynomial(extra, E.n)


@dataclass
class DeffamVerdict:
    ok: bool
    failed: list
    l_required: int
    threshold_used: Fraction
    filtration_found: Optional[Fraction]
    normal_form: Optional[MixedPolynomial] = None
    topological_form: Optional[MixedPolynomial] = None
    submersion: bool = False
    notes: list = field(default_factory=list)


def _padded(E_a, E_b, l_exponents, holomorphic: bool) -> MixedPolynomial:
    m = len(l_exponents)
    n = m + len(E_a)
    terms = []
    for i, li in enumerate(l_exponents):
        e = [0] * n
        e[i] = li
        terms.append(MixedMonomial(1, e, e))
    for j, (aj, bj) in enumerate(zip(E_a, E_b)):
        nu = [0] * n
        mu = [0] * n
        if holomorphic:
            nu[m + j] = aj
        else:
            nu[m + j] = aj + bj
            mu[m + j] = bj
        terms.append(MixedMonomial(1, nu, mu))
    return MixedPolynomial(terms, n)


def check_deffam_hypotheses(
    p_jet_exponents: Sequence[int],
    l: int,
    E: ExponentData,
    q_tilde_terms: Sequence[DeformationTerm] = (),
    lenient_threshold: Optional[bool] = None,
) -> DeffamVerdict:
    """Check the hypotheses for ``f = p(w) + sum z_i^a_i q_i`` to be
    bi-Lipschitz equivalent to ``sum |w_i|^(2 l_i) + f_{a,b}``.

    ``q_tilde_terms`` live in the ``z`` variables only (``E.n`` of them).
    "l sufficiently large" is checked as ``l >= max(d, 2 max l_i)``.
    """
    ls = tuple(int(x) for x in p_jet_exponents)
    if not ls:
        raise ValueError("need at least one w-variable")
    failed = []
    notes = []
    w = _weights_from_multiplicities(E.m)
    thr = threshold(w, lenient_threshold)
    l_required = max(int(w.d), 2 * max(ls))

    if any(li < 1 for li in ls):
        failed.append("hypothesis 1: every l_i must be >= 1")
    if not l > len(ls):
        failed.append(f"hypothesis 1: need l > m (got l={l}, m={len(ls)})")
    elif l < l_required:
        failed.append(f"hypothesis 1: l={l} below the required jet order {l_required}")

    for t in q_tilde_terms:
        if t.monomial.n != E.n:
            failed.append("hypothesis 2: q-tilde term has the wrong number of variables")
            break

    fl = None
    if q_tilde_terms and "hypothesis 2" not in " ".join(failed):
        fl = min(filtration(t.monomial, w) for t in q_tilde_terms)
        if fl < thr:
            failed.append(f"hypothesis 4: filtration {fl} < threshold {thr}")
    notes.append(f"d = {w.d}, r = {tuple(str(x) for x in w.r)}")

    out = DeffamVerdict(
        ok=not failed,
        failed=failed,
        l_required=l_required,
        threshold_used=thr,
        filtration_found=fl,
        submersion=is_topological_submersion(E),
        notes=notes,
    )
    if out.ok:
        out.normal_form = _padded(E.a, E.b, ls, holomorphic=False)
        out.topological_form = _padded(E.a, E.b, ls, holomorphic=True)
    return out
