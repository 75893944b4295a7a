"""
Topological and bi-Lipschitz decision procedures for the family.

Verdicts are tri-state.  ``EQUIVALENT`` is returned only when a sufficiency
argument applies (identical germs up to relabeling, both submersions, equal
``a`` for the topological type); ``NOT_EQUIVALENT`` only when a known
necessary condition fails; everything else is ``UNDETERMINED``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Sequence

import numpy as np

from .mixed_core import ExponentData, MixedMonomial, MixedPolynomial


class Status(str, Enum):
    EQUIVALENT = "Equivalent"
    NOT_EQUIVALENT = "NotEquivalent"
    UNDETERMINED = "Undetermined"


@dataclass(frozen=True)
class EquivalenceVerdict:
    status: Status
    reason: str
    witness: Optional[str] = None

    @property
    def equivalent(self) -> bool:
        return self.status is Status.EQUIVALENT


@dataclass(frozen=True)
class TopNormalForm:
    """``sum_{i<=k} |z_i|^(2 b_i) + sum_{i>k} z_i^(a_i)``."""

    k: int
    zero_block_b: tuple
    positive_a: tuple

    @property
    def n(self) -> int:
        return self.k + len(self.positive_a)

    def as_polynomial(self) -> MixedPolynomial:
        n = self.n
        terms = []
        for i, bi in enumerate(self.zero_block_b):
            e = [0] * n
            e[i] = bi
            terms.append(MixedMonomial(1, e, e))
        for j, ai in enumerate(self.positive_a):
            e = [0] * n
            e[self.k + j] = ai
            terms.append(MixedMonomial(1, e, [0] * n))
        return MixedPolynomial(terms, n)

    def __str__(self):
        parts = [f"|z{i + 1}|^{2 * b}" for i, b in enumerate(self.zero_block_b)]
        parts += [f"z{self.k + j + 1}" + (f"^{a}" if a != 1 else "")
                  for j, a in enumerate(self.positive_a)]
        return " + ".join(parts)


def topological_normal_form(E: ExponentData) -> TopNormalForm:
    k = E.k_zero
    return TopNormalForm(k, E.b[:k], E.a[k:])


def apply_phi(E: ExponentData, z) -> np.ndarray:
    """Conjugating homeomorphism: ``w_i = z_i |z_i|^(2 b_i / a_i)``.

    Coordinates with ``a_i = 0`` are left alone.  Works on arrays of
    canonical-order points of shape ``(..., n)``.
    """
    z = np.asarray(z, dtype=complex)
    w = z.copy()
    r = np.abs(z)
    for i, (ai, bi) in enumerate(zip(E.a, E.b)):
        if ai >= 1 and bi:
            w[..., i] = z[..., i] * r[..., i] ** (2.0 * bi / ai)
    return w


def apply_phi_inverse(E: ExponentData, w) -> np.ndarray:
    w = np.asarray(w, dtype=complex)
    z = w.copy()
    r = np.abs(w)
    for i, (ai, bi) in enumerate(zip(E.a, E.b)):
        if ai >= 1 and bi:
            e = 2.0 * bi / (ai + 2 * bi)
            ri = r[..., i]
            with np.errstate(divide="ignore", invalid="ignore"):
                zi = np.where(ri > 0, w[..., i] / np.where(ri > 0, ri, 1.0) ** e, 0)
            z[..., i] = zi
    return z


def is_topological_submersion(E: ExponentData) -> bool:
    return any(ai == 1 for ai in E.a)


def _check_dims(E1: ExponentData, E2: ExponentData):
    if E1.n != E2.n:
        raise ValueError(f"dimension mismatch: {E1.n} vs {E2.n}")


def topologically_equivalent(E1: ExponentData, E2: ExponentData) -> EquivalenceVerdict:
    _check_dims(E1, E2)
    s1, s2 = is_topological_submersion(E1), is_topological_submersion(E2)
    if s1 and s2:
        return EquivalenceVerdict(Status.EQUIVALENT, "submfam", "both topological submersions")
    if s1 != s2:
        return EquivalenceVerdict(
            Status.NOT_EQUIVALENT, "submfam", "exactly one side has some a_i = 1"
        )
    if E1.a == E2.a:
        if E1.k_zero:
            # radial homeomorphisms t -> t^(d/b) on the zero block
            return EquivalenceVerdict(
                Status.EQUIVALENT, "topfor+radial", f"a = {E1.a}, zero block radial rescaling"
            )
        return EquivalenceVerdict(Status.EQUIVALENT, "topfor", f"a = {E1.a}")
    if E1.k_zero == 0 and E2.k_zero == 0:
        return EquivalenceVerdict(Status.NOT_EQUIVALENT, "etsu", f"a = {E1.a} != {E2.a}")
    detail = (
        f"zero blocks differ: {E1.k_zero} vs {E2.k_zero}"
        if E1.k_zero != E2.k_zero
        else f"a = {E1.a} != {E2.a}"
    )
    return EquivalenceVerdict(Status.NOT_EQUIVALENT, "cortop", detail)


def _cycle_notation(mapping: Sequence[int]) -> str:
    seen = set()
    cycles = []
    for start in range(len(mapping)):
        if start in seen or mapping[start] == start:
            seen.add(start)
            continue
        cyc = []
        i = start
        while i not in seen:
            seen.add(i)
            cyc.append(i + 1)
            i = mapping[i]
        cycles.append("(" + " ".join(map(str, cyc)) + ")")
    return "".join(cycles) or "()"


def joint_permutation(E1: ExponentData, E2: ExponentData) -> Optional[tuple]:
    """User-index map ``sigma`` with ``(a, b)[i] == (c, d)[sigma[i]]``, if any."""
    if E1 != E2:
        return None
    sigma = [0] * E1.n
    for p in range(E1.n):
        sigma[E1.perm[p]] = E2.perm[p]
    return tuple(sigma)


def bilipschitz_equivalent(E1: ExponentData, E2: ExponentData) -> EquivalenceVerdict:
    top = topologically_equivalent(E1, E2)
    if top.status is Status.NOT_EQUIVALENT:
        return EquivalenceVerdict(Status.NOT_EQUIVALENT, f"class1/{top.reason}", top.witness)
    sigma = joint_permutation(E1, E2)
    if sigma is not None:
        return EquivalenceVerdict(Status.EQUIVALENT, "class1", _cycle_notation(sigma))
    if not is_topological_submersion(E1):
        # all entries >= 2, or a zero block followed by entries >= 2
        return EquivalenceVerdict(
            Status.NOT_EQUIVALENT, "class1", "no joint permutation matches (a, b) to (c, d)"
        )
    m1, m2 = sorted(E1.m), sorted(E2.m)
    if m1 != m2:
        return EquivalenceVerdict(
            Status.NOT_EQUIVALENT, "class1", f"multiplicities {m1} vs {m2}"
        )
    return EquivalenceVerdict(
        Status.UNDETERMINED, "class1", f"submersions with equal multiplicities {m1}"
    )


def bilip_vs_holomorphic(E: ExponentData, c: Sequence[int]) -> EquivalenceVerdict:
    """Compare ``f_{a,b}`` with the holomorphic ``g_c``."""
    c = tuple(int(x) for x in c)
    if len(c) != E.n:
        raise ValueError(f"dimension mismatch: {E.n} vs {len(c)}")
    if any(x < 1 for x in c):
        raise ValueError("holomorphic exponents must be >= 1")
    G = ExponentData(c, (0,) * len(c))
    if not is_topological_submersion(E):
        if E == G:
            return EquivalenceVerdict(Status.EQUIVALENT, "class1", "identical germs")
        return EquivalenceVerdict(
            Status.NOT_EQUIVALENT, "class1", "requires a = c and b = 0"
        )
    if not is_topological_submersion(G):
        return EquivalenceVerdict(Status.NOT_EQUIVALENT, "submfam", "c has no entry equal to 1")
    if sorted(E.m) != sorted(G.a):
        return EquivalenceVerdict(
            Status.NOT_EQUIVALENT, "class1", f"multiplicities {sorted(E.m)} vs c = {sorted(G.a)}"
        )
    if E == G:
        return EquivalenceVerdict(Status.EQUIVALENT, "class1", "identical germs")
    return EquivalenceVerdict(
        Status.UNDETERMINED, "class1", "a_i + 2 b_i = c_i holds but b != 0"
    )


@dataclass
class LipschitzClasses:
    a: tuple
    b_bound: int
    classes: list = field(default_factory=list)  # lists of user-order b vectors
    undetermined_pairs: list = field(default_factory=list)

    @property
    def count(self) -> int:
        return len(self.classes)

    @property
    def representatives(self) -> list:
        return [members[0] for members in self.classes]

    @property
    def flagged(self) -> list:
        """Class indices touched by an undetermined comparison."""
        out = set()
        for i, j in self.undetermined_pairs:
            out.add(self._class_of(i))
            out.add(self._class_of(j))
        return sorted(out)

    def _class_of(self, b):
        for idx, members in enumerate(self.classes):
            if b in members:
                return idx
        raise KeyError(b)


def enumerate_lipschitz_classes(a: Sequence[int], b_bound: int) -> LipschitzClasses:
    """Partition ``{b : 0 <= b_i <= b_bound}`` by bi-Lipschitz verdicts.

    Only ``EQUIVALENT`` verdicts merge classes; undetermined pairs stay apart
    and are listed in ``undetermined_pairs``.
    """
    a = tuple(int(x) for x in a)
    if b_bound < 0:
        raise ValueError("b_bound must be >= 0")
    ExponentData(a, (0,) * len(a))  # validates a
    bs = list(itertools.product(range(b_bound + 1), repeat=len(a)))
    data = {b: ExponentData(a, b) for b in bs}
    out = LipschitzClasses(a, b_bound)
    for b in bs:
        placed = False
        for members in out.classes:
            v = bilipschitz_equivalent(data[b], data[members[0]])
            if v.status is Status.EQUIVALENT:
                members.append(b)
                placed = True
                break
        if not placed:
            out.classes.append([b])
    for i, j in itertools.combinations(bs, 2):
        if bilipschitz_equivalent(data[i], data[j]).status is Status.UNDETERMINED:
            out.undetermined_pairs.append((i, j))
    return out
