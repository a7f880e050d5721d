"""Affine Weyl group elements and the enumerations built on inversion sets.

An element is stored with a reduced word, the images of the simple roots
(integer coordinates in the simple-root basis) and its inversion set
``N(w) = {alpha > 0 : w^{-1} alpha < 0}``.  Two elements are equal exactly
when their inversion sets agree.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Callable, Sequence, Union

from . import linalg as la
from .errors import CapExceeded, ChartMismatch, NotApplicable, NotHermitian
from .linalg import Mat, Vec
from .rootdata import (
    AffineDatum,
    AffineRoot,
    AffineWeight,
    Coords,
    FiniteWeylElement,
    Parts,
    Realization,
)

DEFAULT_CAP = 4_000_000
CAP_ENV = "LEVELONE_ENUM_CAP"


def default_cap() -> int:
    value = os.environ.get(CAP_ENV)
    return int(value) if value else DEFAULT_CAP


def _is_positive(m: Coords) -> bool:
    return all(x >= 0 for x in m)


def _neg(m: Coords) -> Coords:
    return tuple(-x for x in m)


def _system(d: Union[AffineDatum, Realization]) -> Realization:
    return d.realization if isinstance(d, AffineDatum) else d


@dataclass(frozen=True, eq=False)
class WeylElement:
    """An element of the Weyl group of a realization."""

    system: Realization
    word: tuple[int, ...]
    images: tuple[Coords, ...]
    inversions: frozenset[Coords]

    @classmethod
    def identity(cls, d: Union[AffineDatum, Realization]) -> WeylElement:
        sysm = _system(d)
        units = tuple(tuple(int(i == j) for i in range(sysm.size)) for j in range(sysm.size))
        return cls(sysm, (), units, frozenset())

    @classmethod
    def from_word(cls, d: Union[AffineDatum, Realization], word: Sequence[int]) -> WeylElement:
        """The element ``s_{i_1} ... s_{i_l}``; the stored word is re-derived and reduced."""
        w = cls.identity(d)
        for j in word:
            w = w.times_simple(j)
        return w.canonical()

    @property
    def length(self) -> int:
        return len(self.inversions)

    @property
    def chart(self) -> str:
        return self.system.chart

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, WeylElement)
            and self.system.chart == other.system.chart
            and self.inversions == other.inversions
        )

    def __hash__(self) -> int:
        return hash((self.system.chart, self.inversions))

    def __repr__(self) -> str:
        return f"WeylElement({self.label()})"

    def label(self) -> str:
        return "Id" if not self.word else "".join(f"s{j}" for j in self.word)

    def image(self, m: Coords) -> Coords:
        """``w(beta)`` for a root given in simple-root coordinates."""
        size = self.system.size
        out = [0] * size
        for j, mj in enumerate(m):
            if mj:
                col = self.images[j]
                for i in range(size):
                    out[i] += mj * col[i]
        return tuple(out)

    def times_simple(self, j: int) -> WeylElement:
        """``w s_j``, keeping the inversion set exact (the word may become non-reduced)."""
        sysm = self.system
        img_j = self.images[j]
        row = sysm.cartan[j]
        images = tuple(
            tuple(a - row[i] * b for a, b in zip(self.images[i], img_j)) for i in range(sysm.size)
        )
        if _is_positive(img_j):
            inversions = self.inversions | {img_j}
        else:
            inversions = self.inversions - {_neg(img_j)}
        return WeylElement(sysm, self.word + (j,), images, inversions)

    def canonical(self) -> WeylElement:
        """Same element with its lexicographically smallest reduced word."""
        sysm = self.system
        word = []
        remaining = set(self.inversions)
        while remaining:
            for j in range(sysm.size):
                unit = tuple(int(i == j) for i in range(sysm.size))
                if unit in remaining:
                    break
            else:
                raise ValueError("inversion set is not the inversion set of an element")
            word.append(j)
            remaining.discard(unit)
            remaining = {sysm.reflect_root(m, j) for m in remaining}
        return WeylElement(sysm, tuple(word), self.images, self.inversions)

    def __mul__(self, other: WeylElement) -> WeylElement:
        if other.system.chart != self.system.chart:
            raise ChartMismatch(f"{self.system.chart} vs {other.system.chart}")
        w = self
        for j in other.word:
            w = w.times_simple(j)
        return w.canonical()

    def inverse(self) -> WeylElement:
        return WeylElement.from_word(self.system, tuple(reversed(self.word)))

    def sorted_inversions(self) -> list[Coords]:
        sysm = self.system
        return sorted(self.inversions, key=lambda m: (sysm.level_of(m), sysm.realize(m)[0]))

    def inversion_roots(self) -> list[AffineRoot]:
        return [self.system.to_root(m) for m in self.sorted_inversions()]

    def inversion_sum(self) -> Parts:
        """``<N(w)>``, the sum of the inversion set, as a level-zero weight."""
        total = [0] * self.system.size
        for m in self.inversions:
            for i, x in enumerate(m):
                total[i] += x
        return self.system.root_parts(tuple(total))

    @cached_property
    def action(self) -> Mat:
        """Matrix of ``w`` on the chart (coroot values, then the ``d'`` value)."""
        sysm = self.system
        size = sysm.size
        mat = la.identity(size + 1)
        for j in reversed(self.word):
            refl = _chart_reflection(sysm, j)
            mat = la.matmul(refl, mat)
        return mat

    def apply_parts(self, parts: Parts) -> Parts:
        for j in reversed(self.word):
            parts = self.system.reflect(parts, j)
        return parts


def _chart_reflection(sysm: Realization, j: int) -> Mat:
    size = sysm.size
    rows = [[Fraction(int(a == b)) for b in range(size + 1)] for a in range(size + 1)]
    for a in range(size):
        rows[a][j] -= sysm.cartan[a][j]
    rows[size][j] -= sysm.simple_level[j]
    return tuple(tuple(r) for r in rows)


def apply(w: WeylElement, weight: AffineWeight) -> AffineWeight:
    """Exact image of a chart weight under ``w``."""
    if weight.chart != w.chart:
        raise ChartMismatch(f"weight on {weight.chart}, element on {w.chart}")
    return AffineWeight(weight.chart, la.matvec(w.action, weight.values))


# ---------------------------------------------------------------------------
# Enumerations


def enumerate_coset_reps(
    d: Union[AffineDatum, Realization],
    allowed: Callable[[AffineRoot], bool],
    cap: int | None = None,
) -> list[WeylElement]:
    """All ``w`` whose inversion set lies inside ``allowed``, by BFS over the weak order.

    Parents are processed in lexicographic order of their words and simple
    reflections in increasing index, so each element is first reached through
    its lexicographically smallest reduced word.
    """
    sysm = _system(d)
    cap = default_cap() if cap is None else cap
    verdicts: dict[Coords, bool] = {}

    def ok(m: Coords) -> bool:
        if m not in verdicts:
            verdicts[m] = bool(allowed(sysm.to_root(m)))
        return verdicts[m]

    frontier = [WeylElement.identity(sysm)]
    seen = {frozenset()}
    out: list[WeylElement] = []
    while frontier:
        out.extend(frontier)
        nxt = []
        for w in frontier:
            for j in range(sysm.size):
                img = w.images[j]
                if not _is_positive(img) or not ok(img):
                    continue
                inv = w.inversions | {img}
                if inv in seen:
                    continue
                seen.add(inv)
                if len(seen) > cap:
                    raise CapExceeded(f"more than {cap} elements; check the predicate")
                nxt.append(w.times_simple(j))
        frontier = nxt
    return out


def _degree_predicate(d: AffineDatum, test: Callable[[Fraction], bool]) -> Callable[[AffineRoot], bool]:
    return lambda root: root.is_real and test(root.level)


def even_coset_reps(d: AffineDatum, cap: int | None = None) -> list[WeylElement]:
    """Minimal coset representatives for the reflection subgroup of even-degree roots."""
    return enumerate_coset_reps(d, _degree_predicate(d, lambda lev: lev % 2 == 1), cap)


def enumerate_minuscule(d: AffineDatum, cap: int | None = None) -> list[WeylElement]:
    """Elements whose inversion sets consist of roots of degree one."""
    return enumerate_coset_reps(d, _degree_predicate(d, lambda lev: lev == 1), cap)


def spin_predicate(d: AffineDatum, mu) -> Callable[[AffineRoot], bool]:
    """Membership in the complement of the roots of ``L'`` proportional to roots of k-hat."""
    w0 = mu.w0
    dk = d.delta_k
    scales = (Fraction(1, 4), Fraction(1, 2), Fraction(1), Fraction(2), Fraction(4))

    def allowed(root: AffineRoot) -> bool:
        image = w0.apply(root.finite)
        for c in scales:
            if (root.level / c).denominator == 1 and la.scale(1 / c, image) in dk:
                return False
        return True

    return allowed


def odd_coset_reps(d: AffineDatum, mu, cap: int | None = None) -> list[WeylElement]:
    """Minimal coset representatives in the Weyl group of ``L'`` for the spin case."""
    return enumerate_coset_reps(mu.lprime, spin_predicate(d, mu), cap)


# ---------------------------------------------------------------------------
# Abelian subspaces


@dataclass(frozen=True)
class AbelianSubspace:
    weights: frozenset[Vec]
    witness: WeylElement
    plus: int = 0
    minus: int = 0

    @property
    def size(self) -> int:
        return len(self.weights)


def abelian_subspaces(d: AffineDatum, cap: int | None = None) -> list[AbelianSubspace]:
    """The b_0-stable abelian subspaces ``A = {-abar : alpha in N(w)}`` of p."""
    out = []
    for w in enumerate_minuscule(d, cap):
        weights = frozenset(la.scale(-1, d.finite_part(m)) for m in w.inversions)
        out.append(AbelianSubspace(weights, w))
    return out


def hermitian_fundamental_subspaces(d: AffineDatum, cap: int | None = None) -> list[AbelianSubspace]:
    """Subspaces in ``Sigma`` containing ``-abar_i``, with their split by ``+-Delta^+(p)``."""
    if not d.is_hermitian:
        raise NotHermitian(f"{d.name} is not of Hermitian type")
    i = d.hermitian_index
    target = la.scale(-1, d.abar[i])
    positive = set(d.positive_p_weights)
    out = []
    for a in abelian_subspaces(d, cap):
        if target in a.weights:
            plus = sum(1 for v in a.weights if v in positive)
            out.append(AbelianSubspace(a.weights, a.witness, plus, a.size - plus))
    return out


def is_long(d: AffineDatum, node: int) -> bool:
    return d.norms[node] == max(d.norms)


def w_sigma_inversions(d: AffineDatum) -> frozenset[Coords]:
    """``(alpha_p + Delta_k^+) cap Delta^+  u  {alpha_p, alpha_p + k delta}``."""
    p = d.p_index
    unit = tuple(int(i == p) for i in range(d.n + 1))
    roots = set(d.positive_real_roots(3))
    out = {unit, tuple(u + d.k * a for u, a in zip(unit, d.marks))}
    for m in d.delta_k_positive:
        cand = tuple(u + x for u, x in zip(unit, m))
        if cand in roots:
            out.add(cand)
    return frozenset(out)


def w_sigma(d: AffineDatum) -> WeylElement:
    """The exceptional coset representative attached to a long ``alpha_p``."""
    if d.is_hermitian or d.is_complex or d.p_index == 0 or not is_long(d, d.p_index):
        raise NotApplicable("w_sigma exists only for p != 0 with alpha_p long")
    inversions = w_sigma_inversions(d)
    w = WeylElement(d.realization, (), (), inversions).canonical()
    return WeylElement.from_word(d, w.word)


def w_sigma_involution(d: AffineDatum, cap: int | None = None) -> dict[WeylElement, WeylElement]:
    """The map ``u -> w_sigma u`` on the even coset representatives.

    The returned dictionary is keyed by every representative; whether the
    images stay inside the set is left for the caller to check.
    """
    ws = w_sigma(d)
    return {u: ws * u for u in even_coset_reps(d, cap)}


def is_finite_word(w: WeylElement) -> bool:
    """Membership in the subgroup generated by ``s_1, ..., s_n``."""
    return 0 not in w.word


# ---------------------------------------------------------------------------
# Extended affine Weyl group


@dataclass(frozen=True)
class ExtendedElement:
    """``t_gamma * w`` with ``gamma`` in ``h_0^*`` (via the form) and ``w`` finite.

    The action is on homogeneous coordinates ``(f, level, e)`` of the
    untwisted algebra attached to the finite root system ``abar_1..abar_n``:
    ``lambda = f + level * Lambda_0 + e * delta``.
    """

    datum: AffineDatum
    translation: Vec
    finite_part: FiniteWeylElement

    def apply_parts(self, parts: Parts) -> Parts:
        d = self.datum
        f, ell, e = parts
        f = self.finite_part.apply(f)
        gamma = self.translation
        shift = d.fdot(f, gamma) + Fraction(1, 2) * d.fdot(gamma, gamma) * ell
        return (la.add(f, la.scale(ell, gamma)), ell, e - shift)


def homogeneous_rho(d: AffineDatum) -> Parts:
    """``rho-hat = rho + h^vee Lambda_0`` of the untwisted algebra on ``abar_1..abar_n``."""
    rows = [[2 * x / d.fdot(d.abar[i], d.abar[i]) for x in la.matvec(d.finite_gram, d.abar[i])] for i in range(1, d.n + 1)]
    rho = la.matvec(la.inverse(rows), [Fraction(1)] * d.n)
    theta = d.theta_f
    coroot_theta = [2 * x / d.fdot(theta, theta) for x in la.matvec(d.finite_gram, theta)]
    h_dual = 1 + sum(c * r for c, r in zip(coroot_theta, rho))
    return (rho, h_dual, Fraction(0))


def extended_translation(d: AffineDatum, gamma: Sequence, finite: FiniteWeylElement | None = None) -> ExtendedElement:
    """The translation ``t_gamma`` (optionally composed with a finite element)."""
    if finite is None:
        finite = FiniteWeylElement((), la.identity(d.n))
    return ExtendedElement(d, tuple(Fraction(x) for x in gamma), finite)


def fundamental_coweight(d: AffineDatum, i: int) -> Vec:
    """``omega_i^vee`` realized in ``h_0^*``: the vector with ``(omega, abar_j) = delta_ij``."""
    rhs = [Fraction(int(j == i)) for j in range(1, d.n + 1)]
    return la.matvec(la.inverse(d.finite_gram), rhs)


def alcove_stabilizer(d: AffineDatum) -> list[ExtendedElement]:
    """``Z``: the identity and ``t_{omega_i^vee} w_i`` for the minuscule coweights.

    ``w_i`` is the longest element of the parabolic subgroup fixing
    ``omega_i^vee`` times the longest element of the finite Weyl group, so
    that the product maps the fundamental alcove to itself.
    """
    theta = d.theta_f
    out = [extended_translation(d, la.zero(d.n))]
    full = d.longest_finite(range(1, d.n + 1))
    for i in range(1, d.n + 1):
        omega = fundamental_coweight(d, i)
        if d.fdot(theta, omega) != 1:
            continue
        stab = d.longest_finite([j for j in range(1, d.n + 1) if j != i])
        w_i = FiniteWeylElement(stab.word + full.word, la.matmul(stab.matrix, full.matrix))
        out.append(extended_translation(d, omega, w_i))
    return out
