"""Affine root data of twisted loop algebras attached to involutions.

An involution of a simple (or "complex", i.e. ``k + k`` with the switch)
Lie algebra g is encoded by its twist coordinates ``(s_0, ..., s_n; k)``.  From it we
build the affine algebra ``L(g, sigma)`` together with

* the Cartan matrix, marks and comarks taken from :mod:`levelone.tables`,
* an exact invariant form in the standard normalization ``(alpha_i, alpha_i) =
  2 a_i^vee / a_i``,
* the fixed-point algebra k, its simple ideals and their affine data,
* the weights ``Delta(p)`` of the -1 eigenspace and their classification,
* the auxiliary algebra ``L'`` used for the spin module.

Coordinates.  ``h_0^*`` is written in the basis ``abar_1, ..., abar_n`` of
finite parts of the simple roots ``alpha_1..alpha_n``.  A weight of the
affine algebra is handled in "parts" form ``(f, ell, e)`` meaning
``f + ell * Lambda + e * delta'`` where ``Lambda`` vanishes on ``h_0`` and on
``d'``.  The public chart (:class:`AffineWeight`) stores the values on the
simple coroots followed by the value on ``d'``.
"""

from __future__ import annotations

import math
import re
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

from . import linalg as la
from . import tables
from .errors import InvalidInvolution, NotApplicable, UnsupportedType
from .linalg import Mat, Vec

Coords = tuple[int, ...]
Parts = tuple[Vec, Fraction, Fraction]

ROOT_CACHE_LEVEL = 4


# ---------------------------------------------------------------------------
# Input types


@dataclass(frozen=True)
class LieType:
    """A simple type ``X_n``, or ``complex:X_n`` for ``g = X_n + X_n``."""

    letter: str
    rank: int
    is_complex: bool = False

    def __post_init__(self) -> None:
        letter, rank = tables.normalize_type(self.letter, self.rank)
        object.__setattr__(self, "letter", letter)
        object.__setattr__(self, "rank", rank)

    @classmethod
    def parse(cls, text: str) -> LieType:
        raw = text.strip()
        is_complex = False
        if raw.lower().startswith("complex:"):
            is_complex = True
            raw = raw.split(":", 1)[1]
        match = re.fullmatch(r"\s*([A-Ga-g])\s*_?\s*(\d+)\s*", raw)
        if not match:
            raise UnsupportedType(f"cannot parse Lie type {text!r}")
        return cls(match.group(1).upper(), int(match.group(2)), is_complex)

    def __str__(self) -> str:
        base = f"{self.letter}{self.rank}"
        return f"complex:{base}" if self.is_complex else base


@dataclass(frozen=True)
class InvolutionSpec:
    """twist coordinates ``(s_0, ..., s_n; k)`` of an automorphism."""

    s: tuple[int, ...]
    k: int

    @classmethod
    def parse(cls, text: str, k: int) -> InvolutionSpec:
        try:
            s = tuple(int(x) for x in text.replace(";", ",").split(",") if x.strip())
        except ValueError as exc:
            raise InvalidInvolution(f"cannot parse sigma {text!r}") from exc
        return cls(s, int(k))

    @classmethod
    def at_node(cls, nodes: int, p: int, k: int) -> InvolutionSpec:
        """The type with a single ``s_p = 1`` on a diagram with ``nodes`` nodes."""
        if not 0 <= p < nodes:
            raise InvalidInvolution(f"node {p} outside 0..{nodes - 1}")
        return cls(tuple(int(i == p) for i in range(nodes)), k)

    def __str__(self) -> str:
        return f"({','.join(map(str, self.s))};{self.k})"


@dataclass(frozen=True)
class AffineRoot:
    """A root ``level * delta' + finite`` with its multiplicity."""

    level: Fraction
    finite: Vec
    mult: int = 1

    @property
    def is_real(self) -> bool:
        return any(self.finite)


@dataclass(frozen=True)
class AffineWeight:
    """A weight on a fixed chart: coroot values followed by the ``d'`` value."""

    chart: str
    values: tuple[Fraction, ...]

    def __add__(self, other: AffineWeight) -> AffineWeight:
        _same_chart(self, other)
        return AffineWeight(self.chart, la.add(self.values, other.values))

    def __sub__(self, other: AffineWeight) -> AffineWeight:
        _same_chart(self, other)
        return AffineWeight(self.chart, la.sub(self.values, other.values))


def _same_chart(a: AffineWeight, b: AffineWeight) -> None:
    from .errors import ChartMismatch

    if a.chart != b.chart:
        raise ChartMismatch(f"{a.chart} vs {b.chart}")


# ---------------------------------------------------------------------------
# Generic affine realization


def root_bfs(
    cartan: Sequence[Sequence[int]],
    levels: Sequence[Fraction],
    max_level: Fraction,
    nodes: Iterable[int] | None = None,
) -> list[Coords]:
    """Positive real roots of level at most ``max_level``.

    Roots are grown from the simple roots by reflections that raise the
    height.  Levels never decrease along the way, so pruning on the level is
    exact.
    """
    size = len(cartan)
    node_list = list(range(size) if nodes is None else nodes)
    max_level = Fraction(max_level)

    def level(m: Coords) -> Fraction:
        return sum((levels[i] * m[i] for i in range(size) if m[i]), Fraction(0))

    start = []
    for j in node_list:
        unit = tuple(int(i == j) for i in range(size))
        if level(unit) <= max_level:
            start.append(unit)
    seen = set(start)
    queue = deque(start)
    while queue:
        m = queue.popleft()
        for j in node_list:
            c = sum(m[i] * cartan[j][i] for i in range(size) if m[i])
            if c < 0:
                new = list(m)
                new[j] -= c
                new_t = tuple(new)
                if new_t not in seen and level(new_t) <= max_level:
                    seen.add(new_t)
                    queue.append(new_t)
    return sorted(seen, key=lambda m: (level(m), sum(m), m))


@dataclass(eq=False)
class Realization:
    """Simple roots ``beta_j = f_j + lev_j delta'`` over an exact form on ``h_0^*``.

    ``kappa`` is the value ``(Lambda, delta')`` of the level-one generator,
    which fixes how the level enters coroot pairings.
    """

    chart: str
    cartan: tables.Matrix
    simple_finite: tuple[Vec, ...]
    simple_level: tuple[Fraction, ...]
    gram: Mat
    kappa: Fraction

    def __post_init__(self) -> None:
        self.size = len(self.cartan)
        self.dim = len(self.gram)
        self.norms = tuple(self.dot(f, f) for f in self.simple_finite)

    def dot(self, x: Sequence, y: Sequence) -> Fraction:
        return la.bilinear(self.gram, x, y)

    def root_pair(self, m: Coords, j: int) -> int:
        row = self.cartan[j]
        return sum(m[i] * row[i] for i in range(self.size) if m[i])

    def reflect_root(self, m: Coords, j: int) -> Coords:
        c = self.root_pair(m, j)
        if c == 0:
            return m
        new = list(m)
        new[j] -= c
        return tuple(new)

    def level_of(self, m: Coords) -> Fraction:
        return sum((self.simple_level[i] * m[i] for i in range(self.size) if m[i]), Fraction(0))

    def realize(self, m: Coords) -> tuple[Vec, Fraction]:
        f = la.zero(self.dim)
        for i, mi in enumerate(m):
            if mi:
                f = la.add(f, la.scale(mi, self.simple_finite[i]))
        return f, self.level_of(m)

    def to_root(self, m: Coords, mult: int = 1) -> AffineRoot:
        f, lev = self.realize(m)
        return AffineRoot(lev, f, mult)

    def pair(self, parts: Parts, j: int) -> Fraction:
        f, ell, _ = parts
        fj = self.simple_finite[j]
        return 2 * (self.dot(f, fj) + self.kappa * ell * self.simple_level[j]) / self.norms[j]

    def reflect(self, parts: Parts, j: int) -> Parts:
        c = self.pair(parts, j)
        if c == 0:
            return parts
        f, ell, e = parts
        return (la.sub(f, la.scale(c, self.simple_finite[j])), ell, e - c * self.simple_level[j])

    def form(self, x: Parts, y: Parts) -> Fraction:
        return self.dot(x[0], y[0]) + self.kappa * (x[1] * y[2] + x[2] * y[1])

    def to_chart(self, parts: Parts) -> AffineWeight:
        values = tuple(self.pair(parts, j) for j in range(self.size)) + (Fraction(parts[2]),)
        return AffineWeight(self.chart, values)

    @cached_property
    def _chart_inverse(self) -> Mat:
        rows = []
        for j in range(self.size):
            fj = self.simple_finite[j]
            row = [2 * x / self.norms[j] for x in la.matvec(self.gram, fj)]
            row.append(2 * self.kappa * self.simple_level[j] / self.norms[j])
            rows.append(row)
        return la.inverse(rows)

    def from_chart(self, weight: AffineWeight) -> Parts:
        _same_chart(weight, AffineWeight(self.chart, ()))
        sol = la.matvec(self._chart_inverse, weight.values[:-1])
        return (tuple(sol[:-1]), sol[-1], Fraction(weight.values[-1]))

    def root_parts(self, m: Coords) -> Parts:
        f, lev = self.realize(m)
        return (f, Fraction(0), lev)

    def positive_roots(self, max_level, nodes: Iterable[int] | None = None) -> list[Coords]:
        return root_bfs(self.cartan, self.simple_level, Fraction(max_level), nodes)


# ---------------------------------------------------------------------------
# Weights of k-hat


@dataclass(frozen=True)
class KWeight:
    """A weight of k-hat: per-ideal fundamental coefficients, center value, delta_k coefficient.

    ``coeffs[S][t]`` is the value on the coroot labelled ``t`` in the affine
    table of the simple ideal ``S`` (label 0 is the affine node).  ``center``
    is the eigenvalue of the central element when k has a center.
    """

    coeffs: tuple[tuple[Fraction, ...], ...]
    center: Fraction | None
    delta: Fraction

    def __add__(self, other: KWeight) -> KWeight:
        return KWeight(
            tuple(la.add(a, b) for a, b in zip(self.coeffs, other.coeffs)),
            None if self.center is None else self.center + other.center,
            self.delta + other.delta,
        )

    def __sub__(self, other: KWeight) -> KWeight:
        return self + other.scaled(-1)

    def scaled(self, c) -> KWeight:
        c = Fraction(c)
        return KWeight(
            tuple(la.scale(c, a) for a in self.coeffs),
            None if self.center is None else c * self.center,
            c * self.delta,
        )

    def shift_delta(self, amount) -> KWeight:
        return KWeight(self.coeffs, self.center, self.delta + Fraction(amount))

    def mod_delta(self) -> KWeight:
        return KWeight(self.coeffs, self.center, Fraction(0))

    def is_dominant_integral(self) -> bool:
        return all(x >= 0 and Fraction(x).denominator == 1 for row in self.coeffs for x in row)


# ---------------------------------------------------------------------------
# Structure of k


@dataclass(frozen=True)
class Ideal:
    """A simple ideal of k with its affine data."""

    letter: str
    rank: int
    nodes: tuple[int, ...]
    theta: Coords
    theta_norm: Fraction
    h_dual: int
    c: Fraction
    n: Fraction
    j: Fraction
    marks: tuple[int, ...]
    comarks: tuple[int, ...]

    @property
    def name(self) -> str:
        return f"{self.letter}{self.rank}"


@dataclass(frozen=True)
class KStructure:
    simple_ideals: tuple[Ideal, ...]
    pi_k: tuple[int, ...]
    delta_k_per_delta_prime: Fraction
    Lambda0k: KWeight
    rho_k_hat: KWeight
    rho_n: KWeight
    center_dim: int
    center_node: int | None
    center_level: Fraction

    @property
    def rank(self) -> int:
        return len(self.pi_k) + self.center_dim

    def describe(self) -> str:
        parts = [f"{s.name}^(1)" for s in self.simple_ideals]
        if self.center_dim:
            parts.append("C")
        return " x ".join(parts)


@dataclass(frozen=True)
class RootClassification:
    compact: frozenset[Vec]
    noncompact: frozenset[Vec]
    complex_: frozenset[Vec]
    p_weights: tuple[Vec, ...]
    positive_p: tuple[Vec, ...]


@dataclass(frozen=True)
class FiniteWeylElement:
    """An element of the Weyl group of ``h_0^*``, as a word in finite-part reflections."""

    word: tuple[int, ...]
    matrix: Mat

    def apply(self, v: Sequence) -> Vec:
        return la.matvec(self.matrix, v)

    @cached_property
    def inverse_matrix(self) -> Mat:
        return la.inverse(self.matrix)

    def apply_inverse(self, v: Sequence) -> Vec:
        return la.matvec(self.inverse_matrix, v)


@dataclass(eq=False)
class MuStructure:
    pi_f: tuple[Vec, ...]
    delta_f_parity: tuple[frozenset[Vec], frozenset[Vec]]
    lprime_kind: str
    lprime: Realization
    lprime_rho: Parts
    w0: FiniteWeylElement

    @property
    def lprime_simple_roots(self) -> tuple[AffineRoot, ...]:
        return tuple(
            AffineRoot(lev, f) for f, lev in zip(self.lprime.simple_finite, self.lprime.simple_level)
        )


# ---------------------------------------------------------------------------
# The datum


def _connected_components(nodes: Sequence[int], cartan: tables.Matrix) -> list[tuple[int, ...]]:
    remaining = sorted(nodes)
    comps = []
    while remaining:
        start = remaining[0]
        comp = {start}
        stack = [start]
        while stack:
            x = stack.pop()
            for y in remaining:
                if y not in comp and cartan[x][y] != 0:
                    comp.add(y)
                    stack.append(y)
        comps.append(tuple(sorted(comp)))
        remaining = [x for x in remaining if x not in comp]
    return comps


def _match_diagram(nodes: tuple[int, ...], cartan: tables.Matrix) -> tuple[str, int, tuple[int, ...]]:
    """Identify a connected sub-diagram with a finite type in the standard affine labeling.

    Returns the type and the lexicographically smallest node assignment
    ``phi`` with ``phi[t-1]`` the node carrying standard label ``t``.
    """
    r = len(nodes)
    for letter, rank in tables.finite_candidates(r):
        target = tables.finite_cartan(letter, rank)
        best: list[tuple[int, ...]] = []

        def extend(assigned: list[int]) -> None:
            if best:
                return
            t = len(assigned)
            if t == r:
                best.append(tuple(assigned))
                return
            for node in nodes:
                if node in assigned:
                    continue
                if cartan[node][node] != target[t][t]:
                    continue
                if all(
                    cartan[node][assigned[u]] == target[t][u] and cartan[assigned[u]][node] == target[u][t]
                    for u in range(t)
                ):
                    extend(assigned + [node])

        extend([])
        if best:
            return letter, rank, best[0]
    raise UnsupportedType(f"sub-diagram on nodes {nodes} matches no finite type")


@dataclass(eq=False)
class AffineDatum:
    """Root datum of ``L(g, sigma)`` and the derived data of ``k``."""

    lie_type: LieType
    sigma: InvolutionSpec
    table: tables.AffineTable

    def __post_init__(self) -> None:
        t = self.table
        self.n = t.rank
        self.k = self.sigma.k
        self.marks = t.marks
        self.comarks = t.comarks
        self.cartan = t.cartan
        self.g_rank = 2 * self.lie_type.rank if self.lie_type.is_complex else self.lie_type.rank
        self.norms = tuple(Fraction(2 * t.comarks[i], t.marks[i]) for i in range(self.n + 1))
        self.gram: Mat = tuple(
            tuple(Fraction(self.cartan[i][j]) * self.norms[i] / 2 for j in range(self.n + 1))
            for i in range(self.n + 1)
        )
        self.finite_gram: Mat = tuple(row[1:] for row in self.gram[1:])
        a0 = t.marks[0]
        abar0 = tuple(Fraction(-t.marks[i], a0) for i in range(1, self.n + 1))
        units = [tuple(Fraction(int(i == j)) for i in range(self.n)) for j in range(self.n)]
        self.abar: tuple[Vec, ...] = (abar0,) + tuple(units)
        self.delta_prime_per_delta = Fraction(self.k, 2)
        self.h_dual = t.dual_coxeter
        nonzero = [i for i, x in enumerate(self.sigma.s) if x]
        self.hermitian_index: int | None = None
        if len(nonzero) == 2:
            self.hermitian_index = nonzero[1]
            self.p_index = nonzero[1]
        else:
            self.p_index = nonzero[0]
        chart = f"{t.name}|{','.join(map(str, self.sigma.s))}"
        self.chart = chart + "|hat"
        self.realization = Realization(
            self.chart,
            self.cartan,
            self.abar,
            tuple(Fraction(x) for x in self.sigma.s),
            self.finite_gram,
            Fraction(self.k, 2),
        )

    # -- basic invariants -------------------------------------------------

    @property
    def is_complex(self) -> bool:
        return self.lie_type.is_complex

    @property
    def is_hermitian(self) -> bool:
        return self.hermitian_index is not None

    @property
    def name(self) -> str:
        return f"{self.lie_type} {self.sigma}"

    @property
    def simple_roots(self) -> tuple[AffineRoot, ...]:
        return tuple(self.realization.to_root(tuple(int(i == j) for i in range(self.n + 1))) for j in range(self.n + 1))

    @property
    def delta_coords(self) -> Coords:
        return tuple(self.marks)

    @property
    def rho_hat(self) -> AffineWeight:
        return AffineWeight(self.chart, (Fraction(1),) * (self.n + 1) + (Fraction(0),))

    @property
    def is_a2n(self) -> bool:
        return self.k == 2 and self.marks[0] == 2

    def degree(self, m: Coords) -> int:
        """The ``d'``-degree (sigma-height) of a root given in simple-root coordinates."""
        return sum(mi * si for mi, si in zip(m, self.sigma.s))

    # -- chart conversions on h-hat^* ---------------------------------------

    def to_parts(self, weight: AffineWeight) -> Parts:
        """Split a chart weight into ``(f, lambda(K), lambda(d'))``."""
        if weight.chart != self.chart:
            from .errors import ChartMismatch

            raise ChartMismatch(f"{weight.chart} vs {self.chart}")
        vals = weight.values
        level = sum((self.comarks[i] * vals[i] for i in range(self.n + 1)), Fraction(0))
        k_prime = Fraction(self.k, 2) * level
        h_vals = [vals[i] - 2 * self.sigma.s[i] * k_prime / self.norms[i] for i in range(1, self.n + 1)]
        f = la.matvec(self._finite_cartan_inverse, h_vals)
        return (f, level, Fraction(vals[-1]))

    def from_parts(self, parts: Parts) -> AffineWeight:
        return self.realization.to_chart(parts)

    def root_weight(self, m: Coords) -> AffineWeight:
        """A root, given in simple-root coordinates, as a chart weight."""
        values = tuple(
            Fraction(sum(m[j] * self.cartan[i][j] for j in range(self.n + 1))) for i in range(self.n + 1)
        )
        return AffineWeight(self.chart, values + (Fraction(self.degree(m)),))

    @cached_property
    def _finite_cartan_inverse(self) -> Mat:
        return la.inverse([row[1:] for row in self.cartan[1:]])

    @cached_property
    def chart_gram(self) -> Mat:
        """The Gram matrix of the form on the chart coordinates."""
        size = self.n + 2
        m = [[Fraction(0)] * size for _ in range(size)]
        for i in range(self.n + 1):
            for j in range(self.n + 1):
                m[i][j] = 2 * Fraction(self.cartan[j][i]) / self.norms[i]
            m[i][self.n + 1] = m[self.n + 1][i] = 2 * Fraction(self.sigma.s[i]) / self.norms[i]
        return la.inverse(m)

    def form(self, x: AffineWeight, y: AffineWeight) -> Fraction:
        return la.bilinear(self.chart_gram, x.values, y.values)

    def level(self, weight: AffineWeight) -> Fraction:
        return sum((self.comarks[i] * weight.values[i] for i in range(self.n + 1)), Fraction(0))

    # -- roots ----------------------------------------------------------------

    @cached_property
    def _root_cache(self) -> list[Coords]:
        return self.realization.positive_roots(ROOT_CACHE_LEVEL)

    def positive_real_roots(self, max_degree) -> list[Coords]:
        """Positive real roots of ``d'``-degree at most ``max_degree`` (simple-root coordinates)."""
        max_degree = Fraction(max_degree)
        if max_degree <= ROOT_CACHE_LEVEL:
            return [m for m in self._root_cache if self.degree(m) <= max_degree]
        return self.realization.positive_roots(max_degree)

    def imaginary_multiplicity(self, j: int) -> int:
        """Multiplicity of ``j delta'`` (zero when ``j delta'`` is not a root)."""
        if j <= 0:
            return 0
        return self.n if j % 2 == 0 else self.g_rank - self.n

    def finite_part(self, m: Coords) -> Vec:
        return self.realization.realize(m)[0]

    @cached_property
    def delta_k_positive(self) -> tuple[Coords, ...]:
        return tuple(m for m in self._root_cache if self.degree(m) == 0)

    @cached_property
    def delta_k(self) -> frozenset[Vec]:
        out = set()
        for m in self.delta_k_positive:
            f = self.finite_part(m)
            out.add(f)
            out.add(la.scale(-1, f))
        return frozenset(out)

    @cached_property
    def p_roots(self) -> tuple[Coords, ...]:
        """Real roots of degree one; their finite parts are the nonzero weights of p."""
        return tuple(m for m in self._root_cache if self.degree(m) == 1)

    @cached_property
    def p_weights(self) -> tuple[Vec, ...]:
        weights = sorted({self.finite_part(m) for m in self.p_roots})
        if self.g_rank > self.n:
            weights.append(la.zero(self.n))
        return tuple(weights)

    @cached_property
    def delta_f_positive(self) -> tuple[Vec, ...]:
        """Positive roots of the finite system with simple roots ``abar_1..abar_n``."""
        coords = root_bfs(self.cartan, [Fraction(0)] * (self.n + 1), Fraction(0), range(1, self.n + 1))
        return tuple(self.finite_part(m) for m in coords)

    @cached_property
    def delta_f(self) -> frozenset[Vec]:
        return frozenset(self.delta_f_positive) | frozenset(la.scale(-1, v) for v in self.delta_f_positive)

    @cached_property
    def theta_f(self) -> Vec:
        return max(self.delta_f_positive, key=lambda v: (sum(v), v))

    def fdot(self, x: Sequence, y: Sequence) -> Fraction:
        return la.bilinear(self.finite_gram, x, y)

    def coroot_pair(self, f: Sequence, v: Sequence) -> Fraction:
        return 2 * self.fdot(f, v) / self.fdot(v, v)

    def reflect_finite(self, f: Sequence, v: Sequence) -> Vec:
        return la.sub(f, la.scale(self.coroot_pair(f, v), v))

    # -- k-hat ----------------------------------------------------------------

    @cached_property
    def pi_0(self) -> tuple[int, ...]:
        return tuple(i for i, x in enumerate(self.sigma.s) if x == 0)

    @cached_property
    def ideals(self) -> tuple[Ideal, ...]:
        out = []
        for comp in _connected_components(self.pi_0, self.cartan):
            letter, rank, phi = _match_diagram(comp, self.cartan)
            table = tables.untwisted(letter, rank)
            theta = [0] * (self.n + 1)
            for t, node in enumerate(phi, start=1):
                theta[node] = table.marks[t]
            theta_t = tuple(theta)
            norm = la.bilinear(self.gram, theta_t, theta_t)
            c = Fraction(2) / norm
            n_s = self.k * c
            j_s = n_s * self.h_dual - table.dual_coxeter
            out.append(
                Ideal(letter, rank, phi, theta_t, norm, table.dual_coxeter, c, n_s, j_s, table.marks, table.comarks)
            )
        return tuple(out)

    @cached_property
    def k_nodes(self) -> tuple[int, ...]:
        """Nodes of ``Pi_k`` in ideal order, each ideal in standard label order."""
        return tuple(node for ideal in self.ideals for node in ideal.nodes)

    @property
    def center_dim(self) -> int:
        return int(len(self.pi_0) < self.n)

    @cached_property
    def _kweight_solver(self) -> Mat:
        rows = []
        for node in self.k_nodes:
            v = self.abar[node]
            rows.append([2 * x / self.norms[node] for x in la.matvec(self.finite_gram, v)])
        if self.center_dim:
            i = self.hermitian_index
            rows.append([Fraction(int(j == i - 1)) for j in range(self.n)])
        return la.inverse(rows)

    def kweight(self, f: Sequence, levels: Sequence, e) -> KWeight:
        """Build a k-hat weight from its finite part, per-ideal levels and delta_k coefficient."""
        coeffs = []
        for ideal, ell in zip(self.ideals, levels):
            theta_bar = self.finite_part(ideal.theta)
            row = [Fraction(ell) - 2 * self.fdot(f, theta_bar) / ideal.theta_norm]
            for node in ideal.nodes:
                row.append(2 * self.fdot(f, self.abar[node]) / self.norms[node])
            coeffs.append(tuple(row))
        center = Fraction(f[self.hermitian_index - 1]) if self.center_dim else None
        return KWeight(tuple(coeffs), center, Fraction(e))

    def kweight_parts(self, w: KWeight) -> tuple[Vec, tuple[Fraction, ...], Fraction]:
        rhs = [x for row in w.coeffs for x in row[1:]]
        if self.center_dim:
            rhs.append(w.center)
        f = la.matvec(self._kweight_solver, rhs) if rhs else la.zero(self.n)
        levels = tuple(
            sum((Fraction(ideal.comarks[t]) * row[t] for t in range(ideal.rank + 1)), Fraction(0))
            for ideal, row in zip(self.ideals, w.coeffs)
        )
        return f, levels, w.delta

    def kweight_finite(self, f: Sequence, e=0) -> KWeight:
        """A level-zero k-hat weight with finite part ``f``."""
        return self.kweight(f, [0] * len(self.ideals), e)

    @cached_property
    def k_structure(self) -> KStructure:
        ideals = self.ideals
        lam0 = KWeight(
            tuple(tuple([ideal.j] + [Fraction(0)] * ideal.rank) for ideal in ideals),
            Fraction(0) if self.center_dim else None,
            Fraction(0),
        )
        rho_k = KWeight(
            tuple(tuple([Fraction(1)] * (ideal.rank + 1)) for ideal in ideals),
            Fraction(0) if self.center_dim else None,
            Fraction(0),
        )
        half = la.zero(self.n)
        for v in self.positive_p_weights:
            half = la.add(half, v)
        rho_n = self.kweight_finite(la.scale(Fraction(1, 2), half))
        return KStructure(
            simple_ideals=ideals,
            pi_k=self.k_nodes,
            delta_k_per_delta_prime=Fraction(2),
            Lambda0k=lam0,
            rho_k_hat=rho_k,
            rho_n=rho_n,
            center_dim=self.center_dim,
            center_node=self.hermitian_index,
            center_level=Fraction(self.h_dual) if self.center_dim else Fraction(0),
        )

    # -- compatible positive system ---------------------------------------------

    @cached_property
    def _pi_k_basis_inverse(self) -> Mat | None:
        if self.center_dim:
            return None
        rows = [self.abar[node] for node in self.k_nodes]
        return la.inverse(la.transpose(rows))

    def is_k_positive(self, v: Sequence) -> bool:
        """Whether a root of k is positive for the system with simple roots ``Pi_k``."""
        if self.center_dim:
            coords = self._hermitian_k_coords(v)
        else:
            coords = la.matvec(self._pi_k_basis_inverse, v)
        return all(c >= 0 for c in coords)

    @cached_property
    def _hermitian_basis_inverse(self) -> Mat:
        rows = [self.abar[node] for node in self.k_nodes]
        rows.append(tuple(Fraction(int(j == self.hermitian_index - 1)) for j in range(self.n)))
        return la.inverse(la.transpose(rows))

    def _hermitian_k_coords(self, v: Sequence) -> Vec:
        # Pi_k together with the central direction is a basis of h_0^*.
        return la.matvec(self._hermitian_basis_inverse, v)[:-1]

    def longest_element(self, nodes: Sequence[int]) -> FiniteWeylElement:
        """Longest element of the reflection group generated by the finite parts of ``nodes``."""
        matrix = la.identity(self.n)
        word: list[int] = []
        while True:
            for j in sorted(nodes):
                image = la.matvec(matrix, self.abar[j])
                if self.is_k_positive(image):
                    refl = self._reflection_matrix(self.abar[j])
                    matrix = la.matmul(matrix, refl)
                    word.append(j)
                    break
            else:
                return FiniteWeylElement(tuple(word), matrix)

    def longest_finite(self, nodes: Iterable[int]) -> FiniteWeylElement:
        """Longest element of a parabolic subgroup of the finite Weyl group on ``abar_1..abar_n``."""
        nodes = sorted(nodes)
        matrix = la.identity(self.n)
        word: list[int] = []
        while True:
            for j in nodes:
                if all(c >= 0 for c in la.matvec(matrix, self.abar[j])):
                    matrix = la.matmul(matrix, self._reflection_matrix(self.abar[j]))
                    word.append(j)
                    break
            else:
                return FiniteWeylElement(tuple(word), matrix)

    def _reflection_matrix(self, v: Sequence) -> Mat:
        cols = [self.reflect_finite(tuple(Fraction(int(i == j)) for i in range(self.n)), v) for j in range(self.n)]
        return la.transpose(cols)

    @cached_property
    def w0(self) -> FiniteWeylElement:
        """The element ``u u'`` mapping the ``Pi_f``-positive system to one compatible with k."""
        if self.is_complex:
            raise NotApplicable("the compatible-system element is not used in the complex case")
        if 0 not in self.pi_0:
            return FiniteWeylElement((), la.identity(self.n))
        u = self.longest_element(self.pi_0)
        u_prime = self.longest_element([i for i in self.pi_0 if i != 0])
        return FiniteWeylElement(u.word + u_prime.word, la.matmul(u.matrix, u_prime.matrix))

    @cached_property
    def positive_p_weights(self) -> tuple[Vec, ...]:
        """``Delta^+(p)``: nonzero weights ``gamma`` with ``w0^{-1} gamma`` positive for ``Pi_f``."""
        if self.is_complex:
            return tuple(sorted(v for v in self.delta_k if self.is_k_positive(v)))
        w0 = self.w0
        out = []
        for v in self.p_weights:
            if not any(v):
                continue
            back = w0.apply_inverse(v)
            if all(c >= 0 for c in back):
                out.append(v)
        return tuple(sorted(out))

    def long_length(self) -> Fraction:
        return max(self.fdot(v, v) for v in self.delta_f_positive)


# ---------------------------------------------------------------------------
# Operations


def _table_for(t: LieType, sigma: InvolutionSpec) -> tables.AffineTable:
    if t.is_complex:
        table = tables.untwisted(t.letter, t.rank)
        if sigma.k != 2:
            raise InvalidInvolution("the complex case forces k = 2")
        return table
    if sigma.k == 1:
        return tables.untwisted(t.letter, t.rank)
    if sigma.k == 2:
        return tables.twisted(t.letter, t.rank)
    raise UnsupportedType(f"k = {sigma.k} is not an involution twist")


def affine_table(t: LieType, k: int) -> tables.AffineTable:
    """The affine table that carries automorphisms of ``t`` with twist ``k``."""
    return _table_for(t, InvolutionSpec((), k))


def build_affine_datum(t: LieType, sigma: InvolutionSpec) -> AffineDatum:
    """Validate an involution type and build the affine datum of ``L(g, sigma)``."""
    if sigma.k not in (1, 2):
        raise UnsupportedType(f"k = {sigma.k} does not give an order-2 automorphism")
    table = _table_for(t, sigma)
    if len(sigma.s) != table.rank + 1:
        raise InvalidInvolution(
            f"sigma needs {table.rank + 1} entries for {table.name}, got {len(sigma.s)}"
        )
    if any(x < 0 for x in sigma.s):
        raise InvalidInvolution("sigma entries must be non-negative")
    total = sigma.k * sum(a * s for a, s in zip(table.marks, sigma.s))
    if total != 2:
        raise InvalidInvolution(f"kΣaᵢsᵢ ≠ 2 (got {total}) for {table.name}")
    if math.gcd(*sigma.s) != 1:
        raise InvalidInvolution("sigma entries must be relatively prime")
    if t.is_complex and tuple(sigma.s) != (1,) + (0,) * table.rank:
        raise InvalidInvolution("the complex case forces s_0 = 1")
    nonzero = [i for i, x in enumerate(sigma.s) if x]
    if len(nonzero) == 2 and nonzero[0] != 0:
        raise UnsupportedType("Hermitian types are handled with s_0 = 1; rotate the diagram first")
    return AffineDatum(t, sigma, table)


def positive_p_roots(d: AffineDatum, depth) -> list[AffineRoot]:
    """Roots ``(m + 1/2) delta_k + alpha`` of k-hat weight type in p-hat, up to ``depth``.

    The result lives on the k-hat side: ``level`` is the delta_k coefficient.
    """
    depth = Fraction(depth)
    out = []
    zero_mult = d.g_rank - d.n
    m = 0
    while Fraction(2 * m + 1, 2) <= depth:
        lev = Fraction(2 * m + 1, 2)
        for v in d.p_weights:
            if any(v):
                out.append(AffineRoot(lev, v, 1))
            elif zero_mult:
                out.append(AffineRoot(lev, v, zero_mult))
        m += 1
    return out


def classify_roots(d: AffineDatum) -> RootClassification:
    """Split ``Delta_k`` and ``Delta(p)`` into compact, noncompact and complex roots."""
    p_nonzero = frozenset(v for v in d.p_weights if any(v))
    dk = d.delta_k
    return RootClassification(
        compact=frozenset(dk - p_nonzero),
        noncompact=frozenset(p_nonzero - dk),
        complex_=frozenset(dk & p_nonzero),
        p_weights=d.p_weights,
        positive_p=d.positive_p_weights,
    )


def build_lprime(d: AffineDatum) -> MuStructure:
    """Build the algebra ``L'`` whose Weyl group indexes the spin components."""
    if d.is_complex:
        raise NotApplicable("the complex case uses a closed form for the spin module")
    n = d.n
    p = d.p_index
    parity0 = frozenset(v for v in d.delta_f if p == 0 or v[p - 1] % 2 == 0)
    parity1 = frozenset(d.delta_f - parity0)
    theta = d.theta_f
    neg_theta = la.scale(-1, theta)
    mu_gram = tuple(la.scale(Fraction(1, d.k), row) for row in d.finite_gram)
    units = [tuple(Fraction(int(i == j)) for i in range(n)) for j in range(n)]
    if d.k == 1:
        kind = "KMu"
        finite = [neg_theta] + units
        levels = [Fraction(1)] + [Fraction(0)] * n
    elif not d.is_a2n:
        kind = "KMuDual"
        finite, levels = [], []
        for f, lev in [(neg_theta, Fraction(1))] + [(u, Fraction(0)) for u in units]:
            c = 2 / la.bilinear(mu_gram, f, f)
            finite.append(la.scale(c, f))
            levels.append(c * lev)
    else:
        kind = "A2nDual"
        finite = [la.scale(Fraction(1, 2), neg_theta)] + units
        levels = [Fraction(1, 2)] + [Fraction(0)] * n
    size = n + 1
    norms = [la.bilinear(mu_gram, f, f) for f in finite]
    cartan = []
    for i in range(size):
        row = []
        for j in range(size):
            val = 2 * la.bilinear(mu_gram, finite[i], finite[j]) / norms[i]
            if val.denominator != 1:
                raise UnsupportedType("L' realization does not give an integral Cartan matrix")
            row.append(int(val))
        cartan.append(tuple(row))
    real = Realization(
        d.chart.replace("|hat", "|lprime"),
        tuple(cartan),
        tuple(tuple(f) for f in finite),
        tuple(levels),
        mu_gram,
        Fraction(1),
    )
    # rho-hat': value one on every simple coroot, zero on d'.
    rows = []
    for j in range(size):
        fj = finite[j]
        row = [2 * x / norms[j] for x in la.matvec(mu_gram, fj)]
        row.append(2 * levels[j] / norms[j])
        rows.append(row)
    sol = la.matvec(la.inverse(rows), [Fraction(1)] * size)
    rho = (tuple(sol[:-1]), sol[-1], Fraction(0))
    return MuStructure(
        pi_f=tuple(tuple(u) for u in units),
        delta_f_parity=(parity0, parity1),
        lprime_kind=kind,
        lprime=real,
        lprime_rho=rho,
        w0=d.w0,
    )


def order_two_involutions(t: LieType) -> list[InvolutionSpec]:
    """Every involution type of ``t`` in twist coordinates.

    Inner types are either a single node of mark two or a Hermitian pair
    written with ``s_0 = 1``; outer types are a single node of mark one.  The
    complex case has the single type ``(1, 0, ..., 0; 2)``.
    """
    if t.is_complex:
        return [InvolutionSpec.at_node(t.rank + 1, 0, 2)]
    out = []
    inner = tables.untwisted(t.letter, t.rank)
    size = inner.rank + 1
    for p, a in enumerate(inner.marks):
        if a == 2:
            out.append(InvolutionSpec.at_node(size, p, 1))
    for i in range(1, size):
        if inner.marks[i] == 1:
            out.append(InvolutionSpec(tuple(int(j in (0, i)) for j in range(size)), 1))
    try:
        outer = tables.twisted(t.letter, t.rank)
    except UnsupportedType:
        return out
    for p, a in enumerate(outer.marks):
        if a == 1:
            out.append(InvolutionSpec.at_node(outer.rank + 1, p, 2))
    return out
