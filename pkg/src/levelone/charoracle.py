"""Truncated formal characters of k-hat modules and the decomposition check.

Weights of k-hat with fixed per-ideal levels are encoded as integer tuples

    (c_1, ..., c_r, [z], depth2)

where ``c_t`` are the values on the finite simple coroots of k (ideal order,
standard labels ``1..rank`` inside each ideal), ``z`` is the center eigenvalue
relative to the base weight (only when k has a center) and ``depth2`` is twice
the delta_k-degree below the base weight.  All series arithmetic is exact
integer arithmetic on dictionaries keyed by such tuples.
"""

from __future__ import annotations

import warnings
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from .branching import (
    Decomposition,
    decompose_basic_vector,
    decompose_hermitian,
    decompose_spin,
)
from .errors import DepthTooSmallWarning, NotDominant, NotHermitian
from .rootdata import AffineDatum, KWeight

Key = tuple[int, ...]
Poly = dict[Key, int]


def _add(a: Key, b: Key) -> Key:
    return tuple(x + y for x, y in zip(a, b))


def _sub(a: Key, b: Key) -> Key:
    return tuple(x - y for x, y in zip(a, b))


def _as_int(x) -> int:
    x = Fraction(x)
    if x.denominator != 1:
        raise ValueError(f"non-integral coordinate {x}")
    return int(x)


class KSpace:
    """Root data of k-hat in key coordinates."""

    def __init__(self, d: AffineDatum):
        self.datum = d
        self.ideals = d.ideals
        self.has_center = bool(d.center_dim)
        self.blocks: list[tuple[int, int]] = []
        start = 0
        for ideal in self.ideals:
            self.blocks.append((start, ideal.rank))
            start += ideal.rank
        self.r = start
        self.width = self.r + int(self.has_center) + 1
        self.rank = self.r + d.center_dim
        self.comarks = [ideal.comarks[1:] for ideal in self.ideals]
        self.h_duals = [ideal.h_dual for ideal in self.ideals]
        positive = sorted(v for v in d.delta_k if d.is_k_positive(v))
        self.positive_roots: list[Key] = [self.finite_key(v) for v in positive]
        self.roots: list[Key] = self.positive_roots + [tuple(-x for x in k) for k in self.positive_roots]
        self.simple: list[Key] = [self.finite_key(d.abar[node]) for node in d.k_nodes]
        self.thetas: list[Key] = [self.finite_key(d.finite_part(ideal.theta)) for ideal in self.ideals]

    # -- conversions ------------------------------------------------------------

    def finite_key(self, f: Sequence, depth2: int = 0) -> Key:
        """Key of the level-zero weight with finite part ``f`` (charge taken absolutely)."""
        w = self.datum.kweight_finite(f)
        values = [_as_int(x) for row in w.coeffs for x in row[1:]]
        if self.has_center:
            values.append(_as_int(w.center))
        values.append(depth2)
        return tuple(values)

    def levels(self, w: KWeight) -> tuple[Fraction, ...]:
        return tuple(
            sum((Fraction(ideal.comarks[t]) * row[t] for t in range(ideal.rank + 1)), Fraction(0))
            for ideal, row in zip(self.ideals, w.coeffs)
        )

    def key(self, w: KWeight, base: KWeight) -> Key:
        values = [_as_int(x) for row in w.coeffs for x in row[1:]]
        if self.has_center:
            values.append(_as_int(w.center - base.center))
        values.append(_as_int(2 * (base.delta - w.delta)))
        return tuple(values)

    def weight(self, key: Key, base: KWeight) -> KWeight:
        levels = self.levels(base)
        coeffs = []
        for (start, rank), ideal, level in zip(self.blocks, self.ideals, levels):
            c = [Fraction(x) for x in key[start : start + rank]]
            row0 = level - sum((Fraction(ideal.comarks[t + 1]) * c[t] for t in range(rank)), Fraction(0))
            coeffs.append(tuple([row0] + c))
        center = base.center + key[self.r] if self.has_center else None
        return KWeight(tuple(coeffs), center, base.delta - Fraction(key[-1], 2))

    # -- series kernels ---------------------------------------------------------

    def times_one_plus(self, poly: Poly, shift: Key, max2: int, sign: int = 1) -> Poly:
        """Multiply by ``1 + sign * e^shift`` and truncate at ``depth2 <= max2``."""
        out = dict(poly)
        for k, v in poly.items():
            k2 = _add(k, shift)
            if k2[-1] <= max2:
                val = out.get(k2, 0) + sign * v
                if val:
                    out[k2] = val
                else:
                    out.pop(k2, None)
        return out

    def times_geometric(self, poly: Poly, shift: Key, max2: int) -> Poly:
        """Multiply by ``1 / (1 - e^shift)`` for a shift of positive depth."""
        out = defaultdict(int, poly)
        current = poly
        while True:
            nxt = {}
            for k, v in current.items():
                k2 = _add(k, shift)
                if k2[-1] <= max2:
                    nxt[k2] = v
            if not nxt:
                break
            for k, v in nxt.items():
                out[k] += v
            current = nxt
        return {k: v for k, v in out.items() if v}

    def divide_one_minus(self, poly: Poly, root: Key) -> Poly:
        """Exact quotient by ``1 - e^{-root}`` for a positive finite root of k.

        ``Q(x) = sum_{j >= 0} P(x + j root)`` evaluated string by string.
        """
        norm = sum(x * x for x in root)
        strings: dict[Key, list[tuple[int, int]]] = defaultdict(list)
        for k, v in poly.items():
            t = sum(x * y for x, y in zip(k, root)) // norm
            rep = tuple(x - t * y for x, y in zip(k, root))
            strings[rep].append((t, v))
        out: Poly = {}
        for rep, entries in strings.items():
            entries.sort(reverse=True)
            lookup = dict(entries)
            top, bottom = entries[0][0], entries[-1][0]
            running = 0
            for t in range(top, bottom - 1, -1):
                running += lookup.get(t, 0)
                if running:
                    out[tuple(x + t * y for x, y in zip(rep, root))] = running
            if running:
                raise ArithmeticError("numerator is not divisible by the Weyl denominator")
        return out

    def multiply(self, a: Poly, b: Poly, max2: int) -> Poly:
        out: dict[Key, int] = defaultdict(int)
        for kb, vb in b.items():
            if kb[-1] > max2:
                continue
            for ka, va in a.items():
                if ka[-1] + kb[-1] <= max2:
                    out[_add(ka, kb)] += va * vb
        return {k: v for k, v in out.items() if v}

    @lru_cache(maxsize=None)
    def inverse_affine_denominator(self, max2: int) -> tuple[tuple[Key, int], ...]:
        """``1 / prod_{j >= 1} (1 - e^{-j delta})^rank (1 - e^{-j delta + beta})`` to depth ``max2 / 2``."""
        zero = (0,) * (self.width - 1)
        poly: Poly = {zero + (0,): 1}
        for j in range(1, max2 // 2 + 1):
            imag = zero + (2 * j,)
            for _ in range(self.rank):
                poly = self.times_geometric(poly, imag, max2)
            for beta in self.roots:
                poly = self.times_geometric(poly, beta[:-1] + (2 * j,), max2)
        return tuple(sorted(poly.items()))


@lru_cache(maxsize=None)
def kspace(d: AffineDatum) -> KSpace:
    return KSpace(d)


# ---------------------------------------------------------------------------
# Truncated characters


@dataclass
class TruncatedCharacter:
    """Weight multiplicities of a k-hat module down to ``depth`` below ``base``."""

    space: KSpace
    base: KWeight
    depth: Fraction
    entries: Poly = field(default_factory=dict)

    def multiplicity(self, w: KWeight) -> int:
        return self.entries.get(self.space.key(w, self.base), 0)

    def items(self) -> list[tuple[KWeight, int]]:
        return [(self.space.weight(k, self.base), v) for k, v in sorted(self.entries.items(), key=_order)]

    def shells(self) -> list[Fraction]:
        return sorted({Fraction(k[-1], 2) for k in self.entries})

    def __len__(self) -> int:
        return len(self.entries)


def _order(item: tuple[Key, int]) -> tuple:
    key = item[0]
    return (key[-1],) + key[:-1]


def _max2(depth) -> int:
    depth = Fraction(depth)
    if depth < 0:
        raise ValueError("depth must be non-negative")
    return int(2 * depth)


def product_character(d: AffineDatum, parity: str, depth, signed: bool = False) -> TruncatedCharacter:
    """Expand ``ch(X)`` for the basic plus vector (``even``) or spin (``odd``) module.

    With ``signed`` every factor ``1 + e^{-alpha}`` becomes ``1 - e^{-alpha}``,
    which yields ``ch(X^+) - ch(X^-)``.
    """
    space = kspace(d)
    ks = d.k_structure
    max2 = _max2(depth)
    sign = -1 if signed else 1
    zero_mult = d.g_rank - d.n
    nonzero = [v for v in d.p_weights if any(v)]
    width = space.width

    def neg(key: Key) -> Key:
        return tuple(-x for x in key[:-1]) + (key[-1],)

    if parity == "even":
        base = ks.Lambda0k
        poly: Poly = {space.key(base, base): 1}
        for m2 in range(1, max2 + 1, 2):
            for v in nonzero:
                poly = space.times_one_plus(poly, neg(space.finite_key(v, m2)), max2, sign)
            for _ in range(zero_mult):
                poly = space.times_one_plus(poly, (0,) * (width - 1) + (m2,), max2, sign)
    elif parity == "odd":
        base = ks.Lambda0k + ks.rho_n
        poly = {space.key(base, base): 2 ** (zero_mult // 2)}
        for v in d.positive_p_weights:
            poly = space.times_one_plus(poly, neg(space.finite_key(v)), max2, sign)
        for j2 in range(2, max2 + 1, 2):
            for _ in range(zero_mult):
                poly = space.times_one_plus(poly, (0,) * (width - 1) + (j2,), max2, sign)
            for v in nonzero:
                poly = space.times_one_plus(poly, space.finite_key(v, j2), max2, sign)
    else:
        raise ValueError(f"parity must be 'even' or 'odd', got {parity!r}")
    return TruncatedCharacter(space, base, Fraction(depth), poly)


def _check_dominant(space: KSpace, lam: KWeight) -> None:
    if not lam.is_dominant_integral():
        raise NotDominant(f"{lam} is not dominant integral for k-hat")


def _orbit_numerator(space: KSpace, c: Key, levels: Sequence[int], max2: int) -> Poly:
    """``sum epsilon(w) e^{w(lambda + rho) - rho}`` over the Weyl group of k-hat, truncated."""
    shifted = tuple(x + 1 for x in c[: space.r]) + tuple(c[space.r : -1]) + (0,)
    lev = [ell + h for ell, h in zip(levels, space.h_duals)]
    signs = {shifted: 1}
    frontier = [shifted]
    while frontier:
        nxt = []
        for mu in frontier:
            s = -signs[mu]
            for t, alpha in enumerate(space.simple):
                p = mu[t]
                if p > 0:
                    image = tuple(x - p * a for x, a in zip(mu, alpha))
                    if image not in signs:
                        signs[image] = s
                        nxt.append(image)
            for (start, rank), comarks, theta, ell in zip(space.blocks, space.comarks, space.thetas, lev):
                p = ell - sum(comarks[t] * mu[start + t] for t in range(rank))
                if p > 0 and mu[-1] + 2 * p <= max2:
                    image = tuple(x + p * a for x, a in zip(mu[:-1], theta[:-1])) + (mu[-1] + 2 * p,)
                    if image not in signs:
                        signs[image] = s
                        nxt.append(image)
        frontier = nxt
    return {tuple(x - 1 for x in mu[: space.r]) + mu[space.r :]: s for mu, s in signs.items()}


def _irreducible_entries(space: KSpace, lam_key: Key, levels: tuple[int, ...], max2: int) -> Poly:
    poly = _orbit_numerator(space, lam_key, levels, max2)
    for root in space.positive_roots:
        poly = space.divide_one_minus(poly, root)
    inv = dict(space.inverse_affine_denominator(max2))
    return space.multiply(poly, inv, max2)


def irreducible_character(d: AffineDatum, lam: KWeight, depth, base: KWeight | None = None) -> TruncatedCharacter:
    """Character-formula expansion of ``ch L(lam)`` down to ``depth`` below ``base`` (default ``lam``)."""
    space = kspace(d)
    _check_dominant(space, lam)
    base = lam if base is None else base
    max2 = _max2(depth)
    offset = space.key(lam, base)
    if offset[-1] > max2:
        return TruncatedCharacter(space, base, Fraction(depth), {})
    levels = tuple(_as_int(x) for x in space.levels(lam))
    own = tuple(offset[: space.r]) + ((0,) if space.has_center else ()) + (0,)
    entries = _irreducible_entries(space, own, levels, max2 - offset[-1])
    shift = (0,) * space.r + tuple(offset[space.r :])
    return TruncatedCharacter(space, base, Fraction(depth), {_add(k, shift): v for k, v in entries.items()})


# ---------------------------------------------------------------------------
# Verification


@dataclass
class VerifyReport:
    status: str
    depth: Fraction
    residuals: list[tuple[str, KWeight, int]]
    checks: list[str]

    @property
    def ok(self) -> bool:
        return self.status == "ok"

    def to_json(self) -> dict:
        from .linalg import fmt_fraction

        return {
            "status": self.status,
            "depth": fmt_fraction(self.depth),
            "checks": list(self.checks),
            "residuals": [
                {
                    "check": name,
                    "coeffs": [[fmt_fraction(x) for x in row] for row in w.coeffs],
                    "center": None if w.center is None else fmt_fraction(w.center),
                    "delta": fmt_fraction(w.delta),
                    "excess": value,
                }
                for name, w, value in self.residuals
            ],
        }


def _accumulate(
    target: Poly, space: KSpace, base: KWeight, lam: KWeight, factor: int, max2: int
) -> None:
    _check_dominant(space, lam)
    offset = space.key(lam, base)
    if offset[-1] > max2 or offset[-1] < 0 or factor == 0:
        if offset[-1] < 0:
            target[offset] = target.get(offset, 0) - factor
        return
    levels = tuple(_as_int(x) for x in space.levels(lam))
    if levels != tuple(_as_int(x) for x in space.levels(base)):
        raise ValueError(f"component {lam} has the wrong level")
    own = tuple(offset[: space.r]) + ((0,) if space.has_center else ()) + (0,)
    shift = (0,) * space.r + tuple(offset[space.r :])
    for k, v in _irreducible_entries(space, own, levels, max2 - offset[-1]).items():
        k2 = _add(k, shift)
        target[k2] = target.get(k2, 0) - factor * v


def _residual(
    name: str,
    product: TruncatedCharacter,
    terms: Iterable[tuple[KWeight, int]],
    keep=lambda key: True,
) -> list[tuple[str, KWeight, int]]:
    space, base = product.space, product.base
    max2 = _max2(product.depth)
    diff: Poly = {k: v for k, v in product.entries.items() if keep(k)}
    for lam, factor in terms:
        _accumulate(diff, space, base, lam, factor, max2)
    return [(name, space.weight(k, base), v) for k, v in sorted(diff.items(), key=_order) if v and keep(k)]


def _terms(decs: Sequence[Decomposition], sign_of=lambda dec: 1, delta_shift=Fraction(0)) -> list[tuple[KWeight, int]]:
    out = []
    for dec in decs:
        for comp in dec.components:
            out.append((comp.weight.shift_delta(delta_shift), sign_of(dec) * dec.global_multiplier * comp.multiplicity))
    return out


def _depth_warning(depth: Fraction) -> None:
    if depth < 1:
        warnings.warn(f"depth {depth} compares fewer than two delta-shells", DepthTooSmallWarning, stacklevel=3)


def verify(
    d: AffineDatum,
    rep: str,
    depth=2,
    decompositions: Sequence[Decomposition] | None = None,
    charges: Sequence[int] | None = None,
) -> VerifyReport:
    """Compare the product character with the claimed decomposition.

    ``rep`` is ``basic``, ``vector``, ``spin`` or ``all``.  For Hermitian data
    ``charges`` selects the center eigenvalues (relative to the top weight)
    that take part.  ``decompositions`` overrides the library's own output,
    which is how corrupted component lists are tested.
    """
    depth = Fraction(depth)
    _depth_warning(depth)
    reps = ["basic", "vector", "spin"] if rep == "all" else [rep]
    residuals: list[tuple[str, KWeight, int]] = []
    checks: list[str] = []
    if d.center_dim:
        if charges is None:
            raise NotHermitian("a charge window is required when k has a center")
        for r in reps:
            residuals += _verify_hermitian(d, r, depth, list(charges), decompositions)
            checks.append(f"{r}[q in {list(charges)}]")
        return VerifyReport("ok" if not residuals else "failed", depth, residuals, checks)
    for r in reps:
        if r in ("basic", "vector"):
            eps = 0 if r == "basic" else 1
            decs = decompositions if decompositions is not None else [decompose_basic_vector(d, eps)]
            product = product_character(d, "even", depth)
            keep = (lambda key, e=eps: key[-1] % 2 == e)
            residuals += _residual(r, product, _terms(decs, delta_shift=Fraction(-eps, 2)), keep)
            checks.append(r)
        elif r == "spin":
            decs = decompositions if decompositions is not None else decompose_spin(d)
            product = product_character(d, "odd", depth)
            residuals += _residual("spin", product, _terms(decs))
            checks.append("spin")
            if d.g_rank == d.n and len(decs) == 2:
                signed = product_character(d, "odd", depth, signed=True)
                sign_of = lambda dec: 1 if dec.module_id == "SpinTop" else -1
                residuals += _residual("spin-signed", signed, _terms(decs, sign_of))
                checks.append("spin-signed")
        else:
            raise ValueError(f"unknown representation {r!r}")
    return VerifyReport("ok" if not residuals else "failed", depth, residuals, checks)


def _verify_hermitian(
    d: AffineDatum, rep: str, depth: Fraction, charges: list[int], decompositions
) -> list[tuple[str, KWeight, int]]:
    parity = "odd" if rep == "spin" else "even"
    product = product_character(d, parity, depth)
    space = product.space
    eps = 1 if rep == "vector" else 0
    if decompositions is not None:
        decs = list(decompositions)
    else:
        decs = [decompose_hermitian(d, rep, q) for q in charges]
    window = set(charges)

    def keep(key: Key) -> bool:
        if key[space.r] not in window:
            return False
        return rep == "spin" or key[-1] % 2 == eps

    terms = _terms(decs, delta_shift=Fraction(-eps, 2))
    name = f"{rep}[q]"
    return _residual(name, product, terms, keep)
