"""Independent reference computations used by the tests.

Nothing here imports the library's combinatorics: root systems are rebuilt
from the Cartan matrices by reflection closure and characters are expanded
with hand-written series code.
"""

from __future__ import annotations

from collections import defaultdict
from itertools import combinations
from math import comb

from levelone.tables import finite_cartan


def finite_positive_roots(letter: str, rank: int) -> list[tuple[int, ...]]:
    """Positive roots in simple-root coordinates, closed under simple reflections."""
    cartan = finite_cartan(letter, rank)
    simple = [tuple(int(i == j) for i in range(rank)) for j in range(rank)]
    roots = set(simple)
    frontier = list(simple)
    while frontier:
        nxt = []
        for beta in frontier:
            for j in range(rank):
                # <beta, alpha_j^vee> = sum_i beta_i * cartan[j][i]
                pair = sum(beta[i] * cartan[j][i] for i in range(rank))
                image = tuple(b - pair * int(i == j) for i, b in enumerate(beta))
                if all(x >= 0 for x in image) and any(image) and image not in roots:
                    roots.add(image)
                    nxt.append(image)
        frontier = nxt
    return sorted(roots)


def abelian_ideal_count(letter: str, rank: int) -> int:
    """Count upper-closed, sum-free subsets of the positive roots by brute force."""
    roots = finite_positive_roots(letter, rank)
    root_set = set(roots)
    index = {r: i for i, r in enumerate(roots)}
    covers = []
    for r in roots:
        ups = []
        for j in range(rank):
            up = tuple(x + int(i == j) for i, x in enumerate(r))
            if up in root_set:
                ups.append(index[up])
        covers.append(ups)
    count = 0
    n = len(roots)
    for mask in range(1 << n):
        members = [i for i in range(n) if mask >> i & 1]
        if any(not (mask >> u & 1) for i in members for u in covers[i]):
            continue
        if any(tuple(a + b for a, b in zip(roots[i], roots[j])) in root_set for i, j in combinations(members, 2)):
            continue
        count += 1
    return count


def partitions(limit: int) -> list[int]:
    """``p(0), ..., p(limit)`` by the standard recurrence on parts."""
    p = [1] + [0] * limit
    for part in range(1, limit + 1):
        for total in range(part, limit + 1):
            p[total] += p[total - part]
    return p


def lattice_basic_a1(depth: int) -> dict[tuple[int, int], int]:
    """``ch L(Lambda_0)`` of ``A_1^(1)`` from the root-lattice construction.

    The character is a theta series over the root lattice divided by the
    partition function.  Keys are ``(value on alpha_1^vee, depth)``.
    """
    p = partitions(depth)
    out = {}
    n = 0
    while n * n <= depth:
        for sign in ((1, -1) if n else (1,)):
            for extra in range(depth - n * n + 1):
                out[(2 * sign * n, n * n + extra)] = p[extra]
        n += 1
    return out


def character_formula_a1(a0: int, a1: int, depth: int) -> dict[tuple[int, int], int]:
    """``ch L(a0 Lambda_0 + a1 Lambda_1)`` of ``A_1^(1)`` by straight series division.

    Keys are ``(value on alpha_1^vee, depth below the highest weight)``.  The
    numerator runs over translations ``t_{m alpha}`` and their products with
    ``s_1``; the denominator is inverted factor by factor.
    """
    level = a0 + a1 + 2
    x = a1 + 1
    series: dict[tuple[int, int], int] = defaultdict(int)
    for m in range(-depth - 1, depth + 2):
        shift = m * x + m * m * level
        if shift <= depth:
            series[(x + 2 * m * level - 1, shift)] += 1
            series[(-x - 2 * m * level - 1, shift)] -= 1
    # 1 / (1 - e^{-j delta + step alpha}) for j >= 1 and step in {+1, 0, -1}.
    for j in range(1, depth + 1):
        for step in (2, 0, -2):
            nxt: dict[tuple[int, int], int] = defaultdict(int)
            for (c, d), v in series.items():
                k = 0
                while d + k * j <= depth:
                    nxt[(c + k * step, d + k * j)] += v
                    k += 1
            series = nxt
    # 1 / (1 - e^{-alpha}), done exactly shell by shell.
    out: dict[tuple[int, int], int] = {}
    shells: dict[int, dict[int, int]] = defaultdict(dict)
    for (c, d), v in series.items():
        if v:
            shells[d][c] = v
    for d, row in shells.items():
        quotient: dict[int, int] = {}
        for c in range(max(row), min(row) - 3, -1):
            quotient[c] = row.get(c, 0) + quotient.get(c + 2, 0)
            if quotient[c]:
                out[(c, d)] = quotient[c]
    return out


def binomial(n: int, m: int) -> int:
    return comb(n + m, n)
