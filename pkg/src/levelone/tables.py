"""Static affine Dynkin data in the standard affine labeling.

Every table entry carries the generalized Cartan matrix, the marks ``a`` (the
positive null vector of the matrix) and the comarks ``a_dual`` (the positive
null vector of the transpose).  Node 0 is always the affine node.

Conventions: ``cartan[i][j] = <alpha_i^vee, alpha_j>``, so a long root
``alpha_i`` joined to a short root ``alpha_j`` by a double bond has
``cartan[i][j] = -1`` and ``cartan[j][i] = -2``.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import UnsupportedType

Matrix = tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class AffineTable:
    """One affine diagram ``X_N^(twist)`` with ``rank + 1`` nodes."""

    name: str
    letter: str
    g_rank: int
    twist: int
    cartan: Matrix
    marks: tuple[int, ...]
    comarks: tuple[int, ...]

    @property
    def rank(self) -> int:
        return len(self.marks) - 1

    @property
    def dual_coxeter(self) -> int:
        return sum(self.comarks)

    @property
    def coxeter(self) -> int:
        return sum(self.marks)


def _from_bonds(size: int, bonds: list[tuple[int, int, int, int]]) -> Matrix:
    """Build a Cartan matrix from ``(i, j, a_ij, a_ji)`` bond records."""
    rows = [[0] * size for _ in range(size)]
    for i in range(size):
        rows[i][i] = 2
    for i, j, aij, aji in bonds:
        rows[i][j] = aij
        rows[j][i] = aji
    return tuple(tuple(r) for r in rows)


def _chain(start: int, stop: int) -> list[tuple[int, int, int, int]]:
    return [(i, i + 1, -1, -1) for i in range(start, stop)]


def untwisted(letter: str, n: int) -> AffineTable:
    """Standard untwisted affine table for ``X_n^(1)``."""
    letter = letter.upper()
    if letter == "A" and n == 1:
        cartan = _from_bonds(2, [(0, 1, -2, -2)])
        marks, comarks = (1, 1), (1, 1)
    elif letter == "A" and n >= 2:
        cartan = _from_bonds(n + 1, _chain(0, n) + [(n, 0, -1, -1)])
        marks = comarks = (1,) * (n + 1)
    elif letter == "B" and n >= 2:
        bonds = [(0, 2, -1, -1), (1, 2, -1, -1)] + _chain(2, n - 1)
        bonds.append((n - 1, n, -1, -2))
        if n == 2:
            bonds = [(0, 2, -1, -2), (1, 2, -1, -2)]
        cartan = _from_bonds(n + 1, bonds)
        marks = (1, 1) + (2,) * (n - 1)
        comarks = (1, 1) + (2,) * (n - 2) + (1,)
    elif letter == "C" and n >= 2:
        bonds = [(0, 1, -1, -2)] + _chain(1, n - 1) + [(n - 1, n, -2, -1)]
        cartan = _from_bonds(n + 1, bonds)
        marks = (1,) + (2,) * (n - 1) + (1,)
        comarks = (1,) * (n + 1)
    elif letter == "D" and n >= 4:
        bonds = [(0, 2, -1, -1), (1, 2, -1, -1)] + _chain(2, n - 2)
        bonds += [(n - 2, n - 1, -1, -1), (n - 2, n, -1, -1)]
        cartan = _from_bonds(n + 1, bonds)
        marks = comarks = (1, 1) + (2,) * (n - 3) + (1, 1)
    elif letter == "E" and n == 6:
        bonds = _chain(1, 5) + [(3, 6, -1, -1), (6, 0, -1, -1)]
        cartan = _from_bonds(7, bonds)
        marks = comarks = (1, 1, 2, 3, 2, 1, 2)
    elif letter == "E" and n == 7:
        cartan = _from_bonds(8, _chain(0, 6) + [(3, 7, -1, -1)])
        marks = comarks = (1, 2, 3, 4, 3, 2, 1, 2)
    elif letter == "E" and n == 8:
        cartan = _from_bonds(9, _chain(0, 7) + [(5, 8, -1, -1)])
        marks = comarks = (1, 2, 3, 4, 5, 6, 4, 2, 3)
    elif letter == "F" and n == 4:
        bonds = [(0, 1, -1, -1), (1, 2, -1, -1), (2, 3, -1, -2), (3, 4, -1, -1)]
        cartan = _from_bonds(5, bonds)
        marks, comarks = (1, 2, 3, 4, 2), (1, 2, 3, 2, 1)
    elif letter == "G" and n == 2:
        cartan = _from_bonds(3, [(0, 1, -1, -1), (1, 2, -1, -3)])
        marks, comarks = (1, 2, 3), (1, 2, 1)
    else:
        raise UnsupportedType(f"no untwisted affine diagram for {letter}{n}")
    return AffineTable(f"{letter}{n}^(1)", letter, n, 1, cartan, marks, comarks)


def twisted(letter: str, g_rank: int) -> AffineTable:
    """Standard twisted affine tables, indexed by the type ``X_N`` of g.

    ``A3`` is served by the ``D3^(2)`` diagram, the usual identification for
    the smallest odd-rank ``A`` case.
    """
    letter = letter.upper()
    big_n = g_rank
    if letter == "A" and big_n == 2:
        cartan = ((2, -4), (-1, 2))
        return AffineTable("A2^(2)", "A", 2, 2, cartan, (2, 1), (1, 2))
    if letter == "A" and big_n >= 4 and big_n % 2 == 0:
        l = big_n // 2
        bonds = [(0, 1, -2, -1)] + _chain(1, l - 1) + [(l - 1, l, -2, -1)]
        cartan = _from_bonds(l + 1, bonds)
        marks = (2,) * l + (1,)
        comarks = (1,) + (2,) * l
        return AffineTable(f"A{big_n}^(2)", "A", big_n, 2, cartan, marks, comarks)
    if letter == "A" and big_n == 3:
        return twisted("D", 3)
    if letter == "A" and big_n >= 5:
        l = (big_n + 1) // 2
        bonds = [(0, 2, -1, -1), (1, 2, -1, -1)] + _chain(2, l - 1)
        bonds.append((l - 1, l, -2, -1))
        cartan = _from_bonds(l + 1, bonds)
        marks = (1, 1) + (2,) * (l - 2) + (1,)
        comarks = (1, 1) + (2,) * (l - 1)
        return AffineTable(f"A{big_n}^(2)", "A", big_n, 2, cartan, marks, comarks)
    if letter == "D" and big_n >= 3:
        l = big_n - 1
        bonds = [(0, 1, -2, -1)] + _chain(1, l - 1) + [(l - 1, l, -1, -2)]
        cartan = _from_bonds(l + 1, bonds)
        marks = (1,) * (l + 1)
        comarks = (1,) + (2,) * (l - 1) + (1,)
        return AffineTable(f"D{big_n}^(2)", "D", big_n, 2, cartan, marks, comarks)
    if letter == "E" and big_n == 6:
        bonds = [(0, 1, -1, -1), (1, 2, -1, -1), (2, 3, -2, -1), (3, 4, -1, -1)]
        cartan = _from_bonds(5, bonds)
        return AffineTable("E6^(2)", "E", 6, 2, cartan, (1, 2, 3, 2, 1), (1, 2, 3, 4, 2))
    raise UnsupportedType(f"{letter}{g_rank} has no order-2 outer automorphism")


def triality() -> AffineTable:
    """``D4^(3)``, shipped for completeness; it never arises from an involution."""
    cartan = _from_bonds(3, [(0, 1, -1, -1), (1, 2, -3, -1)])
    return AffineTable("D4^(3)", "D", 4, 3, cartan, (1, 2, 1), (1, 2, 3))


def finite_cartan(letter: str, n: int) -> Matrix:
    """Cartan matrix of the finite type ``X_n`` in the standard affine labeling ``1..n``."""
    table = untwisted(letter, n)
    return tuple(row[1:] for row in table.cartan[1:])


def finite_candidates(rank: int) -> list[tuple[str, int]]:
    """Finite simple types of the given rank, one name per isomorphism class.

    ``B2`` is reported as ``C2`` and ``D3`` as ``A3``.
    """
    out = [("A", rank)]
    if rank >= 3:
        out.append(("B", rank))
    if rank >= 2:
        out.append(("C", rank))
    if rank >= 4:
        out.append(("D", rank))
    if rank in (6, 7, 8):
        out.append(("E", rank))
    if rank == 4:
        out.append(("F", 4))
    if rank == 2:
        out.append(("G", 2))
    return out


def normalize_type(letter: str, n: int) -> tuple[str, int]:
    """Validate a simple type name, folding ``B1`` to ``A1`` and ``D3`` to ``A3``."""
    letter = letter.upper()
    if letter == "B" and n == 1:
        return "A", 1
    if letter == "D" and n == 3:
        return "A", 3
    valid = (
        (letter == "A" and n >= 1)
        or (letter in ("B", "C") and n >= 2)
        or (letter == "D" and n >= 4)
        or (letter == "E" and n in (6, 7, 8))
        or (letter == "F" and n == 4)
        or (letter == "G" and n == 2)
    )
    if not valid:
        raise UnsupportedType(f"unknown simple type {letter}{n}")
    return letter, n
