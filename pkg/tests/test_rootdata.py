from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from levelone import (
    InvolutionSpec,
    LieType,
    build_affine_datum,
    build_lprime,
    classify_roots,
    order_two_involutions,
    positive_p_roots,
)
from levelone import linalg as la
from levelone import tables
from levelone.branching import psi0_star
from levelone.errors import InvalidInvolution, UnsupportedType

from conftest import datum

SIMPLE_TYPES = ["A1", "A2", "A3", "A4", "B2", "B3", "B4", "C2", "C3", "C4", "D4", "D5", "G2", "F4", "E6"]
COMPLEX_TYPES = ["complex:A1", "complex:A2", "complex:B2", "complex:G2"]


def all_data(types=SIMPLE_TYPES):
    out = []
    for name in types:
        t = LieType.parse(name)
        for s in order_two_involutions(t):
            out.append((name, s))
    return out


DATA = all_data() + [(c, None) for c in COMPLEX_TYPES]


def build(name, s):
    if s is None:
        return datum(name)
    return build_affine_datum(LieType.parse(name), s)


# -- tables -----------------------------------------------------------------


@pytest.mark.parametrize("letter,n", [("A", 1), ("A", 4), ("B", 3), ("C", 3), ("D", 5), ("E", 6), ("E", 7), ("E", 8), ("F", 4), ("G", 2)])
def test_untwisted_marks_are_null_vectors(letter, n):
    t = tables.untwisted(letter, n)
    size = t.rank + 1
    for i in range(size):
        assert sum(t.cartan[i][j] * t.marks[j] for j in range(size)) == 0
        assert sum(t.comarks[j] * t.cartan[j][i] for j in range(size)) == 0
    assert t.marks[0] == 1 and t.comarks[0] == 1


@pytest.mark.parametrize("letter,n", [("A", 2), ("A", 3), ("A", 4), ("A", 5), ("A", 6), ("A", 7), ("D", 4), ("D", 5), ("E", 6)])
def test_twisted_marks_are_null_vectors(letter, n):
    t = tables.twisted(letter, n)
    size = t.rank + 1
    for i in range(size):
        assert sum(t.cartan[i][j] * t.marks[j] for j in range(size)) == 0
        assert sum(t.comarks[j] * t.cartan[j][i] for j in range(size)) == 0


def test_type_aliases():
    assert LieType.parse("B1") == LieType.parse("A1")
    assert LieType.parse("D3") == LieType.parse("A3")
    with pytest.raises(UnsupportedType):
        LieType.parse("E5")
    with pytest.raises(UnsupportedType):
        LieType.parse("nonsense")


# -- involution validation --------------------------------------------------


def test_order_two_condition_is_enforced():
    with pytest.raises(InvalidInvolution, match="kΣaᵢsᵢ ≠ 2"):
        build_affine_datum(LieType.parse("G2"), InvolutionSpec.parse("0,0,1", 1))
    with pytest.raises(InvalidInvolution):
        build_affine_datum(LieType.parse("G2"), InvolutionSpec.parse("0,1", 1))
    with pytest.raises(InvalidInvolution):
        build_affine_datum(LieType.parse("complex:A2"), InvolutionSpec.parse("1,0,0", 1))


def test_involution_lists():
    assert [s.s for s in order_two_involutions(LieType.parse("G2"))] == [(0, 1, 0)]
    d4 = {(s.s, s.k) for s in order_two_involutions(LieType.parse("D4"))}
    assert ((0, 0, 1, 0, 0), 1) in d4
    assert ((1, 0, 0, 0), 2) in d4 and ((0, 1, 0, 0), 2) in d4
    assert len(order_two_involutions(LieType.parse("complex:B3"))) == 1


# -- documented examples ------------------------------------------------------


def test_g2_example_k_type():
    d = datum("G2", "0,1,0", 1)
    assert d.table.name == "G2^(1)"
    assert d.k_structure.describe() == "A1^(1) x A1^(1)"


def test_d4_outer_example_k_type():
    d = datum("D4", "0,1,0,0", 2)
    assert d.k_structure.describe() == "A1^(1) x C2^(1)"
    assert build_lprime(d).lprime_kind == "KMuDual"
    assert d.k_structure.Lambda0k.coeffs == ((10, 0), (3, 0, 0))


def test_complex_a1_p_weights():
    d = datum("complex:A1")
    nonzero = {v for v in d.p_weights if any(v)}
    assert nonzero == set(d.delta_k)
    assert la.zero(d.n) in d.p_weights


def test_equal_rank_classification_has_no_complex_roots():
    r = classify_roots(datum("G2", "0,1,0", 1))
    assert not r.complex_


def test_a2n_twisted_has_only_complex_k_roots():
    for name, sigma in (("A2", "0,1"), ("A4", "0,0,1")):
        d = datum(name, sigma, 2)
        assert d.is_a2n
        r = classify_roots(d)
        assert r.compact == frozenset()
        assert r.complex_ == d.delta_k


def test_equal_rank_lprime_is_untwisted():
    d = datum("B3", "0,0,1,0", 1)
    mu = build_lprime(d)
    assert mu.lprime_kind == "KMu"
    assert mu.lprime.size == d.n + 1


def test_a2n_lprime_simple_roots():
    d = datum("A4", "0,0,1", 2)
    mu = build_lprime(d)
    assert mu.lprime_kind == "A2nDual"
    first = mu.lprime_simple_roots[0]
    assert first.level == Fraction(1, 2)
    assert first.finite == la.scale(Fraction(-1, 2), d.theta_f)


def test_positive_p_roots_examples():
    assert positive_p_roots(datum("G2", "0,1,0", 1), 0) == []
    d = datum("D4", "0,1,0,0", 2)
    roots = positive_p_roots(d, 1)
    zero = [r for r in roots if not any(r.finite)]
    assert len(zero) == 1 and zero[0].mult == 1 and zero[0].level == Fraction(1, 2)
    assert len(roots) == len(d.p_weights)
    c = positive_p_roots(datum("complex:A1"), 1)
    assert sorted(r.mult for r in c) == [1, 1, 1]


# -- invariants over every shipped involution ---------------------------------


@pytest.mark.parametrize("name,s", DATA, ids=[f"{n}-{s}" for n, s in DATA])
def test_datum_invariants(name, s):
    d = build(name, s)
    # delta has zero finite part and Gram reproduces the Cartan matrix.
    total = la.zero(d.n)
    for a, v in zip(d.marks, d.abar):
        total = la.add(total, la.scale(a, v))
    assert total == la.zero(d.n)
    for i in range(d.n + 1):
        for j in range(d.n + 1):
            assert d.gram[i][j] == d.gram[j][i]
            assert 2 * d.gram[i][j] / d.gram[i][i] == d.cartan[i][j]
        assert d.fdot(d.abar[i], d.abar[i]) > 0
    # theta = sum_{i >= 1} a_i alpha_i = delta - a_0 alpha_0, and a_0 (alpha_0, alpha_0) = 2.
    assert d.marks[0] * d.gram[0][0] == 2
    theta = la.scale(-d.marks[0], d.abar[0])
    assert d.fdot(theta, theta) == 2 * d.marks[0] * d.comarks[0]
    if not d.is_a2n:
        assert d.fdot(theta, theta) == 2
    # rho-hat has value one on every coroot and level h-dual.
    assert d.level(d.rho_hat) == d.h_dual


@pytest.mark.parametrize("name,s", DATA, ids=[f"{n}-{s}" for n, s in DATA])
def test_psi0_of_rho(name, s):
    d = build(name, s)
    ks = d.k_structure
    assert psi0_star(d, d.rho_hat) == ks.Lambda0k + ks.rho_k_hat


@pytest.mark.parametrize("name,s", DATA, ids=[f"{n}-{s}" for n, s in DATA])
def test_root_classification_partition(name, s):
    d = build(name, s)
    r = classify_roots(d)
    assert not (r.compact & r.noncompact)
    nonzero_p = {v for v in d.p_weights if any(v)}
    assert r.noncompact | r.complex_ == nonzero_p
    assert r.compact | r.complex_ == d.delta_k or d.is_complex
    assert len(r.positive_p) * 2 == len(nonzero_p)


@pytest.mark.parametrize("name,s", [x for x in DATA if x[1] is not None], ids=str)
def test_w0_stabilizes_k_and_p(name, s):
    d = build(name, s)
    w0 = d.w0
    assert {w0.apply(v) for v in d.delta_k} == set(d.delta_k)
    assert {w0.apply(v) for v in d.p_weights} == set(d.p_weights)


@given(st.sampled_from([x for x in DATA if x[1] is not None]), st.data())
def test_levels_are_dynkin_indices(case, data):
    d = build(*case)
    for ideal in d.ideals:
        assert ideal.j == ideal.n * d.h_dual - ideal.h_dual
        assert ideal.n in (1, 2, 3, 4)
