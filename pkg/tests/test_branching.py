from __future__ import annotations

from collections import Counter
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from levelone import (
    InvolutionSpec,
    LieType,
    abelian_subspaces,
    basic_vector_by_cosets,
    build_affine_datum,
    decompose_basic_vector,
    decompose_hermitian,
    decompose_spin,
    even_coset_reps,
    order_two_involutions,
    psi0_star,
    psi1_star,
    spin_by_cosets,
    typec_lattice_paths,
)
from levelone import branching as br
from levelone.errors import HasCenter, NotApplicable, NotHermitian

from conftest import datum
from oracles import binomial

SEMISIMPLE = []
HERMITIAN = []
for _name in ["A1", "A2", "A3", "A4", "B2", "B3", "B4", "C2", "C3", "C4", "D4", "G2", "F4"]:
    for _s in order_two_involutions(LieType.parse(_name)):
        _d = build_affine_datum(LieType.parse(_name), _s)
        (HERMITIAN if _d.center_dim else SEMISIMPLE).append(_d)
COMPLEX = [datum(f"complex:{x}") for x in ["A1", "A2", "A3", "B2", "G2"]]


def ids(data):
    return [d.name for d in data]


def mod_delta(dec):
    return Counter((c.ideal_coeffs, c.center) for c in dec.components for _ in range(c.multiplicity * dec.global_multiplier))


# -- golden examples -----------------------------------------------------------------

G2_SPIN = {
    ((0, 2), (10, 0)),
    ((1, 1), (7, 3)),
    ((0, 2), (4, 6)),
    ((2, 0), (6, 4)),
    ((1, 1), (3, 7)),
    ((2, 0), (0, 10)),
}

D4_BASIC_VECTOR = Counter(
    [
        ((10, 0), (3, 0, 0)),
        ((8, 2), (2, 0, 1)),
        ((6, 4), (1, 2, 0)),
        ((4, 6), (1, 2, 0)),
        ((2, 8), (2, 0, 1)),
        ((0, 10), (3, 0, 0)),
        ((10, 0), (0, 0, 3)),
        ((8, 2), (1, 0, 2)),
        ((6, 4), (0, 2, 1)),
        ((4, 6), (0, 2, 1)),
        ((2, 8), (1, 0, 2)),
        ((0, 10), (0, 0, 3)),
    ]
)

D4_SPIN = Counter(
    [
        ((5, 5), (2, 1, 0)),
        ((3, 7), (1, 1, 1)),
        ((7, 3), (1, 1, 1)),
        ((5, 5), (0, 1, 2)),
        ((1, 9), (0, 3, 0)),
        ((9, 1), (0, 3, 0)),
    ]
)


def test_g2_spin_golden():
    decs = decompose_spin(datum("G2", "0,1,0", 1))
    got = [c.ideal_coeffs for dec in decs for c in dec.components]
    assert len(got) == 6 and set(got) == G2_SPIN
    assert all(dec.global_multiplier == 1 for dec in decs)


def test_d4_basic_vector_golden():
    d = datum("D4", "0,1,0,0", 2)
    assert d.k_structure.Lambda0k.coeffs == ((10, 0), (3, 0, 0))
    got = Counter(c.ideal_coeffs for eps in (0, 1) for c in decompose_basic_vector(d, eps).components)
    assert got == D4_BASIC_VECTOR


def test_d4_spin_golden():
    d = datum("D4", "0,1,0,0", 2)
    decs = decompose_spin(d)
    assert len(decs) == 1 and decs[0].global_multiplier == 1
    assert Counter(c.ideal_coeffs for c in decs[0].components) == D4_SPIN
    top = d.k_structure.Lambda0k + d.k_structure.rho_n
    assert top.coeffs == ((5, 5), (2, 1, 0))


def test_identity_gives_vacuum():
    d = datum("G2", "0,1,0", 1)
    basic = decompose_basic_vector(d, 0)
    vacuum = [c for c in basic.components if c.label.kind == "Abelian" and not c.label.weights]
    assert len(vacuum) == 1
    assert vacuum[0].weight == d.k_structure.Lambda0k


@pytest.mark.parametrize("l", [2, 3])
def test_d_l_plus_one_restricts_to_b_l(l):
    d = datum(f"D{l + 1}", ",".join(["1"] + ["0"] * l), 2)
    assert d.k_structure.describe() == (f"B{l}^(1)" if l > 2 else "C2^(1)")
    basic = decompose_basic_vector(d, 0)
    vector = decompose_basic_vector(d, 1)
    spin = decompose_spin(d)
    for dec in [basic, vector] + spin:
        assert len(dec.components) == 1 and dec.global_multiplier == 1
    levels = {sum(a * x for a, x in zip(d.ideals[0].comarks, dec.components[0].ideal_coeffs[0])) for dec in [basic, vector] + spin}
    assert levels == {1}


# -- structural invariants -------------------------------------------------------


@pytest.mark.parametrize("d", SEMISIMPLE + COMPLEX, ids=ids(SEMISIMPLE + COMPLEX))
def test_basic_vector_invariants(d):
    decs = [decompose_basic_vector(d, eps) for eps in (0, 1)]
    total = sum(len(dec.components) for dec in decs)
    assert total == len(abelian_subspaces(d)) + int(br.has_w_sigma(d))
    for eps, dec in enumerate(decs):
        for c in dec.components:
            assert c.is_dominant_integral()
            if c.label.kind == "Abelian":
                assert len(c.label.weights) % 2 == eps


@pytest.mark.parametrize("d", SEMISIMPLE + COMPLEX, ids=ids(SEMISIMPLE + COMPLEX))
def test_spin_components_are_dominant(d):
    for dec in decompose_spin(d):
        assert dec.components
        assert all(c.is_dominant_integral() for c in dec.components)


@pytest.mark.parametrize("d", SEMISIMPLE, ids=ids(SEMISIMPLE))
def test_routes_agree(d):
    for eps in (0, 1):
        assert mod_delta(decompose_basic_vector(d, eps)) == mod_delta(basic_vector_by_cosets(d, eps))
        assert decompose_basic_vector(d, eps).weights() == basic_vector_by_cosets(d, eps).weights()
    by_sigma = Counter()
    by_cosets = Counter()
    for dec in decompose_spin(d):
        by_sigma.update(dec.weights())
    for dec in spin_by_cosets(d):
        by_cosets.update(dec.weights())
    assert by_sigma == by_cosets


@pytest.mark.parametrize("d", SEMISIMPLE + COMPLEX, ids=ids(SEMISIMPLE + COMPLEX))
def test_rho_shift_identity(d):
    ks = d.k_structure
    rho = d.to_parts(d.rho_hat)
    for u in even_coset_reps(d):
        lhs = psi0_star(d, u.apply_parts(rho)) - ks.rho_k_hat
        rhs = ks.Lambda0k - psi0_star(d, u.inversion_sum())
        assert lhs == rhs


@pytest.mark.parametrize("d", [x for x in SEMISIMPLE if x.k == 1], ids=ids([x for x in SEMISIMPLE if x.k == 1]))
def test_equal_rank_spin_shift_vanishes_iff_short(d):
    abelian = [c for dec in decompose_spin(d) for c in dec.components if c.label.kind == "Abelian"]
    all_zero = all(c.delta_coeff == 0 for c in abelian)
    assert all_zero == (not br.is_long(d, d.p_index))


def test_complex_spin_closed_form():
    for name, copies in [("A1", 1), ("A2", 2), ("A3", 2), ("B3", 2)]:
        d = datum(f"complex:{name}")
        decs = decompose_spin(d)
        assert sum(dec.global_multiplier * len(dec.components) for dec in decs) == copies
        for dec in decs:
            assert [c.weight for c in dec.components] == [d.k_structure.rho_k_hat]


def test_psi1_not_defined_for_complex():
    with pytest.raises(NotApplicable):
        psi1_star(datum("complex:A2"), ((0, 0), 0, 0))


def test_hermitian_requires_charge_route():
    d = datum("A2", "1,1,0", 1)
    with pytest.raises(HasCenter):
        decompose_basic_vector(d, 0)
    with pytest.raises(HasCenter):
        decompose_spin(d)
    with pytest.raises(NotHermitian):
        decompose_hermitian(datum("G2", "0,1,0", 1), "basic", 0)


# -- Hermitian properties ---------------------------------------------------------


@pytest.mark.parametrize("d", HERMITIAN, ids=ids(HERMITIAN))
@pytest.mark.parametrize("rep", ["basic", "vector", "spin"])
def test_hermitian_charge_and_disjointness(d, rep):
    ks = d.k_structure
    top = ks.Lambda0k + ks.rho_n if rep == "spin" else ks.Lambda0k
    seen = set()
    for q in range(-3, 4):
        dec = decompose_hermitian(d, rep, q)
        if rep != "spin" and (q - (rep == "vector")) % 2:
            assert dec.components == ()
        for c in dec.components:
            assert c.is_dominant_integral()
            assert c.center - top.center == q
            key = (c.ideal_coeffs, c.center, c.delta_coeff)
            assert key not in seen
            seen.add(key)


def test_hermitian_empty_when_no_subspace_matches():
    d = datum("A3", "1,1,0,0", 1)
    assert decompose_hermitian(d, "basic", 1).components == ()


@given(st.integers(-6, 6))
def test_hermitian_k_index_formula(q):
    d = datum("A3", "1,0,1,0", 1)
    dim_p = len(d.p_weights)
    for c in decompose_hermitian(d, "basic", q).components:
        plus = sum(1 for v in c.label.weights if v in set(d.positive_p_weights))
        minus = len(c.label.weights) - plus
        assert Fraction(2 * (q - plus + minus), dim_p) == c.label.k_index


# -- type C lattice paths --------------------------------------------------------------


def test_typec_smallest_case():
    basic, vector, top, second = typec_lattice_paths(1, 1)
    assert {c.label.word for c in basic.components + vector.components} == {"1,0", "0,1"}
    assert len(basic.components) + len(vector.components) == 2


@pytest.mark.parametrize("m,n", [(m, n) for m in range(1, 4) for n in range(1, 4)])
def test_typec_matches_generic_engine(m, n):
    d = build_affine_datum(LieType("C", n + m), InvolutionSpec.at_node(n + m + 1, m, 1))
    paths = typec_lattice_paths(m, n)
    generic = [decompose_basic_vector(d, 0), decompose_basic_vector(d, 1)] + decompose_spin(d)
    for a, b in zip(paths, generic):
        assert a.module_id == b.module_id
        assert a.weights(mod_delta=True) == b.weights(mod_delta=True)
    assert len(paths[0].components) + len(paths[1].components) == binomial(n, m)


@pytest.mark.parametrize("m,n", [(1, 2), (2, 2), (3, 1)])
def test_typec_vacuum_composition(m, n):
    basic = typec_lattice_paths(m, n)[0]
    vac = [c for c in basic.components if c.label.word == ",".join([str(n)] + ["0"] * m)]
    assert len(vac) == 1
    assert vac[0].ideal_coeffs == ((n,) + (0,) * m, (m,) + (0,) * n)
