from __future__ import annotations

import dataclasses
import warnings
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from levelone import (
    KWeight,
    decompose_basic_vector,
    decompose_spin,
    irreducible_character,
    product_character,
    verify,
)
from levelone import charoracle as co
from levelone.errors import DepthTooSmallWarning, NotDominant, NotHermitian

from conftest import datum
from oracles import lattice_basic_a1, character_formula_a1

F = Fraction


def a1_weight(a0, a1, delta=0):
    return KWeight(((F(a0), F(a1)),), None, F(delta))


def a1_table(ch):
    """``(value on alpha_1^vee, depth)`` table of an ``A_1^(1)`` character."""
    return {(int(w.coeffs[0][1]), int(ch.base.delta - w.delta)): m for w, m in ch.items()}


# -- product character -------------------------------------------------------------


def test_product_depth_zero():
    d = datum("G2", "0,1,0", 1)
    even = product_character(d, "even", 0)
    assert even.items() == [(d.k_structure.Lambda0k, 1)]
    d4 = datum("D4", "0,1,0,0", 2)
    odd = product_character(d4, "odd", 0)
    ks = d4.k_structure
    # The odd ground shell is the spin module of p: dimension 2^(dim p // 2).
    assert sum(m for _, m in odd.items()) == 2 ** (len(d4.p_weights) // 2)
    assert odd.multiplicity(ks.Lambda0k + ks.rho_n) == 2 ** ((d4.g_rank - d4.n) // 2)
    assert all(w.delta == ks.Lambda0k.delta for w, _ in odd.items())


def test_product_complex_a1_hand_expansion():
    d = datum("complex:A1")
    ch = product_character(d, "even", 1)
    lam = d.k_structure.Lambda0k
    alpha = d.kweight_finite(d.abar[1])
    half = F(1, 2)
    expected = {
        lam: 1,
        (lam + alpha).shift_delta(-half): 1,
        lam.shift_delta(-half): 1,
        (lam - alpha).shift_delta(-half): 1,
        (lam + alpha).shift_delta(-1): 1,
        lam.shift_delta(-1): 1,
        (lam - alpha).shift_delta(-1): 1,
    }
    assert dict(ch.items()) == expected


@pytest.mark.parametrize("name,sigma,k,parity", [("G2", "0,1,0", 1, "even"), ("D4", "0,1,0,0", 2, "odd"), ("B3", "0,0,1,0", 1, "odd")])
def test_product_is_weyl_invariant_shell_by_shell(name, sigma, k, parity):
    d = datum(name, sigma, k)
    ch = product_character(d, parity, 2)
    space = ch.space
    for key, mult in ch.entries.items():
        for t, alpha in enumerate(space.simple):
            p = key[t]
            image = tuple(x - p * a for x, a in zip(key[:-1], alpha[:-1])) + (key[-1],)
            assert ch.entries.get(image, 0) == mult


# -- irreducible characters --------------------------------------------------------


def test_highest_weight_has_multiplicity_one():
    d = datum("D4", "0,1,0,0", 2)
    lam = decompose_basic_vector(d, 0).components[1].weight
    ch = irreducible_character(d, lam, 1)
    assert ch.multiplicity(lam) == 1
    assert all(w.delta <= lam.delta for w, _ in ch.items())


def test_basic_a1_against_lattice_construction():
    ch = irreducible_character(datum("complex:A1"), a1_weight(1, 0), 5)
    assert a1_table(ch) == lattice_basic_a1(5)


@pytest.mark.parametrize("a0,a1", [(1, 0), (0, 1), (2, 0), (1, 1), (3, 1), (0, 4)])
def test_a1_against_series_division(a0, a1):
    ch = irreducible_character(datum("complex:A1"), a1_weight(a0, a1), 3)
    assert a1_table(ch) == character_formula_a1(a0, a1, 3)


@given(st.integers(0, 3), st.integers(0, 3), st.integers(0, 3))
def test_a1_strings_are_symmetric(a0, a1, depth):
    if a0 + a1 == 0:
        return
    table = a1_table(irreducible_character(datum("complex:A1"), a1_weight(a0, a1), depth))
    for (c, dep), m in table.items():
        assert table.get((-c, dep), 0) == m


@given(st.sampled_from([0, 1, 2]), st.integers(0, 20))
def test_g2_strings_are_symmetric(which, seed):
    d = datum("G2", "0,1,0", 1)
    lam = decompose_spin(d)[0].components[seed % len(decompose_spin(d)[0].components)].weight
    ch = irreducible_character(d, lam, 1)
    space = ch.space
    t = which % len(space.simple)
    alpha = space.simple[t]
    for key, mult in ch.entries.items():
        p = key[t]
        image = tuple(x - p * a for x, a in zip(key[:-1], alpha[:-1])) + (key[-1],)
        assert ch.entries.get(image, 0) == mult


def test_not_dominant():
    with pytest.raises(NotDominant):
        irreducible_character(datum("complex:A1"), a1_weight(2, -1), 1)


# -- verification --------------------------------------------------------------------


def test_verify_goldens():
    assert verify(datum("G2", "0,1,0", 1), "spin", 2).ok
    assert verify(datum("D4", "0,1,0,0", 2), "all", 2).ok


def test_complex_spin_uses_per_ideal_denominators():
    for name in ("A2", "B2", "A3"):
        assert verify(datum(f"complex:{name}"), "spin", 2).ok


@pytest.mark.parametrize("index", range(4))
@pytest.mark.parametrize("shift", [F(1, 2), F(-1, 2)])
def test_fault_injection_reports_corrupted_weight(index, shift):
    d = datum("G2", "0,1,0", 1)
    decs = decompose_spin(d)
    comp = decs[0].components[index]
    bad = dataclasses.replace(comp, delta_coeff=comp.delta_coeff + shift)
    components = decs[0].components[:index] + (bad,) + decs[0].components[index + 1 :]
    corrupted = [dataclasses.replace(decs[0], components=components)] + decs[1:]
    # The window has to reach the component: one shell past its own depth.
    depth = max(1, -comp.delta_coeff + 1)
    report = verify(d, "spin", depth, decompositions=corrupted)
    assert not report.ok
    residual_weights = {w for _, w, _ in report.residuals}
    assert comp.weight in residual_weights or bad.weight in residual_weights


def test_components_below_the_window_are_invisible():
    d = datum("G2", "0,1,0", 1)
    decs = decompose_spin(d)
    deep = decs[0].components[0]
    assert deep.delta_coeff == -2
    bad = dataclasses.replace(deep, delta_coeff=deep.delta_coeff + F(1, 2))
    corrupted = [dataclasses.replace(decs[0], components=(bad,) + decs[0].components[1:])] + decs[1:]
    assert verify(d, "spin", 1, decompositions=corrupted).ok


def test_depth_warning():
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        verify(datum("G2", "0,1,0", 1), "spin", F(1, 2))
    assert any(issubclass(w.category, DepthTooSmallWarning) for w in caught)


def test_hermitian_verify_needs_window():
    d = datum("A2", "1,1,0", 1)
    with pytest.raises(NotHermitian):
        verify(d, "basic", 1)
    assert verify(d, "all", 2, charges=range(-2, 3)).ok


def test_report_json():
    report = verify(datum("G2", "0,1,0", 1), "spin", 1)
    doc = report.to_json()
    assert doc["status"] == "ok" and doc["depth"] == "1" and doc["residuals"] == []


def test_signed_product_matches_alternating_sum():
    d = datum("B3", "0,0,1,0", 1)
    signed = product_character(d, "even", 2, signed=True)
    terms = []
    for eps in (0, 1):
        for c in decompose_basic_vector(d, eps).components:
            terms.append((c.weight.shift_delta(F(-eps, 2)), (-1) ** eps))
    assert co._residual("signed", signed, terms) == []
