from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from essmon.essential import (EssentialError, accept_custom_sequence, closure_violations, deriving_violations, dominance_check,
                              dual_structure_constants, essential_set, extension_check, gamma_sample,
                              lowest_term_valuation, nminus_check, pullback_polynomial, quotient_valuation,
                              rep_matrices, valuation_check)
from essmon.linalg import mat_mul
from essmon.orders import OrderSpec, WeightFunction, parse_order
from essmon.pbw import good_ordering, parse_sequence
from essmon.rootsys import build_root_system, weight_multiplicities

A1 = build_root_system("A1")
A2 = build_root_system("A2")
C2 = build_root_system("C2")


def setup(rs, seq, order):
    S = parse_sequence(rs, seq)
    return S, parse_order(order, rs, S.roots)


def test_a2_fundamental_example():
    S, o = setup(A2, "custom:a1,a2,a1", "rlex:zero")
    assert essential_set(A2, S, o, (1, 0)).exponents == [(0, 0, 0), (1, 0, 0), (0, 1, 1)]


@pytest.mark.parametrize("typ,seq,order", [
    ("A2", "good", "rlex:homogeneous"), ("A2", "reduced:1,2,1", "oplex:height"),
    ("C2", "good", "oprlex:homogeneous"), ("C2", "lusztig:", "lex:zero"), ("G2", "good", "oprlex:homogeneous"),
])
def test_sizes_match_the_module(typ, seq, order):
    rs = build_root_system(typ)
    S, o = setup(rs, seq, order)
    for lam in [(1, 0), (0, 1), (1, 1)]:
        es = essential_set(rs, S, o, lam)
        assert es.dim_check and len(es) == es.weyl_dim
        mult = weight_multiplicities(rs, lam)
        assert es.block_sizes() == {mu: d for mu, d in mult.items()}


def test_invalid_inputs():
    S, o = setup(A2, "good", "lex:zero")
    with pytest.raises(ValueError):
        essential_set(A2, S, o, (1, -1))
    with pytest.raises(ValueError):
        essential_set(A2, S, parse_order("lex:zero", A1, [(1,)]), (1, 0))


def test_non_dominant_sequence_is_caught():
    S, o = setup(A2, "custom:a1,a1,a2", "lex:zero")
    with pytest.raises(EssentialError):
        essential_set(A2, S, o, (1, 1))
    assert not essential_set(A2, S, o, (1, 1), strict=False).dim_check


def test_sl2_representation_matrix():
    S, o = setup(A1, "pbw:a1", "lex:zero")
    es = essential_set(A1, S, o, (1,))
    assert rep_matrices(A1, es) == [[[0, 0], [1, 0]]]


@pytest.mark.parametrize("lam", [(1, 1), (2, 1)])
def test_representation_matrices_are_nilpotent(lam):
    S, o = setup(A2, "good", "rlex:homogeneous")
    es = essential_set(A2, S, o, lam)
    for M in rep_matrices(A2, es):
        P = M
        for _ in range(len(es)):
            P = mat_mul(P, M)
        assert not any(any(row) for row in P)


def test_pullback_polynomials():
    S, o = setup(A1, "pbw:a1", "lex:zero")
    es = essential_set(A1, S, o, (1,))
    assert pullback_polynomial(A1, es, (0,)) == {(0,): 1}
    assert pullback_polynomial(A1, es, (1,)) == {(1,): 1}
    S, o = setup(A2, "pbw:a1,a1+a2,a2", "lex:zero")
    es = essential_set(A2, S, o, (1, 1))
    assert pullback_polynomial(A2, es, (0, 1, 1)) == {(0, 1, 1): 1}
    with pytest.raises(ValueError):
        pullback_polynomial(A2, es, (3, 0, 0))


def test_lowest_term_examples():
    poly = {(1, 1): 1, (2, 0): 1}
    assert lowest_term_valuation(poly, OrderSpec(WeightFunction((0, 0)), "wlex")) == (1, 1)
    assert lowest_term_valuation(poly, OrderSpec(WeightFunction((1, 2)), "wlex")) == (2, 0)
    o = OrderSpec(WeightFunction((0, 0)), "wlex")
    assert quotient_valuation({(2, 3): 1, (3, 3): 5}, {(1, 1): 2}, o) == (1, 2)
    with pytest.raises(ValueError):
        lowest_term_valuation({(1, 0): 0}, o)


@pytest.mark.parametrize("typ,seq,order,lam", [
    ("A2", "good", "rlex:homogeneous", (1, 1)), ("A2", "custom:a1,a2,a1", "rlex:zero", (2, 1)),
    ("C2", "lusztig:", "lex:zero", (1, 1)), ("C2", "good", "oprlex:homogeneous", (1, 1)),
])
def test_valuation_of_dual_functionals(typ, seq, order, lam):
    rs = build_root_system(typ)
    S, o = setup(rs, seq, order)
    rep = valuation_check(rs, essential_set(rs, S, o, lam))
    assert rep.ok and rep.checked == len(essential_set(rs, S, o, lam))


def test_sl2_dual_products():
    S, o = setup(A1, "pbw:a1", "lex:zero")
    e1, e2 = essential_set(A1, S, o, (1,)), essential_set(A1, S, o, (2,))
    d = dual_structure_constants(A1, e1, (1,), e1, (1,), e2)
    assert d.ok and d.coeffs == {(2,): 1}
    d = dual_structure_constants(A1, e1, (0,), e1, (1,), e2)
    assert d.coeffs == {(1,): 1}
    with pytest.raises(ValueError):
        dual_structure_constants(A1, e1, (2,), e1, (0,), e2)
    with pytest.raises(ValueError):
        dual_structure_constants(A1, e1, (0,), e1, (0,), e1)


def test_a2_dual_products_are_triangular():
    S, o = setup(A2, "good", "rlex:homogeneous")
    l, m = essential_set(A2, S, o, (1, 0)), essential_set(A2, S, o, (0, 1))
    lm = essential_set(A2, S, o, (1, 1))
    for p in l.exponents:
        for q in m.exponents:
            d = dual_structure_constants(A2, l, p, m, q, lm)
            assert d.lead_coeff == 1 and not d.below


def test_gamma_sample():
    S, o = setup(A2, "good", "rlex:homogeneous")
    g = gamma_sample(A2, S, o, (1, 1))
    assert not g.violations
    assert g.lattice_rank == g.expected_rank == 5
    assert ((1, 0), (0, 0, 0)) in g.generators
    js = g.to_json()
    assert js["weights"] == 4 and js["elements"] == 1 + 3 + 3 + 8


def test_closure_violation_detection():
    sets = {(0,): frozenset({(0,)}), (1,): frozenset({(0,), (1,)}), (2,): frozenset({(0,), (1,)})}
    assert closure_violations(sets) == [((1,), (1,), (1,), (1,))]


def test_deriving_violations():
    assert deriving_violations({(0, 0), (1, 0), (1, 1)}) == [((1, 1), 0)]
    assert deriving_violations({(0, 0), (1, 0), (0, 1), (1, 1)}) == []


@pytest.mark.parametrize("seq,order", [("good", "rlex:homogeneous"), ("lusztig:", "lex:zero")])
def test_quasi_commutative_sets_are_downward_closed(seq, order):
    for rs in (A2, C2):
        S, o = setup(rs, seq, order)
        assert deriving_violations(essential_set(rs, S, o, (2, 1))) == []


def test_extension_and_nminus_checks():
    S, o = setup(A2, "custom:a1,a2,a1", "rlex:zero")
    es = essential_set(A2, S, o, (1, 1))
    assert extension_check(A2, es) == []
    assert nminus_check(A2, es) == []


def test_dominance():
    assert dominance_check(A2, good_ordering(A2)).status == "dominant"
    res = dominance_check(A2, parse_sequence(A2, "custom:a1,a1,a2"), trials=5, seed=42)
    assert res.status == "likely_not_dominant" and res.ranks == [2] * 5
    assert dominance_check(C2, parse_sequence(C2, "reduced:2,1,2,1")).certified


def test_custom_sequences_are_flagged():
    S, dom = accept_custom_sequence(A2, parse_sequence(A2, "custom:a1,a2,a1"))
    assert dom.status == "dominant" and S.birationality_unverified
    S, _ = accept_custom_sequence(A2, parse_sequence(A2, "custom:a1,a1,a2"))
    assert not S.birationality_unverified
    S, _ = accept_custom_sequence(A2, parse_sequence(A2, "reduced:1,2,1"))
    assert not S.birationality_unverified


@settings(max_examples=15, deadline=None)
@given(st.lists(st.integers(1, 5).flatmap(lambda a: st.sampled_from([Fraction(a), Fraction(-a), Fraction(1, a)])),
                min_size=3, max_size=3))
def test_rescaling_root_vectors_keeps_the_set(scales):
    S, o = setup(A2, "custom:a1,a2,a1", "rlex:zero")
    base = essential_set(A2, S, o, (2, 1))
    es = essential_set(A2, S, o, (2, 1), scales=scales)
    assert es.exponents == base.exponents
    assert valuation_check(A2, es).checked == len(es)
