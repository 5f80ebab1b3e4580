import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from essmon.orders import (Comparison, OrderSpec, WeightFunction, alg_greater, compare_exponents, e1_value,
                           make_weight_function, parse_order, special_linear_form, validate_monomial_order)
from essmon.rootsys import build_root_system

A2 = build_root_system("A2")
S_A2 = [(1, 0), (1, 1), (0, 1)]


def order(variant, psi):
    return OrderSpec(WeightFunction(psi), variant)


def test_plain_lex_example():
    o = order("wlex", (0, 0, 0))
    assert compare_exponents(o, (1, 0, 5), (0, 9, 9)) == Comparison.GREATER


def test_opposite_lex_with_weights():
    o = order("op-wlex", (1, 2, 1))
    # equal weight 2, the lex-larger exponent is the smaller one
    assert compare_exponents(o, (1, 0, 1), (0, 1, 0)) == Comparison.LESS


def test_homogeneous_right_lex():
    o = parse_order("rlex:homogeneous", A2, S_A2)
    assert o.compare((1, 1, 0), (0, 0, 2)) == Comparison.LESS
    assert o.compare((0, 0, 1), (1, 1, 0)) == Comparison.LESS


def test_presets():
    assert make_weight_function("height", A2, S_A2).coeffs == (1, 2, 1)
    assert make_weight_function("zero", N=4).coeffs == (0, 0, 0, 0)
    assert make_weight_function("homogeneous", S=S_A2).coeffs == (1, 1, 1)
    assert make_weight_function("custom", custom_coeffs=[3, 0, 1]).coeffs == (3, 0, 1)
    assert make_weight_function("admissible", A2, S_A2).coeffs == (2, 2, 1)
    with pytest.raises(ValueError):
        make_weight_function("custom", custom_coeffs=[1, 2], S=S_A2)
    with pytest.raises(ValueError):
        make_weight_function("nonsense", N=2)
    with pytest.raises(ValueError):
        make_weight_function("admissible", build_root_system("C2"), [(1, 0), (0, 1)])


def test_parse_aliases():
    for alias, variant in [("lex", "wlex"), ("rlex", "wrlex"), ("oplex", "op-wlex"), ("oprlex", "op-wrlex")]:
        assert parse_order(f"{alias}:homogeneous", A2, S_A2).variant == variant
    assert parse_order("lex:custom=1,2,1", A2, S_A2).psi.coeffs == (1, 2, 1)
    with pytest.raises(ValueError):
        parse_order("sideways:zero", A2, S_A2)
    with pytest.raises(ValueError):
        parse_order("lex:custom", A2, S_A2)


def test_opposite_variant_needs_positive_weights():
    with pytest.raises(ValueError):
        order("op-wlex", (1, 0, 1))
    with pytest.raises(ValueError):
        parse_order("oplex:zero", A2, S_A2)
    with pytest.raises(ValueError):
        WeightFunction((1, -1))


def test_validation_accepts_genuine_orders():
    for text in ["lex:zero", "rlex:zero", "lex:height", "oplex:height", "oprlex:homogeneous"]:
        assert validate_monomial_order(parse_order(text, A2, S_A2), sample_count=2000).ok


def test_validation_rejects_corrupted_comparator():
    o = parse_order("oplex:homogeneous", A2, S_A2)

    # comparing by the last coordinate only is not a total order on distinct exponents
    def broken(a, b):
        return Comparison((a[-1] > b[-1]) - (a[-1] < b[-1]))

    res = validate_monomial_order(o, sample_count=2000, comparator=broken)
    assert not res.ok and res.witness is not None

    # plain opposite lex without weights is not translation-compatible with 0 as minimum
    def oplex_unweighted(a, b):
        ka, kb = tuple(-x for x in a), tuple(-x for x in b)
        return Comparison((ka > kb) - (ka < kb))

    assert not validate_monomial_order(o, sample_count=2000, comparator=oplex_unweighted).ok


exps = st.lists(st.integers(0, 4), min_size=3, max_size=3).map(tuple)
variant_psi = st.sampled_from([("wlex", (0, 0, 0)), ("wrlex", (0, 0, 0)), ("wlex", (1, 2, 1)),
                               ("op-wlex", (1, 2, 1)), ("op-wrlex", (1, 1, 1)), ("wrlex", (2, 0, 1))])


@settings(max_examples=150, deadline=None)
@given(variant_psi, exps, exps, exps)
def test_total_and_transitive(vp, a, b, c):
    o = order(*vp)
    ab, bc = o.compare(a, b), o.compare(b, c)
    assert (ab == Comparison.EQUAL) == (a == b)
    assert o.compare(b, a) == Comparison(-ab)
    if ab == bc == Comparison.LESS:
        assert o.compare(a, c) == Comparison.LESS


@settings(max_examples=150, deadline=None)
@given(variant_psi, exps, exps, exps.filter(any))
def test_translation_compatible(vp, a, b, c):
    o = order(*vp)
    add = lambda x, y: tuple(p + q for p, q in zip(x, y))
    assert o.compare(add(a, c), add(b, c)) == o.compare(a, b)
    assert o.compare(add(a, c), a) == Comparison.GREATER


@settings(max_examples=100, deadline=None)
@given(variant_psi, st.integers(1, 5), exps, exps)
def test_scaling_weights_keeps_the_order(vp, k, a, b):
    variant, psi = vp
    assert order(variant, psi).compare(a, b) == order(variant, tuple(k * x for x in psi)).compare(a, b)


def test_e1_is_twice_rho_check():
    assert e1_value(A2, (1, 0)) == 2
    assert e1_value(A2, (1, 1)) == 4
    c2 = build_root_system("C2")
    # sum over positive coroots paired with the fundamental weights
    assert [e1_value(c2, w) for w in [(1, 0), (0, 1)]] == [3, 4]


def _check_form(rs, gens, M, o):
    f = special_linear_form(rs, gens, M, o)
    for l, m in gens:
        if any(l):
            assert f(l, m) >= 1
    for a, b in itertools.product(M, repeat=2):
        if alg_greater(rs, o, a, b):
            assert f(*a) > f(*b)
    return f


def test_special_linear_form_sl2():
    a1 = build_root_system("A1")
    o = parse_order("lex:zero", a1, [(1,)])
    gens = [((1,), (0,)), ((1,), (1,))]
    M = [((l,), (k,)) for l in range(3) for k in range(l + 1)]
    f = _check_form(a1, gens, M, o)
    coeffs = f.coefficients()
    assert len(coeffs["lambda"]) == 1 and len(coeffs["m"]) == 1


@pytest.mark.parametrize("text", ["lex:zero", "rlex:homogeneous", "oplex:height", "oprlex:homogeneous"])
def test_special_linear_form_a2(text):
    o = parse_order(text, A2, S_A2)
    gens = [((1, 0), (0, 0, 0)), ((1, 0), (1, 0, 0)), ((1, 0), (0, 1, 0)),
            ((0, 1), (0, 0, 0)), ((0, 1), (0, 0, 1)), ((0, 1), (0, 1, 0))]
    M = [(lam, m) for lam in [(0, 0), (1, 0), (0, 1), (1, 1)]
         for m in itertools.product(range(2), repeat=3) if sum(m) <= sum(lam)]
    _check_form(A2, gens, M, o)


def test_special_linear_form_empty_set_and_exceptional():
    o = parse_order("lex:zero", A2, S_A2)
    f = special_linear_form(A2, [((1, 0), (0, 0, 0))], [], o)
    assert f((1, 0), (0, 0, 0)) >= 1
    with pytest.raises(ValueError):
        special_linear_form(A2, [((0, 0), (1, 0, 0))], [], o)


def test_alg_greater():
    o = parse_order("lex:zero", A2, S_A2)
    assert alg_greater(A2, o, ((1, 1), (0, 0, 0)), ((0, 0), (0, 0, 0)))
    assert not alg_greater(A2, o, ((1, 0), (0, 0, 0)), ((0, 1), (0, 0, 0)))
    assert alg_greater(A2, o, ((1, 0), (0, 0, 0)), ((1, 0), (1, 0, 0)))
