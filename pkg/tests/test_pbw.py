from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from essmon.orders import parse_order
from essmon.pbw import (FreeWord, check_bracket_condition, check_quasi_commutative, coproduct_splits, es_nminus,
                        exp_of_word, good_ordering, parse_sequence, rewrite_straighten, straighten)
from essmon.rootsys import build_root_system

A1 = build_root_system("A1")
A2 = build_root_system("A2")
A3 = build_root_system("A3")
C2 = build_root_system("C2")


def combine(*parts):
    out = {}
    for c, el in parts:
        for m, v in el.items():
            out[m] = out.get(m, 0) + c * v
    return {m: v for m, v in out.items() if v}


def test_sl2_square_is_twice_divided_power():
    S = parse_sequence(A1, "pbw:a1")
    assert straighten(A1, S, FreeWord.parse("1,1")) == {(2,): 2}
    assert straighten(A1, S, FreeWord.parse("1@2")) == {(2,): 1}


def test_a2_reordering():
    S = parse_sequence(A2, "pbw:a1,a1+a2,a2")
    res = straighten(A2, S, FreeWord.parse("3,1"))
    assert res[(1, 0, 1)] == 1
    assert set(res) == {(1, 0, 1), (0, 1, 0)} and abs(res[(0, 1, 0)]) == 1


def test_serre_relation_vanishes():
    S = parse_sequence(A2, "pbw:a1,a1+a2,a2")
    # f1^2 f2 - 2 f1 f2 f1 + f2 f1^2 with plain powers
    words = ["1,1,3", "1,3,1", "3,1,1"]
    els = [straighten(A2, S, FreeWord.parse(w)) for w in words]
    assert combine((1, els[0]), (-2, els[1]), (1, els[2])) == {}


def test_word_helpers():
    w = FreeWord.parse("1@2,2@1,1")
    assert w.letters == ((0, 2), (1, 1), (0, 1))
    assert w.degree == 4
    assert exp_of_word(w, 3) == (3, 1, 0)
    with pytest.raises(ValueError):
        exp_of_word(w, 1)
    with pytest.raises(ValueError):
        FreeWord(((0, 0),))
    splits = coproduct_splits((1, 2))
    assert len(splits) == 6
    assert all(tuple(a + b for a, b in zip(x, y)) == (1, 2) for x, y in splits)


def test_sequence_parsing():
    assert good_ordering(A2).roots == ((1, 1), (1, 0), (0, 1))
    assert parse_sequence(A2, "reduced:1,2,1").roots == ((1, 0), (0, 1), (1, 0))
    assert parse_sequence(A2, "lusztig:1,2,1").roots == ((1, 0), (1, 1), (0, 1))
    S = parse_sequence(A2, "custom:a1,a1,a2")
    assert not S.is_pbw_type() and S.provenance == "custom"
    assert parse_sequence(A2, "pbw:a1,a2,a1+a2").is_pbw_type()
    for bad in ["pbw:a1,a1,a2", "pbw:a1,a2", "reduced:1,1,2", "mystery:a1", "custom:a1,a2"]:
        with pytest.raises(ValueError):
            parse_sequence(A2, bad)


def test_bracket_conditions():
    S = parse_sequence(A2, "pbw:a1,a2,a1+a2")
    assert check_bracket_condition(A2, S, "left").ok
    right = check_bracket_condition(A2, S, "right")
    assert not right.ok and right.witness == (1, 2)
    assert check_bracket_condition(A3, good_ordering(A3), "right").ok
    assert check_bracket_condition(C2, good_ordering(C2), "right").ok
    with pytest.raises(ValueError):
        check_bracket_condition(A2, S, "middle")


@pytest.mark.parametrize("rs", [A2, C2], ids=["A2", "C2"])
def test_quasi_commutative_configurations(rs):
    good = good_ordering(rs)
    assert check_quasi_commutative(rs, good, parse_order("rlex:homogeneous", rs, good.roots), 60).ok
    lz = parse_sequence(rs, "lusztig:")
    assert check_quasi_commutative(rs, lz, parse_order("lex:zero", rs, lz.roots), 60).ok


def test_quasi_commutativity_can_fail():
    good = good_ordering(A2)
    res = check_quasi_commutative(A2, good, parse_order("lex:zero", A2, good.roots), 200)
    assert not res.ok and res.witness is not None


def test_straightening_repeated_roots():
    S = parse_sequence(A2, "custom:a1,a2,a1")
    res = straighten(A2, S, FreeWord.parse("2,1,3"))
    # f2 f1 f1 lies in the span of f^(m) for essential m of weight 2a1+a2
    assert res and all(S.weight(m) == (2, 1) for m in res)


def test_serre_exponent_is_not_essential():
    S = parse_sequence(A2, "custom:a1,a2,a1")
    es = es_nminus(A2, S, parse_order("rlex:zero", A2, S.roots), 3)
    block = sorted(m for m in es if S.weight(m) == (2, 1))
    assert block == [(1, 1, 1), (2, 1, 0)]
    assert (0, 1, 2) not in es


def test_es_nminus_pbw_type_is_everything():
    S = good_ordering(A2)
    es = es_nminus(A2, S, parse_order("rlex:homogeneous", A2, S.roots), 2)
    assert len(es) == 10  # all exponents of degree <= 2 in three variables


words = st.lists(st.tuples(st.integers(0, 2), st.integers(1, 2)), min_size=1, max_size=4).map(
    lambda ls: FreeWord(tuple(ls)))
pbw_seqs = st.sampled_from(["pbw:a1,a1+a2,a2", "pbw:a1+a2,a1,a2", "pbw:a2,a1,a1+a2"])


@settings(max_examples=60, deadline=None)
@given(pbw_seqs, words)
def test_rewriting_is_confluent(seq, w):
    S = parse_sequence(A2, seq)
    a = rewrite_straighten(A2, S, w, "leftmost")
    b = rewrite_straighten(A2, S, w, "rightmost")
    assert a == b == straighten(A2, S, w)


@settings(max_examples=60, deadline=None)
@given(pbw_seqs, words)
def test_straightening_preserves_weight(seq, w):
    S = parse_sequence(A2, seq)
    nu = S.weight(exp_of_word(w, 3))
    assert all(S.weight(m) == nu for m in straighten(A2, S, w))


def test_rewriting_rejects_repeated_roots():
    with pytest.raises(ValueError):
        rewrite_straighten(A2, parse_sequence(A2, "custom:a1,a2,a1"), FreeWord.parse("1"))


def test_c2_divided_power_coefficient():
    S = parse_sequence(C2, "pbw:a1,a1+a2,2a1+a2,a2")
    # f_{a1+a2} f_{a1+a2} = 2 f_{a1+a2}^(2)
    assert straighten(C2, S, FreeWord.parse("2,2")) == {(0, 2, 0, 0): Fraction(2)}
