from fractions import Fraction as F

import pytest

from matroid_modulus import (Linear, MatroidError, critical_values, deflate, density_theta, exact_eta,
                             fractional_arboricity, is_homogeneous, parametric_minimizers, strength,
                             weighted_strength)

ABC = frozenset("abc")
E = frozenset("abcd")


def test_strength_and_arboricity(tp, U12, K4, P3):
    assert strength(tp) == (1, frozenset("d"))
    assert fractional_arboricity(tp) == (F(3, 2), ABC)
    assert density_theta(tp) == F(4, 3)
    assert strength(U12).value == fractional_arboricity(U12).value == 2
    assert strength(K4).value == fractional_arboricity(K4).value == density_theta(K4) == 2
    assert strength(P3).value == fractional_arboricity(P3).value == 1


def test_loops_rejected(tp):
    with pytest.raises(MatroidError):
        Linear([[1, 0, 1], [0, 0, 1]])
    # a minor may carry loops; strength then needs the explicit opt-in
    minor = tp.contract(["a"]).contract(["b"])
    with pytest.raises(MatroidError):
        strength(minor)
    assert strength(minor, allow_loops=True).value == 1


def test_parametric_minimizers(tp):
    at = parametric_minimizers(tp, F(2, 3))
    assert (at.value, at.min_set, at.max_set) == (F(8, 3), frozenset(), ABC)
    at = parametric_minimizers(tp, 1)
    assert (at.value, at.min_set, at.max_set) == (3, ABC, E)
    between = parametric_minimizers(tp, F(5, 6))
    assert between.min_set == between.max_set == ABC


def test_critical_values(tp, K4):
    pc = critical_values(tp)
    assert pc.critical_values == [F(2, 3), 1]
    assert pc.upper_sets == [ABC, E]
    assert pc.lower_sets == [frozenset(), ABC]
    assert [lm.full_rank for lm in pc.level_minors] == [2, 1]
    assert critical_values(K4).critical_values == [F(1, 2)]


def test_deflate(tp, U12):
    chain = deflate(tp)
    assert [(b.elements, b.rank, b.eta) for b in chain.blocks] == [(ABC, 2, F(2, 3)), (frozenset("d"), 1, 1)]
    assert exact_eta(tp) == {"a": F(2, 3), "b": F(2, 3), "c": F(2, 3), "d": 1}
    assert [b.eta for b in deflate(U12).blocks] == [F(1, 2)]


def test_homogeneity(tp, U12, K4, P3):
    assert not is_homogeneous(tp)
    assert is_homogeneous(U12) and is_homogeneous(K4) and is_homogeneous(P3)


def test_weighted_strength(tp):
    assert weighted_strength(tp, {e: 1 for e in "abcd"}).value == 1
    assert weighted_strength(tp, {"a": 1, "b": 1, "c": 1, "d": 10}).value == F(3, 2)
