from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given

from matroid_modulus import (ConsistencyError, MatroidError, Uniform, base_decomposition, brute_force_eta,
                             is_admissible, min_norm_point, mod1_weighted, mod2, mod_p, mod_p_numeric)
from matroid_modulus.modulus import total_usage

from conftest import graphic_matroids

TP_RHO = {"a": F(2, 7), "b": F(2, 7), "c": F(2, 7), "d": F(3, 7)}
TP_ETA = {"a": F(2, 3), "b": F(2, 3), "c": F(2, 3), "d": F(1)}


def test_total_usage(tp, U12):
    assert total_usage(TP_RHO, {"d", "a", "b"}) == 1
    assert total_usage({e: 1 for e in tp.ground}, {"a", "c", "d"}) == tp.full_rank
    assert total_usage({"e1": 1, "e2": 1}, {"e1"}) == 1


def test_is_admissible(tp, P3):
    assert is_admissible(tp, TP_RHO).admissible
    assert is_admissible(tp, TP_RHO).min_weight == 1
    bad = is_admissible(tp, {e: F(1, 4) for e in tp.ground})
    assert not bad and bad.min_weight == F(3, 4) and bad.witness in set(tp.enumerate_bases())
    assert is_admissible(P3, {e: F(1, 3) for e in P3.ground})
    with pytest.raises(MatroidError):
        is_admissible(tp, {"a": -1, "b": 1, "c": 1, "d": 1})


def test_min_norm_point(tp, U12, K4):
    assert min_norm_point(U12).eta == pytest.approx({"e1": 0.5, "e2": 0.5}, abs=1e-9)
    assert min_norm_point(tp).eta == pytest.approx({k: float(v) for k, v in TP_ETA.items()}, abs=1e-9)
    assert min_norm_point(K4).eta == pytest.approx({e: 0.5 for e in K4.ground}, abs=1e-9)


def test_brute_force_eta(tp, U12, P3):
    bf = brute_force_eta(tp)
    assert bf.eta == TP_ETA
    assert bf.pmf == {B: F(1, 3) for B in tp.enumerate_bases()}
    assert brute_force_eta(U12).pmf == {frozenset({"e1"}): F(1, 2), frozenset({"e2"}): F(1, 2)}
    p3 = brute_force_eta(P3)
    assert p3.eta == {e: 1 for e in P3.ground} and p3.pmf == {frozenset(P3.ground): 1}


def test_brute_force_active_set_fallback(K4):
    # zero support budget forces the active-set route; the answer must not change
    assert brute_force_eta(K4, max_supports=0).eta == brute_force_eta(K4).eta == {e: F(1, 2) for e in K4.ground}


def test_mod2_fixtures(tp, U12, K4, P3):
    r = mod2(tp)
    assert (r.mod_value, r.meo, r.rho_star, r.eta_star) == (F(3, 7), F(7, 3), TP_RHO, TP_ETA)
    u = mod2(U12)
    assert (u.mod_value, u.meo, u.rho_star) == (2, F(1, 2), {"e1": 1, "e2": 1})
    k = mod2(K4)
    assert (k.mod_value, k.meo) == (F(2, 3), F(3, 2))
    assert mod2(P3).mod_value == F(1, 3)


def test_base_decomposition(tp, P3, U12):
    assert base_decomposition(tp, TP_ETA) == {B: F(1, 3) for B in tp.enumerate_bases()}
    assert base_decomposition(P3, {e: 1 for e in P3.ground}) == {frozenset(P3.ground): 1}
    assert base_decomposition(U12, {"e1": F(1, 2), "e2": F(1, 2)}) == {frozenset({"e1"}): F(1, 2),
                                                                         frozenset({"e2"}): F(1, 2)}
    with pytest.raises(MatroidError):
        base_decomposition(tp, {"a": 1, "b": 1, "c": F(1, 2), "d": F(1, 2)})   # a+b+c = 5/2 > r({a,b,c})


def test_mod1_weighted(tp, U12):
    assert mod1_weighted(tp, {e: 1 for e in tp.ground}) == 1
    assert mod1_weighted(U12, {"e1": 1, "e2": 1}) == 2
    assert mod1_weighted(tp, {"a": 1, "b": 1, "c": 1, "d": 10}) == F(3, 2)
    with pytest.raises(MatroidError):
        mod1_weighted(tp, {"a": 0, "b": 1, "c": 1, "d": 1})


def test_mod_p_closed_form(tp):
    assert mod_p(tp, 2).exact == F(3, 7)
    expect = (2 ** 1.5 / 3 ** 0.5 + 1) ** -2
    assert mod_p(tp, 3).value == pytest.approx(expect, rel=1e-12)
    with pytest.raises(MatroidError):
        mod_p(tp, 1)


@pytest.mark.parametrize("k,n", [(1, 2), (2, 4), (3, 5)])
@pytest.mark.parametrize("p", ["3/2", "3", "5"])
def test_mod_p_homogeneous(k, n, p):
    p = F(p)
    q = p / (p - 1)
    expect = (k ** float(q) / n ** float(q - 1)) ** float(1 - p)
    assert mod_p(Uniform(k, n), p).value == pytest.approx(expect, rel=1e-12)


def test_mod_p_density_is_admissible(tp):
    for p in ("3/2", "3", "5"):
        rho = mod_p(tp, p).rho
        loads = [sum(rho[e] for e in B) for B in tp.enumerate_bases()]
        assert min(loads) == pytest.approx(1, abs=1e-12)


@given(graphic_matroids())
def test_wolfe_matches_brute_force(m):
    exact = brute_force_eta(m).eta
    wolfe = min_norm_point(m).eta
    assert max(abs(wolfe[e] - float(exact[e])) for e in m.ground) <= 1e-9


@given(graphic_matroids())
def test_decomposition_reproduces_eta(m):
    r = mod2(m, brute_force=False)
    usage = {e: F(0) for e in m.ground}
    for B, w in r.pmf.items():
        for e in B:
            usage[e] += w
    assert usage == r.eta_star and sum(r.pmf.values()) == 1 and len(r.pmf) <= m.n + 1


@given(graphic_matroids())
def test_mod_p_numeric_agrees(m):
    for p in ("3/2", "3"):
        assert mod_p_numeric(m, p).value == pytest.approx(mod_p(m, p).value, rel=1e-6)
