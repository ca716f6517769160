from fractions import Fraction as F

import pytest

from matroid_modulus import (MatroidError, admissible_vertices, blocker_qp, covering_value,
                             dominant_membership, dual_eta_identity, fulkerson_blocker, mod2, packing_value,
                             verify_extremity, verify_meomod)
from matroid_modulus.duality import mod1_dual_packing

TP_THETA = [("d", 1), ("ab", 1), ("ac", 1), ("bc", 1), ("abc", 2)]


def test_blocker_family_tp(tp):
    fam = fulkerson_blocker(tp)
    assert [(frozenset(s), d) for s, d in TP_THETA] == [(v.elements, v.denom) for v in fam]
    assert fam[-1].vector == {"a": F(1, 2), "b": F(1, 2), "c": F(1, 2), "d": 0}


@pytest.mark.parametrize("name,size", [("tp", 5), ("U12", 1), ("K4", 14), ("P3", 3)])
def test_blocker_family_matches_vertices(name, size, request):
    m = request.getfixturevalue(name)
    fam = fulkerson_blocker(m)
    assert len(fam) == size
    assert {v.as_tuple(m.ground) for v in fam} == set(admissible_vertices(m))


def test_verify_extremity(tp):
    assert verify_extremity(tp, {"a": 1, "b": 1, "c": 0, "d": 0})
    assert not verify_extremity(tp, {e: F(1, 3) for e in "abcd"})      # admissible, not a vertex
    assert not verify_extremity(tp, {e: F(1, 4) for e in "abcd"})      # not admissible


def test_dominant_membership(tp):
    assert dominant_membership(tp, {e: F(3, 4) for e in "abcd"}) == (False, frozenset("d"))
    eta = mod2(tp).eta_star
    assert dominant_membership(tp, eta) == (True, None)
    with pytest.raises(MatroidError):
        dominant_membership(tp, {"a": -1, "b": 1, "c": 1, "d": 1})


def test_packing_covering(tp, K4, U12):
    assert (packing_value(tp).value, covering_value(tp).value) == (1, F(3, 2))
    assert packing_value(K4).value == covering_value(K4).value == 2
    pack = packing_value(U12)
    assert pack.value == 2 and sum(pack.primal.values()) == 2


def test_mod1_dual_packing(tp):
    lp = mod1_dual_packing(tp, {"a": 1, "b": 1, "c": 1, "d": 10})
    assert lp.value == F(3, 2)


def test_blocker_qp(tp, K4):
    value, eta = blocker_qp(tp, fulkerson_blocker(tp))
    assert value == F(7, 3) and eta == mod2(tp).eta_star
    assert blocker_qp(K4, fulkerson_blocker(K4))[0] == F(3, 2)


def test_dual_identity(tp, K4):
    ident = dual_eta_identity(tp)
    assert ident.eta_dual == {"a": F(1, 3), "b": F(1, 3), "c": F(1, 3), "d": 0}
    assert ident.max_gap == 0
    assert set(dual_eta_identity(K4).eta_dual.values()) == {F(1, 2)}


def test_dual_identity_all_coloops(P3):
    with pytest.raises(MatroidError):
        dual_eta_identity(P3)


def test_verify_meomod_rejects_tampering(tp):
    res = mod2(tp)
    assert verify_meomod(tp, res)
    B = next(iter(res.pmf))
    bad = dict(res.pmf)
    bad[B] += F(1, 10)
    res.pmf = bad
    assert not verify_meomod(tp, res)
