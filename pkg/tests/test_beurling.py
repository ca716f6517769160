from fractions import Fraction as F

import pytest

from matroid_modulus import MatroidError, is_beurling, mod2, serial_split


def test_is_beurling(tp):
    assert is_beurling(tp, {"d"}).is_beurling
    cert = is_beurling(tp, {"a", "b", "c"})
    assert cert.is_beurling and (cert.lhs, cert.rhs) == (2, 2)
    cert = is_beurling(tp, {"a"})
    assert not cert.is_beurling and (cert.lhs, cert.rhs) == (F(2, 3), 0)


def test_fair_base_characterization(tp):
    res = mod2(tp)
    for X in ({"d"}, {"a", "b", "c"}, {"a"}, {"a", "d"}):
        assert is_beurling(tp, X, res.eta_star, res.fair_support).fair_bases_ok


@pytest.mark.parametrize("X,left,right", [({"d"}, F(4, 3), 1), ({"a", "b", "c"}, 1, F(4, 3))])
def test_serial_split_tp(tp, X, left, right):
    split = serial_split(tp, X)
    assert (split.meo_left, split.meo_right, split.meo_total) == (left, right, F(7, 3))
    assert split.verified
    assert sum(split.pmf.values()) == 1


def test_serial_split_path(P3):
    split = serial_split(P3, {"e1"})
    assert (split.meo_left, split.meo_right) == (2, 1)


@pytest.mark.parametrize("X", [{"a"}, {"a", "b", "c", "d"}])
def test_serial_split_rejects(tp, X):
    with pytest.raises(MatroidError):
        serial_split(tp, X)
