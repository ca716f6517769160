"""Invariants checked on random small graphic and linear matroids."""
from fractions import Fraction as F

from hypothesis import assume, given

from matroid_modulus import (covering_value, critical_values, density_theta, dominant_membership,
                             dual_eta_identity, fractional_arboricity, fulkerson_blocker, is_beurling, mod2,
                             packing_value, serial_split, strength, verify_extremity, verify_meomod)
from matroid_modulus.checks import VerifyConfig, run_checks

from conftest import graphic_matroids, linear_matroids


def _loopless(m):
    return m.full_rank > 0 and not m.loops()


@given(graphic_matroids())
def test_optimality_system(m):
    res = mod2(m, brute_force=False)
    assert verify_meomod(m, res)
    assert sum(res.eta_star.values()) == m.full_rank
    assert res.meo >= F(m.full_rank ** 2, m.n)


@given(graphic_matroids())
def test_extreme_usage_is_strength_and_arboricity(m):
    eta = mod2(m, brute_force=False).eta_star
    assert 1 / max(eta.values()) == strength(m).value == packing_value(m).value
    assert 1 / min(eta.values()) == fractional_arboricity(m).value == covering_value(m).value
    assert strength(m).value <= density_theta(m) <= fractional_arboricity(m).value


@given(linear_matroids())
def test_linear_usage_in_dominant(m):
    assume(_loopless(m))
    res = mod2(m, brute_force=False)
    assert dominant_membership(m, res.eta_star) == (True, None)
    assert verify_meomod(m, res)


@given(graphic_matroids())
def test_dual_usage_sums_to_one(m):
    assume(m.full_rank < m.n)
    ident = dual_eta_identity(m)
    assert all(ident.eta[e] + ident.eta_dual[e] == 1 for e in m.ground)


@given(graphic_matroids())
def test_partition_levels_are_beurling(m):
    res = mod2(m, brute_force=False)
    pc = critical_values(m, res.eta_star)
    E = frozenset(m.ground)
    for lower in pc.lower_sets[1:]:
        X = E - lower
        assert is_beurling(m, X, res.eta_star).is_beurling
        split = serial_split(m, X, res, brute_force=False)
        assert split.meo_left + split.meo_right == res.meo and split.verified


@given(graphic_matroids(max_vertices=4, max_edges=6))
def test_blocker_vectors_are_vertices(m):
    assert all(verify_extremity(m, v) for v in fulkerson_blocker(m))


@given(graphic_matroids(max_vertices=4, max_edges=5))
def test_verify_suite_green(m):
    results = run_checks(m, VerifyConfig(admissibility_samples=20, lex_samples=20, brute_force=False))
    assert all(r.ok for r in results), [r.line() for r in results if not r.ok]
