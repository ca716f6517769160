"""Strength, fractional arboricity, principal partition and deflation.

Everything here is an exhaustive scan over subsets of the ground set, so it is
exact but limited to desk-scale instances (see ``matroid.CAPS``).  The
deflation chain gives the optimal element usage probabilities exactly: they
are constant, equal to rank/size, on each homogeneous block.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple

from .duality import dominant_membership
from .errors import ConsistencyError
from .matroid import Matroid, bits, check_subset_cap


class Extremum(NamedTuple):
    value: Fraction
    witness: frozenset


def _prefer(cand: int, best: int) -> bool:
    # larger sets win ties, then lower bitmask
    return (cand.bit_count(), -cand) > (best.bit_count(), -best)


def strength(m: Matroid, allow_loops: bool = False) -> Extremum:
    """min |X| / (r(E) - r(E-X)) over X whose removal drops the rank."""
    if not allow_loops:
        m.require_loopless()
    check_subset_cap(m.n)
    r = m.full_rank
    best = best_mask = None
    for X in range(1, m.full + 1):
        drop = r - m.rank_mask(m.full ^ X)
        if drop <= 0:
            continue
        val = Fraction(X.bit_count(), drop)
        if best is None or val < best or (val == best and _prefer(X, best_mask)):
            best, best_mask = val, X
    return Extremum(best, m.labels(best_mask))


def fractional_arboricity(m: Matroid, allow_loops: bool = False) -> Extremum:
    """max |X| / r(X) over X of positive rank; witness is the largest maximizer."""
    if not allow_loops:
        m.require_loopless()
    check_subset_cap(m.n)
    best = None
    union = 0
    for X in range(1, m.full + 1):
        rx = m.rank_mask(X)
        if rx == 0:
            continue
        val = Fraction(X.bit_count(), rx)
        if best is None or val > best:
            best, union = val, X
        elif val == best:
            union |= X
    # maximizers form a lattice, so their union is itself a maximizer
    if Fraction(union.bit_count(), m.rank_mask(union)) != best:
        raise ConsistencyError("union of densest sets is not densest")
    return Extremum(best, m.labels(union))


def density_theta(m: Matroid) -> Fraction:
    return Fraction(m.n, m.full_rank)


@dataclass(frozen=True)
class ParametricMinimizers:
    value: Fraction
    min_set: frozenset
    max_set: frozenset


def parametric_minimizers(m: Matroid, lam) -> ParametricMinimizers:
    """Minimizers of f(X) = r(X) + lam * |E - X|.

    Returns the minimum value and the least and greatest minimizers.
    """
    check_subset_cap(m.n)
    lam = Fraction(lam)
    best = None
    inter, union = m.full, 0
    for X in range(0, m.full + 1):
        f = m.rank_mask(X) + lam * (m.n - X.bit_count())
        if best is None or f < best:
            best, inter, union = f, X, X
        elif f == best:
            inter &= X
            union |= X

    def f_of(X):
        return m.rank_mask(X) + lam * (m.n - X.bit_count())

    if f_of(inter) != best or f_of(union) != best:
        raise ConsistencyError("minimizers of the parametric function are not a lattice")
    return ParametricMinimizers(best, m.labels(inter), m.labels(union))


@dataclass(frozen=True)
class Block:
    elements: frozenset
    matroid: Matroid
    eta: Fraction   # rank / size of the block

    @property
    def rank(self) -> int:
        return self.matroid.full_rank


@dataclass
class DeflationChain:
    ground: tuple
    blocks: list[Block] = field(default_factory=list)

    def eta(self) -> dict:
        out = {}
        for blk in self.blocks:
            for e in blk.elements:
                out[e] = blk.eta
        return {e: out[e] for e in self.ground}


def is_homogeneous(m: Matroid) -> bool:
    """The constant density r(E)/|E| lies in the base dominant."""
    eta_hom = Fraction(m.full_rank, m.n)
    ok, _ = dominant_membership(m, {e: eta_hom for e in m.ground})
    return ok


def _densest_maximal(m: Matroid) -> int:
    return m.mask(fractional_arboricity(m).witness)


def deflate(m: Matroid) -> DeflationChain:
    """Split off the maximal densest set, contract it, repeat."""
    m.require_loopless()
    chain = DeflationChain(ground=m.ground)
    current = m
    while True:
        current.require_loopless()
        emin = _densest_maximal(current)
        block_m = current if emin == current.full else current.restrict(current.labels(emin))
        if not is_homogeneous(block_m):
            raise ConsistencyError(f"deflation block {block_m!r} is not homogeneous")
        chain.blocks.append(Block(current.labels(emin), block_m, Fraction(block_m.full_rank, block_m.n)))
        if emin == current.full:
            break
        current = current.contract(current.labels(emin))

    etas = [b.eta for b in chain.blocks]
    if any(a >= b for a, b in zip(etas, etas[1:])):
        raise ConsistencyError(f"block densities not strictly increasing: {etas}")
    if sum(b.rank for b in chain.blocks) != m.full_rank:
        raise ConsistencyError("block ranks do not add up to r(E)")
    return chain


def exact_eta(m: Matroid) -> dict:
    """Optimal element usage probabilities, exactly, via deflation."""
    return deflate(m).eta()


@dataclass
class PartitionChain:
    critical_values: list[Fraction]
    upper_sets: list[frozenset]           # E^+ for each critical value
    level_minors: list[Matroid]

    @property
    def lower_sets(self) -> list[frozenset]:
        return [frozenset()] + self.upper_sets[:-1]


def critical_values(m: Matroid, eta: dict | None = None) -> PartitionChain:
    """Critical values and nested minimizer chain.

    The critical values are read off the exact optimal usage probabilities
    and then confirmed against the parametric minimizer scan.
    """
    if eta is None:
        eta = exact_eta(m)
    values = sorted(set(eta.values()))
    uppers = [frozenset(e for e in m.ground if eta[e] <= lam) for lam in values]
    lowers = [frozenset()] + uppers[:-1]

    for lam, lo, hi in zip(values, lowers, uppers):
        pm = parametric_minimizers(m, lam)
        if pm.min_set != lo or pm.max_set != hi:
            raise ConsistencyError(f"parametric minimizers at {lam} disagree with the usage probabilities")
    # between and around critical values the minimizer must be unique
    probes = [values[0] / 2] + [(a + b) / 2 for a, b in zip(values, values[1:])] + [values[-1] + 1]
    for lam in probes:
        pm = parametric_minimizers(m, lam)
        if pm.min_set != pm.max_set:
            raise ConsistencyError(f"unexpected critical value near {lam}")

    minors = []
    for lo, hi in zip(lowers, uppers):
        level = m.restrict(hi) if hi != frozenset(m.ground) else m
        if lo:
            level = level.contract(lo)
        if not is_homogeneous(level):
            raise ConsistencyError("principal partition level minor is not homogeneous")
        minors.append(level)
    return PartitionChain(values, uppers, minors)


def weighted_strength(m: Matroid, sigma: dict) -> Extremum:
    """min sigma(X) / (r(E) - r(E-X)) by subset scan."""
    m.require_loopless()
    check_subset_cap(m.n)
    w = [Fraction(sigma[e]) for e in m.ground]
    r = m.full_rank
    best = best_mask = None
    for X in range(1, m.full + 1):
        drop = r - m.rank_mask(m.full ^ X)
        if drop <= 0:
            continue
        val = sum((w[i] for i in bits(X)), Fraction(0)) / drop
        if best is None or val < best:
            best, best_mask = val, X
    return Extremum(best, m.labels(best_mask))
