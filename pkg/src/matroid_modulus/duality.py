"""Fulkerson blocker of the base family, dominant membership, packing/covering.

The blocker family is obtained by filtering subsets (complement-closed, with
a connected contraction).  An independent vertex enumeration of the
admissible polyhedron is provided as an oracle for it.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, islice
from math import comb

import numpy as np

from .errors import CapExceeded, ConsistencyError, MatroidError
from .linalg import matrix_rank, solve
from .lp import maximize
from .matroid import Matroid, bits, check_subset_cap


@dataclass(frozen=True)
class BlockerVector:
    elements: frozenset
    denom: int
    vector: dict   # element -> Fraction, zero off the set

    def as_tuple(self, ground) -> tuple:
        return tuple(self.vector[e] for e in ground)


def blocker_vector(m: Matroid, X) -> BlockerVector:
    xm = m.mask(X)
    denom = m.full_rank - m.rank_mask(m.full ^ xm)
    if denom <= 0:
        raise MatroidError("set does not drop the rank when removed")
    w = Fraction(1, denom)
    vec = {e: (w if xm >> i & 1 else Fraction(0)) for i, e in enumerate(m.ground)}
    return BlockerVector(m.labels(xm), denom, vec)


def complement_closed_sets(m: Matroid) -> list[int]:
    """Nonempty X with cl(E - X) = E - X, ordered by size then index."""
    check_subset_cap(m.n)
    out = []
    for X in range(1, m.full + 1):
        comp = m.full ^ X
        if m.closure_mask(comp) == comp:
            out.append(X)
    out.sort(key=lambda s: (s.bit_count(), tuple(bits(s))))
    return out


def fulkerson_blocker(m: Matroid) -> list[BlockerVector]:
    """The blocker family: complement-closed X whose contraction M/(E-X) is connected."""
    m.require_loopless()
    out = []
    for X in complement_closed_sets(m):
        comp = m.full ^ X
        quotient = m.contract(m.labels(comp)) if comp else m
        if quotient.is_connected():
            out.append(blocker_vector(m, m.labels(X)))
    return out


def _usage_rows(m: Matroid) -> list[list[int]]:
    return [[b >> i & 1 for i in range(m.n)] for b in m.base_masks()]


def verify_extremity(m: Matroid, v: dict | BlockerVector) -> bool:
    """True iff v is a vertex of {rho >= 0 : N rho >= 1}."""
    if isinstance(v, BlockerVector):
        v = v.vector
    rho = [Fraction(v[e]) for e in m.ground]
    if any(x < 0 for x in rho):
        return False
    tight = []
    for row in _usage_rows(m):
        load = sum((x for x, a in zip(rho, row) if a), Fraction(0))
        if load < 1:
            return False
        if load == 1:
            tight.append(row)
    for i, x in enumerate(rho):
        if x == 0:
            tight.append([int(j == i) for j in range(m.n)])
    return bool(tight) and matrix_rank(tight) == m.n


def _minimal_patterns(patterns: list[tuple[int, ...]]) -> list[tuple[int, ...]]:
    # a pattern strictly containing another can never be tight on a positive support
    sets = [frozenset(i for i, a in enumerate(p) if a) for p in patterns]
    return [p for p, s in zip(patterns, sets) if not any(t < s for t in sets)]


def admissible_vertices(m: Matroid, max_systems: int = 5_000_000, chunk: int = 65_536) -> list[tuple[Fraction, ...]]:
    """All vertices of {rho >= 0 : N rho >= 1} by tight-system enumeration.

    For each support F, choose |F| distinct base rows restricted to F, solve
    them as equalities, keep feasible points.  Batched float solves screen
    the combinations; survivors are solved and checked exactly.  Raises
    CapExceeded when more than ``max_systems`` square systems would be needed.
    """
    check_subset_cap(m.n)
    n = m.n
    rows = _usage_rows(m)
    systems = []
    for free in range(1, m.full + 1):
        idx = list(bits(free))
        patterns = sorted({tuple(row[i] for i in idx) for row in rows})
        if any(not any(p) for p in patterns):
            continue   # some base avoids the support entirely
        patterns = _minimal_patterns(patterns)
        if len(patterns) >= len(idx):
            systems.append((idx, patterns))
    needed = sum(comb(len(pats), len(idx)) for idx, pats in systems)
    if needed > max_systems:
        raise CapExceeded("vertex systems", max_systems, needed)

    found: set[tuple[Fraction, ...]] = set()
    for idx, patterns in systems:
        k = len(idx)
        P = np.array(patterns, dtype=float)
        seen: set = set()
        combos = combinations(range(len(patterns)), k)
        while True:
            block = np.array(list(islice(combos, chunk)), dtype=np.intp).reshape(-1, k)
            if not len(block):
                break
            sub = P[block]
            good = np.abs(np.linalg.det(sub)) > 1e-9
            block, sub = block[good], sub[good]
            if not len(block):
                continue
            x = np.linalg.solve(sub, np.ones((len(block), k, 1)))[..., 0]
            feas = (x > 1e-9).all(axis=1) & (x @ P.T >= 1 - 1e-9).all(axis=1)
            for combo, xf in zip(block[feas], x[feas]):
                key = tuple(np.round(xf, 9))
                if key in seen:
                    continue
                seen.add(key)
                exact = solve([patterns[c] for c in combo], [1] * k)
                if exact is None or any(t <= 0 for t in exact):
                    continue
                full = [Fraction(0)] * n
                for i, t in zip(idx, exact):
                    full[i] = t
                if all(sum((full[i] for i in range(n) if row[i]), Fraction(0)) >= 1 for row in rows):
                    found.add(tuple(full))
    return sorted(found)


def dominant_membership(m: Matroid, eta: dict) -> tuple[bool, frozenset | None]:
    """Is eta(X) >= r(E) - r(E - X) for every X?  Returns the worst X on failure."""
    check_subset_cap(m.n)
    vals = [Fraction(eta[e]) for e in m.ground]
    if any(v < 0 for v in vals):
        raise MatroidError("density has a negative entry")
    r = m.full_rank
    worst, worst_mask = Fraction(0), None
    for X in range(1, m.full + 1):
        need = r - m.rank_mask(m.full ^ X)
        if need <= 0:
            continue
        gap = need - sum((vals[i] for i in bits(X)), Fraction(0))
        if gap > worst:
            worst, worst_mask = gap, X
    if worst_mask is None:
        return True, None
    return False, m.labels(worst_mask)


@dataclass(frozen=True)
class LpValue:
    value: Fraction
    primal: dict   # base (frozenset) -> weight
    dual: dict     # element -> weight


def packing_value(m: Matroid) -> LpValue:
    """max sum lambda(B) s.t. each element is covered at most once."""
    return _packing(m, {e: Fraction(1) for e in m.ground})


def _packing(m: Matroid, sigma: dict) -> LpValue:
    bases = m.base_masks()
    A = [[b >> i & 1 for b in bases] for i in range(m.n)]
    sol = maximize([1] * len(bases), A, [sigma[e] for e in m.ground])
    primal = {m.labels(b): x for b, x in zip(bases, sol.x) if x}
    dual = dict(zip(m.ground, sol.y))
    return LpValue(sol.value, primal, dual)


def covering_value(m: Matroid) -> LpValue:
    """min sum kappa(B) s.t. each element is covered at least once.

    Solved through its dual, max 1.y s.t. y(B) <= 1 for every base; the
    simplex multipliers of that LP are the covering weights.
    """
    bases = m.base_masks()
    A = [[b >> i & 1 for i in range(m.n)] for b in bases]
    sol = maximize([1] * m.n, A, [1] * len(bases))
    primal = {m.labels(b): k for b, k in zip(bases, sol.y) if k}
    dual = dict(zip(m.ground, sol.x))
    return LpValue(sol.value, primal, dual)


def mod1_dual_packing(m: Matroid, sigma: dict) -> LpValue:
    """Weighted packing; its dual multipliers form the optimal 1-modulus density."""
    if any(Fraction(sigma[e]) <= 0 for e in m.ground):
        raise MatroidError("weights must be positive")
    return _packing(m, {e: Fraction(sigma[e]) for e in m.ground})


def blocker_qp(m: Matroid, family: list[BlockerVector]) -> tuple[Fraction, dict]:
    """Exact min sum eta^2 over {eta : eta . theta >= 1 for theta in family}.

    Active-set enumeration: the optimum is eta = A_S^T lam with lam >= 0 and
    A_S eta = 1 for some linearly independent subset S of rows.
    """
    rows = [f.as_tuple(m.ground) for f in family]
    F = np.array(rows, dtype=float)
    for k in range(1, min(len(rows), m.n) + 1):
        for S in combinations(range(len(rows)), k):
            sub = F[list(S)]
            Gf = sub @ sub.T
            if abs(np.linalg.det(Gf)) < 1e-10:
                continue
            lf = np.linalg.solve(Gf, np.ones(k))
            if (lf < -1e-9).any() or (F @ (lf @ sub) < 1 - 1e-9).any():
                continue
            G = [[sum(a * b for a, b in zip(rows[i], rows[j])) for j in S] for i in S]
            lam = solve(G, [1] * k)
            if lam is None or any(t < 0 for t in lam):
                continue
            eta = [sum(l * rows[i][e] for l, i in zip(lam, S)) for e in range(m.n)]
            if all(sum(a * b for a, b in zip(row, eta)) >= 1 for row in rows):
                return sum(x * x for x in eta), dict(zip(m.ground, eta))
    raise ConsistencyError("no KKT point found for the blocker QP")


@dataclass(frozen=True)
class DualIdentity:
    eta: dict
    eta_dual: dict
    max_gap: Fraction


def dual_eta_identity(m: Matroid) -> DualIdentity:
    """Usage probabilities of M and of M* sum to one elementwise.

    Loops of M* (coloops of M) get probability zero; the rest of M* is
    handled by deflation of the loopless part.
    """
    from .principal import exact_eta

    m.require_loopless()
    r, n = m.full_rank, m.n
    if r >= n:
        raise MatroidError("dual matroid has rank 0 (every element is a coloop)")
    eta = exact_eta(m)
    md = m.dual()
    loops = md.loops()
    core = md.delete(loops) if loops else md
    eta_core = exact_eta(core)
    eta_dual = {e: (Fraction(0) if e in loops else eta_core[e]) for e in m.ground}
    gap = max(abs(eta[e] + eta_dual[e] - 1) for e in m.ground)
    if gap != 0:
        raise ConsistencyError(f"primal and dual usage probabilities do not sum to one (gap {gap})")
    return DualIdentity(eta, eta_dual, gap)


def verify_meomod(m: Matroid, result) -> bool:
    """Check the optimality system for (rho, eta, mu) on every base.

    (i) rho admissible and eta = N^T mu; (ii) rho = Mod * eta;
    (iii) mu(B) > 0 only on bases of usage exactly 1.
    """
    rho, eta, pmf, mod = result.rho_star, result.eta_star, result.pmf, result.mod_value
    base_sets = set(m.enumerate_bases())
    if sum(pmf.values()) != 1 or any(w < 0 for w in pmf.values()):
        return False
    if any(B not in base_sets for B in pmf):
        return False
    usage = {e: Fraction(0) for e in m.ground}
    for B, w in pmf.items():
        for e in B:
            usage[e] += w
    if any(usage[e] != eta[e] for e in m.ground):
        return False
    if any(rho[e] != mod * eta[e] for e in m.ground):
        return False
    for B in base_sets:
        load = sum((rho[e] for e in B), Fraction(0))
        if load < 1:
            return False
        if pmf.get(B, 0) > 0 and load != 1:
            return False
    return True
