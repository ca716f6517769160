"""Base-family modulus: Mod_2, MEO, optimal densities and pmfs, Mod_1, Mod_p.

Two independent routes to the optimal usage probabilities are kept side by
side: the exact deflation chain (authoritative) and Wolfe's minimum-norm-point
iteration in binary64.  ``brute_force_eta`` is a third, exact route that only
looks at the enumerated bases.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Hashable, Iterable, Sequence

import numpy as np

from .duality import mod1_dual_packing
from .errors import ConsistencyError, ConvergenceError, MatroidError
from .linalg import solve
from .matroid import Matroid, bits, check_subset_cap
from .principal import DeflationChain, deflate, weighted_strength


def total_usage(rho: dict, B: Iterable[Hashable]):
    """Sum of rho over the elements of B."""
    return sum((rho[e] for e in B), Fraction(0))


# ---------------------------------------------------------------------------
# greedy linear oracle


def _greedy_base(m: Matroid, order: Sequence[int]) -> int:
    base, r = 0, 0
    for i in order:
        trial = base | (1 << i)
        if m.rank_mask(trial) > r:
            base, r = trial, r + 1
    return base


def min_weight_base(m: Matroid, weights: Sequence) -> int:
    """Minimum-weight base; ties broken by element index."""
    order = sorted(range(m.n), key=lambda i: (weights[i], i))
    return _greedy_base(m, order)


@dataclass(frozen=True)
class Admissibility:
    admissible: bool
    min_weight: Fraction
    witness: frozenset   # a minimum-weight base; violates the constraint if not admissible

    def __bool__(self) -> bool:
        return self.admissible


def is_admissible(m: Matroid, rho: dict) -> Admissibility:
    vals = [Fraction(rho[e]) for e in m.ground]
    if any(v < 0 for v in vals):
        raise MatroidError("density has a negative entry")
    b = min_weight_base(m, vals)
    w = sum((vals[i] for i in bits(b)), Fraction(0))
    return Admissibility(w >= 1, w, m.labels(b))


# ---------------------------------------------------------------------------
# Wolfe minimum-norm point over the base polytope


@dataclass(frozen=True)
class MinNormPoint:
    eta: dict        # element -> float
    gap: float       # final Wolfe gap x.x - min_q x.q
    major_cycles: int


def _affine_minimizer(S: np.ndarray) -> np.ndarray:
    """Coefficients a (sum a = 1) minimizing |a @ S|."""
    k = S.shape[0]
    K = np.zeros((k + 1, k + 1))
    K[:k, :k] = S @ S.T
    K[:k, k] = 1.0
    K[k, :k] = 1.0
    rhs = np.zeros(k + 1)
    rhs[k] = 1.0
    sol = np.linalg.lstsq(K, rhs, rcond=None)[0]
    return sol[:k]


def min_norm_point(m: Matroid, tol: float = 1e-9, max_cycles: int = 100_000) -> MinNormPoint:
    """Wolfe's algorithm on co(bases), using the greedy algorithm as linear oracle."""
    m.require_loopless()
    n = m.n
    eps = 1e-12

    def vertex(w):
        b = min_weight_base(m, list(w))
        return np.array([(b >> i) & 1 for i in range(n)], dtype=float)

    x = vertex(np.zeros(n))
    S = x[None, :].copy()
    lam = np.array([1.0])
    gap = np.inf
    for cycle in range(1, max_cycles + 1):
        q = vertex(x)
        gap = float(x @ x - x @ q)
        if gap <= tol:
            break
        if any(np.array_equal(q, s) for s in S):
            break
        S = np.vstack([S, q])
        lam = np.append(lam, 0.0)
        while True:
            alpha = _affine_minimizer(S)
            if (alpha > eps).all():
                lam = alpha
                x = lam @ S
                break
            mask = alpha <= eps
            theta = np.min(lam[mask] / (lam[mask] - alpha[mask]))
            lam = theta * alpha + (1 - theta) * lam
            keep = lam > eps
            S, lam = S[keep], lam[keep]
            lam = lam / lam.sum()
            x = lam @ S
    else:
        raise ConvergenceError(f"Wolfe iteration cap reached with gap {gap:.3e}", gap=gap)
    # final polish on the settled corral
    alpha = _affine_minimizer(S)
    if (alpha > -eps).all():
        x = alpha @ S
    return MinNormPoint(dict(zip(m.ground, x.tolist())), gap, cycle)


# ---------------------------------------------------------------------------
# exact brute-force oracle over enumerated bases


@dataclass(frozen=True)
class BruteForceResult:
    eta: dict
    pmf: dict   # base -> Fraction
    meo: Fraction
    method: str


def _kkt_support(vectors: list[tuple[int, ...]], S: Sequence[int]):
    """Solve min |N_S^T mu|^2 on the simplex face S exactly; None if not optimal."""
    k = len(S)
    G = [[sum(a * b for a, b in zip(vectors[i], vectors[j])) for j in S] + [1] for i in S]
    G.append([1] * k + [0])
    sol = solve(G, [0] * k + [1])
    if sol is None:
        return None
    mu = sol[:k]
    if any(v < 0 for v in mu):
        return None
    eta = [sum((mu[t] * vectors[i][e] for t, i in enumerate(S)), Fraction(0)) for e in range(len(vectors[0]))]
    energy = sum(v * v for v in eta)
    if any(sum(v for v, a in zip(eta, vec) if a) < energy for vec in vectors):
        return None
    return mu, eta, energy


def _float_screen(F: np.ndarray, S: Sequence[int]) -> bool:
    sub = F[list(S)]
    k = len(S)
    K = np.zeros((k + 1, k + 1))
    K[:k, :k] = sub @ sub.T
    K[:k, k] = 1.0
    K[k, :k] = 1.0
    if abs(np.linalg.det(K)) < 1e-10:
        return False
    rhs = np.zeros(k + 1)
    rhs[k] = 1.0
    mu = np.linalg.solve(K, rhs)[:k]
    if (mu < -1e-9).any():
        return False
    eta = mu @ sub
    return bool((F @ eta >= eta @ eta - 1e-9).all())


def _exact_active_set(vectors: list[tuple[int, ...]]) -> tuple[list[int], list[Fraction]]:
    """Wolfe-style active-set method on an explicit point list, in exact rationals."""
    npts = len(vectors)
    dim = len(vectors[0])

    def point(S, lam):
        return [sum((l * vectors[i][e] for l, i in zip(lam, S)), Fraction(0)) for e in range(dim)]

    def affine(S):
        k = len(S)
        G = [[sum(a * b for a, b in zip(vectors[i], vectors[j])) for j in S] + [1] for i in S]
        G.append([1] * k + [0])
        sol = solve(G, [0] * k + [1])
        if sol is None:
            raise ConsistencyError("affinely dependent corral in exact active-set method")
        return sol[:k]

    S, lam = [0], [Fraction(1)]
    for _ in range(10_000):
        x = point(S, lam)
        xx = sum(v * v for v in x)
        scores = [sum(v for v, a in zip(x, vec) if a) for vec in vectors]
        j = min(range(npts), key=lambda i: (scores[i], i))
        if scores[j] >= xx or j in S:
            return S, lam
        S, lam = S + [j], lam + [Fraction(0)]
        while True:
            alpha = affine(S)
            if all(a > 0 for a in alpha):
                lam = alpha
                break
            theta = min(l / (l - a) for l, a in zip(lam, alpha) if a <= 0)
            lam = [theta * a + (1 - theta) * l for l, a in zip(lam, alpha)]
            keep = [t for t, l in enumerate(lam) if l > 0]
            S = [S[t] for t in keep]
            lam = [lam[t] for t in keep]
    raise ConvergenceError("exact active-set method did not terminate")


def brute_force_eta(m: Matroid, max_supports: int = 20_000) -> BruteForceResult:
    """Exact minimizer of mu^T N N^T mu over pmfs on the enumerated bases.

    Supports are tried by size, then lexicographically; the first one whose
    equality-constrained solution is KKT-feasible wins.  If ``max_supports``
    candidate supports are exhausted first, an exact active-set method over
    the same explicit base list finishes the job.  Works for set families
    with loops (e.g. bases of a dual matroid).
    """
    base_masks = m.base_masks()
    vectors = [tuple((b >> i) & 1 for i in range(m.n)) for b in base_masks]
    F = np.array(vectors, dtype=float)
    tried = 0
    kmax = min(len(vectors), m.n)
    for k in range(1, kmax + 1):
        for S in combinations(range(len(vectors)), k):
            tried += 1
            if tried > max_supports:
                break
            if not _float_screen(F, S):
                continue
            res = _kkt_support(vectors, S)
            if res is not None:
                mu, eta, energy = res
                pmf = {m.labels(base_masks[i]): w for i, w in zip(S, mu) if w}
                return BruteForceResult(dict(zip(m.ground, eta)), pmf, energy, "support-search")
        if tried > max_supports:
            break
    S, lam = _exact_active_set(vectors)
    res = _kkt_support(vectors, S)
    if res is None:
        raise ConsistencyError("active-set result fails the KKT check")
    mu, eta, energy = res
    pmf = {m.labels(base_masks[i]): w for i, w in zip(S, mu) if w}
    return BruteForceResult(dict(zip(m.ground, eta)), pmf, energy, "active-set")


# ---------------------------------------------------------------------------
# Caratheodory witness


def base_decomposition(m: Matroid, eta: dict) -> dict:
    """Write eta as a convex combination of base indicators, exactly.

    Each step picks a base that is tight on a maximal chain of the sets
    currently tight for the residual (so it lies on the residual's minimal
    face), preferring large residual entries, and removes as much of it as
    keeps the residual inside the scaled base polytope.
    """
    check_subset_cap(m.n)
    n, full = m.n, m.full
    y = [Fraction(eta[e]) for e in m.ground]
    if any(v < 0 for v in y):
        raise MatroidError("point has a negative entry")
    t = Fraction(1)
    r_full = m.full_rank
    ranks = [m.rank_mask(X) for X in range(full + 1)]
    pmf: dict = {}

    def subset_sums(vals):
        sums = [Fraction(0)] * (full + 1)
        for X in range(1, full + 1):
            low = X & -X
            sums[X] = sums[X ^ low] + vals[low.bit_length() - 1]
        return sums

    sums = subset_sums(y)
    if sums[full] != r_full or any(sums[X] > ranks[X] for X in range(full + 1)):
        raise MatroidError("point is not in the base polytope")

    for _ in range(2 * n + 2):
        if t == 0:
            break
        tight = [X for X in range(full + 1) if sums[X] == t * ranks[X]]
        chain, cur = [], 0
        while cur != full:
            nxt = min((X for X in tight if X != cur and X & cur == cur), key=lambda X: (X.bit_count(), X))
            chain.append(nxt & ~cur)
            cur = nxt
        layer = {}
        for k, diff in enumerate(chain):
            for i in bits(diff):
                layer[i] = k
        order = sorted(range(n), key=lambda i: (layer[i], -y[i], i))
        B = _greedy_base(m, order)
        alpha = min(t, min(y[i] for i in bits(B)))
        for X in range(1, full + 1):
            short = ranks[X] - (B & X).bit_count()
            if short > 0:
                alpha = min(alpha, (t * ranks[X] - sums[X]) / short)
        if alpha <= 0:
            raise MatroidError("decomposition stalled: point is not in the base polytope")
        label = m.labels(B)
        pmf[label] = pmf.get(label, Fraction(0)) + alpha
        for i in bits(B):
            y[i] -= alpha
        t -= alpha
        sums = subset_sums(y)
    if t != 0 or any(y):
        raise MatroidError("decomposition did not terminate")
    return {B: pmf[B] for B in sorted(pmf, key=lambda B: sorted(m.index[e] for e in B))}


# ---------------------------------------------------------------------------
# Mod_2 and friends


@dataclass
class ModulusResult:
    mod_value: Fraction
    rho_star: dict
    eta_star: dict
    meo: Fraction
    pmf: dict
    fair_support: list
    numeric_eta: dict | None = None
    numeric_deviation: float | None = None
    chain: DeflationChain | None = field(default=None, repr=False)


def mod2(m: Matroid, tol: float = 1e-9, agreement_tol: float = 1e-9, brute_force: bool = True) -> ModulusResult:
    """2-modulus of the base family with every cross-check applied."""
    m.require_loopless()
    chain = deflate(m)
    eta = chain.eta()

    wolfe = min_norm_point(m, tol=tol)
    dev = max(abs(wolfe.eta[e] - float(eta[e])) for e in m.ground)
    if dev > agreement_tol:
        raise ConsistencyError(f"Wolfe iterate deviates from exact usage probabilities by {dev:.3e}")
    if brute_force:
        bf = brute_force_eta(m)
        if bf.eta != eta:
            raise ConsistencyError("brute-force QP disagrees with deflation")

    r = m.full_rank
    if sum(eta.values()) != r:
        raise ConsistencyError("usage probabilities do not sum to the rank")
    if any(v <= 0 for v in eta.values()):
        raise ConsistencyError("non-positive usage probability")
    meo = sum(v * v for v in eta.values())
    mod = 1 / meo
    rho = {e: mod * eta[e] for e in m.ground}
    pmf = base_decomposition(m, eta)
    fair = list(pmf)
    for B in fair:
        if total_usage(rho, B) != 1:
            raise ConsistencyError("complementary slackness fails on a fair base")
    if not is_admissible(m, rho):
        raise ConsistencyError("optimal density is not admissible")
    return ModulusResult(mod, rho, eta, meo, pmf, fair, wolfe.eta, dev, chain)


def mod1_weighted(m: Matroid, sigma: dict) -> Fraction:
    """Weighted 1-modulus by exact LP; equals the weighted strength."""
    m.require_loopless()
    lp = mod1_dual_packing(m, sigma)
    rho = lp.dual
    if not is_admissible(m, rho):
        raise ConsistencyError("LP dual density is not admissible")
    if sum(Fraction(sigma[e]) * rho[e] for e in m.ground) != lp.value:
        raise ConsistencyError("LP dual objective mismatch")
    ws = weighted_strength(m, sigma)
    if ws.value != lp.value:
        raise ConsistencyError(f"weighted strength {ws.value} differs from LP value {lp.value}")
    return lp.value


@dataclass(frozen=True)
class ModPResult:
    p: Fraction
    q: Fraction
    value: float
    exact: Fraction | None   # available when the value is rational (p = 2)
    rho: dict                 # element -> float
    eta: dict                 # element -> Fraction


def _as_exponent(p) -> Fraction:
    p = Fraction(p)
    if p <= 1:
        raise MatroidError(f"p must exceed 1, got {p}")
    return p


def mod_p(m: Matroid, p, chain: DeflationChain | None = None) -> ModPResult:
    """Closed-form p-modulus from the deflation chain."""
    p = _as_exponent(p)
    q = p / (p - 1)
    if chain is None:
        chain = deflate(m)
    eta = chain.eta()
    qf, pf = float(q), float(p)
    energy_q = sum(blk.rank ** qf / blk.matroid.n ** (qf - 1) for blk in chain.blocks)
    value = energy_q ** (1 - pf)
    exact = None
    if q.denominator == 1 and p.denominator == 1:
        eq = sum(Fraction(blk.rank) ** int(q) / Fraction(blk.matroid.n) ** int(q - 1) for blk in chain.blocks)
        exact = eq ** int(1 - p)
        value = float(exact)
    rho = {e: float(eta[e]) ** (qf - 1) / energy_q for e in m.ground}
    return ModPResult(p, q, value, exact, rho, eta)


@dataclass(frozen=True)
class NumericModP:
    value: float
    lower: float    # Lagrangian dual bound
    upper: float    # energy of a feasible rescaled density
    iterations: int


def mod_p_numeric(m: Matroid, p, rel_gap: float = 1e-7, max_iter: int = 200_000) -> NumericModP:
    """Mod_p of the base family by accelerated projected gradient.

    Works on the Lagrangian dual of  min sum rho^p  s.t.  N rho >= 1:
    for multipliers lam >= 0 the inner minimizer is
    rho = (N^T lam / p)^(1/(p-1)) and the dual gradient is 1 - N rho, so the
    projection is a clip at zero.  Stops when the dual bound and the energy of
    the rescaled (feasible) rho agree to ``rel_gap``.  Does not use the
    deflation chain.
    """
    p = _as_exponent(p)
    pf = float(p)
    N = np.array([[(b >> i) & 1 for i in range(m.n)] for b in m.base_masks()], dtype=float)

    def density(lam):
        return (np.maximum(lam @ N, 0.0) / pf) ** (1.0 / (pf - 1.0))

    def g(lam):
        rho = density(lam)
        return float(lam.sum() - (pf - 1.0) * np.sum(rho ** pf)), rho

    lam = np.full(N.shape[0], 1.0 / N.shape[0])
    z, t_acc, step = lam.copy(), 1.0, 1.0
    lower, upper = -np.inf, np.inf
    for it in range(1, max_iter + 1):
        gz, rho_z = g(z)
        grad = 1.0 - N @ rho_z
        while True:
            cand = np.maximum(z + step * grad, 0.0)
            d = cand - z
            gc, rho_c = g(cand)
            if gc >= gz + grad @ d - (d @ d) / (2 * step) - 1e-15 * abs(gz):
                break
            step *= 0.5
        t_next = (1 + np.sqrt(1 + 4 * t_acc ** 2)) / 2
        z = cand + ((t_acc - 1) / t_next) * (cand - lam)
        if (cand - lam) @ d < 0:   # momentum pointing the wrong way: restart
            z, t_next = cand.copy(), 1.0
        lam, t_acc = cand, t_next
        lower = max(lower, gc)
        loads = N @ rho_c
        if loads.min() > 0:
            upper = min(upper, float(np.sum((rho_c / loads.min()) ** pf)))
        if np.isfinite(upper) and upper - lower <= rel_gap * upper:
            break
        step *= 1.2
    else:
        raise ConvergenceError(f"p-modulus solve stalled, gap {upper - lower:.3e}", gap=upper - lower)
    return NumericModP((lower + upper) / 2, lower, upper, it)
