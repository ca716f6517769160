"""The invariant suite run by ``matmod verify``.

Every check is a function of an :class:`Instance` (which caches the shared
expensive quantities) returning ``(ok, detail)``.  Checks whose hypothesis
does not hold on the instance, or which exceed the size limits in
:class:`VerifyConfig`, are reported as skipped rather than passed.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Callable

from .beurling import is_beurling, serial_split
from .duality import (admissible_vertices, blocker_qp, covering_value, dominant_membership,
                      dual_eta_identity, fulkerson_blocker, packing_value, verify_extremity, verify_meomod)
from .errors import CapExceeded, ConsistencyError, ConvergenceError, MatroidError
from .matroid import Matroid, bits, connected_by_circuits
from .modulus import (base_decomposition, brute_force_eta, is_admissible, min_norm_point,
                      mod1_weighted, mod2, mod_p, mod_p_numeric)
from .principal import (critical_values, density_theta, fractional_arboricity, is_homogeneous, strength,
                        weighted_strength)


@dataclass(frozen=True)
class VerifyConfig:
    seed: int = 0
    admissibility_samples: int = 200
    lex_samples: int = 500
    wolfe_tol: float = 1e-9
    p_values: tuple[str, ...] = ("3/2", "2", "3", "5")
    p_rel_tol: float = 1e-6
    pair_limit: int = 8        # all-pairs submodularity up to this |E|, local form beyond
    exhaustive_limit: int = 12  # exhaustive subset checks up to this |E|
    vertex_limit: int = 8       # vertex enumeration of the admissible polyhedron
    vertex_systems: int = 250_000
    brute_force: bool = True


@dataclass
class CheckResult:
    name: str
    status: str   # "pass", "fail" or "skip"
    detail: str = ""

    @property
    def ok(self) -> bool:
        return self.status != "fail"

    def line(self) -> str:
        tail = f": {self.detail}" if self.detail else ""
        return f"{self.status.upper():4} {self.name}{tail}"


class Skip(Exception):
    pass


class Instance:
    """A matroid plus lazily computed shared results."""

    def __init__(self, m: Matroid, config: VerifyConfig = VerifyConfig()):
        self.m = m
        self.config = config
        self.rng = random.Random(config.seed)

    @cached_property
    def result(self):
        return mod2(self.m, tol=self.config.wolfe_tol, brute_force=False)

    @cached_property
    def eta(self):
        return self.result.eta_star

    @cached_property
    def S(self):
        return strength(self.m).value

    @cached_property
    def D(self):
        return fractional_arboricity(self.m).value

    @cached_property
    def theta(self):
        return density_theta(self.m)

    @cached_property
    def tau(self):
        return packing_value(self.m).value

    @cached_property
    def upsilon(self):
        return covering_value(self.m).value

    @cached_property
    def bases(self):
        return self.m.base_masks()

    @cached_property
    def fair_masks(self):
        return [self.m.mask(B) for B in self.result.fair_support]

    def eta_of(self, X: int) -> Fraction:
        vals = [self.eta[e] for e in self.m.ground]
        return sum((vals[i] for i in bits(X)), Fraction(0))

    def require_size(self, limit: int) -> None:
        if self.m.n > limit:
            raise Skip(f"|E| = {self.m.n} exceeds {limit}")


CHECKS: list[tuple[str, str, Callable[[Instance], str | None]]] = []


def check(module: str, name: str):
    def register(fn):
        CHECKS.append((module, name, fn))
        return fn
    return register


def _fmt(X, m: Matroid) -> str:
    return "{" + ",".join(str(e) for e in m.ordered(m.labels(X) if isinstance(X, int) else X)) + "}"


# ---------------------------------------------------------------------------
# matroid core


@check("matroid", "rank is normalized, bounded by size and monotone")
def _rank_basic(I: Instance):
    I.require_size(I.config.exhaustive_limit)
    m = I.m
    if m.rank_mask(0) != 0:
        return "r(empty) != 0"
    for X in range(1, m.full + 1):
        rx = m.rank_mask(X)
        if not 0 <= rx <= X.bit_count():
            return f"r{_fmt(X, m)} = {rx} out of range"
        for i in bits(m.full ^ X):
            if m.rank_mask(X | 1 << i) - rx not in (0, 1):
                return f"adding an element to {_fmt(X, m)} changes rank by more than one"
    return None


@check("matroid", "rank is submodular")
def _submodular(I: Instance):
    I.require_size(I.config.exhaustive_limit)
    m = I.m
    r = m.rank_mask
    if m.n <= I.config.pair_limit:
        for X in range(m.full + 1):
            for Y in range(X, m.full + 1):
                if r(X) + r(Y) < r(X | Y) + r(X & Y):
                    return f"violated at {_fmt(X, m)}, {_fmt(Y, m)}"
        return None
    # equivalent local form: r(X+e) + r(X+f) >= r(X+e+f) + r(X)
    for X in range(m.full + 1):
        free = list(bits(m.full ^ X))
        for a in range(len(free)):
            for b in range(a + 1, len(free)):
                e, f = 1 << free[a], 1 << free[b]
                if r(X | e) + r(X | f) < r(X | e | f) + r(X):
                    return f"violated at {_fmt(X | e, m)}, {_fmt(X | f, m)}"
    return None


@check("matroid", "bases satisfy the exchange axiom")
def _exchange(I: Instance):
    base_set = set(I.bases)
    for B1 in I.bases:
        for B2 in I.bases:
            for x in bits(B1 & ~B2):
                if not any(((B1 ^ (1 << x)) | (1 << y)) in base_set for y in bits(B2 & ~B1)):
                    return f"no exchange for {_fmt(B1, I.m)}, {_fmt(B2, I.m)}, x={I.m.ground[x]}"
    return None


@check("matroid", "swapping along a fundamental circuit gives exactly the neighbouring bases")
def _fundamental(I: Instance):
    m = I.m
    base_set = set(I.bases)
    for B in I.bases:
        for x in bits(m.full ^ B):
            C = m.mask(m.fundamental_circuit(m.labels(B), m.ground[x]))
            if not C >> x & 1 or m.rank_mask(C) != C.bit_count() - 1:
                return f"C({m.ground[x]}, {_fmt(B, m)}) is not a circuit through x"
            if any(m.rank_mask(C ^ (1 << i)) != C.bit_count() - 1 for i in bits(C)):
                return f"C({m.ground[x]}, {_fmt(B, m)}) is not minimal"
            for y in bits(B):
                swapped = ((B ^ (1 << y)) | (1 << x)) in base_set
                if swapped != bool(C >> y & 1):
                    return f"swap {m.ground[y]} -> {m.ground[x]} in {_fmt(B, m)} disagrees with the circuit"
    return None


@check("matroid", "dual rank follows the corank formula and dualizing twice is the identity")
def _corank(I: Instance):
    I.require_size(I.config.exhaustive_limit)
    m = I.m
    md = m.dual()
    r = m.full_rank
    for X in range(m.full + 1):
        if md.rank_mask(X) != X.bit_count() - r + m.rank_mask(m.full ^ X):
            return f"corank mismatch at {_fmt(X, m)}"
    if set(md.base_masks()) != {m.full ^ B for B in I.bases}:
        return "dual bases are not the complements of bases"
    if set(md.dual().base_masks()) != set(I.bases):
        return "double dual changes the bases"
    return None


@check("matroid", "contraction bases extend a basis of the contracted set")
def _contraction_bases(I: Instance):
    m = I.m
    if m.n == 1:
        raise Skip("single element")
    for i in range(m.n):
        X = 1 << i
        minor = m.contract([m.ground[i]])
        lifted = {minor.lift(b) for b in minor.base_masks()}
        expect = {B & ~X for B in I.bases if B & X}
        if lifted != expect:
            return f"bases of M/{_fmt(X, m)} wrong"
        deleted = m.delete([m.ground[i]])
        if deleted.full_rank == m.full_rank:
            if {deleted.lift(b) for b in deleted.base_masks()} != {B for B in I.bases if not B & X}:
                return f"bases of M\\{_fmt(X, m)} wrong"
    return None


@check("matroid", "connectivity agrees with the common-circuit criterion")
def _connectivity(I: Instance):
    a, b = I.m.is_connected(), connected_by_circuits(I.m)
    return None if a == b else f"separator scan says {a}, circuits say {b}"


@check("matroid", "concatenated minor bases are the bases split along X")
def _concatenation(I: Instance):
    I.require_size(I.config.vertex_limit)
    m = I.m
    for X in range(1, m.full):
        comp = m.full ^ X
        left = m.delete(m.labels(X))
        right = m.contract(m.labels(comp))
        glued = {left.lift(a) | right.lift(b) for a in left.base_masks() for b in right.base_masks()}
        target = m.rank_mask(comp)
        expect = {B for B in I.bases if (B & comp).bit_count() == target}
        if glued != expect:
            return f"fails at X = {_fmt(X, m)}"
    return None


# ---------------------------------------------------------------------------
# modulus core


@check("modulus", "optimality system holds: admissible, parallel, complementary slackness")
def _optimality(I: Instance):
    return None if verify_meomod(I.m, I.result) else "verify_meomod rejected the result"


@check("modulus", "usage probabilities sum to the rank and are positive")
def _usage_sum(I: Instance):
    if sum(I.eta.values()) != I.m.full_rank:
        return "sum differs from r(E)"
    if min(I.eta.values()) <= 0:
        return "a usage probability is not positive"
    if I.result.mod_value * I.result.meo != 1:
        return "Mod_2 * MEO != 1"
    return None


@check("modulus", "base decomposition reproduces the usage probabilities")
def _decomposition(I: Instance):
    pmf = base_decomposition(I.m, I.eta)
    if sum(pmf.values()) != 1 or any(w <= 0 for w in pmf.values()):
        return "not a pmf"
    if len(pmf) > I.m.n + 1:
        return f"support size {len(pmf)} exceeds |E|+1"
    usage = {e: Fraction(0) for e in I.m.ground}
    for B, w in pmf.items():
        for e in B:
            usage[e] += w
    return None if usage == I.eta else "N^T mu != eta"


@check("modulus", "greedy admissibility matches the exhaustive minimum over bases")
def _greedy(I: Instance):
    m = I.m
    denom = 12
    for _ in range(I.config.admissibility_samples):
        nums = [I.rng.randint(0, 2 * denom) for _ in m.ground]
        verdict = is_admissible(m, {e: Fraction(a, denom) for e, a in zip(m.ground, nums)})
        exhaustive = Fraction(min(sum(nums[i] for i in bits(B)) for B in I.bases), denom)
        if verdict.min_weight != exhaustive or verdict.admissible != (exhaustive >= 1):
            return f"greedy weight {verdict.min_weight} vs exhaustive {exhaustive}"
    return None


@check("modulus", "on a fundamental circuit of a fair base the added element has maximal usage")
def _max_circuit(I: Instance):
    m = I.m
    for B in I.fair_masks:
        for x in bits(m.full ^ B):
            C = m.fundamental_circuit(m.labels(B), m.ground[x])
            if I.eta[m.ground[x]] != max(I.eta[e] for e in C):
                return f"fails for x={m.ground[x]}, B={_fmt(B, m)}"
    return None


@check("modulus", "energy is at least r(E)^2/|E|, with equality iff usage is constant")
def _energy_bound(I: Instance):
    bound = Fraction(I.m.full_rank ** 2, I.m.n)
    constant = len(set(I.eta.values())) == 1
    if I.result.meo < bound:
        return f"MEO {I.result.meo} below {bound}"
    if (I.result.meo == bound) != constant:
        return "equality case does not match constancy of usage"
    return None


@check("modulus", "constant density lies in the dominant iff usage is constant")
def _homogeneity(I: Instance):
    constant = len(set(I.eta.values())) == 1
    return None if is_homogeneous(I.m) == constant else "homogeneity test disagrees with usage probabilities"


@check("modulus", "Wolfe iterate matches exact usage probabilities")
def _wolfe(I: Instance):
    wp = min_norm_point(I.m, tol=I.config.wolfe_tol)
    dev = max(abs(wp.eta[e] - float(I.eta[e])) for e in I.m.ground)
    return None if dev <= I.config.wolfe_tol else f"max deviation {dev:.3e}"


@check("modulus", "exact usage probabilities are lexicographically optimal")
def _lex(I: Instance):
    m = I.m
    for _ in range(I.config.lex_samples):
        w = [I.rng.randint(0, 9) for _ in I.bases]
        tot = sum(w)
        if not tot:
            continue
        # compare tot * eta, which is integral for the sampled point
        usage = [0] * m.n
        for B, wi in zip(I.bases, w):
            for i in bits(B):
                usage[i] += wi
        best = tuple(sorted(tot * I.eta[e] for e in m.ground))
        if tuple(sorted(usage)) > best:
            return "a random point of the base polytope beats the optimum"
    return None


@check("modulus", "closed-form p-modulus matches the numeric convex solve")
def _mod_p(I: Instance):
    for p in I.config.p_values:
        closed = mod_p(I.m, p, chain=I.result.chain)
        if Fraction(p) == 2 and closed.exact != I.result.mod_value:
            return "closed form at p=2 differs from Mod_2"
        num = mod_p_numeric(I.m, p)
        rel = abs(closed.value - num.value) / closed.value
        if rel > I.config.p_rel_tol:
            return f"p={p}: relative error {rel:.2e}"
    return None


@check("modulus", "weighted 1-modulus equals weighted strength")
def _mod1(I: Instance):
    m = I.m
    for sigma in ({e: 1 for e in m.ground}, {e: I.rng.randint(1, 9) for e in m.ground}):
        if mod1_weighted(m, sigma) != weighted_strength(m, sigma).value:
            return f"mismatch for weights {sigma}"
    return None


@check("modulus", "brute-force QP agrees with deflation")
def _brute(I: Instance):
    if not I.config.brute_force:
        raise Skip("disabled")
    bf = brute_force_eta(I.m)
    if bf.eta != I.eta:
        return "usage probabilities differ"
    return None if bf.meo == I.result.meo else "MEO differs"


# ---------------------------------------------------------------------------
# principal partition


@check("principal", "largest usage is the reciprocal of strength")
def _strength(I: Instance):
    return None if 1 / max(I.eta.values()) == I.S else f"1/eta_max = {1 / max(I.eta.values())}, S = {I.S}"


@check("principal", "smallest usage is the reciprocal of fractional arboricity")
def _arboricity(I: Instance):
    return None if 1 / min(I.eta.values()) == I.D else f"1/eta_min = {1 / min(I.eta.values())}, D = {I.D}"


@check("principal", "max-usage set is Beurling and complement-closed")
def _emax(I: Instance):
    m = I.m
    top = max(I.eta.values())
    X = m.mask(e for e in m.ground if I.eta[e] == top)
    if I.eta_of(X) != m.full_rank - m.rank_mask(m.full ^ X):
        return "not Beurling"
    return None if m.closure_mask(m.full ^ X) == m.full ^ X else "complement not closed"


@check("principal", "min-usage set is complement-Beurling, closed and maximal densest")
def _emin(I: Instance):
    m = I.m
    low = min(I.eta.values())
    Y = m.mask(e for e in m.ground if I.eta[e] == low)
    if I.eta_of(Y) != m.rank_mask(Y):
        return "not complement-Beurling"
    if m.closure_mask(Y) != Y:
        return "not closed"
    densest = m.mask(fractional_arboricity(m).witness)
    return None if densest == Y else "maximal densest set differs from the min-usage set"


@check("principal", "constant usage iff S = theta iff D = theta iff S = D")
def _homog_equiv(I: Instance):
    flags = [len(set(I.eta.values())) == 1, I.S == I.theta, I.D == I.theta, I.S == I.D]
    return None if len(set(flags)) == 1 else f"flags disagree: {flags}"


@check("principal", "strength grows under contraction, arboricity shrinks under deletion")
def _minor_monotone(I: Instance):
    I.require_size(I.config.vertex_limit)
    m = I.m
    for X in range(1, m.full + 1):
        comp = m.full ^ X
        if m.closure_mask(comp) != m.full:
            minor = m.contract(m.labels(comp)) if comp else m
            if strength(minor, allow_loops=True).value < I.S:
                return f"S(M/(E-X)) < S(M) for X = {_fmt(X, m)}"
        minor = m.restrict(m.labels(X)) if comp else m
        if minor.full_rank and fractional_arboricity(minor, allow_loops=True).value > I.D:
            return f"D(M|Y) > D(M) for Y = {_fmt(X, m)}"
    return None


@check("principal", "inequality chain S <= tau <= theta <= upsilon <= D")
def _chain(I: Instance):
    vals = [I.S, I.tau, I.theta, I.upsilon, I.D]
    return None if vals == sorted(vals) else f"chain broken: {[str(v) for v in vals]}"


@check("principal", "critical values match the parametric minimizer lattice")
def _critical(I: Instance):
    pc = critical_values(I.m, I.eta)
    if pc.upper_sets[-1] != frozenset(I.m.ground):
        return "chain does not end at E"
    return None


@check("principal", "deflation blocks are homogeneous with increasing densities")
def _deflation(I: Instance):
    blocks = I.result.chain.blocks
    if any(not is_homogeneous(b.matroid) for b in blocks):
        return "inhomogeneous block"
    covered = frozenset().union(*(b.elements for b in blocks))
    if covered != frozenset(I.m.ground) or sum(len(b.elements) for b in blocks) != I.m.n:
        return "blocks do not partition E"
    return None


@check("principal", "set bounds r(E) - r(E-X) <= eta(X) <= r(X) with fair-base equality cases")
def _tight_sets(I: Instance):
    I.require_size(I.config.exhaustive_limit)
    m = I.m
    r = m.full_rank
    for X in range(m.full + 1):
        comp = m.full ^ X
        ex, lo, hi = I.eta_of(X), r - m.rank_mask(comp), m.rank_mask(X)
        if not lo <= ex <= hi:
            return f"bounds fail at {_fmt(X, m)}"
        beurling = all((B & comp).bit_count() == m.rank_mask(comp) for B in I.fair_masks)
        if (ex == lo) != beurling:
            return f"Beurling equality case fails at {_fmt(X, m)}"
        cobeurling = all((B & X).bit_count() == hi for B in I.fair_masks)
        if (ex == hi) != cobeurling:
            return f"complement-Beurling equality case fails at {_fmt(X, m)}"
        if ex == lo and m.closure_mask(comp) != comp:
            return f"Beurling set {_fmt(X, m)} is not complement-closed"
    return None


@check("principal", "every base meets X in between r(E) - r(E-X) and r(X) elements")
def _b_cap_x(I: Instance):
    I.require_size(I.config.vertex_limit)
    m = I.m
    r = m.full_rank
    for X in range(m.full + 1):
        lo, hi = r - m.rank_mask(m.full ^ X), m.rank_mask(X)
        if any(not lo <= (B & X).bit_count() <= hi for B in I.bases):
            return f"fails at {_fmt(X, m)}"
    return None


@check("principal", "MEO splits serially along every Beurling set")
def _serial(I: Instance):
    I.require_size(I.config.vertex_limit)
    m = I.m
    for X in range(1, m.full):
        labels = m.labels(X)
        cert = is_beurling(m, labels, I.eta, I.result.fair_support)
        if cert.fair_bases_ok is False:
            return f"fair-base characterization fails at {_fmt(X, m)}"
        if not cert.is_beurling:
            continue
        split = serial_split(m, labels, I.result, brute_force=False)
        if not split.verified:
            return f"product pmf fails the optimality system at {_fmt(X, m)}"
    return None


# ---------------------------------------------------------------------------
# duality suite


@check("duality", "blocker family equals the vertices of the admissible polyhedron")
def _blocker(I: Instance):
    I.require_size(I.config.vertex_limit)
    theta = {v.as_tuple(I.m.ground) for v in fulkerson_blocker(I.m)}
    try:
        verts = set(admissible_vertices(I.m, max_systems=I.config.vertex_systems))
    except CapExceeded as exc:
        raise Skip(str(exc)) from None
    if theta == verts:
        return None
    return f"{len(theta - verts)} blocker vectors are not vertices, {len(verts - theta)} vertices missing"


@check("duality", "blocker vectors are admissible extreme points with positive denominators")
def _blocker_extreme(I: Instance):
    for v in fulkerson_blocker(I.m):
        if v.denom < 1 or not verify_extremity(I.m, v):
            return f"{_fmt(v.elements, I.m)} fails"
    return None


@check("duality", "squared modulus over the blocker family is the reciprocal of Mod_2")
def _blocker_qp(I: Instance):
    I.require_size(I.config.vertex_limit)
    value, eta = blocker_qp(I.m, fulkerson_blocker(I.m))
    if value * I.result.mod_value != 1:
        return f"product is {value * I.result.mod_value}"
    if eta != I.eta:
        return "minimizer differs from the usage probabilities"
    ok, worst = dominant_membership(I.m, eta)
    return None if ok else f"minimizer leaves the dominant at {worst}"


@check("duality", "packing value equals strength and covering value equals arboricity")
def _pack_cover(I: Instance):
    if I.tau != I.S:
        return f"tau = {I.tau}, S = {I.S}"
    return None if I.upsilon == I.D else f"upsilon = {I.upsilon}, D = {I.D}"


@check("duality", "packing or covering meeting the density forces constant usage")
def _pack_density(I: Instance):
    if I.tau != I.theta and I.upsilon != I.theta:
        raise Skip("hypothesis does not hold")
    return None if len(set(I.eta.values())) == 1 else "usage is not constant"


@check("duality", "usage probabilities of M and its dual sum to one")
def _dual_sum(I: Instance):
    if I.m.full_rank >= I.m.n:
        raise Skip("every element is a coloop")
    dual_eta_identity(I.m)
    return None


@check("duality", "dual strength and arboricity are complementary reciprocals")
def _dual_recip(I: Instance):
    m = I.m
    if m.full_rank >= m.n:
        raise Skip("every element is a coloop")
    md = m.dual()
    if md.loops():
        raise Skip("dual has loops")
    if 1 / I.D + 1 / strength(md).value != 1:
        return "1/D(M) + 1/S(M*) != 1"
    return None if 1 / I.S + 1 / fractional_arboricity(md).value == 1 else "1/S(M) + 1/D(M*) != 1"


# ---------------------------------------------------------------------------


def run_checks(m: Matroid, config: VerifyConfig = VerifyConfig()) -> list[CheckResult]:
    """Run every registered check.  CapExceeded propagates; other failures are reported."""
    inst = Instance(m, config)
    out = []
    for module, name, fn in CHECKS:
        label = f"[{module}] {name}"
        try:
            detail = fn(inst)
        except Skip as why:
            out.append(CheckResult(label, "skip", str(why)))
            continue
        except CapExceeded:
            raise
        except (ConsistencyError, ConvergenceError, MatroidError) as exc:
            detail = f"{type(exc).__name__}: {exc}"
        out.append(CheckResult(label, "pass" if detail is None else "fail", detail or ""))
    return out
