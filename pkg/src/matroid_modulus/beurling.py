"""Beurling sets and the serial splitting of MEO along them."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .duality import verify_meomod
from .errors import ConsistencyError, MatroidError
from .matroid import Matroid
from .modulus import ModulusResult, mod2
from .principal import exact_eta


@dataclass(frozen=True)
class BeurlingCertificate:
    elements: frozenset
    lhs: Fraction          # eta*(X)
    rhs: int               # r(E) - r(E - X)
    is_beurling: bool
    fair_bases_ok: bool | None = None   # checked only when a fair support is supplied


def is_beurling(m: Matroid, X, eta_star: dict | None = None, fair_support=None) -> BeurlingCertificate:
    if eta_star is None:
        eta_star = exact_eta(m)
    xm = m.mask(X)
    labels = m.labels(xm)
    lhs = sum((eta_star[e] for e in labels), Fraction(0))
    comp = m.full ^ xm
    rhs = m.full_rank - m.rank_mask(comp)
    tight = lhs == rhs
    fair_ok = None
    if fair_support is not None:
        # equality holds iff every fair base meets E - X in a basis of E - X
        spans = all((m.mask(B) & comp).bit_count() == m.rank_mask(comp) for B in fair_support)
        fair_ok = spans == tight
    return BeurlingCertificate(labels, lhs, rhs, tight, fair_ok)


@dataclass
class SerialSplit:
    meo_left: Fraction     # MEO of M \ X (ground E - X)
    meo_right: Fraction    # MEO of M / (E - X) (ground X)
    meo_total: Fraction
    pmf: dict              # product pmf on bases of M
    left: ModulusResult
    right: ModulusResult
    verified: bool


def serial_split(m: Matroid, X, total: ModulusResult | None = None, brute_force: bool = True) -> SerialSplit:
    """Split MEO(M) = MEO(M \\ X) + MEO(M / (E - X)) along a Beurling set X."""
    if total is None:
        total = mod2(m, brute_force=brute_force)
    cert = is_beurling(m, X, total.eta_star)
    if not cert.is_beurling:
        raise MatroidError(f"{m.ordered(X)} is not a Beurling set")
    xm = m.mask(X)
    if xm == 0 or xm == m.full:
        raise MatroidError("Beurling set must be a nonempty proper subset")
    comp = m.labels(m.full ^ xm)
    left = mod2(m.delete(cert.elements), brute_force=brute_force)
    right = mod2(m.contract(comp), brute_force=brute_force)
    if left.meo + right.meo != total.meo:
        raise ConsistencyError("serial rule fails: MEO does not split")
    for e in comp:
        if left.eta_star[e] != total.eta_star[e]:
            raise ConsistencyError("restricted usage probabilities disagree on E - X")
    for e in cert.elements:
        if right.eta_star[e] != total.eta_star[e]:
            raise ConsistencyError("restricted usage probabilities disagree on X")

    pmf: dict = {}
    for B1, w1 in left.pmf.items():
        for B2, w2 in right.pmf.items():
            pmf[B1 | B2] = pmf.get(B1 | B2, Fraction(0)) + w1 * w2
    combined = ModulusResult(total.mod_value, total.rho_star, total.eta_star, total.meo, pmf, list(pmf))
    return SerialSplit(left.meo, right.meo, total.meo, pmf, left, right, verify_meomod(m, combined))
