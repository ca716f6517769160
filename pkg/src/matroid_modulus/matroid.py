"""Matroids presented by exact rank oracles.

Subsets are handled internally as integer bitmasks over the ground set, in
construction order; the public methods take and return element labels.
Every backend is immutable once built and caches its rank oracle.
"""
from __future__ import annotations

from contextlib import contextmanager
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Hashable, Iterable, Sequence

from .errors import CapExceeded, MatroidError
from .linalg import matrix_rank


@dataclass
class Caps:
    """Desk-scale limits for exhaustive enumeration."""

    subsets: int = 1 << 20
    bases: int = 10**6
    base_pairs_validation: int = 10**4

    @property
    def max_elements(self) -> int:
        return self.subsets.bit_length() - 1


CAPS = Caps()


@contextmanager
def caps(subsets: int | None = None, bases: int | None = None):
    """Temporarily override the global enumeration caps."""
    old = (CAPS.subsets, CAPS.bases)
    if subsets is not None:
        CAPS.subsets = subsets
    if bases is not None:
        CAPS.bases = bases
    try:
        yield CAPS
    finally:
        CAPS.subsets, CAPS.bases = old


def check_subset_cap(n: int) -> None:
    if (1 << n) > CAPS.subsets:
        raise CapExceeded("subsets", CAPS.subsets, 1 << n)


def bits(mask: int):
    """Yield the indices of the set bits of ``mask`` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class Matroid:
    """Base class: ground set plus a cached rank oracle.

    Subclasses implement ``_rank(mask)``.
    """

    def __init__(self, ground: Iterable[Hashable]):
        ground = tuple(ground)
        if not ground:
            raise MatroidError("empty ground set")
        if len(set(ground)) != len(ground):
            raise MatroidError("duplicate element labels")
        self.ground = ground
        self.index = {e: i for i, e in enumerate(ground)}
        self.full = (1 << len(ground)) - 1
        self._rank_cache: dict[int, int] = {}
        self._bases: tuple[int, ...] | None = None

    # -- label/mask conversion -------------------------------------------
    @property
    def n(self) -> int:
        return len(self.ground)

    def mask(self, X: Iterable[Hashable]) -> int:
        m = 0
        for e in X:
            try:
                m |= 1 << self.index[e]
            except KeyError:
                raise MatroidError(f"element {e!r} not in ground set") from None
        return m

    def labels(self, mask: int) -> frozenset:
        return frozenset(self.ground[i] for i in bits(mask))

    def ordered(self, X: Iterable[Hashable]) -> list:
        """Elements of X listed in ground-set order."""
        return [self.ground[i] for i in bits(self.mask(X))]

    # -- rank oracle -------------------------------------------------------
    def _rank(self, mask: int) -> int:
        raise NotImplementedError

    def rank_mask(self, mask: int) -> int:
        r = self._rank_cache.get(mask)
        if r is None:
            r = self._rank(mask)
            self._rank_cache[mask] = r
        return r

    def rank(self, X: Iterable[Hashable] = ()) -> int:
        return self.rank_mask(self.mask(X))

    @property
    def full_rank(self) -> int:
        return self.rank_mask(self.full)

    # -- derived notions ---------------------------------------------------
    def closure_mask(self, mask: int) -> int:
        r = self.rank_mask(mask)
        cl = mask
        for i in range(self.n):
            bit = 1 << i
            if not mask & bit and self.rank_mask(mask | bit) == r:
                cl |= bit
        return cl

    def closure(self, X: Iterable[Hashable]) -> frozenset:
        return self.labels(self.closure_mask(self.mask(X)))

    def is_complement_closed(self, X: Iterable[Hashable]) -> bool:
        comp = self.full ^ self.mask(X)
        return self.closure_mask(comp) == comp

    def is_independent(self, X: Iterable[Hashable]) -> bool:
        m = self.mask(X)
        return self.rank_mask(m) == m.bit_count()

    def is_base(self, X: Iterable[Hashable]) -> bool:
        m = self.mask(X)
        return m.bit_count() == self.rank_mask(m) == self.full_rank

    def loops(self) -> frozenset:
        return frozenset(e for i, e in enumerate(self.ground) if self.rank_mask(1 << i) == 0)

    def require_loopless(self) -> None:
        """Raise unless the matroid is loopless with positive rank."""
        if self.full_rank < 1:
            raise MatroidError("matroid has rank 0")
        lp = self.loops()
        if lp:
            raise MatroidError(f"matroid has loops: {self.ordered(lp)}")

    def base_masks(self) -> tuple[int, ...]:
        """All bases as bitmasks, lexicographic in element indices."""
        if self._bases is None:
            if self.n > CAPS.max_elements:
                raise CapExceeded("subsets", CAPS.subsets, 1 << self.n)
            self._bases = tuple(self._enumerate_bases())
        return self._bases

    def _enumerate_bases(self):
        r = self.full_rank
        count = 0
        for combo in combinations(range(self.n), r):
            m = 0
            for i in combo:
                m |= 1 << i
            if self.rank_mask(m) == r:
                count += 1
                if count > CAPS.bases:
                    raise CapExceeded("bases", CAPS.bases)
                yield m

    def enumerate_bases(self) -> list[frozenset]:
        return [self.labels(b) for b in self.base_masks()]

    def fundamental_circuit(self, B: Iterable[Hashable], x: Hashable) -> frozenset:
        """The unique circuit inside B + x that contains x."""
        bm = self.mask(B)
        if not self.is_base(self.labels(bm)):
            raise MatroidError(f"{self.ordered(self.labels(bm))} is not a base")
        xm = self.mask([x])
        if bm & xm:
            raise MatroidError(f"{x!r} already lies in the base")
        c = bm | xm
        for i in bits(bm):
            trial = c & ~(1 << i)
            if self.rank_mask(trial) < trial.bit_count():
                c = trial
        return self.labels(c)

    def circuit_masks(self) -> list[int]:
        """Minimal dependent sets, by exhaustive scan."""
        check_subset_cap(self.n)
        out = []
        for m in range(1, self.full + 1):
            if self.rank_mask(m) == m.bit_count():
                continue
            if all(self.rank_mask(m & ~(1 << i)) == m.bit_count() - 1 for i in bits(m)):
                out.append(m)
        return out

    def is_connected(self) -> bool:
        """No separator other than the trivial ones (exhaustive)."""
        check_subset_cap(self.n)
        r = self.full_rank
        # fixing bit 0 inside X visits each {X, E - X} pair once
        for m in range(1, self.full, 2):
            if self.rank_mask(m) + self.rank_mask(self.full ^ m) == r:
                return False
        return True

    # -- minors -------------------------------------------------------------
    def delete(self, X: Iterable[Hashable]) -> "Minor":
        return Minor(self, deleted=X, contracted=())

    def restrict(self, X: Iterable[Hashable]) -> "Minor":
        keep = self.mask(X)
        return Minor(self, deleted=self.labels(self.full ^ keep), contracted=())

    def contract(self, X: Iterable[Hashable]) -> "Minor":
        return Minor(self, deleted=(), contracted=X)

    def dual(self) -> "Matroid":
        if isinstance(self, Dual):
            return self.parent
        return Dual(self)

    def _validate_top_level(self) -> None:
        self.require_loopless()

    def __repr__(self) -> str:
        return f"{type(self).__name__}(n={self.n}, rank={self.full_rank})"


class Uniform(Matroid):
    def __init__(self, k: int, n: int, labels: Sequence[Hashable] | None = None):
        if labels is None:
            labels = [f"e{i + 1}" for i in range(n)]
        if len(labels) != n:
            raise MatroidError("label count does not match n")
        if not 1 <= k <= n:
            raise MatroidError(f"uniform matroid needs 1 <= k <= n, got k={k}, n={n}")
        super().__init__(labels)
        self.k = k
        self._validate_top_level()

    def _rank(self, mask: int) -> int:
        return min(self.k, mask.bit_count())

    def __repr__(self) -> str:
        return f"Uniform({self.k}, {self.n})"


class Graphic(Matroid):
    """Cycle matroid of a multigraph given as ``(u, v, label)`` triples."""

    def __init__(self, edges: Iterable[tuple]):
        edges = [tuple(e) for e in edges]
        for e in edges:
            if len(e) != 3:
                raise MatroidError(f"edge must be (u, v, label), got {e!r}")
        super().__init__(e[2] for e in edges)
        self.edges = tuple((u, v) for u, v, _ in edges)
        self._validate_top_level()

    def _rank(self, mask: int) -> int:
        parent: dict = {}

        def find(a):
            root = a
            while parent.get(root, root) != root:
                root = parent[root]
            while a != root:
                parent[a], a = root, parent.get(a, a)
            return root

        r = 0
        for i in bits(mask):
            u, v = self.edges[i]
            ru, rv = find(u), find(v)
            if ru != rv:
                parent[ru] = rv
                r += 1
        return r


class Linear(Matroid):
    """Column matroid of a rational matrix."""

    def __init__(self, rows: Sequence[Sequence], labels: Sequence[Hashable] | None = None):
        rows = [[Fraction(x) for x in row] for row in rows]
        if not rows or not rows[0]:
            raise MatroidError("empty matrix")
        ncol = len(rows[0])
        if any(len(row) != ncol for row in rows):
            raise MatroidError("ragged matrix")
        if labels is None:
            labels = [f"c{j + 1}" for j in range(ncol)]
        if len(labels) != ncol:
            raise MatroidError("label count does not match column count")
        super().__init__(labels)
        self.columns = tuple(tuple(row[j] for row in rows) for j in range(ncol))
        self._validate_top_level()

    def _rank(self, mask: int) -> int:
        cols = [self.columns[i] for i in bits(mask)]
        if not cols:
            return 0
        return matrix_rank(cols)


class ExplicitBases(Matroid):
    """Matroid given by its list of bases."""

    def __init__(self, bases: Iterable[Iterable[Hashable]], ground: Sequence[Hashable] | None = None):
        bases = [tuple(b) for b in bases]
        if not bases:
            raise MatroidError("no bases given")
        if ground is None:
            seen: dict = {}
            for b in bases:
                for e in b:
                    seen.setdefault(e, None)
            ground = list(seen)
        super().__init__(ground)
        for b in bases:
            if len(set(b)) != len(b):
                raise MatroidError(f"repeated element in base {list(b)}")
        masks = sorted({self.mask(b) for b in bases}, key=lambda m: tuple(bits(m)))
        sizes = {m.bit_count() for m in masks}
        if len(sizes) != 1:
            raise MatroidError("bases have different cardinalities")
        self._base_list = tuple(masks)
        if len(masks) ** 2 <= CAPS.base_pairs_validation:
            self._check_exchange()
        self._validate_top_level()

    def _check_exchange(self) -> None:
        base_set = set(self._base_list)
        for b1 in self._base_list:
            for b2 in self._base_list:
                for x in bits(b1 & ~b2):
                    if not any(((b1 & ~(1 << x)) | (1 << y)) in base_set for y in bits(b2 & ~b1)):
                        raise MatroidError(
                            "base exchange fails for "
                            f"{self.ordered(self.labels(b1))} and {self.ordered(self.labels(b2))} "
                            f"at element {self.ground[x]!r}"
                        )

    def _rank(self, mask: int) -> int:
        return max((b & mask).bit_count() for b in self._base_list)

    def _enumerate_bases(self):
        if len(self._base_list) > CAPS.bases:
            raise CapExceeded("bases", CAPS.bases, len(self._base_list))
        return iter(self._base_list)


class Minor(Matroid):
    """``(parent / contracted) \\ deleted``; ground keeps the parent's order."""

    def __init__(self, parent: Matroid, deleted: Iterable[Hashable] = (), contracted: Iterable[Hashable] = ()):
        dm = parent.mask(deleted)
        cm = parent.mask(contracted)
        if dm & cm:
            raise MatroidError("deleted and contracted sets overlap")
        keep = parent.full & ~(dm | cm)
        if not keep:
            raise MatroidError("minor would have an empty ground set")
        self.parent = parent
        self.deleted = parent.labels(dm)
        self.contracted = parent.labels(cm)
        self._cmask = cm
        self._lift = tuple(1 << i for i in bits(keep))
        self._crank = parent.rank_mask(cm)
        super().__init__(parent.ground[i] for i in bits(keep))

    def lift(self, mask: int) -> int:
        out = 0
        for i in bits(mask):
            out |= self._lift[i]
        return out

    def _rank(self, mask: int) -> int:
        return self.parent.rank_mask(self.lift(mask) | self._cmask) - self._crank

    def __repr__(self) -> str:
        return (f"Minor({self.parent!r}, deleted={self.parent.ordered(self.deleted)}, "
                f"contracted={self.parent.ordered(self.contracted)})")


class Dual(Matroid):
    """Dual matroid via the corank formula. May contain loops."""

    def __init__(self, parent: Matroid):
        self.parent = parent
        super().__init__(parent.ground)

    def _rank(self, mask: int) -> int:
        p = self.parent
        return mask.bit_count() - p.full_rank + p.rank_mask(p.full ^ mask)

    def _enumerate_bases(self):
        # complements of the parent's bases, reordered lexicographically
        comps = [self.full ^ b for b in self.parent.base_masks()]
        return iter(sorted(comps, key=lambda m: tuple(bits(m))))

    def __repr__(self) -> str:
        return f"Dual({self.parent!r})"


def delete(m: Matroid, X: Iterable[Hashable]) -> Minor:
    return m.delete(X)


def restrict(m: Matroid, X: Iterable[Hashable]) -> Minor:
    return m.restrict(X)


def contract(m: Matroid, X: Iterable[Hashable]) -> Minor:
    return m.contract(X)


def dual(m: Matroid) -> Matroid:
    return m.dual()


def connected_by_circuits(m: Matroid) -> bool:
    """Connectivity via 'every two elements share a circuit'."""
    circuits = m.circuit_masks()
    for i in range(m.n):
        for j in range(i + 1, m.n):
            pair = (1 << i) | (1 << j)
            if not any(c & pair == pair for c in circuits):
                return False
    return True
