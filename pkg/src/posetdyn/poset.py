"""Finite posets given by their cover relations.

Elements are opaque hashable identifiers (strings in files, ints for
generated chains, tuples for products and Gamma posets). Internally
everything is indexed by position in ``Poset.elements``.
"""

from __future__ import annotations

import warnings
from functools import cached_property
from typing import Hashable, Iterable, Iterator, Sequence

import numpy as np

from . import kernels
from .errors import (
    BudgetExceeded,
    CycleError,
    DuplicateElement,
    RedundantCoverWarning,
    UnknownElement,
)
from .settings import default_budget

Element = Hashable


class Poset:
    """An immutable finite poset.

    Redundant input covers (pairs implied by transitivity of the others) are
    dropped with a :class:`RedundantCoverWarning`.
    """

    __slots__ = (
        "elements",
        "_index",
        "lower_idx",
        "upper_idx",
        "_below",
        "_above",
        "topo",
        "__dict__",
    )

    def __init__(self, elements: Iterable[Element], covers: Iterable[Sequence[Element]] = ()):
        elements = tuple(elements)
        index = {}
        for i, e in enumerate(elements):
            if e in index:
                raise DuplicateElement(f"duplicate element {e!r}")
            index[e] = i
        n = len(elements)

        edges = set()
        for pair in covers:
            lo, hi = pair
            for x in (lo, hi):
                if x not in index:
                    raise UnknownElement(f"cover {tuple(pair)!r} references unknown element {x!r}")
            if lo == hi:
                raise CycleError(f"element {lo!r} covers itself")
            edges.add((index[lo], index[hi]))

        preds = [[] for _ in range(n)]
        succs = [[] for _ in range(n)]
        for a, b in edges:
            preds[b].append(a)
            succs[a].append(b)

        topo = _kahn(n, preds, succs)
        if topo is None:
            raise CycleError("cover relations contain a cycle")

        below = [0] * n
        for b in topo:
            acc = 0
            for a in preds[b]:
                acc |= below[a] | (1 << a)
            below[b] = acc

        dropped = []
        for b in range(n):
            keep = []
            for a in preds[b]:
                if any(c != a and (below[c] >> a) & 1 for c in preds[b]):
                    dropped.append((elements[a], elements[b]))
                else:
                    keep.append(a)
            preds[b] = keep
        if dropped:
            warnings.warn(
                f"dropping {len(dropped)} transitively implied cover(s): {sorted(map(repr, dropped))}",
                RedundantCoverWarning,
                stacklevel=2,
            )
            succs = [[] for _ in range(n)]
            for b in range(n):
                for a in preds[b]:
                    succs[a].append(b)

        above = [0] * n
        for a in reversed(topo):
            acc = 0
            for b in succs[a]:
                acc |= above[b] | (1 << b)
            above[a] = acc

        self.elements = elements
        self._index = index
        self.lower_idx = tuple(tuple(sorted(p)) for p in preds)
        self.upper_idx = tuple(tuple(sorted(s)) for s in succs)
        self._below = tuple(below)
        self._above = tuple(above)
        self.topo = tuple(topo)

    # -- basic access -------------------------------------------------------

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self) -> Iterator[Element]:
        return iter(self.elements)

    def __contains__(self, p) -> bool:
        try:
            return p in self._index
        except TypeError:
            return False

    def __repr__(self) -> str:
        return f"Poset({len(self)} elements, {len(self.cover_idx)} covers)"

    def __eq__(self, other) -> bool:
        if not isinstance(other, Poset):
            return NotImplemented
        return self.elements == other.elements and self.cover_idx == other.cover_idx

    def __hash__(self) -> int:
        return hash((self.elements, self.cover_idx))

    @property
    def n(self) -> int:
        return len(self.elements)

    def index(self, p: Element) -> int:
        try:
            return self._index[p]
        except (KeyError, TypeError):
            raise UnknownElement(f"{p!r} is not an element of the poset") from None

    @cached_property
    def cover_idx(self) -> tuple:
        return tuple((a, b) for b in range(self.n) for a in self.lower_idx[b])

    @property
    def covers(self) -> tuple:
        """Cover pairs ``(lower, upper)`` ordered by the position of the upper element."""
        e = self.elements
        return tuple((e[a], e[b]) for a, b in self.cover_idx)

    def lower_covers(self, p) -> tuple:
        return tuple(self.elements[a] for a in self.lower_idx[self.index(p)])

    def upper_covers(self, p) -> tuple:
        return tuple(self.elements[b] for b in self.upper_idx[self.index(p)])

    def less(self, p, q) -> bool:
        return bool((self._below[self.index(q)] >> self.index(p)) & 1)

    def leq(self, p, q) -> bool:
        return p == q and p in self or self.less(p, q)

    def covered_by(self, p, q) -> bool:
        return self.index(p) in self.lower_idx[self.index(q)]

    def below_mask(self, i: int) -> int:
        return self._below[i]

    def above_mask(self, i: int) -> int:
        return self._above[i]

    def minimal_elements(self) -> tuple:
        return tuple(self.elements[i] for i in range(self.n) if not self.lower_idx[i])

    def maximal_elements(self) -> tuple:
        return tuple(self.elements[i] for i in range(self.n) if not self.upper_idx[i])

    def order_matrix(self) -> np.ndarray:
        """Boolean matrix ``M[i, j]`` true iff ``elements[i] <= elements[j]``."""
        n = self.n
        m = np.zeros((n, n), dtype=bool)
        for j in range(n):
            m[j, j] = True
            b = self._below[j]
            for i in range(n):
                if (b >> i) & 1:
                    m[i, j] = True
        return m

    def linear_extension(self) -> tuple:
        return tuple(self.elements[i] for i in self.topo)

    # -- chain lengths ------------------------------------------------------

    @cached_property
    def depths(self) -> tuple:
        """Per element: number of elements below it on a longest chain ending there."""
        d = [0] * self.n
        for b in self.topo:
            d[b] = max((d[a] + 1 for a in self.lower_idx[b]), default=0)
        return tuple(d)

    @cached_property
    def heights(self) -> tuple:
        """Per element: number of elements above it on a longest chain starting there."""
        h = [0] * self.n
        for a in reversed(self.topo):
            h[a] = max((h[b] + 1 for b in self.upper_idx[a]), default=0)
        return tuple(h)

    @property
    def longest_chain(self) -> int:
        if not self.n:
            return 0
        return max(d + h + 1 for d, h in zip(self.depths, self.heights))

    # -- bitmask views for the kernels --------------------------------------

    def _require_mask_size(self):
        if self.n > kernels.MAX_MASK_ELEMENTS:
            raise BudgetExceeded(
                f"bitmask kernels support at most {kernels.MAX_MASK_ELEMENTS} elements, got {self.n}"
            )

    @cached_property
    def lower_masks(self) -> np.ndarray:
        self._require_mask_size()
        return np.array([sum(1 << a for a in lows) for lows in self.lower_idx], dtype=np.int64).reshape(-1)

    @cached_property
    def upper_masks(self) -> np.ndarray:
        self._require_mask_size()
        return np.array([sum(1 << b for b in ups) for ups in self.upper_idx], dtype=np.int64).reshape(-1)

    @cached_property
    def down_masks(self) -> np.ndarray:
        """Principal order ideal of each element (inclusive), as masks."""
        self._require_mask_size()
        return np.array([b | (1 << i) for i, b in enumerate(self._below)], dtype=np.int64).reshape(-1)

    @property
    def full_mask(self) -> int:
        return (1 << self.n) - 1

    def mask_of(self, subset: Iterable[Element]) -> int:
        m = 0
        for p in subset:
            m |= 1 << self.index(p)
        return m

    def members(self, mask: int) -> frozenset:
        mask = int(mask)
        return frozenset(self.elements[i] for i in range(self.n) if (mask >> i) & 1)

    def is_ideal_mask(self, mask: int) -> bool:
        mask = int(mask)
        for i in range(self.n):
            if (mask >> i) & 1 and self._below[i] & ~mask:
                return False
        return True

    def dual(self) -> "Poset":
        return Poset(self.elements, [(b, a) for a, b in self.covers])

    def subposet(self, keep: Iterable[Element]) -> "Poset":
        """Induced subposet (covers recomputed from the induced order)."""
        keep_idx = sorted(self.index(p) for p in set(keep))
        kmask = sum(1 << i for i in keep_idx)
        covers = []
        for b in keep_idx:
            lows = self._below[b] & kmask
            for a in keep_idx:
                if not (lows >> a) & 1:
                    continue
                if any((lows >> c) & 1 and (self._below[c] >> a) & 1 for c in keep_idx if c != a):
                    continue
                covers.append((self.elements[a], self.elements[b]))
        return Poset([self.elements[i] for i in keep_idx], covers)


def _kahn(n, preds, succs):
    import heapq

    indeg = [len(p) for p in preds]
    heap = [i for i in range(n) if indeg[i] == 0]
    heapq.heapify(heap)
    order = []
    while heap:
        a = heapq.heappop(heap)
        order.append(a)
        for b in succs[a]:
            indeg[b] -= 1
            if indeg[b] == 0:
                heapq.heappush(heap, b)
    return order if len(order) == n else None


# ---------------------------------------------------------------------------
# constructors


def build_poset(elements: Iterable[Element], covers: Iterable[Sequence[Element]] = ()) -> Poset:
    return Poset(elements, covers)


def chain(n: int, start: int = 1) -> Poset:
    els = list(range(start, start + n))
    return Poset(els, list(zip(els, els[1:])))


def antichain(n: int, start: int = 1) -> Poset:
    return Poset(range(start, start + n))


def cartesian_product(P1: Poset, P2: Poset) -> Poset:
    """Product order: ``(x1,y1) <. (x2,y2)`` iff one coordinate is equal and the
    other is a cover."""
    els = [(x, y) for x in P1.elements for y in P2.elements]
    covers = [((x, y1), (x, y2)) for x in P1.elements for y1, y2 in P2.covers]
    covers += [((x1, y), (x2, y)) for x1, x2 in P1.covers for y in P2.elements]
    return Poset(els, covers)


def product_of_chains(*sizes: int) -> Poset:
    """``[a] x [b] x ...`` with flat tuple elements ``(i, j, ...)``, 1-based."""
    if not sizes:
        return Poset([()])
    import itertools

    els = list(itertools.product(*(range(1, s + 1) for s in sizes)))
    covers = []
    for e in els:
        for axis, s in enumerate(sizes):
            if e[axis] < s:
                covers.append((e, e[:axis] + (e[axis] + 1,) + e[axis + 1 :]))
    return Poset(els, covers)


# ---------------------------------------------------------------------------
# order ideals


def ideal_masks(P: Poset, budget: int | None = None) -> np.ndarray:
    """All order ideals as int64 masks in increasing numeric order."""
    budget = default_budget() if budget is None else budget
    if P.n > kernels.MAX_MASK_ELEMENTS:
        raise BudgetExceeded(f"poset with {P.n} elements is too large for ideal enumeration")
    if P.n == 0:
        return np.zeros(1, dtype=np.int64)
    masks, count = kernels.ideals(P.lower_masks, np.array(P.topo, dtype=np.int64), budget)
    if count > budget:
        raise BudgetExceeded(f"more than {budget} order ideals")
    return masks


def lex_keys(masks: np.ndarray, n: int) -> np.ndarray:
    """Sort keys realising lexicographic order of membership bitstrings
    (first element most significant)."""
    masks = np.asarray(masks, dtype=np.int64)
    key = np.zeros_like(masks)
    for i in range(n):
        key |= ((masks >> np.int64(i)) & 1) << np.int64(n - 1 - i)
    return key


def enumerate_order_ideals(P: Poset, budget: int | None = None) -> list:
    """Every order ideal once, as frozensets, in lexicographic order of their
    membership bitstrings under ``P.elements``."""
    masks = ideal_masks(P, budget)
    order = np.argsort(lex_keys(masks, P.n), kind="stable")
    return [P.members(m) for m in masks[order]]


def is_order_ideal(P: Poset, subset: Iterable[Element]) -> bool:
    return P.is_ideal_mask(P.mask_of(subset))


def delta(P: Poset, p: Element) -> int:
    return P.depths[P.index(p)]


def nu(P: Poset, p: Element) -> int:
    return P.heights[P.index(p)]


def linear_extensions(P: Poset) -> Iterator[tuple]:
    """Yield each linear extension as a tuple of labels ``1..n`` indexed by
    element position."""
    n = P.n
    labels = [0] * n
    indeg = [len(l) for l in P.lower_idx]

    def rec(step):
        if step > n:
            yield tuple(labels)
            return
        for i in range(n):
            if indeg[i] == 0 and labels[i] == 0:
                labels[i] = step
                for b in P.upper_idx[i]:
                    indeg[b] -= 1
                yield from rec(step + 1)
                for b in P.upper_idx[i]:
                    indeg[b] += 1
                labels[i] = 0

    yield from rec(1)


def rank_function(P: Poset) -> dict | None:
    """A rank function normalised to minimum 0 on each connected component, or
    ``None`` when the poset is not ranked."""
    n = P.n
    rk = [None] * n
    for s in range(n):
        if rk[s] is not None:
            continue
        rk[s] = 0
        comp = [s]
        stack = [s]
        while stack:
            a = stack.pop()
            for b in P.upper_idx[a]:
                if rk[b] is None:
                    rk[b] = rk[a] + 1
                    comp.append(b)
                    stack.append(b)
                elif rk[b] != rk[a] + 1:
                    return None
            for b in P.lower_idx[a]:
                if rk[b] is None:
                    rk[b] = rk[a] - 1
                    comp.append(b)
                    stack.append(b)
                elif rk[b] != rk[a] - 1:
                    return None
        low = min(rk[i] for i in comp)
        for i in comp:
            rk[i] -= low
    return {P.elements[i]: rk[i] for i in range(n)}


# ---------------------------------------------------------------------------
# isomorphism


def is_isomorphism(P: Poset, Q: Poset, mapping: dict) -> bool:
    """True iff ``mapping`` is a bijection P -> Q carrying covers exactly onto covers."""
    if P.n != Q.n or len(mapping) != P.n:
        return False
    if set(mapping) != set(P.elements) or set(mapping.values()) != set(Q.elements):
        return False
    image = {(mapping[a], mapping[b]) for a, b in P.covers}
    return image == set(Q.covers)


def _signature(P: Poset, i: int) -> tuple:
    return (len(P.lower_idx[i]), len(P.upper_idx[i]), P.depths[i], P.heights[i],
            bin(P.below_mask(i)).count("1"), bin(P.above_mask(i)).count("1"))


def find_isomorphism(P: Poset, Q: Poset) -> dict | None:
    """Backtracking search for an order isomorphism, pruned by per-element
    invariants (cover degrees, chain depths, principal ideal/filter sizes)."""
    if P.n != Q.n or len(P.cover_idx) != len(Q.cover_idx):
        return None
    sp = [_signature(P, i) for i in range(P.n)]
    sq = [_signature(Q, i) for i in range(Q.n)]
    if sorted(sp) != sorted(sq):
        return None
    by_sig = {}
    for j, s in enumerate(sq):
        by_sig.setdefault(s, []).append(j)

    order = list(P.topo)
    assign = [-1] * P.n
    used = [False] * Q.n

    def compatible(i, j):
        for a in P.lower_idx[i]:
            if assign[a] >= 0 and assign[a] not in Q.lower_idx[j]:
                return False
        for b in P.upper_idx[i]:
            if assign[b] >= 0 and assign[b] not in Q.upper_idx[j]:
                return False
        return True

    def rec(k):
        if k == len(order):
            return True
        i = order[k]
        for j in by_sig[sp[i]]:
            if used[j] or not compatible(i, j):
                continue
            assign[i] = j
            used[j] = True
            if rec(k + 1):
                return True
            assign[i] = -1
            used[j] = False
        return False

    if not rec(0):
        return None
    mapping = {P.elements[i]: Q.elements[assign[i]] for i in range(P.n)}
    return mapping if is_isomorphism(P, Q, mapping) else None
