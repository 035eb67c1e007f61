"""The posets Gamma(P, R), Gamma(P, q) and Gamma'(P, R) whose order ideals
are in bijection with (weakly) increasing labelings of P."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import InvalidLabeling, LambdaChainViolation, NotAnIdeal, NotRankPreserving
from .labelings import (
    IncreasingLabeling,
    RestrictionFunction,
    check_consistent,
    induced_restriction,
    is_valid_labeling,
)
from .poset import Poset, cartesian_product, chain, rank_function


@dataclass(frozen=True, eq=False)
class GammaPoset:
    poset: Poset
    base: Poset
    restriction: RestrictionFunction
    strict: bool = True

    @property
    def elements(self) -> tuple:
        return self.poset.elements

    def __len__(self) -> int:
        return self.poset.n

    @property
    def ghosts(self) -> dict:
        """The omitted pair (p, max R(p)) for every base element."""
        R = self.restriction
        return {p: (p, R.max(p)) for p in self.base.elements}

    @cached_property
    def levels(self) -> dict:
        """The toggle order H_Gamma: (p, k) -> k."""
        return {e: e[1] for e in self.poset.elements}

    @cached_property
    def _base_pos(self) -> np.ndarray:
        return np.array([self.base.index(p) for p, _ in self.poset.elements], dtype=np.int64)

    @cached_property
    def _labels(self) -> np.ndarray:
        return np.array([k for _, k in self.poset.elements], dtype=np.int64)

    # -- the bijection --------------------------------------------------------

    def ideal_to_labeling(self, ideal) -> IncreasingLabeling:
        ideal = frozenset(ideal)
        mask = self.poset.mask_of(ideal)
        if not self.poset.is_ideal_mask(mask):
            raise NotAnIdeal(f"{sorted(ideal, key=repr)!r} is not an order ideal of Gamma")
        values = {p: self.restriction.max(p) for p in self.base.elements}
        for p, k in ideal:
            values[p] = min(values[p], k)
        return IncreasingLabeling(
            self.base, self.restriction, tuple(values[p] for p in self.base.elements), self.strict
        )

    def labeling_to_ideal(self, f) -> frozenset:
        values = f.values if isinstance(f, IncreasingLabeling) else tuple(f[p] for p in self.base.elements)
        if not is_valid_labeling(self.base, self.restriction, values, self.strict):
            raise InvalidLabeling(f"{f!r} is not a valid labeling for this Gamma")
        return frozenset((p, k) for p, k in self.poset.elements if k >= values[self.base.index(p)])

    def labelings_to_masks(self, rows: np.ndarray) -> np.ndarray:
        """Vectorised labeling -> ideal bitmask for an ``(m, |P|)`` array."""
        rows = np.asarray(rows, dtype=np.int64)
        out = np.zeros(rows.shape[0], dtype=np.int64)
        for j in range(self.poset.n):
            hit = rows[:, self._base_pos[j]] <= self._labels[j]
            out |= hit.astype(np.int64) << np.int64(j)
        return out

    def masks_to_labelings(self, masks: np.ndarray) -> np.ndarray:
        masks = np.asarray(masks, dtype=np.int64)
        R = self.restriction
        rows = np.tile(
            np.array([R.max(p) for p in self.base.elements], dtype=np.int64), (masks.size, 1)
        )
        # elements are sorted by ascending k within each base element; walk them
        # in reverse so the smallest k present wins.
        for j in reversed(range(self.poset.n)):
            hit = ((masks >> np.int64(j)) & 1).astype(bool)
            col = self._base_pos[j]
            rows[hit, col] = self._labels[j]
        return rows


def _pairs(P: Poset, R: RestrictionFunction) -> list:
    return [(p, k) for p in P.elements for k in R.star(p)]


def _chain_covers(P: Poset, R: RestrictionFunction) -> list:
    covers = []
    for p in P.elements:
        s = R.star(p)
        covers += [((p, hi), (p, lo)) for lo, hi in zip(s, s[1:])]
    return covers


def build_gamma(P: Poset, R: RestrictionFunction) -> GammaPoset:
    check_consistent(P, R, strict=True)
    covers = _chain_covers(P, R)
    for p1, p2 in P.covers:
        top1 = R.max(p1)
        for k2 in R.star(p2):
            k1 = R.below(p1, k2)
            if k1 is None or k1 == top1:
                continue
            if any(R.below(p1, k) == k1 for k in R[p2] if k > k2):
                continue
            covers.append(((p1, k1), (p2, k2)))
    return GammaPoset(Poset(_pairs(P, R), covers), P, R, True)


def build_gamma_interval(P: Poset, R: RestrictionFunction) -> GammaPoset:
    """Gamma(P, R) for interval-valued R via the simplified cover rule:
    same p and k1 = k2 + 1, or p1 <. p2 and k1 + 1 = k2."""
    check_consistent(P, R, strict=True)
    for p in P.elements:
        if not R.is_interval(p):
            raise ValueError(f"R({p!r}) is not an interval")
    covers = _chain_covers(P, R)
    for p1, p2 in P.covers:
        star1 = set(R.star(p1))
        covers += [((p1, k - 1), (p2, k)) for k in R.star(p2) if k - 1 in star1]
    return GammaPoset(Poset(_pairs(P, R), covers), P, R, True)


def build_gamma_q(P: Poset, q: int) -> GammaPoset:
    return build_gamma_interval(P, induced_restriction(P, q))


def build_gamma_weak(P: Poset, R: RestrictionFunction) -> GammaPoset:
    check_consistent(P, R, strict=False)
    covers = _chain_covers(P, R)
    for p1, p2 in P.covers:
        top1 = R.max(p1)
        for k2 in R.star(p2):
            k1 = R.at_most(p1, k2)
            if k1 is None or k1 == top1:
                continue
            if any(R.at_most(p1, k) == k1 for k in R[p2] if k > k2):
                continue
            covers.append(((p1, k1), (p2, k2)))
    return GammaPoset(Poset(_pairs(P, R), covers), P, R, False)


def ideal_to_labeling(G: GammaPoset, ideal) -> IncreasingLabeling:
    return G.ideal_to_labeling(ideal)


def labeling_to_ideal(G: GammaPoset, f) -> frozenset:
    return G.labeling_to_ideal(f)


# ---------------------------------------------------------------------------
# structural isomorphisms


def chain_lengths_through(P: Poset) -> list:
    return [d + 1 + h for d, h in zip(P.depths, P.heights)]


def lambda_chain_product_iso(P: Poset, q: int):
    """Explicit isomorphism Gamma(P, q) -> P x [q - rk(P)] for posets in which
    every element lies on a chain of the common maximum length rk(P).

    Returns ``(gamma, product, mapping)``; the mapping is checked to carry
    covers exactly onto covers.
    """
    lengths = chain_lengths_through(P)
    if len(set(lengths)) > 1:
        bad = [p for p, L in zip(P.elements, lengths) if L != max(lengths)]
        raise LambdaChainViolation(f"elements {bad!r} do not lie on a longest chain")
    rank_total = lengths[0] if lengths else 0
    G = build_gamma_q(P, q)
    Q = cartesian_product(P, chain(q - rank_total))
    mapping = {
        (p, k): (p, q - k + P.depths[P.index(p)] - (rank_total - 1)) for p, k in G.elements
    }
    if not _preserves_covers(G.poset, Q, mapping):
        raise AssertionError("constructed map is not an isomorphism")
    return G, Q, mapping


def ranked_embedding(P: Poset, q: int):
    """Gamma(P, q) as the induced subposet of P x Z on
    {(p, j) : nu(p) + rk(p) + 1 <= j <= q - delta(p) + rk(p) - 1} via
    (p, k) -> (p, q - k + rk(p)).

    Returns ``(gamma, subposet, mapping)``.
    """
    rk = rank_function(P)
    if rk is None:
        raise NotRankPreserving("poset is not ranked")
    G = build_gamma_q(P, q)
    lows, highs = {}, {}
    for i, p in enumerate(P.elements):
        lows[p] = P.heights[i] + rk[p] + 1
        highs[p] = q - P.depths[i] + rk[p] - 1
    lo = min(lows.values(), default=0)
    hi = max(highs.values(), default=0)
    if hi < lo:
        hi = lo
    ambient = cartesian_product(P, chain(hi - lo + 1, start=lo))
    keep = [(p, j) for p in P.elements for j in range(lows[p], highs[p] + 1)]
    S = ambient.subposet(keep)
    mapping = {(p, k): (p, q - k + rk[p]) for p, k in G.elements}
    return G, S, mapping


def rank_shift(P: Poset, R1: RestrictionFunction):
    """For ranked P, return ``(R2, mapping)`` with R2 = R1 - rk and the pair map
    (p, k) -> (p, k - rk(p)) from Gamma(P, R1) onto Gamma'(P, R2)."""
    rk = rank_function(P)
    if rk is None:
        raise NotRankPreserving("poset is not ranked")
    R2 = R1.shifted({p: -rk[p] for p in P.elements})
    mapping = {(p, k): (p, k - rk[p]) for p in P.elements for k in R1.star(p)}
    return R2, mapping


def _preserves_covers(P: Poset, Q: Poset, mapping: dict) -> bool:
    from .poset import is_isomorphism

    return is_isomorphism(P, Q, mapping)
