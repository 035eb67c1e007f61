"""Restriction functions and the distributive lattice of increasing labelings."""

from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import kernels
from .errors import (
    BudgetExceeded,
    DegenerateError,
    InconsistentRestriction,
    InvalidLabeling,
    MismatchedContext,
    MissingRestriction,
    PosetError,
    WeaklyInconsistentRestriction,
)
from .poset import Poset
from .settings import default_budget


class RestrictionFunction(Mapping):
    """Maps each poset element to a sorted, nonempty tuple of allowed labels."""

    def __init__(self, sets):
        items = sets.items() if isinstance(sets, Mapping) else sets
        data = {}
        for p, labels in items:
            labels = tuple(sorted({int(v) for v in labels}))
            if not labels:
                raise PosetError(f"restriction for {p!r} is empty")
            data[p] = labels
        self._sets = data

    def __getitem__(self, p) -> tuple:
        return self._sets[p]

    def __iter__(self):
        return iter(self._sets)

    def __len__(self) -> int:
        return len(self._sets)

    def __repr__(self) -> str:
        return f"RestrictionFunction({self._sets!r})"

    def __eq__(self, other):
        if isinstance(other, RestrictionFunction):
            return self._sets == other._sets
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self._sets.items()))

    def require(self, P: Poset) -> None:
        missing = [p for p in P.elements if p not in self._sets]
        if missing:
            raise MissingRestriction(f"no restriction given for {missing!r}")

    def min(self, p) -> int:
        return self._sets[p][0]

    def max(self, p) -> int:
        return self._sets[p][-1]

    def star(self, p) -> tuple:
        """R(p) with its largest label removed."""
        return self._sets[p][:-1]

    def above(self, p, k):
        """Smallest label of R(p) greater than k, or None."""
        for v in self._sets[p]:
            if v > k:
                return v
        return None

    def below(self, p, k):
        """Largest label of R(p) less than k, or None."""
        best = None
        for v in self._sets[p]:
            if v < k:
                best = v
        return best

    def at_most(self, p, k):
        best = None
        for v in self._sets[p]:
            if v <= k:
                best = v
        return best

    def at_least(self, p, k):
        for v in self._sets[p]:
            if v >= k:
                return v
        return None

    def is_interval(self, p) -> bool:
        s = self._sets[p]
        return s[-1] - s[0] + 1 == len(s)

    def shifted(self, offsets: Mapping) -> "RestrictionFunction":
        return RestrictionFunction({p: [v + offsets[p] for v in s] for p, s in self._sets.items()})

    def padded(self, P: Poset):
        """``(values, lengths)`` arrays indexed by element position."""
        self.require(P)
        width = max((len(self._sets[p]) for p in P.elements), default=1)
        vals = np.zeros((P.n, width), dtype=np.int64)
        lens = np.zeros(P.n, dtype=np.int64)
        for i, p in enumerate(P.elements):
            s = self._sets[p]
            vals[i, : len(s)] = s
            lens[i] = len(s)
        return vals, lens

    def to_json(self, P: Poset | None = None) -> dict:
        keys = P.elements if P is not None else list(self._sets)
        return {_json_key(p): list(self._sets[p]) for p in keys}


def _json_key(p):
    return p if isinstance(p, str) else str(p)


def interval_restriction(bounds: Mapping) -> RestrictionFunction:
    return RestrictionFunction({p: range(lo, hi + 1) for p, (lo, hi) in bounds.items()})


@dataclass(frozen=True, eq=True)
class IncreasingLabeling:
    """A labeling stored densely by element position.

    ``strict`` selects strictly increasing (Inc_R) versus weakly increasing
    (Inc'_R) labelings.
    """

    poset: Poset
    restriction: RestrictionFunction
    values: tuple
    strict: bool = True

    @classmethod
    def from_mapping(cls, P, R, mapping, strict=True, check=True):
        try:
            values = tuple(int(mapping[p]) for p in P.elements)
        except KeyError as exc:
            raise InvalidLabeling(f"labeling has no value for {exc.args[0]!r}") from None
        f = cls(P, R, values, strict)
        if check:
            f.validate()
        return f

    def __getitem__(self, p) -> int:
        return self.values[self.poset.index(p)]

    def as_dict(self) -> dict:
        return dict(zip(self.poset.elements, self.values))

    def __repr__(self):
        body = ", ".join(f"{p}:{v}" for p, v in zip(self.poset.elements, self.values))
        return f"IncreasingLabeling({body}{'' if self.strict else ', weak'})"

    def is_valid(self) -> bool:
        return is_valid_labeling(self.poset, self.restriction, self.values, self.strict)

    def validate(self) -> None:
        if not self.is_valid():
            raise InvalidLabeling(f"{self!r} is not a valid labeling for this (P, R)")

    def _same_context(self, other):
        if (
            not isinstance(other, IncreasingLabeling)
            or self.poset != other.poset
            or self.restriction != other.restriction
            or self.strict != other.strict
        ):
            raise MismatchedContext("labelings live on different (P, R, strictness)")

    def __le__(self, other):
        self._same_context(other)
        return all(a <= b for a, b in zip(self.values, other.values))

    def __lt__(self, other):
        return self <= other and self.values != other.values

    def __ge__(self, other):
        return other <= self

    def __gt__(self, other):
        return other < self

    def with_values(self, values) -> "IncreasingLabeling":
        return IncreasingLabeling(self.poset, self.restriction, tuple(int(v) for v in values), self.strict)

    def to_json(self) -> dict:
        return {_json_key(p): v for p, v in zip(self.poset.elements, self.values)}


def is_valid_labeling(P: Poset, R: RestrictionFunction, values, strict=True) -> bool:
    if len(values) != P.n:
        return False
    for i, p in enumerate(P.elements):
        if values[i] not in R[p]:
            return False
    for a, b in P.cover_idx:
        if strict and not values[a] < values[b]:
            return False
        if not strict and not values[a] <= values[b]:
            return False
    return True


# ---------------------------------------------------------------------------
# consistency


def is_consistent(P: Poset, R: RestrictionFunction) -> bool:
    R.require(P)
    return all(R.min(x) < R.min(y) and R.max(x) < R.max(y) for x, y in P.covers)


def is_weakly_consistent(P: Poset, R: RestrictionFunction) -> bool:
    R.require(P)
    return all(R.min(x) <= R.min(y) and R.max(x) <= R.max(y) for x, y in P.covers)


def check_consistent(P, R, strict=True):
    if strict and not is_consistent(P, R):
        raise InconsistentRestriction("restriction function is not consistent")
    if not strict and not is_weakly_consistent(P, R):
        raise WeaklyInconsistentRestriction("restriction function is not weakly consistent")


def induced_restriction(P: Poset, q: int) -> RestrictionFunction:
    """R(p) = [1 + delta(p), q - nu(p)], the restriction induced by a global bound q."""
    if P.n and P.longest_chain > q:
        raise DegenerateError(f"poset has a chain of length {P.longest_chain} > q = {q}")
    return RestrictionFunction(
        {p: range(1 + P.depths[i], q - P.heights[i] + 1) for i, p in enumerate(P.elements)}
    )


# ---------------------------------------------------------------------------
# enumeration


def labeling_array(P: Poset, R: RestrictionFunction, strict=True, budget=None) -> np.ndarray:
    """All labelings as an ``(m, n)`` int64 array, columns by element position,
    rows in lexicographic order of the values read along ``P.topo``."""
    budget = default_budget() if budget is None else budget
    vals, lens = R.padded(P)
    lo_ptr, lo_idx = csr(P.lower_idx)
    rows, count = kernels.labelings(
        np.array(P.topo, dtype=np.int64), lo_ptr, lo_idx, vals, lens, bool(strict), budget
    )
    if count > budget:
        raise BudgetExceeded(f"more than {budget} labelings")
    return rows


def csr(adjacency) -> tuple:
    ptr = np.zeros(len(adjacency) + 1, dtype=np.int64)
    for i, nbrs in enumerate(adjacency):
        ptr[i + 1] = ptr[i] + len(nbrs)
    idx = np.array([j for nbrs in adjacency for j in nbrs], dtype=np.int64).reshape(-1)
    return ptr, idx


def enumerate_labelings(P: Poset, R: RestrictionFunction, strict=True, budget=None) -> list:
    rows = labeling_array(P, R, strict, budget)
    return [IncreasingLabeling(P, R, tuple(int(v) for v in row), strict) for row in rows]


def meet(f: IncreasingLabeling, g: IncreasingLabeling) -> IncreasingLabeling:
    f._same_context(g)
    return f.with_values(min(a, b) for a, b in zip(f.values, g.values))


def join(f: IncreasingLabeling, g: IncreasingLabeling) -> IncreasingLabeling:
    f._same_context(g)
    return f.with_values(max(a, b) for a, b in zip(f.values, g.values))


def top_labeling(P, R, strict=True) -> IncreasingLabeling:
    return IncreasingLabeling(P, R, tuple(R.max(p) for p in P.elements), strict)


def bottom_labeling(P, R, strict=True) -> IncreasingLabeling:
    return IncreasingLabeling(P, R, tuple(R.min(p) for p in P.elements), strict)


class MeetIrreducibles(NamedTuple):
    pairs: dict
    top: IncreasingLabeling


def meet_irreducible(P: Poset, R: RestrictionFunction, p, k, strict=True) -> IncreasingLabeling:
    """The labeling with f(p) = k whose only raisable element is p.

    Everything outside the principal ideal of p takes its maximum label; inside
    it, elements are filled top-down with the largest label compatible with
    their upper covers in the ideal.
    """
    i = P.index(p)
    values = [R.max(x) for x in P.elements]
    values[i] = k
    inside = P.below_mask(i)
    for a in reversed(P.topo):
        if not (inside >> a) & 1:
            continue
        x = P.elements[a]
        bound = min(values[b] for b in P.upper_idx[a] if b == i or (inside >> b) & 1)
        v = R.below(x, bound) if strict else R.at_most(x, bound)
        if v is None:
            raise InconsistentRestriction(f"no label for {x!r} below {bound}")
        values[a] = v
    return IncreasingLabeling(P, R, tuple(values), strict)


def meet_irreducibles(P: Poset, R: RestrictionFunction, strict=True) -> MeetIrreducibles:
    check_consistent(P, R, strict)
    pairs = {}
    for p in P.elements:
        for k in R.star(p):
            pairs[(p, k)] = meet_irreducible(P, R, p, k, strict)
    return MeetIrreducibles(pairs, top_labeling(P, R, strict))
