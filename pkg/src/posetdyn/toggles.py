"""Toggles, rowmotion, toggle orders, toggle-promotion, gyration, explicit
conjugators and orbit structure.

Single ideals are passed around as frozensets of elements. Whole-lattice
computations go through :class:`IdealSpace`, which holds every order ideal as
an int64 bitmask (sorted lexicographically by membership bitstring) and turns
actions into permutation arrays.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Sequence

import numpy as np

from . import kernels
from .errors import (
    NotAnIdeal,
    NotAToggleOrder,
    NotColumnOrder,
    NotRankPreserving,
    RelationViolation,
    UnknownElement,
)
from .poset import Poset, ideal_masks, lex_keys, rank_function

Action = Callable[[np.ndarray], np.ndarray]


# ---------------------------------------------------------------------------
# the lattice of ideals as an indexed state space


class IdealSpace:
    """All order ideals of ``P``, indexed in lexicographic bitstring order."""

    def __init__(self, P: Poset, budget: int | None = None):
        self.poset = P
        numeric = ideal_masks(P, budget)
        order = np.argsort(lex_keys(numeric, P.n), kind="stable")
        self.masks = np.ascontiguousarray(numeric[order])
        self._numeric = numeric
        self._lex_of_numeric = np.empty_like(order)
        self._lex_of_numeric[order] = np.arange(order.size)

    def __len__(self) -> int:
        return int(self.masks.size)

    def index(self, masks) -> np.ndarray:
        masks = np.asarray(masks, dtype=np.int64)
        j = np.searchsorted(self._numeric, masks)
        j = np.minimum(j, self._numeric.size - 1)
        if not np.array_equal(self._numeric[j], masks):
            raise ValueError("action produced a set that is not an order ideal")
        return self._lex_of_numeric[j]

    def permutation(self, action: Action) -> np.ndarray:
        return self.index(action(self.masks))

    def ideal(self, i: int) -> frozenset:
        return self.poset.members(self.masks[i])

    def ideals(self) -> list:
        return [self.poset.members(m) for m in self.masks]


def _mask(P: Poset, I) -> np.ndarray:
    return np.array([P.mask_of(I)], dtype=np.int64)


def _check_ideal(P: Poset, I) -> None:
    for p in I:
        P.index(p)
    if not P.is_ideal_mask(P.mask_of(I)):
        raise NotAnIdeal(f"{set(I)!r} is not an order ideal")


# ---------------------------------------------------------------------------
# vectorised actions on mask arrays


def word_action(P: Poset, letters_in_action_order: Sequence[int]) -> Action:
    """Toggle element positions in the given order (first letter acts first)."""
    letters = np.array(list(letters_in_action_order), dtype=np.int64).reshape(-1)
    lower, upper = P.lower_masks, P.upper_masks
    return lambda m: kernels.apply_toggles(np.ascontiguousarray(m, dtype=np.int64), letters, lower, upper)


def row_action(P: Poset) -> Action:
    lower, down = P.lower_masks, P.down_masks
    full = np.int64(P.full_mask)
    return lambda m: kernels.rowmotion(np.ascontiguousarray(m, dtype=np.int64), lower, down, full)


def compose(*actions: Action) -> Action:
    """Function composition: the last action acts first."""

    def run(m):
        for a in reversed(actions):
            m = a(m)
        return m

    return run


# ---------------------------------------------------------------------------
# single toggles and rowmotion


def toggle(P: Poset, I, p) -> frozenset:
    i = P.index(p)
    _check_ideal(P, I)
    out = kernels.apply_toggles(_mask(P, I), np.array([i], dtype=np.int64), P.lower_masks, P.upper_masks)
    return P.members(out[0])


def rowmotion(P: Poset, I) -> frozenset:
    """Down-closure of the minimal elements of the complement of ``I``."""
    _check_ideal(P, I)
    return P.members(row_action(P)(_mask(P, I))[0])


def rowmotion_via_toggles(P: Poset, I, extension: Sequence | None = None) -> frozenset:
    """Row as toggling top to bottom along a linear extension (given as an
    element sequence from bottom to top; defaults to ``P.topo``)."""
    _check_ideal(P, I)
    order = list(P.topo) if extension is None else [P.index(p) for p in extension]
    return P.members(word_action(P, reversed(order))(_mask(P, I))[0])


# ---------------------------------------------------------------------------
# toggle orders


def _level_array(P: Poset, H: Mapping) -> np.ndarray:
    try:
        return np.array([int(H[p]) for p in P.elements], dtype=np.int64).reshape(-1)
    except KeyError as exc:
        raise NotAToggleOrder(f"toggle order has no value for {exc.args[0]!r}") from None


def validate_toggle_order(P: Poset, H: Mapping) -> str:
    """Classify ``H`` as ``"none"``, ``"toggle"`` or ``"column"``."""
    lv = _level_array(P, H)
    diffs = [lv[b] - lv[a] for a, b in P.cover_idx]
    if any(d == 0 for d in diffs):
        return "none"
    if all(abs(d) == 1 for d in diffs):
        return "column"
    return "toggle"


def _require(P, H, kind):
    got = validate_toggle_order(P, H)
    if got == "none":
        raise NotAToggleOrder("some cover has equal levels at both ends")
    if kind == "column" and got != "column":
        raise NotColumnOrder("some cover changes the level by more than one")


def support(P: Poset, H: Mapping) -> tuple:
    """The promotion support ``[a, b]``: smallest and largest level."""
    lv = _level_array(P, H)
    if lv.size == 0:
        return (0, -1)
    return int(lv.min()), int(lv.max())


def slice_letters(P: Poset, H: Mapping, i: int) -> list:
    lv = _level_array(P, H)
    return [j for j in range(P.n) if lv[j] == i]


def togpro_letters(P: Poset, H: Mapping, inverse: bool = False) -> list:
    """Element positions of TogPro_H in action order: lowest level first."""
    _require(P, H, "toggle")
    a, b = support(P, H)
    levels = range(a, b + 1)
    if inverse:
        levels = reversed(levels)
    return [j for i in levels for j in slice_letters(P, H, i)]


def gyration_letters(P: Poset, H: Mapping) -> list:
    _require(P, H, "column")
    lv = _level_array(P, H)
    even = [j for j in range(P.n) if lv[j] % 2 == 0]
    odd = [j for j in range(P.n) if lv[j] % 2 != 0]
    return even + odd


def slice_toggle(P: Poset, H: Mapping, i: int, I) -> frozenset:
    _require(P, H, "toggle")
    _check_ideal(P, I)
    return P.members(word_action(P, slice_letters(P, H, i))(_mask(P, I))[0])


def toggle_promotion(P: Poset, H: Mapping, I, inverse: bool = False) -> frozenset:
    _check_ideal(P, I)
    return P.members(word_action(P, togpro_letters(P, H, inverse))(_mask(P, I))[0])


def gyration(P: Poset, H: Mapping, I) -> frozenset:
    _check_ideal(P, I)
    return P.members(word_action(P, gyration_letters(P, H))(_mask(P, I))[0])


def row_layers(P: Poset, H: Mapping) -> list:
    """Layers ``L_1, ..., L_c``: L_1 holds the minimal elements with odd level
    (possibly none); each later layer is the set of minimal elements of what
    remains. Toggling ``L_c`` first and ``L_1`` last is rowmotion."""
    _require(P, H, "column")
    lv = _level_array(P, H)
    left = set(range(P.n))

    def minimal(rest):
        return sorted(j for j in rest if not any(a in rest for a in P.lower_idx[j]))

    layers = [[j for j in minimal(left) if lv[j] % 2 != 0]]
    left -= set(layers[0])
    while left:
        layer = minimal(left)
        layers.append(layer)
        left -= set(layer)
    return [frozenset(P.elements[j] for j in layer) for layer in layers]


def layer_letters(P: Poset, H: Mapping) -> list:
    return [sorted(P.index(p) for p in L) for L in row_layers(P, H)]


def _components(P: Poset) -> list:
    seen, comps = set(), []
    for s in range(P.n):
        if s in seen:
            continue
        comp, stack = [], [s]
        seen.add(s)
        while stack:
            a = stack.pop()
            comp.append(a)
            for b in P.lower_idx[a] + P.upper_idx[a]:
                if b not in seen:
                    seen.add(b)
                    stack.append(b)
        comps.append(comp)
    return comps


def row_generators(P: Poset, H: Mapping) -> dict:
    """Involutions ``g_i`` (as element lists) whose product ``g_lo ... g_hi``
    is Row, whose odd/even split reproduces Gyr_H, and which commute when
    their indices differ by more than one.

    The layers ``L_i`` are used when every cover joins consecutive layers.
    That fails when the Hasse diagram is not graded (a cover can then jump
    from ``L_i`` to ``L_{i+3}``); for ranked posets the rank, shifted per
    connected component to match the parity of H, is used instead. Posets
    that are neither raise :class:`RelationViolation`.
    """
    _require(P, H, "column")
    layers = row_layers(P, H)
    where = {P.index(p): i + 1 for i, L in enumerate(layers) for p in L}
    if all(where[b] - where[a] == 1 for a, b in P.cover_idx):
        return {i + 1: sorted(L, key=P.index) for i, L in enumerate(layers)}
    rk = rank_function(P)
    if rk is None:
        raise RelationViolation(
            "layers of this column order do not commute far apart and the poset is not ranked"
        )
    lv = _level_array(P, H)
    K = {}
    for comp in _components(P):
        p0 = comp[0]
        off = (int(lv[p0]) - rk[P.elements[p0]]) % 2
        for j in comp:
            K[j] = rk[P.elements[j]] + off
    gens = {}
    for j in range(P.n):
        gens.setdefault(K[j], []).append(P.elements[j])
    lo, hi = min(gens, default=1), max(gens, default=0)
    return {i: gens.get(i, []) for i in range(lo, hi + 1)}


# ---------------------------------------------------------------------------
# toggle words and conjugators


@dataclass(frozen=True)
class ToggleWord:
    """A product of toggles written in composition order: the rightmost letter
    acts first."""

    letters: tuple = ()

    def __len__(self):
        return len(self.letters)

    def __mul__(self, other: "ToggleWord") -> "ToggleWord":
        return ToggleWord(self.letters + other.letters)

    def inverse(self) -> "ToggleWord":
        return ToggleWord(tuple(reversed(self.letters)))

    def action(self, P: Poset) -> Action:
        for p in self.letters:
            if p not in P:
                raise UnknownElement(f"toggle word uses unknown element {p!r}")
        return word_action(P, [P.index(p) for p in reversed(self.letters)])

    def act(self, P: Poset, I) -> frozenset:
        _check_ideal(P, I)
        return P.members(self.action(P)(_mask(P, I))[0])


def conjugator_word(sigma: Sequence[int], tau: Sequence[int]) -> list:
    """Generator indices ``[j_m, ..., j_1]`` (composition order) of an element
    D with ``D g_sigma D^-1 = g_tau``, where ``g_sigma`` is the product of the
    generators in the order listed by ``sigma`` and each generator is an
    involution commuting with every generator whose index differs by more
    than one.

    Works with the height function of a Coxeter word: ``h(i+1) = h(i) + 1``
    when ``i`` stands left of ``i + 1``. Conjugating by a letter that can be
    commuted to the front moves it to the back and raises its height by two.
    """
    sigma, tau = list(sigma), list(tau)
    if sorted(sigma) != sorted(tau) or len(set(sigma)) != len(sigma):
        raise ValueError("sigma and tau must list the same distinct generators")
    if not sigma:
        return []
    gens = sorted(sigma)
    lo, hi = gens[0], gens[-1]
    if gens != list(range(lo, hi + 1)):
        raise ValueError("generator indices must be a contiguous range")

    def heights(word):
        pos = {g: t for t, g in enumerate(word)}
        h = {lo: 0}
        for g in range(lo, hi):
            h[g + 1] = h[g] + (1 if pos[g] < pos[g + 1] else -1)
        return h

    h, target = heights(sigma), heights(tau)
    shift = max(h[g] - target[g] for g in gens)
    shift += shift % 2
    target = {g: target[g] + shift for g in gens}

    applied = []
    while True:
        behind = [g for g in gens if h[g] < target[g]]
        if not behind:
            break
        j = min(behind, key=lambda g: (h[g], g))
        applied.append(j)
        h[j] += 2
    return list(reversed(applied))


def _generator_action(P: Poset, gens: Mapping, word: Sequence[int]) -> Action:
    letters = [e for g in reversed(list(word)) for e in gens.get(g, ())]
    return word_action(P, letters)


def _check_relations(P: Poset, space: IdealSpace, gens: Mapping) -> None:
    ident = np.arange(len(space))
    keys = sorted(gens)
    for g in keys:
        if not np.array_equal(space.permutation(_generator_action(P, gens, [g, g])), ident):
            raise RelationViolation(f"generator {g} is not an involution")
    for a in keys:
        for b in keys:
            if b > a + 1:
                ab = space.permutation(_generator_action(P, gens, [a, b]))
                ba = space.permutation(_generator_action(P, gens, [b, a]))
                if not np.array_equal(ab, ba):
                    raise RelationViolation(f"generators {a} and {b} do not commute")


def build_conjugator(P: Poset, generators: Mapping, sigma: Sequence[int], tau: Sequence[int],
                     space: IdealSpace | None = None) -> ToggleWord:
    """A toggle word ``w`` with ``w g_sigma w^-1 = g_tau`` on J(P).

    ``generators`` maps each index to the elements whose toggles make up that
    generator. The relations and the final identity are checked by acting on
    every ideal; :class:`RelationViolation` is raised if either fails.
    """
    space = IdealSpace(P) if space is None else space
    gens = {g: [P.index(p) for p in els] for g, els in generators.items()}
    for g in set(sigma) | set(tau):
        gens.setdefault(g, [])
    _check_relations(P, space, gens)
    word = conjugator_word(sigma, tau)
    w = ToggleWord(tuple(P.elements[e] for g in word for e in gens[g]))
    lhs = compose(w.action(P), _generator_action(P, gens, sigma), w.inverse().action(P))
    if not np.array_equal(space.permutation(lhs), space.permutation(_generator_action(P, gens, tau))):
        raise RelationViolation("constructed conjugator does not conjugate the two products")
    return w


def row_to_togpro_conjugator(P: Poset, H: Mapping, space: IdealSpace | None = None) -> ToggleWord:
    """A toggle word ``d`` with ``d Row d^-1 = TogPro_H`` for a column order H.

    Row is the product of the layer toggles and TogPro the product of the level
    slices; both are conjugated to gyration, and the two conjugators are
    combined.
    """
    _require(P, H, "column")
    space = IdealSpace(P) if space is None else space
    R = row_generators(P, H)
    row_word = sorted(R)
    gyr_r = [i for i in row_word if i % 2] + [i for i in row_word if i % 2 == 0]
    D2 = build_conjugator(P, R, row_word, gyr_r, space)

    a, b = support(P, H)
    lv = _level_array(P, H)
    T = {i: [P.elements[j] for j in range(P.n) if lv[j] == i] for i in range(a, b + 1)}
    tog_word = list(range(b, a - 1, -1))
    gyr_t = [i for i in tog_word if i % 2] + [i for i in tog_word if i % 2 == 0]
    D1 = build_conjugator(P, T, tog_word, gyr_t, space)

    d = D1.inverse() * D2
    lhs = compose(d.action(P), row_action(P), d.inverse().action(P))
    rhs = word_action(P, togpro_letters(P, H))
    if not np.array_equal(space.permutation(lhs), space.permutation(rhs)):
        raise RelationViolation("row/toggle-promotion conjugator failed verification")
    return d


def cartesian_toggle_order(P: Poset, embedding: Mapping, P1: Poset, P2: Poset) -> dict:
    """H(p) = rk_P1(p1) - rk_P2(p2) for an order- and rank-preserving
    embedding ``p -> (p1, p2)`` of P into P1 x P2."""
    rk, rk1, rk2 = rank_function(P), rank_function(P1), rank_function(P2)
    if rk is None or rk1 is None or rk2 is None:
        raise NotRankPreserving("all three posets must be ranked")
    image = {}
    for p in P.elements:
        try:
            x, y = embedding[p]
        except (KeyError, TypeError, ValueError):
            raise NotRankPreserving(f"no image in P1 x P2 for {p!r}") from None
        if x not in P1 or y not in P2:
            raise NotRankPreserving(f"image of {p!r} is not in P1 x P2")
        image[p] = (x, y)
    if len(set(image.values())) != P.n:
        raise NotRankPreserving("embedding is not injective")
    for lo, hi in P.covers:
        (x1, y1), (x2, y2) = image[lo], image[hi]
        if not ((x1 == x2 and P2.covered_by(y1, y2)) or (y1 == y2 and P1.covered_by(x1, x2))):
            raise NotRankPreserving(f"cover {lo!r} < {hi!r} does not map to a cover")
    return {p: rk1[image[p][0]] - rk2[image[p][1]] for p in P.elements}


# ---------------------------------------------------------------------------
# orbits


@dataclass
class OrbitReport:
    action: str
    total: int
    lengths: list
    representatives: list = field(default_factory=list)

    @property
    def count(self) -> int:
        return len(self.lengths)

    @property
    def multiset(self) -> tuple:
        return tuple(sorted(self.lengths))

    @property
    def order(self) -> int:
        return math.lcm(*self.lengths) if self.lengths else 1

    def histogram(self) -> dict:
        return dict(sorted(Counter(self.lengths).items()))

    def to_json(self) -> dict:
        orbits = []
        for t, length in enumerate(self.lengths):
            entry = {"length": int(length)}
            if t < len(self.representatives):
                entry["representative"] = self.representatives[t]
            orbits.append(entry)
        return {"action": self.action, "total": int(self.total), "orbits": orbits}


def cycle_decomposition(perm: np.ndarray) -> tuple:
    perm = np.ascontiguousarray(perm, dtype=np.int64)
    reps, lens, ok = kernels.cycles(perm)
    if not ok:
        raise ValueError("action is not a bijection on the state space")
    return np.asarray(reps), np.asarray(lens)


def orbit_report(name: str, perm: np.ndarray, describe: Callable[[int], object] | None = None) -> OrbitReport:
    reps, lens = cycle_decomposition(perm)
    represent = [describe(int(r)) for r in reps] if describe is not None else []
    return OrbitReport(name, int(np.asarray(perm).size), [int(x) for x in lens], represent)


def ideal_to_json(I: Iterable, P: Poset) -> list:
    out = []
    for p in sorted(I, key=P.index):
        out.append(list(p) if isinstance(p, tuple) else p)
    return out


def orbit_structure(P: Poset, action: Action | str = "row", H: Mapping | None = None,
                    budget: int | None = None, name: str | None = None,
                    space: IdealSpace | None = None) -> OrbitReport:
    """Full cycle decomposition of a bijection on J(P).

    ``action`` is a mask-array callable or one of ``"row"``, ``"togpro"``,
    ``"gyr"`` (the last two need a toggle order ``H``). Representatives are the
    lexicographically least ideal of each orbit.
    """
    space = IdealSpace(P, budget) if space is None else space
    if isinstance(action, str):
        name = name or action
        action = named_action(P, action, H)
    perm = space.permutation(action)
    return orbit_report(name or "custom", perm, lambda r: ideal_to_json(space.ideal(r), P))


def named_action(P: Poset, name: str, H: Mapping | None = None) -> Action:
    if name == "row":
        return row_action(P)
    if name in ("togpro", "gyr") and H is None:
        raise NotAToggleOrder(f"action {name!r} needs a toggle order")
    if name == "togpro":
        return word_action(P, togpro_letters(P, H))
    if name == "gyr":
        return word_action(P, gyration_letters(P, H))
    raise ValueError(f"unknown action {name!r}")
