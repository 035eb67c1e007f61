"""Generalized Bender-Knuth involutions, increasing labeling promotion,
jeu de taquin promotion, binary content and the verification sweeps that tie
promotion to toggle-promotion and rowmotion."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Mapping

import numpy as np

from . import kernels
from .errors import InvalidLabeling, LabelOutOfRange, MissingRestriction, NotGlobalBoundMode
from .gamma import GammaPoset, build_gamma, build_gamma_q
from .labelings import (
    IncreasingLabeling,
    RestrictionFunction,
    csr,
    induced_restriction,
    is_valid_labeling,
    labeling_array,
)
from .poset import Poset
from .toggles import IdealSpace, row_action, row_to_togpro_conjugator, slice_letters, togpro_letters, word_action


class _Hole:
    """The empty label used during jeu de taquin."""

    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self):
        return "HOLE"

    def __reduce__(self):
        return (_Hole, ())


HOLE = _Hole()


@dataclass(frozen=True)
class Check:
    """Outcome of a verification sweep."""

    ok: bool
    checked: int = 0
    counterexample: object = None
    detail: str = ""

    def __bool__(self):
        return self.ok


# ---------------------------------------------------------------------------
# Bender-Knuth involutions and IncPro


def _strict_values(P: Poset, R: RestrictionFunction, f) -> tuple:
    if R is None:
        raise MissingRestriction("a restriction function is required; use induced_restriction(P, q)")
    if isinstance(f, IncreasingLabeling):
        if not f.strict:
            raise InvalidLabeling("Bender-Knuth involutions act on strictly increasing labelings")
        values = f.values
    elif isinstance(f, Mapping):
        values = tuple(int(f[p]) for p in P.elements)
    else:
        values = tuple(int(v) for v in f)
    if not is_valid_labeling(P, R, values, True):
        raise InvalidLabeling(f"{values!r} is not in Inc_R(P)")
    return values


def promotion_levels(P: Poset, R: RestrictionFunction) -> range:
    """Indices i of the involutions that can act: min min R(p) .. max max R(p) - 1."""
    R.require(P)
    if not P.n:
        return range(0)
    return range(min(R.min(p) for p in P.elements), max(R.max(p) for p in P.elements))


def _bk_tables(P: Poset, R: RestrictionFunction, levels) -> tuple:
    levels = np.array(list(levels), dtype=np.int64).reshape(-1)
    nxt = np.zeros((levels.size, P.n), dtype=np.int64)
    has = np.zeros((levels.size, P.n), dtype=np.bool_)
    for t, i in enumerate(levels):
        for j, p in enumerate(P.elements):
            u = R.above(p, int(i))
            if u is not None and int(i) in R[p]:
                nxt[t, j] = u
                has[t, j] = True
    return levels, nxt, has


class BenderKnuth:
    """Precomputed tables for applying sequences of involutions to arrays of
    labelings (rows indexed by element position)."""

    def __init__(self, P: Poset, R: RestrictionFunction):
        R.require(P)
        self.poset, self.restriction = P, R
        self._up = csr(P.upper_idx)
        self._lo = csr(P.lower_idx)
        self.levels = promotion_levels(P, R)

    def apply(self, rows: np.ndarray, levels) -> np.ndarray:
        """Apply rho_i for i in ``levels`` in order (first acts first)."""
        rows = np.ascontiguousarray(rows, dtype=np.int64)
        if rows.ndim == 1:
            rows = rows.reshape(1, -1)
        lv, nxt, has = _bk_tables(self.poset, self.restriction, levels)
        if lv.size == 0 or rows.shape[0] == 0:
            return rows.copy()
        return kernels.bk_sweep(rows, lv, nxt, has, *self._up, *self._lo)

    def promote(self, rows: np.ndarray) -> np.ndarray:
        return self.apply(rows, self.levels)


def bender_knuth(P: Poset, R: RestrictionFunction, f, i: int) -> IncreasingLabeling:
    """rho_i: wherever possible, change label i to R(p)_{>i} and R(p)_{>i} to i.

    Every element is tested against the labeling as it was before the
    involution, and all changes are applied together.
    """
    values = _strict_values(P, R, f)
    out = BenderKnuth(P, R).apply(np.array([values]), [i])[0]
    return IncreasingLabeling(P, R, tuple(int(v) for v in out), True)


def inc_promotion(P: Poset, R: RestrictionFunction, f) -> IncreasingLabeling:
    """IncPro = ... rho_3 rho_2 rho_1 (rho at the smallest index acts first)."""
    values = _strict_values(P, R, f)
    out = BenderKnuth(P, R).promote(np.array([values]))[0]
    return IncreasingLabeling(P, R, tuple(int(v) for v in out), True)


def inc_promotion_trace(P: Poset, R: RestrictionFunction, f) -> list:
    """``[(operator, labeling), ...]`` starting from ``("start", f)``."""
    values = _strict_values(P, R, f)
    bk = BenderKnuth(P, R)
    cur = np.array([values], dtype=np.int64)
    steps = [("start", IncreasingLabeling(P, R, values, True))]
    for i in bk.levels:
        cur = bk.apply(cur, [i])
        steps.append((f"rho_{i}", IncreasingLabeling(P, R, tuple(int(v) for v in cur[0]), True)))
    return steps


def inc_promotion_array(P: Poset, R: RestrictionFunction, rows: np.ndarray) -> np.ndarray:
    return BenderKnuth(P, R).promote(rows)


# ---------------------------------------------------------------------------
# jeu de taquin


@dataclass(frozen=True)
class SlideState:
    """A partial labeling: integer labels or HOLE, by element position."""

    poset: Poset
    q: int
    values: tuple

    def __getitem__(self, p):
        return self.values[self.poset.index(p)]

    def holes(self) -> frozenset:
        return frozenset(p for p, v in zip(self.poset.elements, self.values) if v is HOLE)

    def as_dict(self) -> dict:
        return dict(zip(self.poset.elements, self.values))


def jdt_slide(S: SlideState, i: int) -> SlideState:
    """sigma_i: a hole whose upper cover carries i becomes i, and an i sitting
    above a hole becomes a hole, all decided from the state before the slide."""
    P, v = S.poset, S.values
    out = list(v)
    for x in range(P.n):
        if v[x] is HOLE:
            if any(v[y] is not HOLE and v[y] == i for y in P.upper_idx[x]):
                out[x] = i
        elif v[x] == i and any(v[z] is HOLE for z in P.lower_idx[x]):
            out[x] = HOLE
    return SlideState(P, S.q, tuple(out))


def relabel(S: SlideState, old, new) -> SlideState:
    """sigma_{old -> new}: replace every label ``old`` (possibly HOLE) by ``new``."""

    def same(a):
        return a is old if old is HOLE or a is HOLE else a == old

    return SlideState(S.poset, S.q, tuple(new if same(a) else a for a in S.values))


def _global_values(P: Poset, q: int, f) -> tuple:
    R = induced_restriction(P, q)
    if isinstance(f, IncreasingLabeling):
        if f.restriction != R or not f.strict:
            raise NotGlobalBoundMode("jeu de taquin promotion needs the restriction induced by q")
        values = f.values
    elif isinstance(f, Mapping):
        values = tuple(int(f[p]) for p in P.elements)
    else:
        values = tuple(int(v) for v in f)
    if not is_valid_labeling(P, R, values, True):
        raise InvalidLabeling(f"{values!r} is not in Inc^q(P) for q={q}")
    return values


def jdt_states(P: Poset, q: int, f) -> list:
    """Every intermediate state of jeu de taquin promotion, ending with the
    final (decremented) labeling as a plain state."""
    values = _global_values(P, q, f)
    S = relabel(SlideState(P, q, values), 1, HOLE)
    states = [("1->HOLE", S)]
    for i in range(2, q + 1):
        S = jdt_slide(S, i)
        states.append((f"sigma_{i}", S))
    S = relabel(S, HOLE, q + 1)
    states.append((f"HOLE->{q + 1}", S))
    states.append(("minus 1", SlideState(P, q, tuple(a - 1 for a in S.values))))
    return states


def jdt_promotion(P: Poset, q: int, f) -> IncreasingLabeling:
    final = jdt_states(P, q, f)[-1][1]
    return IncreasingLabeling(P, induced_restriction(P, q), final.values, True)


def sliding_subposet(P: Poset, q: int, f) -> frozenset:
    """Elements that hold a hole at some stage of jeu de taquin promotion."""
    out = set()
    for name, S in jdt_states(P, q, f)[:-2]:
        out |= S.holes()
    return frozenset(out)


def jdt_promotion_array(P: Poset, q: int, rows: np.ndarray) -> np.ndarray:
    """Vectorised jeu de taquin promotion; 0 encodes the hole."""
    F = np.array(rows, dtype=np.int64, copy=True)
    if F.ndim == 1:
        F = F.reshape(1, -1)
    F[F == 1] = 0
    for i in range(2, q + 1):
        G = F.copy()
        for x in range(P.n):
            col = G[:, x]
            fill = np.zeros(col.shape, dtype=bool)
            for y in P.upper_idx[x]:
                fill |= G[:, y] == i
            empty = np.zeros(col.shape, dtype=bool)
            for z in P.lower_idx[x]:
                empty |= G[:, z] == 0
            F[:, x] = np.where((col == 0) & fill, i, np.where((col == i) & empty, 0, col))
    F[F == 0] = q + 1
    return F - 1


# ---------------------------------------------------------------------------
# binary content and resonance


def binary_content(f, q: int) -> tuple:
    values = f.values if isinstance(f, IncreasingLabeling) else (
        tuple(f.values()) if isinstance(f, Mapping) else tuple(f))
    bad = [v for v in values if not 1 <= v <= q]
    if bad:
        raise LabelOutOfRange(f"labels {sorted(set(bad))} lie outside [1, {q}]")
    used = set(values)
    return tuple(1 if i in used else 0 for i in range(1, q + 1))


def rotation(content) -> tuple:
    """Left cyclic shift (a_2, ..., a_q, a_1)."""
    content = tuple(content)
    return content[1:] + content[:1]


def content_array(rows: np.ndarray, q: int) -> np.ndarray:
    rows = np.asarray(rows, dtype=np.int64)
    out = np.zeros((rows.shape[0], q), dtype=np.int8)
    for i in range(1, q + 1):
        out[:, i - 1] = (rows == i).any(axis=1)
    return out


def verify_resonance(P: Poset, q: int, promote: Callable | None = None, budget=None) -> Check:
    """Con(IncPro(f)) is the left rotation of Con(f) for every f in Inc^q(P).

    ``promote`` (rows -> rows) replaces IncPro; it exists so the sweep can be
    run against a deliberately broken operator.
    """
    R = induced_restriction(P, q)
    rows = labeling_array(P, R, True, budget)
    out = (promote or BenderKnuth(P, R).promote)(rows)
    lhs = content_array(out, q)
    rhs = np.roll(content_array(rows, q), -1, axis=1)
    bad = np.flatnonzero((lhs != rhs).any(axis=1))
    if bad.size:
        r = int(bad[0])
        f = dict(zip(P.elements, map(int, rows[r])))
        return Check(False, rows.shape[0], f, f"Con after promotion {tuple(lhs[r])} != rotated {tuple(rhs[r])}")
    return Check(True, rows.shape[0])


def verify_row_resonance(P: Poset, q: int, budget=None) -> Check:
    """Con o phi o d intertwines Row on J(Gamma(P, q)) with rotation, where phi
    maps ideals to labelings and d conjugates Row to TogPro."""
    G = build_gamma_q(P, q)
    space = IdealSpace(G.poset, budget)
    d = row_to_togpro_conjugator(G.poset, G.levels, space)
    d_act = d.action(G.poset)

    def psi(masks):
        return content_array(G.masks_to_labelings(d_act(masks)), q)

    lhs = psi(row_action(G.poset)(space.masks))
    rhs = np.roll(psi(space.masks), -1, axis=1)
    bad = np.flatnonzero((lhs != rhs).any(axis=1))
    if bad.size:
        return Check(False, len(space), sorted(space.ideal(int(bad[0])), key=repr))
    return Check(True, len(space))


def verify_equivariance(P: Poset, R: RestrictionFunction, G: GammaPoset | None = None, budget=None) -> Check:
    """labeling_to_ideal o rho_k = T^k o labeling_to_ideal for every k and every
    labeling, and the same for IncPro against TogPro with levels H(p, k) = k."""
    G = build_gamma(P, R) if G is None else G
    rows = labeling_array(P, R, True, budget)
    masks = G.labelings_to_masks(rows)
    bk = BenderKnuth(P, R)
    checked = 0
    for k in bk.levels:
        lhs = G.labelings_to_masks(bk.apply(rows, [k]))
        rhs = word_action(G.poset, slice_letters(G.poset, G.levels, k))(masks)
        checked += rows.shape[0]
        bad = np.flatnonzero(lhs != rhs)
        if bad.size:
            f = dict(zip(P.elements, map(int, rows[bad[0]])))
            return Check(False, checked, f, f"slice identity fails at level {k}")
    lhs = G.labelings_to_masks(bk.promote(rows))
    rhs = word_action(G.poset, togpro_letters(G.poset, G.levels))(masks)
    checked += rows.shape[0]
    bad = np.flatnonzero(lhs != rhs)
    if bad.size:
        f = dict(zip(P.elements, map(int, rows[bad[0]])))
        return Check(False, checked, f, "IncPro and TogPro disagree")
    return Check(True, checked)


def verify_bk_jdt(P: Poset, q: int, budget=None) -> Check:
    R = induced_restriction(P, q)
    rows = labeling_array(P, R, True, budget)
    a = BenderKnuth(P, R).promote(rows)
    b = jdt_promotion_array(P, q, rows)
    bad = np.flatnonzero((a != b).any(axis=1))
    if bad.size:
        f = dict(zip(P.elements, map(int, rows[bad[0]])))
        return Check(False, rows.shape[0], f)
    return Check(True, rows.shape[0])


def labeling_permutation(rows: np.ndarray, images: np.ndarray) -> np.ndarray:
    """Index of each image row within ``rows``."""
    rows = np.asarray(rows, dtype=np.int64)
    if rows.shape[0] == 0:
        return np.zeros(0, dtype=np.int64)
    both = np.concatenate([rows, np.asarray(images, dtype=np.int64)])
    _, inv = np.unique(both, axis=0, return_inverse=True)
    inv = inv.reshape(-1)
    m = rows.shape[0]
    where = np.full(inv.max() + 1, -1, dtype=np.int64)
    where[inv[:m]] = np.arange(m)
    perm = where[inv[m:]]
    if (perm < 0).any():
        raise ValueError("promotion left the set of labelings")
    return perm
