"""Brute-force reference implementations used as test oracles.

Nothing here imports posetdyn: posets are (elements, covers) pairs, labelings
are dicts, ideals are frozensets, and every object is built directly from its
definition by exhaustive search.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter


def strict_less(elements, covers):
    """Set of pairs (a, b) with a < b, by transitive closure of the covers."""
    up = {p: set() for p in elements}
    for a, b in covers:
        up[a].add(b)
    less = set()
    for a in elements:
        stack, seen = list(up[a]), set()
        while stack:
            b = stack.pop()
            if b in seen:
                continue
            seen.add(b)
            stack.extend(up[b])
        less |= {(a, b) for b in seen}
    return less


def hasse(elements, less):
    return {(a, b) for a, b in less if not any((a, c) in less and (c, b) in less for c in elements)}


def ideals(elements, less):
    out = []
    for r in range(len(elements) + 1):
        for sub in itertools.combinations(elements, r):
            s = set(sub)
            if all(a in s for a, b in less if b in s):
                out.append(frozenset(s))
    return out


def labelings(elements, less, R, strict=True):
    out = []
    for vals in itertools.product(*(sorted(R[p]) for p in elements)):
        f = dict(zip(elements, vals))
        if all((f[a] < f[b]) if strict else (f[a] <= f[b]) for a, b in less):
            out.append(f)
    return out


def induced_R(elements, less, q):
    # longest chain lengths: delta(p) = elements in the longest chain ending below p
    depth = {}
    for p in _topo(elements, less):
        depth[p] = max((depth[a] + 1 for a, b in less if b == p), default=0)
    height = {}
    for p in reversed(_topo(elements, less)):
        height[p] = max((height[b] + 1 for a, b in less if a == p), default=0)
    return {p: list(range(1 + depth[p], q - height[p] + 1)) for p in elements}


def _topo(elements, less):
    order, left = [], list(elements)
    while left:
        for p in left:
            if not any((a, p) in less for a in left if a != p):
                order.append(p)
                left.remove(p)
                break
    return order


def valid(f, less, R, strict=True):
    return all(f[p] in R[p] for p in f) and all(
        (f[a] < f[b]) if strict else (f[a] <= f[b]) for a, b in less
    )


# ---------------------------------------------------------------------------
# Bender-Knuth, promotion, jeu de taquin


def rho(elements, less, R, f, i):
    """Generalized rho_i: each element tested against the unchanged f."""
    new = dict(f)
    for p in elements:
        nxt = [k for k in sorted(R[p]) if k > i]
        if i not in R[p] or not nxt:
            continue
        u = nxt[0]
        if f[p] == i:
            trial = dict(f)
            trial[p] = u
            if valid(trial, less, R):
                new[p] = u
        elif f[p] == u:
            trial = dict(f)
            trial[p] = i
            if valid(trial, less, R):
                new[p] = i
    return new


def incpro(elements, less, R, f):
    lo = min(min(R[p]) for p in elements)
    hi = max(max(R[p]) for p in elements)
    for i in range(lo, hi):
        f = rho(elements, less, R, f, i)
    return f


HOLE = "HOLE"


def jdt(elements, covers, q, f):
    """Jeu de taquin promotion: delete 1s, slide holes up through 2..q, fill
    with q+1 and subtract one."""
    g = {p: (HOLE if v == 1 else v) for p, v in f.items()}
    ups = {p: [b for a, b in covers if a == p] for p in elements}
    for i in range(2, q + 1):
        moves = [p for p in elements if g[p] is HOLE and any(g[b] == i for b in ups[p])]
        if not moves:
            continue
        h = dict(g)
        for p in moves:
            h[p] = i
        for p in elements:
            if g[p] == i and any(g[a] is HOLE for a, b in covers if b == p):
                h[p] = HOLE
        g = h
    return {p: (q if v is HOLE else v - 1) for p, v in g.items()}


def classical_bk(less, f, i):
    """Classical BK on a bijective labeling: swap i and i+1 when the two
    elements carrying them are incomparable."""
    a = next(p for p, v in f.items() if v == i)
    b = next(p for p, v in f.items() if v == i + 1)
    if (a, b) in less or (b, a) in less:
        return dict(f)
    g = dict(f)
    g[a], g[b] = i + 1, i
    return g


# ---------------------------------------------------------------------------
# toggles and orbits


def toggle(elements, less, I, p):
    if p in I:
        J = I - {p}
        ok = not any((p, b) in less and b in I for b in elements)
    else:
        J = I | {p}
        ok = all(a in I for a, b in less if b == p)
    return frozenset(J) if ok else I


def rowmotion(elements, less, I):
    comp = [p for p in elements if p not in I]
    mins = [p for p in comp if not any((a, p) in less for a in comp)]
    return frozenset(p for p in elements if p in mins or any((p, m) in less for m in mins))


def orbit_lengths(states, fn):
    seen, out = set(), []
    for s in states:
        if s in seen:
            continue
        n, t = 0, s
        while True:
            seen.add(t)
            n += 1
            t = fn(t)
            if t == s:
                break
        out.append(n)
    return sorted(out)


def lcm(xs):
    return math.lcm(*xs) if xs else 1


def multiset(xs):
    return Counter(xs)


# ---------------------------------------------------------------------------
# Gamma by meet irreducibles


def meet_irreducibles(elements, less, R):
    """All labelings that are the meet (pointwise min) of no two strictly
    larger labelings, found by checking upper covers in the labeling lattice."""
    L = labelings(elements, less, R)
    keys = [tuple(f[p] for p in elements) for f in L]
    out = []
    for x in keys:
        bigger = [y for y in keys if y != x and all(a <= b for a, b in zip(x, y))]
        covers = [y for y in bigger if not any(z != y and all(a <= b for a, b in zip(z, y)) for z in bigger)]
        if len(covers) == 1:
            out.append(x)
    return out
