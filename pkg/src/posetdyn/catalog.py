"""Shipped figure fixtures, seeded random generators, and the input specs
understood by the command line (``fig1``, ``chain:4``, ``grid:2x3``, ...)."""

from __future__ import annotations

import json
from importlib import resources

import numpy as np

from .errors import InputFormatError
from .io import Document, load_document, parse_document
from .labelings import RestrictionFunction
from .poset import Poset, antichain, chain, product_of_chains

FIXTURE_NAMES = ("fig1", "fig2", "fig4", "fig10", "fig11", "staircase3")


def load_fixture(name: str) -> Document:
    if name not in FIXTURE_NAMES:
        raise InputFormatError(f"unknown fixture {name!r}; choose from {', '.join(FIXTURE_NAMES)}")
    text = resources.files("posetdyn").joinpath("fixtures", f"{name}.json").read_text()
    return parse_document(json.loads(text))


# ---------------------------------------------------------------------------
# random instances


def _hasse(n: int, relations) -> list:
    below = [0] * n
    for a, b in sorted(relations, key=lambda e: e[1]):
        below[b] |= 1 << a
    for b in range(n):
        acc = below[b]
        for a in range(b):
            if (acc >> a) & 1:
                acc |= below[a]
        below[b] = acc
    covers = []
    for b in range(n):
        for a in range(b):
            if not (below[b] >> a) & 1:
                continue
            if any((below[b] >> c) & 1 and (below[c] >> a) & 1 for c in range(a + 1, b)):
                continue
            covers.append((a, b))
    return covers


def random_poset(rng: np.random.Generator, n: int, density: float = 0.35) -> Poset:
    """Random poset on ``0..n-1``: each pair i < j is related with the given
    probability, then reduced to covers."""
    rel = [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < density]
    return Poset(range(n), _hasse(n, rel))


def random_ranked_poset(rng: np.random.Generator, n: int, density: float = 0.5) -> Poset:
    """Random ranked poset: elements get ranks, covers only join consecutive
    ranks, and every element above rank 0 gets at least one lower cover."""
    ranks = [0]
    for _ in range(1, n):
        ranks.append(int(min(max(ranks) + 1, rng.integers(0, max(ranks) + 2))))
    ranks.sort()
    covers = []
    for j in range(n):
        if ranks[j] == 0:
            continue
        below = [i for i in range(n) if ranks[i] == ranks[j] - 1]
        picked = [i for i in below if rng.random() < density]
        if not picked:
            picked = [below[int(rng.integers(len(below)))]]
        covers += [(i, j) for i in picked]
    return Poset(range(n), covers)


def random_consistent_restriction(rng: np.random.Generator, P: Poset, max_gamma: int = 18,
                                  spread: int = 3, fill: float = 0.5, tries: int = 200) -> RestrictionFunction:
    """A random consistent restriction with sum(|R(p)| - 1) <= max_gamma.

    Minima increase along covers by construction (topological sweep), maxima
    decrease downwards (reverse sweep), and interior labels are sampled.
    """
    for _ in range(tries):
        lo = [0] * P.n
        for j in P.topo:
            base = max((lo[a] + 1 for a in P.lower_idx[j]), default=1)
            lo[j] = base + int(rng.integers(0, 2))
        top = max(lo, default=0) + int(rng.integers(0, spread + 1))
        hi = [0] * P.n
        for j in reversed(P.topo):
            cap = min((hi[b] - 1 for b in P.upper_idx[j]), default=top)
            hi[j] = max(lo[j], cap - int(rng.integers(0, 2)))
        ok = all(lo[a] < lo[b] and hi[a] < hi[b] for a, b in P.cover_idx)
        if not ok:
            continue
        sets = {}
        for j, p in enumerate(P.elements):
            inner = [v for v in range(lo[j] + 1, hi[j]) if rng.random() < fill]
            sets[p] = sorted({lo[j], hi[j], *inner})
        if sum(len(s) - 1 for s in sets.values()) <= max_gamma:
            return RestrictionFunction(sets)
    raise RuntimeError("could not sample a small consistent restriction")


# ---------------------------------------------------------------------------
# command-line input specs


def _sizes(text: str) -> list:
    try:
        sizes = [int(x) for x in text.lower().split("x")]
    except ValueError:
        raise InputFormatError(f"bad size list {text!r}") from None
    if any(s < 0 for s in sizes):
        raise InputFormatError(f"negative size in {text!r}")
    return sizes


def resolve_input(spec: str, seed: int = 0) -> Document:
    """A fixture name, a JSON path, or a generator spec: ``chain:N``,
    ``antichain:N``, ``grid:AxB[xC...]``, ``random:N``, ``ranked:N``."""
    if spec in FIXTURE_NAMES:
        return load_fixture(spec)
    kind, sep, arg = spec.partition(":")
    if sep and kind in ("chain", "antichain", "grid", "random", "ranked"):
        sizes = _sizes(arg)
        if kind != "grid" and len(sizes) != 1:
            raise InputFormatError(f"{kind} takes a single size, got {arg!r}")
        if kind == "chain":
            return Document(chain(sizes[0]), description=spec)
        if kind == "antichain":
            return Document(antichain(sizes[0]), description=spec)
        if kind == "grid":
            return Document(product_of_chains(*sizes), description=spec)
        rng = np.random.default_rng(seed)
        maker = random_poset if kind == "random" else random_ranked_poset
        return Document(maker(rng, sizes[0]), description=f"{spec} seed={seed}")
    return load_document(spec)
