"""Hot loops: ideal enumeration, toggling, rowmotion, cycle decomposition,
labeling enumeration and Bender-Knuth sweeps.

Every kernel exists twice: a numba-compiled scalar loop (``*_nb``) and a
vectorised numpy version (``*_np``). The module-level names dispatch to one
of them according to ``posetdyn._accel.BACKEND``; both sets stay importable
through :data:`NUMBA_KERNELS` and :data:`NUMPY_KERNELS` so they can be
benchmarked and cross-checked against each other.

Order ideals are int64 bitmasks (bit ``i`` is element ``i``), so posets fed
to the mask kernels must have at most 62 elements.
"""

import numpy as np

from ._accel import BACKEND, HAVE_NUMBA, njit

MAX_MASK_ELEMENTS = 62


# --------------------------------------------------------------------------
# order ideals


def _ideals_np(lower_masks, topo, budget):
    cur = np.zeros(1, dtype=np.int64)
    for e in topo:
        need = lower_masks[e]
        ok = (cur & need) == need
        size = cur.size + int(np.count_nonzero(ok))
        if size > budget:
            return cur[:0], size
        cur = np.concatenate([cur, cur[ok] | (np.int64(1) << np.int64(e))])
    cur.sort()
    return cur, cur.size


def _ideals_py(lower_masks, topo, budget):
    cap = 64
    buf = np.zeros(cap, dtype=np.int64)
    size = 1
    for t in range(topo.shape[0]):
        e = topo[t]
        need = lower_masks[e]
        bit = np.int64(1) << np.int64(e)
        add = 0
        for r in range(size):
            if (buf[r] & need) == need:
                add += 1
        if size + add > budget:
            return buf[:0], size + add
        if size + add > cap:
            while cap < size + add:
                cap *= 2
            grown = np.zeros(cap, dtype=np.int64)
            grown[:size] = buf[:size]
            buf = grown
        w = size
        for r in range(size):
            m = buf[r]
            if (m & need) == need:
                buf[w] = m | bit
                w += 1
        size = w
    out = np.sort(buf[:size])
    return out, size


# --------------------------------------------------------------------------
# toggles and rowmotion


def _apply_toggles_np(masks, letters, lower_masks, upper_masks):
    m = np.asarray(masks, dtype=np.int64).copy()
    for p in letters:
        bit = np.int64(1) << np.int64(p)
        lo = lower_masks[p]
        inside = (m & bit) != 0
        can = np.where(inside, (m & upper_masks[p]) == 0, (m & lo) == lo)
        m = np.where(can, m ^ bit, m)
    return m


def _apply_toggles_py(masks, letters, lower_masks, upper_masks):
    out = masks.copy()
    for r in range(out.shape[0]):
        m = out[r]
        for t in range(letters.shape[0]):
            p = letters[t]
            bit = np.int64(1) << np.int64(p)
            if m & bit:
                if (m & upper_masks[p]) == 0:
                    m ^= bit
            else:
                if (m & lower_masks[p]) == lower_masks[p]:
                    m |= bit
        out[r] = m
    return out


def _rowmotion_np(masks, lower_masks, down_masks, full):
    masks = np.asarray(masks, dtype=np.int64)
    comp = full & ~masks
    out = np.zeros_like(masks)
    for p in range(lower_masks.shape[0]):
        bit = np.int64(1) << np.int64(p)
        is_min = ((comp & bit) != 0) & ((lower_masks[p] & comp) == 0)
        out |= np.where(is_min, down_masks[p], np.int64(0))
    return out


def _rowmotion_py(masks, lower_masks, down_masks, full):
    n = lower_masks.shape[0]
    out = np.empty_like(masks)
    for r in range(masks.shape[0]):
        comp = full & ~masks[r]
        res = np.int64(0)
        for p in range(n):
            bit = np.int64(1) << np.int64(p)
            if (comp & bit) != 0 and (lower_masks[p] & comp) == 0:
                res |= down_masks[p]
        out[r] = res
    return out


# --------------------------------------------------------------------------
# cycle decomposition of a permutation of range(N)
# returns (representatives, lengths, ok); representatives are the least index
# of each cycle, ascending.


def _cycles_np(perm):
    perm = np.asarray(perm, dtype=np.int64)
    n = perm.size
    if n and (perm.min() < 0 or perm.max() >= n):
        return perm[:0], perm[:0], False
    if n and not np.all(np.bincount(perm, minlength=n) == 1):
        return perm[:0], perm[:0], False
    label = np.arange(n, dtype=np.int64)
    jump = perm.copy()
    span = 1
    while span < n:
        label = np.minimum(label, label[jump])
        jump = jump[jump]
        span *= 2
    counts = np.bincount(label, minlength=n)
    reps = np.flatnonzero(counts).astype(np.int64)
    return reps, counts[reps].astype(np.int64), True


def _cycles_py(perm):
    n = perm.shape[0]
    seen = np.zeros(n, dtype=np.bool_)
    reps = np.empty(n, dtype=np.int64)
    lens = np.empty(n, dtype=np.int64)
    k = 0
    for s in range(n):
        if perm[s] < 0 or perm[s] >= n:
            return reps[:0], lens[:0], False
    for s in range(n):
        if seen[s]:
            continue
        length = 0
        x = s
        while not seen[x]:
            seen[x] = True
            x = perm[x]
            length += 1
        if x != s:
            return reps[:0], lens[:0], False
        reps[k] = s
        lens[k] = length
        k += 1
    return reps[:k], lens[:k], True


# --------------------------------------------------------------------------
# increasing labelings
# rows are in lexicographic order of the values read along ``topo``.


def _labelings_np(topo, lo_ptr, lo_idx, rvals, rlen, strict, budget):
    n = topo.shape[0]
    rows = np.zeros((1, n), dtype=np.int64)
    for e in topo:
        vals = rvals[e, : rlen[e]]
        k = vals.size
        rep = np.repeat(rows, k, axis=0)
        cand = np.tile(vals, rows.shape[0])
        ok = np.ones(cand.size, dtype=bool)
        for j in range(lo_ptr[e], lo_ptr[e + 1]):
            z = lo_idx[j]
            if strict:
                ok &= rep[:, z] < cand
            else:
                ok &= rep[:, z] <= cand
        rows = rep[ok]
        rows[:, e] = cand[ok]
        if rows.shape[0] > budget:
            return rows[:0], rows.shape[0]
    return rows, rows.shape[0]


def _labelings_walk(topo, lo_ptr, lo_idx, rvals, rlen, strict, budget, fill, out):
    n = topo.shape[0]
    if n == 0:
        return 1
    cur = np.zeros(n, dtype=np.int64)
    choice = np.full(n, -1, dtype=np.int64)
    count = 0
    d = 0
    while d >= 0:
        e = topo[d]
        c = choice[d] + 1
        found = False
        while c < rlen[e]:
            v = rvals[e, c]
            ok = True
            for j in range(lo_ptr[e], lo_ptr[e + 1]):
                z = lo_idx[j]
                if strict:
                    if cur[z] >= v:
                        ok = False
                        break
                else:
                    if cur[z] > v:
                        ok = False
                        break
            if ok:
                found = True
                break
            c += 1
        if not found:
            choice[d] = -1
            d -= 1
            continue
        choice[d] = c
        cur[e] = rvals[e, c]
        if d == n - 1:
            if fill:
                out[count, :] = cur
            count += 1
            if count > budget:
                return count
        else:
            d += 1
    return count


def _labelings_two_pass(walk):
    def run(topo, lo_ptr, lo_idx, rvals, rlen, strict, budget):
        n = topo.shape[0]
        dummy = np.zeros((0, n), dtype=np.int64)
        count = walk(topo, lo_ptr, lo_idx, rvals, rlen, strict, budget, False, dummy)
        if count > budget:
            return dummy, count
        out = np.zeros((count, n), dtype=np.int64)
        walk(topo, lo_ptr, lo_idx, rvals, rlen, strict, budget, True, out)
        return out, count

    return run


# --------------------------------------------------------------------------
# generalized Bender-Knuth involutions (strict mode)
# ``levels[t]`` is the involution index applied at step t; ``nxt[t, p]`` is the
# next label of R(p) above levels[t], valid where ``has[t, p]``.


def _bk_sweep_np(rows, levels, nxt, has, up_ptr, up_idx, lo_ptr, lo_idx):
    F = np.array(rows, dtype=np.int64, copy=True)
    n = F.shape[1]
    for t in range(levels.shape[0]):
        i = levels[t]
        G = F.copy()
        for p in range(n):
            if not has[t, p]:
                continue
            u = nxt[t, p]
            col = G[:, p]
            raise_ok = col == i
            for j in range(up_ptr[p], up_ptr[p + 1]):
                raise_ok &= G[:, up_idx[j]] > u
            lower_ok = col == u
            for j in range(lo_ptr[p], lo_ptr[p + 1]):
                lower_ok &= G[:, lo_idx[j]] < i
            F[:, p] = np.where(raise_ok, u, np.where(lower_ok, i, col))
    return F


def _bk_sweep_py(rows, levels, nxt, has, up_ptr, up_idx, lo_ptr, lo_idx):
    F = rows.copy()
    m, n = F.shape
    G = np.empty(n, dtype=np.int64)
    for r in range(m):
        for t in range(levels.shape[0]):
            i = levels[t]
            for p in range(n):
                G[p] = F[r, p]
            for p in range(n):
                if not has[t, p]:
                    continue
                u = nxt[t, p]
                if G[p] == i:
                    ok = True
                    for j in range(up_ptr[p], up_ptr[p + 1]):
                        if G[up_idx[j]] <= u:
                            ok = False
                            break
                    if ok:
                        F[r, p] = u
                elif G[p] == u:
                    ok = True
                    for j in range(lo_ptr[p], lo_ptr[p + 1]):
                        if G[lo_idx[j]] >= i:
                            ok = False
                            break
                    if ok:
                        F[r, p] = i
    return F


# --------------------------------------------------------------------------
# dispatch

NUMPY_KERNELS = {
    "ideals": _ideals_np,
    "apply_toggles": _apply_toggles_np,
    "rowmotion": _rowmotion_np,
    "cycles": _cycles_np,
    "labelings": _labelings_np,
    "bk_sweep": _bk_sweep_np,
}

if HAVE_NUMBA:
    NUMBA_KERNELS = {
        "ideals": njit(_ideals_py),
        "apply_toggles": njit(_apply_toggles_py),
        "rowmotion": njit(_rowmotion_py),
        "cycles": njit(_cycles_py),
        "labelings": _labelings_two_pass(njit(_labelings_walk)),
        "bk_sweep": njit(_bk_sweep_py),
    }
else:  # pragma: no cover
    NUMBA_KERNELS = {}

ACTIVE = NUMBA_KERNELS if BACKEND == "numba" else NUMPY_KERNELS

ideals = ACTIVE["ideals"]
apply_toggles = ACTIVE["apply_toggles"]
rowmotion = ACTIVE["rowmotion"]
cycles = ACTIVE["cycles"]
labelings = ACTIVE["labelings"]
bk_sweep = ACTIVE["bk_sweep"]
