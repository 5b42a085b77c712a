"""Hot loops over cell state arrays.

A cell is a row ``s`` of a uint8 array with ``s[v] = 1`` for a vertex member
and ``s[v] = 2`` when the edge ``(parent[v], v)`` is a member.  Each kernel
has a numba loop version (``*_loops``) and a numpy/python version
(``*_numpy``); the public name dispatches on ``TREEBRAID_NUMBA``.
"""
from __future__ import annotations

import numpy as np

from ._accel import USE_NUMBA, jit

CRITICAL, REDUNDANT, COLLAPSIBLE = 0, 1, 2
KIND_NAMES = ("critical", "redundant", "collapsible")


# --- Morse classification -------------------------------------------------------


def _classify_loops(states, parent, child_ptr, child_idx):
    m, N = states.shape
    kinds = np.zeros(m, dtype=np.int8)
    witness = np.full(m, -1, dtype=np.int64)
    cov = np.zeros(N, dtype=np.bool_)
    for r in range(m):
        s = states[r]
        for v in range(N):
            cov[v] = s[v] != 0
        for v in range(1, N):
            if s[v] == 2:
                cov[parent[v]] = True
        for v in range(N):
            if s[v] == 1:
                if v != 0 and not cov[parent[v]]:
                    kinds[r] = REDUNDANT
                    witness[r] = v
                    break
            elif s[v] == 2:
                p = parent[v]
                respecting = True
                for j in range(child_ptr[p], child_ptr[p + 1]):
                    u = child_idx[j]
                    if u < v and s[u] == 1:
                        respecting = False
                        break
                if respecting:
                    kinds[r] = COLLAPSIBLE
                    witness[r] = v
                    break
    return kinds, witness


_classify_jit = jit(_classify_loops)


def _classify_numpy(states, parent, child_ptr, child_idx):
    m, N = states.shape
    is_v = states == 1
    is_e = states == 2
    cov = states != 0
    for w in range(1, N):
        cov[:, parent[w]] |= is_e[:, w]
    event = np.zeros((m, N), dtype=np.int8)  # 1 unblocked vertex, 2 respecting edge
    for v in range(N):
        if v != 0:
            unblocked = is_v[:, v] & ~cov[:, parent[v]]
            event[unblocked, v] = REDUNDANT
            p = parent[v]
            kids = child_idx[child_ptr[p]:child_ptr[p + 1]]
            earlier = kids[kids < v]
            if len(earlier):
                bad = is_v[:, earlier].any(axis=1)
            else:
                bad = np.zeros(m, dtype=bool)
            event[is_e[:, v] & ~bad, v] = COLLAPSIBLE
    has = event.any(axis=1)
    first = np.argmax(event != 0, axis=1)
    kinds = np.where(has, event[np.arange(m), first], CRITICAL).astype(np.int8)
    witness = np.where(has, first, -1).astype(np.int64)
    return kinds, witness


def classify_states(states, parent, child_ptr, child_idx):
    if USE_NUMBA:
        return _classify_jit(states, parent, child_ptr, child_idx)
    return _classify_numpy(states, parent, child_ptr, child_idx)


# --- boundary matrix assembly ------------------------------------------------------


def _boundary_loops(states, face_keys, parent, pow3):
    """COO triples (face_row, cell_col, coef) of the boundary of each cell."""
    m, N = states.shape
    k = 0
    for v in range(N):
        if states.shape[0] and states[0, v] == 2:
            k += 1
    nnz = m * 2 * k
    rows = np.empty(nnz, dtype=np.int64)
    cols = np.empty(nnz, dtype=np.int64)
    vals = np.empty(nnz, dtype=np.int8)
    taus = np.empty(N, dtype=np.int64)
    t = 0
    for r in range(m):
        s = states[r]
        key = 0
        ne = 0
        for v in range(N):
            key += s[v] * pow3[v]
            if s[v] == 2:
                taus[ne] = v
                ne += 1
        for a in range(ne):
            w = taus[a]
            pos = 1
            for b in range(ne):
                if parent[taus[b]] < parent[w]:
                    pos += 1
            sign = -1 if pos % 2 == 1 else 1
            k_iota = key - 2 * pow3[w] + pow3[parent[w]]
            k_tau = key - pow3[w]
            rows[t] = np.searchsorted(face_keys, k_iota)
            cols[t] = r
            vals[t] = sign
            t += 1
            rows[t] = np.searchsorted(face_keys, k_tau)
            cols[t] = r
            vals[t] = -sign
            t += 1
    return rows[:t], cols[:t], vals[:t]


_boundary_jit = jit(_boundary_loops)


def _boundary_numpy(states, face_keys, parent, pow3):
    m, N = states.shape
    if m == 0:
        e = np.empty(0, dtype=np.int64)
        return e, e, np.empty(0, dtype=np.int8)
    keys = states.astype(np.int64) @ pow3
    is_e = (states == 2).astype(np.int64)
    par = np.asarray(parent, dtype=np.int64).copy()
    par[0] = -1
    less = (par[:, None] < par[None, :]).astype(np.int64)
    pos = is_e @ less + 1  # (m, N): iota-rank of each edge column
    r, w = np.nonzero(is_e)
    sign = np.where(pos[r, w] % 2 == 1, -1, 1).astype(np.int8)
    k_iota = keys[r] - 2 * pow3[w] + pow3[par[w]]
    k_tau = keys[r] - pow3[w]
    rows = np.concatenate([np.searchsorted(face_keys, k_iota), np.searchsorted(face_keys, k_tau)])
    cols = np.concatenate([r, r]).astype(np.int64)
    vals = np.concatenate([sign, -sign]).astype(np.int8)
    return rows.astype(np.int64), cols, vals


def boundary_coo(states, face_keys, parent, pow3):
    """Boundary of every row of ``states`` against sorted ``face_keys``."""
    if USE_NUMBA:
        return _boundary_jit(states, face_keys, parent, pow3)
    return _boundary_numpy(states, face_keys, parent, pow3)


# --- free-pair reduction (coreductions and collapses) -------------------------------


def _reduce_loops(dims, f_ptr, f_idx, f_val, c_ptr, c_idx, c_val, start):
    """Greedily remove free pairs from a based chain complex.

    A pair (a, b) with b a face of a of coefficient +-1 is removed when b is
    the only live face of a (coreduction) or a is the only live coface of b
    (collapse).  Neither case alters the remaining boundary coefficients.
    Returns (time, pa, pb): removal time per cell (-1 = kept) and the pairs
    in removal order.
    """
    M = dims.shape[0]
    alive = np.ones(M, dtype=np.bool_)
    nf = np.empty(M, dtype=np.int64)
    nc = np.empty(M, dtype=np.int64)
    for x in range(M):
        nf[x] = f_ptr[x + 1] - f_ptr[x]
        nc[x] = c_ptr[x + 1] - c_ptr[x]
    time = np.full(M, -1, dtype=np.int64)
    pa = np.empty(M // 2 + 1, dtype=np.int64)
    pb = np.empty(M // 2 + 1, dtype=np.int64)
    npairs = 0
    queue = np.empty(M + 2 * (f_idx.shape[0] + c_idx.shape[0]) + 8, dtype=np.int64)
    qh = 0
    qt = 0
    queue[qt] = start
    qt += 1
    for x in range(M):
        if x != start and (nf[x] == 1 or nc[x] == 1):
            queue[qt] = x
            qt += 1
    while True:
        before = npairs
        while qh < qt:
            x = queue[qh]
            qh += 1
            if not alive[x]:
                continue
            a = -1
            b = -1
            if nf[x] == 1:
                for j in range(f_ptr[x], f_ptr[x + 1]):
                    y = f_idx[j]
                    if alive[y]:
                        if f_val[j] == 1 or f_val[j] == -1:
                            a = x
                            b = y
                        break
            if a < 0 and nc[x] == 1:
                for j in range(c_ptr[x], c_ptr[x + 1]):
                    y = c_idx[j]
                    if alive[y]:
                        if c_val[j] == 1 or c_val[j] == -1:
                            a = y
                            b = x
                        break
            if a < 0:
                continue
            alive[a] = False
            alive[b] = False
            time[a] = npairs
            time[b] = npairs
            pa[npairs] = a
            pb[npairs] = b
            npairs += 1
            for cell in (a, b):
                for j in range(c_ptr[cell], c_ptr[cell + 1]):
                    y = c_idx[j]
                    if alive[y]:
                        nf[y] -= 1
                        queue[qt] = y
                        qt += 1
                for j in range(f_ptr[cell], f_ptr[cell + 1]):
                    y = f_idx[j]
                    if alive[y]:
                        nc[y] -= 1
                        queue[qt] = y
                        qt += 1
        if npairs == before:
            break
        # drained: restart from every remaining free candidate
        qh = 0
        qt = 0
        for x in range(M):
            if alive[x] and (nf[x] == 1 or nc[x] == 1):
                queue[qt] = x
                qt += 1
        if qt == 0:
            break
    return time, pa[:npairs], pb[:npairs]


_reduce_jit = jit(_reduce_loops)


def free_pair_reduction(dims, f_ptr, f_idx, f_val, c_ptr, c_idx, c_val, start):
    if USE_NUMBA:
        return _reduce_jit(dims, f_ptr, f_idx, f_val, c_ptr, c_idx, c_val, start)
    return _reduce_loops(dims, f_ptr, f_idx, f_val, c_ptr, c_idx, c_val, start)


# --- cochain pullback through recorded free pairs ------------------------------------------


def _pullback_loops(phi, dim, dims, time, pa, pb, f_ptr, f_idx, f_val, c_ptr, c_idx, c_val):
    """Replay the pairs on a global cochain vector (in place).

    For a pair (a, b) with eps = <da, b>, every coface x of b still alive at
    that time receives phi[x] -= <dx, b> * eps * phi[a].
    """
    for t in range(pa.shape[0]):
        a = pa[t]
        if dims[a] != dim or phi[a] == 0:
            continue
        b = pb[t]
        eps = 0
        for j in range(f_ptr[a], f_ptr[a + 1]):
            if f_idx[j] == b:
                eps = f_val[j]
                break
        for j in range(c_ptr[b], c_ptr[b + 1]):
            x = c_idx[j]
            if x != a and (time[x] > t or time[x] < 0):
                phi[x] -= c_val[j] * eps * phi[a]
    return phi


_pullback_jit = jit(_pullback_loops)


def pullback_pairs(phi, dim, dims, time, pa, pb, f_ptr, f_idx, f_val, c_ptr, c_idx, c_val):
    if USE_NUMBA:
        return _pullback_jit(phi, dim, dims, time, pa, pb, f_ptr, f_idx, f_val, c_ptr, c_idx, c_val)
    return _pullback_loops(phi, dim, dims, time, pa, pb, f_ptr, f_idx, f_val, c_ptr, c_idx, c_val)
