"""Hot inner loops.

Every kernel has a numba version and a numpy (or plain python) version with
the same signature; ``cfedge._accel.USE_NUMBA`` picks one at import time.
The ``*_np`` / ``*_nb`` names stay importable so the two can be compared.
"""
import heapq

import numpy as np

from ._accel import USE_NUMBA, njit

CLOSED, OPEN, HYBRID = 0, 1, 2

# rows * edges * colours elements per numpy chunk
_CHUNK = 1 << 24


# --------------------------------------------------------------------------
# satisfaction


@njit(cache=True)
def satisfied_nb(eu, ev, iso, C, n, P, mode):
    K, m = C.shape
    out = np.zeros((K, m), dtype=np.bool_)
    cnt = np.zeros((n, P + 1), dtype=np.int32)
    for r in range(K):
        for e in range(m):
            c = C[r, e]
            if c > 0:
                cnt[eu[e], c] += 1
                cnt[ev[e], c] += 1
        for e in range(m):
            if iso[e] and mode != CLOSED:
                out[r, e] = True
                continue
            u = eu[e]
            v = ev[e]
            ce = C[r, e]
            for a in range(1, P + 1):
                t = cnt[u, a] + cnt[v, a]
                if a == ce:
                    if mode == HYBRID:
                        continue
                    t -= 1 if mode == CLOSED else 2
                if t == 1:
                    out[r, e] = True
                    break
        for e in range(m):
            c = C[r, e]
            if c > 0:
                cnt[eu[e], c] = 0
                cnt[ev[e], c] = 0
    return out


def satisfied_np(eu, ev, iso, C, n, P, mode):
    K, m = C.shape
    out = np.zeros((K, m), dtype=bool)
    if m == 0:
        return out
    step = max(1, _CHUNK // max(1, m * (P + 1)))
    alphas = np.arange(P + 1)
    for lo in range(0, K, step):
        rows = C[lo:lo + step]
        onehot = rows[:, :, None] == alphas  # (k, m, P+1)
        onehot[:, :, 0] = False
        cnt = np.zeros((rows.shape[0], n, P + 1), dtype=np.int32)
        np.add.at(cnt, (slice(None), eu), onehot)
        np.add.at(cnt, (slice(None), ev), onehot)
        t = cnt[:, eu, :] + cnt[:, ev, :]
        if mode == CLOSED:
            t -= onehot
        elif mode == OPEN:
            t -= 2 * onehot
        else:
            t[onehot] = 0
        t[:, :, 0] = 0
        out[lo:lo + step] = (t == 1).any(axis=2)
    if mode != CLOSED:
        out[:, iso] = True
    return out


# --------------------------------------------------------------------------
# min-degree peeling (lowest id breaks ties)


@njit(cache=True)
def _heap_push(heap, size, key):
    i = size
    heap[i] = key
    while i > 0:
        p = (i - 1) >> 1
        if heap[p] <= heap[i]:
            break
        heap[p], heap[i] = heap[i], heap[p]
        i = p
    return size + 1


@njit(cache=True)
def _heap_pop(heap, size):
    top = heap[0]
    size -= 1
    heap[0] = heap[size]
    i = 0
    while True:
        l = 2 * i + 1
        if l >= size:
            break
        c = l
        if l + 1 < size and heap[l + 1] < heap[l]:
            c = l + 1
        if heap[i] <= heap[c]:
            break
        heap[c], heap[i] = heap[i], heap[c]
        i = c
    return top, size


@njit(cache=True)
def peel_nb(indptr, nbr, threshold):
    n = indptr.shape[0] - 1
    deg = np.empty(n, dtype=np.int64)
    for v in range(n):
        deg[v] = indptr[v + 1] - indptr[v]
    heap = np.empty(n + nbr.shape[0] + 1, dtype=np.int64)
    size = 0
    for v in range(n):
        size = _heap_push(heap, size, deg[v] * n + v)
    removed = np.zeros(n, dtype=np.bool_)
    order = np.empty(n, dtype=np.int64)
    back = np.empty(n, dtype=np.int64)
    cnt = 0
    while size > 0:
        key, size = _heap_pop(heap, size)
        v = key % n
        d = key // n
        if removed[v] or d != deg[v]:
            continue
        if d >= threshold:
            break
        removed[v] = True
        order[cnt] = v
        back[cnt] = d
        cnt += 1
        for p in range(indptr[v], indptr[v + 1]):
            w = nbr[p]
            if not removed[w]:
                deg[w] -= 1
                size = _heap_push(heap, size, deg[w] * n + w)
    return order[:cnt], back[:cnt]


def peel_py(indptr, nbr, threshold):
    n = len(indptr) - 1
    deg = np.diff(indptr).astype(np.int64)
    heap = [(int(deg[v]), v) for v in range(n)]
    heapq.heapify(heap)
    removed = np.zeros(n, dtype=bool)
    order, back = [], []
    while heap:
        d, v = heapq.heappop(heap)
        if removed[v] or d != deg[v]:
            continue
        if d >= threshold:
            break
        removed[v] = True
        order.append(v)
        back.append(d)
        for w in nbr[indptr[v]:indptr[v + 1]]:
            if not removed[w]:
                deg[w] -= 1
                heapq.heappush(heap, (int(deg[w]), int(w)))
    return np.asarray(order, dtype=np.int64), np.asarray(back, dtype=np.int64)


# --------------------------------------------------------------------------
# random-partition statistics


@njit(cache=True)
def u3_counts_nb(eu, ev, part, Z, n, s):
    N = np.zeros((n, s), dtype=np.int64)
    for e in range(eu.shape[0]):
        i = part[e]
        u = eu[e]
        v = ev[e]
        if Z[v] == i:
            N[u, i] += 1
        if Z[u] == i:
            N[v, i] += 1
    return N


def u3_counts_np(eu, ev, part, Z, n, s):
    N = np.zeros((n, s), dtype=np.int64)
    hit = Z[ev] == part
    np.add.at(N, (eu[hit], part[hit]), 1)
    hit = Z[eu] == part
    np.add.at(N, (ev[hit], part[hit]), 1)
    return N


@njit(cache=True)
def always_bad_nb(eu, ev, Z, X):
    m = eu.shape[0]
    s = X.shape[1]
    k = X.shape[2]
    out = np.ones(m, dtype=np.bool_)
    for e in range(m):
        u = eu[e]
        v = ev[e]
        done = False
        for i in range(s):
            if Z[u] == i or Z[v] == i:
                continue
            for j in range(k):
                if X[u, i, j] != X[v, i, j]:
                    out[e] = False
                    done = True
                    break
            if done:
                break
    return out


def always_bad_np(eu, ev, Z, X):
    s = X.shape[1]
    open_block = (Z[eu][:, None] != np.arange(s)) & (Z[ev][:, None] != np.arange(s))
    good = (X[eu] != X[ev]) & open_block[:, :, None]
    return ~good.reshape(len(eu), -1).any(axis=1)


if USE_NUMBA:
    satisfied_rows = satisfied_nb
    peel = peel_nb
    u3_counts = u3_counts_nb
    always_bad = always_bad_nb
else:
    satisfied_rows = satisfied_np
    peel = peel_py
    u3_counts = u3_counts_np
    always_bad = always_bad_np
