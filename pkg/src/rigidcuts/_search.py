"""Compiled branch-and-bound over r-cut assignments.

Vertices are processed in a fixed order 0..n-1 (the caller relabels them,
normally densest part first).  At depth ``j`` the vertices ``start..j-1`` are
assigned and the bound on any completion is

    crossing(assigned) + sum_{u >= j} max_i crossing(u -> assigned, u in part i)
                       + suffix[j]

where ``suffix[j]`` bounds the r-cut size of the subgraph induced by
``j..n-1``.  Solving the suffixes from the back yields exact suffix values
(Russian-doll search).  Part labels are restricted to first-appearance order,
so every partition is visited once.
"""
import numpy as np
from numba import njit

STATUS_OK = 0
STATUS_OVERFLOW = 1
STATUS_NODE_LIMIT = 2


@njit(cache=True, nogil=True)
def _undo(v, part, fptr, fidx, acc, dega):
    for p in range(fptr[v], fptr[v + 1]):
        u = fidx[p]
        acc[u, part] -= 1
        dega[u] -= 1


@njit(cache=True, nogil=True)
def _row_min(acc, u, r):
    mn = acc[u, 0]
    for i in range(1, r):
        if acc[u, i] < mn:
            mn = acc[u, i]
    return mn


@njit(cache=True, nogil=True)
def search(start, n, r, fptr, fidx, suffix, threshold, slack, collect,
           out, out_sizes, node_limit):
    """Depth-first branch and bound on vertices ``start..n-1``.

    collect == False: maximise; only strict improvements over ``threshold``
    are accepted and the best assignment is written to ``out[0]``.

    collect == True: store every leaf of size >= max(threshold, best - slack),
    where ``best`` is the largest leaf size seen; stored rows falling below a
    raised threshold are purged.

    Returns (best, stored, nodes, status).
    """
    assign = np.full(n, -1, np.int64)
    acc = np.zeros((n, r), np.int64)
    dega = np.zeros(n, np.int64)
    opts = np.zeros((n + 1, r), np.int64)
    nopt = np.zeros(n + 1, np.int64)
    pos = np.zeros(n + 1, np.int64)
    cur0 = np.zeros(n + 1, np.int64)
    sm0 = np.zeros(n + 1, np.int64)
    used0 = np.zeros(n + 1, np.int64)
    gains = np.zeros(r, np.int64)

    best = threshold if not collect else -1
    thr = threshold
    stored = 0
    nodes = 0
    cur = 0
    sm = 0
    used = 0
    cap = out.shape[0]

    depth = start
    # set up root options: first vertex goes to part 0
    nopt[depth] = 1
    opts[depth, 0] = 0
    pos[depth] = 0
    cur0[depth] = cur
    sm0[depth] = sm
    used0[depth] = used

    while depth >= start:
        v = depth
        if pos[v] > 0:
            _undo(v, assign[v], fptr, fidx, acc, dega)
            assign[v] = -1
            cur = cur0[v]
            sm = sm0[v]
            used = used0[v]
        if pos[v] == nopt[v]:
            depth -= 1
            continue
        c = opts[v, pos[v]]
        pos[v] += 1
        nodes += 1
        if nodes > node_limit:
            return best, stored, nodes, STATUS_NODE_LIMIT

        gain = dega[v] - acc[v, c]
        nsm = sm - (dega[v] - _row_min(acc, v, r))
        for p in range(fptr[v], fptr[v + 1]):
            u = fidx[p]
            before = dega[u] - _row_min(acc, u, r)
            acc[u, c] += 1
            dega[u] += 1
            nsm += dega[u] - _row_min(acc, u, r) - before
        assign[v] = c
        ncur = cur + gain
        bound = ncur + nsm + suffix[v + 1]
        if collect:
            if bound < thr:
                continue
        elif bound <= best:
            continue

        if v == n - 1:
            if collect:
                if ncur > best:
                    best = ncur
                    if best - slack > thr:
                        thr = best - slack
                        k = 0
                        for i in range(stored):
                            if out_sizes[i] >= thr:
                                if k != i:
                                    out[k, :] = out[i, :]
                                    out_sizes[k] = out_sizes[i]
                                k += 1
                        stored = k
                if stored == cap:
                    return best, stored, nodes, STATUS_OVERFLOW
                for w in range(n):
                    out[stored, w] = assign[w]
                out_sizes[stored] = ncur
                stored += 1
            else:
                best = ncur
                for w in range(n):
                    out[0, w] = assign[w]
            continue

        # descend: commit state for v, then prepare options for v + 1
        cur = ncur
        sm = nsm
        nused = used
        if c + 1 > nused:
            nused = c + 1
        used = nused
        w = v + 1
        cur0[w] = cur
        sm0[w] = sm
        used0[w] = used
        lim = used + 1
        if lim > r:
            lim = r
        for i in range(lim):
            gains[i] = dega[w] - acc[w, i]
        # order children by decreasing gain (insertion sort, stable)
        for i in range(lim):
            opts[w, i] = i
        for i in range(1, lim):
            j = i
            while j > 0 and gains[opts[w, j]] > gains[opts[w, j - 1]]:
                t = opts[w, j]
                opts[w, j] = opts[w, j - 1]
                opts[w, j - 1] = t
                j -= 1
        nopt[w] = lim
        pos[w] = 0
        depth = w
    return best, stored, nodes, STATUS_OK


@njit(cache=True, nogil=True)
def search2(start, n, fptr, fidx, suffix, threshold, slack, collect,
            out, out_sizes, node_limit):
    """:func:`search` specialised to r = 2.

    Keeps ``diff[u] = (#neighbours in part 1) - (#neighbours in part 0)`` among
    assigned vertices, so a vertex's best gain is ``(dega + |diff|) / 2``.
    """
    assign = np.full(n, -1, np.int64)
    diff = np.zeros(n, np.int32)
    dega = np.zeros(n, np.int32)
    first = np.zeros(n + 1, np.int64)
    pos = np.zeros(n + 1, np.int64)
    nopt = np.zeros(n + 1, np.int64)
    cur0 = np.zeros(n + 1, np.int64)
    sm0 = np.zeros(n + 1, np.int64)

    best = threshold if not collect else -1
    thr = threshold
    stored = 0
    nodes = 0
    cur = 0
    sm = 0
    cap = out.shape[0]

    depth = start
    nopt[depth] = 1
    first[depth] = 0
    pos[depth] = 0
    cur0[depth] = 0
    sm0[depth] = 0

    while depth >= start:
        v = depth
        if pos[v] > 0:
            step = 2 * assign[v] - 1
            for p in range(fptr[v], fptr[v + 1]):
                u = fidx[p]
                diff[u] -= step
                dega[u] -= 1
            cur = cur0[v]
            sm = sm0[v]
        if pos[v] == nopt[v]:
            depth -= 1
            continue
        c = first[v] if pos[v] == 0 else 1 - first[v]
        pos[v] += 1
        nodes += 1
        if nodes > node_limit:
            return best, stored, nodes, STATUS_NODE_LIMIT

        dv = diff[v]
        if c == 0:
            gain = (dega[v] + dv) // 2
        else:
            gain = (dega[v] - dv) // 2
        adv = dv if dv >= 0 else -dv
        nsm = sm - (dega[v] + adv) // 2
        step = 2 * c - 1
        for p in range(fptr[v], fptr[v + 1]):
            u = fidx[p]
            du = diff[u]
            # |diff| grows by one exactly when u did not lean towards the other side
            nsm += du * step >= 0
            diff[u] = du + step
            dega[u] += 1
        assign[v] = c
        ncur = cur + gain
        bound = ncur + nsm + suffix[v + 1]
        if collect:
            if bound < thr:
                continue
        elif bound <= best:
            continue

        if v == n - 1:
            if collect:
                if ncur > best:
                    best = ncur
                    if best - slack > thr:
                        thr = best - slack
                        k = 0
                        for i in range(stored):
                            if out_sizes[i] >= thr:
                                if k != i:
                                    out[k, :] = out[i, :]
                                    out_sizes[k] = out_sizes[i]
                                k += 1
                        stored = k
                if stored == cap:
                    return best, stored, nodes, STATUS_OVERFLOW
                for w in range(n):
                    out[stored, w] = assign[w]
                out_sizes[stored] = ncur
                stored += 1
            else:
                best = ncur
                for w in range(n):
                    out[0, w] = assign[w]
            continue

        cur = ncur
        sm = nsm
        w = v + 1
        cur0[w] = cur
        sm0[w] = sm
        # try the side with the larger gain first; ties go to part 0
        first[w] = 0 if diff[w] >= 0 else 1
        nopt[w] = 2
        pos[w] = 0
        depth = w
    return best, stored, nodes, STATUS_OK
