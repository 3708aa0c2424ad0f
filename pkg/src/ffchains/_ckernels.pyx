# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled twins of the kernels in ``_pykernels``.  Same signatures, same results."""

from libc.stdlib cimport malloc, free, calloc
from libc.string cimport memset

ctypedef unsigned char u8
ctypedef long long i64


def close_inplace(u8[:, ::1] m):
    cdef Py_ssize_t n = m.shape[0]
    cdef Py_ssize_t i, j, k
    cdef u8* rk
    cdef u8* ri
    with nogil:
        for k in range(n):
            rk = &m[k, 0]
            for i in range(n):
                if m[i, k]:
                    ri = &m[i, 0]
                    for j in range(n):
                        ri[j] |= rk[j]


def first_fit(const u8[:, ::1] comp, const i64[::1] order, i64[::1] color_out):
    cdef Py_ssize_t n = comp.shape[0]
    cdef Py_ssize_t steps = order.shape[0]
    cdef i64* head = <i64*> malloc((n + 1) * sizeof(i64))
    cdef i64* nxt = <i64*> malloc((n + 1) * sizeof(i64))
    cdef i64* tail = <i64*> malloc((n + 1) * sizeof(i64))
    cdef i64 nchains = 0
    cdef i64 x, c, y
    cdef Py_ssize_t s
    cdef bint ok
    if head == NULL or nxt == NULL or tail == NULL:
        free(head); free(nxt); free(tail)
        raise MemoryError()
    with nogil:
        for s in range(steps):
            x = order[s]
            nxt[x] = -1
            c = 0
            while c < nchains:
                ok = True
                y = head[c]
                while y >= 0:
                    if not comp[x, y]:
                        ok = False
                        break
                    y = nxt[y]
                if ok:
                    break
                c += 1
            if c == nchains:
                head[c] = x
                nchains += 1
            else:
                nxt[tail[c]] = x
            tail[c] = x
            color_out[x] = c + 1
    free(head); free(nxt); free(tail)
    return nchains


def wall_violation(const u8[:, ::1] comp, const i64[::1] chain_of, i64 nchains):
    cdef Py_ssize_t n = comp.shape[0]
    cdef Py_ssize_t x, y
    cdef i64 i, c
    cdef i64 bad_x = -1, bad_i = -1
    cdef u8* blocked = <u8*> malloc((nchains + 1) * sizeof(u8))
    if blocked == NULL:
        raise MemoryError()
    with nogil:
        for x in range(n):
            c = chain_of[x]
            if c == 0:
                continue
            memset(blocked, 0, c)
            for y in range(n):
                if y != x and chain_of[y] < c and not comp[x, y]:
                    blocked[chain_of[y]] = 1
            for i in range(c):
                if not blocked[i]:
                    bad_x = x
                    bad_i = i
                    break
            if bad_x >= 0:
                break
    free(blocked)
    return bad_x, bad_i


def embed_search(const u8[:, ::1] ltp, const u8[:, ::1] ltq, const i64[::1] qorder,
                 const u8[:, ::1] cand, i64 budget, i64[::1] out_map):
    cdef Py_ssize_t m = ltq.shape[0]
    cdef Py_ssize_t n = ltp.shape[0]
    if m == 0:
        return 1
    if m > n:
        return 0
    cdef u8* used = <u8*> calloc(n, sizeof(u8))
    cdef i64* pos = <i64*> calloc(m, sizeof(i64))
    cdef i64* assign = <i64*> malloc(m * sizeof(i64))
    if used == NULL or pos == NULL or assign == NULL:
        free(used); free(pos); free(assign)
        raise MemoryError()
    cdef Py_ssize_t d, depth
    cdef i64 q, qq, p, pp
    cdef i64 expansions = 0
    cdef int status = 0
    cdef bint ok, placed
    for d in range(m):
        assign[d] = -1
    with nogil:
        depth = 0
        while depth >= 0:
            q = qorder[depth]
            if assign[depth] >= 0:
                used[assign[depth]] = 0
                assign[depth] = -1
            placed = False
            while pos[depth] < n:
                p = pos[depth]
                pos[depth] += 1
                if used[p] or not cand[q, p]:
                    continue
                expansions += 1
                if expansions > budget:
                    status = -1
                    break
                ok = True
                for d in range(depth):
                    qq = qorder[d]
                    pp = assign[d]
                    if ltq[qq, q] != ltp[pp, p] or ltq[q, qq] != ltp[p, pp]:
                        ok = False
                        break
                if ok:
                    assign[depth] = p
                    used[p] = 1
                    placed = True
                    break
            if status == -1:
                break
            if placed:
                if depth == m - 1:
                    for d in range(m):
                        out_map[qorder[d]] = assign[d]
                    status = 1
                    break
                depth += 1
                pos[depth] = 0
            else:
                pos[depth] = 0
                depth -= 1
    free(used); free(pos); free(assign)
    return status


def bipartite_matching(const u8[:, ::1] adj, i64[::1] match_left):
    cdef Py_ssize_t nl = adj.shape[0]
    cdef Py_ssize_t nr = adj.shape[1]
    cdef i64* pair_u = <i64*> malloc((nl + 1) * sizeof(i64))
    cdef i64* pair_v = <i64*> malloc((nr + 1) * sizeof(i64))
    cdef i64* dist = <i64*> malloc((nl + 1) * sizeof(i64))
    cdef i64* queue = <i64*> malloc((nl + 1) * sizeof(i64))
    cdef i64* it = <i64*> malloc((nl + 1) * sizeof(i64))
    cdef i64* stack = <i64*> malloc((nl + 1) * sizeof(i64))
    cdef i64* via = <i64*> malloc((nl + 1) * sizeof(i64))
    if (pair_u == NULL or pair_v == NULL or dist == NULL or queue == NULL
            or it == NULL or stack == NULL or via == NULL):
        free(pair_u); free(pair_v); free(dist); free(queue); free(it); free(stack); free(via)
        raise MemoryError()
    cdef i64 inf = nl + 1
    cdef Py_ssize_t u, v, head, tailq, top, lvl
    cdef i64 w, x, root, size = 0
    cdef bint found, advanced, done
    with nogil:
        for u in range(nl):
            pair_u[u] = -1
        for v in range(nr):
            pair_v[v] = -1
        for u in range(nl):
            for v in range(nr):
                if adj[u, v] and pair_v[v] < 0:
                    pair_u[u] = v
                    pair_v[v] = u
                    break
        while True:
            tailq = 0
            for u in range(nl):
                if pair_u[u] < 0:
                    dist[u] = 0
                    queue[tailq] = u
                    tailq += 1
                else:
                    dist[u] = inf
            found = False
            head = 0
            while head < tailq:
                u = queue[head]
                head += 1
                for v in range(nr):
                    if not adj[u, v]:
                        continue
                    w = pair_v[v]
                    if w < 0:
                        found = True
                    elif dist[w] == inf:
                        dist[w] = dist[u] + 1
                        queue[tailq] = w
                        tailq += 1
            if not found:
                break
            for u in range(nl):
                it[u] = 0
            for root in range(nl):
                if pair_u[root] >= 0:
                    continue
                top = 0
                stack[0] = root
                while top >= 0:
                    x = stack[top]
                    advanced = False
                    done = False
                    while it[x] < nr:
                        v = it[x]
                        it[x] += 1
                        if not adj[x, v]:
                            continue
                        w = pair_v[v]
                        if w < 0:
                            via[top] = v
                            for lvl in range(top + 1):
                                pair_u[stack[lvl]] = via[lvl]
                                pair_v[via[lvl]] = stack[lvl]
                            done = True
                            break
                        if dist[w] == dist[x] + 1:
                            via[top] = v
                            top += 1
                            stack[top] = w
                            advanced = True
                            break
                    if done:
                        break
                    if not advanced:
                        dist[x] = inf
                        top -= 1
        for u in range(nl):
            match_left[u] = pair_u[u]
            if pair_u[u] >= 0:
                size += 1
    free(pair_u); free(pair_v); free(dist); free(queue); free(it); free(stack); free(via)
    return size
