"""Pure-Python/numpy implementations of the hot kernels.

Every function here has a twin with the same signature in ``_ckernels.pyx``.
Matrices are C-contiguous ``uint8`` arrays; index arrays are ``int64``.
"""

import numpy as np


def close_inplace(m):
    """Warshall transitive closure of a square uint8 relation matrix, in place."""
    mb = m.view(np.bool_)
    n = mb.shape[0]
    for k in range(n):
        rows = mb[:, k]
        if rows.any():
            mb[rows] |= mb[k]


def first_fit(comp, order, color_out):
    """Run First-Fit on ``order``; write 1-based colors into ``color_out``.

    ``comp`` is the comparability matrix (lt or gt).  Returns the number of
    chains used.
    """
    compb = comp.view(np.bool_)
    members = []
    for x in order:
        row = compb[x]
        for c, chain in enumerate(members):
            if row[chain].all():
                chain.append(x)
                color_out[x] = c + 1
                break
        else:
            members.append([x])
            color_out[x] = len(members)
    return len(members)


def wall_violation(comp, chain_of, nchains):
    """Return ``(x, i)`` where element x has no incomparable element in the
    earlier chain i, or ``(-1, -1)`` when the blocking condition holds."""
    n = comp.shape[0]
    incomp = ~comp.view(np.bool_)
    np.fill_diagonal(incomp, False)
    member = np.zeros((n, nchains), dtype=np.bool_)
    member[np.arange(n), chain_of] = True
    blocked = (incomp.astype(np.int32) @ member.astype(np.int32)) > 0
    for x in range(n):
        c = chain_of[x]
        if c and not blocked[x, :c].all():
            i = int(np.argmin(blocked[x, :c]))
            return x, i
    return -1, -1


def embed_search(ltp, ltq, qorder, cand, budget, out_map):
    """Backtracking search for an order embedding of Q into P.

    Pattern elements are placed in ``qorder``; host candidates are tried in
    ascending index order, restricted by the ``cand`` mask.  Returns 1 if an
    embedding was written to ``out_map`` (indexed by pattern element), 0 if
    none exists, -1 if ``budget`` node expansions were exhausted.

    ``allowed[d]`` holds, for every later pattern position, the hosts
    consistent with the placements at depths < d; placing at depth d costs
    one vectorized update.  An expansion is still counted for every unused
    candidate tried, as in the compiled kernel.
    """
    m = ltq.shape[0]
    n = ltp.shape[0]
    if m == 0:
        return 1
    if m > n:
        return 0
    ltp = ltp.view(np.bool_)
    ltpt = np.ascontiguousarray(ltp.T)
    qorder = np.asarray(qorder)
    ltq_o = ltq.view(np.bool_)[np.ix_(qorder, qorder)]  # in placement order
    used = np.zeros(n, dtype=np.bool_)
    assign = [-1] * m
    allowed = [None] * (m + 1)
    allowed[0] = cand.view(np.bool_)[qorder].copy()
    tries = [None] * m
    pos = [0] * m
    expansions = 0

    def enter(depth):
        base = np.flatnonzero(~used & cand[qorder[depth]].view(np.bool_))
        tries[depth] = (base, np.flatnonzero(allowed[depth][depth, base]))
        pos[depth] = 0

    depth = 0
    enter(0)
    while depth >= 0:
        if assign[depth] >= 0:
            used[assign[depth]] = False
            assign[depth] = -1
        base, good = tries[depth]
        start = pos[depth]
        k = np.searchsorted(good, start)
        if k < good.size:
            hit = int(good[k])
            expansions += hit - start + 1
            if expansions > budget:
                return -1
            pos[depth] = hit + 1
            p = int(base[hit])
            assign[depth] = p
            used[p] = True
            if depth == m - 1:
                for d in range(m):
                    out_map[qorder[d]] = assign[d]
                return 1
            allowed[depth + 1] = (
                allowed[depth]
                & (ltp[p][None, :] == ltq_o[depth][:, None])
                & (ltpt[p][None, :] == ltq_o[:, depth][:, None])
            )
            depth += 1
            enter(depth)
        else:
            expansions += base.size - start
            if expansions > budget:
                return -1
            depth -= 1
    return 0


def bipartite_matching(adj, match_left):
    """Hopcroft-Karp on a dense uint8 biadjacency matrix (rows = left side).

    Starts from a greedy matching (rows ascending, first free column) and
    writes the partner column of each row, or -1, into ``match_left``.
    Returns the matching size.
    """
    nl, nr = adj.shape
    nbrs = [np.flatnonzero(adj[u]).tolist() for u in range(nl)]
    pair_u = [-1] * nl
    pair_v = [-1] * nr
    for u in range(nl):
        for v in nbrs[u]:
            if pair_v[v] < 0:
                pair_u[u] = v
                pair_v[v] = u
                break
    inf = nl + 1
    while True:
        dist = [inf] * nl
        queue = [u for u in range(nl) if pair_u[u] < 0]
        for u in queue:
            dist[u] = 0
        found = False
        head = 0
        while head < len(queue):
            u = queue[head]
            head += 1
            for v in nbrs[u]:
                w = pair_v[v]
                if w < 0:
                    found = True
                elif dist[w] == inf:
                    dist[w] = dist[u] + 1
                    queue.append(w)
        if not found:
            break
        it = [0] * nl
        for root in range(nl):
            if pair_u[root] >= 0:
                continue
            stack = [root]
            via = []
            while stack:
                x = stack[-1]
                advanced = False
                done = False
                nb = nbrs[x]
                while it[x] < len(nb):
                    v = nb[it[x]]
                    it[x] += 1
                    w = pair_v[v]
                    if w < 0:
                        via.append(v)
                        for uu, vv in zip(stack, via):
                            pair_u[uu] = vv
                            pair_v[vv] = uu
                        done = True
                        break
                    if dist[w] == dist[x] + 1:
                        via.append(v)
                        stack.append(w)
                        advanced = True
                        break
                if done:
                    break
                if not advanced:
                    dist[x] = inf
                    stack.pop()
                    if via:
                        via.pop()
    size = 0
    for u in range(nl):
        match_left[u] = pair_u[u]
        if pair_u[u] >= 0:
            size += 1
    return size
