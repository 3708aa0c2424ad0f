"""Brute-force reference computations.

Nothing here shares code paths with the fast implementations; these are
the independent sides of the cross-checks in the test suite and in
``ffchains verify``.
"""

from itertools import combinations, permutations

import numpy as np


def count_posets_bruteforce(n):
    """Number of labeled strict partial orders on n elements, by filtering
    all 2^(n(n-1)) off-diagonal relation matrices through the order axioms."""
    if n <= 1:
        return 1
    pairs = [(i, j) for i in range(n) for j in range(n) if i != j]
    bit = {p: k for k, p in enumerate(pairs)}
    if len(pairs) > 30:
        raise ValueError("too many relation matrices to filter")
    rel = np.arange(1 << len(pairs), dtype=np.uint32)

    def has(i, j):
        return (rel >> np.uint32(bit[(i, j)])) & np.uint32(1)

    ok = np.ones(rel.shape, dtype=np.bool_)
    for i, j in combinations(range(n), 2):
        ok &= (has(i, j) & has(j, i)) == 0
    for i, j, k in permutations(range(n), 3):
        ok &= ~((has(i, j) & has(j, k)).astype(np.bool_) & (has(i, k) == 0))
    return int(ok.sum())


def max_antichain_bruteforce(P):
    """Largest antichain size by checking subsets from largest to smallest."""
    lt = P.lt
    for size in range(P.n, 0, -1):
        for sub in combinations(range(P.n), size):
            if not any(lt[a, b] or lt[b, a] for a, b in combinations(sub, 2)):
                return size
    return 0


def min_chain_cover_bruteforce(P):
    """Smallest number of chains covering P, by trying every assignment
    of elements to k labels for increasing k (tiny posets only)."""
    n = P.n
    if n == 0:
        return 0
    comp = P.comp
    for k in range(1, n + 1):
        for labels in _assignments(n, k):
            groups = [[x for x in range(n) if labels[x] == c] for c in range(k)]
            if all(all(comp[a, b] for a, b in combinations(g, 2)) for g in groups):
                return k
    return n


def _assignments(n, k):
    # restricted growth strings: each set partition into <= k blocks once
    def rec(i, labels, used):
        if i == n:
            yield labels
            return
        for c in range(min(used + 1, k)):
            labels.append(c)
            yield from rec(i + 1, labels, max(used, c + 1))
            labels.pop()

    yield from rec(0, [], 0)


def contains_bruteforce(P, Q):
    """Embedding of Q into P (as a tuple) by trying every injection, or None."""
    for image in permutations(range(P.n), Q.n):
        if all(
            bool(Q.lt[a, b]) == bool(P.lt[image[a], image[b]])
            for a in range(Q.n)
            for b in range(Q.n)
            if a != b
        ):
            return image
    return None


def ladder_like_bruteforce(P):
    """True iff some 2-coloring gives chains C1, C2 with no y in C2 below x in C1."""
    n = P.n
    lt = P.lt
    for mask in range(1 << n):
        c1 = [x for x in range(n) if mask >> x & 1]
        c2 = [x for x in range(n) if not mask >> x & 1]
        if any(not (lt[a, b] or lt[b, a]) for a, b in combinations(c1, 2)):
            continue
        if any(not (lt[a, b] or lt[b, a]) for a, b in combinations(c2, 2)):
            continue
        if not any(lt[y, x] for x in c1 for y in c2):
            return True
    return False


def max_wall_bruteforce(P):
    """Largest number of chains First-Fit uses over all n! presentation orders."""
    best = 0
    comp = P.comp
    for order in permutations(range(P.n)):
        chains = []
        for x in order:
            for c in chains:
                if all(comp[x, y] for y in c):
                    c.append(x)
                    break
            else:
                chains.append([x])
        best = max(best, len(chains))
    return best


def has_c4_bruteforce(edges):
    """4-cycle test on a bipartite edge list: every pair of left vertices
    against every pair of right vertices."""
    es = set(map(tuple, edges))
    lefts = sorted({a for a, _ in es})
    rights = sorted({b for _, b in es})
    for a1, a2 in combinations(lefts, 2):
        for b1, b2 in combinations(rights, 2):
            if (a1, b1) in es and (a1, b2) in es and (a2, b1) in es and (a2, b2) in es:
                return True
    return False
