"""Generators for named posets and the two adversarial constructions:
the reservoir (exponential walls in width k) and the projective-plane
butterfly-free instance."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import CapExceeded, NoPerfectMatching, NotPrime
from .poset import ChainPartition, Poset, series_compose, transitive_closure

RESERVOIR_CAP = 6
BUTTERFLY_Q_CAP = 7


# -- small named posets -------------------------------------------------------


def chain(r: int) -> Poset:
    if r < 0:
        raise ValueError("chain length must be nonnegative")
    return Poset(np.triu(np.ones((r, r), dtype=np.bool_), k=1), _trusted=True)


def antichain(k: int) -> Poset:
    if k < 0:
        raise ValueError("antichain size must be nonnegative")
    return Poset(np.zeros((k, k), dtype=np.bool_), _trusted=True)


def ladder(n: int) -> Poset:
    """Chains x1<...<xn (indices 0..n-1) and y1<...<yn (n..2n-1) with
    x_i < y_j exactly when i <= j."""
    if n < 1:
        raise ValueError("ladder height must be at least 1")
    lt = np.zeros((2 * n, 2 * n), dtype=np.bool_)
    upper = np.triu(np.ones((n, n), dtype=np.bool_), k=1)
    lt[:n, :n] = upper
    lt[n:, n:] = upper
    lt[:n, n:] = np.triu(np.ones((n, n), dtype=np.bool_))
    labels = [f"x{i}" for i in range(1, n + 1)] + [f"y{i}" for i in range(1, n + 1)]
    return Poset(lt, labels, _trusted=True)


def n_poset() -> Poset:
    """a, b, c, d with a < c and b < c, d."""
    return transitive_closure([(0, 2), (1, 2), (1, 3)], 4, labels="abcd")


def butterfly() -> Poset:
    """Two minimal elements a, b each below both maximal elements c, d."""
    P = series_compose([antichain(2), antichain(2)])
    return Poset(P.lt, list("abcd"), P.blocks, _trusted=True)


def stacked_butterfly(t: int) -> Poset:
    """Series composition of t two-element antichains."""
    if t < 1:
        raise ValueError("stack height must be at least 1")
    return series_compose([antichain(2)] * t)


def skewed_butterfly() -> Poset:
    """Chains x1<x2<x3 (indices 0..2) and y1<y2 (3, 4) with x1 < y2 and y1 < x3."""
    return transitive_closure(
        [(0, 1), (1, 2), (3, 4), (0, 4), (3, 2)], 5, labels=["x1", "x2", "x3", "y1", "y2"]
    )


# -- reservoir -----------------------------------------------------------------


@dataclass(frozen=True)
class ReservoirArtifact:
    """R_k together with its wall W_k and the order that makes First-Fit build it.

    ``meta`` records, for the top level of the recursion: ``m``; the index
    ranges of the blocks S_m, ..., S_0 and of the top copy of R_{k-1}
    (``blocks``, bottom to top); and ``x`` with ``x[i-1]`` the element
    index of x_i for i = 1..m+1.
    """

    k: int
    poset: Poset
    wall: ChainPartition
    order: tuple[int, ...]
    meta: dict = field(default_factory=dict)

    def to_json(self):
        from .poset import poset_to_json

        return {
            "poset": poset_to_json(self.poset),
            "wall": self.wall.to_json(),
            "order": list(self.order),
            "meta": {"family": "reservoir", "k": self.k, **self.meta},
        }


def _subwall_prefix(P: Poset, wall: ChainPartition, i: int):
    """Subposet of the first i chains of ``wall`` and the order presenting it chain by chain."""
    elems = sorted(x for c in wall.chains[:i] for x in c)
    pos = {old: new for new, old in enumerate(elems)}
    sel = np.array(elems, dtype=np.int64)
    sub = Poset(P.lt[np.ix_(sel, sel)], _trusted=True)
    order = [pos[x] for c in wall.chains[:i] for x in c]
    return sub, order


@lru_cache(maxsize=None)
def reservoir(k: int) -> ReservoirArtifact:
    """Build R_k recursively and run First-Fit on the prescribed order.

    Layout of element indices, bottom to top: the blocks S_m, ..., S_1
    (S_0 is empty), the top copy of R_{k-1}, then the chain X with
    x_{m+1} first.  x_i lies above S_i, ..., S_m and above x_{i+1}, and
    is incomparable to everything else in S (for i = m+1 that is all of S).
    """
    from .firstfit import first_fit

    if k < 1:
        raise ValueError("k must be at least 1")
    if k > RESERVOIR_CAP:
        raise CapExceeded(f"reservoir k={k} exceeds cap {RESERVOIR_CAP}")
    if k == 1:
        P = Poset(np.zeros((1, 1), dtype=np.bool_), ["r"], _trusted=True)
        return ReservoirArtifact(1, P, ChainPartition([[0]]), (0,), {"m": 0, "blocks": [], "x": []})

    prev = reservoir(k - 1)
    Rp, Wp = prev.poset, prev.wall
    m = len(Wp)
    # blocks S_m, ..., S_1, then R_{k-1}
    subs = [_subwall_prefix(Rp, Wp, i) for i in range(m, 0, -1)]
    parts = [s for s, _ in subs] + [Rp]
    S = series_compose(parts)
    nS = S.n
    n = nS + m + 1
    lt = np.zeros((n, n), dtype=np.bool_)
    lt[:nS, :nS] = S.lt
    blocks = list(S.blocks)
    # x_i has index nS + (m + 1 - i); block S_j is blocks[m - j]
    x_index = [nS + (m + 1 - i) for i in range(1, m + 2)]
    for i in range(1, m + 2):
        xi = x_index[i - 1]
        for j in range(i, m + 1):
            start, stop = blocks[m - j]
            lt[start:stop, xi] = True
        for i2 in range(i + 1, m + 2):
            lt[x_index[i2 - 1], xi] = True
    P = Poset(lt, _trusted=True)

    order = []
    for i in range(m, -1, -1):
        if i > 0:
            start, _ = blocks[m - i]
            order.extend(start + v for v in subs[m - i][1])
        order.append(x_index[i])  # x_{i+1}
    top_start, _ = blocks[m]
    order.extend(top_start + v for c in Wp.chains for v in c)

    result = first_fit(P, order)
    meta = {
        "m": m,
        "blocks": [list(b) for b in blocks],
        "block_names": [f"S{j}" for j in range(m, 0, -1)] + [f"R{k - 1}"],
        "x": x_index,
    }
    return ReservoirArtifact(k, P, result.chains, tuple(order), meta)


# -- projective plane and matchings --------------------------------------------


def is_prime(q: int) -> bool:
    if q < 2:
        return False
    if q % 2 == 0:
        return q == 2
    f = 3
    while f * f <= q:
        if q % f == 0:
            return False
        f += 2
    return True


def next_prime_leq(x: int) -> int:
    """Largest prime not exceeding x (x >= 2)."""
    x = int(x)
    if x < 2:
        raise ValueError("x must be at least 2")
    while not is_prime(x):
        x -= 1
    return x


@dataclass(frozen=True)
class BipartiteGraph:
    left: int
    right: int
    adj: tuple[tuple[int, ...], ...]

    @property
    def edges(self):
        return [(u, v) for u in range(self.left) for v in self.adj[u]]

    def degrees(self):
        left = [len(a) for a in self.adj]
        right = [0] * self.right
        for a in self.adj:
            for v in a:
                right[v] += 1
        return left, right

    def to_json(self):
        return {"left": self.left, "right": self.right, "edges": [list(e) for e in self.edges]}

    @classmethod
    def from_edges(cls, left, right, edges):
        adj = [[] for _ in range(left)]
        for u, v in edges:
            adj[u].append(v)
        return cls(left, right, tuple(tuple(sorted(set(a))) for a in adj))


def _normalized_triples(q):
    # first nonzero coordinate equal to 1, lexicographic order
    out = []
    for a in range(q):
        for b in range(q):
            for c in range(q):
                t = (a, b, c)
                lead = next((v for v in t if v), 0)
                if lead == 1:
                    out.append(t)
    return out


def projective_plane_graph(q: int) -> BipartiteGraph:
    """Point-line incidence graph of the projective plane over GF(q), q prime."""
    if not is_prime(q):
        raise NotPrime(f"{q} is not prime (prime powers are not supported)")
    pts = _normalized_triples(q)
    adj = []
    for p in pts:
        adj.append(tuple(j for j, l in enumerate(pts) if (p[0] * l[0] + p[1] * l[1] + p[2] * l[2]) % q == 0))
    return BipartiteGraph(len(pts), len(pts), tuple(adj))


def bipartite_perfect_matching(G: BipartiteGraph) -> list[tuple[int, int]]:
    """Perfect matching, left vertices in ascending order.  Each takes its
    first free neighbour when there is one and augments otherwise."""
    if G.left != G.right:
        raise NoPerfectMatching("sides have different sizes")
    match_right = [-1] * G.right

    def augment(u, seen):
        for v in G.adj[u]:
            if seen[v]:
                continue
            seen[v] = True
            if match_right[v] < 0 or augment(match_right[v], seen):
                match_right[v] = u
                return True
        return False

    for u in range(G.left):
        free = next((v for v in G.adj[u] if match_right[v] < 0), None)
        if free is not None:
            match_right[free] = u
            continue
        if not augment(u, [False] * G.right):
            raise NoPerfectMatching(f"left vertex {u} cannot be matched")
    match_left = [0] * G.left
    for v, u in enumerate(match_right):
        match_left[u] = v
    return [(u, match_left[u]) for u in range(G.left)]


def has_four_cycle(G: BipartiteGraph) -> bool:
    """True iff two left vertices share two right neighbours."""
    seen = set()
    for a in G.adj:
        for i, v in enumerate(a):
            for v2 in a[i + 1 :]:
                key = (v, v2) if v < v2 else (v2, v)
                if key in seen:
                    return True
                seen.add(key)
    return False


# -- butterfly lower bound -------------------------------------------------------


@dataclass(frozen=True)
class ButterflyArtifact:
    """B-free poset of width q^2+q+1 with a wall of (q+1)(q^2+q+1) chains.

    Elements: ``ix[e]`` is (x, e) for the e-th edge of G' (in edge order),
    ``mid[i]`` is the i-th matched edge, ``iy[e]`` is (y, e).
    ``dilworth`` is the natural width-many chain partition D_1..D_w.
    """

    q: int
    poset: Poset
    wall: ChainPartition
    order: tuple[int, ...]
    graph: BipartiteGraph
    matching: tuple[tuple[int, int], ...]
    edgeorder: tuple[tuple[int, int], ...]
    ix: tuple[int, ...]
    mid: tuple[int, ...]
    iy: tuple[int, ...]
    dilworth: ChainPartition

    def to_json(self):
        from .poset import poset_to_json

        return {
            "poset": poset_to_json(self.poset),
            "wall": self.wall.to_json(),
            "order": list(self.order),
            "meta": {
                "family": "butterfly-lb",
                "q": self.q,
                "graph": self.graph.to_json(),
                "matching": [list(e) for e in self.matching],
                "edgeorder": [list(e) for e in self.edgeorder],
                "dilworth": [list(c) for c in self.dilworth.chains],
            },
        }


@lru_cache(maxsize=None)
def butterfly_lower_bound(q: int) -> ButterflyArtifact:
    if not is_prime(q):
        raise NotPrime(f"{q} is not prime")
    if q > BUTTERFLY_Q_CAP:
        raise CapExceeded(f"q={q} exceeds cap {BUTTERFLY_Q_CAP}")
    G = projective_plane_graph(q)
    M = bipartite_perfect_matching(G)
    w = G.left
    matched = set(M)
    L = [e for e in G.edges if e not in matched]  # lexicographic
    E = len(L)
    ix = list(range(E))
    mid = list(range(E, E + w))
    iy = list(range(E + w, 2 * E + w))
    n = 2 * E + w
    labels = (
        [f"X{x}|{x}-{y}" for x, y in L]
        + [f"M{x}-{y}" for x, y in M]
        + [f"Y{y}|{x}-{y}" for x, y in L]
    )
    chain_x = {u: i for i, (u, _) in enumerate(M)}
    chain_y = {v: i for i, (_, v) in enumerate(M)}
    dil = [[] for _ in range(w)]
    for e, (x, _) in enumerate(L):
        dil[chain_x[x]].append(ix[e])
    for i in range(w):
        dil[i].append(mid[i])
    for e in reversed(range(E)):
        y = L[e][1]
        dil[chain_y[y]].append(iy[e])
    rel = []
    for c in dil:
        rel.extend(zip(c, c[1:]))
    rel.extend((ix[e], iy[e]) for e in range(E))
    P = transitive_closure(rel, n, labels=labels)
    wall = ChainPartition([[ix[e], iy[e]] for e in range(E)] + [[mid[i]] for i in range(w)])
    order = tuple(x for c in wall.chains for x in c)
    return ButterflyArtifact(
        q, P, wall, order, G, tuple(M), tuple(L), tuple(ix), tuple(mid), tuple(iy), ChainPartition(dil)
    )


def random_poset(n: int, p: float, rng) -> Poset:
    """Random order: a hidden random linear order, each forward pair kept
    with probability p, then closed."""
    perm = rng.permutation(n)
    keep = np.triu(rng.random((n, n)) < p, k=1)
    rel = np.zeros((n, n), dtype=np.uint8)
    rel[np.ix_(perm, perm)] = keep
    return Poset.from_matrix(rel)
