"""First-Fit simulation, walls, max-wall search, and the counting verifiers
behind the series-composition and butterfly upper bounds."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .errors import HypothesisFailed, NotAWall, NotBFree
from .poset import ChainPartition, Poset, dilworth_coloring, dilworth_partition, induced, width


@dataclass(frozen=True)
class FirstFitResult:
    color: tuple[int, ...]  # 1-based
    chains: ChainPartition
    trace: tuple | None = None

    def __len__(self):
        return len(self.chains)


def _as_order(P: Poset, order):
    arr = np.asarray(list(order), dtype=np.int64)
    if arr.shape != (P.n,) or (P.n and not np.array_equal(np.sort(arr), np.arange(P.n))):
        raise ValueError("presentation order must be a permutation of the elements")
    return np.ascontiguousarray(arr)


def first_fit(P: Poset, order, trace: bool = False, backend=None) -> FirstFitResult:
    """Present elements in ``order``; each goes to the first chain it extends."""
    impl = kernels if backend is None else kernels.get_backend(backend)
    arr = _as_order(P, order)
    color = np.zeros(P.n, dtype=np.int64)
    nchains = impl.first_fit(P.comp.view(np.uint8), arr, color)
    buckets = [[] for _ in range(nchains)]
    for x in arr:
        buckets[color[x] - 1].append(int(x))
    chains = ChainPartition(P.sort_chain(b) for b in buckets)
    steps = None
    if trace:
        steps = tuple(
            {"element": int(x), "color": int(color[x]), "rejected": list(range(1, int(color[x])))}
            for x in arr
        )
    return FirstFitResult(tuple(int(c) for c in color), chains, steps)


def wall_violation(P: Poset, cp: ChainPartition, backend=None):
    """First (element, earlier chain) pair breaking the blocking condition, or None."""
    impl = kernels if backend is None else kernels.get_backend(backend)
    if P.n == 0:
        return None
    chain_of = np.ascontiguousarray(cp.chain_of(P.n))
    x, i = impl.wall_violation(P.comp.view(np.uint8), chain_of, len(cp))
    if x < 0:
        return None
    return int(x), int(i)


def is_wall(P: Poset, cp: ChainPartition, backend=None) -> bool:
    """True iff every element of chain j has an incomparable element in each chain i < j."""
    return wall_violation(P, cp, backend) is None


def wall_to_order(P: Poset, wall: ChainPartition) -> list[int]:
    """Presentation order (chain by chain, each ascending) that makes First-Fit
    output exactly ``wall``."""
    bad = wall_violation(P, wall)
    if bad is not None:
        raise NotAWall(*bad)
    return [x for c in wall.chains for x in c]


def subwall(P: Poset, wall: ChainPartition, keep) -> tuple[Poset, ChainPartition]:
    """Keep the chains with indices in ``keep`` (original order), restricted to
    the subposet they cover.  Returns the subposet and the reindexed wall."""
    keep = sorted(set(keep))
    elems = [x for i in keep for x in wall.chains[i]]
    sub, idx = induced(P, elems)
    pos = {old: new for new, old in enumerate(idx)}
    return sub, ChainPartition([[pos[x] for x in wall.chains[i]] for i in keep])


def dilworth_wall(P: Poset) -> ChainPartition:
    """Turn a Dilworth partition into a wall by moving elements to earlier chains.

    Elements are scanned by chain index, then ascending within the chain; each
    moves to the earliest earlier chain it is comparable to entirely.
    Repeats until nothing moves.
    """
    chains = [list(c) for c in dilworth_partition(P).chains]
    comp = P.comp
    moved = True
    while moved:
        moved = False
        for j in range(len(chains)):
            for x in list(chains[j]):
                for i in range(j):
                    if chains[i] and comp[x, chains[i]].all():
                        chains[j].remove(x)
                        chains[i].append(x)
                        moved = True
                        break
        chains = [c for c in chains if c]
    return ChainPartition(P.sort_chain(c) for c in chains)


# -- max wall --------------------------------------------------------------------


@dataclass(frozen=True)
class MaxWallResult:
    wall: ChainPartition
    size: int
    exact: bool
    expansions: int


def max_wall(P: Poset, budget: int = 2_000_000, seed: int = 0, restarts: int = 64) -> MaxWallResult:
    """Largest wall of P.

    Exact search runs First-Fit over presentation orders depth first,
    memoizing partial chain partitions (First-Fit's future only depends on
    the current chains) and pruning when chains-so-far plus elements left
    cannot beat the incumbent.  If ``budget`` expansions run out the best
    wall found by the search and by randomized local search is returned
    with ``exact=False``.
    """
    n = P.n
    if n == 0:
        return MaxWallResult(ChainPartition([]), 0, True, 0)
    comp = P.comp
    comp_mask = [sum(1 << j for j in np.flatnonzero(comp[i])) for i in range(n)]
    full = (1 << n) - 1

    best_chains, _, _ = _heuristic_wall(P, seed, restarts)
    best = [len(best_chains), best_chains]
    expansions = 0
    seen = set()
    # chains are bitmasks; each chain stores the AND of its members' comparability masks
    stack = [((), (), 0)]
    exhausted = False
    while stack:
        chains, compat, presented = stack.pop()
        remaining = n - presented.bit_count()
        if len(chains) + remaining <= best[0]:
            continue
        if presented == full:
            best[0], best[1] = len(chains), chains
            continue
        key = chains
        if key in seen:
            continue
        seen.add(key)
        expansions += 1
        if expansions > budget:
            exhausted = True
            break
        rest = full & ~presented
        x_iter = rest
        children = []
        while x_iter:
            low = x_iter & -x_iter
            x = low.bit_length() - 1
            x_iter ^= low
            for ci, cm in enumerate(compat):
                if cm >> x & 1:
                    new_chains = chains[:ci] + (chains[ci] | low,) + chains[ci + 1 :]
                    new_compat = compat[:ci] + (cm & comp_mask[x],) + compat[ci + 1 :]
                    break
            else:
                new_chains = chains + (low,)
                new_compat = compat + (comp_mask[x],)
            children.append((new_chains, new_compat, presented | low))
        # explore chain-creating moves first
        children.sort(key=lambda c: len(c[0]))
        stack.extend(children)

    wall = best[1]
    if not isinstance(wall, ChainPartition):
        wall = ChainPartition(P.sort_chain(_bits(c)) for c in wall)
    return MaxWallResult(wall, len(wall), not exhausted, expansions)


def _bits(mask):
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def _heuristic_wall(P: Poset, seed: int, restarts: int):
    """Best wall over random First-Fit runs, each improved by chain-splitting moves."""
    rng = np.random.default_rng(seed)
    best = None
    for _ in range(max(1, restarts)):
        order = rng.permutation(P.n)
        wall = first_fit(P, order).chains
        wall = _split_moves(P, wall)
        if best is None or len(wall) > len(best):
            best = wall
    return best, len(best), False


def _split_moves(P: Poset, wall: ChainPartition) -> ChainPartition:
    """Move single elements into a new final chain while the result stays a wall."""
    improved = True
    while improved:
        improved = False
        for ci, c in enumerate(wall.chains):
            if len(c) < 2:
                continue
            for x in c:
                rest = [y for y in c if y != x]
                cand = ChainPartition(
                    list(wall.chains[:ci]) + [rest] + list(wall.chains[ci + 1 :]) + [[x]]
                )
                if is_wall(P, cand):
                    wall = cand
                    improved = True
                    break
            if improved:
                break
    return wall


# -- C-height / C-depth -------------------------------------------------------------


def c_levels(P: Poset, cp: ChainPartition):
    """C-height and C-depth of every element.

    h(x) is the longest chain x = u1 > u2 > ... with each u in a strictly
    later chain of ``cp`` than the one before; d(x) likewise ascending.
    """
    chain_of = cp.chain_of(P.n)
    h = np.ones(P.n, dtype=np.int64)
    d = np.ones(P.n, dtype=np.int64)
    for ci in range(len(cp) - 1, -1, -1):
        later = chain_of > ci
        for x in cp.chains[ci]:
            below = later & P.lt[:, x]
            if below.any():
                h[x] = h[below].max() + 1
            above = later & P.lt[x]
            if above.any():
                d[x] = d[above].max() + 1
    return h, d


def c_height(P: Poset, cp: ChainPartition, x: int) -> int:
    return int(c_levels(P, cp)[0][x])


def c_depth(P: Poset, cp: ChainPartition, x: int) -> int:
    return int(c_levels(P, cp)[1][x])


# -- series-composition counting ------------------------------------------------------


@dataclass(frozen=True)
class WallAnalysis:
    s: int
    t: int
    w: int
    wall_size: int
    hvals: tuple[int, ...]
    dvals: tuple[int, ...]
    lower: frozenset
    upper: frozenset
    cl: tuple[int, ...]
    cu: tuple[int, ...]
    clu: tuple[int, ...]
    signatures: dict
    checks: dict = field(default_factory=dict)

    @property
    def bound(self):
        return self.s * self.t * self.w**2 + (self.s + self.t) * self.w

    @property
    def ok(self):
        return all(self.checks.values())


def analyze_series_wall(P: Poset, wall: ChainPartition, s: int, t: int, coloring=None) -> WallAnalysis:
    """Split the wall into lower/upper/mixed chains and check the three counts.

    L = {x : h(x) <= s}, U the rest; every x in U must have d(x) <= t, else
    HypothesisFailed.  Records in ``checks``: |C_U| <= t*w, |C_L| <= s*w,
    mixed-chain signatures pairwise distinct, |C_LU| <= s*t*w^2, and the
    total |wall| <= stw^2 + (s+t)w, plus the antichain property of chain
    minima (maxima) grouped by depth (height) that drives the first two.
    """
    bad = wall_violation(P, wall)
    if bad is not None:
        raise NotAWall(*bad)
    h, d = c_levels(P, wall)
    for x in range(P.n):
        if h[x] > s and d[x] > t:
            raise HypothesisFailed(x, int(h[x]), int(d[x]))
    w = width(P)
    coloring = coloring or dilworth_coloring(P)
    phi = coloring.color
    lower = frozenset(int(x) for x in np.flatnonzero(h <= s))
    upper = frozenset(range(P.n)) - lower
    cl, cu, clu = [], [], []
    signatures = {}
    for ci, c in enumerate(wall.chains):
        inl = [x for x in c if x in lower]
        if len(inl) == len(c):
            cl.append(ci)
        elif not inl:
            cu.append(ci)
        else:
            clu.append(ci)
            y = inl[-1]
            z = next(x for x in c if x in upper)
            signatures[ci] = (phi[y], int(h[y]), phi[z], int(d[z]))

    def antichain_groups(indices, pick, level):
        groups = {}
        for ci in indices:
            e = pick(wall.chains[ci])
            groups.setdefault(int(level[e]), []).append(e)
        return all(P.is_antichain(g) for g in groups.values())

    lower_below_upper = all(
        all(P.lt[a, b] for a in c if a in lower for b in c if b in upper) for c in wall.chains
    )
    checks = {
        "upper_count": len(cu) <= t * w,
        "lower_count": len(cl) <= s * w,
        "upper_minima_antichains": antichain_groups(cu, lambda c: c[0], d),
        "lower_maxima_antichains": antichain_groups(cl, lambda c: c[-1], h),
        "mixed_split": lower_below_upper,
        "signatures_distinct": len(set(signatures.values())) == len(signatures),
        "mixed_count": len(clu) <= s * t * w * w,
        "total": len(wall) <= s * t * w * w + (s + t) * w,
    }
    return WallAnalysis(
        s, t, w, len(wall),
        tuple(int(v) for v in h), tuple(int(v) for v in d),
        lower, upper, tuple(cl), tuple(cu), tuple(clu), signatures, checks,
    )


def minimal_series_params(P: Poset, wall: ChainPartition):
    """Feasible (s, t) minimizing stw^2 + (s+t)w for this wall (ties: smaller s)."""
    h, d = c_levels(P, wall)
    w = width(P)
    best = None
    top = int(h.max()) if P.n else 0
    for s in range(0, top + 1):
        over = d[h > s]
        t = int(over.max()) if over.size else 0
        val = s * t * w * w + (s + t) * w
        if best is None or val < best[0]:
            best = (val, s, t)
    return best[1], best[2]


def analyze_series_wall_auto(P: Poset, wall: ChainPartition) -> WallAnalysis:
    s, t = minimal_series_params(P, wall)
    return analyze_series_wall(P, wall, s, t)


# -- butterfly counting ---------------------------------------------------------------


@dataclass(frozen=True)
class ButterflyWallAnalysis:
    w: int
    wall_size: int
    rset: frozenset
    cprime: tuple[int, ...]
    sigpairs: dict
    siggraph: frozenset
    checks: dict = field(default_factory=dict)

    @property
    def ok(self):
        return all(self.checks.values())


def _incomparable_pair(P: Poset, elems):
    idx = np.asarray(sorted(elems), dtype=np.int64)
    if idx.size < 2:
        return None
    sub = P.incomp[np.ix_(idx, idx)]
    if not sub.any():
        return None
    i, j = np.argwhere(sub)[0]
    return int(idx[i]), int(idx[j])


def signature_graph_has_c4(edges) -> bool:
    """True iff the bipartite graph given by (left, right) pairs has a 4-cycle."""
    by_left = {}
    for a, g in edges:
        by_left.setdefault(a, set()).add(g)
    seen = set()
    for nbrs in by_left.values():
        nb = sorted(nbrs)
        for i in range(len(nb)):
            for j in range(i + 1, len(nb)):
                if (nb[i], nb[j]) in seen:
                    return True
                seen.add((nb[i], nb[j]))
    return False


def analyze_butterfly_wall(P: Poset, wall: ChainPartition, dilworth: ChainPartition | None = None):
    """Check the butterfly upper-bound argument on a concrete wall.

    R holds the elements whose above set is a chain; every other element
    must have a chain as below set (otherwise a butterfly is returned via
    NotBFree).  C' holds the wall chains that avoid the extremal points of
    every Dilworth chain yet meet at least two Dilworth chains.  Recorded
    checks: C∩R and C∩R' each inside one Dilworth chain, signatures
    distinct, signature graph free of 4-cycles, |wall| <= |C'| + 3w.
    """
    bad = wall_violation(P, wall)
    if bad is not None:
        raise NotAWall(*bad)
    if dilworth is None:
        dilworth = dilworth_wall(P)
    w = len(dilworth)
    dil_of = dilworth.chain_of(P.n)
    rset = set()
    for x in range(P.n):
        up = np.flatnonzero(P.lt[x])
        pair_up = _incomparable_pair(P, up)
        if pair_up is None:
            rset.add(x)
            continue
        pair_down = _incomparable_pair(P, np.flatnonzero(P.lt[:, x]))
        if pair_down is not None:
            raise NotBFree(pair_down + pair_up)
    extremal = {c[0] for c in dilworth.chains} | {c[-1] for c in dilworth.chains}
    cprime = []
    sigpairs = {}
    single_r = single_rp = True
    for ci, c in enumerate(wall.chains):
        if any(x in extremal for x in c):
            continue
        if len({int(dil_of[x]) for x in c}) < 2:
            continue
        cprime.append(ci)
        r_chains = {int(dil_of[x]) for x in c if x in rset}
        rp_chains = {int(dil_of[x]) for x in c if x not in rset}
        single_r &= len(r_chains) == 1
        single_rp &= len(rp_chains) == 1
        if len(r_chains) == 1 and len(rp_chains) == 1:
            sigpairs[ci] = (r_chains.pop(), rp_chains.pop())
    siggraph = frozenset(sigpairs.values())
    checks = {
        "r_part_single_chain": single_r,
        "rprime_part_single_chain": single_rp,
        "signatures_distinct": len(siggraph) == len(sigpairs) == len(cprime),
        "siggraph_c4_free": not signature_graph_has_c4(siggraph),
        "wall_bound": len(wall) <= len(cprime) + 3 * w,
    }
    return ButterflyWallAnalysis(w, len(wall), frozenset(rset), tuple(cprime), sigpairs, siggraph, checks)
