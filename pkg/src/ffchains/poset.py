"""Finite posets stored as dense strict-order matrices, plus the classical
structure algorithms: closure, width, height, Dilworth partitions,
composition, induced subposets and subposet containment."""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

import numpy as np

from . import kernels
from .errors import BudgetExceeded, CapExceeded, CycleError

MAX_ELEMENTS = 4096
ENUMERATE_CAP = 6
DEFAULT_BUDGET = 10_000_000


class Poset:
    """A finite strict partial order on ``range(n)``.

    ``lt[i, j]`` is true iff element i is strictly below element j.  The
    matrix is transitively closed and read-only; build instances through
    :func:`transitive_closure`, :meth:`from_matrix` or the generators in
    :mod:`ffchains.constructions`.

    ``blocks`` is optional metadata: ``(start, stop)`` index ranges of the
    parts when the poset came out of :func:`series_compose`.
    """

    __slots__ = ("n", "lt", "labels", "blocks", "_cache")

    def __init__(self, lt, labels=None, blocks=None, *, _trusted=False):
        lt = np.array(lt, dtype=np.bool_, copy=not _trusted, order="C")
        if lt.ndim != 2 or lt.shape[0] != lt.shape[1]:
            raise ValueError("order matrix must be square")
        n = lt.shape[0]
        if n > MAX_ELEMENTS:
            raise CapExceeded(f"{n} elements exceeds the cap of {MAX_ELEMENTS}")
        if not _trusted:
            _check_order(lt)
        lt.setflags(write=False)
        self.n = n
        self.lt = lt
        self.labels = tuple(labels) if labels is not None else None
        if self.labels is not None and len(self.labels) != n:
            raise ValueError("label count does not match element count")
        self.blocks = tuple(blocks) if blocks is not None else None
        self._cache = {}

    @classmethod
    def from_matrix(cls, rel, labels=None, blocks=None):
        """Close an arbitrary relation matrix and wrap it; raises CycleError."""
        m = np.array(rel, dtype=np.uint8, order="C")
        kernels.close_inplace(m)
        _raise_on_cycle(m, rel)
        return cls(m.view(np.bool_), labels, blocks, _trusted=True)

    def __len__(self):
        return self.n

    def __eq__(self, other):
        if not isinstance(other, Poset):
            return NotImplemented
        return self.n == other.n and np.array_equal(self.lt, other.lt)

    def __hash__(self):
        return hash((self.n, self.lt.tobytes()))

    def __repr__(self):
        return f"Poset(n={self.n}, relations={int(self.lt.sum())})"

    def label(self, i):
        return self.labels[i] if self.labels is not None else str(i)

    def less(self, i, j):
        return bool(self.lt[i, j])

    def leq(self, i, j):
        return i == j or bool(self.lt[i, j])

    def comparable(self, i, j):
        return i == j or bool(self.lt[i, j] or self.lt[j, i])

    def incomparable(self, i, j):
        return not self.comparable(i, j)

    @property
    def comp(self):
        """Strict comparability matrix (``lt | lt.T``), cached."""
        c = self._cache.get("comp")
        if c is None:
            c = self.lt | self.lt.T
            c.setflags(write=False)
            self._cache["comp"] = c
        return c

    @property
    def incomp(self):
        """Incomparability matrix with a false diagonal, cached."""
        c = self._cache.get("incomp")
        if c is None:
            c = ~self.comp
            np.fill_diagonal(c, False)
            c.setflags(write=False)
            self._cache["incomp"] = c
        return c

    def pairs(self):
        """All strict relations as sorted ``(i, j)`` pairs."""
        return [(int(i), int(j)) for i, j in zip(*np.nonzero(self.lt))]

    def is_chain(self, elements):
        idx = np.fromiter(elements, dtype=np.int64)
        return not self.incomp[np.ix_(idx, idx)].any()

    def is_antichain(self, elements):
        idx = np.fromiter(elements, dtype=np.int64)
        return not self.lt[np.ix_(idx, idx)].any()

    def sort_chain(self, elements):
        """Sort the elements of a chain ascending (by below-set size)."""
        below = self.below_counts()
        return sorted(elements, key=lambda e: (below[e], e))

    def below_counts(self):
        return self.lt.sum(axis=0)

    def above_counts(self):
        return self.lt.sum(axis=1)

    def linear_extension(self):
        """A linear extension: elements sorted by below-set size, ties by index."""
        return [int(i) for i in np.argsort(self.below_counts(), kind="stable")]

    def to_json(self):
        return poset_to_json(self)


def _check_order(lt):
    if lt.diagonal().any():
        i = int(np.flatnonzero(lt.diagonal())[0])
        raise CycleError((i, i), f"element {i} is below itself")
    both = lt & lt.T
    if both.any():
        i, j = (int(v) for v in np.argwhere(both)[0])
        raise CycleError((i, j), f"{i} < {j} and {j} < {i}")
    # lt∘lt must be contained in lt
    lt32 = lt.astype(np.float32)
    if ((lt32 @ lt32 > 0) & ~lt).any():
        raise ValueError("order matrix is not transitively closed")


def _raise_on_cycle(closed, original_pairs):
    diag = closed.diagonal()
    if not diag.any():
        return
    bad = set(np.flatnonzero(diag).tolist())
    if isinstance(original_pairs, np.ndarray):
        candidates = [tuple(map(int, p)) for p in np.argwhere(original_pairs)]
    else:
        candidates = list(original_pairs)
    for i, j in candidates:
        if i in bad and j in bad:
            raise CycleError((i, j))
    raise CycleError((min(bad), min(bad)))


# -- construction ------------------------------------------------------------


def transitive_closure(relations: Iterable[tuple[int, int]], n: int, labels=None) -> Poset:
    """Smallest strict order on ``range(n)`` containing every pair ``(i, j)``."""
    if n > MAX_ELEMENTS:
        raise CapExceeded(f"{n} elements exceeds the cap of {MAX_ELEMENTS}")
    pairs = [(int(i), int(j)) for i, j in relations]
    m = np.zeros((n, n), dtype=np.uint8)
    for i, j in pairs:
        if not (0 <= i < n and 0 <= j < n):
            raise IndexError(f"pair ({i}, {j}) out of range for n={n}")
        if i == j:
            raise CycleError((i, j), f"element {i} is below itself")
        m[i, j] = 1
    kernels.close_inplace(m)
    _raise_on_cycle(m, pairs)
    return Poset(m.view(np.bool_), labels, _trusted=True)


def empty() -> Poset:
    return Poset(np.zeros((0, 0), dtype=np.bool_), _trusted=True)


# -- width, height, Dilworth --------------------------------------------------


@dataclass(frozen=True)
class ChainPartition:
    """An ordered list of disjoint nonempty chains covering a poset."""

    chains: tuple[tuple[int, ...], ...]

    def __init__(self, chains):
        object.__setattr__(self, "chains", tuple(tuple(int(x) for x in c) for c in chains))

    def __len__(self):
        return len(self.chains)

    def __iter__(self):
        return iter(self.chains)

    def __getitem__(self, i):
        return self.chains[i]

    def chain_of(self, n=None):
        """Array mapping each element to its (0-based) chain index."""
        if n is None:
            n = sum(len(c) for c in self.chains)
        out = np.full(n, -1, dtype=np.int64)
        for ci, c in enumerate(self.chains):
            out[list(c)] = ci
        return out

    def validate(self, P: Poset):
        """Raise ValueError unless this is a chain partition of P with sorted chains."""
        seen = set()
        for c in self.chains:
            if not c:
                raise ValueError("empty chain")
            for x in c:
                if not 0 <= x < P.n:
                    raise ValueError(f"element {x} out of range")
                if x in seen:
                    raise ValueError(f"element {x} appears twice")
                seen.add(x)
            for a, b in zip(c, c[1:]):
                if not P.lt[a, b]:
                    raise ValueError(f"chain {c} is not ascending at ({a}, {b})")
        if len(seen) != P.n:
            raise ValueError("chains do not cover the poset")

    def to_json(self):
        return {"chains": [list(c) for c in self.chains]}

    @classmethod
    def from_json(cls, obj):
        return cls(obj["chains"])


def _matching(P: Poset):
    """Maximum matching in the split graph (left i -> right j iff i < j)."""
    out = np.full(P.n, -1, dtype=np.int64)
    if P.n:
        kernels.bipartite_matching(P.lt.view(np.uint8), out)
    return out


def width(P: Poset) -> int:
    """Size of a maximum antichain, via a minimum chain cover."""
    if P.n == 0:
        return 0
    return P.n - int((_matching(P) >= 0).sum())


def dilworth_partition(P: Poset) -> ChainPartition:
    """A chain partition of minimum size (= width), chains listed by their
    minimum element index."""
    if P.n == 0:
        return ChainPartition([])
    succ = _matching(P)
    has_pred = np.zeros(P.n, dtype=np.bool_)
    has_pred[succ[succ >= 0]] = True
    chains = []
    for start in range(P.n):
        if has_pred[start]:
            continue
        chain = [start]
        x = start
        while succ[x] >= 0:
            x = int(succ[x])
            chain.append(x)
        chains.append(chain)
    return ChainPartition(chains)


@dataclass(frozen=True)
class DilworthColoring:
    """1-based coloring whose classes are the chains of a Dilworth partition."""

    color: tuple[int, ...]
    w: int


def dilworth_coloring(P: Poset, partition: ChainPartition | None = None) -> DilworthColoring:
    if partition is None:
        partition = dilworth_partition(P)
    color = [0] * P.n
    for ci, c in enumerate(partition.chains, start=1):
        for x in c:
            color[x] = ci
    return DilworthColoring(tuple(color), len(partition))


def height_levels(P: Poset):
    """Per-element (longest chain ending at x, longest chain starting at x)."""
    up = P._cache.get("levels")
    if up is not None:
        return up
    order = P.linear_extension()
    h = np.ones(P.n, dtype=np.int64)
    d = np.ones(P.n, dtype=np.int64)
    for x in order:
        below = P.lt[:, x]
        if below.any():
            h[x] = h[below].max() + 1
    for x in reversed(order):
        above = P.lt[x]
        if above.any():
            d[x] = d[above].max() + 1
    P._cache["levels"] = (h, d)
    return h, d


def height(P: Poset) -> int:
    """Size of a maximum chain."""
    if P.n == 0:
        return 0
    return int(height_levels(P)[0].max())


# -- composition and restriction ---------------------------------------------


def _concat_labels(parts):
    if all(p.labels is None for p in parts):
        return None
    out = []
    for k, p in enumerate(parts):
        out.extend(p.labels if p.labels is not None else (f"{k}.{i}" for i in range(p.n)))
    return out


def series_compose(parts: Sequence[Poset]) -> Poset:
    """Stack the parts so every element of an earlier part lies below every
    element of a later one."""
    parts = list(parts)
    if len(parts) == 1:
        return parts[0]
    n = sum(p.n for p in parts)
    if n > MAX_ELEMENTS:
        raise CapExceeded(f"{n} elements exceeds the cap of {MAX_ELEMENTS}")
    lt = np.zeros((n, n), dtype=np.bool_)
    blocks = []
    start = 0
    for p in parts:
        stop = start + p.n
        lt[start:stop, start:stop] = p.lt
        lt[start:stop, stop:] = True
        blocks.append((start, stop))
        start = stop
    return Poset(lt, _concat_labels(parts), blocks, _trusted=True)


def disjoint_union(P: Poset, Q: Poset) -> Poset:
    n = P.n + Q.n
    lt = np.zeros((n, n), dtype=np.bool_)
    lt[: P.n, : P.n] = P.lt
    lt[P.n :, P.n :] = Q.lt
    return Poset(lt, _concat_labels([P, Q]), _trusted=True)


def induced(P: Poset, subset: Iterable[int]) -> tuple[Poset, list[int]]:
    """Restrict P to ``subset``.  Returns the subposet and the list mapping
    new indices to old ones (ascending)."""
    idx = sorted({int(x) for x in subset})
    for x in idx:
        if not 0 <= x < P.n:
            raise IndexError(f"element {x} out of range")
    sel = np.array(idx, dtype=np.int64)
    lt = P.lt[np.ix_(sel, sel)]
    labels = [P.labels[i] for i in idx] if P.labels is not None else None
    return Poset(lt, labels, _trusted=True), idx


def relabel(P: Poset, perm: Sequence[int]) -> Poset:
    """Poset on the same elements where old element ``perm[i]`` becomes ``i``."""
    sel = np.asarray(perm, dtype=np.int64)
    labels = [P.labels[i] for i in perm] if P.labels is not None else None
    return Poset(P.lt[np.ix_(sel, sel)], labels, _trusted=True)


# -- above / below sets -------------------------------------------------------


def above_set(P: Poset, x) -> frozenset:
    """A(x) = {y : x < y}; for an iterable x, the union over its members."""
    if isinstance(x, (int, np.integer)):
        return frozenset(np.flatnonzero(P.lt[x]).tolist())
    rows = list(x)
    if not rows:
        return frozenset()
    return frozenset(np.flatnonzero(P.lt[rows].any(axis=0)).tolist())


def below_set(P: Poset, x) -> frozenset:
    """B(x) = {y : y < x}; for an iterable x, the union over its members."""
    if isinstance(x, (int, np.integer)):
        return frozenset(np.flatnonzero(P.lt[:, x]).tolist())
    cols = list(x)
    if not cols:
        return frozenset()
    return frozenset(np.flatnonzero(P.lt[:, cols].any(axis=1)).tolist())


def closed_above_set(P: Poset, x) -> frozenset:
    extra = {int(x)} if isinstance(x, (int, np.integer)) else set(x)
    return above_set(P, x) | extra


def closed_below_set(P: Poset, x) -> frozenset:
    extra = {int(x)} if isinstance(x, (int, np.integer)) else set(x)
    return below_set(P, x) | extra


def cover_relations(P: Poset) -> list[tuple[int, int]]:
    """Transitive reduction: pairs (i, j) with i < j and nothing strictly between."""
    if P.n == 0:
        return []
    lt32 = P.lt.astype(np.float32)
    between = (lt32 @ lt32) > 0
    cov = P.lt & ~between
    return [(int(i), int(j)) for i, j in zip(*np.nonzero(cov))]


# -- containment ---------------------------------------------------------------


@dataclass(frozen=True)
class Embedding:
    """``map[q]`` is the host element playing the role of pattern element q."""

    map: tuple[int, ...]

    def __init__(self, mapping):
        object.__setattr__(self, "map", tuple(int(v) for v in mapping))

    def verify(self, Q: Poset, P: Poset) -> bool:
        """True iff the map is injective, order-preserving and order-reflecting."""
        if len(self.map) != Q.n or len(set(self.map)) != Q.n:
            return False
        if any(not 0 <= v < P.n for v in self.map):
            return False
        if Q.n == 0:
            return True
        sel = np.array(self.map, dtype=np.int64)
        return bool(np.array_equal(P.lt[np.ix_(sel, sel)], Q.lt))


def _candidate_mask(P: Poset, Q: Poset):
    hp, dp = height_levels(P)
    hq, dq = height_levels(Q)
    bp, ap = P.below_counts(), P.above_counts()
    bq, aq = Q.below_counts(), Q.above_counts()
    mask = (
        (bq[:, None] <= bp[None, :])
        & (aq[:, None] <= ap[None, :])
        & (hq[:, None] <= hp[None, :])
        & (dq[:, None] <= dp[None, :])
    )
    return np.ascontiguousarray(mask, dtype=np.uint8)


def contains_subposet(P: Poset, Q: Poset, budget: int = DEFAULT_BUDGET, backend=None):
    """Find an embedding of Q into P, or return None if there is none.

    Exhaustive backtracking with pattern elements placed along a linear
    extension of Q and host candidates filtered by below/above-set sizes and
    by longest chains through each element.  Raises BudgetExceeded when more
    than ``budget`` candidate placements are tried.
    """
    if Q.n == 0:
        return Embedding(())
    if Q.n > P.n:
        return None
    impl = kernels if backend is None else kernels.get_backend(backend)
    cand = _candidate_mask(P, Q)
    if not cand.any(axis=1).all():
        return None
    qorder = np.array(Q.linear_extension(), dtype=np.int64)
    out = np.full(Q.n, -1, dtype=np.int64)
    status = impl.embed_search(
        P.lt.view(np.uint8), np.ascontiguousarray(Q.lt).view(np.uint8), qorder, cand, int(budget), out
    )
    if status == -1:
        raise BudgetExceeded(f"containment search exceeded {budget} expansions")
    if status == 0:
        return None
    return Embedding(out.tolist())


def find_butterfly(P: Poset):
    """Return (a, b, c, d) with {a, b} < {c, d} both incomparable pairs, or None.

    Scans incomparable pairs (a, b) and looks for an incomparable pair in
    their common upper set.
    """
    inc = P.incomp
    for a in range(P.n):
        partners = np.flatnonzero(inc[a, a + 1 :]) + a + 1
        if partners.size == 0:
            continue
        up_a = P.lt[a]
        if up_a.sum() < 2:
            continue
        for b in partners:
            common = np.flatnonzero(up_a & P.lt[b])
            if common.size < 2:
                continue
            sub = inc[np.ix_(common, common)]
            if sub.any():
                i, j = np.argwhere(sub)[0]
                return int(a), int(b), int(common[i]), int(common[j])
    return None


# -- enumeration ---------------------------------------------------------------


def enumerate_posets(n: int, cap: int = ENUMERATE_CAP) -> Iterator[Poset]:
    """Yield every labeled poset on ``range(n)`` exactly once.

    Each poset on n elements restricts uniquely to one on the first n-1, so
    we extend recursively: the new top-index element gets a down-set D and
    an up-set U of the smaller poset with D entirely below U.
    """
    if n > cap:
        raise CapExceeded(f"enumeration of {n}-element posets exceeds cap {cap}")
    if n < 0:
        raise ValueError("n must be nonnegative")
    for rel in _enumerate_masks(n):
        m = np.zeros((n, n), dtype=np.bool_)
        for i in range(n):
            row = rel[i]
            for j in range(n):
                if row >> j & 1:
                    m[i, j] = True
        yield Poset(m, _trusted=True)


def _enumerate_masks(n):
    # each poset is a tuple of above-set bitmasks
    if n == 0:
        yield ()
        return
    k = n - 1
    full = (1 << k) - 1
    for prev in _enumerate_masks(k):
        below = [0] * k
        for i in range(k):
            for j in range(k):
                if prev[i] >> j & 1:
                    below[j] |= 1 << i
        downsets = [s for s in range(full + 1) if _closed(s, below)]
        upsets = [s for s in range(full + 1) if _closed(s, prev)]
        for D in downsets:
            # every element of D must lie below every element of U
            common_up = full
            for i in range(k):
                if D >> i & 1:
                    common_up &= prev[i]
            for U in upsets:
                if U & ~common_up & full:
                    continue
                rows = list(prev)
                for i in range(k):
                    if D >> i & 1:
                        rows[i] |= 1 << k
                yield tuple(rows) + (U,)


def _closed(s, rel):
    """True iff bitmask s is closed under the relation given by ``rel`` rows."""
    x = s
    while x:
        low = x & -x
        i = low.bit_length() - 1
        if rel[i] & ~s:
            return False
        x ^= low
    return True


# -- serialization --------------------------------------------------------------


def poset_to_json(P: Poset) -> dict:
    obj = {"n": P.n}
    if P.labels is not None:
        obj["labels"] = list(P.labels)
    obj["relations"] = [list(p) for p in cover_relations(P)]
    return obj


def poset_from_json(obj: dict) -> Poset:
    """Load the ``{"n", "labels"?, "relations"}`` format, closing the relations."""
    if not isinstance(obj, dict) or "n" not in obj:
        raise ValueError("poset JSON needs an 'n' field")
    n = obj["n"]
    if not isinstance(n, int) or n < 0:
        raise ValueError("'n' must be a nonnegative integer")
    rels = obj.get("relations", [])
    for r in rels:
        if not (isinstance(r, (list, tuple)) and len(r) == 2):
            raise ValueError(f"bad relation entry {r!r}")
    return transitive_closure([tuple(r) for r in rels], n, labels=obj.get("labels"))


def dumps(obj) -> str:
    return json.dumps(obj, separators=(",", ":"), sort_keys=False) + "\n"


def to_dot(P: Poset, name: str = "poset") -> str:
    """Hasse diagram in Graphviz DOT; edges point from lower to upper element."""
    lines = [f"digraph {name} {{", "  rankdir=BT;", "  node [shape=circle];"]
    for i in range(P.n):
        lines.append(f'  {i} [label="{P.label(i)}"];')
    for i, j in cover_relations(P):
        lines.append(f"  {i} -> {j};")
    lines.append("}")
    return "\n".join(lines) + "\n"
