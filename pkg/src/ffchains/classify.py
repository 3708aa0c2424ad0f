"""Membership in the family Q (series compositions of ladder-like posets),
ladder embeddings, reservoir containment and dichotomy verdicts.

The decision rule used by :func:`in_family_Q` is: Q is in the family iff
every block of its finest series decomposition is ladder-like.

* If every finest block is ladder-like, Q is their series composition, so
  Q is in the family by closure.
* Conversely, take any decomposition witnessing membership, i.e. a series
  composition of ladder-like parts.  Every finest block is series
  indecomposable, so it lies inside a single part, and an induced subposet
  of a ladder-like poset is ladder-like (restrict both chains).

:func:`in_family_Q_oracle` checks the same thing straight from the
inductive definition, without using the finest decomposition.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from . import bounds
from .constructions import reservoir
from .errors import BudgetExceeded, CapExceeded, InconsistentOrder, NotLadderLike, WidthOutOfScope
from .poset import DEFAULT_BUDGET, Embedding, Poset, contains_subposet, induced, width

LADDER_LIKE_MAX = 24
ORACLE_CAP = 12


def is_ladder_like(Q: Poset):
    """Return chains (C1, C2), each ascending, such that every comparable
    cross pair (x in C1, y in C2) has x < y; None if no such split exists.
    Either chain may be empty."""
    if Q.n > LADDER_LIKE_MAX:
        raise BudgetExceeded(f"ladder-like search is limited to {LADDER_LIKE_MAX} elements")
    order = Q.linear_extension()
    lt = Q.lt
    comp = Q.comp
    side = {}
    members = ([], [])

    def fits(x, s):
        own, other = members[s], members[1 - s]
        if own and not comp[x, own].all():
            return False
        # cross pairs must point from C1 up to C2
        if s == 0:
            return not lt[other, x].any() if other else True
        return not lt[x, other].any() if other else True

    def place(k):
        if k == len(order):
            return True
        x = order[k]
        for s in (0, 1):
            if fits(x, s):
                members[s].append(x)
                side[x] = s
                if place(k + 1):
                    return True
                members[s].pop()
                del side[x]
        return False

    if not place(0):
        return None
    return tuple(members[0]), tuple(members[1])


def _check_ladder_witness(Q: Poset, c1, c2):
    if sorted(list(c1) + list(c2)) != list(range(Q.n)):
        return False
    if not (Q.is_chain(c1) and Q.is_chain(c2)):
        return False
    return not any(Q.lt[y, x] for x in c1 for y in c2)


def embed_into_ladder(Q: Poset, witness=None) -> Embedding:
    """Embed a ladder-like Q into ladder(|Q|), C1 onto the x-chain and C2 onto the y-chain.

    Each d in C2 is slotted into C1 right after the k(d)-th element, where
    k(d) counts the C1 elements below d; k is nondecreasing along C2.  The
    rank of an element in the merged sequence is its ladder position, so
    c < d exactly when rank(c) <= rank(d).
    """
    if witness is None:
        witness = is_ladder_like(Q)
        if witness is None:
            raise NotLadderLike("poset has no ladder-like chain partition")
    c1, c2 = (list(Q.sort_chain(c)) for c in witness)
    if not _check_ladder_witness(Q, c1, c2):
        raise NotLadderLike("supplied chains do not witness the ladder-like condition")
    n = Q.n
    members = np.asarray(c1, dtype=np.int64)
    slots = {d: int(Q.lt[members, d].sum()) if members.size else 0 for d in c2}
    merged = [d for d in c2 if slots[d] == 0]
    for i, c in enumerate(c1, start=1):
        merged.append(c)
        merged.extend(d for d in c2 if slots[d] == i)
    in_c1 = set(c1)
    mapping = [-1] * n
    for rank, v in enumerate(merged):
        mapping[v] = rank if v in in_c1 else n + rank  # x_{rank+1} or y_{rank+1}
    return Embedding(mapping)


@dataclass(frozen=True)
class SeriesDecomposition:
    blocks: tuple[tuple[int, ...], ...]

    def __len__(self):
        return len(self.blocks)


def series_decompose(P: Poset) -> SeriesDecomposition:
    """Finest series decomposition: connected components of the
    incomparability graph, listed bottom to top."""
    if P.n == 0:
        return SeriesDecomposition(())
    ncomp, labels = connected_components(csr_matrix(P.incomp), directed=False)
    groups = [[] for _ in range(ncomp)]
    for x, lab in enumerate(labels):
        groups[lab].append(x)
    below = P.below_counts()
    groups.sort(key=lambda g: below[g[0]])
    for i in range(len(groups)):
        for j in range(i + 1, len(groups)):
            if not P.lt[np.ix_(groups[i], groups[j])].all():
                raise InconsistentOrder(f"blocks {i} and {j} are not in series")
    return SeriesDecomposition(tuple(tuple(g) for g in groups))


@dataclass(frozen=True)
class ClassifierVerdict:
    width: int
    inQ: bool
    blocks: SeriesDecomposition
    witnesses: tuple  # per block: (c1, c2) in original indices, or None
    boundKind: str  # subexponentialUpper | exponentialLower | notApplicable
    boundParams: dict = field(default_factory=dict)

    def to_json(self):
        blocks = []
        for b, wit in zip(self.blocks.blocks, self.witnesses):
            entry = {"elements": list(b)}
            if wit is not None:
                entry["c1"], entry["c2"] = list(wit[0]), list(wit[1])
            blocks.append(entry)
        bound = {"kind": self.boundKind}
        bound.update(self.boundParams)
        return {"width": self.width, "inQ": self.inQ, "blocks": blocks, "bound": bound}


def in_family_Q(Q: Poset, gamma: float | None = None) -> ClassifierVerdict:
    """Classify Q; bound fields are filled only for width <= 2."""
    w = width(Q)
    dec = series_decompose(Q)
    witnesses = []
    for b in dec.blocks:
        sub, idx = induced(Q, b)
        wit = is_ladder_like(sub)
        witnesses.append(None if wit is None else (tuple(idx[i] for i in wit[0]), tuple(idx[i] for i in wit[1])))
    inq = all(wit is not None for wit in witnesses)
    if w > 2:
        kind, params = "notApplicable", {}
    elif inq:
        sizes = [len(b) for b in dec.blocks]
        kind = "subexponentialUpper"
        params = {"k": len(sizes), "n_i": sizes, "gamma": gamma}
        params["C"] = bounds.dichotomy_C(sizes, gamma) if gamma is not None and sizes else None
    else:
        kind = "exponentialLower"
        params = {"lower": "2^w - 1", "lower_at_width": bounds.reservoir_lower(max(w, 1))}
    return ClassifierVerdict(w, inq, dec, tuple(witnesses), kind, params)


def dichotomy_verdict(Q: Poset, gamma: float) -> ClassifierVerdict:
    if gamma is None or not gamma > 0:
        raise ValueError("gamma must be a positive real")
    if width(Q) > 2:
        raise WidthOutOfScope(f"width {width(Q)} is outside the width-2 dichotomy")
    return in_family_Q(Q, gamma)


# -- independent oracle ---------------------------------------------------------------


def in_family_Q_oracle(Q: Poset) -> bool:
    """Membership straight from the inductive definition.

    A subset is in the family if it is ladder-like (checked by trying every
    2-coloring) or splits as D below its complement for some nonempty
    proper down-set D with both sides in the family.
    """
    n = Q.n
    if n > ORACLE_CAP:
        raise CapExceeded(f"oracle is limited to {ORACLE_CAP} elements")
    lt = [[bool(Q.lt[i, j]) for j in range(n)] for i in range(n)]

    def elems(mask):
        return [i for i in range(n) if mask >> i & 1]

    def is_chain(xs):
        return all(lt[a][b] or lt[b][a] for i, a in enumerate(xs) for b in xs[i + 1 :])

    def ladder_like(mask):
        xs = elems(mask)
        for coloring in range(1 << len(xs)):
            c1 = [x for k, x in enumerate(xs) if coloring >> k & 1]
            c2 = [x for k, x in enumerate(xs) if not coloring >> k & 1]
            if is_chain(c1) and is_chain(c2) and not any(lt[y][x] for x in c1 for y in c2):
                return True
        return False

    @lru_cache(maxsize=None)
    def member(mask):
        if mask == 0 or ladder_like(mask):
            return True
        xs = elems(mask)
        sub = mask
        while True:
            sub = (sub - 1) & mask
            if sub == 0:
                break
            low = [x for x in xs if sub >> x & 1]
            high = [x for x in xs if not sub >> x & 1]
            if all(lt[a][b] for a in low for b in high) and member(sub) and member(mask & ~sub):
                return True
        return False

    return member((1 << n) - 1)


# -- reservoir containment ---------------------------------------------------------------


def reservoir_membership(Q: Poset, kmax: int = 4, budget: int = DEFAULT_BUDGET):
    """Least k <= kmax with Q a subposet of R_k, or None."""
    if kmax > 5:
        raise CapExceeded("reservoir membership is limited to kmax <= 5")
    for k in range(1, kmax + 1):
        if contains_subposet(reservoir(k).poset, Q, budget=budget) is not None:
            return k
    return None
