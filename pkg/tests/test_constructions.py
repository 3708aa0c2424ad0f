import json

import numpy as np
import pytest

from ffchains import oracles
from ffchains.constructions import (
    BipartiteGraph,
    antichain,
    bipartite_perfect_matching,
    butterfly,
    butterfly_lower_bound,
    chain,
    has_four_cycle,
    is_prime,
    ladder,
    n_poset,
    next_prime_leq,
    projective_plane_graph,
    random_poset,
    reservoir,
    skewed_butterfly,
    stacked_butterfly,
)
from ffchains.errors import CapExceeded, NotPrime
from ffchains.firstfit import first_fit, is_wall
from ffchains.poset import above_set, below_set, contains_subposet, dumps, find_butterfly, height, series_compose, width


def test_small_generators():
    assert chain(1) == antichain(1)
    assert chain(0).n == 0
    assert width(antichain(5)) == 5 and height(antichain(5)) == 1
    assert width(chain(5)) == 1 and height(chain(5)) == 5
    with pytest.raises(ValueError):
        chain(-1)


def test_ladder_relations():
    assert ladder(1).pairs() == [(0, 1)]
    L2 = ladder(2)
    cross = [(x, y) for x in (0, 1) for y in (2, 3) if L2.incomparable(x, y)]
    assert cross == [(1, 2)]
    L = ladder(5)
    for i in range(5):
        for j in range(5):
            assert L.less(i, 5 + j) == (i <= j)
            assert not L.less(5 + j, i)
    assert contains_subposet(ladder(4), n_poset()) is not None


def test_named_posets():
    assert width(n_poset()) == 2
    assert n_poset().pairs() == [(0, 2), (1, 2), (1, 3)]
    assert stacked_butterfly(2) == series_compose([antichain(2), antichain(2)]) == butterfly()
    S = skewed_butterfly()
    assert sorted(S.pairs()) == [(0, 1), (0, 2), (0, 4), (1, 2), (3, 2), (3, 4)]
    assert width(stacked_butterfly(4)) == 2 and height(stacked_butterfly(4)) == 4


def test_random_poset_is_seeded():
    a = random_poset(12, 0.3, np.random.default_rng(3))
    b = random_poset(12, 0.3, np.random.default_rng(3))
    assert a == b and a.n == 12


@pytest.mark.parametrize("k, size, chains", [(1, 1, 1), (2, 4, 3), (3, 17, 7), (4, 115, 15)])
def test_reservoir_sizes(k, size, chains):
    art = reservoir(k)
    assert art.poset.n == size
    assert width(art.poset) == k
    assert len(art.wall) == chains == 2**k - 1
    assert is_wall(art.poset, art.wall)
    assert first_fit(art.poset, art.order).chains == art.wall


def test_reservoir_two_matches_hand_run():
    r2 = reservoir(2)
    # a, b, then x2, x1 by index; chains {a, x1}, {x2}, {b}
    assert r2.wall.chains == ((0, 3), (2,), (1,))
    assert r2.meta["x"] == [3, 2]


def test_reservoir_x_chain_relations():
    art = reservoir(4)
    P, meta = art.poset, art.meta
    m = meta["m"]
    blocks = meta["blocks"]
    S = set(range(blocks[m][0]))  # S_m .. S_1
    for i in range(1, m + 2):
        xi = meta["x"][i - 1]
        expected = set()
        for j in range(i, m + 1):
            expected |= set(range(*blocks[m - j]))
        assert below_set(P, xi) & S == expected
        assert above_set(P, xi) & S == set()


def test_reservoir_containment_is_monotone():
    for k in range(1, 4):
        emb = contains_subposet(reservoir(k + 1).poset, reservoir(k).poset)
        assert emb is not None and emb.verify(reservoir(k).poset, reservoir(k + 1).poset)


def test_reservoir_cap():
    with pytest.raises(CapExceeded):
        reservoir(7)
    with pytest.raises(ValueError):
        reservoir(0)


def test_primes():
    assert [next_prime_leq(x) for x in (10, 13, 2)] == [7, 13, 2]
    assert [q for q in range(20) if is_prime(q)] == [2, 3, 5, 7, 11, 13, 17, 19]


@pytest.mark.parametrize("q, edges", [(2, 21), (3, 52), (5, 186)])
def test_projective_plane(q, edges):
    G = projective_plane_graph(q)
    n = q * q + q + 1
    assert G.left == G.right == n
    assert len(G.edges) == edges
    left, right = G.degrees()
    assert set(left) == set(right) == {q + 1}
    assert not has_four_cycle(G)
    if q <= 3:
        assert not oracles.has_c4_bruteforce(G.edges)


def test_projective_plane_rejects_prime_powers():
    with pytest.raises(NotPrime):
        projective_plane_graph(4)


def test_matchings():
    one = BipartiteGraph.from_edges(3, 3, [(0, 2), (1, 0), (2, 1)])
    assert bipartite_perfect_matching(one) == [(0, 2), (1, 0), (2, 1)]
    k33 = BipartiteGraph.from_edges(3, 3, [(i, j) for i in range(3) for j in range(3)])
    assert bipartite_perfect_matching(k33) == [(0, 0), (1, 1), (2, 2)]
    G = projective_plane_graph(2)
    M = bipartite_perfect_matching(G)
    assert len(M) == 7 and len({v for _, v in M}) == 7
    assert all(v in G.adj[u] for u, v in M)


def test_has_four_cycle():
    assert has_four_cycle(BipartiteGraph.from_edges(2, 2, [(0, 0), (0, 1), (1, 0), (1, 1)]))
    assert not has_four_cycle(BipartiteGraph.from_edges(2, 2, [(0, 0), (0, 1), (1, 0)]))


@pytest.mark.parametrize("q, size, w, wall", [(2, 35, 7, 21), (3, 91, 13, 52)])
def test_butterfly_lower_bound(q, size, w, wall):
    art = butterfly_lower_bound(q)
    P = art.poset
    assert P.n == size and width(P) == w and len(art.wall) == wall
    assert is_wall(P, art.wall)
    assert find_butterfly(P) is None
    assert len(art.dilworth) == w and is_wall(P, art.dilworth)
    e = 0
    assert not below_set(P, art.ix[e]) and not above_set(P, art.iy[e])


def test_butterfly_lower_bound_errors():
    with pytest.raises(NotPrime):
        butterfly_lower_bound(4)
    with pytest.raises(CapExceeded):
        butterfly_lower_bound(11)


def test_generators_are_deterministic():
    a = dumps(reservoir(3).to_json())
    reservoir.cache_clear()
    assert dumps(reservoir(3).to_json()) == a
    b = dumps(butterfly_lower_bound(2).to_json())
    butterfly_lower_bound.cache_clear()
    assert dumps(butterfly_lower_bound(2).to_json()) == b
    assert json.loads(b)["meta"]["graph"]["left"] == 7
