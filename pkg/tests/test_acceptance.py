"""Acceptance criteria, one test each.

Every test prints a single ``PASS``/``FAIL`` line (also collected into the
terminal summary).  Run alone with ``pytest tests/test_acceptance.py`` or
``python3 tests/test_acceptance.py``.
"""

import time

import numpy as np
import pytest

from ffchains import oracles
from ffchains.classify import (
    embed_into_ladder,
    in_family_Q,
    in_family_Q_oracle,
    is_ladder_like,
    reservoir_membership,
)
from ffchains.constructions import (
    butterfly,
    butterfly_lower_bound,
    has_four_cycle,
    ladder,
    n_poset,
    projective_plane_graph,
    random_poset,
    reservoir,
    skewed_butterfly,
)
from ffchains.firstfit import analyze_butterfly_wall, analyze_series_wall_auto, first_fit, is_wall, wall_to_order
from ffchains.poset import contains_subposet, dilworth_partition, enumerate_posets, find_butterfly, induced, width

SEED = 20240229
RESULTS = []


def record(num, name, ok, detail, started):
    line = f"{'PASS' if ok else 'FAIL'} criterion {num} {name}: {detail} ({time.perf_counter() - started:.1f}s)"
    RESULTS.append(line)
    print(line)
    return ok


def test_1_reservoir_exactness():
    t0 = time.perf_counter()
    bad = []
    for k in range(1, 6):
        art = reservoir(k)
        w = width(art.poset)
        ff = first_fit(art.poset, art.order)
        if not (w == k and len(ff) == 2**k - 1 and ff.chains == art.wall and is_wall(art.poset, ff.chains)):
            bad.append((k, w, len(ff)))
    sizes = [reservoir(k).poset.n for k in range(1, 6)]
    assert record(1, "reservoir exactness", not bad, f"k=1..5 sizes {sizes}, failures {bad}", t0)


def test_2_butterfly_construction():
    t0 = time.perf_counter()
    bad = []
    for q in (2, 3, 5):
        art = butterfly_lower_bound(q)
        P, n = art.poset, q * q + q + 1
        replay = first_fit(P, wall_to_order(P, art.wall)).chains
        checks = (
            width(P) == n,
            len(art.wall) == (q + 1) * n,
            is_wall(P, art.wall),
            replay == art.wall,
            find_butterfly(P) is None,
        )
        if not all(checks):
            bad.append((q, checks))
    assert record(2, "butterfly construction", not bad, f"q in (2, 3, 5), failures {bad}", t0)


def test_3_incidence_girth():
    t0 = time.perf_counter()
    bad = []
    for q in (2, 3, 5):
        G = projective_plane_graph(q)
        left, right = G.degrees()
        if has_four_cycle(G) or oracles.has_c4_bruteforce(G.edges) or set(left) | set(right) != {q + 1}:
            bad.append(q)
    assert record(3, "incidence graph girth and regularity", not bad, f"q in (2, 3, 5), failures {bad}", t0)


def test_4_classifier_sweep():
    t0 = time.perf_counter()
    disagreements = []
    counts = {}
    least_k = {}
    for n in range(0, 6):
        all_n = list(enumerate_posets(n))
        counts[n] = (len(all_n), oracles.count_posets_bruteforce(n))
        for Q in all_n:
            if width(Q) > 2:
                continue
            fast = in_family_Q(Q).inQ
            k = reservoir_membership(Q, 4)
            least_k[k] = least_k.get(k, 0) + 1
            if fast != in_family_Q_oracle(Q) or fast != (k is not None):
                disagreements.append(Q.pairs())
    count_ok = all(a == b for a, b in counts.values()) and counts[5][0] == 4231
    named_ok = (
        not in_family_Q(skewed_butterfly()).inQ
        and in_family_Q(butterfly()).inQ
        and all(in_family_Q(ladder(n)).inQ for n in range(1, 6))
        and in_family_Q(n_poset()).inQ
    )
    ok = not disagreements and count_ok and named_ok
    detail = (f"counts {[c for c, _ in counts.values()]}, disagreements {len(disagreements)}, "
              f"least-k histogram {dict(sorted(least_k.items(), key=str))}")
    assert record(4, "dichotomy classifier sweep", ok, detail, t0)


def test_5_ladder_embedding():
    t0 = time.perf_counter()
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(SEED)))
    L = ladder(10)
    good = 0
    for _ in range(200):
        keep = np.flatnonzero(rng.random(L.n) < rng.uniform(0.2, 0.9))
        Q, _ = induced(L, keep)
        wit = is_ladder_like(Q)
        if wit is not None and embed_into_ladder(Q, wit).verify(Q, ladder(max(Q.n, 1))):
            good += 1
    assert record(5, "ladder embedding", good == 200, f"{good}/200 embedded", t0)


def test_6_series_counting():
    t0 = time.perf_counter()
    walls = [(reservoir(k).poset, reservoir(k).wall) for k in range(1, 6)]
    walls += [(butterfly_lower_bound(q).poset, butterfly_lower_bound(q).wall) for q in (2, 3, 5)]
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(SEED + 6)))
    for _ in range(100):
        P = random_poset(int(rng.integers(1, 31)), float(rng.uniform(0.05, 0.5)), rng)
        walls.append((P, first_fit(P, rng.permutation(P.n)).chains))
    violations = 0
    for P, wall in walls:
        an = analyze_series_wall_auto(P, wall)
        counts_ok = (an.checks["upper_count"] and an.checks["lower_count"]
                     and an.checks["signatures_distinct"] and an.checks["mixed_count"])
        violations += not (counts_ok and an.ok and len(wall) <= an.bound)
    assert record(6, "series-composition counting", violations == 0,
                  f"{len(walls)} walls, {violations} violations", t0)


def test_7_butterfly_wall_analysis():
    t0 = time.perf_counter()
    bad = []
    for q in (2, 3):
        art = butterfly_lower_bound(q)
        an = analyze_butterfly_wall(art.poset, art.wall, art.dilworth)
        if not (an.checks["siggraph_c4_free"] and len(art.wall) <= len(an.cprime) + 3 * an.w and an.ok):
            bad.append((q, an.checks))
    assert record(7, "butterfly wall analysis", not bad, f"q in (2, 3), failures {bad}", t0)


def _free_sample(rng, forbidden, count):
    out = []
    while len(out) < count:
        P = random_poset(int(rng.integers(2, 10)), float(rng.uniform(0.1, 0.6)), rng)
        if contains_subposet(P, forbidden) is None:
            out.append(P)
    return out


def test_8_first_fit_properties():
    t0 = time.perf_counter()
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(SEED + 8)))
    below_width = n_violations = l2_violations = runs = 0
    for P in _free_sample(rng, n_poset(), 100):
        w = width(P)
        for _ in range(50):
            used = len(first_fit(P, rng.permutation(P.n)))
            runs += 1
            below_width += used < w
            n_violations += used != w
    for P in _free_sample(rng, ladder(2), 100):
        w = width(P)
        for _ in range(50):
            used = len(first_fit(P, rng.permutation(P.n)))
            runs += 1
            below_width += used < w
            l2_violations += used > w * w
    for _ in range(200):
        P = random_poset(int(rng.integers(1, 25)), float(rng.uniform(0.05, 0.5)), rng)
        runs += 1
        below_width += len(first_fit(P, rng.permutation(P.n))) < width(P)
    ok = below_width == n_violations == l2_violations == 0
    detail = f"{runs} runs; below width {below_width}, N-free != width {n_violations}, L2-free > w^2 {l2_violations}"
    assert record(8, "First-Fit classical properties", ok, detail, t0)


def test_9_dilworth_oracle():
    t0 = time.perf_counter()
    total = bad = 0
    for n in range(0, 6):
        for P in enumerate_posets(n):
            total += 1
            bad += len(dilworth_partition(P)) != oracles.max_antichain_bruteforce(P)
    assert record(9, "Dilworth oracle", bad == 0, f"{total} posets, {bad} mismatches", t0)


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q", "-s"]))
