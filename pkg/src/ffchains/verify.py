"""Invariant sweeps behind ``ffchains verify``.

Each sweep fans independent instances out to a thread pool and collects
one record per instance.  Randomness comes from a numpy ``SeedSequence``
spawned once per instance, so a report depends only on its parameters and
seed, not on scheduling.
"""

from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import oracles
from .classify import in_family_Q, in_family_Q_oracle, reservoir_membership
from .constructions import butterfly_lower_bound, has_four_cycle, projective_plane_graph, reservoir
from .firstfit import analyze_butterfly_wall, first_fit, is_wall, wall_to_order
from .poset import dilworth_partition, enumerate_posets, find_butterfly, width

DEFAULT_SEED = 20240229


@dataclass
class ExperimentReport:
    name: str
    parameters: dict
    records: list = field(default_factory=list)
    passed: bool = True
    failure: str | None = None

    def check(self, cond, message):
        """Record an assertion; only the first failure is kept."""
        if not cond:
            if self.passed:
                self.failure = message
            self.passed = False
        return bool(cond)

    def to_json(self):
        return {
            "name": self.name,
            "parameters": self.parameters,
            "records": self.records,
            "passed": self.passed,
            "failure": self.failure,
        }


def _rngs(seed, count):
    return [np.random.Generator(np.random.PCG64(s)) for s in np.random.SeedSequence(seed).spawn(count)]


def _fan_out(fn, items, workers):
    if workers <= 1:
        return [fn(*it) for it in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda it: fn(*it), items))


def _random_order_checks(P, rng, samples):
    """Chains used over random presentation orders, and whether each is a wall
    of at least width-many chains."""
    w = width(P)
    used = []
    ok = True
    for _ in range(samples):
        res = first_fit(P, rng.permutation(P.n))
        used.append(len(res))
        ok &= len(res) >= w and is_wall(P, res.chains)
    return used, ok


def _finish(report, outcomes, timings):
    for rec, checks in outcomes:
        if not timings:
            rec.pop("seconds", None)
        report.records.append(rec)
        for cond, msg in checks:
            report.check(cond, msg)
    return report


def verify_reservoir(kmax=4, seed=DEFAULT_SEED, samples=8, workers=1, timings=False):
    """Width k, a wall of 2^k - 1 chains, and First-Fit reproducing it, for k <= kmax."""
    report = ExperimentReport("reservoir", {"kmax": kmax, "seed": seed, "samples": samples})

    def one(k, rng):
        t0 = time.perf_counter()
        art = reservoir(k)
        P = art.poset
        w = width(P)
        ff = first_fit(P, art.order)
        walled = is_wall(P, art.wall)
        used, rand_ok = _random_order_checks(P, rng, samples)
        rec = {
            "k": k,
            "size": P.n,
            "width": w,
            "wall": len(art.wall),
            "firstFitOnOrder": len(ff),
            "isWall": walled,
            "randomOrderChains": used,
            "seconds": round(time.perf_counter() - t0, 4),
        }
        target = (1 << k) - 1
        checks = [
            (w == k, f"reservoir k={k}: width {w} != {k}"),
            (len(art.wall) == target, f"reservoir k={k}: wall has {len(art.wall)} chains, expected {target}"),
            (len(ff) == target, f"reservoir k={k}: First-Fit used {len(ff)} chains on the order"),
            (walled, f"reservoir k={k}: wall fails the blocking condition"),
            (rand_ok, f"reservoir k={k}: a random order gave fewer than width chains or a non-wall"),
        ]
        return rec, checks

    ks = list(range(1, kmax + 1))
    return _finish(report, _fan_out(one, zip(ks, _rngs(seed, len(ks))), workers), timings)


def verify_butterfly(qs=(2, 3), seed=DEFAULT_SEED, samples=4, workers=1, timings=False, analyze_max_q=3):
    """Width, wall size, butterfly-freeness and graph girth of the projective-plane instances."""
    qs = list(qs)
    report = ExperimentReport("butterfly", {"q": qs, "seed": seed, "samples": samples})

    def one(q, rng):
        t0 = time.perf_counter()
        art = butterfly_lower_bound(q)
        P = art.poset
        G = projective_plane_graph(q)
        left_deg, right_deg = G.degrees()
        w = width(P)
        walled = is_wall(P, art.wall)
        replay = first_fit(P, wall_to_order(P, art.wall)).chains
        witness = find_butterfly(P)
        c4 = has_four_cycle(G)
        used, rand_ok = _random_order_checks(P, rng, samples)
        lines = q * q + q + 1
        rec = {
            "q": q,
            "size": P.n,
            "width": w,
            "wall": len(art.wall),
            "isWall": walled,
            "replayMatches": replay == art.wall,
            "butterflyFree": witness is None,
            "graphHasC4": c4,
            "degrees": sorted(set(left_deg) | set(right_deg)),
            "randomOrderChains": used,
        }
        checks = [
            (w == lines, f"butterfly q={q}: width {w} != {lines}"),
            (len(art.wall) == (q + 1) * lines, f"butterfly q={q}: wall has {len(art.wall)} chains"),
            (walled, f"butterfly q={q}: wall fails the blocking condition"),
            (replay == art.wall, f"butterfly q={q}: First-Fit on the wall order does not reproduce it"),
            (witness is None, f"butterfly q={q}: contains a butterfly on {witness}"),
            (not c4, f"butterfly q={q}: incidence graph has a 4-cycle"),
            (rec["degrees"] == [q + 1], f"butterfly q={q}: graph is not {q + 1}-regular"),
            (rand_ok, f"butterfly q={q}: a random order gave fewer than width chains or a non-wall"),
        ]
        if q <= analyze_max_q:
            an = analyze_butterfly_wall(P, art.wall, art.dilworth)
            rec["signatureGraphC4Free"] = an.checks["siggraph_c4_free"]
            rec["cprime"] = len(an.cprime)
            checks.append((an.ok, f"butterfly q={q}: wall analysis failed {an.checks}"))
        rec["seconds"] = round(time.perf_counter() - t0, 4)
        return rec, checks

    return _finish(report, _fan_out(one, zip(qs, _rngs(seed, len(qs))), workers), timings)


def verify_classifier(nmax=5, seed=DEFAULT_SEED, kmax=4, workers=1, timings=False, count_check_max=5):
    """Classifier against the definitional oracle and reservoir containment on
    every labeled poset with at most nmax elements."""
    report = ExperimentReport("classifier", {"nmax": nmax, "kmax": kmax, "seed": seed})

    def one(n):
        t0 = time.perf_counter()
        posets = list(enumerate_posets(n))
        checked = in_q = 0
        checks = []
        for Q in posets:
            if width(Q) > 2:
                continue
            checked += 1
            fast = in_family_Q(Q).inQ
            slow = in_family_Q_oracle(Q)
            k = reservoir_membership(Q, kmax)
            in_q += fast
            rel = Q.pairs()
            if fast != slow:
                checks.append((False, f"classifier n={n}: fast={fast} oracle={slow} on {rel}"))
            if fast != (k is not None):
                checks.append((False, f"classifier n={n}: inQ={fast} but reservoir k={k} on {rel}"))
        rec = {"n": n, "posets": len(posets), "widthAtMost2": checked, "inQ": in_q}
        if n <= count_check_max:
            brute = oracles.count_posets_bruteforce(n)
            rec["bruteForceCount"] = brute
            checks.append((brute == len(posets), f"classifier n={n}: enumerated {len(posets)} posets, brute force {brute}"))
        rec["seconds"] = round(time.perf_counter() - t0, 4)
        return rec, checks

    ns = [(n,) for n in range(0, nmax + 1)]
    return _finish(report, _fan_out(one, ns, workers), timings)


def verify_dilworth(nmax=5, seed=DEFAULT_SEED, workers=1, timings=False):
    """Dilworth partition size against brute-force maximum antichains."""
    report = ExperimentReport("dilworth", {"nmax": nmax, "seed": seed})

    def one(n):
        t0 = time.perf_counter()
        count = 0
        checks = []
        for P in enumerate_posets(n):
            count += 1
            cp = dilworth_partition(P)
            anti = oracles.max_antichain_bruteforce(P)
            try:
                cp.validate(P)
                valid = True
            except ValueError:
                valid = False
            if len(cp) != anti or not valid:
                checks.append((False, f"dilworth n={n}: {len(cp)} chains vs antichain {anti} on {P.pairs()}"))
        rec = {"n": n, "posets": count, "seconds": round(time.perf_counter() - t0, 4)}
        return rec, checks

    ns = [(n,) for n in range(0, nmax + 1)]
    return _finish(report, _fan_out(one, ns, workers), timings)


TARGETS = {
    "reservoir": verify_reservoir,
    "butterfly": verify_butterfly,
    "classifier": verify_classifier,
    "dilworth": verify_dilworth,
}
