import math

import pytest

from ffchains import bounds
from ffchains.constructions import butterfly_lower_bound, reservoir
from ffchains.errors import DomainError
from ffchains.poset import width


def test_series_bound():
    assert bounds.series_bound(1, 1, 1) == 3
    assert bounds.series_bound(1, 2, 2) == 14
    assert bounds.series_bound(3, 4, 0) == 0
    big = bounds.series_bound(10**6, 10**6, 10**6)
    assert isinstance(big, int) and big == 10**24 + 2 * 10**12


def test_corollary_series_bound():
    assert bounds.corollary_series_bound([0], 2) == 6
    assert bounds.corollary_series_bound([1, 1], 4) == 56
    assert bounds.corollary_series_bound([], 8) == 0
    with pytest.raises(DomainError):
        bounds.corollary_series_bound([0], 1)


def test_ks_ladder_bound():
    assert bounds.ks_ladder_bound(1, 7, 3.0) == 0
    assert bounds.ks_ladder_bound(2, 2, 1) == 2
    assert bounds.ks_ladder_bound(4, 1, 1) == 4
    with pytest.raises(DomainError):
        bounds.ks_ladder_bound(2, 2, 0)


def test_dichotomy_constant():
    g = 1.7
    assert bounds.dichotomy_C([1], g) == pytest.approx(6 + g)
    assert bounds.dichotomy_C([2, 2], g) == pytest.approx(12 + 4 * g)
    for sizes in ([1], [2, 2], [1, 1, 1, 1], [5], [3, 2], [1] * 10):
        n = sum(sizes)
        for gamma in (0.5, 1, 3):
            assert bounds.dichotomy_C(sizes, gamma) <= bounds.dichotomy_C_ceiling(n, gamma) + 1e-9


def test_lower_bounds():
    assert bounds.reservoir_lower(3) == 7
    assert bounds.reservoir_lower(200) == 2**200 - 1
    assert bounds.butterfly_lower_exact(2) == 21
    assert bounds.stacked_butterfly_exponent(1) == 1.5


def test_artifacts_meet_their_formulas():
    for k in range(1, 5):
        art = reservoir(k)
        assert width(art.poset) == k and len(art.wall) == bounds.reservoir_lower(k)
    for q in (2, 3):
        assert len(butterfly_lower_bound(q).wall) == bounds.butterfly_lower_exact(q)


@pytest.mark.parametrize(
    "kind, params",
    [
        ("seriesComposition", {"s": 2, "t": 3}),
        ("corollarySeries", {"cs": [1, 2]}),
        ("ksLadder", {"n": 4, "gamma": 1.5}),
        ("dichotomyUpper", {"sizes": [2, 3], "gamma": 1.0}),
        ("reservoirLower", {}),
        ("butterflyAsymptotic", {}),
        ("stackedButterfly", {"k": 2}),
    ],
)
def test_expressions_are_monotone(kind, params):
    expr = bounds.BoundExpression(kind, params)
    logs = [expr.log2_at(w) for w in range(2, 64)]
    assert all(a <= b for a, b in zip(logs, logs[1:]))


def test_expression_output_shapes():
    assert bounds.BoundExpression("seriesComposition", {"s": 1, "t": 2}).evaluate(2) == {
        "kind": "seriesComposition", "w": 2, "value": 14}
    out = bounds.BoundExpression("corollarySeries", {"cs": [0]}).evaluate(4)
    assert out["exponentLog2"] == 24
    assert bounds.BoundExpression("corollarySeries", {"cs": [0]}).value_at(4) == 2**24
    assert "note" in bounds.BoundExpression("butterflyAsymptotic").evaluate(9)
    assert bounds.BoundExpression("butterflyAsymptotic").value_at(9) == 27.0
    assert math.isinf(bounds.BoundExpression("dichotomyUpper", {"sizes": [50], "gamma": 5}).value_at(2**20))
    with pytest.raises(ValueError):
        bounds.BoundExpression("nope")


def test_prior_work_constants():
    assert bounds.PRIOR_WORK["L2"]["value"](5) == 25
    assert bounds.PRIOR_WORK["N"]["value"](5) == 5
