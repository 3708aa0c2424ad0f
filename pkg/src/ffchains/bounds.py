"""Closed-form evaluators for the First-Fit bounds.

Integral formulas are evaluated with Python integers.  Super-polynomial
upper bounds are returned as base-2 exponents; :class:`BoundExpression`
converts those to exact integers when the exponent is integral and below
``EXACT_EXPONENT_LIMIT``.  None of the asymptotic (1 ± o(1)) factors are
modeled: the evaluators give the leading term only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import DomainError

EXACT_EXPONENT_LIMIT = 4096

# Known values and bounds for particular forbidden posets, for reference only.
# Each maps w (and chain lengths where relevant) to a bound on FF(w, Q).
PRIOR_WORK = {
    "N": {"kind": "exact", "value": lambda w: w},
    "L1": {"kind": "exact", "value": lambda w: w},
    "L2": {"kind": "exact", "value": lambda w: w * w},
    "2+2 (interval orders)": {"kind": "range", "lower": lambda w: 5 * w, "upper": lambda w: 8 * w,
                              "note": "lower bound holds up to a (1 - o(1)) factor"},
    "r+s (r >= s)": {"kind": "upper", "upper": lambda w, r, s: 8 * (r - 1) * (s - 1) * w},
    "r+r": {"kind": "upper", "upper": lambda w, r: 8 * (2 * r - 3) * w},
    "r+s, earlier": {"kind": "upper", "upper": lambda w, r, s: (3 * r - 2) * (w - 1) * w + w},
    "L_n, width 2": {"kind": "upper", "upper": lambda n: 2 * n},
}


def _lg(x):
    return math.log2(x)


def series_bound(s: int, t: int, w: int) -> int:
    """stw^2 + (s+t)w."""
    if min(s, t, w) < 0:
        raise DomainError("s, t, w must be nonnegative")
    s, t, w = int(s), int(t), int(w)
    return s * t * w * w + (s + t) * w


def corollary_series_bound(cs, w) -> float:
    """Exponent (c + 6k)(lg w)^2 with c = sum(cs) and k = len(cs)."""
    if w < 2:
        raise DomainError("the series corollary needs w >= 2")
    cs = list(cs)
    return (sum(cs) + 6 * len(cs)) * _lg(w) ** 2


def ks_ladder_bound(w, n, gamma) -> float:
    """Exponent of w^{gamma (lg w + lg n)}, i.e. gamma (lg w + lg n) lg w."""
    if w < 1 or n < 1:
        raise DomainError("w and n must be at least 1")
    if not gamma > 0:
        raise DomainError("gamma must be positive")
    return gamma * (_lg(w) + _lg(n)) * _lg(w)


def dichotomy_C(sizes, gamma) -> float:
    """6k + sum of gamma (1 + lg n_i) over the blocks."""
    sizes = list(sizes)
    if any(s < 1 for s in sizes):
        raise DomainError("block sizes must be positive")
    return 6 * len(sizes) + sum(gamma * (1 + _lg(s)) for s in sizes)


def dichotomy_C_ceiling(n, gamma) -> float:
    """(6 + gamma) n + gamma (n / e) lg e, the O(n) cap on C."""
    return (6 + gamma) * n + gamma * (n / math.e) * _lg(math.e)


def dichotomy_upper(sizes, gamma, w) -> float:
    """Exponent C (lg w)^2 for the subexponential side."""
    if w < 2:
        raise DomainError("the upper bound is stated for w >= 2")
    return dichotomy_C(sizes, gamma) * _lg(w) ** 2


def reservoir_lower(w: int) -> int:
    """2^w - 1."""
    if w < 1:
        raise DomainError("w must be at least 1")
    return (1 << int(w)) - 1


def butterfly_lower_exact(q: int) -> int:
    """(q+1)(q^2+q+1): the wall size of the projective-plane instance."""
    q = int(q)
    return (q + 1) * (q * q + q + 1)


def butterfly_asymptotic(w) -> float:
    """Leading term w^{3/2} for FF(w, B)."""
    return float(w) ** 1.5


def stacked_butterfly_exponent(k: int) -> float:
    """Degree 3.5k - 2 of the polynomial bound for B_{2k}."""
    if k < 1:
        raise DomainError("k must be at least 1")
    return 3.5 * k - 2


KINDS = (
    "seriesComposition",
    "corollarySeries",
    "ksLadder",
    "dichotomyUpper",
    "reservoirLower",
    "butterflyAsymptotic",
    "stackedButterfly",
)

_LOG_KINDS = {"corollarySeries", "ksLadder", "dichotomyUpper"}


@dataclass(frozen=True)
class BoundExpression:
    """A bound formula with its parameters bound, evaluated at width w."""

    kind: str
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown bound kind {self.kind!r}")

    @property
    def log_domain(self):
        return self.kind in _LOG_KINDS

    def log2_at(self, w) -> float:
        p = self.params
        if self.kind == "corollarySeries":
            return corollary_series_bound(p["cs"], w)
        if self.kind == "ksLadder":
            return ks_ladder_bound(w, p["n"], p["gamma"])
        if self.kind == "dichotomyUpper":
            return dichotomy_upper(p["sizes"], p["gamma"], w)
        v = self.value_at(w)
        return math.log2(v) if v > 0 else -math.inf

    def value_at(self, w):
        p = self.params
        if self.kind == "seriesComposition":
            return series_bound(p["s"], p["t"], w)
        if self.kind == "reservoirLower":
            return reservoir_lower(w)
        if self.kind == "butterflyAsymptotic":
            return butterfly_asymptotic(w)
        if self.kind == "stackedButterfly":
            return float(w) ** stacked_butterfly_exponent(p["k"])
        e = self.log2_at(w)
        if e.is_integer() and e <= EXACT_EXPONENT_LIMIT:
            return 1 << int(e)
        return 2.0**e if e < 1024 else math.inf

    def evaluate(self, w) -> dict:
        """JSON-ready result: ``{"value": ...}`` or ``{"exponentLog2": ...}``."""
        out = {"kind": self.kind, "w": w}
        if self.log_domain:
            out["exponentLog2"] = self.log2_at(w)
        else:
            out["value"] = self.value_at(w)
        if self.kind in ("butterflyAsymptotic", "stackedButterfly"):
            out["note"] = "leading term only; the (1 + o(1)) factor is not modeled"
        return out
