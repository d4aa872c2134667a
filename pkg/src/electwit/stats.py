"""Statistical comparison toolkit: Mann-Whitney U, means, min-max scaling.

``mann_whitney`` computes U with half-credit for ties, then a p-value either
from the exact null distribution (counting recurrence over label
arrangements; used when n1 + n2 <= 20 and the data are tie-free) or from the
normal approximation with tie-corrected variance and continuity correction.

Two effect sizes are reported: the common-language effect size
CLES = U1 / (n1 * n2) (probability that a draw from the first sample exceeds
one from the second, ties counting half) and the rank-biserial correlation
1 - 2 * U2 / (n1 * n2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

ALTERNATIVES = ("two_sided", "less", "greater")


@dataclass(frozen=True)
class MwuResult:
    u1: float
    u2: float
    p_value: float
    effect_size_cles: float
    rank_biserial: float
    method: str  # "exact" or "normal_approx"


@dataclass(frozen=True)
class ComparisonRow:
    attribute: str
    label_a: str
    label_b: str
    mean_a: float
    mean_b: float
    mwu: MwuResult


@dataclass(frozen=True)
class ScaledValue:
    raw: float
    scaled: float  # in [0, 1]
    scale_factor: float  # max - min of the attribute across subjects


def _midranks(combined: np.ndarray) -> np.ndarray:
    """Ranks 1..n with ties assigned the mean of their rank range."""
    n = combined.size
    order = np.argsort(combined, kind="stable")
    ranks = np.empty(n, dtype=np.float64)
    sorted_vals = combined[order]
    i = 0
    while i < n:
        j = i
        while j + 1 < n and sorted_vals[j + 1] == sorted_vals[i]:
            j += 1
        ranks[order[i : j + 1]] = (i + j) / 2.0 + 1.0
        i = j + 1
    return ranks


@lru_cache(maxsize=None)
def _arrangements_with_u(u: int, m: int, n: int) -> int:
    """Label arrangements of sample sizes (m, n) whose U statistic equals u.

    Classic recurrence N(u; m, n) = N(u - n; m - 1, n) + N(u; m, n - 1),
    exact integer arithmetic throughout.
    """
    if u < 0:
        return 0
    if m == 0 or n == 0:
        return 1 if u == 0 else 0
    return _arrangements_with_u(u - n, m - 1, n) + _arrangements_with_u(u, m, n - 1)


def _u_counts(n1: int, n2: int) -> list[int]:
    return [_arrangements_with_u(u, n1, n2) for u in range(n1 * n2 + 1)]


def _exact_p(u1: float, n1: int, n2: int, alternative: str) -> float:
    u = int(round(u1))
    counts = _u_counts(n1, n2)
    total = math.comb(n1 + n2, n1)
    cdf = sum(counts[: u + 1])
    sf = sum(counts[u:])
    if alternative == "less":
        return cdf / total
    if alternative == "greater":
        return sf / total
    return min(1.0, 2 * min(cdf, sf) / total)


def _normal_p(
    u1: float, n1: int, n2: int, tie_sizes: np.ndarray, alternative: str
) -> float:
    n = n1 + n2
    mu = n1 * n2 / 2.0
    tie_term = float(np.sum(tie_sizes**3 - tie_sizes)) / (n * (n - 1)) if n > 1 else 0.0
    var = n1 * n2 / 12.0 * ((n + 1) - tie_term)
    if var <= 0:
        return 1.0
    sd = math.sqrt(var)
    if alternative == "greater":
        z = (u1 - mu - 0.5) / sd
        return 0.5 * math.erfc(z / math.sqrt(2))
    if alternative == "less":
        z = (u1 - mu + 0.5) / sd
        return 0.5 * math.erfc(-z / math.sqrt(2))
    z = (abs(u1 - mu) - 0.5) / sd
    return min(1.0, 2 * 0.5 * math.erfc(z / math.sqrt(2)))


def mann_whitney(
    x, y, alternative: str = "two_sided", method: str = "auto"
) -> MwuResult:
    """Mann-Whitney U test of two independent samples.

    U1 counts the pairs where x exceeds y, plus half the tied pairs.
    ``alternative="greater"`` tests whether the first sample is
    stochastically larger. ``method`` is "auto" (exact for tie-free samples
    with n1 + n2 <= 20, normal approximation otherwise), or an explicit
    "exact" / "normal_approx" override.
    """
    if alternative not in ALTERNATIVES:
        raise ValueError(f"alternative must be one of {ALTERNATIVES}, got {alternative!r}")
    if method not in ("auto", "exact", "normal_approx"):
        raise ValueError(f"unknown method {method!r}")
    xa = np.asarray(x, dtype=np.float64)
    ya = np.asarray(y, dtype=np.float64)
    n1, n2 = xa.size, ya.size
    if n1 == 0 or n2 == 0:
        raise ValueError("mann_whitney requires both samples nonempty")
    if not (np.all(np.isfinite(xa)) and np.all(np.isfinite(ya))):
        raise ValueError("mann_whitney requires finite values")

    combined = np.concatenate([xa, ya])
    ranks = _midranks(combined)
    r1 = float(np.sum(ranks[:n1]))
    u1 = r1 - n1 * (n1 + 1) / 2.0
    u2 = n1 * n2 - u1

    _, tie_sizes = np.unique(combined, return_counts=True)
    has_ties = bool(np.any(tie_sizes > 1))

    if method == "auto":
        method = "exact" if (n1 + n2 <= 20 and not has_ties) else "normal_approx"
    if method == "exact":
        if has_ties:
            raise ValueError("exact method is only defined for tie-free samples")
        p = _exact_p(u1, n1, n2, alternative)
    else:
        p = _normal_p(u1, n1, n2, tie_sizes.astype(np.float64), alternative)

    return MwuResult(
        u1=u1,
        u2=u2,
        p_value=p,
        effect_size_cles=u1 / (n1 * n2),
        rank_biserial=1.0 - 2.0 * u2 / (n1 * n2),
        method=method,
    )


def mean_proportion(values) -> float:
    """Arithmetic mean; empty input is an error."""
    arr = np.asarray(values, dtype=np.float64)
    if arr.size == 0:
        raise ValueError("mean of empty sequence")
    return float(arr.mean())


def minmax_scale(values) -> list[float]:
    """Scale to [0, 1] by (v - min) / (max - min); constant input maps to all 0."""
    arr = np.asarray(values, dtype=np.float64)
    if arr.size == 0:
        raise ValueError("cannot scale empty sequence")
    lo, hi = float(arr.min()), float(arr.max())
    if hi == lo:
        return [0.0] * arr.size
    return [(float(v) - lo) / (hi - lo) for v in arr]


def compare_groups(a, b, label_a: str, label_b: str, attribute: str = "") -> ComparisonRow:
    """Means of two groups plus a two-sided Mann-Whitney comparison."""
    return ComparisonRow(
        attribute=attribute,
        label_a=label_a,
        label_b=label_b,
        mean_a=mean_proportion(a),
        mean_b=mean_proportion(b),
        mwu=mann_whitney(a, b, alternative="two_sided"),
    )


def scale_profiles(
    table: dict[str, dict[str, float]]
) -> dict[str, dict[str, ScaledValue]]:
    """Min-max scale each attribute across subjects for one-plot display.

    ``table`` maps subject -> attribute -> raw value; every subject must
    carry the same attributes. The per-attribute scale factor (max - min,
    0 for constant attributes) is kept alongside each scaled value.
    """
    if not table:
        return {}
    subjects = list(table)
    attributes = list(table[subjects[0]])
    for subject in subjects:
        if list(table[subject]) != attributes:
            raise ValueError("all subjects must share the same attribute set")
    out: dict[str, dict[str, ScaledValue]] = {s: {} for s in subjects}
    for attr in attributes:
        raw = [table[s][attr] for s in subjects]
        scaled = minmax_scale(raw)
        factor = max(raw) - min(raw)
        for s, r, v in zip(subjects, raw, scaled):
            out[s][attr] = ScaledValue(raw=r, scaled=v, scale_factor=factor)
    return out
