# core/stats.py
"""Interval estimates and goodness-of-fit helpers for Monte Carlo checks."""
import math
from fractions import Fraction
from typing import Optional, Sequence, Tuple

import numpy as np
from scipy import stats

from ..models.reports import ValueEstimate

CONFIDENCE = 0.99


def wilson_interval(successes: int, trials: int, confidence: float = CONFIDENCE) -> Tuple[float, float]:
    if trials <= 0:
        raise ValueError("wilson_interval needs at least one trial")
    z = float(stats.norm.ppf(0.5 + confidence / 2))
    p = successes / trials
    denom = 1 + z * z / trials
    centre = (p + z * z / (2 * trials)) / denom
    half = z * math.sqrt(p * (1 - p) / trials + z * z / (4 * trials * trials)) / denom
    return max(0.0, centre - half), min(1.0, centre + half)


def mc_estimate(successes: int, trials: int, seed: Optional[int]) -> ValueEstimate:
    low, high = wilson_interval(successes, trials)
    return ValueEstimate(value=successes / trials, ci_low=low, ci_high=high, samples=trials, seed=seed)


def exact_estimate(value: Fraction) -> ValueEstimate:
    return ValueEstimate(value=float(value), exact=f"{value.numerator}/{value.denominator}")


def binomial_sigma(p: float, trials: int) -> float:
    return math.sqrt(max(p * (1 - p), 0.0) / trials)


def uniformity_pvalue(counts: Sequence[int]) -> float:
    """Chi-square goodness-of-fit p-value against the uniform distribution."""
    observed = np.asarray(counts, dtype=float)
    return float(stats.chisquare(observed).pvalue)
