# core/counting.py
"""Exact counting formulas for L^n: q-binomials, level sizes, question counts, G_w sizes."""
import logging
from dataclasses import dataclass
from fractions import Fraction
from math import comb, prod

from .errors import ContractError

logger = logging.getLogger(__name__)


def q_binomial(n: int, m: int) -> int:
    """Gaussian binomial {n choose m}_2 = prod_{i<m} (2^{n-i} - 1) / (2^{i+1} - 1)."""
    if m < 0 or n < 0 or m > n:
        return 0
    numerator = prod((1 << (n - i)) - 1 for i in range(m))
    denominator = prod((1 << (i + 1)) - 1 for i in range(m))
    return numerator // denominator


@dataclass(frozen=True)
class QBinomial:
    n: int
    m: int
    value: int

    @classmethod
    def of(cls, n: int, m: int) -> "QBinomial":
        return cls(n, m, q_binomial(n, m))


def count_level(n: int, k: int) -> int:
    """|L^n_k| = prod_{i<k} (2^{2n-i} - 2^i) / (2^k - 2^i)."""
    if k < 0:
        raise ContractError(f"level must be nonnegative, got {k}")
    numerator = prod((1 << (2 * n - i)) - (1 << i) for i in range(k))
    denominator = prod((1 << k) - (1 << i) for i in range(k))
    return numerator // denominator


def _require_even(n: int, what: str) -> None:
    if n < 2 or n % 2:
        logger.error(f"{what} requires an even n >= 2, got {n}")
        raise ContractError(f"{what} requires an even n >= 2, got {n}")


def distance_class_size(m: int, i: int) -> int:
    """Number of maximal isotropic subspaces at distance i from a fixed one in L^m (P_{0,i})."""
    return q_binomial(m, i) * (1 << comb(i + 1, 2))


def omega_half(n: int) -> int:
    """Ordered partners at distance n/2 of one maximal measurement."""
    _require_even(n, "omega_half")
    return distance_class_size(n, n // 2)


def question_count_Q(n: int) -> int:
    """Q: ordered pairs of maximal measurements at distance n/2."""
    _require_even(n, "question_count_Q")
    return omega_half(n) * count_level(n, n)


def degree_Gw_as_printed(n: int) -> int:
    """The item-3 expression as printed, with its leading factor 2."""
    _require_even(n, "degree_Gw")
    half = n // 2
    return 2 * q_binomial(n - 1, half - 1) * (1 << comb(half + 1, 2))


def degree_Gw(n: int) -> int:
    """Degree of G_w, i.e. the distance-n/2 valency of C_{n-1}(2)."""
    _require_even(n, "degree_Gw")
    half = n // 2
    value = q_binomial(n - 1, half - 1) * (1 << comb(half + 1, 2))
    logger.debug(f"degree_Gw(n={n}) = {value}; printed item-3 expression gives {degree_Gw_as_printed(n)}")
    return value


def v_count_Gw(n: int) -> int:
    """|V(G_w)| = |L^n_n| (2^n - 1) / |L^n_1|."""
    if n < 2:
        raise ContractError(f"v_count_Gw needs n >= 2, got {n}")
    return count_level(n, n) * ((1 << n) - 1) // count_level(n, 1)


def item4_ratio(n: int) -> Fraction:
    """Q / (|L^n_n| * degree_Gw(n)), computed from the counts."""
    return Fraction(question_count_Q(n), count_level(n, n) * degree_Gw(n))


def item4_product(n: int) -> Fraction:
    """The closed product of item 4."""
    _require_even(n, "item4_product")
    half = n // 2
    value = Fraction((1 << (half + 1)) - 1, (1 << half) - 1)
    for i in range(half - 1):
        value *= Fraction((1 << (n - i)) - 1, (1 << (n - i - 1)) - 1)
    return value


# ---------------------------------------------------------------------------
# Arithmetic behind the B_{n,2} bounds
# ---------------------------------------------------------------------------

def summation_exponent(n: int, i: int) -> int:
    """Q(i) = 2(n-i-2) + i(n-i) + C(i,2)."""
    return 2 * (n - i - 2) + i * (n - i) + comb(i, 2)


def summation_lemma_holds(n: int) -> bool:
    """sum_{i=0}^{n-2} 2^{Q(i)} <= 3 * 2^{Q(n-3)}."""
    total = sum(1 << summation_exponent(n, i) for i in range(n - 1))
    return total <= 3 * (1 << summation_exponent(n, n - 3))


def sandwich_holds(n: int, m: int) -> bool:
    """2^{m(n-m)} <= {n choose m}_2 <= 5 * 2^{m(n-m)}."""
    value = q_binomial(n, m)
    floor = 1 << (m * (n - m))
    return floor <= value <= 5 * floor


def lambda_sq_upper_sum(n: int) -> int:
    """sum_i {n-i choose 2}_2 {n choose i}_2 2^{C(i,2)}: the bound on λ(B_{n,2})^2 before estimation."""
    return sum(q_binomial(n - i, 2) * q_binomial(n, i) * (1 << comb(i, 2)) for i in range(n + 1))


def delta_sq_exact(n: int) -> int:
    """Δ(B_{n,2})^2 = sum_i {n-i choose 2}_2 P_{0,i}."""
    return sum(q_binomial(n - i, 2) * distance_class_size(n, i) for i in range(n + 1))


def lambda_sq_bound(n: int) -> int:
    return 75 * (1 << summation_exponent(n, n - 3))


def delta_sq_floor(n: int) -> int:
    return 1 << (3 * (n - 3) + comb(n - 2, 2))


__all__ = [
    "QBinomial",
    "count_level",
    "degree_Gw",
    "degree_Gw_as_printed",
    "delta_sq_exact",
    "delta_sq_floor",
    "distance_class_size",
    "item4_product",
    "item4_ratio",
    "lambda_sq_bound",
    "lambda_sq_upper_sum",
    "omega_half",
    "q_binomial",
    "question_count_Q",
    "sandwich_holds",
    "summation_exponent",
    "summation_lemma_holds",
    "v_count_Gw",
]
