from fractions import Fraction

import pytest

from pauli_lab.core.counting import (
    QBinomial,
    count_level,
    degree_Gw,
    degree_Gw_as_printed,
    delta_sq_exact,
    distance_class_size,
    item4_product,
    item4_ratio,
    omega_half,
    q_binomial,
    question_count_Q,
    sandwich_holds,
    summation_exponent,
    summation_lemma_holds,
    v_count_Gw,
)
from pauli_lab.core.errors import ContractError


@pytest.mark.parametrize("n,m,expected", [
    (4, 2, 35),
    (3, 1, 7),
    (3, 2, 7),
    (5, 0, 1),
    (2, 3, 0),
])
def test_q_binomial(n, m, expected):
    assert q_binomial(n, m) == expected
    assert QBinomial.of(n, m).value == expected


@pytest.mark.parametrize("n,k,expected", [
    (1, 0, 1),
    (2, 2, 15),
    (2, 1, 15),
    (3, 3, 135),
    (4, 1, 255),
    (4, 4, 2295),
])
def test_count_level(n, k, expected):
    assert count_level(n, k) == expected


@pytest.mark.parametrize("n,expected", [(2, 2), (4, 56)])
def test_degree_gw_and_printed_erratum(n, expected):
    assert degree_Gw(n) == expected
    assert degree_Gw_as_printed(n) == 2 * expected


@pytest.mark.parametrize("n,expected", [(2, 3), (3, 15), (4, 135)])
def test_v_count_gw(n, expected):
    assert v_count_Gw(n) == expected


def test_question_counts():
    assert omega_half(2) == 6
    assert question_count_Q(2) == 90
    assert omega_half(4) == 280
    assert question_count_Q(4) == 280 * 2295


@pytest.mark.parametrize("n,expected", [(2, 3), (4, 5), (6, 9), (8, 17)])
def test_item4_ratio(n, expected):
    assert item4_ratio(n) == Fraction(expected)
    assert item4_product(n) == item4_ratio(n)
    assert item4_ratio(n) >= 2 ** (n // 2)


@pytest.mark.parametrize("fn", [omega_half, question_count_Q, degree_Gw, item4_product])
def test_odd_n_rejected(fn):
    with pytest.raises(ContractError):
        fn(3)


def test_distance_classes_partition_maximal_level():
    for m in range(1, 6):
        assert sum(distance_class_size(m, i) for i in range(m + 1)) == count_level(m, m)


def test_sandwich_and_summation_arithmetic():
    assert sandwich_holds(4, 2)
    assert all(sandwich_holds(n, m) for n in range(1, 21) for m in range(n + 1))
    assert all(summation_lemma_holds(n) for n in range(9, 21))
    for n in range(5, 21):
        assert summation_exponent(n, n - 2) == summation_exponent(n, n - 3)


def test_delta_sq_at_three():
    # each maximal measurement of L^3 holds 7 planes, each plane lies in 3 maximal ones
    assert delta_sq_exact(3) == 21
