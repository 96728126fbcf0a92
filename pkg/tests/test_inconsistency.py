from fractions import Fraction

import numpy as np
import pytest

from pauli_lab.core.errors import ContractError
from pauli_lab.core.hv_solvers import ContextualAssignment
from pauli_lab.core.inconsistency import (
    SplitSearch,
    assignment_chain,
    chain_trend,
    contradiction_triangles,
    cval_exact,
    cval_lower_chain,
    cval_of,
    cval_per_w,
    local_search_cval,
    ones_per_direction,
    split_count,
    triangle_histogram,
)


@pytest.fixture
def random_f(rng):
    return ContextualAssignment.random(2, rng)


def test_ones_per_direction_range(random_f):
    ones = ones_per_direction(random_f)
    assert ones.shape == (15,)
    assert ones.min() >= 0 and ones.max() <= 3


def test_cval_per_w_values(random_f):
    values = {Fraction(x).limit_denominator(81) for x in cval_per_w(random_f)}
    assert values <= {Fraction(0), Fraction(2, 9)}


def test_cval_matches_split_count(random_f):
    k = split_count(random_f.choices)
    assert cval_of(random_f) == Fraction(2, 9) * Fraction(k, 15)


def test_triangles_at_two(random_f):
    count = contradiction_triangles(random_f)
    assert count.double_count_agrees
    assert count.aggregate_holds
    assert count.per_w_violations == 0
    assert count.total == 4 * split_count(random_f.choices)
    assert sum(triangle_histogram(count).values()) == 15


@pytest.mark.slow
def test_triangles_at_four(rng):
    f = ContextualAssignment.random(4, rng)
    count = contradiction_triangles(f)
    assert count.double_count_agrees
    assert count.aggregate_holds


def test_triangles_need_even_small_n():
    with pytest.raises(ContractError):
        contradiction_triangles(ContextualAssignment.constant(3))


def test_local_search_reports_its_own_cval():
    found = local_search_cval(2, seed=4, restarts=2)
    assert found.cval == cval_of(ContextualAssignment(2, found.choices))


def test_split_search_respects_budget():
    result = SplitSearch().solve(budget=1, start=(0,) * 15)
    assert not result.closed
    assert result.lower == 1
    assert result.best == split_count((0,) * 15)


@pytest.mark.slow
def test_cval_exact_at_two():
    report = cval_exact(2, budget=10_000_000)
    assert report.proof_closed
    k = report.details["split_directions"]
    assert k >= 1
    assert report.optimum_exact == str(Fraction(2, 9) * Fraction(k, 15))
    assert report.lower == report.upper
    assert len(report.certificate) == 15


def test_cval_exact_small_and_out_of_range():
    assert cval_exact(1, budget=10).optimum == 0.0
    with pytest.raises(ContractError):
        cval_exact(5, budget=10)


def test_cval_bounded_at_three():
    report = cval_exact(3, budget=10, seed=2)
    assert not report.proof_closed
    assert report.lower == 0.0
    assert 0.0 < report.upper <= 0.25


def test_chain_at_two_is_vacuous_for_half():
    report = cval_lower_chain(2, val_syn=0.5, cval=0.1)
    assert report.holds
    assert any("vacuous" in note for note in report.notes)


def test_chain_at_four_is_vacuous():
    report = cval_lower_chain(4, val_syn=0.9, cval=0.0, val_syn_is_upper_bound=True)
    assert report.holds
    assert report.terms["item4_ratio"] == 5.0
    assert len(report.notes) == 2


def test_chain_rejects_odd_n():
    with pytest.raises(ContractError):
        cval_lower_chain(3, val_syn=0.9, cval=0.1)


def test_assignment_chain(random_f):
    report = assignment_chain(random_f)
    assert report.holds
    assert report.terms["per_w_violations"] == 0.0


def test_chain_trend_is_sorted():
    reports = [cval_lower_chain(4, 0.9, 0.0), cval_lower_chain(2, 0.9, 0.0)]
    trend = chain_trend(reports)
    assert [n for n, _ in trend] == [2, 4]
    assert all(np.isfinite(gap) for _, gap in trend)
