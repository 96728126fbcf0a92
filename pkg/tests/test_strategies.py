from fractions import Fraction

import pytest

from pauli_lab.core.errors import ContractError
from pauli_lab.core.games import game_parallel, game_pauli_agreement, game_z1
from pauli_lab.core.hv_solvers import ContextualAssignment
from pauli_lab.core.inconsistency import split_count
from pauli_lab.core.strategies import (
    Strategy,
    best_response_search,
    evaluate,
    game_result,
    val_syn_search,
)


@pytest.fixture(scope="module")
def z1():
    return game_z1()


def test_quantum_wins_z1(z1):
    estimate = evaluate(z1, Strategy.quantum())
    assert estimate.is_exact
    assert estimate.value == pytest.approx(1.0)
    assert estimate.exact == "1/1"


def test_random_strategy(z1):
    assert evaluate(z1, Strategy.random()).exact == "1/2"
    assert evaluate(game_parallel(z1, 2), Strategy.random()).exact == "1/4"
    assert evaluate(game_pauli_agreement(2), Strategy.random()).exact == "1/2"


def test_synchronous_value_counts_split_directions(z1, rng):
    f = ContextualAssignment.random(2, rng)
    estimate = evaluate(z1, Strategy.synchronous(f))
    assert estimate.value == pytest.approx(float(1 - Fraction(4 * split_count(f.choices), 90)))


def test_parallel_value_is_a_power(z1):
    strategy = Strategy.by_name("constant", 2, seed=0)
    single = evaluate(z1, strategy).value
    assert evaluate(game_parallel(z1, 2), strategy).value == pytest.approx(single ** 2)


def test_by_name():
    assert Strategy.by_name("quantum", 2, seed=0).kind == "quantum"
    assert Strategy.by_name("deterministic", 2, seed=3) == Strategy.by_name("deterministic", 2, seed=3)
    with pytest.raises(ContractError):
        Strategy.by_name("oracle", 2, seed=0)


def test_strategy_validation():
    with pytest.raises(ContractError):
        Strategy("deterministic", (0,) * 15)
    with pytest.raises(ContractError):
        Strategy("synchronous", (0,) * 15, (1,) * 15)


def test_assignment_size_must_match(z1):
    with pytest.raises(ContractError):
        evaluate(z1, Strategy.synchronous(ContextualAssignment.constant(1)))


def test_unknown_mode(z1):
    with pytest.raises(ContractError):
        evaluate(z1, Strategy.quantum(), mode="symbolic")


def test_monte_carlo_quantum(z1):
    estimate = evaluate(z1, Strategy.quantum(), mode="mc", samples=2_000, seed=1)
    assert estimate.samples == 2_000
    assert estimate.value == pytest.approx(1.0)
    assert estimate.contains(1.0)


def test_monte_carlo_random_covers_half(z1):
    estimate = evaluate(z1, Strategy.random(), mode="mc", samples=20_000, seed=2)
    assert estimate.contains(0.5)
    assert estimate.ci_low < estimate.value < estimate.ci_high


def test_monte_carlo_is_reproducible(z1):
    strategy = Strategy.by_name("deterministic", 2, seed=5)
    a = evaluate(z1, strategy, mode="mc", samples=3_000, seed=9)
    b = evaluate(z1, strategy, mode="mc", samples=3_000, seed=9)
    assert a == b


def test_game_result(z1):
    result = game_result(z1, Strategy.quantum(), "exact", 0, 0)
    assert result.game == "z1"
    assert result.strategy == "quantum"
    assert result.mode == "exact"


def test_best_response_improves(z1):
    start = Strategy.by_name("deterministic", 2, seed=7)
    start_value = Fraction(evaluate(z1, start).exact)
    result = best_response_search(z1, start, rounds=10, seed=7)
    assert result.value >= start_value
    assert result.value <= 1
    check = evaluate(z1, Strategy("deterministic", result.alice, result.bob))
    assert Fraction(check.exact) == result.value


def test_best_response_needs_single_coordinate(z1):
    with pytest.raises(ContractError):
        best_response_search(game_parallel(z1, 2))


@pytest.mark.slow
def test_val_syn_below_one():
    report = val_syn_search(budget=10_000_000)
    assert report.proof_closed
    assert report.details["certified_below_one"]
    assert report.optimum < 1


@pytest.mark.parametrize("build", [lambda z1: game_parallel(z1, 2), lambda z1: game_pauli_agreement(2)])
def test_val_syn_search_takes_only_z1(z1, build):
    with pytest.raises(ContractError):
        val_syn_search(build(z1), budget=10)
