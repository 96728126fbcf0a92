from fractions import Fraction

import numpy as np
import pytest

from pauli_lab.core.errors import CapacityError, ContractError
from pauli_lab.core.games import (
    game_by_name,
    game_parallel,
    game_pauli_agreement,
    game_z1,
    game_z_half,
    value_cube,
)
from pauli_lab.core.lattice import distance, meet


@pytest.fixture(scope="module")
def z1():
    return game_z1()


def test_z1_shape(z1):
    assert z1.base_count == 90
    assert z1.points.shape == (90, 1)
    assert z1.answer_count == 4


def test_z1_questions_share_one_dimension(z1):
    for i in range(0, 90, 7):
        q = z1.base_question(i)
        assert distance(q.x, q.y) == 1
        common = meet(q.x, q.y)
        assert int(z1.points[i, 0]) in common.subspace.elements


def test_z_half_at_two_is_z1(z1):
    z = game_z_half(2)
    assert z.base_count == z1.base_count
    with pytest.raises(ContractError):
        game_z_half(3)


@pytest.mark.slow
def test_z_half_at_four():
    z = game_z_half(4)
    assert z.base_count == 280 * 2295
    assert z.points.shape[1] == 3


def test_parallel_repetition(z1):
    z2 = game_parallel(z1, 2)
    assert z2.name == "z1^2"
    assert z2.question_count == 8100
    assert game_parallel(z1, 1).name == "z1"
    with pytest.raises(ContractError):
        game_parallel(z1, 0)


def test_questions_are_uniform(z1):
    listed = list(z1.questions())
    assert len(listed) == 90
    assert all(weight == Fraction(1, 90) for _, weight in listed)


def test_questions_cap(z1):
    with pytest.raises(CapacityError):
        next(game_parallel(z1, 4).questions())


@pytest.mark.parametrize("n,count", [(1, 3), (2, 135)])
def test_agreement_game_size(n, count):
    game = game_pauli_agreement(n)
    assert game.base_count == count
    assert np.array_equal(game.points[:, 0], game.ws)


def test_agreement_game_capacity():
    with pytest.raises(CapacityError):
        game_pauli_agreement(5)


def test_game_by_name():
    assert game_by_name("z1", 2).base_count == 90
    assert game_by_name("agreement", 1, k=2).question_count == 9
    with pytest.raises(ContractError):
        game_by_name("chsh", 2)


def test_value_cube_shape():
    assert value_cube(2).shape == (4, 15, 16)


def test_win_matrix(z1):
    table = z1.win_matrix(0)
    assert table.shape == (4, 4)
    # agreement on a single nonzero vector
    assert (table.sum(axis=1) == 2).all()


def test_invalid_answers_raise(z1):
    with pytest.raises(ContractError):
        z1.wins(np.array([0]), np.array([4]), np.array([0]))
