# core/games.py
"""
Nonlocal games over maximal Pauli measurements.

A game keeps its base question list as index arrays into the lattice of
maximal measurements, uniform over the listed triples (x, y, w). Answers are
outcome codes. For each base question, `points` lists the nonzero vectors on
which the two answers must agree. Parallel repetition draws k independent base
questions and needs every coordinate to win.
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Iterator, List, Optional, Tuple

import numpy as np

from .counting import question_count_Q
from .errors import CapacityError, ContractError
from .lattice import Measurement, PauliLattice, get_lattice

logger = logging.getLogger(__name__)

EXACT_CAP = 2_000_000
POINT_CHUNK = 50_000


@dataclass(frozen=True)
class Question:
    x: Measurement
    y: Measurement
    w: Optional[int] = None


@dataclass
class GameSpec:
    name: str
    n: int
    xs: np.ndarray
    ys: np.ndarray
    points: np.ndarray
    ws: Optional[np.ndarray] = None
    k: int = 1

    @property
    def lattice(self) -> PauliLattice:
        return get_lattice(self.n)

    @property
    def base_count(self) -> int:
        return len(self.xs)

    @property
    def question_count(self) -> int:
        return self.base_count ** self.k

    @property
    def answer_count(self) -> int:
        return 1 << self.n

    def base_question(self, i: int) -> Question:
        maximal = self.lattice.maximal
        w = int(self.ws[i]) if self.ws is not None else None
        return Question(maximal[int(self.xs[i])], maximal[int(self.ys[i])], w)

    def questions(self) -> Iterator[Tuple[Tuple[Question, ...], Fraction]]:
        """Every question tuple with its probability."""
        if self.question_count > EXACT_CAP:
            raise CapacityError(f"{self.name}: {self.question_count} questions exceed the exhaustive cap {EXACT_CAP}")
        weight = Fraction(1, self.question_count)
        for combo in product(range(self.base_count), repeat=self.k):
            yield tuple(self.base_question(i) for i in combo), weight

    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        """(size, k) base question indices."""
        return rng.integers(0, self.base_count, size=(size, self.k))

    def valid_answer(self, a) -> bool:
        a = np.asarray(a)
        return bool(np.all((a >= 0) & (a < self.answer_count)))

    def wins(self, q: np.ndarray, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """Win indicator for base questions q with answer codes a, b (arrays of equal shape)."""
        if not (self.valid_answer(a) and self.valid_answer(b)):
            raise ContractError(f"{self.name}: answers must be outcome codes below {self.answer_count}")
        cube = value_cube(self.n)
        pts = self.points[q]
        left = cube[np.asarray(a)[..., None], self.xs[q][..., None], pts]
        right = cube[np.asarray(b)[..., None], self.ys[q][..., None], pts]
        return np.all(left == right, axis=-1)

    def win_matrix(self, q: int) -> np.ndarray:
        """codes x codes win table of one base question."""
        codes = np.arange(self.answer_count)
        a, b = np.meshgrid(codes, codes, indexing="ij")
        return self.wins(np.full(a.shape, q), a, b)


_CUBES = {}


def value_cube(n: int) -> np.ndarray:
    """cube[code, i, v]: value of outcome `code` of maximal i at vector v."""
    if n not in _CUBES:
        lattice = get_lattice(n)
        _CUBES[n] = np.stack([lattice.value_table([c] * len(lattice)) for c in range(lattice.outcome_count)])
    return _CUBES[n]


def _common_points(lattice: PauliLattice, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
    """Nonzero common vectors of each pair; every pair must share the same dimension."""
    member = lattice.membership
    out: List[np.ndarray] = []
    for start in range(0, len(xs), POINT_CHUNK):
        stop = start + POINT_CHUNK
        common = member[xs[start:stop]] & member[ys[start:stop]]
        width = int(common[0].sum())
        if not np.all(common.sum(axis=1) == width):
            raise ContractError("question pairs must share a common intersection dimension")
        _, cols = np.nonzero(common)
        out.append(cols.reshape(-1, width)[:, 1:])
    return np.concatenate(out)


def _pairs_at_distance(lattice: PauliLattice, d: int) -> Tuple[np.ndarray, np.ndarray]:
    xs, ys = np.nonzero(lattice.distances == d)
    return xs.astype(np.int64), ys.astype(np.int64)


def game_z1() -> GameSpec:
    """Z_1: ordered pairs of maximal measurements of L^2 sharing one dimension."""
    lattice = get_lattice(2)
    xs, ys = _pairs_at_distance(lattice, 1)
    game = GameSpec("z1", 2, xs, ys, _common_points(lattice, xs, ys))
    logger.info(f"Z_1: {game.base_count} questions")
    return game


def game_z_half(n: int) -> GameSpec:
    """Z_{n/2}: ordered pairs at distance n/2; answers must agree on the intersection."""
    if n % 2 or n not in (2, 4):
        logger.error(f"Z_(n/2) requested at n={n}")
        raise ContractError(f"Z_(n/2) runs at n in (2, 4), got {n}")
    lattice = get_lattice(n)
    xs, ys = _pairs_at_distance(lattice, n // 2)
    if len(xs) != question_count_Q(n):
        raise ContractError(f"Z_(n/2) at n={n}: {len(xs)} pairs, expected Q = {question_count_Q(n)}")
    game = GameSpec("z_half", n, xs, ys, _common_points(lattice, xs, ys))
    logger.info(f"Z_(n/2) at n={n}: {game.base_count} questions")
    return game


def game_parallel(z: GameSpec, k: int) -> GameSpec:
    if k < 1:
        raise ContractError(f"repetition count must be >= 1, got {k}")
    return GameSpec(f"{z.name}^{k}" if k > 1 else z.name, z.n, z.xs, z.ys, z.points, z.ws, z.k * k)


def game_pauli_agreement(n: int) -> GameSpec:
    """w uniform in L^n_1, then x, y above w uniform and independent; win iff the answers agree at w."""
    if not 1 <= n <= 4:
        raise CapacityError(f"the agreement game runs for 1 <= n <= 4, got {n}")
    lattice = get_lattice(n)
    xs, ys, ws = [], [], []
    for w in range(1, lattice.size):
        fiber = lattice.fiber(w)
        gx, gy = np.meshgrid(fiber, fiber, indexing="ij")
        xs.append(gx.ravel())
        ys.append(gy.ravel())
        ws.append(np.full(gx.size, w))
    w_all = np.concatenate(ws).astype(np.int64)
    game = GameSpec(
        "agreement", n, np.concatenate(xs).astype(np.int64), np.concatenate(ys).astype(np.int64),
        w_all[:, None], ws=w_all,
    )
    logger.info(f"Pauli agreement game at n={n}: {game.base_count} questions")
    return game


GAMES = {
    "z1": lambda n: game_z1(),
    "z_half": game_z_half,
    "agreement": game_pauli_agreement,
}


def game_by_name(name: str, n: int, k: int = 1) -> GameSpec:
    if name not in GAMES:
        raise ContractError(f"unknown game {name!r}; choose from {sorted(GAMES)}")
    return game_parallel(GAMES[name](n), k)


__all__ = [
    "EXACT_CAP",
    "GAMES",
    "GameSpec",
    "Question",
    "game_by_name",
    "game_parallel",
    "game_pauli_agreement",
    "game_z1",
    "game_z_half",
    "value_cube",
]
