# core/strategies.py
"""Strategies for the games in games.py, exact and Monte Carlo evaluation, and strategy search."""
import logging
import time
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Literal, Optional, Tuple

import numpy as np

from ..common.utils import chunk_seeds, parallel_map, split_counts
from ..models.reports import GameResult, SolveReport, ValueEstimate
from .errors import CapacityError, ContractError
from .games import GameSpec, game_z1
from .hv_solvers import ContextualAssignment
from .inconsistency import split_search
from .lattice import outcome_eval_bits
from .matrix_sim import MAX_SIM_QUBITS, agreement_probability, joint_answer_distribution
from .stats import exact_estimate, mc_estimate

logger = logging.getLogger(__name__)

StrategyKind = Literal["deterministic", "synchronous", "quantum", "random"]
QUANTUM_TOLERANCE = 1e-9


@dataclass(frozen=True)
class Strategy:
    """Deterministic strategies answer each coordinate from its own question only."""
    kind: StrategyKind
    alice: Optional[Tuple[int, ...]] = None
    bob: Optional[Tuple[int, ...]] = None

    def __post_init__(self):
        if self.kind in ("deterministic", "synchronous") and (self.alice is None or self.bob is None):
            raise ContractError(f"{self.kind} strategies need assignments for both players")
        if self.kind == "synchronous" and self.alice != self.bob:
            raise ContractError("synchronous strategies use one assignment for both players")

    @classmethod
    def deterministic(cls, alice: ContextualAssignment, bob: ContextualAssignment) -> "Strategy":
        if alice.n != bob.n:
            raise ContractError("both assignments must live over the same n")
        return cls("deterministic", alice.choices, bob.choices)

    @classmethod
    def synchronous(cls, f: ContextualAssignment) -> "Strategy":
        return cls("synchronous", f.choices, f.choices)

    @classmethod
    def quantum(cls) -> "Strategy":
        return cls("quantum")

    @classmethod
    def random(cls) -> "Strategy":
        return cls("random")

    @classmethod
    def by_name(cls, name: str, n: int, seed: int) -> "Strategy":
        """CLI strategies: quantum, random, constant (synchronous all-zero), or a seeded random assignment pair."""
        if name == "quantum":
            return cls.quantum()
        if name == "random":
            return cls.random()
        if name == "constant":
            return cls.synchronous(ContextualAssignment.constant(n))
        if name == "deterministic":
            rng = np.random.default_rng(seed)
            return cls.deterministic(ContextualAssignment.random(n, rng), ContextualAssignment.random(n, rng))
        raise ContractError(f"unknown strategy {name!r}")


# ---------------------------------------------------------------------------
# Per-question win probabilities
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def _quantum_pair(n: int, x: int, y: int, w: Optional[int]) -> float:
    from .lattice import get_lattice

    lattice = get_lattice(n)
    mx, my = lattice.maximal[x], lattice.maximal[y]
    if w is None:
        return agreement_probability(mx, my)
    total = 0.0
    for (f, g), p in joint_answer_distribution(mx, my).items():
        if outcome_eval_bits(f, w) == outcome_eval_bits(g, w):
            total += p
    return total


def quantum_win_vector(game: GameSpec) -> np.ndarray:
    """Exact win probability of the shared-entanglement strategy on every base question."""
    if game.n > MAX_SIM_QUBITS:
        if game.name.startswith("z_half"):
            from .reductions import blockwise_quantum_vector

            return blockwise_quantum_vector(game.n, game.xs, game.ys)
        raise CapacityError(f"quantum evaluation of {game.name} needs n <= {MAX_SIM_QUBITS}, got {game.n}")
    ws = game.ws if game.ws is not None else [None] * game.base_count
    return np.array([
        _quantum_pair(game.n, int(x), int(y), None if w is None else int(w))
        for x, y, w in zip(game.xs, game.ys, ws)
    ])


def random_win_vector(game: GameSpec) -> np.ndarray:
    """Independent uniform answers agree on m nonzero common points with probability 2^{-dim}."""
    # the m = 2^d - 1 nonzero points of a d-dimensional intersection
    dims = np.log2(game.points.shape[1] + 1)
    return np.full(game.base_count, 2.0 ** -dims)


def deterministic_win_vector(game: GameSpec, strategy: Strategy) -> np.ndarray:
    q = np.arange(game.base_count)
    alice = np.asarray(strategy.alice)
    bob = np.asarray(strategy.bob)
    return game.wins(q, alice[game.xs], bob[game.ys]).astype(float)


def win_vector(game: GameSpec, strategy: Strategy) -> np.ndarray:
    if strategy.kind == "quantum":
        return quantum_win_vector(game)
    if strategy.kind == "random":
        return random_win_vector(game)
    return deterministic_win_vector(game, strategy)


# ---------------------------------------------------------------------------
# Evaluation
# ---------------------------------------------------------------------------

def _exact(game: GameSpec, strategy: Strategy) -> ValueEstimate:
    vector = win_vector(game, strategy)
    if strategy.kind in ("deterministic", "synchronous"):
        single = Fraction(int(vector.sum()), game.base_count)
    elif strategy.kind == "random":
        single = Fraction(1, int(round(1 / vector[0])))
    else:
        mean = float(vector.mean())
        single = Fraction(mean).limit_denominator(10**6)
        if abs(float(single) - mean) > QUANTUM_TOLERANCE:
            return ValueEstimate(value=mean ** game.k)
    # coordinates are answered independently under a product question distribution
    return exact_estimate(single ** game.k)


def _mc_chunk(args) -> int:
    game, strategy, vector, seed_seq, count = args
    if count == 0:
        return 0
    rng = np.random.default_rng(seed_seq)
    q = game.sample(rng, count)
    if strategy.kind in ("deterministic", "synchronous"):
        won = vector[q] > 0.5
    elif strategy.kind == "random":
        a = rng.integers(0, game.answer_count, size=q.shape)
        b = rng.integers(0, game.answer_count, size=q.shape)
        won = game.wins(q, a, b)
    else:
        won = rng.random(q.shape) < vector[q]
    return int(np.all(won, axis=1).sum())


def _mc(game: GameSpec, strategy: Strategy, samples: int, seed: int) -> ValueEstimate:
    vector = None if strategy.kind == "random" else win_vector(game, strategy)
    jobs = [(game, strategy, vector, s, c) for s, c in zip(chunk_seeds(seed), split_counts(samples))]
    successes = sum(parallel_map(_mc_chunk, jobs))
    return mc_estimate(successes, samples, seed)


def evaluate(game: GameSpec, strategy: Strategy, mode: str = "exact", samples: int = 100_000,
             seed: int = 0xC0FFEE) -> ValueEstimate:
    """
    Exact: the rational value over the full question multiset (quantum values
    come from trace computations). MC: a Wilson interval from `samples` draws.
    """
    if strategy.kind in ("deterministic", "synchronous") and len(strategy.alice) != len(game.lattice):
        raise ContractError(f"strategy assignments do not match L^{game.n}")
    start = time.perf_counter()
    if mode == "exact":
        estimate = _exact(game, strategy)
    elif mode == "mc":
        estimate = _mc(game, strategy, samples, seed)
    else:
        raise ContractError(f"unknown evaluation mode {mode!r}")
    logger.info(f"{game.name} n={game.n} {strategy.kind} {mode}: {estimate.value:.6f} ({time.perf_counter() - start:.2f}s)")
    return estimate


def game_result(game: GameSpec, strategy: Strategy, mode: str, samples: int, seed: int) -> GameResult:
    estimate = evaluate(game, strategy, mode, samples, seed)
    return GameResult(game=game.name, n=game.n, strategy=strategy.kind, mode=mode, estimate=estimate)


# ---------------------------------------------------------------------------
# Synchronous value of Z_1
# ---------------------------------------------------------------------------

def val_syn_search(game: Optional[GameSpec] = None, budget: int = 10_000_000, seed: int = 0xC0FFEE) -> SolveReport:
    """Exact Val_syn of Z_1 (the default game) from the split search; always certified < 1."""
    from .fixtures import format_outcome

    game = game or game_z1()
    if game.name != "z1" or game.n != 2:
        logger.error(f"Synchronous value search got game {game.name} at n={game.n}")
        raise ContractError(f"synchronous value search is implemented for Z_1 only, got {game.name}")
    start = time.perf_counter()
    result = split_search(budget, seed)
    f = ContextualAssignment(2, result.choices)
    evaluated = evaluate(game, Strategy.synchronous(f))
    if abs(evaluated.value - float(result.val_syn)) > 1e-12:
        raise ContractError(f"certificate evaluates to {evaluated.value}, search claims {float(result.val_syn)}")
    upper = result.val_syn_upper
    return SolveReport(
        problem="val_syn_z1",
        n=2,
        optimum=float(result.val_syn) if result.closed else None,
        optimum_exact=str(result.val_syn) if result.closed else None,
        lower=float(result.val_syn),
        upper=float(upper),
        certificate=[format_outcome(o) for o in f.as_outcomes()],
        nodes=result.nodes,
        wall_time=time.perf_counter() - start,
        proof_closed=result.closed,
        details={"split_directions": result.best, "certified_below_one": upper < 1},
    )


# ---------------------------------------------------------------------------
# Best responses
# ---------------------------------------------------------------------------

@dataclass
class BestResponseResult:
    alice: Tuple[int, ...]
    bob: Tuple[int, ...]
    value: Fraction
    rounds: int


def _respond(game: GameSpec, fixed: np.ndarray, side: str) -> np.ndarray:
    """Best codes for one player against the other's fixed assignment, summed over base questions."""
    size = len(game.lattice)
    codes = game.answer_count
    q = np.arange(game.base_count)
    own = game.xs if side == "alice" else game.ys
    scores = np.zeros((size, codes))
    for code in range(codes):
        mine = np.full(game.base_count, code)
        won = game.wins(q, mine, fixed[game.ys]) if side == "alice" else game.wins(q, fixed[game.xs], mine)
        np.add.at(scores[:, code], own, won.astype(float))
    return np.argmax(scores, axis=1)


def best_response_search(game: GameSpec, start: Optional[Strategy] = None, rounds: int = 20,
                         seed: int = 0xC0FFEE) -> BestResponseResult:
    """Alternate best responses from `start`; a lower bound on Val_det of a single-coordinate game."""
    if game.k != 1:
        raise ContractError("best responses run on single-coordinate games")
    rng = np.random.default_rng(seed)
    size = len(game.lattice)
    if start is not None and start.alice is not None:
        alice, bob = np.asarray(start.alice), np.asarray(start.bob)
    else:
        alice = rng.integers(0, game.answer_count, size=size)
        bob = rng.integers(0, game.answer_count, size=size)

    def value(a, b) -> Fraction:
        won = game.wins(np.arange(game.base_count), a[game.xs], b[game.ys])
        return Fraction(int(won.sum()), game.base_count)

    best = value(alice, bob)
    done = 0
    for done in range(1, rounds + 1):
        # neither response can lower the value, so a flat round is a fixed point
        new_alice = _respond(game, bob, "alice")
        new_bob = _respond(game, new_alice, "bob")
        current = value(new_alice, new_bob)
        if current <= best:
            break
        alice, bob, best = new_alice, new_bob, current
    logger.info(f"best response on {game.name} n={game.n}: {float(best):.6f} after {done} rounds")
    return BestResponseResult(tuple(int(c) for c in alice), tuple(int(c) for c in bob), best, done)


__all__ = [
    "BestResponseResult",
    "Strategy",
    "best_response_search",
    "deterministic_win_vector",
    "evaluate",
    "game_result",
    "quantum_win_vector",
    "random_win_vector",
    "val_syn_search",
    "win_vector",
]
