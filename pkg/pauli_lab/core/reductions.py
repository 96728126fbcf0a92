# core/reductions.py
"""
Reductions between games: synchronous to local loss, parallel repetition
bounds, and the symplectic hint that turns a Z_{n/2} question into n/2
independent Z_1 questions.
"""
import logging
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import List, Optional, Sequence, Tuple

import numpy as np

from ..common.utils import chunk_seeds, parallel_map, split_counts
from .errors import ContractError
from .gf2 import (
    GF2Vector,
    IsotropicSubspace,
    SymplecticMap,
    complete_symplectic_pairs,
    intersect,
    isotropic_from_rows,
    rref,
    solve_linear,
    sp_bits,
    standard_x,
    standard_z,
)
from .games import game_z1
from .lattice import (
    Measurement,
    Outcome,
    consistent,
    conventional_exponent_bits,
    get_lattice,
    outcome_eval_bits,
    pull_back_outcome,
)
from .stats import uniformity_pvalue

logger = logging.getLogger(__name__)

Z1_ANSWER_ALPHABET = 16


def syn_to_loc_bound(eps: float) -> float:
    """1 - Val_syn >= eps implies Val_loc <= 1 - eps/2."""
    if not 0 <= eps <= 1:
        raise ContractError(f"eps must lie in [0, 1], got {eps}")
    return 1 - eps / 2


# ---------------------------------------------------------------------------
# Referee protocol behind the syn-to-loc bound
# ---------------------------------------------------------------------------

@dataclass
class ProtocolRun:
    samples: int
    seed: int
    given_pvalue: float
    a_pvalue: float
    a_prime_pvalue: float
    alice_split_rate: float
    loss_rate: float

    @property
    def marginals_uniform(self) -> bool:
        return min(self.given_pvalue, self.a_pvalue, self.a_prime_pvalue) > 1e-3


@lru_cache(maxsize=None)
def _protocol_tables() -> Tuple[np.ndarray, np.ndarray, int]:
    """Fibers of L^2 by direction, and the Z_1 question index of each ordered pair (-1 if none)."""
    lattice = get_lattice(2)
    fibers = np.stack([lattice.fiber(w) for w in range(1, lattice.size)])
    game = game_z1()
    index = np.full((len(lattice), len(lattice)), -1, dtype=np.int64)
    index[game.xs, game.ys] = np.arange(game.base_count)
    return fibers, index, game.base_count


def _protocol_chunk(args) -> Tuple[np.ndarray, np.ndarray, np.ndarray, int, int]:
    seed_seq, count, alice, bob = args
    fibers, index, question_count = _protocol_tables()
    rng = np.random.default_rng(seed_seq)
    # steps 1-4: w, then b, a, a' a random ordering of the three measurements above w
    w = rng.integers(0, fibers.shape[0], size=count)
    order = np.argsort(rng.random((count, 3)), axis=1)
    chosen = fibers[w[:, None], order]
    b, a, a_prime = chosen[:, 0], chosen[:, 1], chosen[:, 2]
    # step 5: Alice gets a or a'
    coin = rng.integers(0, 2, size=count).astype(bool)
    alice_q = np.where(coin, a, a_prime)
    counts = [np.bincount(index[q, b], minlength=question_count) for q in (alice_q, a, a_prime)]
    cube_values = get_lattice(2).value_table
    split = loss = 0
    if alice is not None:
        va = cube_values(alice)
        vb = cube_values(bob)
        wb = w + 1
        split = int((va[a, wb] != va[a_prime, wb]).sum())
        loss = int((va[alice_q, wb] != vb[b, wb]).sum())
    return counts[0], counts[1], counts[2], split, loss


def simulate_protocol(samples: int, seed: int, alice: Optional[Sequence[int]] = None,
                      bob: Optional[Sequence[int]] = None) -> ProtocolRun:
    """
    Referee Z_1 by: w; b above w; a above w, a != b; a' the third one; Alice gets a or a'.
    Checks that (given pair), (a, b) and (a', b) are uniform over Z_1's questions and,
    for a deterministic pair of assignments, measures how often Alice's answers on a and a'
    split at w against the loss rate.
    """
    jobs = [(s, c, alice, bob) for s, c in zip(chunk_seeds(seed), split_counts(samples))]
    parts = parallel_map(_protocol_chunk, jobs)
    given = sum(p[0] for p in parts)
    pair_a = sum(p[1] for p in parts)
    pair_a_prime = sum(p[2] for p in parts)
    split = sum(p[3] for p in parts)
    loss = sum(p[4] for p in parts)
    run = ProtocolRun(
        samples=samples,
        seed=seed,
        given_pvalue=uniformity_pvalue(given),
        a_pvalue=uniformity_pvalue(pair_a),
        a_prime_pvalue=uniformity_pvalue(pair_a_prime),
        alice_split_rate=split / samples,
        loss_rate=loss / samples,
    )
    logger.info(
        f"protocol: p-values {run.given_pvalue:.3f}/{run.a_pvalue:.3f}/{run.a_prime_pvalue:.3f}, "
        f"split {run.alice_split_rate:.4f}, loss {run.loss_rate:.4f}"
    )
    return run


# ---------------------------------------------------------------------------
# Parallel repetition
# ---------------------------------------------------------------------------

def parallel_repetition_bound(val_loc: float, k: int, answer_alphabet: int = Z1_ANSWER_ALPHABET) -> float:
    """(1 - (1 - v)^3 / 6000)^{k / log2 |A||B|}."""
    if not 0 <= val_loc < 1:
        logger.error(f"parallel_repetition_bound needs val_loc in [0, 1), got {val_loc}")
        raise ContractError(f"val_loc must lie in [0, 1), got {val_loc}")
    if k < 1:
        raise ContractError(f"k must be >= 1, got {k}")
    return (1 - (1 - val_loc) ** 3 / 6000) ** (k / math.log2(answer_alphabet))


@dataclass
class RepetitionChain:
    n: int
    copies: int
    eps: float
    val_loc_bound: float
    bound: float
    exponent: float


def repetition_chain(n: int, eps: float) -> RepetitionChain:
    """Val_loc(Z_{n/2}) <= Val_loc(Z_1 repeated n/2 times) <= (1 - eps^3 / (2^3 6000))^{n/8}."""
    if n % 2 or n < 2:
        raise ContractError(f"the repetition chain needs an even n, got {n}")
    copies = n // 2
    val_loc = syn_to_loc_bound(eps)
    bound = parallel_repetition_bound(val_loc, copies)
    return RepetitionChain(n, copies, eps, val_loc, bound, copies / math.log2(Z1_ANSWER_ALPHABET))


# ---------------------------------------------------------------------------
# The hint map
# ---------------------------------------------------------------------------

def canonical_block_pair() -> Tuple[Measurement, Measurement]:
    """The fixed Z_1 question {XI, IX} / {XI, IZ} every block is sent to."""
    x = Measurement(isotropic_from_rows([standard_x(2, 0), standard_x(2, 1)], 2))
    y = Measurement(isotropic_from_rows([standard_x(2, 0), standard_z(2, 1)], 2))
    return x, y


def _complement(rows: Sequence[int], base: Sequence[int]) -> List[int]:
    kept: List[int] = []
    rank = len(rref(base))
    for r in rows:
        if len(rref(list(base) + kept + [r])) > rank + len(kept):
            kept.append(r)
    return kept


@dataclass
class HintTransfer:
    phi: SymplecticMap
    x: Measurement
    y: Measurement
    image_x: IsotropicSubspace
    image_y: IsotropicSubspace
    blocks: Tuple[Tuple[Measurement, Measurement], ...]


def hint_map(x: Measurement, y: Measurement) -> SymplecticMap:
    """
    Canonical φ with φ(i_j) = X_{2j-1}, φ(p_j) = Z_{2j-1}, φ(a_j) = X_{2j}, φ(b'_j) = Z_{2j}
    for i spanning x ∩ y, a completing x, b' the partners of a inside y and p the
    partners of i orthogonal to a and b'.
    """
    n = x.n
    if n % 2 or not (x.is_maximal() and y.is_maximal()):
        raise ContractError("hint maps need maximal measurements over an even n")
    common = intersect(x.subspace, y.subspace)
    if common.dim != n // 2:
        logger.error(f"hint_transfer: d(x, y) = {n - common.dim}, expected {n // 2}")
        raise ContractError(f"hint_transfer needs d(x, y) = n/2, got {n - common.dim}")
    i_rows = list(common.rows)
    a_rows = _complement(x.rows, i_rows)
    b_rows = _complement(y.rows, i_rows)
    pairing = [sum(sp_bits(a, b, n) << k for k, b in enumerate(b_rows)) for a in a_rows]
    b_prime = []
    for j in range(len(a_rows)):
        coeffs = solve_linear(pairing, [int(m == j) for m in range(len(a_rows))])
        if coeffs is None:
            raise ContractError("x and y do not pair non-degenerately modulo their intersection")
        vec = 0
        for k, b in enumerate(b_rows):
            if (coeffs >> k) & 1:
                vec ^= b
        b_prime.append(vec)
    p_rows = complete_symplectic_pairs(i_rows, n, fixed=a_rows + b_prime)
    source, target = [], []
    for j in range(n // 2):
        source += [(i_rows[j], p_rows[j]), (a_rows[j], b_prime[j])]
        target += [(standard_x(n, 2 * j), standard_z(n, 2 * j)), (standard_x(n, 2 * j + 1), standard_z(n, 2 * j + 1))]
    phi = SymplecticMap.from_pairs(n, source, target)
    if not phi.is_symplectic():
        raise ContractError("hint construction produced a non-symplectic map")
    return phi


def block_of(bits: int, n: int, j: int) -> int:
    """Restriction of an n-qubit vector to qubits 2j, 2j+1, as a 2-qubit vector."""
    v = GF2Vector(bits, n)
    xs, zs = v.x_bits(), v.z_bits()
    return GF2Vector.from_parts(xs[2 * j:2 * j + 2], zs[2 * j:2 * j + 2]).bits


def embed_block(bits: int, n: int, j: int) -> int:
    v = GF2Vector(bits, 2)
    xs, zs = [0] * n, [0] * n
    xs[2 * j:2 * j + 2] = v.x_bits()
    zs[2 * j:2 * j + 2] = v.z_bits()
    return GF2Vector.from_parts(xs, zs).bits


def split_blocks(s: IsotropicSubspace) -> Tuple[Measurement, ...]:
    """Block factors of a product-form subspace; raises if s is not a product over the blocks."""
    n = s.n
    blocks = []
    for j in range(n // 2):
        rows = [block_of(r, n, j) for r in s.elements]
        blocks.append(Measurement(isotropic_from_rows(rows, 2)))
    if sum(b.dim for b in blocks) != s.dim:
        raise ContractError("subspace is not a product over the two-qubit blocks")
    return tuple(blocks)


def hint_transfer(x: Measurement, y: Measurement) -> HintTransfer:
    phi = hint_map(x, y)
    image_x = phi.apply_subspace(x.subspace)
    image_y = phi.apply_subspace(y.subspace)
    blocks = tuple(zip(split_blocks(image_x), split_blocks(image_y)))
    return HintTransfer(phi, x, y, image_x, image_y, blocks)


@lru_cache(maxsize=None)
def blockwise_quantum_win(x: int, y: int, n: int) -> float:
    """Quantum win probability on a Z_{n/2} question: the product over the image blocks."""
    from .matrix_sim import agreement_probability

    lattice = get_lattice(n)
    transfer = hint_transfer(lattice.maximal[x], lattice.maximal[y])
    value = 1.0
    for bx, by in transfer.blocks:
        value *= agreement_probability(bx, by)
    return value


def blockwise_quantum_vector(n: int, xs: np.ndarray, ys: np.ndarray, sample: int = 200, seed: int = 0xC0FFEE) -> np.ndarray:
    """
    Quantum win probabilities on every Z_{n/2} question. Every hint sends its question
    to the canonical block pair, so each entry is that pair's value to the n/2; the hint
    is rebuilt on a seeded sample of questions to confirm the images.
    """
    from .matrix_sim import agreement_probability

    canonical = canonical_block_pair()
    lattice = get_lattice(n)
    rng = np.random.default_rng(seed)
    for q in rng.choice(len(xs), size=min(sample, len(xs)), replace=False):
        transfer = hint_transfer(lattice.maximal[int(xs[q])], lattice.maximal[int(ys[q])])
        if any(block != canonical for block in transfer.blocks):
            logger.error(f"hint image of question {q} is not the canonical block pair")
            raise ContractError("hint image differs from the canonical block pair")
    value = agreement_probability(*canonical) ** (n // 2)
    return np.full(len(xs), value)


# ---------------------------------------------------------------------------
# Pulling repetition strategies back through φ
# ---------------------------------------------------------------------------

def combine_blocks(image: IsotropicSubspace, parts: Sequence[Outcome]) -> Outcome:
    """
    The joint outcome on a product subspace. A(v) differs from the tensor product of
    the block operators A(v_j) by (-1)^{floor(s/2)}, s the number of blocks with e(v_j) = 1.
    """
    n = image.n
    values = []
    for r in image.rows:
        total = 0
        odd = 0
        for j, part in enumerate(parts):
            piece = block_of(r, n, j)
            total ^= outcome_eval_bits(part, piece)
            odd += conventional_exponent_bits(piece, 2)
        values.append(total ^ ((odd // 2) & 1))
    return Outcome(Measurement(image), tuple(values))


def pulled_back_answer(transfer: HintTransfer, side: str, block_choices: Sequence[Sequence[int]]) -> Outcome:
    """Answer on x (or y) from per-block Z_1 strategies, pulled back through φ."""
    lattice = get_lattice(2)
    pairs = transfer.blocks
    parts = []
    for j, (bx, by) in enumerate(pairs):
        m = bx if side == "alice" else by
        parts.append(lattice.outcome(lattice.index_of(m), block_choices[j][lattice.index_of(m)]))
    image = transfer.image_x if side == "alice" else transfer.image_y
    source = transfer.x if side == "alice" else transfer.y
    return pull_back_outcome(transfer.phi, combine_blocks(image, parts), source)


@dataclass
class TransferCheck:
    trials: int
    preserved: int
    image_blocks_valid: int

    @property
    def all_preserved(self) -> bool:
        return self.preserved == self.trials and self.image_blocks_valid == self.trials


def transfer_check(n: int, trials: int, seed: int) -> TransferCheck:
    """Random Z_{n/2} questions and random block strategies: win/loss must survive the pull-back."""
    lattice = get_lattice(n)
    small = get_lattice(2)
    xs, ys = np.nonzero(lattice.distances == n // 2)
    rng = np.random.default_rng(seed)
    preserved = valid = 0
    for _ in range(trials):
        q = int(rng.integers(0, len(xs)))
        transfer = hint_transfer(lattice.maximal[int(xs[q])], lattice.maximal[int(ys[q])])
        alice_blocks = [tuple(rng.integers(0, 4, size=len(small))) for _ in range(n // 2)]
        bob_blocks = [tuple(rng.integers(0, 4, size=len(small))) for _ in range(n // 2)]
        a = pulled_back_answer(transfer, "alice", alice_blocks)
        b = pulled_back_answer(transfer, "bob", bob_blocks)
        block_wins = all(
            consistent(
                small.outcome(small.index_of(bx), alice_blocks[j][small.index_of(bx)]),
                small.outcome(small.index_of(by), bob_blocks[j][small.index_of(by)]),
            )
            for j, (bx, by) in enumerate(transfer.blocks)
        )
        preserved += int(consistent(a, b) == block_wins)
        valid += int(all(intersect(bx.subspace, by.subspace).dim == 1 for bx, by in transfer.blocks))
    logger.info(f"hint transfer at n={n}: {preserved}/{trials} preserved, {valid}/{trials} valid images")
    return TransferCheck(trials, preserved, valid)


__all__ = [
    "HintTransfer",
    "ProtocolRun",
    "RepetitionChain",
    "TransferCheck",
    "block_of",
    "blockwise_quantum_vector",
    "blockwise_quantum_win",
    "canonical_block_pair",
    "combine_blocks",
    "embed_block",
    "hint_map",
    "hint_transfer",
    "parallel_repetition_bound",
    "pulled_back_answer",
    "repetition_chain",
    "simulate_protocol",
    "split_blocks",
    "syn_to_loc_bound",
    "transfer_check",
]
