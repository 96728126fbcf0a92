# core/walks.py
"""
Random walks and the T exponent of outcome graphs.

`hitting_walk_test` samples walks on a regular graph and compares the chance of
staying inside prescribed sets against the hitting bound. `walk_pipeline`
builds the walk graph W over a random regular graph on the maximal
measurements and reports its θ, an α lower bound and the implied T values.
"""
import logging
import math
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import numpy as np

from ..common.utils import chunk_seeds, parallel_map, split_counts
from ..models.reports import ValueEstimate, WalkReport
from .counting import count_level
from .errors import CertificateError, ContractError
from .graphs import (
    LabeledGraph,
    build_sn,
    clique_cover_by_measurement,
    disjunctive_product,
    is_clique_cover,
    random_regular_graph,
    walk_graph,
)
from .lattice import get_lattice
from .mis import greedy_independent_set, is_independent, max_independent_set
from .spectra import spectrum, t_value
from .stats import binomial_sigma, mc_estimate

logger = logging.getLogger(__name__)

REPRESENTATION_MAX_QUBITS = 4
REPRESENTATION_SAMPLES = 20


# ---------------------------------------------------------------------------
# Hitting lemma
# ---------------------------------------------------------------------------

@dataclass
class HittingResult:
    k: int
    mu: float
    lambda_over_d: float
    bound: float
    sigma: float
    estimate: ValueEstimate

    @property
    def within(self) -> bool:
        """Estimate at most bound + 3σ."""
        return self.estimate.value <= self.bound + 3 * self.sigma


def nontrivial_lambda(values: Sequence[float]) -> float:
    """Largest |eigenvalue| once one copy of the top eigenvalue is removed."""
    magnitudes = sorted((abs(v) for v in values), reverse=True)
    return float(magnitudes[1]) if len(magnitudes) > 1 else 0.0


def hitting_bound(mu: float, ratio: float, k: int) -> float:
    return (mu + ratio * (1 - mu)) ** k


def _membership(graph: LabeledGraph, sets: Sequence[Sequence[int]]) -> np.ndarray:
    size = len(graph)
    masks = np.zeros((len(sets), size), dtype=bool)
    for i, s in enumerate(sets):
        arr = np.asarray(s)
        if arr.dtype == bool:
            if arr.shape != (size,):
                raise ContractError("set mask has the wrong length")
            masks[i] = arr
            continue
        if arr.size and (arr.min() < 0 or arr.max() >= size):
            raise ContractError(f"set {i} contains vertices outside the graph")
        masks[i, arr.astype(np.int64)] = True
    return masks


def _walk_chunk(args) -> int:
    table, masks, seed_seq, count = args
    if count == 0:
        return 0
    rng = np.random.default_rng(seed_seq)
    size, d = table.shape
    current = rng.integers(0, size, size=count)
    alive = masks[0, current]
    for step in range(1, masks.shape[0]):
        current = table[current, rng.integers(0, d, size=count)]
        alive &= masks[step, current]
    return int(alive.sum())


def hitting_walk_test(graph: LabeledGraph, sets: Sequence[Sequence[int]], samples: int, seed: int,
                      mu: Optional[float] = None) -> HittingResult:
    """
    Pr(v_i in A_i for every i) over a uniform walk v_1..v_k, against
    (μ + (λ/d)(1 - μ))^k. μ defaults to the largest |A_i|/|V|.
    """
    if not graph.is_regular():
        logger.error(f"{graph.name}: hitting test on an irregular graph")
        raise ContractError(f"{graph.name} is not regular")
    if not sets:
        raise ContractError("hitting test needs at least one set")
    masks = _membership(graph, sets)
    largest = float(masks.mean(axis=1).max())
    if mu is None:
        mu = largest
    elif largest > mu + 1e-12:
        raise ContractError(f"a set has density {largest:.4f} above mu={mu:.4f}")
    report = spectrum(graph)
    ratio = nontrivial_lambda(report.eigenvalues) / graph.degree
    bound = hitting_bound(mu, ratio, len(sets))
    table = graph.neighbor_table
    jobs = [(table, masks, s, c) for s, c in zip(chunk_seeds(seed), split_counts(samples))]
    hits = sum(parallel_map(_walk_chunk, jobs))
    estimate = mc_estimate(hits, samples, seed)
    result = HittingResult(len(sets), mu, ratio, bound, binomial_sigma(bound, samples), estimate)
    logger.info(
        f"Hitting test on {graph.name}: k={len(sets)}, estimate {estimate.value:.5f}, "
        f"bound {bound:.5f}, within={result.within}"
    )
    return result


# ---------------------------------------------------------------------------
# θ and α of outcome graphs
# ---------------------------------------------------------------------------

def _alpha(graph: LabeledGraph, budget: int, seed: int) -> Tuple[List[int], int, bool]:
    warm = greedy_independent_set(graph.adjacency, np.random.default_rng(seed), restarts=5)
    result = max_independent_set(graph.adjacency, budget, seed_set=warm)
    if not is_independent(graph.adjacency, result.best):
        raise CertificateError(f"{graph.name}: independent set certificate failed the edge scan")
    return result.best, result.upper, result.closed


def _walk_states(graph: LabeledGraph, n: int) -> List[np.ndarray]:
    """Tensor products of outcome states along each walk."""
    from .matrix_sim import outcome_state

    lattice = get_lattice(n)
    cache = {}
    states = []
    for walk, codes in graph.vertices:
        vec = np.ones(1, dtype=complex)
        for m, code in zip(walk, codes):
            if (m, code) not in cache:
                cache[(m, code)] = outcome_state(lattice.outcome(m, code))
            vec = np.kron(vec, cache[(m, code)])
        states.append(vec)
    return states


def walk_representation_sums(graph: LabeledGraph, n: int, k: int, samples: int, seed: int) -> List[float]:
    from .matrix_sim import random_state, representation_sum

    states = _walk_states(graph, n)
    rng = np.random.default_rng(seed)
    return [representation_sum(states, random_state(n * k, rng)) for _ in range(samples)]


def walk_clique_cover(graph: LabeledGraph) -> List[List[int]]:
    """Vertices sharing a walk form a clique: distinct outcome tuples clash at some step."""
    groups = {}
    for idx, (walk, _) in enumerate(graph.vertices):
        groups.setdefault(walk, []).append(idx)
    return list(groups.values())


def rounded_pval(n: int, budget: int, seed: int) -> Fraction:
    """Pval(L^n) when the search closes, else its certified upper bound."""
    from .hv_solvers import pval_exact

    report = pval_exact(n, budget, seed)
    total = report.details["maximal_count"]
    return Fraction(report.details["alpha_upper"], total)


def walk_degree(pval: Fraction, v: int) -> int:
    """⌈1/Pval²⌉, bumped to the next feasible degree on v vertices."""
    d = math.ceil(1 / pval ** 2)
    if (v * d) % 2:
        d += 1
    if d >= v:
        raise ContractError(f"walk degree {d} is not below the {v} maximal measurements")
    return d


def walk_pipeline(n: int, k: int, seed: int, budget: int = 1_000_000) -> WalkReport:
    start = time.perf_counter()
    if n < 2:
        raise ContractError(f"the walk construction needs n >= 2, got {n}")
    if k < 1:
        raise ContractError(f"walk length must be >= 1, got {k}")
    lattice = get_lattice(n)
    pval = rounded_pval(n, budget, seed)
    d = walk_degree(pval, len(lattice.maximal))
    r = random_regular_graph(len(lattice.maximal), d, seed, payload=lattice.maximal)
    r_spectrum = spectrum(r, n)
    ratio = nontrivial_lambda(r_spectrum.eigenvalues) / d
    w = walk_graph(r, k)

    cover = walk_clique_cover(w)
    if not is_clique_cover(w, cover):
        raise CertificateError("walk clique cover is not a clique cover")
    theta = float(len(cover))
    if n * k <= REPRESENTATION_MAX_QUBITS:
        sums = walk_representation_sums(w, n, k, REPRESENTATION_SAMPLES, seed)
        deviation = max(abs(s - theta) for s in sums)
        if deviation > 1e-9:
            logger.error(f"walk representation sums deviate from {theta} by {deviation:.2e}")
            raise CertificateError("walk graph θ certificate does not close")

    best, _, closed = _alpha(w, budget, seed)
    alpha = len(best)
    bound = hitting_bound(float(pval), ratio, k)
    report = WalkReport(
        n=n,
        k=k,
        degree=d,
        seed=seed,
        vertex_count=len(w),
        theta=theta,
        alpha_lower=alpha,
        alpha_exact=closed,
        t_estimate=t_value(alpha, theta, len(w)),
        lambda_over_d=ratio,
        ratio_bound=bound,
        t_lower_bound=-math.log(bound) / math.log(len(w)) if bound > 0 else math.inf,
    )
    logger.info(
        f"Walk pipeline n={n} k={k} d={d}: |V(W)|={len(w)}, θ={theta:.0f}, α>={alpha}, "
        f"T≈{report.t_estimate:.4f} ({time.perf_counter() - start:.2f}s)"
    )
    return report


# ---------------------------------------------------------------------------
# T of stabilizer orthogonality graphs
# ---------------------------------------------------------------------------

@dataclass
class ProductTCheck:
    t_single: float
    t_square: float
    alpha_single: int
    alpha_square: int
    theta_single: int
    theta_square: int

    @property
    def equal(self) -> bool:
        return abs(self.t_single - self.t_square) <= 1e-12


def stabilizer_t(n: int, budget: int, seed: int = 0xC0FFEE) -> float:
    """T(S_n) from the certified α (exact search) and θ = |L^n_n|."""
    from .hv_solvers import pval_exact

    report = pval_exact(n, budget, seed)
    if not report.proof_closed:
        raise CertificateError(f"α(S_{n}) is not certified within {budget} nodes")
    return t_value(report.details["alpha_lower"], count_level(n, n), len(build_sn(n)))


def product_t_check(n: int, budget: int, seed: int = 0xC0FFEE) -> ProductTCheck:
    """T(S_n) against T(S_n ⊗ S_n), with α found exactly on both graphs."""
    graph = build_sn(n)
    square = disjunctive_product(graph, graph)
    cover = clique_cover_by_measurement(graph)
    # products of cliques are cliques in the disjunctive product
    square_cover = [[i * len(graph) + j for i in a for j in b] for a in cover for b in cover]
    if not (is_clique_cover(graph, cover) and is_clique_cover(square, square_cover)):
        raise CertificateError("clique covers failed on the product check")
    a1, _, closed1 = _alpha(graph, budget, seed)
    a2, _, closed2 = _alpha(square, budget, seed)
    if not (closed1 and closed2):
        raise CertificateError(f"α not certified within {budget} nodes")
    t1 = t_value(len(a1), len(cover), len(graph))
    t2 = t_value(len(a2), len(square_cover), len(square))
    logger.info(f"T(S_{n}) = {t1:.6f}, T(S_{n}⊗S_{n}) = {t2:.6f}")
    return ProductTCheck(t1, t2, len(a1), len(a2), len(cover), len(square_cover))


__all__ = [
    "HittingResult",
    "ProductTCheck",
    "hitting_bound",
    "hitting_walk_test",
    "nontrivial_lambda",
    "product_t_check",
    "rounded_pval",
    "stabilizer_t",
    "walk_clique_cover",
    "walk_degree",
    "walk_pipeline",
    "walk_representation_sums",
]
