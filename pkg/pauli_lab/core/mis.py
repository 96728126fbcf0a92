# core/mis.py
"""
Maximum independent set by branch and bound.

The search runs as a maximum clique search on the complement graph. Candidate
sets are bitsets (Python ints); each node is bounded by a greedy partition of
the candidates into cliques of the original graph, since an independent set
takes at most one vertex per clique.
"""
import logging
import time
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

logger = logging.getLogger(__name__)


class _BudgetExhausted(Exception):
    pass


@dataclass
class MISResult:
    best: List[int]
    lower: int
    upper: int
    nodes: int
    closed: bool
    wall_time: float


def is_independent(adjacency: np.ndarray, vertices: Sequence[int]) -> bool:
    idx = list(vertices)
    if len(set(idx)) != len(idx):
        return False
    return not adjacency[np.ix_(idx, idx)].any()


def greedy_clique_cover_size(adjacency: np.ndarray) -> int:
    """Size of a greedy partition into cliques: an upper bound on α."""
    solver = BranchAndBoundMIS(adjacency)
    _, bounds = solver._clique_partition(solver.all_mask)
    return max(bounds) if bounds else 0


class BranchAndBoundMIS:
    def __init__(self, adjacency: np.ndarray):
        adjacency = np.asarray(adjacency, dtype=bool)
        self.size = adjacency.shape[0]
        # Low-degree vertices first: they tend to sit in large independent sets.
        self.order = [int(v) for v in np.argsort(adjacency.sum(axis=1), kind="stable")]
        position = {v: i for i, v in enumerate(self.order)}
        self.compatible: List[int] = []
        for v in self.order:
            mask = 0
            for u in np.flatnonzero(~adjacency[v]):
                if u != v:
                    mask |= 1 << position[int(u)]
            self.compatible.append(mask)
        self.all_mask = (1 << self.size) - 1
        self.best: List[int] = []
        self.nodes = 0
        self.budget = 0

    def _clique_partition(self, candidates: int) -> Tuple[List[int], List[int]]:
        """Vertices of `candidates` in clique-class order, with the running class count."""
        order: List[int] = []
        bounds: List[int] = []
        klass = 0
        uncoloured = candidates
        while uncoloured:
            klass += 1
            q = uncoloured
            while q:
                v = (q & -q).bit_length() - 1
                q &= ~self.compatible[v] & ~(1 << v)
                uncoloured &= ~(1 << v)
                order.append(v)
                bounds.append(klass)
        return order, bounds

    def _expand(self, candidates: int, current: List[int]) -> None:
        self.nodes += 1
        if self.nodes > self.budget:
            raise _BudgetExhausted()
        order, bounds = self._clique_partition(candidates)
        for i in range(len(order) - 1, -1, -1):
            if len(current) + bounds[i] <= len(self.best):
                return
            v = order[i]
            current.append(v)
            nxt = candidates & self.compatible[v]
            if nxt:
                self._expand(nxt, current)
            elif len(current) > len(self.best):
                self.best = list(current)
                logger.debug(f"MIS: improved to {len(self.best)} after {self.nodes} nodes")
            current.pop()
            candidates &= ~(1 << v)

    def solve(self, budget: int, seed_set: Optional[Sequence[int]] = None) -> MISResult:
        start = time.perf_counter()
        self.budget = budget
        self.nodes = 0
        position = {v: i for i, v in enumerate(self.order)}
        self.best = [position[v] for v in seed_set] if seed_set else []
        upper = self.size
        closed = True
        order, bounds = self._clique_partition(self.all_mask)
        upper = max(bounds) if bounds else 0
        candidates = self.all_mask
        try:
            for i in range(len(order) - 1, -1, -1):
                if bounds[i] <= len(self.best):
                    break
                v = order[i]
                nxt = candidates & self.compatible[v]
                current = [v]
                self.nodes += 1
                if nxt:
                    self._expand(nxt, current)
                elif len(self.best) < 1:
                    self.best = [v]
                candidates &= ~(1 << v)
            upper = len(self.best)
        except _BudgetExhausted:
            closed = False
            upper = max(len(self.best), bounds[i])
            logger.warning(f"MIS search stopped at the node budget {budget}; bounds [{len(self.best)}, {upper}]")
        best = sorted(self.order[v] for v in self.best)
        return MISResult(best, len(best), upper, self.nodes, closed, time.perf_counter() - start)


def max_independent_set(adjacency: np.ndarray, budget: int, seed_set: Optional[Sequence[int]] = None) -> MISResult:
    result = BranchAndBoundMIS(adjacency).solve(budget, seed_set)
    logger.info(
        f"MIS on {adjacency.shape[0]} vertices: [{result.lower}, {result.upper}], "
        f"{result.nodes} nodes, closed={result.closed}"
    )
    return result


def greedy_independent_set(adjacency: np.ndarray, rng: np.random.Generator, restarts: int = 20) -> List[int]:
    """Randomised min-degree greedy followed by (1,2)-swap local search; a lower bound on α."""
    adjacency = np.asarray(adjacency, dtype=bool)
    size = adjacency.shape[0]
    best: List[int] = []
    for _ in range(restarts):
        alive = np.ones(size, dtype=bool)
        chosen: List[int] = []
        while alive.any():
            degrees = (adjacency[:, alive][alive]).sum(axis=1)
            live = np.flatnonzero(alive)
            ties = live[degrees == degrees.min()]
            v = int(rng.choice(ties))
            chosen.append(v)
            alive[v] = False
            alive[adjacency[v]] = False
        chosen = _two_improvements(adjacency, chosen)
        if len(chosen) > len(best):
            best = chosen
    return sorted(best)


def _two_improvements(adjacency: np.ndarray, chosen: List[int]) -> List[int]:
    """Replace one chosen vertex by two free ones while possible."""
    chosen_set = set(chosen)
    improved = True
    while improved:
        improved = False
        in_set = np.zeros(adjacency.shape[0], dtype=bool)
        in_set[list(chosen_set)] = True
        tight = adjacency[:, in_set].sum(axis=1)
        for v in list(chosen_set):
            # vertices whose only chosen neighbour is v
            free = np.flatnonzero((tight == 1) & adjacency[v] & ~in_set)
            for a_i, a in enumerate(free):
                rest = free[a_i + 1:]
                partners = rest[~adjacency[a, rest]]
                if partners.size:
                    chosen_set.discard(v)
                    chosen_set.update((int(a), int(partners[0])))
                    improved = True
                    break
            if improved:
                break
        if not improved:
            in_set = np.zeros(adjacency.shape[0], dtype=bool)
            in_set[list(chosen_set)] = True
            loose = np.flatnonzero(~in_set & ~adjacency[:, in_set].any(axis=1))
            if loose.size:
                chosen_set.add(int(loose[0]))
                improved = True
    return sorted(chosen_set)
