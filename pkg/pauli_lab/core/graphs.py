# core/graphs.py
"""
Graphs over L^n: G'_w, G_w, B_{n,2}, the stabilizer orthogonality graph S_n,
disjunctive products, walk graphs and random regular graphs.
"""
import logging
import os
from dataclasses import dataclass
from functools import cached_property
from typing import Any, Dict, List, Optional, Sequence, Tuple

import networkx as nx
import numpy as np

from .errors import CapacityError, ContractError
from .gf2 import IsotropicSubspace, isotropic_from_rows
from .lattice import Measurement, PauliLattice, get_lattice, outcome_table, outcomes

logger = logging.getLogger(__name__)

MAX_GRAPH_VERTICES = 10_000


@dataclass
class LabeledGraph:
    """Simple undirected graph with a deterministically ordered payload per vertex."""
    name: str
    vertices: List[Any]
    adjacency: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.adjacency, dtype=bool)
        if a.shape != (len(self.vertices), len(self.vertices)):
            raise ContractError(f"{self.name}: adjacency shape {a.shape} does not match {len(self.vertices)} vertices")
        if a.diagonal().any():
            raise ContractError(f"{self.name}: self-loops are not allowed")
        if not np.array_equal(a, a.T):
            raise ContractError(f"{self.name}: adjacency is not symmetric")
        self.adjacency = a

    def __len__(self) -> int:
        return len(self.vertices)

    @cached_property
    def degrees(self) -> np.ndarray:
        return self.adjacency.sum(axis=1)

    def is_regular(self) -> bool:
        return len(self.vertices) == 0 or bool((self.degrees == self.degrees[0]).all())

    @property
    def degree(self) -> int:
        if not self.is_regular():
            logger.error(f"{self.name}: degree requested on an irregular graph")
            raise ContractError(f"{self.name} is not regular")
        return int(self.degrees[0]) if len(self.vertices) else 0

    def neighbors(self, i: int) -> np.ndarray:
        return np.flatnonzero(self.adjacency[i])

    @cached_property
    def neighbor_table(self) -> np.ndarray:
        """(V x d) neighbor indices of a regular graph."""
        d = self.degree
        return np.argsort(~self.adjacency, axis=1, kind="stable")[:, :d]

    def edge_count(self) -> int:
        return int(self.adjacency.sum()) // 2

    def to_networkx(self) -> nx.Graph:
        g = nx.from_numpy_array(self.adjacency.astype(np.int8))
        nx.set_node_attributes(g, {i: str(v) for i, v in enumerate(self.vertices)}, "payload")
        return g


@dataclass
class BipartiteGraph:
    """Bipartite graph given by its (left x right) biadjacency matrix."""
    name: str
    left: List[Any]
    right: List[Any]
    biadjacency: np.ndarray

    def __post_init__(self):
        self.biadjacency = np.asarray(self.biadjacency, dtype=bool)
        if self.biadjacency.shape != (len(self.left), len(self.right)):
            raise ContractError(f"{self.name}: biadjacency shape does not match the parts")

    @property
    def left_degrees(self) -> np.ndarray:
        return self.biadjacency.sum(axis=1)

    @property
    def right_degrees(self) -> np.ndarray:
        return self.biadjacency.sum(axis=0)

    def is_biregular(self) -> bool:
        ld, rd = self.left_degrees, self.right_degrees
        return bool((ld == ld[0]).all() and (rd == rd[0]).all())

    def edge_count(self) -> int:
        return int(self.biadjacency.sum())


# ---------------------------------------------------------------------------
# Graphs on the fiber above w
# ---------------------------------------------------------------------------

def default_direction(n: int) -> IsotropicSubspace:
    """span{(0..0|0..01)}: the Z on the last qubit."""
    return isotropic_from_rows([1], n)


def _fiber(n: int, w: Optional[IsotropicSubspace]) -> Tuple[PauliLattice, np.ndarray]:
    w = w if w is not None else default_direction(n)
    if w.n != n:
        raise ContractError(f"direction lives over n={w.n}, graph requested over n={n}")
    if w.dim != 1:
        logger.error(f"fiber graphs need dim w = 1, got dim {w.dim}")
        raise ContractError(f"fiber graphs need dim w = 1, got dim {w.dim}")
    lattice = get_lattice(n)
    return lattice, lattice.fiber(w.rows[0])


def build_gw_prime(n: int, w: Optional[IsotropicSubspace] = None) -> LabeledGraph:
    """G'_w: maximal measurements above w, adjacent at distance 1."""
    lattice, idx = _fiber(n, w)
    adjacency = lattice.distances[np.ix_(idx, idx)] == 1
    logger.info(f"Built G'_w at n={n}: {len(idx)} vertices")
    return LabeledGraph("gwp", [lattice.maximal[i] for i in idx], adjacency)


def build_gw(n: int, w: Optional[IsotropicSubspace] = None) -> LabeledGraph:
    """G_w: maximal measurements above w, adjacent at distance n/2."""
    if n % 2:
        logger.error(f"G_w requested at odd n={n}")
        raise ContractError(f"G_w needs an even n, got {n}")
    lattice, idx = _fiber(n, w)
    adjacency = lattice.distances[np.ix_(idx, idx)] == n // 2
    logger.info(f"Built G_w at n={n}: {len(idx)} vertices")
    return LabeledGraph("gw", [lattice.maximal[i] for i in idx], adjacency)


def build_b_n2(n: int) -> BipartiteGraph:
    """B_{n,2}: L^n_n against L^n_2 by containment."""
    if n < 3:
        logger.error(f"B_(n,2) requested at n={n}")
        raise ContractError(f"B_(n,2) needs n >= 3, got {n}")
    lattice = get_lattice(n)
    planes = lattice.level(2)
    member = lattice.membership
    biadjacency = np.zeros((len(lattice), len(planes)), dtype=bool)
    for j, plane in enumerate(planes):
        r1, r2 = plane.rows
        biadjacency[:, j] = member[:, r1] & member[:, r2]
    logger.info(f"Built B_({n},2): {len(lattice)} x {len(planes)}")
    return BipartiteGraph("b", lattice.maximal, planes, biadjacency)


# ---------------------------------------------------------------------------
# Outcome graphs
# ---------------------------------------------------------------------------

def outcome_sign_rows(lattice: PauliLattice) -> np.ndarray:
    """(N * 2^n) x 4^n: ±1 on the members of measurement i for outcome code c at row i * 2^n + c."""
    rows = []
    member = lattice.membership
    for i in range(len(lattice)):
        for code in range(lattice.outcome_count):
            rows.append(np.where(member[i], 1 - 2 * lattice.values(i, code), 0))
    return np.asarray(rows, dtype=np.float32)


def outcome_inconsistency(lattice: PauliLattice) -> np.ndarray:
    """Inconsistency relation over all outcomes of all maximal measurements."""
    signs = outcome_sign_rows(lattice)
    agreement = np.rint(signs @ signs.T).astype(np.int64)
    sizes = np.repeat(np.repeat(lattice.intersection_sizes, lattice.outcome_count, axis=0), lattice.outcome_count, axis=1)
    return agreement != sizes


def outcome_graph(measurements: Sequence[Measurement], name: str) -> LabeledGraph:
    """Outcomes of an arbitrary list of measurements, adjacent when inconsistent."""
    if not measurements:
        raise ContractError("outcome_graph needs at least one measurement")
    size = 1 << (2 * measurements[0].n)
    labels, signs, members = [], [], []
    for m in measurements:
        member = np.zeros(size, dtype=np.float32)
        member[list(m.subspace.elements)] = 1.0
        for o in outcomes(m):
            row = np.zeros(size, dtype=np.float32)
            for bits, value in outcome_table(o).items():
                row[bits] = 1.0 - 2.0 * value
            labels.append(o)
            signs.append(row)
            members.append(member)
    s = np.asarray(signs)
    mm = np.asarray(members)
    adjacency = np.rint(s @ s.T) != np.rint(mm @ mm.T)
    return LabeledGraph(name, labels, adjacency)


def build_sn(n: int) -> LabeledGraph:
    """
    S_n: all outcomes of all maximal measurements, adjacent when inconsistent.
    Outcomes naming the same rank-1 projector are identified (checked by matrix at n <= 2).
    """
    if n > 3:
        logger.error(f"S_n requested at n={n}")
        raise CapacityError(f"S_n is built for n <= 3, got n={n}")
    lattice = get_lattice(n)
    adjacency = outcome_inconsistency(lattice)
    labels = [lattice.outcome(i, c) for i in range(len(lattice)) for c in range(lattice.outcome_count)]
    keep = list(range(len(labels)))
    if n <= 2:
        from .matrix_sim import projector

        seen: Dict[bytes, int] = {}
        keep = []
        for idx, o in enumerate(labels):
            key = (np.round(projector(o), 9) + 0j).tobytes()
            if key not in seen:
                seen[key] = idx
                keep.append(idx)
        if len(keep) != len(labels):
            logger.info(f"S_{n}: merged {len(labels) - len(keep)} outcomes naming the same state")
    adjacency = adjacency[np.ix_(keep, keep)]
    logger.info(f"Built S_{n}: {len(keep)} vertices")
    return LabeledGraph(f"s{n}", [labels[i] for i in keep], adjacency)


def sn_orthogonality_agrees(graph: LabeledGraph) -> bool:
    """Adjacency of S_n equals orthogonality of the outcome states (n <= 2)."""
    from .matrix_sim import outcome_state

    states = np.stack([outcome_state(o) for o in graph.vertices])
    overlaps = np.abs(states.conj() @ states.T)
    orthogonal = overlaps < 1e-9
    return bool(np.array_equal(orthogonal, graph.adjacency))


def clique_cover_by_measurement(graph: LabeledGraph) -> List[List[int]]:
    """Group outcome vertices by their measurement; each group is a clique."""
    groups: Dict[Measurement, List[int]] = {}
    for idx, o in enumerate(graph.vertices):
        groups.setdefault(o.base, []).append(idx)
    return list(groups.values())


def is_clique_cover(graph: LabeledGraph, cover: Sequence[Sequence[int]]) -> bool:
    flat = [v for group in cover for v in group]
    if sorted(flat) != list(range(len(graph))):
        return False
    for group in cover:
        sub = graph.adjacency[np.ix_(group, group)]
        if not (sub | np.eye(len(group), dtype=bool)).all():
            return False
    return True


# ---------------------------------------------------------------------------
# Products, walks and random graphs
# ---------------------------------------------------------------------------

def disjunctive_product(g: LabeledGraph, h: LabeledGraph) -> LabeledGraph:
    """(g, h) ~ (g', h') iff g ~ g' or h ~ h'."""
    size = len(g) * len(h)
    if size > MAX_GRAPH_VERTICES:
        raise CapacityError(f"disjunctive product would have {size} vertices")
    ones_g = np.ones((len(g), len(g)), dtype=bool)
    ones_h = np.ones((len(h), len(h)), dtype=bool)
    adjacency = np.kron(g.adjacency, ones_h) | np.kron(ones_g, h.adjacency)
    vertices = [(a, b) for a in g.vertices for b in h.vertices]
    return LabeledGraph(f"{g.name}*{h.name}", vertices, adjacency)


def enumerate_walks(r: LabeledGraph, k: int) -> np.ndarray:
    """All walks (v_1, ..., v_k) on r, as a (|V| d^{k-1} x k) index array."""
    if k < 1:
        raise ContractError(f"walk length must be >= 1, got {k}")
    walks = np.arange(len(r))[:, None]
    table = r.neighbor_table
    for _ in range(k - 1):
        nxt = table[walks[:, -1]]
        walks = np.concatenate([np.repeat(walks, nxt.shape[1], axis=0), nxt.reshape(-1, 1)], axis=1)
    return walks


def walk_graph(r: LabeledGraph, k: int) -> LabeledGraph:
    """
    W: vertices (walk, outcome tuple) over walks of length k on r, whose vertices are
    maximal measurements; adjacent when the tuples are inconsistent at some step.
    """
    if not r.vertices:
        raise ContractError("walk_graph needs a nonempty base graph")
    n = r.vertices[0].n
    lattice = get_lattice(n)
    walks = enumerate_walks(r, k)
    outcomes_per = lattice.outcome_count
    size = len(walks) * outcomes_per ** k
    if size > MAX_GRAPH_VERTICES:
        logger.error(f"walk graph would have {size} vertices")
        raise CapacityError(f"walk graph would have {size} vertices, cap is {MAX_GRAPH_VERTICES}")
    inconsistent = outcome_inconsistency(lattice)
    lattice_index = np.array([lattice.index_of(m) for m in r.vertices])
    codes = np.array(np.meshgrid(*[np.arange(outcomes_per)] * k, indexing="ij")).reshape(k, -1).T
    walk_ids = np.repeat(np.arange(len(walks)), len(codes))
    code_rows = np.tile(codes, (len(walks), 1))
    adjacency = np.zeros((size, size), dtype=bool)
    for step in range(k):
        keys = lattice_index[walks[walk_ids, step]] * outcomes_per + code_rows[:, step]
        adjacency |= inconsistent[np.ix_(keys, keys)]
    vertices = [(tuple(int(v) for v in walks[w]), tuple(int(c) for c in code_rows[i])) for i, w in enumerate(walk_ids)]
    logger.info(f"Built walk graph: k={k}, {len(walks)} walks, {size} vertices")
    return LabeledGraph(f"walk{k}", vertices, adjacency)


def random_regular_graph(v: int, d: int, seed: int, payload: Optional[Sequence[Any]] = None) -> LabeledGraph:
    """Simple d-regular graph on v vertices (pairing model with rejection)."""
    if (v * d) % 2 or d >= v or d < 0:
        logger.error(f"No simple {d}-regular graph on {v} vertices")
        raise ContractError(f"infeasible regular graph: v={v}, d={d}")
    g = nx.complete_graph(v) if d == v - 1 else nx.random_regular_graph(d, v, seed=seed)
    adjacency = nx.to_numpy_array(g, nodelist=range(v), dtype=np.int8).astype(bool)
    vertices = list(payload) if payload is not None else list(range(v))
    if len(vertices) != v:
        raise ContractError(f"payload has {len(vertices)} entries for {v} vertices")
    return LabeledGraph(f"rr{v}_{d}", vertices, adjacency)


def export_adjacency(graph: LabeledGraph, path: str, payload_path: Optional[str] = None) -> None:
    """Write `id: neighbor ids` lines, and optionally an `id<TAB>payload` sidecar."""
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        for i in range(len(graph)):
            f.write(f"{i}: {' '.join(str(j) for j in graph.neighbors(i))}\n")
    if payload_path:
        from .fixtures import format_payload

        with open(payload_path, "w", encoding="utf-8") as f:
            for i, v in enumerate(graph.vertices):
                f.write(f"{i}\t{format_payload(v)}\n")
    logger.info(f"Exported {graph.name} ({len(graph)} vertices) to {path}")


__all__ = [
    "BipartiteGraph",
    "LabeledGraph",
    "build_b_n2",
    "build_gw",
    "build_gw_prime",
    "build_sn",
    "clique_cover_by_measurement",
    "default_direction",
    "disjunctive_product",
    "enumerate_walks",
    "export_adjacency",
    "is_clique_cover",
    "outcome_graph",
    "outcome_inconsistency",
    "random_regular_graph",
    "sn_orthogonality_agrees",
    "walk_graph",
]
