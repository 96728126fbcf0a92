import networkx as nx
import numpy as np
import pytest

from pauli_lab.core.errors import CapacityError, ContractError
from pauli_lab.core.graphs import (
    LabeledGraph,
    build_b_n2,
    build_gw,
    build_gw_prime,
    build_sn,
    clique_cover_by_measurement,
    disjunctive_product,
    enumerate_walks,
    export_adjacency,
    is_clique_cover,
    random_regular_graph,
    sn_orthogonality_agrees,
    walk_graph,
)


def complete(k):
    return LabeledGraph(f"k{k}", list(range(k)), ~np.eye(k, dtype=bool))


@pytest.mark.parametrize("builder", [build_gw_prime, build_gw])
def test_fiber_graphs_at_two_are_triangles(builder):
    g = builder(2)
    assert len(g) == 3
    assert g.degree == 2
    assert nx.is_isomorphic(g.to_networkx(), nx.complete_graph(3))


def test_gw_needs_even_n():
    with pytest.raises(ContractError):
        build_gw(3)


@pytest.mark.slow
def test_fiber_graphs_at_four():
    gw = build_gw(4)
    assert len(gw) == 135
    assert gw.degree == 56
    assert build_gw_prime(4).degree == 14


def test_b_n2_at_three():
    b = build_b_n2(3)
    assert b.biadjacency.shape == (135, 315)
    assert b.is_biregular()
    assert b.left_degrees[0] == 7
    assert b.right_degrees[0] == 3
    assert b.edge_count() == 135 * 7
    with pytest.raises(ContractError):
        build_b_n2(2)


@pytest.mark.parametrize("n,size", [(1, 6), (2, 60)])
def test_sn_sizes(n, size):
    g = build_sn(n)
    assert len(g) == size
    assert sn_orthogonality_agrees(g)


def test_sn_capacity():
    with pytest.raises(CapacityError):
        build_sn(4)


def test_clique_cover_by_measurement():
    g = build_sn(2)
    cover = clique_cover_by_measurement(g)
    assert len(cover) == 15
    assert is_clique_cover(g, cover)
    assert not is_clique_cover(g, [[0, 1, 2, 3, 4]] + cover[1:])


def test_disjunctive_product():
    s1 = build_sn(1)
    product = disjunctive_product(s1, s1)
    assert len(product) == 36
    # (a, b) ~ (a', b') iff a ~ a' or b ~ b'
    a = s1.adjacency
    for i in range(6):
        for j in range(6):
            assert product.adjacency[i * 6 + j, j * 6 + i] == (a[i, j] or a[j, i])
    assert product.vertices[7] == (s1.vertices[1], s1.vertices[1])


def test_enumerate_walks():
    walks = enumerate_walks(complete(3), 3)
    assert walks.shape == (3 * 2 * 2, 3)
    assert all(walks[i, j] != walks[i, j + 1] for i in range(len(walks)) for j in range(2))
    with pytest.raises(ContractError):
        enumerate_walks(complete(3), 0)


def test_walk_graph_sizes(lattice2):
    r = random_regular_graph(15, 2, seed=3, payload=lattice2.maximal)
    assert len(walk_graph(r, 1)) == 60
    w2 = walk_graph(r, 2)
    assert len(w2) == 480
    assert np.array_equal(w2.adjacency, w2.adjacency.T)


def test_random_regular_graphs():
    g = random_regular_graph(10, 3, seed=11)
    assert g.is_regular() and g.degree == 3
    assert g.edge_count() == 15
    again = random_regular_graph(10, 3, seed=11)
    assert np.array_equal(g.adjacency, again.adjacency)
    full = random_regular_graph(5, 4, seed=0)
    assert full.edge_count() == 10


@pytest.mark.parametrize("v,d", [(5, 3), (4, 4), (4, -1)])
def test_random_regular_infeasible(v, d):
    with pytest.raises(ContractError):
        random_regular_graph(v, d, seed=0)


def test_labeled_graph_validation():
    with pytest.raises(ContractError):
        LabeledGraph("bad", [0, 1], np.array([[0, 1], [0, 0]], dtype=bool))
    with pytest.raises(ContractError):
        LabeledGraph("loop", [0], np.array([[1]], dtype=bool))


def test_irregular_degree_raises():
    path = LabeledGraph("p3", [0, 1, 2], np.array([[0, 1, 0], [1, 0, 1], [0, 1, 0]], dtype=bool))
    with pytest.raises(ContractError):
        _ = path.degree


def test_export_adjacency(tmp_path):
    g = build_gw_prime(2)
    target = tmp_path / "graphs" / "gwp.adj"
    payload = tmp_path / "graphs" / "gwp.payload"
    export_adjacency(g, str(target), str(payload))
    assert target.read_text().splitlines() == ["0: 1 2", "1: 0 2", "2: 0 1"]
    lines = payload.read_text().splitlines()
    assert len(lines) == 3
    assert lines[0].startswith("0\t")
