import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oracles import UnionFind, adjacency_pairs, bfs
from soma_sim.errors import EdgeNotAlive, InvalidNeuronId, NotGridAdjacent
from soma_sim.topology import (GridGeometry, LateralGraph, component_count, connected_components,
                               dump_topology, hop_distance, hop_distances_from, init_full_grid,
                               parse_topology)


def pruned(width, height, frac, seed):
    g = init_full_grid(GridGeometry(width, height))
    rng = np.random.default_rng(seed)
    g.alive[rng.random(len(g.alive)) < frac] = False
    return g


@pytest.mark.parametrize("w,h,expected", [(1, 1, 0), (2, 2, 4), (10, 10, 180), (1, 7, 6), (5, 3, 22)])
def test_full_grid_edge_count(w, h, expected):
    g = init_full_grid(GridGeometry(w, h))
    assert g.edge_count == expected == w * (h - 1) + h * (w - 1)
    assert g.alive_edges() == adjacency_pairs(w, h)


def test_geometry_rejects_empty_grid():
    with pytest.raises(ValueError):
        GridGeometry(0, 3)


def test_id_mapping_is_row_major_bijection():
    geo = GridGeometry(4, 3)
    ids = [geo.id_of(x, y) for y in range(3) for x in range(4)]
    assert ids == list(range(12))
    assert all(geo.id_of(*geo.coords(i)) == i for i in ids)


def test_remove_edge():
    g = init_full_grid(GridGeometry(2, 2))
    g.remove_edge(0, 1)
    assert g.edge_count == 3
    with pytest.raises(EdgeNotAlive):
        g.remove_edge(1, 0)
    with pytest.raises(NotGridAdjacent):
        g.remove_edge(0, 3)
    with pytest.raises(InvalidNeuronId):
        g.remove_edge(0, 9)


def test_hop_distance_examples():
    g = init_full_grid(GridGeometry(3, 3))
    assert hop_distance(g, 0, 8) == 4
    assert hop_distance(g, 4, 4) == 0
    line = init_full_grid(GridGeometry(2, 1))
    line.remove_edge(0, 1)
    assert hop_distance(line, 0, 1) is None
    with pytest.raises(InvalidNeuronId):
        hop_distance(g, 0, 9)


def test_full_grid_hop_distance_is_manhattan():
    geo = GridGeometry(6, 4)
    g = init_full_grid(geo)
    for a in range(geo.size):
        ax, ay = geo.coords(a)
        hops = hop_distances_from(g, a)
        for b in range(geo.size):
            bx, by = geo.coords(b)
            assert hops[b] == abs(ax - bx) + abs(ay - by)


def test_hop_distance_matches_bfs_oracle_on_pruned_8x8():
    g = pruned(8, 8, 0.3, seed=11)
    rng = np.random.default_rng(5)
    live = g.alive_edges()
    for _ in range(100):
        a, b = (int(v) for v in rng.integers(64, size=2))
        want = bfs(64, live, a).get(b)
        assert hop_distance(g, a, b) == want


@pytest.mark.parametrize("seed", range(10))
def test_components_match_union_find(seed):
    g = pruned(7, 6, 0.45, seed)
    uf = UnionFind(g.n_neurons)
    for a, b in g.alive_edges():
        uf.union(a, b)
    assert connected_components(g) == uf.groups()


def test_component_extremes():
    g = init_full_grid(GridGeometry(4, 5))
    assert component_count(g) == 1
    g.alive[:] = False
    assert component_count(g) == 20


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 6), st.integers(1, 6), st.floats(0, 1), st.integers(0, 2**31))
def test_shared_component_iff_reachable(w, h, frac, seed):
    g = pruned(w, h, frac, seed)
    label = {}
    for k, comp in enumerate(connected_components(g)):
        label.update(dict.fromkeys(comp, k))
    assert sorted(label) == list(range(g.n_neurons))
    for a in range(g.n_neurons):
        hops = hop_distances_from(g, a)
        for b in range(g.n_neurons):
            assert (hops[b] >= 0) == (label[a] == label[b])


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 6), st.integers(2, 6), st.floats(0, 0.6), st.integers(0, 2**31))
def test_hop_distance_symmetric_and_triangle(w, h, frac, seed):
    g = pruned(w, h, frac, seed)
    n = g.n_neurons
    d = np.array([hop_distances_from(g, i) for i in range(n)], dtype=float)
    d[d < 0] = np.inf
    assert np.array_equal(d, d.T)
    for k in range(n):
        assert np.all(d <= d[:, [k]] + d[[k], :])


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 6), st.integers(1, 6), st.integers(0, 2**31))
def test_removal_is_monotone(w, h, seed):
    g = init_full_grid(GridGeometry(w, h))
    rng = np.random.default_rng(seed)
    edges, comps = g.edge_count, component_count(g)
    for k in rng.permutation(len(g.edges)):
        g.remove_edge(*map(int, g.edges[k]))
        assert g.edge_count == edges - 1
        assert component_count(g) >= comps
        edges, comps = g.edge_count, component_count(g)
    assert comps == w * h


def test_edges_connect_only_grid_neighbors():
    geo = GridGeometry(5, 4)
    g = init_full_grid(geo)
    for a, b in g.alive_edges():
        assert a < b and geo.adjacent(a, b)


def test_topology_dump_format():
    g = init_full_grid(GridGeometry(2, 2))
    g.remove_edge(1, 3)
    assert dump_topology(g) == "GRID 2 2\nEDGE 0 1\nEDGE 0 2\nEDGE 2 3\n"
    back = parse_topology(dump_topology(g))
    assert np.array_equal(back.alive, g.alive)


def test_topology_dump_sorted_numerically():
    text = dump_topology(init_full_grid(GridGeometry(12, 1)))
    pairs = [tuple(map(int, ln.split()[1:])) for ln in text.splitlines()[1:]]
    assert pairs == sorted(pairs)
    assert pairs[-1] == (10, 11)
