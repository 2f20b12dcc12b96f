import time

import pytest

from soma_sim.cellular import CellMessage, elect_bmu_distributed
from soma_sim.errors import OutOfBounds
from soma_sim.noc import MeshConfig, account_step, adjacent_traffic, route_xy
from soma_sim.topology import GridGeometry


def xy_ok(path):
    turned = False
    for (ax, ay), (bx, by) in zip(path, path[1:]):
        assert abs(ax - bx) + abs(ay - by) == 1
        if ay != by:
            turned = True
        elif turned:
            return False
    return True


def test_self_route():
    mesh = MeshConfig(4, 4, link_latency=2, router_latency=3)
    m = route_xy(mesh, (2, 3), (2, 3))
    assert (m.hops, m.path, m.latency) == (0, ((2, 3),), 3)


def test_xy_path():
    m = route_xy(MeshConfig(4, 4), (0, 0), (2, 3))
    assert m.hops == 5
    assert m.path == ((0, 0), (1, 0), (2, 0), (2, 1), (2, 2), (2, 3))
    assert m.latency == 5 + 6


def test_out_of_bounds():
    with pytest.raises(OutOfBounds):
        route_xy(MeshConfig(3, 3), (0, 0), (3, 0))


def test_all_pairs_8x8():
    mesh = MeshConfig(8, 8)
    cells = [(x, y) for y in range(8) for x in range(8)]
    start = time.perf_counter()
    for s in cells:
        for d in cells:
            m = route_xy(mesh, s, d)
            assert m.hops == abs(s[0] - d[0]) + abs(s[1] - d[1])
            assert m.path[0] == s and m.path[-1] == d
            assert xy_ok(m.path)
            # X-monotone then Y-monotone
            xs = [p[0] for p in m.path]
            ys = [p[1] for p in m.path]
            assert xs == sorted(xs) or xs == sorted(xs, reverse=True)
            assert ys == sorted(ys) or ys == sorted(ys, reverse=True)
    assert time.perf_counter() - start < 1.0


def test_account_empty():
    assert account_step(MeshConfig(3, 3), []) == (0, 0, 0)


def test_account_election_messages():
    import numpy as np
    geo = GridGeometry(3, 3)
    _, _, stats = elect_bmu_distributed(np.random.default_rng(0).random((9, 2)), geo,
                                        np.zeros(2), collect=True)
    mesh = MeshConfig(3, 3, link_latency=2)
    traffic = account_step(mesh, stats.log)
    assert traffic.messages == 96
    assert traffic.hop_cycles == 96 * 2
    assert traffic.max_latency == 2 + 2 * 1
    assert adjacent_traffic(mesh, 96) == traffic


def test_account_multi_hop():
    mesh = MeshConfig(4, 4)
    msgs = [CellMessage("x", 0, 15, ()), CellMessage("x", 5, 6, ())]
    assert account_step(mesh, msgs) == (2, 6 + 1, 6 + 7)
