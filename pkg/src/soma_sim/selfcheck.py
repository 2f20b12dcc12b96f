"""Fast oracle-equivalence checks run by ``soma-sim validate``.

Each check is small enough to finish in well under a second on grids up to
8x8; larger configured grids are capped to that size.
"""
from __future__ import annotations

from dataclasses import replace
from typing import Callable, NamedTuple

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import shortest_path

from . import cellular, noc
from .experiments import RunConfig, run
from .som import bmu, cutoff_radius
from .topology import GridGeometry, LateralGraph, hop_distances_from

CAP = 8


class CheckResult(NamedTuple):
    name: str
    passed: bool
    detail: str


def _small(geo: GridGeometry) -> GridGeometry:
    return GridGeometry(min(geo.width, CAP), min(geo.height, CAP))


def _random_pruned(geo: GridGeometry, rng: np.random.Generator, frac: float) -> LateralGraph:
    g = LateralGraph.full(geo)
    g.alive[rng.random(len(g.alive)) < frac] = False
    return g


def check_election(cfg: RunConfig, rng) -> str | None:
    geo = _small(cfg.geometry)
    for k in range(60):
        w = rng.random((geo.size, 2))
        if k % 2 and geo.size > 1:
            # duplicated prototypes force exact distance ties
            w[rng.integers(geo.size, size=geo.size // 2 + 1)] = w[0]
        x = w[0] if k % 3 == 0 else rng.random(2)
        got, dist, stats = cellular.elect_bmu_distributed(w, geo, x)
        want, wdist = bmu(w, x)
        if (got, dist) != (want, wdist):
            return f"instance {k}: distributed winner {got}, exhaustive argmin {want}"
        if stats.messages != geo.diameter * 2 * geo.n_mesh_edges:
            return f"instance {k}: {stats.messages} election messages"
    return None


def check_hop_distance(cfg: RunConfig, rng) -> str | None:
    geo = _small(cfg.geometry)
    for k in range(10):
        g = _random_pruned(geo, rng, 0.3)
        live = g.edges[g.alive]
        adj = csr_matrix((np.ones(len(live)), (live[:, 0], live[:, 1])), shape=(geo.size, geo.size))
        oracle = shortest_path(adj, directed=False, unweighted=True)
        for src in range(geo.size):
            got = hop_distances_from(g, src).astype(float)
            got[got < 0] = np.inf
            if not np.array_equal(got, oracle[src]):
                return f"graph {k}, source {src}: BFS disagrees with shortest-path oracle"
    return None


def check_wave(cfg: RunConfig, rng) -> str | None:
    geo = _small(cfg.geometry)
    h_min = cfg.learn.h_min
    for k in range(20):
        g = _random_pruned(geo, rng, 0.3 * rng.random())
        winner = int(rng.integers(geo.size))
        sigma = float(rng.uniform(0.3, 3.0))
        radius = cutoff_radius(sigma, h_min)
        hop_map, stats = cellular.propagate_wave(g, winner, sigma, h_min)
        oracle = hop_distances_from(g, winner, max_hops=radius)
        want = {i: int(h) for i, h in enumerate(oracle) if h >= 0}
        if hop_map != want:
            return f"instance {k}: wave hop map differs from cut-off BFS"
        if stats.messages != cellular.wave_messages(g, oracle, radius):
            return f"instance {k}: wave sent {stats.messages} messages"
    return None


def check_step_equivalence(cfg: RunConfig, rng) -> str | None:
    base = replace(cfg, geometry=_small(cfg.geometry)).with_steps(200, 50).with_w(2e-3)
    outs = {}
    for engine in ("centralized", "distributed", "fast"):
        res = run(replace(base, engine=engine, eval_size=50))
        outs[engine] = (res.metrics_csv(), res.neurons.weights.tobytes(), res.graph.alive.tobytes())
    if not (outs["centralized"] == outs["distributed"] == outs["fast"]):
        diff = [e for e in outs if outs[e] != outs["centralized"]]
        return f"engines {diff} diverge from the centralized pipeline"
    return None


def check_routing(cfg: RunConfig, rng) -> str | None:
    geo = _small(cfg.geometry)
    mesh = noc.MeshConfig(geo.width, geo.height)
    cells = [(x, y) for y in range(geo.height) for x in range(geo.width)]
    for s in cells:
        for d in cells:
            m = noc.route_xy(mesh, s, d)
            if m.hops != abs(s[0] - d[0]) + abs(s[1] - d[1]):
                return f"{s}->{d}: {m.hops} hops"
            turned = False
            for (ax, ay), (bx, by) in zip(m.path, m.path[1:]):
                if ay != by:
                    turned = True
                elif turned:
                    return f"{s}->{d}: X move after a Y move"
    return None


CHECKS: list[tuple[str, Callable]] = [
    ("election-vs-exhaustive-argmin", check_election),
    ("hop-distance-vs-shortest-path", check_hop_distance),
    ("wave-vs-cutoff-bfs", check_wave),
    ("step-engines-bit-identical", check_step_equivalence),
    ("xy-routing-all-pairs", check_routing),
]


def run_checks(cfg: RunConfig, seed: int = 0) -> list[CheckResult]:
    out = []
    for name, fn in CHECKS:
        rng = np.random.default_rng(seed)
        try:
            problem = fn(cfg, rng)
        except Exception as exc:  # a crash is a failed check, not a crashed report
            problem = f"raised {type(exc).__name__}: {exc}"
        out.append(CheckResult(name, problem is None, problem or "ok"))
    return out
