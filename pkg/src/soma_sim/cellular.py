"""Message-passing realisation of one training step over the cellular substrate.

BMU election is a lock-step min-reduction over the *physical* mesh (always
fully connected); neighbourhood propagation is a breadth-first wavefront
over the *pruned* lateral graph, cut off at the kernel radius.  Both are
simulated round by round with explicit message counting, and must agree
exactly with the centralized operations in :mod:`soma_sim.som`.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import noc
from .plasticity import PruneParams, prune_step
from .som import (LearnParams, Neurons, apply_update, bmu, cutoff_radius, distances,
                  neighborhood_kernel, schedule)
from .topology import GridGeometry, LateralGraph, hop_distances_from

BMU_CANDIDATE = "bmu-candidate"
WAVE_FRONT = "wave-front"

# test hook: flips the election tie-break so self-checks can be shown to bite
_PREFER_LARGER_ID = False


@dataclass(frozen=True)
class CellMessage:
    kind: str
    src: int
    dst: int
    payload: tuple

    def __post_init__(self):
        if self.src == self.dst:
            raise ValueError("a cell cannot message itself")


@dataclass
class PhaseStats:
    kind: str
    rounds: int = 0
    messages: int = 0
    log: list[CellMessage] | None = None


@dataclass(frozen=True)
class StepParams:
    learn: LearnParams
    prune: PruneParams
    link_latency: int = 1
    router_latency: int = 1


@dataclass
class SimState:
    """Everything a step reads and mutates."""

    neurons: Neurons
    graph: LateralGraph
    prune_rng: np.random.Generator

    def copy(self) -> "SimState":
        import copy
        return SimState(self.neurons.copy(), self.graph.copy(), copy.deepcopy(self.prune_rng))


@dataclass
class StepReport:
    winner: int
    distance: float
    election: PhaseStats
    wave: PhaseStats
    removed: list = field(default_factory=list)
    traffic: noc.StepTraffic | None = None


def _better(cd, cid, d, nid):
    if _PREFER_LARGER_ID:
        return (cd < d) | ((cd == d) & (cid > nid))
    return (cd < d) | ((cd == d) & (cid < nid))


def elect_bmu_distributed(weights: np.ndarray, geometry: GridGeometry, x: np.ndarray,
                          collect: bool = False) -> tuple[int, float, PhaseStats]:
    """Synchronous min-reduction of ``(distance, id)`` over the physical mesh.

    Runs exactly ``diameter`` rounds; returns ``(winner, distance, stats)``.
    """
    table = geometry.neighbor_table()
    best_d = distances(weights, x)
    best_id = np.arange(geometry.size)
    stats = PhaseStats(BMU_CANDIDATE, log=[] if collect else None)
    for _ in range(geometry.diameter):
        new_d, new_id = best_d.copy(), best_id.copy()
        for slot in range(4):
            nb = table[:, slot]
            has = nb >= 0
            rx = np.flatnonzero(has)
            cd, cid = best_d[nb[rx]], best_id[nb[rx]]
            take = _better(cd, cid, new_d[rx], new_id[rx])
            new_d[rx[take]] = cd[take]
            new_id[rx[take]] = cid[take]
            stats.messages += len(rx)
            if collect:
                stats.log.extend(CellMessage(BMU_CANDIDATE, int(nb[r]), int(r),
                                             (float(best_d[nb[r]]), int(best_id[nb[r]])))
                                 for r in rx)
        best_d, best_id = new_d, new_id
        stats.rounds += 1
    if len(set(best_id.tolist())) != 1:
        raise RuntimeError("election did not converge in diameter rounds")
    return int(best_id[0]), float(best_d[0]), stats


def propagate_wave(graph: LateralGraph, winner: int, sigma: float, h_min: float,
                   collect: bool = False) -> tuple[dict[int, int], PhaseStats]:
    """Wavefront from ``winner`` over alive edges, truncated at the kernel radius.

    Cells closer than the radius forward the front over every alive edge;
    each forward is one message.
    """
    radius = cutoff_radius(sigma, h_min)
    hops = {winner: 0}
    frontier = [winner]
    stats = PhaseStats(WAVE_FRONT, log=[] if collect else None)
    depth = 0
    while frontier and depth < radius:
        nxt = []
        for u in frontier:
            for v in graph.neighbors(u):
                stats.messages += 1
                if collect:
                    stats.log.append(CellMessage(WAVE_FRONT, u, v, (winner, depth + 1)))
                if v not in hops:
                    hops[v] = depth + 1
                    nxt.append(v)
        frontier = nxt
        depth += 1
        stats.rounds += 1
    return hops, stats


def wave_messages(graph: LateralGraph, hops: np.ndarray, radius: int) -> int:
    """Closed-form wave cost: alive degree summed over cells strictly inside the radius."""
    inside = (hops >= 0) & (hops < radius)
    return int(graph.degree()[inside].sum())


def step_distributed(state: SimState, x: np.ndarray, t: int, params: StepParams,
                     collect: bool = False) -> StepReport:
    """Election, wave, weight update and pruning as one simulated step."""
    g = state.graph
    winner, dist, election = elect_bmu_distributed(state.neurons.weights, g.geometry, x, collect)
    eps, sigma = schedule(params.learn, t)
    hop_map, wave = propagate_wave(g, winner, sigma, params.learn.h_min, collect)
    kernel = np.zeros(len(state.neurons))
    for i, h in hop_map.items():
        kernel[i] = neighborhood_kernel(h, sigma, params.learn.h_min)
    apply_update(state.neurons, winner, x, eps, kernel, params.learn.activity_rate)
    removed = prune_step(state.neurons, g, params.prune, t, state.prune_rng)
    report = StepReport(winner, dist, election, wave, removed)
    if collect:
        mesh = noc.MeshConfig(g.geometry.width, g.geometry.height,
                              params.link_latency, params.router_latency)
        report.traffic = noc.account_step(mesh, election.log + wave.log)
    return report


def step_centralized(state: SimState, x: np.ndarray, t: int, params: StepParams) -> StepReport:
    """Same step without any message passing; message counts are closed-form."""
    g = state.graph
    winner, dist = bmu(state.neurons.weights, x)
    eps, sigma = schedule(params.learn, t)
    hops = hop_distances_from(g, winner)
    kernel = np.array([neighborhood_kernel(int(h) if h >= 0 else None, sigma, params.learn.h_min)
                       for h in hops])
    radius = cutoff_radius(sigma, params.learn.h_min)
    wave = PhaseStats(WAVE_FRONT, messages=wave_messages(g, hops, radius))
    geo = g.geometry
    election = PhaseStats(BMU_CANDIDATE, rounds=geo.diameter,
                          messages=geo.diameter * 2 * geo.n_mesh_edges)
    apply_update(state.neurons, winner, x, eps, kernel, params.learn.activity_rate)
    removed = prune_step(state.neurons, g, params.prune, t, state.prune_rng)
    return StepReport(winner, dist, election, wave, removed)
