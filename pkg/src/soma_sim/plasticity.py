"""Stochastic pruning of lateral synapses.

A synapse is a pruning candidate when it joins prototypes that are far
apart in input space and whose neurons rarely win:

    P = clamp(w * ||w_i - w_j||^2 / (eps_a + a_i + a_j), 0, 1)

evaluated once per training step, after the weight update.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .som import Neurons
from .topology import LateralGraph


@dataclass(frozen=True)
class PruneParams:
    w: float = 0.0
    activity_floor: float = 0.01
    warmup_steps: int = 0
    enabled: bool = True

    def __post_init__(self):
        if not self.w >= 0:
            raise ValueError("pruning rate w must be >= 0")
        if not self.activity_floor > 0:
            raise ValueError("activity_floor must be > 0")
        if self.warmup_steps < 0:
            raise ValueError("warmup_steps must be >= 0")


def prune_probability(weights_i, weights_j, activity_i: float, activity_j: float,
                      params: PruneParams) -> float:
    wi = np.asarray(weights_i, dtype=float)
    wj = np.asarray(weights_j, dtype=float)
    dsq = 0.0
    for k in range(len(wi)):
        diff = wi[k] - wj[k]
        dsq += diff * diff
    p = (params.w * dsq) / ((params.activity_floor + activity_i) + activity_j)
    return min(max(p, 0.0), 1.0)


def edge_probabilities(neurons: Neurons, edges: np.ndarray, params: PruneParams) -> np.ndarray:
    """Vectorised :func:`prune_probability` over an (E, 2) edge array."""
    a, b = edges[:, 0], edges[:, 1]
    w = neurons.weights
    dsq = np.zeros(len(edges))
    for k in range(w.shape[1]):
        diff = w[a, k] - w[b, k]
        dsq += diff * diff
    act = neurons.activity
    p = (params.w * dsq) / ((params.activity_floor + act[a]) + act[b])
    return np.clip(p, 0.0, 1.0)


def pruning_schedule_gate(t: int, params: PruneParams) -> bool:
    return params.enabled and t >= params.warmup_steps


def prune_step(neurons: Neurons, graph: LateralGraph, params: PruneParams, t: int,
               rng: np.random.Generator) -> list[tuple[int, int, float]]:
    """One pruning pass; mutates ``graph`` and returns ``(a, b, p)`` per removal.

    Alive edges are visited in sorted order and each consumes exactly one
    uniform from ``rng``, whether or not it is removed.  Gated-off steps
    draw nothing.
    """
    if not pruning_schedule_gate(t, params):
        return []
    idx = np.flatnonzero(graph.alive)
    if len(idx) == 0:
        return []
    probs = edge_probabilities(neurons, graph.edges[idx], params)
    u = rng.random(len(idx))
    cut = u < probs
    graph.alive[idx[cut]] = False
    return [(int(graph.edges[k, 0]), int(graph.edges[k, 1]), float(p))
            for k, p in zip(idx[cut], probs[cut])]
