"""Neuron state, best-matching-unit search and the online Kohonen update.

The neighbourhood is Gaussian in *hop distance over the pruned lateral
graph*, so cutting a synapse stops neighbourhood influence across it.

All scalar schedule/kernel arithmetic goes through :mod:`math` and every
vector reduction over input dimensions is an explicit loop, which keeps the
numbers bit-identical to the compiled engine in :mod:`soma_sim._engine`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch
from .topology import LateralGraph, hop_distances_from

GEOMETRIC = "geometric"
CONSTANT = "constant"


@dataclass(frozen=True)
class LearnParams:
    eps_initial: float = 0.5
    eps_final: float = 0.01
    sigma_initial: float = 3.0
    sigma_final: float = 0.5
    steps: int = 100_000
    schedule: str = GEOMETRIC
    activity_rate: float = 0.01
    h_min: float = 0.01

    def __post_init__(self):
        if not (0 < self.eps_final <= self.eps_initial <= 1):
            raise ValueError("need 0 < eps_final <= eps_initial <= 1")
        if not (0 < self.sigma_final <= self.sigma_initial):
            raise ValueError("need 0 < sigma_final <= sigma_initial")
        if self.schedule not in (GEOMETRIC, CONSTANT):
            raise ValueError(f"unknown schedule {self.schedule!r}")
        if not (0 < self.activity_rate < 1):
            raise ValueError("activity_rate must lie in (0, 1)")
        if not (0 < self.h_min < 1):
            raise ValueError("h_min must lie in (0, 1)")
        if self.steps < 0:
            raise ValueError("steps must be >= 0")


@dataclass
class Neurons:
    """Prototype weights (N, d) and win-activity traces (N,) of the whole map."""

    weights: np.ndarray
    activity: np.ndarray

    @classmethod
    def initialize(cls, n: int, dim: int, rng: np.random.Generator, mode: str = "uniform") -> "Neurons":
        if mode == "uniform":
            weights = rng.random((n, dim))
        elif mode == "center":
            weights = 0.5 + 0.05 * (2.0 * rng.random((n, dim)) - 1.0)
        else:
            raise ValueError(f"unknown init mode {mode!r}")
        return cls(weights, np.zeros(n))

    def copy(self) -> "Neurons":
        return Neurons(self.weights.copy(), self.activity.copy())

    def __len__(self) -> int:
        return len(self.weights)


def squared_distances(weights: np.ndarray, x: np.ndarray) -> np.ndarray:
    weights = np.asarray(weights, dtype=float)
    x = np.asarray(x, dtype=float)
    if weights.ndim != 2 or x.shape != (weights.shape[1],):
        raise DimensionMismatch(f"stimulus shape {x.shape} vs weights {weights.shape}")
    acc = np.zeros(len(weights))
    for k in range(weights.shape[1]):
        diff = weights[:, k] - x[k]
        acc += diff * diff
    return acc


def distances(weights: np.ndarray, x: np.ndarray) -> np.ndarray:
    return np.sqrt(squared_distances(weights, x))


def bmu(weights: np.ndarray, x: np.ndarray) -> tuple[int, float]:
    """Nearest prototype; ties go to the smallest id."""
    if len(weights) == 0:
        raise ValueError("need at least one neuron")
    dist = distances(weights, x)
    winner = int(np.argmin(dist))
    return winner, float(dist[winner])


def schedule(params: LearnParams, t: int) -> tuple[float, float]:
    """Learning rate and neighbourhood radius at step ``t``."""
    if params.schedule == CONSTANT or params.steps == 0:
        return params.eps_initial, params.sigma_initial
    frac = t / params.steps
    eps = params.eps_initial * (params.eps_final / params.eps_initial) ** frac
    sigma = params.sigma_initial * (params.sigma_final / params.sigma_initial) ** frac
    return eps, sigma


def neighborhood_kernel(hops: int | None, sigma: float, h_min: float = 0.0) -> float:
    if sigma <= 0:
        raise ValueError("sigma must be > 0")
    if hops is None or hops < 0:
        return 0.0
    value = math.exp(-(hops * hops) / (2.0 * sigma * sigma))
    return value if value >= h_min else 0.0


def cutoff_radius(sigma: float, h_min: float) -> int:
    """Largest hop count whose kernel value is still >= ``h_min``.

    Starts from ``floor(sigma*sqrt(2 ln(1/h_min)))`` and nudges by one where
    rounding puts the boundary on the wrong side.
    """
    r = int(math.floor(sigma * math.sqrt(2.0 * math.log(1.0 / h_min))))
    while r > 0 and neighborhood_kernel(r, sigma, h_min) == 0.0:
        r -= 1
    while neighborhood_kernel(r + 1, sigma, h_min) > 0.0:
        r += 1
    return r


def kernel_table(sigma: float, h_min: float) -> np.ndarray:
    """Kernel value for hops 0..R, with R the cutoff radius."""
    r = cutoff_radius(sigma, h_min)
    return np.array([neighborhood_kernel(h, sigma, h_min) for h in range(r + 1)])


def kernel_from_hops(hops: np.ndarray, table: np.ndarray) -> np.ndarray:
    """Look kernel values up per neuron; -1 (unreachable) and hops past R give 0."""
    hops = np.asarray(hops)
    h = np.zeros(len(hops))
    inside = (hops >= 0) & (hops < len(table))
    h[inside] = table[hops[inside]]
    return h


def apply_update(neurons: Neurons, winner: int, x: np.ndarray, eps: float,
                 kernel: np.ndarray, activity_rate: float) -> Neurons:
    """In-place Kohonen step given per-neuron kernel values."""
    x = np.asarray(x, dtype=float)
    rate = eps * kernel
    moving = np.flatnonzero(kernel > 0)
    w = neurons.weights
    for i in moving:
        if rate[i] == 1.0:
            w[i] = x
        else:
            w[i] = w[i] + rate[i] * (x - w[i])
    hit = np.zeros(len(neurons))
    hit[winner] = activity_rate
    neurons.activity[:] = (1.0 - activity_rate) * neurons.activity + hit
    return neurons


def update_weights(neurons: Neurons, graph: LateralGraph, winner: int, x: np.ndarray,
                   t: int, params: LearnParams, check: bool = False) -> Neurons:
    """Centralized update: hop distances by BFS over the alive graph."""
    if check and bmu(neurons.weights, x)[0] != winner:
        raise AssertionError(f"neuron {winner} is not the BMU of {x}")
    eps, sigma = schedule(params, t)
    hops = hop_distances_from(graph, winner)
    kernel = np.array([neighborhood_kernel(int(hh) if hh >= 0 else None, sigma, params.h_min)
                       for hh in hops])
    return apply_update(neurons, winner, x, eps, kernel, params.activity_rate)


def dump_weights(weights: np.ndarray) -> str:
    n, d = weights.shape
    lines = [f"WEIGHTS {n} {d}"]
    lines += ["W " + " ".join([str(i)] + [repr(float(v)) for v in row]) for i, row in enumerate(weights)]
    return "\n".join(lines) + "\n"


def parse_weights(text: str) -> np.ndarray:
    lines = [ln.split() for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0][0] != "WEIGHTS":
        raise ValueError("weight dump must start with a WEIGHTS header")
    n, d = int(lines[0][1]), int(lines[0][2])
    out = np.empty((n, d))
    for parts in lines[1:]:
        out[int(parts[1])] = [float(v) for v in parts[2:]]
    return out
