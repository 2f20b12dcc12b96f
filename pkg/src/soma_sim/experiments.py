"""Metrics, single runs and multi-seed sweeps.

``run`` drives a whole training run and logs a :class:`MetricsRecord` every
``log_every`` steps.  Three interchangeable engines execute the steps:

``fast``         compiled loop (default, used for the long experiments)
``distributed``  round-by-round message simulation, with NoC routing
``centralized``  plain BMU + BFS pipeline

All three produce bit-identical outputs for the same config.
"""
from __future__ import annotations

import csv
import io
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Sequence

import numpy as np

from . import _engine, noc
from .cellular import SimState, StepParams, step_centralized, step_distributed
from .environment import DensityScenario, Streams, canonical_scenario, eval_set, sample_block
from .plasticity import PruneParams, pruning_schedule_gate
from .som import LearnParams, Neurons, dump_weights
from .topology import GridGeometry, LateralGraph, component_count, dump_topology

METRICS_HEADER = ("step", "aqe_eval", "aqe_online", "edge_count", "component_count",
                  "msgs_election", "msgs_wave", "hop_cycles")
SUMMARY_HEADER = ("w", "final_aqe_mean", "final_aqe_std", "final_edges_mean",
                  "final_components_mean")
REMOVALS_HEADER = ("step", "id_a", "id_b", "probability")
ENGINES = ("fast", "distributed", "centralized")
CHUNK = 1000


@dataclass(frozen=True)
class RunConfig:
    geometry: GridGeometry = GridGeometry(10, 10)
    scenario: DensityScenario | None = None
    learn: LearnParams = LearnParams()
    prune: PruneParams = PruneParams()
    seed: int = 0
    log_every: int = 1000
    eval_size: int = 1000
    online_window: int = 500
    init: str = "uniform"
    engine: str = "fast"
    link_latency: int = 1
    router_latency: int = 1
    log_removals: bool = False

    def __post_init__(self):
        if self.scenario is None:
            object.__setattr__(self, "scenario", canonical_scenario(self.learn.steps))
        if self.scenario.duration != self.learn.steps:
            raise ValueError("scenario duration must equal the number of training steps")
        if self.log_every < 1 or self.steps % self.log_every:
            raise ValueError("log_every must be >= 1 and divide the number of steps")
        if self.eval_size < 1 or self.online_window < 1:
            raise ValueError("eval_size and online_window must be >= 1")
        if self.engine not in ENGINES:
            raise ValueError(f"unknown engine {self.engine!r}")

    @property
    def steps(self) -> int:
        return self.learn.steps

    def with_steps(self, steps: int, log_every: int | None = None) -> "RunConfig":
        """Same config with a different run length (scenario rebuilt to match)."""
        scenario = replace(self.scenario, duration=steps)
        return replace(self, learn=replace(self.learn, steps=steps), scenario=scenario,
                       log_every=log_every or self.log_every)

    def with_w(self, w: float) -> "RunConfig":
        return replace(self, prune=replace(self.prune, w=float(w)))

    @property
    def mesh(self) -> noc.MeshConfig:
        return noc.MeshConfig.for_grid(self.geometry, link_latency=self.link_latency,
                                       router_latency=self.router_latency)


@dataclass(frozen=True)
class MetricsRecord:
    step: int
    aqe_eval: float
    aqe_online: float
    edge_count: int
    component_count: int
    msgs_election: int
    msgs_wave: int
    hop_cycles: int

    def row(self) -> list[str]:
        return [str(self.step), repr(self.aqe_eval), repr(self.aqe_online), str(self.edge_count),
                str(self.component_count), str(self.msgs_election), str(self.msgs_wave),
                str(self.hop_cycles)]


@dataclass
class RunResult:
    config: RunConfig
    records: list[MetricsRecord]
    neurons: Neurons
    graph: LateralGraph
    winners: np.ndarray
    distances: np.ndarray
    msgs_election: np.ndarray
    msgs_wave: np.ndarray
    hop_cycles: np.ndarray
    removals: list[tuple[int, int, int, float]] = field(default_factory=list)

    @property
    def final(self) -> MetricsRecord:
        return self.records[-1]

    def metrics_csv(self) -> str:
        return _csv([METRICS_HEADER] + [r.row() for r in self.records])

    def removals_csv(self) -> str:
        rows = [(str(t), str(a), str(b), repr(p)) for t, a, b, p in self.removals]
        return _csv([REMOVALS_HEADER] + rows)

    def write(self, out_dir: str | os.PathLike, effective_config: str | None = None) -> Path:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        (out / "metrics.csv").write_text(self.metrics_csv())
        (out / "final.weights").write_text(dump_weights(self.neurons.weights))
        (out / "final.topology").write_text(dump_topology(self.graph))
        if self.config.log_removals:
            (out / "removals.csv").write_text(self.removals_csv())
        if effective_config is not None:
            (out / "effective-config").write_text(effective_config)
        return out


def _csv(rows) -> str:
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\n").writerows(rows)
    return buf.getvalue()


def compute_aqe(weights: np.ndarray, stimuli: np.ndarray) -> float:
    """Mean Euclidean distance from each stimulus to its nearest prototype."""
    stimuli = np.atleast_2d(np.asarray(stimuli, dtype=float))
    if stimuli.size == 0:
        raise ValueError("evaluation set is empty")
    acc = np.zeros((len(stimuli), len(weights)))
    for k in range(weights.shape[1]):
        diff = stimuli[:, k, None] - weights[None, :, k]
        acc += diff * diff
    return float(np.sqrt(acc.min(axis=1)).mean())


def _record(cfg: RunConfig, t: int, neurons: Neurons, graph: LateralGraph, streams: Streams,
            dists: np.ndarray, el: np.ndarray, wave: np.ndarray, cycles: np.ndarray) -> MetricsRecord:
    evals = eval_set(cfg.scenario, t, cfg.eval_size, streams.evaluation)
    aqe_eval = compute_aqe(neurons.weights, evals)
    if t == 0:
        aqe_online = aqe_eval
    else:
        aqe_online = float(dists[max(0, t - cfg.online_window):t].mean())
    lo = max(0, t - cfg.log_every)
    return MetricsRecord(t, aqe_eval, aqe_online, graph.edge_count, component_count(graph),
                         int(el[lo:t].sum()), int(wave[lo:t].sum()), int(cycles[lo:t].sum()))


def run(cfg: RunConfig) -> RunResult:
    """Train one map from scratch and collect metrics and final state."""
    T = cfg.steps
    streams = Streams(cfg.seed)
    neurons = Neurons.initialize(cfg.geometry.size, cfg.scenario.dim, streams.init, cfg.init)
    graph = LateralGraph.full(cfg.geometry)
    winners = np.zeros(T, dtype=np.int64)
    dists = np.zeros(T)
    el = np.zeros(T, dtype=np.int64)
    wave = np.zeros(T, dtype=np.int64)
    cycles = np.zeros(T, dtype=np.int64)
    removals: list[tuple[int, int, int, float]] = []
    record = lambda t: _record(cfg, t, neurons, graph, streams, dists, el, wave, cycles)
    records = [record(0)]

    step_params = StepParams(cfg.learn, cfg.prune, cfg.link_latency, cfg.router_latency)
    if cfg.engine == "fast":
        driver = _FastDriver(cfg, neurons, graph, streams)
    else:
        driver = _ReferenceDriver(cfg, SimState(neurons, graph, streams.pruning), step_params)

    t = 0
    while t < T:
        n = min(CHUNK, cfg.log_every - t % cfg.log_every, T - t)
        stimuli = sample_block(cfg.scenario, np.arange(t, t + n), streams.training)
        sl = slice(t, t + n)
        driver.advance(t, stimuli, winners[sl], dists[sl], el[sl], wave[sl], cycles[sl], removals)
        t += n
        if t % cfg.log_every == 0:
            records.append(record(t))
    return RunResult(cfg, records, neurons, graph, winners, dists, el, wave, cycles, removals)


class _FastDriver:
    def __init__(self, cfg: RunConfig, neurons: Neurons, graph: LateralGraph, streams: Streams):
        self.cfg = cfg
        self.neurons = neurons
        self.graph = graph
        self.ubuf = _engine.UniformBuffer(streams.pruning)
        self.nbr, self.nbr_edge = graph.neighbor_slots
        geo = cfg.geometry
        self.election = geo.diameter * 2 * geo.n_mesh_edges
        n_edges = len(graph.edges)
        self.rem_step = np.zeros(n_edges, dtype=np.int64)
        self.rem_edge = np.zeros(n_edges, dtype=np.int64)
        self.rem_prob = np.zeros(n_edges)
        self.rem_count = 0

    def advance(self, t0, stimuli, winners, dists, el, wave, cycles, removals):
        cfg = self.cfg
        n = len(stimuli)
        eps, radius, ktab = _engine.precompute_schedule(cfg.learn, t0, n)
        prune_on = np.array([pruning_schedule_gate(t0 + s, cfg.prune) for s in range(n)], dtype=bool)
        self.ubuf.reserve(int(prune_on.sum()) * self.graph.edge_count)
        start = self.rem_count
        self.ubuf.pos, self.rem_count = _engine.run_chunk(
            self.neurons.weights, self.neurons.activity, self.graph.alive, self.graph.edges,
            self.nbr, self.nbr_edge, stimuli, eps, radius, ktab,
            cfg.learn.activity_rate, cfg.prune.w, cfg.prune.activity_floor, prune_on,
            self.ubuf.buf, self.ubuf.pos, t0, winners, dists, wave,
            self.rem_step, self.rem_edge, self.rem_prob, self.rem_count)
        el[:] = self.election
        # every message is a single hop between adjacent routers
        cycles[:] = (el + wave) * cfg.link_latency
        for k in range(start, self.rem_count):
            a, b = self.graph.edges[self.rem_edge[k]]
            removals.append((int(self.rem_step[k]), int(a), int(b), float(self.rem_prob[k])))


class _ReferenceDriver:
    def __init__(self, cfg: RunConfig, state: SimState, params: StepParams):
        self.cfg = cfg
        self.state = state
        self.params = params

    def advance(self, t0, stimuli, winners, dists, el, wave, cycles, removals):
        mesh = self.cfg.mesh
        for s, x in enumerate(stimuli):
            t = t0 + s
            if self.cfg.engine == "distributed":
                rep = step_distributed(self.state, x, t, self.params, collect=True)
                hop_cycles = rep.traffic.hop_cycles
            else:
                rep = step_centralized(self.state, x, t, self.params)
                traffic = noc.adjacent_traffic(mesh, rep.election.messages + rep.wave.messages)
                hop_cycles = traffic.hop_cycles
            winners[s] = rep.winner
            dists[s] = rep.distance
            el[s] = rep.election.messages
            wave[s] = rep.wave.messages
            cycles[s] = hop_cycles
            removals.extend((t, a, b, p) for a, b, p in rep.removed)


# ---------------------------------------------------------------- sweeps

@dataclass
class SweepResult:
    w_values: list[float]
    seeds: list[int]
    runs: dict[tuple[float, int], RunResult]

    def long_csv(self) -> str:
        rows = [("w", "seed") + METRICS_HEADER]
        for w in self.w_values:
            for seed in self.seeds:
                for rec in self.runs[(w, seed)].records:
                    rows.append([repr(w), str(seed)] + rec.row())
        return _csv(rows)

    def summary(self) -> list[dict]:
        out = []
        for w in self.w_values:
            finals = [self.runs[(w, s)].final for s in self.seeds]
            aqe = np.array([f.aqe_eval for f in finals])
            out.append({
                "w": w,
                "final_aqe_mean": float(aqe.mean()),
                "final_aqe_std": float(aqe.std(ddof=1)) if len(aqe) > 1 else 0.0,
                "final_edges_mean": float(np.mean([f.edge_count for f in finals])),
                "final_components_mean": float(np.mean([f.component_count for f in finals])),
            })
        return out

    def summary_csv(self) -> str:
        return _csv([SUMMARY_HEADER] + [[repr(row[k]) for k in SUMMARY_HEADER]
                                        for row in self.summary()])

    def write(self, out_dir: str | os.PathLike, effective_config: str | None = None) -> Path:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        (out / "metrics.csv").write_text(self.long_csv())
        (out / "summary.csv").write_text(self.summary_csv())
        if effective_config is not None:
            (out / "effective-config").write_text(effective_config)
        return out


def _run_one(cfg: RunConfig) -> RunResult:
    return run(cfg)


def sweep_threads() -> int:
    env = os.environ.get("SOMA_SIM_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def sweep(base: RunConfig, w_values: Sequence[float], seeds: Sequence[int],
          threads: int | None = None) -> SweepResult:
    """Cross product of pruning rates and seeds, run independently."""
    if not w_values or not seeds:
        raise ValueError("sweep needs at least one w value and one seed")
    w_values = [float(w) for w in w_values]
    seeds = [int(s) for s in seeds]
    keys = [(w, s) for w in w_values for s in seeds]
    if len(set(keys)) != len(keys):
        raise ValueError("duplicate (w, seed) pairs in sweep")
    configs = [replace(base.with_w(w), seed=s) for w, s in keys]
    threads = min(threads or sweep_threads(), len(configs))
    if threads > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(_run_one, configs))
    else:
        results = [run(c) for c in configs]
    return SweepResult(w_values, seeds, dict(zip(keys, results)))
