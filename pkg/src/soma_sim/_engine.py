"""Compiled inner loop used by ``run`` for long experiments.

It executes the same per-step pipeline as
:func:`soma_sim.cellular.step_distributed` (lexicographic-min election,
cut-off wavefront, Kohonen update, sorted-edge pruning) over flat arrays.
Schedules and kernel values are precomputed in Python by the very functions
the reference path uses, so results are bit-identical; the test-suite
checks this against both reference pipelines.
"""
from __future__ import annotations

import numba
import numpy as np

from .som import cutoff_radius, kernel_table, schedule


@numba.njit(cache=True)
def run_chunk(weights, activity, alive, edges, nbr, nbr_edge, stimuli, eps, radius, ktab,
              lam, w, floor, prune_on, ubuf, upos, t0,
              winners, dists, wave_msgs, rem_step, rem_edge, rem_prob, rem_count):
    n_neurons, dim = weights.shape
    n_edges = edges.shape[0]
    hops = np.empty(n_neurons, dtype=np.int64)
    queue = np.empty(n_neurons, dtype=np.int64)
    keep = 1.0 - lam
    for s in range(stimuli.shape[0]):
        x = stimuli[s]
        # election: lexicographic min of (distance, id)
        win = 0
        best = np.inf
        for i in range(n_neurons):
            acc = 0.0
            for k in range(dim):
                diff = weights[i, k] - x[k]
                acc += diff * diff
            d = np.sqrt(acc)
            if d < best:
                best = d
                win = i
        winners[s] = win
        dists[s] = best

        # wavefront over alive edges, cut at radius
        r = radius[s]
        hops[:] = -1
        hops[win] = 0
        queue[0] = win
        head = 0
        tail = 1
        msgs = 0
        while head < tail:
            u = queue[head]
            head += 1
            if hops[u] >= r:
                continue
            for slot in range(4):
                e = nbr_edge[u, slot]
                if e >= 0 and alive[e]:
                    msgs += 1
                    v = nbr[u, slot]
                    if hops[v] < 0:
                        hops[v] = hops[u] + 1
                        queue[tail] = v
                        tail += 1
        wave_msgs[s] = msgs

        # weight update
        for i in range(n_neurons):
            h = hops[i]
            if h >= 0 and h <= r:
                kv = ktab[s, h]
                if kv > 0.0:
                    rate = eps[s] * kv
                    if rate == 1.0:
                        for k in range(dim):
                            weights[i, k] = x[k]
                    else:
                        for k in range(dim):
                            weights[i, k] = weights[i, k] + rate * (x[k] - weights[i, k])
        for i in range(n_neurons):
            activity[i] = keep * activity[i] + (lam if i == win else 0.0)

        # pruning pass, one uniform per alive edge in sorted order
        if prune_on[s]:
            for e in range(n_edges):
                if not alive[e]:
                    continue
                u_var = ubuf[upos]
                upos += 1
                a = edges[e, 0]
                b = edges[e, 1]
                dsq = 0.0
                for k in range(dim):
                    diff = weights[a, k] - weights[b, k]
                    dsq += diff * diff
                p = (w * dsq) / ((floor + activity[a]) + activity[b])
                p = min(max(p, 0.0), 1.0)
                if u_var < p:
                    alive[e] = False
                    rem_step[rem_count] = t0 + s
                    rem_edge[rem_count] = e
                    rem_prob[rem_count] = p
                    rem_count += 1
    return upos, rem_count


def precompute_schedule(learn, t0: int, n: int):
    """Per-step learning rate, cut-off radius and kernel table rows."""
    eps = np.empty(n)
    radius = np.empty(n, dtype=np.int64)
    rows = []
    for s in range(n):
        e, sigma = schedule(learn, t0 + s)
        eps[s] = e
        radius[s] = cutoff_radius(sigma, learn.h_min)
        rows.append(kernel_table(sigma, learn.h_min))
    width = int(radius.max()) + 1 if n else 1
    ktab = np.zeros((n, width))
    for s, row in enumerate(rows):
        ktab[s, :len(row)] = row
    return eps, radius, ktab


class UniformBuffer:
    """Pre-drawn uniforms from one generator, consumed in stream order."""

    def __init__(self, rng: np.random.Generator):
        self.rng = rng
        self.buf = np.empty(0)
        self.pos = 0

    def reserve(self, n: int) -> None:
        left = len(self.buf) - self.pos
        if left < n:
            self.buf = np.concatenate([self.buf[self.pos:], self.rng.random(n - left)])
            self.pos = 0
