"""Input stimuli from (possibly time-varying) mixture densities.

Every draw consumes a fixed number of uniforms from its stream, ``1 + 2*d``
per stimulus: one picks the mixture component, the remaining ``2*d`` shape
the point (a uniform box uses the first ``d``, a Gaussian uses all of them
through Box-Muller).  Fixed consumption keeps a block draw of ``n`` stimuli
bit-identical to ``n`` single draws, and keeps the stream position
independent of which component was chosen.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import NoActiveComponent

UNIFORM_BOX = "uniform-box"
GAUSSIAN = "isotropic-gaussian"
SHAPES = (UNIFORM_BOX, GAUSSIAN)

STREAM_NAMES = ("init", "training", "pruning", "evaluation")


@dataclass(frozen=True)
class Component:
    shape: str
    center: tuple[float, ...]
    extent: float
    weight: float = 1.0
    start: int = 0
    end: int | None = None  # exclusive; None means active until the end

    def __post_init__(self):
        if self.shape not in SHAPES:
            raise ValueError(f"unknown shape {self.shape!r}, expected one of {SHAPES}")
        if self.extent < 0:
            raise ValueError("extent must be >= 0")
        if self.weight < 0:
            raise ValueError("mixture weight must be >= 0")
        if any(not 0.0 <= c <= 1.0 for c in self.center):
            raise ValueError("component center must lie in [0, 1]^d")

    def active(self, t: int) -> bool:
        return self.start <= t and (self.end is None or t < self.end) and self.weight > 0

    def contains(self, points: np.ndarray) -> np.ndarray:
        """Whether each point lies in this component's support box.

        For Gaussians the box is center +- 3 std-devs.
        """
        c = np.asarray(self.center)
        half = self.extent if self.shape == UNIFORM_BOX else 3.0 * self.extent
        return np.all(np.abs(np.atleast_2d(points) - c) <= half, axis=1)


@dataclass(frozen=True)
class DensityScenario:
    dim: int
    components: tuple[Component, ...]
    duration: int

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError("input dimension must be >= 1")
        if not self.components:
            raise ValueError("scenario needs at least one component")
        for comp in self.components:
            if len(comp.center) != self.dim:
                raise ValueError(f"component center {comp.center} does not have dimension {self.dim}")
        gap = self.first_uncovered_step()
        if gap is not None:
            raise NoActiveComponent(f"no active component at step {gap}")

    def first_uncovered_step(self) -> int | None:
        """First step in ``[0, duration)`` with no active component, else None."""
        # activity can only change at interval endpoints
        marks = {0}
        for comp in self.components:
            marks.update(m for m in (comp.start, comp.end) if m is not None and 0 <= m < self.duration)
        for t in sorted(marks):
            if t < self.duration and not any(c.active(t) for c in self.components):
                return t
        return None

    def active_weights(self, t: int) -> np.ndarray:
        return np.array([c.weight if c.active(t) else 0.0 for c in self.components])


def canonical_scenario(duration: int, extent: float = 0.15) -> DensityScenario:
    """Four equal-weight uniform boxes on the quarter points of the unit square."""
    centers = [(0.25, 0.25), (0.25, 0.75), (0.75, 0.25), (0.75, 0.75)]
    comps = tuple(Component(UNIFORM_BOX, c, extent) for c in centers)
    return DensityScenario(2, comps, duration)


def dynamic_scenario(duration: int) -> DensityScenario:
    """Canonical mixture where two modes are swapped for two new ones halfway."""
    half = duration // 2
    comps = (
        Component(UNIFORM_BOX, (0.25, 0.25), 0.15),
        Component(UNIFORM_BOX, (0.25, 0.75), 0.15, end=half),
        Component(UNIFORM_BOX, (0.75, 0.25), 0.15, end=half),
        Component(UNIFORM_BOX, (0.75, 0.75), 0.15),
        Component(UNIFORM_BOX, (0.5, 0.5), 0.1, start=half),
        Component(UNIFORM_BOX, (0.9, 0.1), 0.1, start=half),
    )
    return DensityScenario(2, comps, duration)


PRESETS = {"canonical": canonical_scenario, "dynamic": dynamic_scenario}


@dataclass
class Streams:
    """Independent generators, one per purpose, split from a single seed."""

    seed: int
    init: np.random.Generator = field(init=False)
    training: np.random.Generator = field(init=False)
    pruning: np.random.Generator = field(init=False)
    evaluation: np.random.Generator = field(init=False)

    def __post_init__(self):
        children = np.random.SeedSequence(self.seed).spawn(len(STREAM_NAMES))
        for name, child in zip(STREAM_NAMES, children):
            setattr(self, name, np.random.Generator(np.random.Philox(child)))


def sample_block(scenario: DensityScenario, steps: Sequence[int] | np.ndarray,
                 rng: np.random.Generator) -> np.ndarray:
    """One stimulus per entry of ``steps``; returns an (n, d) array."""
    steps = np.asarray(steps, dtype=np.int64)
    n, d = len(steps), scenario.dim
    if n == 0:
        return np.empty((0, d))
    if steps.min() < 0 or steps.max() >= max(scenario.duration, 1):
        raise ValueError(f"steps must lie in [0, {scenario.duration})")
    u = rng.random((n, 1 + 2 * d))

    # per-row active weights; rows sharing a step share the same vector
    uniq, inverse = np.unique(steps, return_inverse=True)
    table = np.stack([scenario.active_weights(int(t)) for t in uniq])
    totals = table.sum(axis=1)
    if np.any(totals <= 0):
        bad = int(uniq[np.flatnonzero(totals <= 0)[0]])
        raise NoActiveComponent(f"no active component at step {bad}")
    cum = np.cumsum(table, axis=1) / totals[:, None]
    cum = cum[inverse]
    choice = np.sum(u[:, :1] >= cum, axis=1)
    # guards against the last cumulative entry rounding below 1
    active = table[inverse] > 0
    choice = np.minimum(choice, len(scenario.components) - 1)
    for row in np.flatnonzero(~active[np.arange(n), choice]):
        choice[row] = np.flatnonzero(active[row])[-1]

    centers = np.array([c.center for c in scenario.components], dtype=float)
    extents = np.array([c.extent for c in scenario.components], dtype=float)
    gauss = np.array([c.shape == GAUSSIAN for c in scenario.components])

    ctr = centers[choice]
    ext = extents[choice][:, None]
    box = ctr + ext * (2.0 * u[:, 1:1 + d] - 1.0)
    radius = np.sqrt(-2.0 * np.log1p(-u[:, 1:1 + d]))
    normal = radius * np.cos(2.0 * np.pi * u[:, 1 + d:1 + 2 * d])
    points = np.where(gauss[choice][:, None], ctr + ext * normal, box)
    return np.clip(points, 0.0, 1.0)


def sample(scenario: DensityScenario, t: int, rng: np.random.Generator) -> np.ndarray:
    return sample_block(scenario, [t], rng)[0]


def eval_set(scenario: DensityScenario, t: int, n: int, rng: np.random.Generator) -> np.ndarray:
    """``n`` independent stimuli at scenario state ``t``.

    Pass the dedicated evaluation stream so training draws are untouched.
    """
    if n < 1:
        raise ValueError("evaluation set size must be >= 1")
    t = min(t, scenario.duration - 1) if scenario.duration > 0 else 0
    return sample_block(scenario, np.full(n, t), rng)


def component_of(scenario: DensityScenario, points: np.ndarray, t: int | None = None) -> np.ndarray:
    """Index of the first component whose support holds each point, -1 if none.

    With ``t`` given only components active at that step are considered.
    """
    points = np.atleast_2d(points)
    out = np.full(len(points), -1, dtype=np.int64)
    for k, comp in enumerate(scenario.components):
        if t is not None and not comp.active(t):
            continue
        hit = (out < 0) & comp.contains(points)
        out[hit] = k
    return out
