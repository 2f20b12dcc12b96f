"""Hop-level 2D-mesh network-on-chip with deterministic XY routing.

One router per neuron.  Latency is closed-form: every hop costs
``link_latency`` and every traversed router (source and destination
included) costs ``router_latency``.  Messages do not contend.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, NamedTuple

from .errors import OutOfBounds
from .topology import GridGeometry


@dataclass(frozen=True)
class MeshConfig:
    width: int
    height: int
    link_latency: int = 1
    router_latency: int = 1

    def __post_init__(self):
        if self.width < 1 or self.height < 1:
            raise ValueError("mesh must be at least 1x1")
        if self.link_latency < 0 or self.router_latency < 0:
            raise ValueError("latencies must be >= 0")

    @classmethod
    def for_grid(cls, geometry: GridGeometry, **latencies) -> "MeshConfig":
        return cls(geometry.width, geometry.height, **latencies)

    def coords(self, nid: int) -> tuple[int, int]:
        if not 0 <= nid < self.width * self.height:
            raise OutOfBounds(f"router id {nid} outside mesh")
        return nid % self.width, nid // self.width


@dataclass(frozen=True)
class RoutedMessage:
    src: tuple[int, int]
    dst: tuple[int, int]
    path: tuple[tuple[int, int], ...]
    hops: int
    latency: int


class StepTraffic(NamedTuple):
    messages: int
    hop_cycles: int
    max_latency: int


def _check(mesh: MeshConfig, c: tuple[int, int]) -> None:
    x, y = c
    if not (0 <= x < mesh.width and 0 <= y < mesh.height):
        raise OutOfBounds(f"coordinate {c} outside {mesh.width}x{mesh.height} mesh")


def route_xy(mesh: MeshConfig, src: tuple[int, int], dst: tuple[int, int]) -> RoutedMessage:
    """Resolve the X offset fully, then Y."""
    _check(mesh, src)
    _check(mesh, dst)
    x, y = src
    path = [(x, y)]
    step = 1 if dst[0] > x else -1
    while x != dst[0]:
        x += step
        path.append((x, y))
    step = 1 if dst[1] > y else -1
    while y != dst[1]:
        y += step
        path.append((x, y))
    hops = len(path) - 1
    latency = hops * mesh.link_latency + (hops + 1) * mesh.router_latency
    return RoutedMessage(tuple(src), tuple(dst), tuple(path), hops, latency)


def account_step(mesh: MeshConfig, messages: Iterable) -> StepTraffic:
    """Route every cell message of one step and aggregate the cost.

    ``messages`` holds objects with integer ``src``/``dst`` neuron ids.
    """
    total = cycles = worst = 0
    for msg in messages:
        routed = route_xy(mesh, mesh.coords(msg.src), mesh.coords(msg.dst))
        total += 1
        cycles += routed.hops * mesh.link_latency
        worst = max(worst, routed.latency)
    return StepTraffic(total, cycles, worst)


def adjacent_traffic(mesh: MeshConfig, n_messages: int) -> StepTraffic:
    """Closed form of :func:`account_step` for ``n`` one-hop messages."""
    if n_messages == 0:
        return StepTraffic(0, 0, 0)
    return StepTraffic(n_messages, n_messages * mesh.link_latency,
                       mesh.link_latency + 2 * mesh.router_latency)
