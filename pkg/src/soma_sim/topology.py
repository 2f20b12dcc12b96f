"""Physical grid geometry and the prunable lateral-connection graph.

Neuron ids are row-major: ``id = y * width + x``.  The lateral graph starts
as the full 4-neighbourhood of the grid (no wrap-around) and can only lose
edges.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .errors import EdgeNotAlive, InvalidNeuronId, NotGridAdjacent

# neighbour slot order used by every table below: left, right, up, down
_OFFSETS = ((-1, 0), (1, 0), (0, -1), (0, 1))


@dataclass(frozen=True)
class GridGeometry:
    width: int
    height: int

    def __post_init__(self):
        if int(self.width) < 1 or int(self.height) < 1:
            raise ValueError(f"grid must be at least 1x1, got {self.width}x{self.height}")

    @property
    def size(self) -> int:
        return self.width * self.height

    def coords(self, nid: int) -> tuple[int, int]:
        self.check_id(nid)
        return nid % self.width, nid // self.width

    def id_of(self, x: int, y: int) -> int:
        if not (0 <= x < self.width and 0 <= y < self.height):
            raise InvalidNeuronId(f"coordinate ({x}, {y}) outside {self.width}x{self.height} grid")
        return y * self.width + x

    def check_id(self, nid: int) -> None:
        if not (0 <= nid < self.size):
            raise InvalidNeuronId(f"neuron id {nid} outside [0, {self.size})")

    def adjacent(self, a: int, b: int) -> bool:
        ax, ay = self.coords(a)
        bx, by = self.coords(b)
        return abs(ax - bx) + abs(ay - by) == 1

    @property
    def n_mesh_edges(self) -> int:
        return self.width * (self.height - 1) + self.height * (self.width - 1)

    @property
    def diameter(self) -> int:
        return (self.width - 1) + (self.height - 1)

    def neighbor_table(self) -> np.ndarray:
        """(N, 4) array of physical neighbour ids, -1 where the border cuts."""
        table = np.full((self.size, 4), -1, dtype=np.int64)
        for nid in range(self.size):
            x, y = nid % self.width, nid // self.width
            for slot, (dx, dy) in enumerate(_OFFSETS):
                nx, ny = x + dx, y + dy
                if 0 <= nx < self.width and 0 <= ny < self.height:
                    table[nid, slot] = ny * self.width + nx
        return table


def grid_edges(geometry: GridGeometry) -> np.ndarray:
    """All 4-neighbour pairs ``(a, b)`` with ``a < b``, sorted lexicographically."""
    pairs = []
    w = geometry.width
    for a in range(geometry.size):
        x, y = a % w, a // w
        if x + 1 < w:
            pairs.append((a, a + 1))
        if y + 1 < geometry.height:
            pairs.append((a, a + w))
    pairs.sort()
    return np.array(pairs, dtype=np.int64).reshape(-1, 2)


@dataclass
class LateralGraph:
    """Logical lateral synapses over a grid.

    Every potential edge keeps a slot in ``edges`` (sorted) and an ``alive``
    flag, so edge indices are stable for the lifetime of a run.
    """

    geometry: GridGeometry
    edges: np.ndarray
    alive: np.ndarray
    _index: dict = field(repr=False, default_factory=dict)
    _nbr: np.ndarray = field(repr=False, default=None)
    _nbr_edge: np.ndarray = field(repr=False, default=None)

    def __post_init__(self):
        if not self._index:
            self._index = {(int(a), int(b)): k for k, (a, b) in enumerate(self.edges)}
        if self._nbr is None:
            self._nbr = self.geometry.neighbor_table()
            nbr_edge = np.full_like(self._nbr, -1)
            for nid in range(self.geometry.size):
                for slot in range(4):
                    other = self._nbr[nid, slot]
                    if other >= 0:
                        nbr_edge[nid, slot] = self._index[(min(nid, other), max(nid, other))]
            self._nbr_edge = nbr_edge

    @classmethod
    def full(cls, geometry: GridGeometry) -> "LateralGraph":
        edges = grid_edges(geometry)
        return cls(geometry, edges, np.ones(len(edges), dtype=bool))

    def copy(self) -> "LateralGraph":
        return LateralGraph(self.geometry, self.edges, self.alive.copy(),
                            self._index, self._nbr, self._nbr_edge)

    @property
    def n_neurons(self) -> int:
        return self.geometry.size

    @property
    def edge_count(self) -> int:
        return int(self.alive.sum())

    @property
    def neighbor_slots(self) -> tuple[np.ndarray, np.ndarray]:
        """``(neighbour ids, edge indices)``, both (N, 4) with -1 for missing."""
        return self._nbr, self._nbr_edge

    def edge_index(self, a: int, b: int) -> int:
        self.geometry.check_id(a)
        self.geometry.check_id(b)
        key = (min(a, b), max(a, b))
        try:
            return self._index[key]
        except KeyError:
            raise NotGridAdjacent(f"neurons {a} and {b} are not grid-adjacent") from None

    def is_alive(self, a: int, b: int) -> bool:
        return bool(self.alive[self.edge_index(a, b)])

    def remove_edge(self, a: int, b: int) -> "LateralGraph":
        k = self.edge_index(a, b)
        if not self.alive[k]:
            raise EdgeNotAlive(f"edge ({a}, {b}) already removed")
        self.alive[k] = False
        return self

    def alive_edges(self) -> list[tuple[int, int]]:
        return [(int(a), int(b)) for a, b in self.edges[self.alive]]

    def neighbors(self, nid: int) -> list[int]:
        """Neighbours over alive edges, in slot order."""
        self.geometry.check_id(nid)
        return [int(self._nbr[nid, s]) for s in range(4)
                if self._nbr_edge[nid, s] >= 0 and self.alive[self._nbr_edge[nid, s]]]

    def degree(self) -> np.ndarray:
        """Alive-edge degree of every neuron."""
        deg = np.zeros(self.n_neurons, dtype=np.int64)
        live = self.edges[self.alive]
        np.add.at(deg, live[:, 0], 1)
        np.add.at(deg, live[:, 1], 1)
        return deg


def init_full_grid(geometry: GridGeometry) -> LateralGraph:
    return LateralGraph.full(geometry)


def hop_distances_from(graph: LateralGraph, src: int, max_hops: int | None = None) -> np.ndarray:
    """BFS hop counts from ``src`` over alive edges; -1 marks unreachable.

    With ``max_hops`` the search stops expanding at that depth, so cells
    further away are reported as -1 as well.
    """
    graph.geometry.check_id(src)
    hops = np.full(graph.n_neurons, -1, dtype=np.int64)
    hops[src] = 0
    queue = deque([src])
    while queue:
        u = queue.popleft()
        if max_hops is not None and hops[u] >= max_hops:
            continue
        for v in graph.neighbors(u):
            if hops[v] < 0:
                hops[v] = hops[u] + 1
                queue.append(v)
    return hops


def hop_distance(graph: LateralGraph, src: int, dst: int) -> int | None:
    """Shortest alive path length, or ``None`` when ``dst`` is unreachable."""
    graph.geometry.check_id(dst)
    h = int(hop_distances_from(graph, src)[dst])
    return None if h < 0 else h


def connected_components(graph: LateralGraph) -> list[set[int]]:
    """Partition of all neuron ids, ordered by smallest member."""
    seen = np.zeros(graph.n_neurons, dtype=bool)
    comps = []
    for start in range(graph.n_neurons):
        if seen[start]:
            continue
        reach = np.flatnonzero(hop_distances_from(graph, start) >= 0)
        seen[reach] = True
        comps.append({int(i) for i in reach})
    return comps


def component_count(graph: LateralGraph) -> int:
    return len(connected_components(graph))


def dump_topology(graph: LateralGraph) -> str:
    lines = [f"GRID {graph.geometry.width} {graph.geometry.height}"]
    lines += [f"EDGE {a} {b}" for a, b in graph.alive_edges()]
    return "\n".join(lines) + "\n"


def parse_topology(text: str) -> LateralGraph:
    """Inverse of :func:`dump_topology`."""
    lines = [ln.split() for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0][0] != "GRID":
        raise ValueError("topology dump must start with a GRID header")
    geometry = GridGeometry(int(lines[0][1]), int(lines[0][2]))
    graph = LateralGraph.full(geometry)
    keep = np.zeros_like(graph.alive)
    for parts in lines[1:]:
        if parts[0] != "EDGE":
            raise ValueError(f"unexpected record {parts[0]!r}")
        keep[graph.edge_index(int(parts[1]), int(parts[2]))] = True
    graph.alive[:] = keep
    return graph


def remove_edges(graph: LateralGraph, pairs: Iterable[tuple[int, int]]) -> LateralGraph:
    for a, b in pairs:
        graph.remove_edge(a, b)
    return graph
