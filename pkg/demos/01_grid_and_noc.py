"""
The cellular substrate: lateral graph, hop distances and XY routing
====================================================================
"""
import numpy as np

from soma_sim.noc import MeshConfig, route_xy
from soma_sim.topology import (GridGeometry, LateralGraph, connected_components, dump_topology,
                               hop_distance)

# ### The lateral graph
#
# Every neuron sits on a grid cell and is wired to its four orthogonal neighbours.
# Pruning can only remove these links, never add new ones.

geo = GridGeometry(4, 3)
graph = LateralGraph.full(geo)
print("4x3 grid, lateral edges:", graph.edge_count)
print(dump_topology(graph))

# Hop distances are measured over the links that are still alive.
print("hops 0 -> 11 on the full grid:", hop_distance(graph, 0, 11))
for a, b in [(1, 2), (5, 6), (9, 10)]:
    graph.remove_edge(a, b)
print("after cutting the x=1|x=2 column boundary:", hop_distance(graph, 0, 11))
print("components:", connected_components(graph))

# ### The physical mesh
#
# The NoC underneath stays fully connected.  Packets go along X first, then Y.

mesh = MeshConfig(4, 3)
msg = route_xy(mesh, (0, 0), (3, 2))
print("path:", msg.path)
print("hops:", msg.hops, "latency (cycles):", msg.latency)

# All-pairs hop counts equal the Manhattan distance.
cells = [(x, y) for y in range(3) for x in range(4)]
hops = np.array([[route_xy(mesh, s, d).hops for d in cells] for s in cells])
print(hops)
