"""
Pruning rate sweep: AQE and structure
======================================

Runs the canonical mixture at several pruning rates and seeds and prints
the summary table.  The range extends well past 1e-6.  With this pruning
formula the map only starts to split into mode-aligned islands around
w ~ 1e-5.  Set ``SOMA_SIM_THREADS`` to run seeds in parallel.
"""
import numpy as np

from soma_sim.environment import component_of
from soma_sim.experiments import RunConfig, sweep

W_VALUES = [0.0, 3e-7, 1e-6, 3e-6, 1e-5, 3e-5]
SEEDS = range(4)

result = sweep(RunConfig(), W_VALUES, SEEDS)

print(f"{'w':>8} {'aqe mean':>10} {'aqe std':>9} {'edges':>7} {'comps':>6} {'in-mode':>8}")
for row in result.summary():
    fracs = []
    for s in SEEDS:
        r = result.runs[(row["w"], s)]
        lab = component_of(r.config.scenario, r.neurons.weights)
        live = r.graph.edges[r.graph.alive]
        fracs.append(np.mean((lab[live[:, 0]] >= 0) & (lab[live[:, 0]] == lab[live[:, 1]])))
    print(f"{row['w']:>8g} {row['final_aqe_mean']:>10.5f} {row['final_aqe_std']:>9.5f} "
          f"{row['final_edges_mean']:>7.1f} {row['final_components_mean']:>6.1f} {np.mean(fracs):>8.3f}")

# ### Topology of one strongly pruned map
#
# 'o' is a neuron, '-' and '|' are surviving lateral links.
r = result.runs[(3e-5, 0)]
geo = r.config.geometry
for y in range(geo.height):
    line = ""
    for x in range(geo.width):
        i = geo.id_of(x, y)
        line += "o"
        if x + 1 < geo.width:
            line += "-" if r.graph.is_alive(i, i + 1) else " "
    print(line)
    if y + 1 < geo.height:
        print(" ".join("|" if r.graph.is_alive(geo.id_of(x, y), geo.id_of(x, y + 1)) else " "
                       for x in range(geo.width)))
