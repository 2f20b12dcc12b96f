"""
Training one self-organizing map on the four-mode density
==========================================================
"""
import numpy as np

from soma_sim.environment import component_of
from soma_sim.experiments import RunConfig, run

# ### A single run
#
# 10x10 neurons, 2-D inputs drawn from four square modes, 100000 steps.
# A record is logged every 1000 steps.

cfg = RunConfig(seed=0).with_w(0.0)
res = run(cfg)
for rec in res.records[::20]:
    print(f"step {rec.step:>6}  aqe_eval {rec.aqe_eval:.4f}  aqe_online {rec.aqe_online:.4f}")

# ### Where did the prototypes go?
#
# Count the neurons whose final weight vector lies inside each mode.
# Neurons labelled -1 sit in the gaps between modes.

labels = component_of(cfg.scenario, res.neurons.weights)
for k in range(-1, 4):
    print(f"mode {k:>2}: {np.sum(labels == k)} neurons")

# A rough text picture of the map: each grid cell shows the mode its neuron ended up in.
grid = labels.reshape(cfg.geometry.height, cfg.geometry.width)
for row in grid:
    print(" ".join("." if v < 0 else str(v) for v in row))

# ### Communication per step
#
# Electing the winner costs the same every step.  The cost of the neighbourhood
# wave follows the radius schedule.
print("election messages / step:", res.msgs_election[0])
print("wave messages / step, first vs last 1000 steps:",
      res.msgs_wave[:1000].mean(), res.msgs_wave[-1000:].mean())
