"""
One step, message by message
=============================

A step on the cellular substrate: the winner is elected by min-reduction
over the mesh, then a wavefront spreads over the surviving lateral links.
We show the message traffic and check it against the centralized step.
"""
import numpy as np

from soma_sim.cellular import SimState, StepParams, step_centralized, step_distributed
from soma_sim.plasticity import PruneParams
from soma_sim.som import LearnParams, Neurons
from soma_sim.topology import GridGeometry, LateralGraph

geo = GridGeometry(5, 5)
rng = np.random.default_rng(1)
weights = rng.random((geo.size, 2))


def fresh():
    g = LateralGraph.full(geo)
    g.remove_edge(12, 13)
    g.remove_edge(12, 17)
    return SimState(Neurons(weights.copy(), np.zeros(geo.size)), g, np.random.default_rng(7))


params = StepParams(LearnParams(steps=10), PruneParams(w=1e-3))
x = np.array([0.4, 0.6])

dist_state, cent_state = fresh(), fresh()
rep = step_distributed(dist_state, x, 0, params, collect=True)
print("winner:", rep.winner, "distance:", round(rep.distance, 4))
print("election:", rep.election.rounds, "rounds,", rep.election.messages, "messages")
print("wave:    ", rep.wave.rounds, "rounds,", rep.wave.messages, "messages")
print("NoC traffic:", rep.traffic)

step_centralized(cent_state, x, 0, params)
print("weights identical to the centralized step:",
      np.array_equal(dist_state.neurons.weights, cent_state.neurons.weights))
