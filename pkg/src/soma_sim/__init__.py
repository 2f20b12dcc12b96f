"""Self-organizing cellular neural map with synaptic pruning on a 2D-mesh NoC."""
from .environment import (Component, DensityScenario, Streams, canonical_scenario,
                          dynamic_scenario, eval_set, sample)
from .experiments import RunConfig, RunResult, compute_aqe, run, sweep
from .noc import MeshConfig, route_xy
from .plasticity import PruneParams, prune_probability, prune_step
from .som import LearnParams, Neurons, bmu, neighborhood_kernel, schedule
from .topology import GridGeometry, LateralGraph, connected_components, hop_distance

__version__ = "0.1.0"
