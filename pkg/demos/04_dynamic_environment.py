"""
A changing environment
=======================

Halfway through training two of the four modes vanish and two new ones
appear.  We compare how a map with and without pruning re-quantizes.
"""
from dataclasses import replace

from soma_sim.environment import dynamic_scenario
from soma_sim.experiments import RunConfig, run

T = 100_000
base = replace(RunConfig(), scenario=dynamic_scenario(T))

for w in (0.0, 3e-5):
    res = run(base.with_w(w))
    trace = {rec.step: rec for rec in res.records}
    print(f"w={w:g}")
    for step in (T // 2 - 1000, T // 2, T // 2 + 5000, T // 2 + 20000, T):
        rec = trace[step]
        print(f"  step {step:>6}: aqe_eval {rec.aqe_eval:.4f}  edges {rec.edge_count:>3}  "
              f"components {rec.component_count}")
