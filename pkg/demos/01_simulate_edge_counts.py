"""Simulate the edge-count process and compare its mean to the exact oracle.

Samples a handful of replicates of the bipartite connection model on a
moderate window, prints the edge count at a few horizon times, and checks
the ensemble mean against the closed-form expectation c1 * n.

Run:  python demos/01_simulate_edge_counts.py
"""

import numpy as np

from drchm import (
    ModelParams,
    SamplerConfig,
    build_edges,
    edge_count_path,
    mean_edge_count,
    sample_interactions,
    sample_vertices,
)

params = ModelParams(beta=0.25, gamma=0.2, gamma_prime=0.2, n=100.0)
cfg = SamplerConfig(master_seed=42)
eval_times = np.array([0.25, 0.5, 0.75])

print(f"window n = {params.n}, exact mean edge count = {mean_edge_count(params)}")
print()

counts = []
for rep in range(200):
    vertices = sample_vertices(params, cfg, stream=rep)
    interactions = sample_interactions(params, cfg, vertices, stream=rep)
    edges = build_edges(params, vertices, interactions)
    path = edge_count_path(edges)
    counts.append(path(eval_times))
    if rep < 5:
        values = ", ".join(f"S({t}) = {v:.0f}" for t, v in zip(eval_times, path(eval_times)))
        print(
            f"replicate {rep}: {len(vertices)} vertices, "
            f"{len(interactions)} interactions, {len(edges)} edges; {values}"
        )

counts = np.array(counts)
print()
for i, t in enumerate(eval_times):
    mean = counts[:, i].mean()
    se = counts[:, i].std(ddof=1) / np.sqrt(len(counts))
    print(f"t = {t}: ensemble mean {mean:.2f} +- {se:.2f} (oracle {mean_edge_count(params):.3f})")
