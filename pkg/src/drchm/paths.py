"""Edge construction and edge-count step paths.

An edge is a (vertex, interaction) pair satisfying the connection rule; it
activates at the interaction time and deactivates at the vertex death.  The
edge-count process S(t) is the number of edges active at t, represented as a
right-continuous step function on [0, 1].
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from .model import ModelParams
from .sampler import InteractionSample, VertexSample


@dataclass
class EdgeSet:
    """Edges as parallel arrays; activation = interaction time, deactivation
    = vertex death (may lie outside [0, 1])."""

    vertex_index: np.ndarray
    interaction_index: np.ndarray
    activation: np.ndarray
    deactivation: np.ndarray

    def __len__(self) -> int:
        return len(self.activation)


@dataclass
class StepPath:
    """A piecewise-constant, right-continuous function on [0, 1].

    times[0] == 0 and values[i] holds on [times[i], times[i+1]); the last
    value holds through t = 1.
    """

    times: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        self.times = np.asarray(self.times, dtype=float)
        self.values = np.asarray(self.values, dtype=float)
        if len(self.times) != len(self.values):
            raise ValueError("times and values must have equal length")
        if len(self.times) == 0 or self.times[0] != 0.0:
            raise ValueError("a step path must start at t = 0")
        if np.any(np.diff(self.times) <= 0):
            raise ValueError("times must be strictly increasing")

    def __call__(self, t):
        idx = np.searchsorted(self.times, t, side="right") - 1
        return self.values[np.maximum(idx, 0)]

    @classmethod
    def constant(cls, value: float) -> "StepPath":
        return cls(np.array([0.0]), np.array([float(value)]))

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["t", "value"])
            for t, v in zip(self.times, self.values):
                writer.writerow([repr(float(t)), repr(float(v))])

    @classmethod
    def from_csv(cls, path) -> "StepPath":
        with open(path) as fh:
            rows = list(csv.reader(fh))
        data = np.array([[float(a), float(b)] for a, b in rows[1:]])
        return cls(data[:, 0], data[:, 1])


def build_edges(
    params: ModelParams,
    vs: VertexSample,
    interactions: InteractionSample,
) -> EdgeSet:
    """All connected (vertex, interaction) pairs.

    Works band by band: within a weight band the radius of a vertex is at
    most its radius against the band's smallest weight, so a sorted range
    query over interaction positions yields candidates, which are then kept
    or dropped by the exact predicate.  The result does not depend on the
    band partition.
    """
    vi_out, ii_out = [], []
    if len(vs) == 0 or len(interactions) == 0:
        empty = np.array([], dtype=int)
        return EdgeSet(empty, empty, np.array([]), np.array([]))

    death = vs.death
    for k in np.unique(interactions.band):
        mask = interactions.band == k
        idx = np.flatnonzero(mask)
        z = interactions.z[idx]
        order = np.argsort(z)
        idx = idx[order]
        z = z[order]
        w_lo = (
            float(interactions.band_w_lo[k])
            if len(interactions.band_w_lo)
            else float(interactions.w[idx].min())
        )
        max_radius = params.beta * vs.u ** (-params.gamma) * w_lo ** (-params.gamma_prime)
        lo = np.searchsorted(z, vs.x - max_radius, side="left")
        hi = np.searchsorted(z, vs.x + max_radius, side="right")
        counts = hi - lo
        total = int(counts.sum())
        if total == 0:
            continue
        vrep = np.repeat(np.arange(len(vs)), counts)
        offsets = np.arange(total) - np.repeat(
            np.cumsum(counts) - counts, counts
        )
        cand = idx[np.repeat(lo, counts) + offsets]
        r = interactions.r[cand]
        ok = (
            (np.abs(vs.x[vrep] - interactions.z[cand])
             <= params.beta
             * vs.u[vrep] ** (-params.gamma)
             * interactions.w[cand] ** (-params.gamma_prime))
            & (vs.b[vrep] <= r)
            & (r <= death[vrep])
        )
        vi_out.append(vrep[ok])
        ii_out.append(cand[ok])

    if not vi_out:
        empty = np.array([], dtype=int)
        return EdgeSet(empty, empty, np.array([]), np.array([]))
    vi = np.concatenate(vi_out)
    ii = np.concatenate(ii_out)
    return EdgeSet(
        vertex_index=vi,
        interaction_index=ii,
        activation=interactions.r[ii],
        deactivation=death[vi],
    )


def build_edges_brute_force(
    params: ModelParams,
    vs: VertexSample,
    interactions: InteractionSample,
) -> EdgeSet:
    """All-pairs double loop; oracle for build_edges on small instances."""
    vi, ii = [], []
    death = vs.death
    for v in range(len(vs)):
        for i in range(len(interactions)):
            radius = (
                params.beta
                * vs.u[v] ** (-params.gamma)
                * interactions.w[i] ** (-params.gamma_prime)
            )
            if abs(vs.x[v] - interactions.z[i]) <= radius and (
                vs.b[v] <= interactions.r[i] <= death[v]
            ):
                vi.append(v)
                ii.append(i)
    vi = np.array(vi, dtype=int)
    ii = np.array(ii, dtype=int)
    return EdgeSet(
        vertex_index=vi,
        interaction_index=ii,
        activation=interactions.r[ii] if len(ii) else np.array([]),
        deactivation=death[vi] if len(vi) else np.array([]),
    )


def _step_path_from_events(plus_times, minus_times, initial: float) -> StepPath:
    """Accumulate +1/-1 events in (0, 1] into a step path.

    At equal times the +1 events are applied before the -1 events, so an edge
    active for a single instant is counted there.
    """
    times = np.concatenate([plus_times, minus_times])
    deltas = np.concatenate(
        [np.ones(len(plus_times)), -np.ones(len(minus_times))]
    )
    # Stable sort with activations first at ties.
    tie_rank = np.concatenate(
        [np.zeros(len(plus_times)), np.ones(len(minus_times))]
    )
    order = np.lexsort((tie_rank, times))
    times = times[order]
    if len(times) == 0:
        return StepPath.constant(initial)
    levels = initial + np.cumsum(deltas[order])
    last = np.append(times[1:] != times[:-1], True)
    return StepPath(
        np.concatenate([[0.0], times[last]]),
        np.concatenate([[initial], levels[last]]),
    )


def edge_count_path(edges: EdgeSet, t_max: float = 1.0) -> StepPath:
    """S(t) = number of edges with activation <= t <= deactivation, t in [0, 1]."""
    act = edges.activation
    deact = edges.deactivation
    relevant = (act <= t_max) & (deact >= 0.0) & (act <= deact)
    act = act[relevant]
    deact = deact[relevant]
    initial = float(np.sum(act <= 0.0) - np.sum(deact <= 0.0))
    plus = act[act > 0.0]
    minus = deact[(deact > 0.0) & (deact < t_max)]
    return _step_path_from_events(plus, minus, initial)


def edge_count_at(edges: EdgeSet, t) -> np.ndarray:
    """Direct recount of active edges at one or more times; cheaper than a
    full path when only marginals are needed, and the oracle for it."""
    t = np.atleast_1d(np.asarray(t, dtype=float))
    counts = np.array(
        [
            np.sum((edges.activation <= ti) & (ti <= edges.deactivation))
            for ti in t
        ],
        dtype=float,
    )
    return counts if len(counts) > 1 else counts[0]


def pm_edge_count_paths(edges: EdgeSet) -> tuple[StepPath, StepPath]:
    """Monotone decomposition S = plus - minus.

    plus(t) counts edges whose interaction time has occurred by t; minus(t)
    counts edges whose vertex has died by t.  Both are nondecreasing and the
    difference recovers the edge count.
    """
    act = edges.activation
    deact = edges.deactivation
    ok = act <= deact
    act = act[ok]
    deact = deact[ok]

    plus = _step_path_from_events(
        act[(act > 0.0) & (act <= 1.0)], np.array([]), float(np.sum(act <= 0.0))
    )
    minus = _step_path_from_events(
        deact[(deact > 0.0) & (deact <= 1.0)],
        np.array([]),
        float(np.sum(deact <= 0.0)),
    )
    return plus, minus


def mark_split_paths(
    edges: EdgeSet,
    vs: VertexSample,
    u_threshold: float,
) -> tuple[StepPath, StepPath]:
    """Split the edge count by vertex weight: low (< threshold) and high (>=).

    low(t) + high(t) == S(t) for every t, since the edge set is partitioned.
    """
    low_mask = vs.u[edges.vertex_index] < u_threshold
    low = edge_count_path(_subset(edges, low_mask))
    high = edge_count_path(_subset(edges, ~low_mask))
    return low, high


def _subset(edges: EdgeSet, mask: np.ndarray) -> EdgeSet:
    return EdgeSet(
        vertex_index=edges.vertex_index[mask],
        interaction_index=edges.interaction_index[mask],
        activation=edges.activation[mask],
        deactivation=edges.deactivation[mask],
    )


def normalize_path(path: StepPath, expectation, scale: float) -> StepPath:
    """(path(t) - expectation(t)) / scale as a step path.

    expectation may be a constant or a callable of t; a callable is sampled
    at the path's own event times (exact for piecewise-constant means).
    """
    if not scale > 0:
        raise ValueError(f"scale must be positive, got {scale}")
    mean = (
        np.asarray([expectation(t) for t in path.times], dtype=float)
        if callable(expectation)
        else float(expectation)
    )
    return StepPath(path.times.copy(), (path.values - mean) / scale)


def sup_norm_distance(a: StepPath, b: StepPath) -> float:
    """Exact sup over [0, 1] of |a(t) - b(t)| for step paths."""
    grid = np.union1d(a.times, b.times)
    grid = grid[(grid >= 0.0) & (grid <= 1.0)]
    return float(np.max(np.abs(a(grid) - b(grid))))
