"""Samplers for the two limiting processes of the normalized edge count.

In the Gaussian regime the limit is a centered Gaussian process sampled on a
fixed time grid through a factorized covariance matrix.  In the heavy-tailed
regime the limit is approximated by its jump-truncated version: a sum of
weighted age terms J * (t - B) over the jump points alive at t, which is
continuous piecewise linear between events and drops by J * (death - B) when
a point dies.  Truncation levels couple by superposing independent bands of
jump sizes, so refining a level only ever adds points.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from .model import (
    FactorizationError,
    ModelParams,
    require_gaussian,
    require_stable,
)
from .oracles import CovarianceConstants, stable_mean
from .paths import StepPath
from .rng import stream_generator
from .sampler import (
    LimitPoint,
    SamplerConfig,
    _nu_tail,
    limit_jump_threshold,
    sample_limit_band,
    sample_limit_points,
)

MAX_GRID_POINTS = 512
JITTER_BUDGET = 1e-10  # max jitter, as a fraction of mean diagonal


def gaussian_covariance(params: ModelParams, lag, constants=None):
    """Closed-form limiting covariance at the given lag.

    Uses the circulating printed constant set by default; pass
    oracles.adjudicated_constants(params) for the set that matches the
    integral oracle.
    """
    if constants is None:
        constants = CovarianceConstants.from_params(params)
    return constants.covariance(lag)


@dataclass
class GaussianGrid:
    """A time grid with its covariance matrix and lower-triangular factor."""

    times: np.ndarray
    covariance_matrix: np.ndarray
    factor: np.ndarray
    jitter: float

    @classmethod
    def build(
        cls,
        params: ModelParams,
        times,
        constants: CovarianceConstants | None = None,
    ) -> "GaussianGrid":
        """Build the grid, factorizing K[i][j] = K(|t_i - t_j|).

        A diagonal jitter of at most JITTER_BUDGET times the mean diagonal
        entry may be applied (and is recorded) when plain Cholesky fails.
        """
        times = np.atleast_1d(np.asarray(times, dtype=float))
        if times.ndim != 1 or len(times) == 0:
            raise ValueError("grid times must be a nonempty 1-d sequence")
        if len(times) > MAX_GRID_POINTS:
            raise ValueError(
                f"grids are capped at {MAX_GRID_POINTS} points, got {len(times)}"
            )
        if np.any(np.diff(times) <= 0):
            raise ValueError("grid times must be strictly increasing")
        if times[0] < 0.0 or times[-1] > 1.0:
            raise ValueError("grid times must lie in [0, 1]")
        if constants is None:
            require_gaussian(params)
            constants = CovarianceConstants.from_params(params)
        lags = np.abs(times[:, None] - times[None, :])
        matrix = np.asarray(constants.covariance(lags), dtype=float)

        budget = JITTER_BUDGET * float(np.trace(matrix)) / len(times)
        for jitter in (0.0, budget * 1e-6, budget * 1e-4, budget * 1e-2, budget):
            try:
                factor = np.linalg.cholesky(
                    matrix + jitter * np.eye(len(times))
                )
            except np.linalg.LinAlgError:
                continue
            return cls(
                times=times,
                covariance_matrix=matrix,
                factor=factor,
                jitter=jitter,
            )
        raise FactorizationError(
            "covariance matrix is not positive semidefinite within the "
            "jitter budget; the constant set is invalid on this grid"
        )


def sample_gaussian_path(
    grid: GaussianGrid, cfg: SamplerConfig, stream: int = 0
) -> np.ndarray:
    """One centered Gaussian path on the grid: factor times i.i.d. normals."""
    rng = stream_generator(cfg.master_seed, stream)
    return grid.factor @ rng.standard_normal(len(grid.times))


# ---------------------------------------------------------------------------
# heavy-tailed limit paths


@dataclass
class StablePath:
    """Piecewise-linear path value(t) = sum of j * (t - b) over points with
    b <= t <= d.

    Continuous except at death times, where the dying point's full
    contribution j * (d - b) drops out; the path value at a death time still
    includes the dying point (the alive interval is closed).
    """

    j: np.ndarray
    b: np.ndarray
    d: np.ndarray

    def __post_init__(self):
        self.j = np.asarray(self.j, dtype=float)
        self.b = np.asarray(self.b, dtype=float)
        self.d = np.asarray(self.d, dtype=float)
        if not len(self.j) == len(self.b) == len(self.d):
            raise ValueError("jump arrays must have equal length")

    @classmethod
    def from_points(cls, points: list[LimitPoint]) -> "StablePath":
        j = np.array([p.j for p in points])
        b = np.array([p.b for p in points])
        l = np.array([p.l for p in points])
        return cls(j=j, b=b, d=b + l)

    def breakpoints(self) -> np.ndarray:
        """Event times (births, deaths) in [0, 1] plus both endpoints."""
        ev = np.concatenate([[0.0, 1.0], self.b, self.d])
        return np.unique(ev[(ev >= 0.0) & (ev <= 1.0)])

    def _eval(self, t, closed_death: bool):
        t = np.asarray(t, dtype=float)
        scalar = t.ndim == 0
        tt = np.atleast_1d(t)[None, :]
        alive = self.b[:, None] <= tt
        alive &= (tt <= self.d[:, None]) if closed_death else (tt < self.d[:, None])
        vals = np.sum(self.j[:, None] * (tt - self.b[:, None]) * alive, axis=0)
        return float(vals[0]) if scalar else vals

    def __call__(self, t):
        return self._eval(t, closed_death=True)

    def right_limit(self, t):
        """Limit from the right: excludes points dying exactly at t."""
        return self._eval(t, closed_death=False)

    def validate_slopes(self, rel_tol: float = 1e-9) -> None:
        """Assert that between consecutive events the slope equals the sum
        of alive jump sizes."""
        grid = self.breakpoints()
        for lo, hi in zip(grid[:-1], grid[1:]):
            mid = 0.5 * (lo + hi)
            expected = float(
                np.sum(self.j[(self.b <= mid) & (mid <= self.d)])
            )
            observed = (self(hi) - self.right_limit(lo)) / (hi - lo)
            scale = max(abs(expected), 1.0)
            if abs(observed - expected) > rel_tol * scale:
                raise AssertionError(
                    f"slope {observed} != alive jump sum {expected} on "
                    f"({lo}, {hi})"
                )

    def sup_norm_to_step(self, step: StepPath, offset: float = 0.0) -> float:
        """Exact sup over [0, 1] of |self(t) + offset - step(t)|.

        Between merged event times the difference is linear, so the sup is
        attained at an endpoint approached from one of its sides; both
        one-sided values are inspected at every event.
        """
        grid = np.union1d(
            self.breakpoints(),
            step.times[(step.times >= 0.0) & (step.times <= 1.0)],
        )
        a_val = self(grid) + offset
        a_right = self.right_limit(grid) + offset
        s_val = step(grid)
        best = max(
            float(np.max(np.abs(a_val - s_val))),
            float(np.max(np.abs(a_right - s_val))),
        )
        if len(grid) > 1:
            best = max(best, float(np.max(np.abs(a_val[1:] - s_val[:-1]))))
        return best

    def sup_norm_to_constant(self, c: float) -> float:
        """Exact sup over [0, 1] of |self(t) - c|."""
        grid = self.breakpoints()
        return max(
            float(np.max(np.abs(self(grid) - c))),
            float(np.max(np.abs(self.right_limit(grid) - c))),
        )

    def to_csv(self, path, times) -> None:
        """Sampled values on an output grid, as (t, value) rows."""
        times = np.asarray(times, dtype=float)
        values = self(times)
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["t", "value"])
            for t, v in zip(times, np.atleast_1d(values)):
                writer.writerow([repr(float(t)), repr(float(v))])


@dataclass
class StablePathSample:
    """A truncated-limit path together with its truncation level and the
    exact mean used for centering."""

    points: list[LimitPoint]
    epsilon: float
    path: StablePath
    mean: float

    def centered(self, t):
        return self.path(t) - self.mean


def sample_stable_path(
    params: ModelParams,
    epsilon: float,
    cfg: SamplerConfig,
    stream: int = 0,
) -> StablePathSample:
    """Sample the truncated limiting path at level epsilon.

    The slope invariant is asserted on every sampled path.
    """
    points = sample_limit_points(params, epsilon, cfg, stream)
    path = StablePath.from_points(points)
    path.validate_slopes()
    return StablePathSample(
        points=points,
        epsilon=epsilon,
        path=path,
        mean=stable_mean(params, epsilon),
    )


@dataclass
class RefinementReport:
    """Coupled sup-norm distances between consecutive truncation levels.

    distances[r, k] is the sup over [0, 1] of the centered difference
    between levels eps_sequence[k] and eps_sequence[k + 1] in replicate r.
    """

    eps_sequence: tuple
    distances: np.ndarray

    @property
    def medians(self) -> np.ndarray:
        return np.median(self.distances, axis=0)

    def quantiles(self, qs=(0.25, 0.5, 0.75)) -> np.ndarray:
        return np.quantile(self.distances, qs, axis=0)

    @property
    def medians_strictly_decreasing(self) -> bool:
        med = self.medians
        return bool(np.all(np.diff(med) < 0))


def epsilon_refinement_study(
    params: ModelParams,
    eps_sequence,
    reps: int,
    cfg: SamplerConfig,
    stream: int = 0,
) -> RefinementReport:
    """Coupled refinement across decreasing truncation levels.

    Each level adds an independent band of jump sizes to the previous point
    set, so the centered difference between consecutive levels is exactly
    the new band's path minus the band's own mean; its sup-norm is recorded
    per replicate and per consecutive pair of levels.
    """
    require_stable(params)
    eps = [float(e) for e in eps_sequence]
    if len(eps) < 2:
        raise ValueError("need at least two truncation levels")
    if any(not 0 < e <= 1 for e in eps) or any(
        b >= a for a, b in zip(eps[:-1], eps[1:])
    ):
        raise ValueError("eps_sequence must be strictly decreasing in (0, 1]")
    thresholds = [limit_jump_threshold(params, e) for e in eps]
    means = [stable_mean(params, e) for e in eps]
    distances = np.empty((reps, len(eps) - 1))
    for rep in range(reps):
        for k in range(len(eps) - 1):
            band = StablePath.from_points(
                sample_limit_band(
                    params,
                    thresholds[k + 1],
                    thresholds[k],
                    cfg,
                    stream=stream + rep,
                    tag=k + 1,
                )
            )
            distances[rep, k] = band.sup_norm_to_constant(
                means[k + 1] - means[k]
            )
    return RefinementReport(eps_sequence=tuple(eps), distances=distances)


def coupled_level_paths(
    params: ModelParams,
    eps_sequence,
    cfg: SamplerConfig,
    stream: int = 0,
) -> list[StablePathSample]:
    """One coupled draw of the truncated paths at every level: level k + 1
    reuses every point of level k and adds its own smaller-jump band."""
    require_stable(params)
    eps = [float(e) for e in eps_sequence]
    thresholds = [limit_jump_threshold(params, e) for e in eps]
    points: list[LimitPoint] = list(
        sample_limit_band(
            params, thresholds[0], np.inf, cfg, stream=stream, tag=0
        )
    )
    out = []
    for k, e in enumerate(eps):
        if k > 0:
            points = points + sample_limit_band(
                params, thresholds[k], thresholds[k - 1], cfg, stream=stream, tag=k
            )
        out.append(
            StablePathSample(
                points=list(points),
                epsilon=e,
                path=StablePath.from_points(points),
                mean=stable_mean(params, e),
            )
        )
    return out


def stable_band_marginals(
    params: ModelParams,
    j_lo: float,
    j_hi: float,
    t: float,
    reps: int,
    cfg: SamplerConfig,
    stream: int = 0,
    chunk: int = 4096,
) -> np.ndarray:
    """Per-replicate values at a single time of the jump-size band
    [j_lo, j_hi): sum of J * (t - B) over band points alive at t.

    Vectorized across replicates; equivalent in law to building each band
    path and evaluating it at t, but cheap enough for large ensembles.
    """
    require_stable(params)
    if not 0 < j_lo < j_hi:
        raise ValueError(f"need 0 < j_lo < j_hi, got ({j_lo}, {j_hi})")
    rng = stream_generator(cfg.master_seed, stream)
    lo_mass = _nu_tail(params, j_lo)
    hi_mass = _nu_tail(params, j_hi) if np.isfinite(j_hi) else 0.0
    rate = lo_mass - hi_mass

    def draw_jumps(count):
        v = 1.0 - rng.random(size=count)
        tail = hi_mass + v * (lo_mass - hi_mass)
        return params.c_tilde * tail ** (-params.gamma)

    out = np.zeros(reps)
    done = 0
    while done < reps:
        m = min(chunk, reps - done)
        # component alive at time 0: age and residual both exponential
        counts = rng.poisson(rate, size=m)
        total = int(counts.sum())
        rep = np.repeat(np.arange(m), counts)
        b = -rng.exponential(size=total)
        d = rng.exponential(size=total)
        jumps = draw_jumps(total)
        contrib = jumps * (t - b) * ((b <= t) & (t <= d))
        out[done : done + m] += np.bincount(rep, weights=contrib, minlength=m)
        # component born in (0, 1]
        counts = rng.poisson(rate, size=m)
        total = int(counts.sum())
        rep = np.repeat(np.arange(m), counts)
        b = rng.uniform(0.0, 1.0, size=total)
        d = b + rng.exponential(size=total)
        jumps = draw_jumps(total)
        contrib = jumps * (t - b) * ((b <= t) & (t <= d))
        out[done : done + m] += np.bincount(rep, weights=contrib, minlength=m)
        done += m
    return out


def stable_marginals(
    params: ModelParams,
    epsilon: float,
    t: float,
    reps: int,
    cfg: SamplerConfig,
    stream: int = 0,
) -> np.ndarray:
    """Per-replicate values of the truncated limit at a single time."""
    return stable_band_marginals(
        params,
        limit_jump_threshold(params, epsilon),
        np.inf,
        t,
        reps,
        cfg,
        stream=stream,
    )
