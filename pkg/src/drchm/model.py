"""Core model definitions: parameters, point types, and neighborhood geometry.

The model is a bipartite random connection graph between two marked Poisson
point processes on the line.  "Vertices" carry a position, a weight, a birth
time and an exponential lifetime; "interactions" carry a position, a weight
and a single time instant.  A vertex and an interaction are connected when
their spatial distance is below a weight-dependent radius and the interaction
time falls inside the vertex's alive interval.
"""

from __future__ import annotations

import math
from dataclasses import dataclass


class RegimeError(ValueError):
    """Raised when an operation is invoked outside its parameter regime."""


class TruncationError(RuntimeError):
    """Raised when the interaction weight cutoff loses too many edges."""


class FactorizationError(RuntimeError):
    """Raised when a covariance matrix cannot be factorized (not PSD)."""


@dataclass(frozen=True)
class ModelParams:
    """Model parameters.

    beta
        Connection scale; the radius at weight 1 on both sides.
    gamma
        Vertex-weight exponent in (0, 1), gamma != 1/2.  gamma < 1/2 gives the
        Gaussian regime, gamma > 1/2 the heavy-tailed (stable) regime.
    gamma_prime
        Interaction-weight exponent in (0, 1).
    n
        Spatial window length; vertices are restricted to [0, n].

    The time horizon is fixed to [0, 1].  Vertex lifetimes are Exponential(1)
    and weights on both sides are Uniform(0, 1].
    """

    beta: float
    gamma: float
    gamma_prime: float
    n: float

    def __post_init__(self):
        if not self.beta > 0:
            raise ValueError(f"beta must be positive, got {self.beta}")
        if not 0 < self.gamma < 1:
            raise ValueError(f"gamma must be in (0, 1), got {self.gamma}")
        if self.gamma == 0.5:
            raise ValueError("gamma = 1/2 is not covered by either regime")
        if not 0 < self.gamma_prime < 1:
            raise ValueError(
                f"gamma_prime must be in (0, 1), got {self.gamma_prime}"
            )
        if not self.n >= 0:
            raise ValueError(f"window length n must be >= 0, got {self.n}")

    @property
    def regime(self) -> str:
        """"gaussian" for gamma < 1/2, "stable" for gamma > 1/2."""
        return "gaussian" if self.gamma < 0.5 else "stable"

    @property
    def c_tilde(self) -> float:
        """Spatial neighborhood constant 2*beta / (1 - gamma_prime)."""
        return 2.0 * self.beta / (1.0 - self.gamma_prime)


@dataclass(frozen=True)
class Vertex:
    """A vertex point: position, weight, birth time, lifetime."""

    x: float
    u: float
    b: float
    l: float

    def __post_init__(self):
        if not 0 < self.u <= 1:
            raise ValueError(f"vertex weight must be in (0, 1], got {self.u}")
        if not self.l > 0:
            raise ValueError(f"lifetime must be positive, got {self.l}")

    @property
    def death(self) -> float:
        return self.b + self.l


@dataclass(frozen=True)
class Interaction:
    """An interaction point: position, weight, time."""

    z: float
    w: float
    r: float

    def __post_init__(self):
        if not 0 < self.w <= 1:
            raise ValueError(
                f"interaction weight must be in (0, 1], got {self.w}"
            )


def spatial_radius(params: ModelParams, u, w):
    """Connection radius beta * u**(-gamma) * w**(-gamma_prime).

    Accepts scalars or numpy arrays; strictly decreasing in both weights and
    always >= beta.
    """
    _check_weight(u)
    _check_weight(w)
    return params.beta * u ** (-params.gamma) * w ** (-params.gamma_prime)


def is_connected(params: ModelParams, v: Vertex, i: Interaction, t: float) -> bool:
    """Whether vertex and interaction share an edge that is active at time t.

    Requires |x - z| <= spatial_radius(u, w) and b <= r <= t <= b + l.
    """
    if abs(v.x - i.z) > spatial_radius(params, v.u, i.w):
        return False
    return v.b <= i.r <= t <= v.b + v.l


def spatial_nbhd_size(params: ModelParams, u) -> float:
    """Measure of {(z, w): |x - z| <= radius(u, w), w in (0, 1]}.

    Equals (2*beta / (1 - gamma_prime)) * u**(-gamma), independent of x.
    """
    _check_weight(u)
    return params.c_tilde * u ** (-params.gamma)


def temporal_nbhd_size(v: Vertex, t: float) -> float:
    """Length of {r: b <= r <= t <= b + l}: (t - b) while alive at t, else 0."""
    if v.b <= t <= v.b + v.l:
        return t - v.b
    return 0.0


def pm_temporal_nbhd_size(v: Vertex, t: float, sign: str) -> float:
    """Length of the monotone "plus" / "minus" temporal neighborhoods.

    plus:  ((b + l) min t) - b  for b <= t     (interaction times seen so far)
    minus: l                    for b + l <= t (full span, once the vertex died)
    """
    if sign == "plus":
        if v.b <= t:
            return min(v.b + v.l, t) - v.b
        return 0.0
    if sign == "minus":
        if v.b + v.l <= t:
            return v.l
        return 0.0
    raise ValueError(f"sign must be 'plus' or 'minus', got {sign!r}")


def _check_weight(value) -> None:
    import numpy as np

    if np.any(np.asarray(value) <= 0):
        raise ValueError("weights must be positive")


def mean_lifetime_overlap(b: float, l: float, t: float) -> float:
    """Length of [b, b + l] clipped to (-inf, min(death, t)] from b.

    Helper used by the missed-edge bound: the span of interaction times that
    can produce an edge with this vertex somewhere on [0, min(1, t)].
    """
    return max(0.0, min(b + l, t) - b)


GAUSSIAN_GAMMA_MAX = 0.5


def require_gaussian(params: ModelParams) -> None:
    if params.gamma >= 0.5 or params.gamma_prime >= 0.5:
        raise RegimeError(
            "gaussian-regime operation requires gamma < 1/2 and "
            f"gamma_prime < 1/2, got gamma={params.gamma}, "
            f"gamma_prime={params.gamma_prime}"
        )


def require_stable(params: ModelParams) -> None:
    if params.gamma <= 0.5:
        raise RegimeError(
            f"stable-regime operation requires gamma > 1/2, got {params.gamma}"
        )
