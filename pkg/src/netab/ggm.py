"""Gaussian additive model for real-valued responses on a treated network.

Each node's response, conditional on its neighborhood, is Gaussian with mean

    alpha0 + (alpha1 - alpha0) * z_i
    + beta * (count of treated neighbors)
    + gamma * (mean of neighbor responses)

and standard deviation sigma.  Nodes with no neighbors use 0 for the
neighbor-mean term.  The Gibbs chain built from these conditionals is taken
as the model's definition of the joint; stationarity is not guaranteed once
|gamma| >= 1.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numba import njit

from .errors import ValidationError
from .graph import Graph

__all__ = ["GgmParams", "GgmModel", "ggm_conditional_mean", "ggm_sample_node",
           "validate_real_response"]


@dataclass(frozen=True)
class GgmParams:
    """Coefficients of the Gaussian additive model.

    alpha0/alpha1: baseline mean for groups A and B.
    beta: effect per treated neighbor.
    gamma: weight on the neighbor response mean (keep |gamma| < 1).
    sigma: conditional noise standard deviation, > 0.
    """

    alpha0: float
    alpha1: float
    beta: float
    gamma: float
    sigma: float

    def __post_init__(self):
        for name in ("alpha0", "alpha1", "beta", "gamma", "sigma"):
            v = float(getattr(self, name))
            if not np.isfinite(v):
                raise ValueError(f"{name} must be finite, got {v}")
            object.__setattr__(self, name, v)
        if self.sigma <= 0:
            raise ValueError(f"sigma must be positive, got {self.sigma}")

    def as_dict(self) -> dict:
        return {"alpha0": self.alpha0, "alpha1": self.alpha1,
                "beta": self.beta, "gamma": self.gamma, "sigma": self.sigma}

    @classmethod
    def from_dict(cls, d: dict) -> "GgmParams":
        return cls(alpha0=float(d["alpha0"]), alpha1=float(d["alpha1"]),
                   beta=float(d["beta"]), gamma=float(d["gamma"]),
                   sigma=float(d["sigma"]))


def validate_real_response(y: np.ndarray, num_nodes: int):
    y = np.asarray(y, dtype=np.float64)
    if len(y) != num_nodes:
        raise ValidationError(
            f"response length {len(y)} != num_nodes {num_nodes}")
    if not np.all(np.isfinite(y)):
        raise ValidationError("responses must be finite")


def ggm_conditional_mean(params: GgmParams, graph: Graph, z: np.ndarray,
                         y: np.ndarray, i: int) -> float:
    """Conditional mean of node i's response given its neighborhood."""
    n = graph.num_nodes
    if not (0 <= i < n):
        raise IndexError(f"node id {i} out of range [0, {n})")
    nbrs = graph.neighbors[i]
    mean = params.alpha0 + (params.alpha1 - params.alpha0) * float(z[i])
    if len(nbrs):
        zn = np.asarray(z, dtype=np.float64)[nbrs]
        yn = np.asarray(y, dtype=np.float64)[nbrs]
        mean += params.beta * zn.sum() + params.gamma * yn.mean()
    return float(mean)


def ggm_sample_node(params: GgmParams, graph: Graph, z: np.ndarray,
                    y: np.ndarray, i: int, rng: np.random.Generator) -> float:
    """Draw node i's response from its Gaussian full conditional."""
    mean = ggm_conditional_mean(params, graph, z, y, i)
    return float(mean + params.sigma * rng.standard_normal())


@njit(cache=True, nogil=True)
def _gaussian_chain(indptr, indices, zb, y, a0, a1, beta, gamma, sigma, eps,
                    burnin, thinning, out_states, out_means):
    n = y.shape[0]
    row = 0
    for s in range(eps.shape[0]):
        for i in range(n):
            deg = indptr[i + 1] - indptr[i]
            sy = 0.0
            treated = 0.0
            for t in range(indptr[i], indptr[i + 1]):
                j = indices[t]
                sy += y[j]
                treated += zb[j]
            mean = a0 + (a1 - a0) * zb[i] + beta * treated
            if deg > 0:
                mean += gamma * sy / deg
            y[i] = mean + sigma * eps[s, i]
        if s >= burnin and (s - burnin + 1) % thinning == 0:
            m = 0.0
            for i in range(n):
                out_states[row, i] = y[i]
                m += y[i]
            out_means[row] = m / n
            row += 1


class GgmModel:
    """Full-conditional provider for the Gaussian model, usable by the Gibbs engine."""

    response_dtype = np.float64

    def __init__(self, params: GgmParams):
        self.params = params

    def conditional_mean(self, graph, z, y, i) -> float:
        return ggm_conditional_mean(self.params, graph, z, y, i)

    def initial_state(self, graph: Graph, init,
                      rng: np.random.Generator) -> np.ndarray:
        n = graph.num_nodes
        if isinstance(init, str):
            # "random" starts at zeros: a symmetric, scale-free origin for
            # real-valued chains.
            if init in ("random", "all-positive"):
                return np.zeros(n, dtype=np.float64)
            raise ValueError(f"unknown init {init!r}")
        validate_real_response(init, n)
        return np.asarray(init, dtype=np.float64).copy()

    def sweep_chain(self, graph: Graph, z: np.ndarray, y: np.ndarray,
                    burnin: int, n_samples: int, thinning: int,
                    rng: np.random.Generator):
        """Systematic sweeps in node-index order; returns (states, means)."""
        n = graph.num_nodes
        total = burnin + n_samples * thinning
        eps = rng.standard_normal((total, n))
        out_states = np.empty((n_samples, n), dtype=np.float64)
        out_means = np.empty(n_samples, dtype=np.float64)
        p = self.params
        _gaussian_chain(graph.indptr, graph.indices,
                        np.asarray(z, dtype=np.int8), y,
                        p.alpha0, p.alpha1, p.beta, p.gamma, p.sigma,
                        eps, burnin, thinning, out_states, out_means)
        return out_states, out_means
