"""Pairwise spin model for binary responses on a treated social network.

Responses are spins in {-1, +1}.  The unnormalized log joint is

    alpha0 * sum of spins in group A  +  alpha1 * sum in group B
    + beta0 * sum of spin products over within-A edges
    + beta1 * sum over within-B edges
    + gamma * sum over cross-group edges

with each undirected edge counted exactly once.  Flipping one spin changes
the exponent by twice its local field, so each node's full conditional is
logistic in 2x the field; those conditionals drive both Gibbs sampling and
pseudo-likelihood fitting.

For small graphs the joint can be enumerated outright, which supplies the
oracle the samplers and estimators are tested against.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numba import njit
from scipy.special import logsumexp

from .errors import CapacityError, ValidationError
from .graph import Graph

__all__ = [
    "IsingParams",
    "IsingModel",
    "logistic",
    "log_potential",
    "conditional_prob_positive",
    "exact_distribution",
    "exact_mean_response",
    "ExactDistribution",
    "state_index",
    "validate_spins",
    "MAX_ENUM_NODES",
]

MAX_ENUM_NODES = 20


def logistic(x):
    """Numerically stable 1 / (1 + exp(-x)); no overflow for large |x|."""
    x = np.asarray(x, dtype=np.float64)
    out = np.empty_like(x)
    pos = x >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-x[pos]))
    ex = np.exp(x[~pos])
    out[~pos] = ex / (1.0 + ex)
    if out.ndim == 0:
        return float(out)
    return out


@dataclass(frozen=True)
class IsingParams:
    """Coefficient bundle for the spin model.

    alpha0/alpha1: per-node response tendency in groups A and B.
    beta0/beta1: within-group edge coupling for A and B.
    gamma: cross-group edge coupling.
    """

    alpha0: float
    alpha1: float
    beta0: float
    beta1: float
    gamma: float

    def __post_init__(self):
        for name in ("alpha0", "alpha1", "beta0", "beta1", "gamma"):
            v = float(getattr(self, name))
            if not np.isfinite(v):
                raise ValueError(f"{name} must be finite, got {v}")
            object.__setattr__(self, name, v)

    def as_dict(self) -> dict:
        return {"alpha0": self.alpha0, "alpha1": self.alpha1,
                "beta0": self.beta0, "beta1": self.beta1, "gamma": self.gamma}

    @classmethod
    def from_dict(cls, d: dict) -> "IsingParams":
        return cls(alpha0=float(d["alpha0"]), alpha1=float(d["alpha1"]),
                   beta0=float(d["beta0"]), beta1=float(d["beta1"]),
                   gamma=float(d["gamma"]))


def validate_spins(y: np.ndarray, num_nodes: int):
    y = np.asarray(y)
    if len(y) != num_nodes:
        raise ValidationError(
            f"spin vector length {len(y)} != num_nodes {num_nodes}")
    if not np.all((y == 1) | (y == -1)):
        bad = y[(y != 1) & (y != -1)][0]
        raise ValidationError(f"spins must be -1 or +1, got {bad}")


def _check_lengths(graph: Graph, z: np.ndarray, y: np.ndarray):
    n = graph.num_nodes
    if len(z) != n:
        raise ValidationError(f"assignment length {len(z)} != num_nodes {n}")
    if len(y) != n:
        raise ValidationError(f"response length {len(y)} != num_nodes {n}")


def log_potential(params: IsingParams, graph: Graph, z: np.ndarray,
                  y: np.ndarray) -> float:
    """Unnormalized log joint probability of a full spin state."""
    _check_lengths(graph, z, y)
    z = np.asarray(z)
    yf = np.asarray(y, dtype=np.float64)
    node_coef = np.where(z == 1, params.alpha1, params.alpha0)
    total = float(node_coef @ yf)
    if graph.num_edges:
        u = graph.edge_array[:, 0]
        v = graph.edge_array[:, 1]
        prod = yf[u] * yf[v]
        zu, zv = z[u], z[v]
        both_a = (zu == 0) & (zv == 0)
        both_b = (zu == 1) & (zv == 1)
        cross = ~(both_a | both_b)
        total += params.beta0 * float(prod[both_a].sum())
        total += params.beta1 * float(prod[both_b].sum())
        total += params.gamma * float(prod[cross].sum())
    return total


def neighbor_spin_sums(graph: Graph, z: np.ndarray, y: np.ndarray,
                       i: int) -> tuple[float, float]:
    """Sum of neighbor spins split by the neighbors' group: (A sum, B sum)."""
    nbrs = graph.neighbors[i]
    if len(nbrs) == 0:
        return 0.0, 0.0
    yn = np.asarray(y, dtype=np.float64)[nbrs]
    zn = np.asarray(z)[nbrs]
    return float(yn[zn == 0].sum()), float(yn[zn == 1].sum())


def conditional_prob_positive(params: IsingParams, graph: Graph,
                              z: np.ndarray, y: np.ndarray, i: int) -> float:
    """P(y_i = +1 | everything else): logistic in twice the local field.

    A node in group A feels alpha0, beta0 toward its A neighbors, and gamma
    toward its B neighbors; a node in group B feels alpha1, beta1 toward B
    and gamma toward A.
    """
    n = graph.num_nodes
    if not (0 <= i < n):
        raise IndexError(f"node id {i} out of range [0, {n})")
    _check_lengths(graph, z, y)
    s_a, s_b = neighbor_spin_sums(graph, z, y, i)
    if z[i] == 0:
        field = params.alpha0 + params.beta0 * s_a + params.gamma * s_b
    else:
        field = params.alpha1 + params.beta1 * s_b + params.gamma * s_a
    return float(logistic(2.0 * field))


def state_index(y: np.ndarray) -> int:
    """Row index of a spin state in the enumeration order used below.

    Bit i of the index is set iff node i has spin +1.
    """
    idx = 0
    for i, v in enumerate(y):
        if v == 1:
            idx |= 1 << i
    return idx


@dataclass
class ExactDistribution:
    """All 2^n spin states with their exact probabilities.

    Row r of `states` is the state whose index is r (see state_index);
    probs[r] is its probability.
    """

    states: np.ndarray
    probs: np.ndarray

    def prob_of(self, y: np.ndarray) -> float:
        return float(self.probs[state_index(y)])

    def as_dict(self) -> dict:
        return {tuple(int(v) for v in row): float(p)
                for row, p in zip(self.states, self.probs)}


def _check_capacity(graph: Graph):
    if graph.num_nodes > MAX_ENUM_NODES:
        raise CapacityError(
            f"exact enumeration supports at most {MAX_ENUM_NODES} nodes, "
            f"got {graph.num_nodes}")


def enumerate_spin_states(n: int) -> np.ndarray:
    """(2^n, n) int8 array of all spin states, row r = state with index r."""
    r = np.arange(2 ** n, dtype=np.int64)
    bits = (r[:, None] >> np.arange(n)) & 1
    return (2 * bits - 1).astype(np.int8)


def exact_distribution(params: IsingParams, graph: Graph,
                       z: np.ndarray) -> ExactDistribution:
    """Brute-force joint distribution by enumerating every spin state."""
    _check_capacity(graph)
    n = graph.num_nodes
    z = np.asarray(z)
    if len(z) != n:
        raise ValidationError(f"assignment length {len(z)} != num_nodes {n}")
    states = enumerate_spin_states(n)
    node_coef = np.where(z == 1, params.alpha1, params.alpha0)
    logp = states.astype(np.float64) @ node_coef
    if graph.num_edges:
        u = graph.edge_array[:, 0]
        v = graph.edge_array[:, 1]
        zu, zv = z[u], z[v]
        coef = np.where((zu == 0) & (zv == 0), params.beta0,
                        np.where((zu == 1) & (zv == 1), params.beta1,
                                 params.gamma))
        prod = states[:, u] * states[:, v]
        logp += prod.astype(np.float64) @ coef
    probs = np.exp(logp - logsumexp(logp))
    probs /= probs.sum()
    return ExactDistribution(states=states, probs=probs)


def exact_mean_response(params: IsingParams, graph: Graph,
                        z: np.ndarray) -> float:
    """Exact expectation of the mean spin under the joint distribution."""
    dist = exact_distribution(params, graph, z)
    mean_spin = dist.states.astype(np.float64).mean(axis=1)
    return float(dist.probs @ mean_spin)


@njit(cache=True, nogil=True)
def _spin_chain(indptr, indices, zb, y, a0, a1, b0, b1, g, u,
                burnin, thinning, out_states, out_means):
    n = y.shape[0]
    row = 0
    for s in range(u.shape[0]):
        for i in range(n):
            sa = 0.0
            sb = 0.0
            for t in range(indptr[i], indptr[i + 1]):
                j = indices[t]
                if zb[j] == 0:
                    sa += y[j]
                else:
                    sb += y[j]
            if zb[i] == 0:
                x = 2.0 * (a0 + b0 * sa + g * sb)
            else:
                x = 2.0 * (a1 + b1 * sb + g * sa)
            if x >= 0.0:
                p = 1.0 / (1.0 + np.exp(-x))
            else:
                ex = np.exp(x)
                p = ex / (1.0 + ex)
            y[i] = 1.0 if u[s, i] < p else -1.0
        if s >= burnin and (s - burnin + 1) % thinning == 0:
            m = 0.0
            for i in range(n):
                out_states[row, i] = int(y[i])
                m += y[i]
            out_means[row] = m / n
            row += 1


class IsingModel:
    """Full-conditional provider for the spin model, usable by the Gibbs engine."""

    response_dtype = np.int8

    def __init__(self, params: IsingParams):
        self.params = params

    def conditional_prob_positive(self, graph, z, y, i) -> float:
        return conditional_prob_positive(self.params, graph, z, y, i)

    def initial_state(self, graph: Graph, init,
                      rng: np.random.Generator) -> np.ndarray:
        n = graph.num_nodes
        if isinstance(init, str):
            if init == "random":
                return (2 * rng.integers(0, 2, size=n) - 1).astype(np.int8)
            if init == "all-positive":
                return np.ones(n, dtype=np.int8)
            raise ValueError(f"unknown init {init!r}")
        validate_spins(init, n)
        return np.asarray(init, dtype=np.int8).copy()

    def sweep_chain(self, graph: Graph, z: np.ndarray, y: np.ndarray,
                    burnin: int, n_samples: int, thinning: int,
                    rng: np.random.Generator):
        """Run systematic sweeps in node-index order, recording spin states.

        Returns (states int8 (n_samples, n), means)."""
        n = graph.num_nodes
        total = burnin + n_samples * thinning
        u = rng.random((total, n))
        out_states = np.empty((n_samples, n), dtype=np.int8)
        out_means = np.empty(n_samples, dtype=np.float64)
        p = self.params
        # the kernel works in float64 so neighbor sums cannot overflow
        _spin_chain(graph.indptr, graph.indices,
                    np.asarray(z, dtype=np.int8),
                    np.asarray(y, dtype=np.float64),
                    p.alpha0, p.alpha1, p.beta0, p.beta1, p.gamma,
                    u, burnin, thinning, out_states, out_means)
        return out_states, out_means
