"""Average treatment effect estimators.

The target is the expected mean response when every node is treated minus
when none are.  Estimators: two counterfactual Gibbs chains (all-B and
all-A assignments), exact enumeration on small graphs, and the naive
two-sample difference that ignores the network.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from scipy import stats

from .errors import ValidationError
from .ggm import GgmModel, GgmParams
from .gibbs import GibbsConfig, gibbs_run
from .graph import ExperimentDataset, Graph
from .ising import IsingModel, IsingParams, exact_mean_response
from .seeds import spawn_rng

__all__ = [
    "AteEstimate",
    "estimate_ate_gibbs",
    "estimate_ate_gibbs_pooled",
    "estimate_ate_exact",
    "naive_ate",
    "naive_t_test",
    "batch_means_se",
    "model_for_params",
]

ATE_BATCHES = 20


def model_for_params(params):
    if isinstance(params, IsingParams):
        return IsingModel(params)
    if isinstance(params, GgmParams):
        return GgmModel(params)
    raise TypeError(f"no model for parameter type {type(params).__name__}")


@dataclass
class AteEstimate:
    """A treatment-effect point estimate with its Monte Carlo uncertainty."""

    value: float
    mc_standard_error: float
    n_samples: int
    method: str

    def as_dict(self) -> dict:
        return {"value": self.value,
                "mc_standard_error": self.mc_standard_error,
                "n_samples": self.n_samples, "method": self.method}


def batch_means_se(series: np.ndarray, n_batches: int = ATE_BATCHES) -> float:
    """Standard error of the series mean from contiguous batch means.

    Batching respects autocorrelation left by the chain; a plain iid
    formula would understate the error.
    """
    m = len(series)
    nb = min(n_batches, m)
    if nb < 2:
        return float("inf")
    per = m // nb
    batches = np.asarray(series[:per * nb], dtype=np.float64)
    means = batches.reshape(nb, per).mean(axis=1)
    return float(means.std(ddof=1) / np.sqrt(nb))


def _counterfactual_chain(params, graph: Graph, all_b: bool,
                          config: GibbsConfig, rng) -> np.ndarray:
    fill = 1 if all_b else 0
    z = np.full(graph.num_nodes, fill, dtype=np.int8)
    model = model_for_params(params)
    chain = gibbs_run(model, graph, z, config, rng)
    return chain.mean_response


def estimate_ate_gibbs(params, graph: Graph, config: GibbsConfig,
                       seed: int) -> AteEstimate:
    """Monte Carlo treatment effect from two independent counterfactual chains.

    Chain streams are derived from the seed, one per counterfactual, so the
    two expectations never share randomness.
    """
    means_a = _counterfactual_chain(params, graph, False, config,
                                    spawn_rng(seed, 0, 0))
    means_b = _counterfactual_chain(params, graph, True, config,
                                    spawn_rng(seed, 0, 1))
    se = float(np.hypot(batch_means_se(means_a), batch_means_se(means_b)))
    return AteEstimate(value=float(means_b.mean() - means_a.mean()),
                       mc_standard_error=se,
                       n_samples=len(means_a) + len(means_b),
                       method="gibbs")


def estimate_ate_gibbs_pooled(params, graphs: list[Graph],
                              config: GibbsConfig, seed: int
                              ) -> tuple[AteEstimate, list[AteEstimate]]:
    """Per-graph Gibbs estimates plus their average across graphs.

    The pooled standard error treats the per-graph Monte Carlo errors as
    independent; graph-to-graph variability shows up in the per-graph list.
    """
    per_graph = []
    for g, graph in enumerate(graphs):
        means_a = _counterfactual_chain(params, graph, False, config,
                                        spawn_rng(seed, g, 0))
        means_b = _counterfactual_chain(params, graph, True, config,
                                        spawn_rng(seed, g, 1))
        se = float(np.hypot(batch_means_se(means_a), batch_means_se(means_b)))
        per_graph.append(AteEstimate(
            value=float(means_b.mean() - means_a.mean()),
            mc_standard_error=se,
            n_samples=len(means_a) + len(means_b),
            method="gibbs"))
    values = np.array([e.value for e in per_graph])
    ses = np.array([e.mc_standard_error for e in per_graph])
    pooled = AteEstimate(value=float(values.mean()),
                         mc_standard_error=float(
                             np.sqrt((ses ** 2).sum()) / len(graphs)),
                         n_samples=sum(e.n_samples for e in per_graph),
                         method="gibbs")
    return pooled, per_graph


def estimate_ate_exact(params: IsingParams, graph: Graph) -> AteEstimate:
    """Exact treatment effect by enumerating both counterfactual joints."""
    if not isinstance(params, IsingParams):
        raise TypeError("the enumeration oracle supports the spin model only")
    n = graph.num_nodes
    mean_b = exact_mean_response(params, graph, np.ones(n, dtype=np.int8))
    mean_a = exact_mean_response(params, graph, np.zeros(n, dtype=np.int8))
    return AteEstimate(value=mean_b - mean_a, mc_standard_error=0.0,
                       n_samples=0, method="exact")


def _pooled_groups(dataset: ExperimentDataset):
    a_vals, b_vals = [], []
    for t in dataset.triplets:
        y = np.asarray(t.y, dtype=np.float64)
        z = np.asarray(t.z)
        a_vals.append(y[z == 0])
        b_vals.append(y[z == 1])
    a = np.concatenate(a_vals)
    b = np.concatenate(b_vals)
    if len(a) == 0 or len(b) == 0:
        raise ValidationError("both groups must be non-empty for the naive "
                              "two-sample comparison")
    return a, b


def naive_ate(dataset: ExperimentDataset) -> AteEstimate:
    """Difference of pooled group means, pretending nodes are independent.

    Consistent only when responses do not travel along edges; kept as the
    baseline the network-aware estimate is compared against.
    """
    a, b = _pooled_groups(dataset)
    se = float(np.sqrt(a.var(ddof=1) / len(a) + b.var(ddof=1) / len(b)))
    return AteEstimate(value=float(b.mean() - a.mean()),
                       mc_standard_error=se,
                       n_samples=len(a) + len(b),
                       method="naive")


def naive_t_test(dataset: ExperimentDataset) -> float:
    """Welch two-sample t-test p-value on the pooled groups."""
    a, b = _pooled_groups(dataset)
    if a.var(ddof=0) == 0.0 and b.var(ddof=0) == 0.0:
        return 1.0 if a.mean() == b.mean() else 0.0
    with warnings.catch_warnings():
        # scipy warns about precision when one group is near-constant;
        # the p-value is still the right degenerate answer
        warnings.simplefilter("ignore", RuntimeWarning)
        res = stats.ttest_ind(b, a, equal_var=False)
    return float(res.pvalue)
