"""Shuffle bootstrap for testing whether an observed effect is real.

The null distribution comes from breaking the pairing between treatment
labels and responses: each network's assignment vector is randomly
permuted (group sizes preserved), the model is refit, and the statistic
recomputed.  The p-value is the add-one-smoothed upper-tail fraction of
null statistics at or above the observed one.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .effects import estimate_ate_gibbs_pooled
from .errors import NetabError, ValidationError
from .gibbs import GibbsConfig
from .graph import ExperimentDataset, Triplet
from .inference import FitOptions, fit_ising_mple, is_spin_dataset
from .seeds import spawn_rng

__all__ = ["BootstrapResult", "shuffle_assignment", "bootstrap_test",
           "STATISTIC_KINDS"]

STATISTIC_KINDS = ("ate", "alpha_diff", "beta_diff")

# Stream tags under the master seed.
_TAG_SHUFFLE = 0
_TAG_REPLICATE_ATE = 1
_TAG_OBSERVED_ATE = 2


@dataclass
class BootstrapResult:
    """Observed statistic, its null distribution, and the p-value."""

    observed_stat: float
    null_stats: np.ndarray = field(repr=False)
    p_value: float
    statistic_kind: str
    n_failed: int = 0

    def p_value_two_sided(self) -> float:
        """Double the smaller tail, capped at 1."""
        n = len(self.null_stats)
        upper = (1 + int(np.sum(self.null_stats >= self.observed_stat))) / (n + 1)
        lower = (1 + int(np.sum(self.null_stats <= self.observed_stat))) / (n + 1)
        return min(1.0, 2.0 * min(upper, lower))

    def as_dict(self) -> dict:
        return {"observed_stat": self.observed_stat,
                "p_value": self.p_value,
                "p_value_two_sided": self.p_value_two_sided(),
                "statistic_kind": self.statistic_kind,
                "n_replicates": len(self.null_stats),
                "n_failed": self.n_failed,
                "null_stats": [float(v) for v in self.null_stats]}


def shuffle_assignment(z: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Uniform random permutation of one network's assignment vector."""
    return rng.permutation(np.asarray(z))


def _statistic(kind: str, params, graphs, ate_config, ate_seed) -> float:
    if kind == "alpha_diff":
        return params.alpha1 - params.alpha0
    if kind == "beta_diff":
        return params.beta1 - params.beta0
    if kind == "ate":
        pooled, _ = estimate_ate_gibbs_pooled(params, graphs, ate_config,
                                              ate_seed)
        return pooled.value
    raise ValueError(f"unknown statistic {kind!r}; "
                     f"choose one of {STATISTIC_KINDS}")


def _derive_seed(master_seed: int, *path: int) -> int:
    return int(spawn_rng(master_seed, *path).integers(2 ** 63))


def bootstrap_test(dataset: ExperimentDataset,
                   statistic_kind: str = "alpha_diff",
                   n_boot: int = 200,
                   fit_options: FitOptions | None = None,
                   ate_options: GibbsConfig | None = None,
                   master_seed: int = 0,
                   n_threads: int = 1) -> BootstrapResult:
    """Fit, shuffle, refit n_boot times, and report the upper-tail p-value.

    Replicate r derives all its randomness from (master_seed, r), so the
    result is identical whatever the thread count.  Replicates whose refit
    fails to converge are excluded and counted; more than 10% failures
    aborts the test.
    """

    if statistic_kind not in STATISTIC_KINDS:
        raise ValueError(f"unknown statistic {statistic_kind!r}; "
                         f"choose one of {STATISTIC_KINDS}")
    if n_boot < 1:
        raise ValueError(f"n_boot must be >= 1, got {n_boot}")
    if not is_spin_dataset(dataset):
        raise ValidationError(
            "the shuffle bootstrap operates on spin-response datasets")
    opts = fit_options or FitOptions()
    ate_config = ate_options or GibbsConfig(burnin_sweeps=500, n_samples=1000)
    graphs = [t.graph for t in dataset.triplets]

    observed_fit = fit_ising_mple(dataset, opts)
    if not observed_fit.converged:
        raise NetabError("fit on the observed data did not converge; "
                         "cannot anchor the bootstrap")
    observed_stat = _statistic(statistic_kind, observed_fit.params, graphs,
                               ate_config,
                               _derive_seed(master_seed, _TAG_OBSERVED_ATE))

    def one_replicate(r: int) -> float | None:
        rng = spawn_rng(master_seed, _TAG_SHUFFLE, r)
        shuffled = ExperimentDataset(triplets=[
            Triplet(graph=t.graph, z=shuffle_assignment(t.z, rng), y=t.y)
            for t in dataset.triplets])
        try:
            fit = fit_ising_mple(shuffled, opts)
        except np.linalg.LinAlgError:
            return None
        if not fit.converged:
            return None
        return _statistic(statistic_kind, fit.params, graphs, ate_config,
                          _derive_seed(master_seed, _TAG_REPLICATE_ATE, r))

    if n_threads > 1:
        with ThreadPoolExecutor(max_workers=n_threads) as pool:
            outcomes = list(pool.map(one_replicate, range(n_boot)))
    else:
        outcomes = [one_replicate(r) for r in range(n_boot)]

    null_stats = np.array([v for v in outcomes if v is not None])
    n_failed = n_boot - len(null_stats)
    if n_failed > 0.1 * n_boot:
        raise NetabError(
            f"{n_failed} of {n_boot} bootstrap refits failed to converge; "
            "the null distribution would be unreliable")
    p_value = (1 + int(np.sum(null_stats >= observed_stat))) / (len(null_stats) + 1)
    return BootstrapResult(observed_stat=float(observed_stat),
                           null_stats=null_stats,
                           p_value=float(p_value),
                           statistic_kind=statistic_kind,
                           n_failed=n_failed)
