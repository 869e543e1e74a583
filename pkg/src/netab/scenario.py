"""End-to-end simulation scenarios.

A scenario bundles everything needed to exercise the whole pipeline:
generate K small-world networks with randomized treatment, simulate
responses from known parameters, fit the model back, estimate the
average treatment effect two ways (counterfactual chains and the naive
difference in group means), and run the shuffle bootstrap.  The result
is a plain-dict run report that serializes to stable JSON.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field

import numpy as np

from .bootstrap import STATISTIC_KINDS, bootstrap_test
from .effects import (estimate_ate_exact, estimate_ate_gibbs_pooled,
                      naive_ate, naive_t_test)
from .errors import ValidationError
from .ggm import GgmModel, GgmParams
from .gibbs import GibbsConfig, simulate_responses
from .graph import (ExperimentDataset, Triplet, bernoulli_assignment,
                    watts_strogatz)
from .inference import FitOptions, fit_ggm_ols, fit_ising_mple
from .ising import MAX_ENUM_NODES, IsingModel, IsingParams
from .seeds import spawn_rng

__all__ = ["ScenarioConfig", "scenario_preset", "PRESET_NAMES",
           "generate_dataset", "run_scenario", "report_to_json"]

PRESET_NAMES = ("I", "II", "III")

# Stream tags under the scenario master seed, one family per stage.
_TAG_GRAPH = 10
_TAG_ASSIGN = 11
_TAG_RESPONSE = 12
_TAG_BOOTSTRAP = 13
_TAG_ATE = 14


@dataclass(frozen=True)
class ScenarioConfig:
    """Everything a scenario run depends on, in one serializable object."""

    model: str                      # "ising" or "ggm"
    true_params: IsingParams | GgmParams
    k_networks: int = 100
    nodes_per_network: int = 100
    lattice_degree: int = 4
    rewire_prob: float = 0.1
    treatment_proportion: float = 0.5
    gen_gibbs: GibbsConfig = field(
        default_factory=lambda: GibbsConfig(burnin_sweeps=200, n_samples=1))
    ate_gibbs: GibbsConfig = field(
        default_factory=lambda: GibbsConfig(burnin_sweeps=500, n_samples=2000))
    n_boot: int = 200
    statistic_kind: str = "alpha_diff"
    master_seed: int = 0

    def __post_init__(self):
        if self.model not in ("ising", "ggm"):
            raise ValidationError(f"model must be 'ising' or 'ggm', "
                                  f"got {self.model!r}")
        expected = IsingParams if self.model == "ising" else GgmParams
        if not isinstance(self.true_params, expected):
            raise ValidationError(
                f"model {self.model!r} needs {expected.__name__}, "
                f"got {type(self.true_params).__name__}")
        if self.k_networks < 1:
            raise ValidationError("k_networks must be >= 1")
        if self.statistic_kind not in STATISTIC_KINDS:
            raise ValidationError(f"unknown statistic "
                                  f"{self.statistic_kind!r}")

    def as_dict(self) -> dict:
        return {"model": self.model,
                "true_params": self.true_params.as_dict(),
                "k_networks": self.k_networks,
                "nodes_per_network": self.nodes_per_network,
                "lattice_degree": self.lattice_degree,
                "rewire_prob": self.rewire_prob,
                "treatment_proportion": self.treatment_proportion,
                "gen_gibbs": self.gen_gibbs.as_dict(),
                "ate_gibbs": self.ate_gibbs.as_dict(),
                "n_boot": self.n_boot,
                "statistic_kind": self.statistic_kind,
                "master_seed": self.master_seed}

    @classmethod
    def from_dict(cls, data: dict) -> "ScenarioConfig":
        data = dict(data)
        model = data.get("model", "ising")
        cls_params = IsingParams if model == "ising" else GgmParams
        if "true_params" in data:
            data["true_params"] = cls_params.from_dict(data["true_params"])
        for key in ("gen_gibbs", "ate_gibbs"):
            if key in data and isinstance(data[key], dict):
                data[key] = GibbsConfig.from_dict(data[key])
        known = set(cls.__dataclass_fields__)
        unknown = set(data) - known
        if unknown:
            raise ValidationError(
                f"unknown scenario config keys: {sorted(unknown)}")
        return cls(**data)

    @classmethod
    def from_json(cls, path) -> "ScenarioConfig":
        with open(path, "r", encoding="utf-8") as fh:
            return cls.from_dict(json.load(fh))


def scenario_preset(name: str) -> ScenarioConfig:
    """Three standard parameterizations of the two-group spin model.

    I:   treatment shifts the individual effect only (alpha differs,
         interactions equal) -- a real effect the naive estimator also sees.
    II:  no treatment effect at all (everything symmetric) -- the null.
    III: alphas equal but the within-treated interaction is stronger --
         an effect carried purely by the network term.
    """
    if name not in PRESET_NAMES:
        raise ValidationError(f"unknown preset {name!r}; "
                              f"choose one of {PRESET_NAMES}")
    if name == "I":
        params = IsingParams(alpha0=0.0, alpha1=0.1, beta0=0.01,
                             beta1=0.01, gamma=0.01)
        statistic = "alpha_diff"
    elif name == "II":
        params = IsingParams(alpha0=0.05, alpha1=0.05, beta0=0.01,
                             beta1=0.01, gamma=0.01)
        statistic = "alpha_diff"
    else:
        params = IsingParams(alpha0=0.05, alpha1=0.05, beta0=0.01,
                             beta1=0.05, gamma=0.01)
        statistic = "beta_diff"
    return ScenarioConfig(model="ising", true_params=params,
                          statistic_kind=statistic)


def generate_dataset(config: ScenarioConfig) -> ExperimentDataset:
    """Sample K independent (graph, assignment, response) triplets."""
    model_cls = IsingModel if config.model == "ising" else GgmModel
    model = model_cls(config.true_params)
    seed = config.master_seed
    triplets = []
    for k in range(config.k_networks):
        graph = watts_strogatz(config.nodes_per_network,
                               config.lattice_degree,
                               config.rewire_prob,
                               spawn_rng(seed, _TAG_GRAPH, k))
        z = bernoulli_assignment(config.nodes_per_network,
                                 config.treatment_proportion,
                                 spawn_rng(seed, _TAG_ASSIGN, k))
        y = simulate_responses(model, graph, z, config.gen_gibbs,
                               spawn_rng(seed, _TAG_RESPONSE, k))
        triplets.append(Triplet(graph=graph, z=z, y=y))
    return ExperimentDataset(triplets=triplets)


def _derive_seed(master_seed: int, tag: int) -> int:
    return int(spawn_rng(master_seed, tag).integers(2 ** 63))


def run_scenario(config: ScenarioConfig, n_threads: int = 1) -> dict:
    """Run the full pipeline and return the report dict.

    The report is reproducible: two runs with the same config agree on
    every key except "timing".
    """
    timing = {}

    t0 = time.perf_counter()
    dataset = generate_dataset(config)
    timing["generate_s"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    if config.model == "ising":
        fit = fit_ising_mple(dataset, FitOptions())
    else:
        fit = fit_ggm_ols(dataset)
    timing["fit_s"] = time.perf_counter() - t0

    true_d = config.true_params.as_dict()
    est_d = fit.params.as_dict()
    param_table = {k: {"true": true_d[k], "estimate": est_d[k]}
                   for k in sorted(true_d)}

    t0 = time.perf_counter()
    graphs = [t.graph for t in dataset.triplets]
    pooled, per_graph = estimate_ate_gibbs_pooled(
        fit.params, graphs, config.ate_gibbs,
        _derive_seed(config.master_seed, _TAG_ATE))
    exact = None
    if (config.model == "ising"
            and config.nodes_per_network <= MAX_ENUM_NODES):
        exact_pg = [estimate_ate_exact(fit.params, g) for g in graphs]
        exact = float(np.mean([e.value for e in exact_pg]))
    naive = naive_ate(dataset)
    timing["ate_s"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    boot = bootstrap_test(dataset,
                          statistic_kind=config.statistic_kind,
                          n_boot=config.n_boot,
                          ate_options=config.ate_gibbs,
                          master_seed=_derive_seed(config.master_seed,
                                                   _TAG_BOOTSTRAP),
                          n_threads=n_threads)
    timing["bootstrap_s"] = time.perf_counter() - t0

    return {
        "config": config.as_dict(),
        "fit": {"params": est_d,
                "converged": bool(fit.converged),
                "iterations": fit.iterations,
                "final_gradient_norm": fit.final_gradient_norm},
        "param_table": param_table,
        "ate": {"model_based": pooled.as_dict(),
                "per_graph": [e.value for e in per_graph],
                "exact": exact,
                "naive": naive.as_dict(),
                "naive_t_test_p": naive_t_test(dataset)},
        "bootstrap": boot.as_dict(),
        "timing": timing,
    }


def report_to_json(report: dict) -> str:
    """Stable serialization: sorted keys, fixed separators."""
    return json.dumps(report, sort_keys=True, indent=2)
