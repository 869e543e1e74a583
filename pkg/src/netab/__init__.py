"""Network A/B testing: simulate, fit, estimate, and test treatment
effects when responses spread along edges of a network."""

from .bootstrap import BootstrapResult, bootstrap_test, shuffle_assignment
from .effects import (AteEstimate, batch_means_se, estimate_ate_exact,
                      estimate_ate_gibbs, estimate_ate_gibbs_pooled,
                      naive_ate, naive_t_test)
from .errors import CapacityError, NetabError, ParseError, ValidationError
from .ggm import GgmModel, GgmParams, ggm_conditional_mean
from .gibbs import ChainOutput, GibbsConfig, gibbs_run, simulate_responses
from .graph import (ExperimentDataset, Graph, Triplet, bernoulli_assignment,
                    load_dataset, load_edgelist, save_dataset, save_edgelist,
                    watts_strogatz)
from .inference import (FitOptions, FitResult, build_ising_design,
                        fit_ggm_ols, fit_ising_mple, is_spin_dataset)
from .ising import (ExactDistribution, IsingModel, IsingParams,
                    conditional_prob_positive, exact_distribution,
                    exact_mean_response, log_potential)
from .scenario import (ScenarioConfig, generate_dataset, run_scenario,
                       scenario_preset)
from .seeds import spawn_rng

__version__ = "0.1.0"

__all__ = [
    "AteEstimate", "BootstrapResult", "CapacityError", "ChainOutput",
    "ExactDistribution", "ExperimentDataset", "FitOptions", "FitResult",
    "GgmModel", "GgmParams", "GibbsConfig", "Graph", "IsingModel",
    "IsingParams", "NetabError", "ParseError", "ScenarioConfig", "Triplet",
    "ValidationError", "batch_means_se", "bernoulli_assignment",
    "bootstrap_test", "build_ising_design", "conditional_prob_positive",
    "estimate_ate_exact", "estimate_ate_gibbs", "estimate_ate_gibbs_pooled",
    "exact_distribution", "exact_mean_response", "fit_ggm_ols",
    "fit_ising_mple", "generate_dataset", "ggm_conditional_mean",
    "gibbs_run", "is_spin_dataset", "load_dataset", "load_edgelist",
    "log_potential", "naive_ate", "naive_t_test", "run_scenario",
    "save_dataset", "save_edgelist", "scenario_preset",
    "shuffle_assignment", "simulate_responses", "spawn_rng",
    "watts_strogatz",
]
