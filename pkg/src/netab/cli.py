"""Command-line front end.

Subcommands cover the pipeline stages: ``generate`` samples a dataset
from a scenario config, ``fit`` recovers parameters from a dataset,
``ate`` estimates the average treatment effect, ``test`` runs the
shuffle bootstrap, and ``scenario`` does all of it in one shot.

All structured output is JSON with sorted keys.  Failures inside the
pipeline exit with status 1 and a one-line JSON error object on stderr;
usage mistakes exit with status 2 (click's convention).
"""

from __future__ import annotations

import dataclasses
import functools
import json
import sys
from pathlib import Path

import click
import numpy as np

from . import __version__
from .bootstrap import bootstrap_test
from .effects import (estimate_ate_exact, estimate_ate_gibbs_pooled,
                      naive_ate, naive_t_test)
from .errors import NetabError
from .gibbs import GibbsConfig
from .graph import load_dataset, save_dataset
from .inference import fit_ggm_ols, fit_ising_mple, is_spin_dataset
from .ising import MAX_ENUM_NODES
from .scenario import (PRESET_NAMES, ScenarioConfig, generate_dataset,
                       report_to_json, run_scenario, scenario_preset)

_STAT_CHOICES = {"ate": "ate", "alpha-diff": "alpha_diff",
                 "beta-diff": "beta_diff"}


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _emit(obj, out: str | None):
    text = _dump(obj)
    if out:
        Path(out).write_text(text, encoding="utf-8")
        click.echo(f"wrote {out}")
    else:
        click.echo(text, nl=False)


def _cli_errors(fn):
    """Turn pipeline failures into a JSON line on stderr and exit 1."""
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except (NetabError, ValueError, OSError) as exc:
            err = {"error": {"type": type(exc).__name__, "message": str(exc)}}
            click.echo(json.dumps(err, sort_keys=True), err=True)
            sys.exit(1)
    return wrapper


def _load_config(config_path: str | None, preset: str | None,
                 seed: int | None) -> ScenarioConfig:
    if (config_path is None) == (preset is None):
        raise click.UsageError("provide exactly one of --config or --preset")
    config = (ScenarioConfig.from_json(config_path) if config_path
              else scenario_preset(preset))
    if seed is not None:
        config = dataclasses.replace(config, master_seed=seed)
    return config


_seed_option = click.option(
    "--seed", type=int, default=None, envvar="NETAB_SEED",
    help="Master seed (overrides the config; NETAB_SEED works too).")


@click.group()
@click.version_option(__version__)
def main():
    """Simulate, fit, and test A/B experiments on networks."""


@main.command()
@click.option("--config", "config_path", type=click.Path(exists=True),
              help="Scenario config JSON.")
@click.option("--preset", type=click.Choice(PRESET_NAMES),
              help="Built-in scenario parameterization.")
@_seed_option
@click.option("--out", required=True, type=click.Path(),
              help="Where to write the dataset JSON.")
@_cli_errors
def generate(config_path, preset, seed, out):
    """Sample networks, assignments, and responses."""
    config = _load_config(config_path, preset, seed)
    dataset = generate_dataset(config)
    save_dataset(dataset, out)
    n_edges = sum(t.graph.num_edges for t in dataset.triplets)
    n_treated = int(sum(int(t.z.sum()) for t in dataset.triplets))
    click.echo(f"wrote {dataset.k} networks ({dataset.total_nodes} nodes, "
               f"{n_edges} edges, {n_treated} treated) to {out}")


def _fit_payload(dataset):
    if is_spin_dataset(dataset):
        fit = fit_ising_mple(dataset)
        model = "ising"
    else:
        fit = fit_ggm_ols(dataset)
        model = "ggm"
    payload = {"model": model,
               "params": fit.params.as_dict(),
               "converged": bool(fit.converged),
               "iterations": fit.iterations,
               "final_gradient_norm": fit.final_gradient_norm,
               "ridge_used": bool(fit.ridge_used)}
    return fit, payload


@main.command()
@click.argument("dataset_path", type=click.Path(exists=True))
@click.option("--out", type=click.Path(), help="Write JSON here "
              "instead of stdout.")
@_cli_errors
def fit(dataset_path, out):
    """Estimate model parameters from a dataset."""
    dataset = load_dataset(dataset_path)
    _, payload = _fit_payload(dataset)
    _emit(payload, out)


@main.command()
@click.argument("dataset_path", type=click.Path(exists=True))
@click.option("--burnin", type=int, default=500, show_default=True,
              help="Burn-in sweeps per counterfactual chain.")
@click.option("--samples", type=int, default=2000, show_default=True,
              help="Recorded sweeps per counterfactual chain.")
@_seed_option
@click.option("--out", type=click.Path())
@_cli_errors
def ate(dataset_path, burnin, samples, seed, out):
    """Estimate the average treatment effect for a dataset."""
    dataset = load_dataset(dataset_path)
    fit_result, fit_payload = _fit_payload(dataset)
    config = GibbsConfig(burnin_sweeps=burnin, n_samples=samples)
    graphs = [t.graph for t in dataset.triplets]
    pooled, per_graph = estimate_ate_gibbs_pooled(
        fit_result.params, graphs, config, seed if seed is not None else 0)
    exact = None
    if (fit_payload["model"] == "ising"
            and all(g.num_nodes <= MAX_ENUM_NODES for g in graphs)):
        exact = float(np.mean([estimate_ate_exact(fit_result.params, g).value
                               for g in graphs]))
    payload = {"fit": fit_payload,
               "model_based": pooled.as_dict(),
               "per_graph": [e.value for e in per_graph],
               "exact": exact,
               "naive": naive_ate(dataset).as_dict(),
               "naive_t_test_p": naive_t_test(dataset)}
    _emit(payload, out)


def _write_null_csv(path: Path, null_stats: np.ndarray):
    lines = ["replicate,statistic"]
    lines += [f"{i},{v!r}" for i, v in enumerate(null_stats.tolist())]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def _write_hist_csv(path: Path, null_stats: np.ndarray, observed: float,
                    n_bins: int = 30):
    lo = min(float(null_stats.min()), observed)
    hi = max(float(null_stats.max()), observed)
    if lo == hi:                       # degenerate: all mass at one point
        lo, hi = lo - 0.5, hi + 0.5
    counts, edges = np.histogram(null_stats, bins=n_bins, range=(lo, hi))
    edges = edges.tolist()
    lines = ["bin_left,bin_right,count"]
    lines += [f"{edges[i]!r},{edges[i + 1]!r},{int(c)}"
              for i, c in enumerate(counts)]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def _write_svg(path: Path, null_stats: np.ndarray, observed: float,
               statistic: str):
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.hist(null_stats, bins=30, color="#7da7d9", edgecolor="white")
    ax.axvline(observed, color="#c0392b", linewidth=2,
               label=f"observed = {observed:.4g}")
    ax.set_xlabel(statistic)
    ax.set_ylabel("null replicates")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)


@main.command()
@click.argument("dataset_path", type=click.Path(exists=True))
@click.option("--statistic", type=click.Choice(sorted(_STAT_CHOICES)),
              default="alpha-diff", show_default=True)
@click.option("--n-boot", type=int, default=200, show_default=True)
@_seed_option
@click.option("--threads", type=int, default=1, show_default=True)
@click.option("--out", type=click.Path(),
              help="Result JSON path; null-distribution and histogram "
                   "CSVs are written next to it.")
@click.option("--svg", is_flag=True,
              help="Also render the null histogram as SVG (needs --out).")
@_cli_errors
def test(dataset_path, statistic, n_boot, seed, threads, out, svg):
    """Shuffle-bootstrap significance test."""
    if svg and not out:
        raise click.UsageError("--svg requires --out")
    dataset = load_dataset(dataset_path)
    result = bootstrap_test(dataset,
                            statistic_kind=_STAT_CHOICES[statistic],
                            n_boot=n_boot,
                            master_seed=seed if seed is not None else 0,
                            n_threads=threads)
    _emit(result.as_dict(), out)
    if out:
        base = Path(out).with_suffix("")
        _write_null_csv(base.with_name(base.name + "_null.csv"),
                        result.null_stats)
        _write_hist_csv(base.with_name(base.name + "_hist.csv"),
                        result.null_stats, result.observed_stat)
        if svg:
            _write_svg(base.with_suffix(".svg"), result.null_stats,
                       result.observed_stat, statistic)


@main.command()
@click.option("--config", "config_path", type=click.Path(exists=True),
              help="Scenario config JSON.")
@click.option("--preset", type=click.Choice(PRESET_NAMES))
@_seed_option
@click.option("--threads", type=int, default=1, show_default=True)
@click.option("--out", type=click.Path(), help="Report JSON path.")
@_cli_errors
def scenario(config_path, preset, seed, threads, out):
    """Run generate + fit + ate + test and emit one report."""
    config = _load_config(config_path, preset, seed)
    report = run_scenario(config, n_threads=threads)
    text = report_to_json(report) + "\n"
    if out:
        Path(out).write_text(text, encoding="utf-8")
        click.echo(f"wrote {out}")
    else:
        click.echo(text, nl=False)


if __name__ == "__main__":
    main()
