"""Maximum pseudo-likelihood fitting.

Treating every node across the K experiments as if independent, the
pseudo-likelihood factorizes into per-node conditionals, so fitting reduces
to a regression on network-derived features: no-intercept logistic
regression for the spin model (solved by Newton / iteratively reweighted
least squares, written out here), ordinary least squares for the Gaussian
model.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ValidationError
from .ggm import GgmParams
from .graph import ExperimentDataset, Graph
from .ising import IsingParams, logistic, validate_spins

__all__ = [
    "FitOptions",
    "FitResult",
    "IsingDesign",
    "build_ising_design",
    "fit_logistic_irls",
    "fit_ising_mple",
    "fit_ggm_ols",
    "is_spin_dataset",
    "neighbor_weight_sums",
]

GGM_COLUMNS = ("intercept", "treatment", "neighbor_treated_count",
               "neighbor_response_mean")


def neighbor_weight_sums(graph: Graph, w: np.ndarray) -> np.ndarray:
    """out[i] = sum of w[j] over neighbors j of i, for every node at once."""
    out = np.zeros(graph.num_nodes, dtype=np.float64)
    if graph.num_edges:
        u = graph.edge_array[:, 0]
        v = graph.edge_array[:, 1]
        out = (np.bincount(u, weights=w[v], minlength=graph.num_nodes)
               + np.bincount(v, weights=w[u], minlength=graph.num_nodes))
    return out


@dataclass
class IsingDesign:
    """Pooled per-node regression problem for the spin model.

    One row per node per triplet.  Columns:
      f1 = 1 if the node is in group A, f2 = 1 if in group B,
      f3 = f1 * (spin sum of A neighbors), f4 = f2 * (spin sum of B neighbors),
      f5 = spin sum of the opposite group's neighbors.
    Labels are (y+1)/2.  A no-intercept logistic fit on these columns has
    coefficients exactly twice (alpha0, alpha1, beta0, beta1, gamma).
    """

    features: np.ndarray
    labels: np.ndarray

    @property
    def n_rows(self) -> int:
        return len(self.labels)

    def to_csv(self, path):
        with open(path, "w") as f:
            f.write("f1,f2,f3,f4,f5,label\n")
            for row, lab in zip(self.features, self.labels):
                f.write(",".join(repr(float(v)) for v in row)
                        + f",{int(lab)}\n")


def build_ising_design(dataset: ExperimentDataset) -> IsingDesign:
    """Assemble the pooled design matrix from all triplets."""
    blocks, labels = [], []
    for t in dataset.triplets:
        n = t.graph.num_nodes
        validate_spins(t.y, n)
        z = np.asarray(t.z, dtype=np.float64)
        y = np.asarray(t.y, dtype=np.float64)
        in_a = 1.0 - z
        in_b = z
        s_a = neighbor_weight_sums(t.graph, y * in_a)
        s_b = neighbor_weight_sums(t.graph, y * in_b)
        feats = np.column_stack([
            in_a,
            in_b,
            in_a * s_a,
            in_b * s_b,
            in_a * s_b + in_b * s_a,
        ])
        blocks.append(feats)
        labels.append((y + 1.0) / 2.0)
    return IsingDesign(features=np.vstack(blocks),
                       labels=np.concatenate(labels))


@dataclass
class FitOptions:
    tolerance: float = 1e-8
    max_iterations: int = 100
    ridge: float = 1e-6


@dataclass
class FitResult:
    """Outcome of a pseudo-likelihood fit."""

    params: object
    converged: bool
    iterations: int
    final_gradient_norm: float
    ridge_used: bool = False
    sigma_hat: float | None = field(default=None)


def fit_logistic_irls(design: IsingDesign, tolerance: float = 1e-8,
                      max_iterations: int = 100,
                      ridge: float = 1e-6) -> FitResult:
    """No-intercept logistic regression by Newton iteration.

    Converged means the score's max-norm dropped to `tolerance`.  A singular
    or non-finite Newton system falls back to damping the Hessian diagonal
    with `ridge`; damping changes the path, not the fixed point, so the
    returned estimate still satisfies the first-order conditions.  Returned
    coefficients are halved into IsingParams.
    """
    x = design.features
    lab = design.labels
    if len(lab) < x.shape[1]:
        raise ValidationError(
            f"need at least {x.shape[1]} rows to fit, got {len(lab)}")
    w = np.zeros(x.shape[1])
    ridge_used = False
    converged = False
    gnorm = np.inf
    iterations = 0
    for _ in range(max_iterations):
        mu = logistic(x @ w)
        grad = x.T @ (lab - mu)
        gnorm = float(np.abs(grad).max())
        if gnorm <= tolerance:
            converged = True
            break
        wdiag = mu * (1.0 - mu)
        hess = x.T @ (x * wdiag[:, None])
        delta = None
        try:
            delta = np.linalg.solve(hess, grad)
        except np.linalg.LinAlgError:
            pass
        if delta is None or not np.all(np.isfinite(delta)):
            ridge_used = True
            damped = hess + ridge * np.eye(x.shape[1])
            delta = np.linalg.solve(damped, grad)
        w = w + delta
        iterations += 1
    else:
        mu = logistic(x @ w)
        gnorm = float(np.abs(x.T @ (lab - mu)).max())
        converged = gnorm <= tolerance
    params = IsingParams(*(w / 2.0))
    return FitResult(params=params, converged=converged,
                     iterations=iterations, final_gradient_norm=gnorm,
                     ridge_used=ridge_used)


def fit_ising_mple(dataset: ExperimentDataset,
                   options: FitOptions | None = None) -> FitResult:
    """Build the pooled design and run the logistic fit."""
    opts = options or FitOptions()
    design = build_ising_design(dataset)
    return fit_logistic_irls(design, tolerance=opts.tolerance,
                             max_iterations=opts.max_iterations,
                             ridge=opts.ridge)


def _ggm_design(dataset: ExperimentDataset):
    blocks, targets = [], []
    for t in dataset.triplets:
        n = t.graph.num_nodes
        z = np.asarray(t.z, dtype=np.float64)
        y = np.asarray(t.y, dtype=np.float64)
        deg = np.diff(t.graph.indptr).astype(np.float64)
        nbr_treated = neighbor_weight_sums(t.graph, z)
        nbr_sum = neighbor_weight_sums(t.graph, y)
        nbr_mean = np.divide(nbr_sum, deg, out=np.zeros(n), where=deg > 0)
        blocks.append(np.column_stack([np.ones(n), z, nbr_treated, nbr_mean]))
        targets.append(y)
    return np.vstack(blocks), np.concatenate(targets)


def fit_ggm_ols(dataset: ExperimentDataset) -> FitResult:
    """Least-squares fit of the Gaussian model's conditional mean."""
    x, y = _ggm_design(dataset)
    ncols = x.shape[1]
    coef, _, rank, _ = np.linalg.lstsq(x, y, rcond=None)
    if rank < ncols:
        # Identify which columns beyond the independent set cause the
        # deficiency via pivoted QR.
        from scipy.linalg import qr
        _, r, piv = qr(x, mode="economic", pivoting=True)
        bad = sorted(GGM_COLUMNS[j] for j in piv[rank:])
        raise ValidationError(
            f"design is rank-deficient (rank {rank} < {ncols}); "
            f"collinear columns: {', '.join(bad)}")
    resid = y - x @ coef
    dof = max(len(y) - ncols, 1)
    sigma_hat = float(np.sqrt(resid @ resid / dof))
    grad_norm = float(np.abs(x.T @ resid).max())
    params = GgmParams(alpha0=float(coef[0]),
                       alpha1=float(coef[0] + coef[1]),
                       beta=float(coef[2]),
                       gamma=float(coef[3]),
                       sigma=max(sigma_hat, np.finfo(np.float64).tiny))
    return FitResult(params=params, converged=True, iterations=0,
                     final_gradient_norm=grad_norm, sigma_hat=sigma_hat)


def is_spin_dataset(dataset: ExperimentDataset) -> bool:
    """True when every response vector is integer -1/+1 spins."""
    for t in dataset.triplets:
        y = np.asarray(t.y)
        if not np.issubdtype(y.dtype, np.integer):
            return False
        if not np.all((y == 1) | (y == -1)):
            return False
    return True
