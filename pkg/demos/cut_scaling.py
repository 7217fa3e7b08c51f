"""Scaling limit of the vertex-isolation cut count.

Isolating k uniformly sampled vertices of a uniform n-tree by repeated
uniform edge cuts takes X(n, k) cuts; X(n, k)/sqrt(n) converges to the chi
law with 2k degrees of freedom (Rayleigh when k = 1).  The KS distance to
the limit shrinks as n grows.
"""

import numpy as np
from scipy.special import gammaln

import treefire.distributions as dist
import treefire.stats as stats
from treefire.experiments import ExperimentConfig, run_trials

SEED = 2
TRIALS = 3000


def scaled_cut_counts(n, k):
    cfg = ExperimentConfig(kind="cuts", n_list=(n,), trials=TRIALS, seed=SEED, k=k)
    return np.array([row["cuts_scaled"] for row in run_trials(cfg)[n]])


def main():
    for k in (1, 2, 3):
        name = "Rayleigh" if k == 1 else f"chi({2 * k})"
        print(f"k={k}: X(n,{k})/sqrt(n) against {name}")
        for n in (100, 1000, 10_000):
            scaled = scaled_cut_counts(n, k)
            gof = stats.ks_statistic(scaled, lambda x, k=k: dist.chi_cdf(k, x))
            limit_mean = float(np.sqrt(2) * np.exp(gammaln(k + 0.5) - gammaln(k)))
            print(
                f"  n={n:>6}: KS={gof.statistic:.4f}  mean={scaled.mean():.4f}"
                f"  (limit mean {limit_mean:.4f})"
            )
        print()


if __name__ == "__main__":
    main()
