"""Phase transition of the fireproof-vertex density.

Sweeps the firing-rate exponent alpha across the critical value 1/2 and
watches the mean density of fireproof vertices: it drifts to 1 above the
transition, to 0 below it, and settles on a nondegenerate law exactly at
alpha = 1/2, where the empirical moments match E[exp(-chi(2k))].
"""

import numpy as np

import treefire.distributions as dist
from treefire.experiments import ExperimentConfig, run_trials

SEED = 1
SIZES = (100, 1000, 10_000)
ALPHAS = (0.3, 0.5, 0.8)
TRIALS = 1500


def density_samples(n, alpha):
    cfg = ExperimentConfig(kind="density", n_list=(n,), trials=TRIALS, seed=SEED, alpha=alpha)
    return np.array([row["density"] for row in run_trials(cfg)[n]])


def main():
    print(f"mean fireproof density, {TRIALS} trials per cell")
    print(f"{'alpha':>6} " + " ".join(f"{f'n={n}':>12}" for n in SIZES))
    at_critical = {}
    for alpha in ALPHAS:
        row = []
        for n in SIZES:
            dens = density_samples(n, alpha)
            row.append(f"{dens.mean():>12.4f}")
            if alpha == 0.5:
                at_critical[n] = dens
        print(f"{alpha:>6.2f} " + " ".join(row))
    print()
    print("above 1/2 the density is heading to 1, below to 0.")
    print()

    dens = at_critical[SIZES[-1]]
    print(f"critical moments at n={SIZES[-1]} vs the limit law:")
    for k in range(1, 5):
        emp = float((dens**k).mean())
        lim = dist.dinf_moment(k)
        print(f"  E[D^{k}]: empirical {emp:.4f}   limit E[exp(-chi({2 * k}))] {lim:.4f}")


if __name__ == "__main__":
    main()
