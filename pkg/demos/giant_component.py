"""Connectivity of the fireproof forest and (near-)giant components.

Supercritical fires (alpha > 1/2) leave a single tree-component holding
almost everything: two random vertices are asymptotically connected and the
largest component carries a fraction of n approaching 1.  At criticality no
giant survives, yet components of polynomial size n^(1-eps) persist.
"""

import numpy as np

from treefire.experiments import ExperimentConfig, run_trials

SEED = 4
TRIALS = 1500


def connect_probability(n, alpha):
    cfg = ExperimentConfig(kind="connect", n_list=(n,), trials=TRIALS, seed=SEED, alpha=alpha)
    rows = run_trials(cfg)[n]
    return float(np.mean([r["connected"] for r in rows]))


def giant_stats(n, alpha):
    cfg = ExperimentConfig(kind="giant", n_list=(n,), trials=TRIALS, seed=SEED, alpha=alpha)
    rows = run_trials(cfg)[n]
    frac = float(np.mean([r["largest_fraction"] for r in rows]))
    near = float(np.mean([r["exceeds_n06"] for r in rows]))
    half = float(np.mean([r["exceeds_half"] for r in rows]))
    return frac, near, half


def main():
    print(f"P(two uniform vertices connected in the fireproof forest), {TRIALS} trials")
    print(f"{'n':>6} {'alpha=0.75':>12} {'alpha=0.5':>12}")
    for n in (100, 1000, 10_000):
        print(f"{n:>6} {connect_probability(n, 0.75):>12.4f} {connect_probability(n, 0.5):>12.4f}")
    print("rising toward 1 above criticality, falling toward 0 at it.")
    print()

    print("largest fireproof component")
    print(f"{'n':>6} {'alpha':>6} {'mean f1/n':>10} {'P(f1>=n^0.6)':>13} {'P(f1>=n/2)':>11}")
    for alpha in (0.75, 0.5):
        for n in (100, 10_000):
            frac, near, half = giant_stats(n, alpha)
            print(f"{n:>6} {alpha:>6.2f} {frac:>10.4f} {near:>13.4f} {half:>11.4f}")
    print("at criticality the macroscopic component dies out while the")
    print("polynomial-size one becomes the rule.")


if __name__ == "__main__":
    main()
