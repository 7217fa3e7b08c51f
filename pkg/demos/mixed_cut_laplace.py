"""Laplace-transform ratio of the cut count at a Borel-mixed size.

Draw a Borel(1) size beta, isolate one vertex of a uniform beta-tree, and
look at E[1 - exp(-q X(beta))] / (q ln(1/q)): the ratio stays pinned in a
band as q -> 0.  Borel(1) has infinite mean, so the sampler truncates its
table and the truncation mass is disclosed next to the estimates.
"""

import math

import numpy as np

from treefire.experiments import ExperimentConfig, run_trials, summarize_trials

SEED = 5
TRIALS = 20_000
SUPPORT_MAX = 500_000


def main():
    cfg = ExperimentConfig(
        kind="lemma4", trials=TRIALS, seed=SEED, borel_support_max=SUPPORT_MAX
    )
    rows = run_trials(cfg)
    xs = np.array([r["cuts"] for r in rows[0]], dtype=float)
    betas = np.array([r["beta"] for r in rows[0]], dtype=float)
    print(f"{TRIALS} draws: beta mean={betas.mean():.1f}, max={betas.max():.0f}; "
          f"X mean={xs.mean():.2f}")
    print(f"{'q':>10} {'ratio':>8} {'stderr':>8}")
    for q in cfg.q_grid:
        vals = -np.expm1(-q * xs)
        denom = q * math.log(1 / q)
        se = vals.std(ddof=1) / math.sqrt(vals.size) / denom
        print(f"{q:>10.4g} {vals.mean() / denom:>8.3f} {se:>8.3f}")
    for line in summarize_trials(cfg, rows)[0]:
        print(line)


if __name__ == "__main__":
    main()
