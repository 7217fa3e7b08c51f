"""Spinal decomposition and uniform-edge fragmentation.

Two structural facts drive everything else here: the spine between two
random vertices has an explicit length law with Borel(1)-sized bushes
hanging off it, and deleting k-1 uniform edges partitions the tree into
parts distributed as k Borel(1) variables conditioned to sum to n.
"""

import numpy as np

import treefire.cayley as cy
import treefire.distributions as dist
import treefire.stats as stats

SEED = 3
N = 40
TRIALS = 30_000


def main():
    rng = np.random.default_rng(SEED)

    lam = np.empty(TRIALS, dtype=np.int64)
    for i in range(TRIALS):
        t = cy.sample_uniform_tree(N, rng)
        u, v = rng.integers(1, N + 1, size=2)
        lam[i] = cy.tree_distance(t, int(u), int(v))
    counts = np.bincount(lam, minlength=N)[:N]
    gof = stats.chi_square_gof(counts, dist.spine_pmf(N, np.arange(N)))
    print(f"spine length at n={N}: chi2={gof.statistic:.2f} thr={gof.threshold:.2f} "
          f"pass={gof.passed}")
    print(f"  mean={lam.mean():.3f}, most likely lengths "
          f"{np.argsort(counts)[-3:][::-1].tolist()}")
    print()

    k = 4
    first = np.empty(TRIALS, dtype=np.int64)
    for i in range(TRIALS):
        first[i] = cy.conditioned_borel_sample(k, N, rng)[0]
    marginal = dist.conditioned_borel_marginal_pmf(k, N)
    counts = np.bincount(first - 1, minlength=marginal.size)[: marginal.size]
    gof = stats.chi_square_gof(counts, marginal)
    print(f"fragment sizes, {k} parts of n={N}: one-coordinate marginal "
          f"chi2={gof.statistic:.2f} thr={gof.threshold:.2f} pass={gof.passed}")

    one = cy.remove_uniform_edges(cy.sample_uniform_tree(N, rng), k - 1, rng)
    print(f"  sample partition sizes: {sorted(one.sizes.tolist(), reverse=True)}")


if __name__ == "__main__":
    main()
