"""Exact enumeration oracles against closed forms and Monte Carlo.

At n <= 4 everything is small enough to enumerate outright: all labeled
trees, all edge orders, all coin patterns, all targets.  This script lines
up three independent routes for the same quantities: brute force, closed
form, and seeded simulation.  It also hammers the rate-coupling invariant:
with shared randomness, whatever burns at a low firing rate burns at any
higher rate.
"""

import numpy as np

import treefire.cayley as cy
import treefire.cutting as cut
import treefire.distributions as dist
import treefire.fire as fire

SEED = 6


def main():
    rng = np.random.default_rng(SEED)

    print("isolation cost E[X(n, k)], exact enumeration vs Monte Carlo (20k trials)")
    for n, k in ((3, 1), (4, 1), (4, 2)):
        exact = cut.exhaustive_isolation_mean(n, k)
        xs = []
        for _ in range(20_000):
            t = cy.sample_uniform_tree(n, rng)
            xs.append(cut.isolate(t, rng.integers(1, n + 1, size=k), rng).cuts)
        print(f"  n={n} k={k}: exact={exact:.5f}  mc={np.mean(xs):.5f}")
    print()

    print("first-cut larger side at n=4: enumeration vs closed form")
    tally = {2: 0, 3: 0}
    trees = cy.all_labeled_trees(4)
    for t in trees:
        for e in range(3):
            keep = np.ones(3, dtype=bool)
            keep[e] = False
            members = {1, 2, 3, 4}
            a = int(t.edges[e, 0])
            side = {a}
            grew = True
            while grew:
                grew = False
                for x, y in t.edges[keep]:
                    if int(x) in side and int(y) not in side:
                        side.add(int(y))
                        grew = True
                    elif int(y) in side and int(x) not in side:
                        side.add(int(x))
                        grew = True
            tally[max(len(side), 4 - len(side))] += 1
    total = len(trees) * 3
    for m in (2, 3):
        print(f"  P(larger={m}): enumerated {tally[m] / total:.4f}  "
              f"formula {dist.first_cut_pmf(4, m):.4f}")
    print()

    print("terminal fire law on the 3-path at rate 3^-1 (q = 1/4)")
    path3 = cy.LabeledTree(3, np.array([[1, 2], [2, 3]]))
    q = fire.FireConfig.from_alpha(3, 1.0).q
    for states, prob in sorted(fire.exact_outcome_distribution(path3, q).items()):
        names = {0: "inflammable", 1: "fireproof", 2: "burnt"}
        print(f"  edges ({names[states[0]]:>9}, {names[states[1]]:>9})  p={prob:.4f}")
    print(f"  exact E[density] = {fire.exact_density_mean(path3, q):.4f}")
    print()

    print("coupling invariant over 2000 shared-randomness rate pairs")
    bad = 0
    for _ in range(2000):
        n = int(rng.integers(2, 150))
        t = cy.sample_uniform_tree(n, rng)
        q1, q2 = np.sort(rng.random(2) * 0.9)
        lo, hi = fire.run_fire_coupled(t, float(q1), float(q2), rng)
        if np.any((lo.edge_states == 2) & (hi.edge_states != 2)):
            bad += 1
    print(f"  low-rate burnt set escaped the high-rate one {bad} times")


if __name__ == "__main__":
    main()
