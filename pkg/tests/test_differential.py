"""Differential tests: optimized kernels vs naive reference implementations.

The production scans use CSR arrays, lockstep BFS, and persistent visit
flags; the references below recompute everything from scratch with sets and
dicts.  Feeding both the same randomness on thousands of random instances
must produce identical outputs, not just matching distributions.
"""

import numpy as np

import treefire.cayley as cy
import treefire.cutting as cut
import treefire.fire as fire
from treefire.fire import _reference_fire


def reference_isolate_with_order(tree, targets, perm):
    """Set-based re-implementation of the permutation-scan isolation."""
    n = tree.n
    edges = [(int(a), int(b)) for a, b in tree.edges]
    alive = set(range(1, n + 1))
    uncut = set(range(len(edges)))
    target_set = {int(t) for t in targets}
    cuts = 0
    first_split = None

    def side(start, banned_edge):
        seen = {start}
        stack = [start]
        while stack:
            v = stack.pop()
            for e in uncut:
                if e == banned_edge:
                    continue
                a, b = edges[e]
                if a == v and b in alive and b not in seen:
                    seen.add(b)
                    stack.append(b)
                elif b == v and a in alive and a not in seen:
                    seen.add(a)
                    stack.append(a)
        return seen

    for e in perm:
        a, b = edges[int(e)]
        if a not in alive or b not in alive:
            continue
        cuts += 1
        uncut.discard(int(e))
        side_a = side(a, int(e))
        side_b = side(b, int(e))
        if cuts == 1:
            m = max(len(side_a), len(side_b))
            first_split = (m, n - m)
        if not side_a & target_set:
            alive -= side_a
        elif not side_b & target_set:
            alive -= side_b
    return cuts, first_split


def test_isolation_kernel_matches_reference():
    rng = np.random.default_rng(101)
    for _ in range(1500):
        n = int(rng.integers(2, 61))
        tree = cy.sample_uniform_tree(n, rng)
        k = int(rng.integers(1, 5))
        targets = rng.integers(1, n + 1, size=k)
        perm = rng.permutation(n - 1)
        got = cut.isolate_with_order(tree, targets, perm)
        want_cuts, want_split = reference_isolate_with_order(tree, targets, perm)
        assert got.cuts == want_cuts
        assert got.first_split == want_split


def test_fire_kernel_matches_reference():
    rng = np.random.default_rng(102)
    for _ in range(1500):
        n = int(rng.integers(2, 61))
        tree = cy.sample_uniform_tree(n, rng)
        q = float(rng.uniform(0.02, 0.9))
        perm = rng.permutation(n - 1)
        uvals = rng.random(n - 1)
        got = fire.run_fire_with_randomness(tree, q, perm, uvals)
        edges = [(int(a), int(b)) for a, b in tree.edges]
        want = _reference_fire(n, edges, [int(e) for e in perm], list(uvals < q))
        assert tuple(int(s) for s in got.edge_states) == want


def test_large_n_smoke():
    # exercises allocation and traversal paths at scale; values sanity-only
    rng = np.random.default_rng(103)
    n = 200_000
    tree = cy.sample_uniform_tree(n, rng)
    res = cut.isolate(tree, rng.integers(1, n + 1, size=2), rng)
    assert 1 <= res.cuts <= n - 1
    out = fire.run_fire(tree, fire.FireConfig.from_alpha(n, 0.5), rng)
    assert 0.0 <= out.density <= 1.0
    assert out.component_sizes.sum() == out.fireproof_vertex.sum()
    sd = cy.spinal_decompose(tree, 1, n)
    assert sd.bush_sizes.sum() == n
