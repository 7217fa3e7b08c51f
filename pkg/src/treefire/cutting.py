"""Random-cut isolation of sampled target vertices.

The production path scans one uniform permutation of all edges and counts an
edge as a cut iff it still lies in a retained subtree at its turn; a
subsequence of a uniform permutation is uniformly ordered, so this realizes
"remove a uniform edge of the current forest" exactly while keeping edge
selection O(1).  Exact small-n oracles for both the scan form and the literal
sequential process live alongside so the equivalence is testable.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations, product

import numpy as np

from ._kernels import isolate_scan, label_components
from .cayley import LabeledTree, all_labeled_trees

__all__ = [
    "CutResult",
    "isolate",
    "isolate_with_order",
    "first_cut_split",
    "scan_cut_distribution",
    "sequential_cut_distribution",
    "exhaustive_isolation_mean",
    "exhaustive_isolation_mean_fraction",
]


@dataclass(frozen=True)
class CutResult:
    """Total cut count plus the component sizes of the very first cut."""

    cuts: int
    first_split: tuple[int, int] | None

    def __post_init__(self):
        if self.first_split is not None and self.first_split[0] < self.first_split[1]:
            raise ValueError("first_split must be ordered (larger, smaller)")


def isolate(tree: LabeledTree, targets, rng: np.random.Generator) -> CutResult:
    """Run the isolation algorithm to termination on freshly drawn randomness.

    ``targets`` is a nonempty sequence of 1-based vertices, duplicates
    allowed (sampling is with replacement upstream).
    """
    perm = rng.permutation(tree.n_edges)
    return isolate_with_order(tree, targets, perm)


def isolate_with_order(tree: LabeledTree, targets, perm) -> CutResult:
    """Deterministic isolation given an explicit edge processing order.

    Sharing one permutation across nested target sets is the coupling under
    which the cut count is monotone in the target set.
    """
    targets = np.asarray(targets, dtype=np.int64).reshape(-1)
    if targets.size == 0:
        raise ValueError("need at least one target vertex")
    if targets.min() < 1 or targets.max() > tree.n:
        raise ValueError("target out of range 1..n")
    if tree.n == 1:
        return CutResult(cuts=0, first_split=None)
    perm = np.ascontiguousarray(np.asarray(perm, dtype=np.int64))
    if perm.size != tree.n_edges:
        raise ValueError("perm must order all n-1 edges")
    eu, ev, indptr, adj_edge, adj_nbr = tree._csr
    tcount = np.bincount(targets - 1, minlength=tree.n).astype(np.int64)
    cuts, first_small = isolate_scan(
        tree.n, indptr, adj_edge, adj_nbr, eu, ev, perm, tcount
    )
    first = (tree.n - first_small, first_small)
    if first[0] < first[1]:
        first = (first[1], first[0])
    return CutResult(cuts=int(cuts), first_split=first)


def first_cut_split(tree: LabeledTree, rng: np.random.Generator) -> tuple[int, int]:
    """Component sizes (larger, smaller) after deleting one uniform edge."""
    if tree.n < 2:
        raise ValueError("need n >= 2")
    e = int(rng.integers(0, tree.n_edges))
    eu, ev, indptr, adj_edge, adj_nbr = tree._csr
    edge_ok = np.ones(tree.n_edges, dtype=np.bool_)
    edge_ok[e] = False
    vertex_ok = np.ones(tree.n, dtype=np.bool_)
    labels, _ = label_components(tree.n, indptr, adj_edge, adj_nbr, edge_ok, vertex_ok)
    side = int(np.count_nonzero(labels == labels[eu[e]]))
    return (max(side, tree.n - side), min(side, tree.n - side))


def scan_cut_distribution(tree: LabeledTree, targets) -> dict[int, Fraction]:
    """Exact law of the cut count under the permutation-scan implementation,
    obtained by enumerating every edge order (small trees only)."""
    m = tree.n_edges
    if m > 6:
        raise ValueError("edge-order enumeration limited to n <= 7")
    out: dict[int, Fraction] = {}
    weight = Fraction(1, _factorial(m))
    for perm in permutations(range(m)):
        res = isolate_with_order(tree, targets, np.array(perm, dtype=np.int64))
        out[res.cuts] = out.get(res.cuts, Fraction(0)) + weight
    return out


def sequential_cut_distribution(tree: LabeledTree, targets) -> dict[int, Fraction]:
    """Exact law of the cut count under the literal sequential process:
    repeatedly delete a uniform edge of the current forest and discard the
    targetless side.  Independent of the permutation-scan reformulation."""
    targets = frozenset(int(t) for t in np.asarray(targets).reshape(-1))
    if not targets:
        raise ValueError("need at least one target vertex")
    edges = [(int(a), int(b)) for a, b in tree.edges]
    cache: dict[frozenset, dict[int, Fraction]] = {}

    def component(part: frozenset, removed: tuple[int, int], start: int) -> frozenset:
        adj: dict[int, list[int]] = {}
        for a, b in edges:
            if a in part and b in part and (a, b) != removed:
                adj.setdefault(a, []).append(b)
                adj.setdefault(b, []).append(a)
        seen = {start}
        stack = [start]
        while stack:
            v = stack.pop()
            for w in adj.get(v, ()):
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return frozenset(seen)

    def rec(parts: frozenset) -> dict[int, Fraction]:
        if parts in cache:
            return cache[parts]
        active = [
            (a, b)
            for a, b in edges
            for part in parts
            if a in part and b in part
        ]
        if not active:
            return {0: Fraction(1)}
        dist: dict[int, Fraction] = {}
        step = Fraction(1, len(active))
        for a, b in active:
            part = next(p for p in parts if a in p)
            side_a = component(part, (a, b), a)
            side_b = part - side_a
            new_parts = set(parts) - {part}
            if side_a & targets:
                new_parts.add(side_a)
            if side_b & targets:
                new_parts.add(side_b)
            sub = rec(frozenset(new_parts))
            for x, pr in sub.items():
                dist[x + 1] = dist.get(x + 1, Fraction(0)) + step * pr
        cache[parts] = dist
        return dist

    return rec(frozenset([frozenset(range(1, tree.n + 1))]))


def exhaustive_isolation_mean_fraction(n: int, k: int) -> Fraction:
    """Exact E[X(n, k)] over all trees, edge orders, and target k-tuples."""
    if not 2 <= n <= 5:
        raise ValueError("exhaustive oracle supported for 2 <= n <= 5 only")
    if not 1 <= k <= n:
        raise ValueError("need 1 <= k <= n")
    total = Fraction(0)
    count = 0
    for tree in all_labeled_trees(n):
        for targets in product(range(1, n + 1), repeat=k):
            dist = sequential_cut_distribution(tree, targets)
            total += sum(Fraction(x) * p for x, p in dist.items())
            count += 1
    return total / count


def exhaustive_isolation_mean(n: int, k: int) -> float:
    """Exact E[X(n, k)] as a float; see the Fraction-valued variant."""
    return float(exhaustive_isolation_mean_fraction(n, k))


def _factorial(m: int) -> int:
    out = 1
    for i in range(2, m + 1):
        out *= i
    return out
