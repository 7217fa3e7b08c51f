"""Uniform labeled trees and their structural decompositions.

Vertices are labeled 1..n in the public API.  Trees are stored as flat edge
arrays plus a CSR adjacency index, which keeps traversals cache-friendly for
the large-n Monte Carlo sweeps.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from pathlib import Path

import numpy as np

from ._kernels import (
    bfs_parents,
    build_csr,
    label_components,
    prufer_decode_kernel,
)

__all__ = [
    "LabeledTree",
    "SpinalDecomposition",
    "Fragmentation",
    "prufer_decode",
    "prufer_encode",
    "sample_uniform_tree",
    "spinal_decompose",
    "tree_distance",
    "remove_uniform_edges",
    "conditioned_borel_sample",
    "dump_tree",
    "load_tree",
    "all_labeled_trees",
]


@dataclass(frozen=True)
class LabeledTree:
    """A tree on vertices 1..n held as an (n-1, 2) array of 1-based edges."""

    n: int
    edges: np.ndarray

    def __post_init__(self):
        edges = np.ascontiguousarray(np.asarray(self.edges, dtype=np.int64).reshape(-1, 2))
        object.__setattr__(self, "edges", edges)
        if self.n < 1:
            raise ValueError("tree needs at least one vertex")
        if edges.shape[0] != self.n - 1:
            raise ValueError(f"expected {self.n - 1} edges, got {edges.shape[0]}")
        if edges.size and (edges.min() < 1 or edges.max() > self.n):
            raise ValueError("edge endpoint out of range 1..n")

    @cached_property
    def _csr(self):
        eu = self.edges[:, 0] - 1
        ev = self.edges[:, 1] - 1
        return (np.ascontiguousarray(eu), np.ascontiguousarray(ev)) + tuple(
            build_csr(self.n, np.ascontiguousarray(eu), np.ascontiguousarray(ev))
        )

    @property
    def n_edges(self) -> int:
        return self.n - 1

    @property
    def adjacency(self):
        """(indptr, incident edge ids, neighbor vertices), all 0-based."""
        _, _, indptr, adj_edge, adj_nbr = self._csr
        return indptr, adj_edge, adj_nbr

    def incident_edges(self, v: int) -> np.ndarray:
        """Edge ids incident to 1-based vertex v."""
        indptr, adj_edge, _ = self.adjacency
        return adj_edge[indptr[v - 1]:indptr[v]]

    def neighbors(self, v: int) -> np.ndarray:
        """1-based neighbors of 1-based vertex v."""
        indptr, _, adj_nbr = self.adjacency
        return adj_nbr[indptr[v - 1]:indptr[v]] + 1

    def validate(self) -> None:
        """Assert the spanning-tree invariants (connected + acyclic)."""
        if self.n == 1:
            return
        eu, ev, indptr, adj_edge, adj_nbr = self._csr
        _, _, dist = bfs_parents(self.n, indptr, adj_edge, adj_nbr, 0)
        if int((dist >= 0).sum()) != self.n:
            raise AssertionError("tree is not connected")
        # connected with n-1 edges implies acyclic


@dataclass(frozen=True)
class SpinalDecomposition:
    """Spine from u to u' plus the bushes hanging off each spine vertex.

    ``bushes[i]`` is the 1-based vertex set of the bush rooted at
    ``spine[i]``; the bushes partition 1..n.
    """

    spine: np.ndarray
    bushes: list[np.ndarray]

    @property
    def length(self) -> int:
        """Number of spine edges (0 when u = u')."""
        return len(self.spine) - 1

    @property
    def bush_sizes(self) -> np.ndarray:
        return np.array([b.size for b in self.bushes], dtype=np.int64)


@dataclass(frozen=True)
class Fragmentation:
    """Partition of 1..n produced by deleting a set of edges.

    Part order is uniformly randomized so that the coordinates of ``sizes``
    are exchangeable.
    """

    removed_edge_ids: np.ndarray
    parts: list[np.ndarray]
    sizes: np.ndarray


def prufer_decode(seq) -> LabeledTree:
    """Tree on n = len(seq) + 2 vertices with the given Pruefer sequence.

    ``seq`` holds 1-based labels; the empty sequence gives the single edge
    {1, 2}.
    """
    seq = np.asarray(seq, dtype=np.int64).reshape(-1)
    n = seq.size + 2
    if seq.size and (seq.min() < 1 or seq.max() > n):
        raise ValueError("sequence labels must lie in 1..n")
    eu, ev = prufer_decode_kernel(n, np.ascontiguousarray(seq - 1))
    return LabeledTree(n, np.column_stack((eu + 1, ev + 1)))


def prufer_encode(tree: LabeledTree) -> np.ndarray:
    """Pruefer sequence of a tree (1-based), by repeated smallest-leaf removal."""
    n = tree.n
    if n < 2:
        raise ValueError("encoding needs n >= 2")
    adj = {v: set() for v in range(1, n + 1)}
    for a, b in tree.edges:
        adj[int(a)].add(int(b))
        adj[int(b)].add(int(a))
    leaves = [v for v in range(1, n + 1) if len(adj[v]) == 1]
    heapq.heapify(leaves)
    seq = np.empty(n - 2, dtype=np.int64)
    for i in range(n - 2):
        leaf = heapq.heappop(leaves)
        (nbr,) = adj[leaf]
        seq[i] = nbr
        adj[nbr].discard(leaf)
        adj[leaf].clear()
        if len(adj[nbr]) == 1:
            heapq.heappush(leaves, nbr)
    return seq


def sample_uniform_tree(n: int, rng: np.random.Generator) -> LabeledTree:
    """Uniform draw from the n^(n-2) labeled trees on 1..n."""
    if n < 1:
        raise ValueError("n must be positive")
    if n == 1:
        return LabeledTree(1, np.empty((0, 2), dtype=np.int64))
    if n == 2:
        return LabeledTree(2, np.array([[1, 2]], dtype=np.int64))
    seq = rng.integers(0, n, size=n - 2)
    eu, ev = prufer_decode_kernel(n, np.ascontiguousarray(seq))
    return LabeledTree(n, np.column_stack((eu + 1, ev + 1)))


def tree_distance(tree: LabeledTree, u: int, v: int) -> int:
    """Graph distance between 1-based vertices u and v."""
    _check_vertex(tree, u)
    _check_vertex(tree, v)
    if u == v:
        return 0
    indptr, adj_edge, adj_nbr = tree.adjacency
    _, _, dist = bfs_parents(tree.n, indptr, adj_edge, adj_nbr, u - 1)
    return int(dist[v - 1])


def spinal_decompose(tree: LabeledTree, u: int, u2: int) -> SpinalDecomposition:
    """Split the tree along the u -> u2 path into spine plus bushes.

    u = u2 is allowed and gives a length-0 spine whose single bush is the
    whole vertex set.
    """
    _check_vertex(tree, u)
    _check_vertex(tree, u2)
    n = tree.n
    if n == 1 or u == u2:
        return SpinalDecomposition(
            spine=np.array([u], dtype=np.int64),
            bushes=[np.arange(1, n + 1, dtype=np.int64)],
        )
    indptr, adj_edge, adj_nbr = tree.adjacency
    parent, parent_edge, dist = bfs_parents(n, indptr, adj_edge, adj_nbr, u - 1)
    lam = int(dist[u2 - 1])
    spine0 = np.empty(lam + 1, dtype=np.int64)
    spine_edges = np.empty(lam, dtype=np.int64)
    v = u2 - 1
    for i in range(lam, 0, -1):
        spine0[i] = v
        spine_edges[i - 1] = parent_edge[v]
        v = parent[v]
    spine0[0] = u - 1
    edge_ok = np.ones(tree.n_edges, dtype=np.bool_)
    edge_ok[spine_edges] = False
    vertex_ok = np.ones(n, dtype=np.bool_)
    labels, _ = label_components(n, indptr, adj_edge, adj_nbr, edge_ok, vertex_ok)
    order = np.argsort(labels, kind="stable")
    sorted_labels = labels[order]
    bushes = []
    for sv in spine0:
        lab = labels[sv]
        lo = np.searchsorted(sorted_labels, lab, side="left")
        hi = np.searchsorted(sorted_labels, lab, side="right")
        bushes.append(np.sort(order[lo:hi]) + 1)
    return SpinalDecomposition(spine=spine0 + 1, bushes=bushes)


def remove_uniform_edges(tree: LabeledTree, j: int, rng: np.random.Generator) -> Fragmentation:
    """Delete j distinct uniform edges, yielding j+1 exchangeably-labeled parts."""
    if j < 0 or j > tree.n_edges:
        raise ValueError(f"j must lie in 0..{tree.n_edges}")
    removed = np.sort(rng.choice(tree.n_edges, size=j, replace=False)) if j else np.empty(0, dtype=np.int64)
    labels, k = _fragment_labels(tree, removed)
    relabel = rng.permutation(k)
    labels = relabel[labels]
    sizes = np.bincount(labels, minlength=k)
    order = np.argsort(labels, kind="stable")
    sorted_labels = labels[order]
    bounds = np.searchsorted(sorted_labels, np.arange(k + 1))
    parts = [np.sort(order[bounds[i]:bounds[i + 1]]) + 1 for i in range(k)]
    return Fragmentation(removed_edge_ids=removed, parts=parts, sizes=sizes)


def conditioned_borel_sample(k: int, n: int, rng: np.random.Generator) -> np.ndarray:
    """Sizes of the k parts left by k-1 uniform edge removals on a uniform tree.

    This realizes k independent Borel(1) variables conditioned to sum to n,
    exactly and without rejection; the coordinates are exchangeable.
    """
    if k < 1 or k > n:
        raise ValueError("need 1 <= k <= n")
    tree = sample_uniform_tree(n, rng)
    if k == 1:
        return np.array([n], dtype=np.int64)
    removed = rng.choice(tree.n_edges, size=k - 1, replace=False)
    labels, k_found = _fragment_labels(tree, removed)
    sizes = np.bincount(labels, minlength=k_found)
    return sizes[rng.permutation(k_found)]


def _fragment_labels(tree: LabeledTree, removed_edge_ids) -> tuple[np.ndarray, int]:
    indptr, adj_edge, adj_nbr = tree.adjacency
    edge_ok = np.ones(tree.n_edges, dtype=np.bool_)
    edge_ok[np.asarray(removed_edge_ids, dtype=np.int64)] = False
    vertex_ok = np.ones(tree.n, dtype=np.bool_)
    labels, k = label_components(tree.n, indptr, adj_edge, adj_nbr, edge_ok, vertex_ok)
    return labels, k


def dump_tree(tree: LabeledTree, path) -> None:
    """Write the debug dump format: one line ``n``, then n-1 lines ``u v``."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"{tree.n}\n")
        for a, b in tree.edges:
            fh.write(f"{a} {b}\n")


def load_tree(path) -> LabeledTree:
    """Read a tree written by :func:`dump_tree`."""
    text = Path(path).read_text(encoding="utf-8").split()
    n = int(text[0])
    vals = np.array([int(t) for t in text[1:]], dtype=np.int64)
    if vals.size != 2 * (n - 1):
        raise ValueError("malformed tree dump")
    return LabeledTree(n, vals.reshape(-1, 2))


def all_labeled_trees(n: int) -> list[LabeledTree]:
    """Every labeled tree on 1..n, enumerated by brute force.

    Scans all (n-1)-subsets of vertex pairs and keeps the spanning ones, so
    it is independent of the Pruefer bijection; refused for n > 7.
    """
    if n < 1 or n > 7:
        raise ValueError("exhaustive enumeration supported for 1 <= n <= 7")
    if n == 1:
        return [LabeledTree(1, np.empty((0, 2), dtype=np.int64))]
    pairs = list(combinations(range(1, n + 1), 2))
    trees = []
    for subset in combinations(pairs, n - 1):
        root = list(range(n + 1))

        def find(v):
            while root[v] != v:
                root[v] = root[root[v]]
                v = root[v]
            return v

        ok = True
        for a, b in subset:
            ra, rb = find(a), find(b)
            if ra == rb:
                ok = False
                break
            root[ra] = rb
        if ok:
            trees.append(LabeledTree(n, np.array(subset, dtype=np.int64)))
    return trees


def _check_vertex(tree: LabeledTree, v: int) -> None:
    if not 1 <= v <= tree.n:
        raise ValueError(f"vertex {v} out of range 1..{tree.n}")
