"""Fire dynamics on a tree in the discrete permutation-and-coins form.

Edges are processed in a uniform random order; an unburnt edge fireproofs
with probability 1/(1+r) and otherwise ignites, burning its entire
inflammable cluster (fires are stopped by fireproof and previously burnt
edges).  Terminal states of this discrete chain match the continuous
exponential-clock dynamics, and sharing the permutation and uniforms across
two rates yields the monotone coupling.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import IntEnum
from functools import cached_property
from itertools import permutations, product

import numpy as np

from ._kernels import fire_scan, label_components
from .cayley import LabeledTree

__all__ = [
    "EdgeState",
    "FireConfig",
    "FireOutcome",
    "run_fire",
    "run_fire_with_randomness",
    "run_fire_coupled",
    "are_connected",
    "component_sizes",
    "exact_outcome_distribution",
    "exact_outcome_distribution_scan",
    "exact_density_mean",
]


class EdgeState(IntEnum):
    INFLAMMABLE = 0
    FIREPROOF = 1
    BURNT = 2


@dataclass(frozen=True)
class FireConfig:
    """Size plus the per-edge conditional fire probability q = r/(1+r).

    q is computed once, in full precision, from the rate parameterization
    (alpha for rate n^-alpha, or the constant a for rate a/sqrt(n)) and
    never rederived downstream, so trials are bit-reproducible.
    """

    n: int
    q: float
    alpha: float | None = None
    a: float | None = None

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be positive")
        if not 0.0 <= self.q < 1.0:
            raise ValueError("q must lie in [0, 1)")

    @classmethod
    def from_alpha(cls, n: int, alpha: float) -> "FireConfig":
        """Firing rate n^-alpha."""
        if alpha <= 0:
            raise ValueError("alpha must be positive")
        r = float(n) ** (-float(alpha))
        return cls(n=n, q=r / (1.0 + r), alpha=float(alpha))

    @classmethod
    def from_constant(cls, n: int, a: float) -> "FireConfig":
        """Critical-window firing rate a/sqrt(n)."""
        if a <= 0:
            raise ValueError("a must be positive")
        r = float(a) / math.sqrt(n)
        return cls(n=n, q=r / (1.0 + r), a=float(a))


@dataclass(frozen=True)
class FireOutcome:
    """Terminal state of one fire run.

    fireproof_vertex[v] is True iff every edge at v is fireproof; the
    fireproof forest consists of those vertices plus fireproof edges between
    them, labeled by component_labels (-1 for burnt vertices).
    """

    n: int
    edge_states: np.ndarray
    fireproof_vertex: np.ndarray
    component_labels: np.ndarray
    component_sizes: np.ndarray
    density: float
    largest_fraction: float
    ignition_edges: np.ndarray

    @cached_property
    def components(self) -> list[np.ndarray]:
        """Fireproof-forest components as 1-based vertex arrays, by label."""
        k = int(self.component_labels.max()) + 1 if self.n else 0
        out = [[] for _ in range(max(k, 0))]
        for v in range(self.n):
            lab = self.component_labels[v]
            if lab >= 0:
                out[lab].append(v + 1)
        return [np.array(c, dtype=np.int64) for c in out]

    @property
    def burnt_edges(self) -> np.ndarray:
        return np.flatnonzero(self.edge_states == EdgeState.BURNT)


def run_fire(tree: LabeledTree, cfg: FireConfig, rng: np.random.Generator) -> FireOutcome:
    """One complete run: draws the edge permutation and uniforms, then
    processes to the terminal state."""
    if cfg.n != tree.n:
        raise ValueError("config size does not match tree size")
    perm = rng.permutation(tree.n_edges)
    uvals = rng.random(tree.n_edges)
    return run_fire_with_randomness(tree, cfg.q, perm, uvals)


def run_fire_with_randomness(tree: LabeledTree, q: float, perm, uvals) -> FireOutcome:
    """Deterministic core: edge e ignites iff uvals[e] < q at its unskipped
    turn.  Exposed so couplings and exact enumerations can force outcomes."""
    if not 0.0 <= q < 1.0:
        raise ValueError("q must lie in [0, 1)")
    n = tree.n
    if n == 1:
        return _outcome_from_states(tree, np.empty(0, dtype=np.int8), np.empty(0, dtype=np.int64))
    perm = np.ascontiguousarray(np.asarray(perm, dtype=np.int64))
    uvals = np.ascontiguousarray(np.asarray(uvals, dtype=np.float64))
    if perm.size != tree.n_edges or uvals.size != tree.n_edges:
        raise ValueError("perm and uvals must cover all n-1 edges")
    eu, ev, indptr, adj_edge, adj_nbr = tree._csr
    states, ignitions = fire_scan(n, indptr, adj_edge, adj_nbr, eu, ev, perm, uvals, q)
    return _outcome_from_states(tree, states, ignitions)


def run_fire_coupled(
    tree: LabeledTree, q_low: float, q_high: float, rng: np.random.Generator
) -> tuple[FireOutcome, FireOutcome]:
    """Two runs sharing one permutation and uniforms, rates q_low <= q_high.

    Under this coupling the low-rate burnt edge set is contained in the
    high-rate one in every realization.
    """
    if q_low > q_high:
        raise ValueError("need q_low <= q_high")
    perm = rng.permutation(tree.n_edges)
    uvals = rng.random(tree.n_edges)
    low = run_fire_with_randomness(tree, q_low, perm, uvals)
    high = run_fire_with_randomness(tree, q_high, perm, uvals)
    return low, high


def are_connected(outcome: FireOutcome, u: int, v: int) -> bool:
    """True iff u and v are fireproof and in one fireproof-forest component.

    u = v counts as connected iff u is fireproof (a burnt vertex belongs to
    no component).
    """
    for w in (u, v):
        if not 1 <= w <= outcome.n:
            raise ValueError(f"vertex {w} out of range 1..{outcome.n}")
    if not (outcome.fireproof_vertex[u - 1] and outcome.fireproof_vertex[v - 1]):
        return False
    return outcome.component_labels[u - 1] == outcome.component_labels[v - 1]


def component_sizes(outcome: FireOutcome) -> np.ndarray:
    """Ranked (descending) fireproof-forest component sizes."""
    return outcome.component_sizes


def _outcome_from_states(tree: LabeledTree, states: np.ndarray, ignitions: np.ndarray) -> FireOutcome:
    n = tree.n
    if n == 1:
        labels = np.zeros(1, dtype=np.int64)
        return FireOutcome(
            n=1,
            edge_states=states,
            fireproof_vertex=np.ones(1, dtype=bool),
            component_labels=labels,
            component_sizes=np.array([1], dtype=np.int64),
            density=1.0,
            largest_fraction=1.0,
            ignition_edges=ignitions,
        )
    eu, ev, indptr, adj_edge, adj_nbr = tree._csr
    not_fireproof = states != np.int8(EdgeState.FIREPROOF)
    bad = np.zeros(n, dtype=bool)
    bad[eu[not_fireproof]] = True
    bad[ev[not_fireproof]] = True
    fireproof_vertex = ~bad
    edge_ok = states == np.int8(EdgeState.FIREPROOF)
    labels, n_comp = label_components(
        n, indptr, adj_edge, adj_nbr, edge_ok, np.ascontiguousarray(fireproof_vertex)
    )
    sizes = np.bincount(labels[labels >= 0], minlength=n_comp) if n_comp else np.empty(0, dtype=np.int64)
    sizes = np.sort(sizes)[::-1].astype(np.int64)
    n_fireproof = int(fireproof_vertex.sum())
    return FireOutcome(
        n=n,
        edge_states=states,
        fireproof_vertex=fireproof_vertex,
        component_labels=labels,
        component_sizes=sizes,
        density=n_fireproof / n,
        largest_fraction=(int(sizes[0]) / n) if sizes.size else 0.0,
        ignition_edges=ignitions,
    )


def _reference_fire(n: int, edges: list[tuple[int, int]], order, fire_flag) -> tuple[int, ...]:
    """Plain set-based simulation of the process description; the oracle the
    optimized scan is checked against.  Vertices 1-based, states per edge."""
    m = len(edges)
    state = [EdgeState.INFLAMMABLE] * m
    incident: dict[int, list[int]] = {v: [] for v in range(1, n + 1)}
    for i, (a, b) in enumerate(edges):
        incident[a].append(i)
        incident[b].append(i)
    for e in order:
        if state[e] is EdgeState.BURNT:
            continue
        if not fire_flag[e]:
            state[e] = EdgeState.FIREPROOF
            continue
        # burn the whole inflammable cluster reachable from e
        cluster = {e}
        frontier = [e]
        while frontier:
            f = frontier.pop()
            for v in edges[f]:
                for g in incident[v]:
                    if state[g] is EdgeState.INFLAMMABLE and g not in cluster:
                        cluster.add(g)
                        frontier.append(g)
        for g in cluster:
            state[g] = EdgeState.BURNT
    return tuple(int(s) for s in state)


def exact_outcome_distribution(tree: LabeledTree, q: float) -> dict[tuple[int, ...], float]:
    """Exact law of the terminal edge-state vector by enumerating every edge
    permutation and coin pattern through the reference simulation."""
    return _enumerate_outcomes(tree, q, use_scan=False)


def exact_outcome_distribution_scan(tree: LabeledTree, q: float) -> dict[tuple[int, ...], float]:
    """Same enumeration, but each realization runs through the production
    scan; used to certify the optimized path against the reference."""
    return _enumerate_outcomes(tree, q, use_scan=True)


def _enumerate_outcomes(tree: LabeledTree, q: float, use_scan: bool) -> dict[tuple[int, ...], float]:
    m = tree.n_edges
    if m > 5:
        raise ValueError("exact enumeration limited to n <= 6")
    if not 0.0 < q < 1.0:
        raise ValueError("enumeration needs 0 < q < 1")
    edges = [(int(a), int(b)) for a, b in tree.edges]
    n_perm = math.factorial(m)
    out: dict[tuple[int, ...], float] = {}
    for perm in permutations(range(m)):
        for flags in product((False, True), repeat=m):
            prob = (1.0 / n_perm) * math.prod(q if f else (1.0 - q) for f in flags)
            if use_scan:
                uvals = np.array([0.5 * q if f else q + 0.5 * (1 - q) for f in flags])
                res = run_fire_with_randomness(tree, q, np.array(perm, dtype=np.int64), uvals)
                key = tuple(int(s) for s in res.edge_states)
            else:
                key = _reference_fire(tree.n, edges, perm, flags)
            out[key] = out.get(key, 0.0) + prob
    return out


def exact_density_mean(tree: LabeledTree, q: float) -> float:
    """Exact E[density of fireproof vertices] from the reference enumeration."""
    dist = exact_outcome_distribution(tree, q)
    eu = tree.edges[:, 0] - 1
    ev = tree.edges[:, 1] - 1
    total = 0.0
    for states, prob in dist.items():
        st = np.array(states, dtype=np.int8)
        bad = np.zeros(tree.n, dtype=bool)
        bad[eu[st != np.int8(EdgeState.FIREPROOF)]] = True
        bad[ev[st != np.int8(EdgeState.FIREPROOF)]] = True
        total += prob * float((~bad).sum()) / tree.n
    return total
