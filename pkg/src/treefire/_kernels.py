"""Compiled inner loops shared by the tree, cutting, and fire modules.

Every kernel works on 0-based vertex ids and flat CSR adjacency arrays
(``indptr``, ``adj_edge``, ``adj_nbr``).  Randomness is always drawn by the
caller and passed in as plain arrays, so the kernels are pure functions and
bit-reproducible.  If numba is unavailable the kernels run as ordinary
Python, slower but identical in behaviour.
"""

from __future__ import annotations

import numpy as np

try:
    from numba import njit

    NUMBA_ENABLED = True
except ImportError:  # pragma: no cover - exercised only without numba
    NUMBA_ENABLED = False

    def njit(*args, **kwargs):
        def wrap(func):
            return func

        return wrap


@njit(cache=True, nogil=True)
def build_csr(n, eu, ev):
    """CSR adjacency for an undirected edge list on vertices 0..n-1.

    Returns (indptr, adj_edge, adj_nbr): slot s of vertex v holds incident
    edge id adj_edge[s] and the opposite endpoint adj_nbr[s].
    """
    m = eu.shape[0]
    deg = np.zeros(n + 1, dtype=np.int64)
    for i in range(m):
        deg[eu[i] + 1] += 1
        deg[ev[i] + 1] += 1
    indptr = np.cumsum(deg)
    adj_edge = np.empty(2 * m, dtype=np.int64)
    adj_nbr = np.empty(2 * m, dtype=np.int64)
    fill = indptr[:n].copy()
    for i in range(m):
        a = eu[i]
        b = ev[i]
        adj_edge[fill[a]] = i
        adj_nbr[fill[a]] = b
        fill[a] += 1
        adj_edge[fill[b]] = i
        adj_nbr[fill[b]] = a
        fill[b] += 1
    return indptr, adj_edge, adj_nbr


@njit(cache=True, nogil=True)
def prufer_decode_kernel(n, seq):
    """Decode a 0-based Pruefer sequence of length n-2 into edge arrays."""
    m = n - 1
    eu = np.empty(m, dtype=np.int64)
    ev = np.empty(m, dtype=np.int64)
    if n < 2:
        return eu, ev
    degree = np.ones(n, dtype=np.int64)
    for i in range(seq.shape[0]):
        degree[seq[i]] += 1
    ptr = 0
    while degree[ptr] != 1:
        ptr += 1
    leaf = ptr
    for i in range(seq.shape[0]):
        x = seq[i]
        eu[i] = leaf
        ev[i] = x
        degree[x] -= 1
        if degree[x] == 1 and x < ptr:
            leaf = x
        else:
            ptr += 1
            while degree[ptr] != 1:
                ptr += 1
            leaf = ptr
    eu[m - 1] = leaf
    ev[m - 1] = n - 1
    return eu, ev


@njit(cache=True, nogil=True)
def bfs_parents(n, indptr, adj_edge, adj_nbr, src):
    """BFS tree from src: per-vertex parent vertex, parent edge id, depth."""
    parent = np.full(n, -1, dtype=np.int64)
    parent_edge = np.full(n, -1, dtype=np.int64)
    dist = np.full(n, -1, dtype=np.int64)
    queue = np.empty(n, dtype=np.int64)
    head = 0
    tail = 0
    queue[tail] = src
    tail += 1
    dist[src] = 0
    while head < tail:
        v = queue[head]
        head += 1
        for s in range(indptr[v], indptr[v + 1]):
            w = adj_nbr[s]
            if dist[w] < 0:
                dist[w] = dist[v] + 1
                parent[w] = v
                parent_edge[w] = adj_edge[s]
                queue[tail] = w
                tail += 1
    return parent, parent_edge, dist


@njit(cache=True, nogil=True)
def label_components(n, indptr, adj_edge, adj_nbr, edge_ok, vertex_ok):
    """Connected-component labels over the subgraph of ok vertices/edges.

    Vertices with vertex_ok False get label -1 and are never traversed.
    """
    labels = np.full(n, -1, dtype=np.int64)
    stack = np.empty(n, dtype=np.int64)
    n_comp = 0
    for v0 in range(n):
        if not vertex_ok[v0] or labels[v0] >= 0:
            continue
        labels[v0] = n_comp
        top = 0
        stack[top] = v0
        top += 1
        while top > 0:
            top -= 1
            v = stack[top]
            for s in range(indptr[v], indptr[v + 1]):
                if not edge_ok[adj_edge[s]]:
                    continue
                w = adj_nbr[s]
                if vertex_ok[w] and labels[w] < 0:
                    labels[w] = n_comp
                    stack[top] = w
                    top += 1
        n_comp += 1
    return labels, n_comp


@njit(cache=True, nogil=True)
def isolate_scan(n, indptr, adj_edge, adj_nbr, eu, ev, perm, tcount):
    """Cut count of the target-isolation process via a single permutation scan.

    Edges are visited in ``perm`` order; an edge still inside a retained
    subtree (both endpoints alive) is cut, the side holding no target is
    discarded.  A subsequence of a uniform permutation is uniformly ordered,
    so the scan realises "remove a uniform edge of the current forest" at
    every step.  Returns (cuts, size of the smaller side of the first cut).
    """
    m = eu.shape[0]
    alive = np.ones(n, dtype=np.bool_)
    cut = np.zeros(m, dtype=np.bool_)
    comp = np.zeros(n, dtype=np.int64)
    comp_targets = np.zeros(n + 1, dtype=np.int64)
    total = 0
    for v in range(n):
        total += tcount[v]
    comp_targets[0] = total
    next_comp = 1
    mark = np.zeros(n, dtype=np.int64)
    token = 0
    qa = np.empty(n, dtype=np.int64)
    qb = np.empty(n, dtype=np.int64)
    active_edges = m
    cuts = 0
    first_small = 0
    for idx in range(m):
        e = perm[idx]
        x = eu[e]
        y = ev[e]
        if not alive[x] or not alive[y]:
            continue
        cuts += 1
        cut[e] = True
        active_edges -= 1
        c = comp[x]
        # Lockstep BFS from both endpoints; the side exhausted first is the
        # smaller one and costs O(min side).
        token += 2
        ta = token - 1
        tb = token
        qa[0] = x
        mark[x] = ta
        ha = 0
        na = 1
        qb[0] = y
        mark[y] = tb
        hb = 0
        nb = 1
        a_is_small = True
        while True:
            v = qa[ha]
            ha += 1
            for s in range(indptr[v], indptr[v + 1]):
                if cut[adj_edge[s]]:
                    continue
                w = adj_nbr[s]
                if alive[w] and mark[w] != ta:
                    mark[w] = ta
                    qa[na] = w
                    na += 1
            if ha >= na:
                a_is_small = True
                break
            v = qb[hb]
            hb += 1
            for s in range(indptr[v], indptr[v + 1]):
                if cut[adj_edge[s]]:
                    continue
                w = adj_nbr[s]
                if alive[w] and mark[w] != tb:
                    mark[w] = tb
                    qb[nb] = w
                    nb += 1
            if hb >= nb:
                a_is_small = False
                break
        if a_is_small:
            small_q = qa
            small_n = na
        else:
            small_q = qb
            small_n = nb
        if cuts == 1:
            first_small = small_n
        t_small = 0
        for i in range(small_n):
            t_small += tcount[small_q[i]]
        t_other = comp_targets[c] - t_small
        if t_small == 0:
            for i in range(small_n):
                alive[small_q[i]] = False
            active_edges -= small_n - 1
        elif t_other == 0:
            # Finish enumerating the larger side, then discard it; each
            # vertex dies at most once over the whole run.
            if a_is_small:
                while hb < nb:
                    v = qb[hb]
                    hb += 1
                    for s in range(indptr[v], indptr[v + 1]):
                        if cut[adj_edge[s]]:
                            continue
                        w = adj_nbr[s]
                        if alive[w] and mark[w] != tb:
                            mark[w] = tb
                            qb[nb] = w
                            nb += 1
                for i in range(nb):
                    alive[qb[i]] = False
                active_edges -= nb - 1
            else:
                while ha < na:
                    v = qa[ha]
                    ha += 1
                    for s in range(indptr[v], indptr[v + 1]):
                        if cut[adj_edge[s]]:
                            continue
                        w = adj_nbr[s]
                        if alive[w] and mark[w] != ta:
                            mark[w] = ta
                            qa[na] = w
                            na += 1
                for i in range(na):
                    alive[qa[i]] = False
                active_edges -= na - 1
            comp_targets[c] = t_small
        else:
            for i in range(small_n):
                comp[small_q[i]] = next_comp
            comp_targets[next_comp] = t_small
            comp_targets[c] = t_other
            next_comp += 1
        if active_edges == 0:
            break
    return cuts, first_small


@njit(cache=True, nogil=True)
def fire_scan(n, indptr, adj_edge, adj_nbr, eu, ev, perm, uvals, q):
    """Terminal edge states of the fire dynamics, permutation-and-coins form.

    Edge states: 0 inflammable, 1 fireproof, 2 burnt.  Edge e at its turn is
    skipped when already burnt; otherwise it fireproofs when uvals[e] >= q
    and ignites when uvals[e] < q, burning its whole inflammable cluster.
    Returns (state, ignition edge ids in event order).
    """
    m = eu.shape[0]
    state = np.zeros(m, dtype=np.int8)
    visited = np.zeros(n, dtype=np.bool_)
    stack = np.empty(n + 2, dtype=np.int64)
    ignitions = np.empty(m if m > 0 else 1, dtype=np.int64)
    n_ign = 0
    for idx in range(m):
        e = perm[idx]
        if state[e] == 2:
            continue
        if uvals[e] >= q:
            state[e] = 1
        else:
            ignitions[n_ign] = e
            n_ign += 1
            state[e] = 2
            top = 0
            stack[top] = eu[e]
            top += 1
            stack[top] = ev[e]
            top += 1
            while top > 0:
                top -= 1
                v = stack[top]
                if visited[v]:
                    continue
                # Once a fire reaches v every inflammable edge at v burns,
                # so no later fire can re-enter v: the flag stays set.
                visited[v] = True
                for s in range(indptr[v], indptr[v + 1]):
                    f = adj_edge[s]
                    if state[f] == 0:
                        state[f] = 2
                        w = adj_nbr[s]
                        if not visited[w]:
                            stack[top] = w
                            top += 1
    return state, ignitions[:n_ign].copy()
