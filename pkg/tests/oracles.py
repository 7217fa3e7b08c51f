"""Independent oracles shared by the test modules.

Everything here is deliberately computed along a different route than the
library code it checks: closed forms derived by substitution, brute-force
enumerations, and direct convolutions.
"""

from __future__ import annotations

import math
from itertools import combinations

import numpy as np
from scipy.special import erf

import treefire.distributions as dist


def dinf_cdf_closed_form(a: float, x):
    """Analytic cdf of the limiting density law.

    Substituting u = x/(1-x) and then t = a sqrt(u) collapses the density to
    twice a standard normal on t > 0, giving F(x) = erf(a sqrt(x/(2(1-x)))).
    Used as the independent check on the quadrature-backed cdf.
    """
    xf = np.asarray(x, dtype=np.float64)
    out = np.where(xf >= 1.0, 1.0, erf(a * np.sqrt(np.maximum(xf, 0.0) / (2.0 * np.maximum(1.0 - xf, 1e-300)))))
    return out if np.ndim(x) else float(out)


def compositions_conditional_marginal(k: int, n: int) -> np.ndarray:
    """Marginal of the first coordinate of k Borel(1) variables conditioned
    to sum to n, by enumerating every composition of n into k positive parts."""
    pmf_cache = dist.borel_pmf(np.arange(1, n + 1))

    def weight(parts):
        w = 1.0
        for p in parts:
            w *= pmf_cache[p - 1]
        return w

    marg = np.zeros(n - k + 1, dtype=np.float64)
    total = 0.0
    for cuts in combinations(range(1, n), k - 1):
        bounds = (0,) + cuts + (n,)
        parts = tuple(bounds[i + 1] - bounds[i] for i in range(k))
        w = weight(parts)
        total += w
        marg[parts[0] - 1] += w
    return marg / total


def conditioned_borel_max_pmf(k: int, n: int) -> np.ndarray:
    """pmf of max(beta_1..beta_k) given sum = n, over values 1..n-k+1,
    via convolutions of the Borel pmf truncated at each candidate max."""
    base = dist.borel_pmf(np.arange(1, n + 1))
    denom = dist.borel_tanner_pmf(k, n)
    cdf_vals = np.empty(n - k + 1)
    for m in range(1, n - k + 2):
        trunc = base.copy()
        trunc[m:] = 0.0
        conv = trunc.copy()
        for _ in range(k - 1):
            conv = np.convolve(conv, trunc)[:n]
        # index j of the k-fold convolution corresponds to value j + k
        cdf_vals[m - 1] = conv[n - k] / denom
    pmf = np.diff(np.concatenate(([0.0], cdf_vals)))
    return np.clip(pmf, 0.0, None)


def capped_mean_from_table(table, cap: int, conditioned: bool) -> float:
    """E[min(beta, cap)] computed by direct summation on the pmf table,
    either unconditionally or conditioned on beta <= support_max."""
    ks = np.arange(1, cap + 1, dtype=np.float64)
    head = float((ks * table.mass[:cap]).sum())
    if conditioned:
        above = float(table.cumulative[-1] - table.cumulative[cap - 1])
        return (head + cap * above) / float(table.cumulative[-1])
    return head + cap * (1.0 - float(table.cumulative[cap - 1]))


def capped_std_from_table(table, cap: int) -> float:
    """Standard deviation of min(beta, cap) under the conditioned table law."""
    ks = np.arange(1, cap + 1, dtype=np.float64)
    total = float(table.cumulative[-1])
    above = float(table.cumulative[-1] - table.cumulative[cap - 1])
    m1 = (float((ks * table.mass[:cap]).sum()) + cap * above) / total
    m2 = (float((ks * ks * table.mass[:cap]).sum()) + cap * cap * above) / total
    return math.sqrt(m2 - m1 * m1)


def canonical_edges(tree) -> tuple:
    """Hashable canonical form of a tree's edge set."""
    return tuple(sorted(map(tuple, np.sort(tree.edges, axis=1).tolist())))
