"""Closed-form limit and structural laws used as Monte Carlo targets.

All factorial/power ratios are evaluated through log-gamma and exponentiated
last, so the pmfs stay finite up to n ~ 1e6 where the raw n^n terms would
overflow.  Samplers take an explicit numpy Generator; nothing here touches
global random state.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy.integrate import quad
from scipy.interpolate import PchipInterpolator
from scipy.special import gammainc, gammaln

__all__ = [
    "TruncatedPmfTable",
    "DinfLaw",
    "borel_pmf",
    "borel_table",
    "borel_sample",
    "borel_tail_asymptotic",
    "borel_tanner_pmf",
    "conditioned_borel_marginal_pmf",
    "rayleigh_pdf",
    "rayleigh_cdf",
    "rayleigh_sample",
    "chi_pdf",
    "chi_cdf",
    "chi_sample",
    "spine_pmf",
    "first_cut_pmf",
    "first_cut_law",
    "dinf_pdf",
    "dinf_cdf",
    "dinf_moment",
]

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(16)


def _as_int_array(x, name, low):
    arr = np.asarray(x)
    if not np.issubdtype(arr.dtype, np.integer):
        if not np.all(np.equal(np.mod(arr, 1), 0)):
            raise ValueError(f"{name} must be integer-valued")
        arr = arr.astype(np.int64)
    if arr.size and arr.min() < low:
        raise ValueError(f"{name} must be >= {low}")
    return arr.astype(np.float64)


def _maybe_scalar(result, *inputs):
    if all(np.isscalar(x) or np.ndim(x) == 0 for x in inputs):
        return float(result)
    return result


def borel_pmf(k):
    """P(beta = k) = e^(-k) k^(k-1) / k! for the Borel(1) total-progeny law."""
    kf = _as_int_array(k, "k", 1)
    logp = -kf + (kf - 1.0) * np.log(kf) - gammaln(kf + 1.0)
    return _maybe_scalar(np.exp(logp), k)


def borel_tail_asymptotic(n):
    """Leading-order tail bound P(beta > n) ~ sqrt(2/pi) / sqrt(n)."""
    return math.sqrt(2.0 / math.pi) / math.sqrt(n)


@dataclass(frozen=True)
class TruncatedPmfTable:
    """Inverse-CDF table for a pmf on 1..support_max with explicit tail mass.

    mass[i] is the probability of value i+1; cumulative is its running sum.
    Sampling conditions on being <= support_max, so the tail handling is
    "resample", and tail_mass is reported alongside any experiment that uses
    the table (Borel(1) has infinite mean, the truncation bias is real).
    """

    support_max: int
    mass: np.ndarray
    cumulative: np.ndarray
    tail_mass: float

    def sample(self, rng: np.random.Generator, size=None):
        u = rng.random(size) * self.cumulative[-1]
        idx = np.searchsorted(self.cumulative, u, side="right")
        if size is None:
            return int(idx) + 1
        return idx.astype(np.int64) + 1


def borel_table(support_max: int = 10_000_000) -> TruncatedPmfTable:
    """Borel(1) pmf tabulated on 1..support_max for inverse-CDF sampling."""
    if support_max < 1:
        raise ValueError("support_max must be positive")
    ks = np.arange(1, support_max + 1, dtype=np.float64)
    mass = np.exp(-ks + (ks - 1.0) * np.log(ks) - gammaln(ks + 1.0))
    cumulative = np.cumsum(mass)
    tail = max(0.0, 1.0 - float(cumulative[-1]))
    return TruncatedPmfTable(support_max, mass, cumulative, tail)


def borel_sample(rng: np.random.Generator, table: TruncatedPmfTable, size=None):
    """Draw from Borel(1) conditioned on <= table.support_max."""
    return table.sample(rng, size)


def borel_tanner_pmf(k, n):
    """P(beta_1 + ... + beta_k = n) = (k/(n-k)!) e^(-n) n^(n-k-1)."""
    kf = _as_int_array(k, "k", 1)
    nf = _as_int_array(n, "n", 1)
    if np.any(nf < kf):
        raise ValueError("need n >= k")
    logp = np.log(kf) - gammaln(nf - kf + 1.0) - nf + (nf - kf - 1.0) * np.log(nf)
    return _maybe_scalar(np.exp(logp), k, n)


def conditioned_borel_marginal_pmf(k: int, n: int) -> np.ndarray:
    """Marginal pmf of one exchangeable coordinate of k Borel(1) variables
    conditioned to sum to n, over values 1..n-k+1."""
    if k < 1 or n < k:
        raise ValueError("need 1 <= k <= n")
    if k == 1:
        out = np.zeros(n, dtype=np.float64)
        out[-1] = 1.0
        return out
    m = np.arange(1, n - k + 2)
    probs = borel_pmf(m) * borel_tanner_pmf(k - 1, n - m) / borel_tanner_pmf(k, n)
    return np.asarray(probs, dtype=np.float64)


def rayleigh_pdf(s):
    """Density s * exp(-s^2/2) on s >= 0."""
    sf = _nonneg_real(s, "s")
    return _maybe_scalar(sf * np.exp(-0.5 * sf * sf), s)


def rayleigh_cdf(s):
    sf = _nonneg_real(s, "s")
    return _maybe_scalar(-np.expm1(-0.5 * sf * sf), s)


def rayleigh_sample(rng: np.random.Generator, size=None):
    """Inverse-CDF draw: sqrt(-2 log(1-U))."""
    u = rng.random(size)
    return np.sqrt(-2.0 * np.log1p(-u))


def chi_pdf(k, x):
    """Density of the chi law with 2k degrees of freedom.

    pdf(x) = 2^(1-k)/(k-1)! * x^(2k-1) * exp(-x^2/2); chi(2) is Rayleigh.
    """
    kf = _as_int_array(k, "k", 1)
    xf = _nonneg_real(x, "x")
    with np.errstate(divide="ignore"):
        logx = np.where(xf > 0, np.log(np.where(xf > 0, xf, 1.0)), -np.inf)
    logp = (1.0 - kf) * math.log(2.0) - gammaln(kf) + (2.0 * kf - 1.0) * logx - 0.5 * xf * xf
    out = np.where(np.isneginf(logp), 0.0, np.exp(logp))
    return _maybe_scalar(out, k, x)


def chi_cdf(k, x):
    """P(chi(2k) <= x) via the regularized incomplete gamma of chi^2(2k)."""
    kf = _as_int_array(k, "k", 1)
    xf = _nonneg_real(x, "x")
    return _maybe_scalar(gammainc(kf, 0.5 * xf * xf), k, x)


def chi_sample(k, rng: np.random.Generator, size=None):
    """chi(2k) draw as sqrt of a Gamma(k, scale=2) variable."""
    if k < 1:
        raise ValueError("k must be >= 1")
    return np.sqrt(rng.gamma(k, 2.0, size))


def spine_pmf(n: int, k):
    """P(spine length = k) = (k+1)(n-1)! / (n^(k+1) (n-k-1)!) for k in 0..n-1."""
    if n < 1:
        raise ValueError("n must be positive")
    kf = _as_int_array(k, "k", 0)
    if np.any(kf > n - 1):
        raise ValueError("k must lie in 0..n-1")
    logp = np.log(kf + 1.0) + gammaln(n) - (kf + 1.0) * math.log(n) - gammaln(n - kf)
    return _maybe_scalar(np.exp(logp), k)


def first_cut_pmf(n: int, m: int) -> float:
    """Probability that a uniform first cut splits a uniform n-tree into
    sizes {m, n-m}, reported by the larger side m.

    For n/2 < m < n this is the closed form
    q_n(m) = m^(m-1) (n-m)^(n-m-1) (n-2)! / (m! (n-m)! n^(n-3));
    for even n the symmetric split m = n/2 carries the complementary mass.
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    if 2 * m < n or m >= n:
        raise ValueError("m must satisfy n/2 <= m <= n-1 (larger side)")
    if 2 * m == n:
        ms = np.arange(m + 1, n)
        return float(1.0 - sum(first_cut_pmf(n, int(mm)) for mm in ms)) if ms.size else 1.0
    logq = (
        (m - 1.0) * math.log(m)
        + (n - m - 1.0) * math.log(n - m)
        + gammaln(n - 1.0)
        - gammaln(m + 1.0)
        - gammaln(n - m + 1.0)
        - (n - 3.0) * math.log(n)
    )
    return float(math.exp(logq))


def first_cut_law(n: int):
    """Support and pmf of the larger first-cut side: m = ceil(n/2)..n-1."""
    ms = np.arange((n + 1) // 2, n, dtype=np.int64)
    probs = np.array([first_cut_pmf(n, int(m)) for m in ms])
    return ms, probs


@dataclass(frozen=True)
class DinfLaw:
    """Limit law of the fireproof density at the critical firing rate a/sqrt(n).

    pdf(x) = a / sqrt(2 pi x (1-x)^3) * exp(-a^2 x / (2(1-x))) on (0, 1);
    a = 1 is the plain critical case.  The cdf is a cached panel quadrature:
    the substitution x = t^2 removes the inverse-square-root singularity at 0
    (the integrand becomes 2a(1-t^2)^(-3/2) exp(-a^2 t^2/(2(1-t^2)))/sqrt(2pi),
    smooth on [0,1) with essential decay at 1), Gauss-Legendre panels on a
    uniform t-grid feed a monotone PCHIP interpolant.
    """

    a: float = 1.0
    quadrature_nodes: int = 4096

    def __post_init__(self):
        if self.a <= 0:
            raise ValueError("a must be positive")
        if self.quadrature_nodes < 16:
            raise ValueError("quadrature_nodes must be >= 16")

    @cached_property
    def _cdf_interp(self):
        t_grid = np.linspace(0.0, 1.0, self.quadrature_nodes + 1)
        lo = t_grid[:-1, None]
        hi = t_grid[1:, None]
        pts = 0.5 * (hi - lo) * _GL_NODES[None, :] + 0.5 * (hi + lo)
        wts = 0.5 * (hi - lo) * _GL_WEIGHTS[None, :]
        panel = np.sum(self._substituted_integrand(pts) * wts, axis=1)
        cdf_vals = np.concatenate(([0.0], np.cumsum(panel)))
        return PchipInterpolator(t_grid, cdf_vals, extrapolate=False)

    def _substituted_integrand(self, t):
        s = 1.0 - t * t
        with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
            val = (
                2.0
                * self.a
                / math.sqrt(2.0 * math.pi)
                * np.power(s, -1.5)
                * np.exp(-self.a * self.a * t * t / (2.0 * s))
            )
        return np.where(s > 0, val, 0.0)

    def pdf(self, x):
        xf = np.asarray(x, dtype=np.float64)
        if np.any(xf <= 0.0) or np.any(xf >= 1.0):
            raise ValueError("x must lie strictly inside (0, 1)")
        val = (
            self.a
            / np.sqrt(2.0 * math.pi * xf * (1.0 - xf) ** 3)
            * np.exp(-self.a * self.a * xf / (2.0 * (1.0 - xf)))
        )
        return _maybe_scalar(val, x)

    def cdf(self, x):
        xf = np.asarray(x, dtype=np.float64)
        if np.any(xf < 0.0) or np.any(xf > 1.0):
            raise ValueError("x must lie in [0, 1]")
        out = np.clip(self._cdf_interp(np.sqrt(xf)), 0.0, 1.0)
        return _maybe_scalar(out, x)

    @property
    def total_mass(self) -> float:
        """Raw quadrature mass of the density; should be 1 within 1e-6."""
        return float(self._cdf_interp(1.0))


def _coerce_law(law) -> DinfLaw:
    if isinstance(law, DinfLaw):
        return law
    return DinfLaw(a=float(law))


def dinf_pdf(law, x):
    """Density of the limiting fireproof-vertex fraction; law is a DinfLaw
    or the rate constant a."""
    return _coerce_law(law).pdf(x)


def dinf_cdf(law, x):
    """Cached-quadrature cdf of the limiting fireproof-vertex fraction."""
    return _coerce_law(law).cdf(x)


def dinf_moment(k: int) -> float:
    """k-th moment of the critical (a = 1) limit density via the identity
    E[D^k] = E[exp(-chi(2k))], computed by direct quadrature."""
    if k < 1:
        raise ValueError("k must be >= 1")
    val, _ = quad(lambda x: math.exp(-x) * chi_pdf(k, x), 0.0, np.inf)
    return float(val)


def _nonneg_real(x, name):
    xf = np.asarray(x, dtype=np.float64)
    if np.any(xf < 0):
        raise ValueError(f"{name} must be >= 0")
    return xf
