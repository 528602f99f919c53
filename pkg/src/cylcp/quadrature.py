"""Fixed-point Gaussian rules built from three-term recurrences, plus 2D adaptive cubature.

Every rule comes out of :func:`golub_welsch`.  The discrete-measure (MDL) rule
obtains its recurrence by a discretized Stieltjes procedure carried out in
80-bit extended precision on the truncated measure
``h e^{-μ n h}``, ``n = 0, 1, …`` with the ``n = 0`` point at half weight.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy import integrate, linalg, special


class BudgetExceeded(RuntimeWarning):
    """Adaptive cubature stopped on its evaluation budget, not on tolerance."""


@dataclass(frozen=True)
class QuadratureRule:
    nodes: np.ndarray
    weights: np.ndarray
    kind: str
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        nodes = np.asarray(self.nodes, dtype=float)
        weights = np.asarray(self.weights, dtype=float)
        if nodes.shape != weights.shape or nodes.ndim != 1:
            raise ValueError("nodes and weights must be 1D arrays of equal length")
        if np.any(np.diff(nodes) <= 0):
            raise ValueError("nodes must be strictly increasing")
        if np.any(~(weights > 0)):
            raise ValueError("Gaussian weights must be positive")
        nodes.flags.writeable = False
        weights.flags.writeable = False
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "weights", weights)

    def __len__(self):
        return self.nodes.size

    def apply(self, f) -> float:
        """``Σ w_i f(x_i)`` with ``f`` evaluated on the node array."""
        return float(np.dot(self.weights, f(self.nodes)))


def golub_welsch(alpha_coeffs, beta_coeffs, mu0: float, N: int, kind: str = "custom",
                 params: dict | None = None) -> QuadratureRule:
    """Gauss rule from the monic recurrence ``p_{k+1} = (x - a_k) p_k - b_k p_{k-1}``.

    Parameters
    ----------
    alpha_coeffs : array_like
        ``a_0 … a_{N-1}``.
    beta_coeffs : array_like
        ``b_1 … b_{N-1}`` (all positive).
    mu0 : float
        Total mass of the measure.
    N : int
        Number of nodes.
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    a = np.asarray(alpha_coeffs, dtype=float)[:N]
    b = np.asarray(beta_coeffs, dtype=float)[:N - 1]
    if a.size != N or b.size != N - 1:
        raise ValueError("need N diagonal and N-1 off-diagonal recurrence coefficients")
    if np.any(~(b > 0)):
        raise ValueError("beta coefficients must be positive")
    if not mu0 > 0:
        raise ValueError("mu0 must be positive")
    if N == 1:
        return QuadratureRule(a.copy(), np.array([mu0]), kind, params or {})
    nodes, vecs = linalg.eigh_tridiagonal(a, np.sqrt(b), lapack_driver="stev")
    weights = mu0 * vecs[0, :] ** 2
    return QuadratureRule(nodes, weights, kind, params or {})


@lru_cache(maxsize=64)
def gauss_laguerre(N: int, alpha: float = 0.0) -> QuadratureRule:
    """Rule for ``∫₀^∞ x^α e^{-x} f(x) dx``."""
    if not alpha > -1:
        raise ValueError("alpha must exceed -1")
    k = np.arange(N, dtype=float)
    a = 2.0 * k + 1.0 + alpha
    b = k[1:] * (k[1:] + alpha)
    return golub_welsch(a, b, math.gamma(alpha + 1.0), N, "laguerre", {"N": N, "alpha": alpha})


@lru_cache(maxsize=64)
def gauss_jacobi(N: int, alpha: float, beta: float) -> QuadratureRule:
    """Rule for ``∫_{-1}^{1} (1-x)^α (1+x)^β f(x) dx``."""
    if not (alpha > -1 and beta > -1):
        raise ValueError("Jacobi exponents must exceed -1")
    k = np.arange(N, dtype=float)
    ab = alpha + beta
    two_k = 2.0 * k + ab
    with np.errstate(divide="ignore", invalid="ignore"):
        a = (beta ** 2 - alpha ** 2) / (two_k * (two_k + 2.0))
    a[0] = (beta - alpha) / (ab + 2.0)
    kk = k[1:]
    t = 2.0 * kk + ab
    with np.errstate(divide="ignore", invalid="ignore"):
        b = 4.0 * kk * (kk + alpha) * (kk + beta) * (kk + ab) / (t * t * (t + 1.0) * (t - 1.0))
    if N > 1:
        # k = 1 with the factor (k + α + β)/(2k + α + β - 1) cancelled
        b[0] = 4.0 * (1.0 + alpha) * (1.0 + beta) / ((2.0 + ab) ** 2 * (3.0 + ab))
    mu0 = 2.0 ** (ab + 1.0) * math.exp(special.gammaln(alpha + 1) + special.gammaln(beta + 1)
                                       - special.gammaln(ab + 2))
    return golub_welsch(a, b, mu0, N, "jacobi", {"N": N, "alpha": alpha, "beta": beta})


def gauss_jacobi_half(N: int) -> QuadratureRule:
    """Jacobi rule with weight ``(1-x)^{-1/2}`` on ``[-1, 1]``."""
    return gauss_jacobi(N, -0.5, 0.0)


# --- modified discrete Laguerre ------------------------------------------------------

_LD = np.longdouble
# log of the smallest measure weight kept: e^{-46} ~ 1e-20, below the 80-bit epsilon
_MDL_LOG_CUTOFF = 46.0
_MDL_MAX_POINTS = 5_000_000


def _stieltjes(x: np.ndarray, w: np.ndarray, N: int):
    """Recurrence coefficients of the discrete measure ``Σ w_j δ(x - x_j)``."""
    a = np.zeros(N, dtype=_LD)
    b = np.zeros(N, dtype=_LD)
    mass = w.sum()
    p_prev = np.zeros_like(x)
    p = np.ones_like(x)
    norm_prev = _LD(1)
    norm = mass
    for k in range(N):
        a[k] = np.dot(w, x * p * p) / norm
        if k > 0:
            b[k] = norm / norm_prev
        if k == N - 1:
            break
        p_next = (x - a[k]) * p - (b[k] if k > 0 else 0) * p_prev
        # rescale to keep magnitudes near one; the ratios a_k, b_k are unchanged
        scale = np.max(np.abs(p_next))
        p_prev, p = p / scale, p_next / scale
        norm_prev, norm = norm / (scale * scale), np.dot(w, p * p)
    return a, b[1:], mass


@lru_cache(maxsize=128)
def mdl_rule(N: int, mu: float, h: float = 1.0) -> QuadratureRule:
    """Gaussian summation rule for ``Σ'_{n≥0} h f(nh) e^{-μ n h} ≈ Σ_i w_i f(x_i)``.

    The primed sum takes the ``n = 0`` term at half weight.  Nodes are real,
    so ``f`` must accept non-integer arguments.
    """
    if not mu > 0:
        raise ValueError("mu must be positive")
    if not h > 0:
        raise ValueError("h must be positive")
    if N < 1:
        raise ValueError("N must be >= 1")
    # the rule must integrate x^{2N-1}: keep points until x^{2N} e^{-μx} is negligible too
    y = _MDL_LOG_CUTOFF + 2.0 * N
    for _ in range(8):
        y = _MDL_LOG_CUTOFF + 2.0 * N * math.log(y)
    n_max = int(math.ceil(y / (mu * h))) + 1
    if n_max > _MDL_MAX_POINTS:
        raise ValueError(f"decay rate mu*h = {mu * h:g} too small for a truncated measure")
    if n_max < N:
        raise ValueError(f"measure has only {n_max} significant points, fewer than N = {N}")
    n = np.arange(n_max, dtype=_LD)
    x = n * _LD(h)
    w = _LD(h) * np.exp(-_LD(mu) * x)
    w[0] *= _LD(0.5)
    a, b, mass = _stieltjes(x, w, N)
    rule = golub_welsch(a.astype(float), b.astype(float), float(mass), N, "mdl",
                        {"N": N, "mu": mu, "h": h})
    if rule.nodes[0] < 0.0:
        # once N approaches the number of significant points the nodes settle on
        # the grid and the first one may round to just below zero
        nodes = np.array(rule.nodes)
        nodes[0] = 0.0
        rule = QuadratureRule(nodes, rule.weights, "mdl", rule.params)
    return rule


# --- adaptive 2D cubature ------------------------------------------------------------

# point count of the degree-7 Genz-Malik rule in two dimensions: 2^n + 2n^2 + 2n + 1
_GM_POINTS_2D = 17


@dataclass(frozen=True)
class CubatureResult:
    value: float
    error_estimate: float
    converged: bool
    n_evals: int


def genz_malik_2d(f, region, rel_tol: float = 1e-8, max_evals: int = 200_000,
                  abs_tol: float = 0.0) -> CubatureResult:
    """Adaptive cubature over a rectangle with the degree-7/5 Genz-Malik pair.

    ``f(x, y)`` receives 1D arrays of coordinates and returns values of the same
    shape.  ``region`` is ``((x0, x1), (y0, y1))``.  If the evaluation budget is
    exhausted the current estimate is returned with ``converged = False``.
    """
    (x0, x1), (y0, y1) = region

    def vectorized(points):
        return np.asarray(f(points[:, 0], points[:, 1]), dtype=float)

    # each subdivision replaces one region by four children
    max_subdivisions = max(0, (max_evals // _GM_POINTS_2D - 1) // 4)
    res = integrate.cubature(vectorized, [x0, y0], [x1, y1], rule="genz-malik",
                             rtol=rel_tol, atol=abs_tol, max_subdivisions=max_subdivisions)
    n_evals = _GM_POINTS_2D * (1 + 4 * int(res.subdivisions))
    return CubatureResult(float(res.estimate), float(res.error), res.status == "converged", n_evals)
