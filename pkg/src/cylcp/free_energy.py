"""Casimir-Polder free energy of an atom outside a hollow cylinder.

Results are normalized by the retarded perfect-plane energy
``F₀ = -3ħc α₀ / (32π² ε₀ L⁴)`` at the same separation.  At zero temperature

    F/F₀ = (16/3π) ∫₀^∞ dη e^{-2η} ∫₀¹ dζ (1-ζ²)^{-1/2} Σ'_m (α/α₀) 𝒦̃_m(η, s) B_m(η, ζ)

where ``B_m`` combines the three scattering channels (see :func:`integrand_zero_t`).
The ``e^{-2η}`` factor belongs to a Gauss-Laguerre rule in ``2η``.  The
``(1-ζ)^{-1/2}`` factor belongs to a Gauss-Jacobi rule in ``2ζ-1``.  The ``m``
sum is either a truncated direct sum or a discrete Gaussian (MDL) rule whose
weights carry the ``(1+1/s)^{-2m}`` decay.

At finite temperature the frequency integral becomes a Matsubara sum.  Each
term is integrated in the shifted variable ``η_T = η - nL/λ̄_T`` with the inverse
square-root endpoint factor in a generalized Laguerre weight.  Close to the
static term that factor is removed instead by integrating over ``sqrt(η² - ν²)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from . import materials
from .materials import EV_TO_J, HBAR_C, AtomModel, PermittivityModel
from .quadrature import (BudgetExceeded, gauss_jacobi_half, gauss_laguerre, genz_malik_2d,
                         mdl_rule)
from .scattering import ScatterPoint, ShellGeometry, _coefficients_raw, _resolve_s
from .special_functions import log_bessel_i_scaled, log_bessel_k_scaled

NORMALIZATION = 16.0 / (3.0 * math.pi)
# m-values evaluated per vectorized call of a direct sum
_DIRECT_CHUNK = 8


class Strategy(str, Enum):
    AUTO = "auto"
    DIRECT = "direct"
    MDL = "mdl"


@dataclass(frozen=True)
class EvalSettings:
    """Quadrature orders and summation strategies.

    ``n_m`` is the number of MDL nodes, or the cap on a direct ``m`` sum;
    ``n_matsubara`` plays the same role for the Matsubara sum.
    """

    n_eta: int = 10
    n_zeta: int = 30
    n_m: int = 10
    n_matsubara: int = 30
    strategy_m: Strategy = Strategy.AUTO
    strategy_n: Strategy = Strategy.AUTO
    small_s_adaptive: bool = False
    rel_tol: float = 1e-8
    max_evals: int = 200_000

    def __post_init__(self):
        object.__setattr__(self, "strategy_m", Strategy(self.strategy_m))
        object.__setattr__(self, "strategy_n", Strategy(self.strategy_n))
        for name in ("n_eta", "n_zeta", "n_m", "n_matsubara", "max_evals"):
            if int(getattr(self, name)) < 1:
                raise ValueError(f"{name} must be >= 1")
        if not 0.0 < self.rel_tol < 1.0:
            raise ValueError("rel_tol must lie in (0, 1)")

    def resolve_m(self, s: float) -> Strategy:
        if self.strategy_m is Strategy.AUTO:
            return Strategy.MDL if s > 1.0 else Strategy.DIRECT
        return self.strategy_m

    def resolve_n(self, L: float, thermal_wavelength: float) -> Strategy:
        if self.strategy_n is Strategy.AUTO:
            return Strategy.MDL if L < thermal_wavelength else Strategy.DIRECT
        return self.strategy_n


@dataclass(frozen=True)
class PotentialResult:
    """Free energy at one separation.

    ``f_normalized`` is ``|F/F₀|`` and ``sign`` the sign of ``F`` itself
    (``-1`` for attraction).  ``f_absolute`` is ``F`` in joules when the atom
    carries a static polarizability, else ``None``.
    """

    f_normalized: float
    sign: int
    f_absolute: float | None
    strategy_used: dict
    budget_report: dict
    L: float
    temperature: float = 0.0

    @property
    def f_signed(self) -> float:
        """``F/|F₀|``, negative for attraction."""
        return self.sign * self.f_normalized


def f0_energy(atom: AtomModel, L: float) -> float:
    """Retarded perfect-plane energy ``F₀`` in eV (``alpha0_volume`` required)."""
    if atom.alpha0_volume is None:
        raise ValueError("atom has no static polarizability")
    return -3.0 * HBAR_C * atom.alpha0_volume / (8.0 * math.pi * L ** 4)


def _log_kernel_scaled(m, eta, s):
    x = eta * s
    return (3.0 * np.log(eta) + log_bessel_i_scaled(m, x) - log_bessel_k_scaled(m, x)
            + 2.0 * log_bessel_k_scaled(m, eta * (1.0 + s)))


def kernel(m, eta, s, scaled: bool = False):
    """``𝒦_m(η, s) = η³ I_m(ηs) K_m²(η(1+s)) / K_m(ηs)``.

    The scaled variant drops the ``e^{-2η}`` factor, ``𝒦 = 𝒦̃ e^{-2η}``.
    """
    m, eta = np.broadcast_arrays(np.asarray(m, float), np.asarray(eta, float))
    if not s > 0:
        raise ValueError("s must be positive")
    log_value = _log_kernel_scaled(m, eta, s)
    if not scaled:
        log_value = log_value - 2.0 * eta
    with np.errstate(under="ignore"):
        value = np.exp(log_value)
    return float(value) if value.ndim == 0 else value


def _log_dk(m, x):
    """``𝕜_m(x)``."""
    return -np.exp(log_bessel_k_scaled(np.abs(m - 1.0), x) - log_bessel_k_scaled(m, x)) - m / x


def _channel_factors(m, eta, s):
    """``m/(η(1+s))`` and ``𝕜_m(η(1+s))``."""
    x = eta * (1.0 + s)
    return m / x, _log_dk(m, x)


def _summand(atom, model, geom, L, m, eta, zeta, mu=0.0):
    """``(α/α₀) 𝒦̃_m e^{μm} B_m`` on broadcast arrays."""
    s = geom.R0 / L
    m, eta, zeta = np.broadcast_arrays(np.asarray(m, float), np.asarray(eta, float),
                                       np.asarray(zeta, float))
    r_nn, r_mm, r_mn = _coefficients_raw(geom, model, eta, zeta, m, L)
    ratio, dk = _channel_factors(m, eta, s)
    z2 = zeta * zeta
    c2 = 1.0 - z2
    angular = ratio * ratio + dk * dk
    brace = (r_nn * (1.0 + c2 * angular) - r_mm * z2 * angular
             + r_mn * 4.0 * zeta * np.sqrt(c2) * ratio * dk)
    alpha = materials.polarizability(atom, zeta * eta * HBAR_C / L)
    log_k = _log_kernel_scaled(m, eta, s) + mu * m
    with np.errstate(under="ignore"):
        return alpha * np.exp(log_k) * brace


def integrand_zero_t(atom: AtomModel, model: PermittivityModel, geom: ShellGeometry, L: float,
                     pt: ScatterPoint):
    """Scaled zero-temperature summand per unit ``α₀``.

    Returns ``(α/α₀) 𝒦̃_m(η,s) B_m`` with

        B_m = r^NN (1 + (1-ζ²)[M² + 𝕜²]) - r^MM ζ² [M² + 𝕜²] + 4 r^MN ζ sqrt(1-ζ²) M 𝕜,

    ``M = m/(η(1+s))`` and ``𝕜 = 𝕜_m(η(1+s))``.  The ``e^{-2η}`` and
    ``(1-ζ²)^{-1/2}`` factors of the full integrand are left to the quadrature.
    """
    _resolve_s(geom, pt, L)
    value = _summand(atom, model, geom, L, pt.m, pt.eta, pt.zeta)
    return float(value) if np.ndim(value) == 0 else value


# --- summation over m ----------------------------------------------------------------

@dataclass
class _Counter:
    evaluations: int = 0
    terms: list = field(default_factory=list)


def _m_sum(term, reduce, s, settings: EvalSettings, strategy: Strategy, counter: _Counter):
    """``Σ'_m`` of ``reduce(term(m, μ))``.

    ``term(m, mu)`` takes ``m`` with a leading axis and returns values with that
    axis first; ``reduce`` integrates one ``m`` slice over the grid.
    """
    if strategy is Strategy.MDL:
        mu = 2.0 * math.log1p(1.0 / s)
        rule = mdl_rule(settings.n_m, mu)
        vals = term(rule.nodes, mu)
        counter.evaluations += vals.size
        counter.terms.append(settings.n_m)
        return reduce(np.tensordot(rule.weights, vals, axes=1))
    threshold = settings.rel_tol / 10.0
    total = None
    quiet = 0
    m0 = 0
    while m0 < settings.n_m:
        ms = np.arange(m0, min(m0 + _DIRECT_CHUNK, settings.n_m), dtype=float)
        vals = term(ms, 0.0)
        counter.evaluations += vals.size
        for k, m in enumerate(ms):
            contrib = reduce(vals[k]) * (0.5 if m == 0 else 1.0)
            total = contrib if total is None else total + contrib
            small = np.all(np.abs(contrib) <= threshold * np.abs(total))
            quiet = quiet + 1 if small else 0
            if quiet == 3:
                counter.terms.append(int(m) + 1)
                return total
        m0 += _DIRECT_CHUNK
    counter.terms.append(settings.n_m)
    return total


def _m_column(arr):
    return np.asarray(arr, dtype=float).reshape((-1,) + (1,) * 2)


# --- zero temperature ----------------------------------------------------------------

def _tensor_rules(settings):
    lag = gauss_laguerre(settings.n_eta)
    jac = gauss_jacobi_half(settings.n_zeta)
    eta = lag.nodes / 2.0
    zeta = (1.0 + jac.nodes) / 2.0
    # ∫dη e^{-2η} → ½ Σ w;  ∫dζ (1-ζ)^{-1/2}(1+ζ)^{-1/2} → 2^{-1/2} Σ w (1+ζ)^{-1/2}
    w = 0.5 * lag.weights[:, None] * (jac.weights / np.sqrt(2.0 * (1.0 + zeta)))[None, :]
    return eta[:, None], zeta[None, :], w


def _zero_t_fixed(atom, model, geom, L, settings, strategy, counter):
    s = geom.R0 / L
    eta, zeta, w = _tensor_rules(settings)

    def term(m, mu):
        return _summand(atom, model, geom, L, _m_column(m), eta, zeta, mu)

    total = _m_sum(term, lambda v: np.sum(w * v), s, settings, strategy, counter)
    return float(total), None, True


def _zero_t_adaptive(atom, model, geom, L, settings, counter):
    s = geom.R0 / L
    eta_max = 40.0 + 10.0 * math.log(1.0 / settings.rel_tol)

    def f(eta, theta):
        # ζ = sin θ absorbs (1-ζ²)^{-1/2}
        zeta = np.sin(theta)

        def term(m, mu):
            return _summand(atom, model, geom, L, np.asarray(m, float)[:, None], eta[None, :],
                            zeta[None, :], mu)

        sub = _Counter()
        val = _m_sum(term, lambda v: v, s, settings, Strategy.DIRECT, sub)
        counter.evaluations += sub.evaluations
        counter.terms.extend(sub.terms)
        return np.exp(-2.0 * eta) * val

    res = genz_malik_2d(f, ((0.0, eta_max), (0.0, math.pi / 2.0)), rel_tol=settings.rel_tol,
                        max_evals=settings.max_evals)
    # the dropped tail is below e^{-2 η_max} relative to the O(1) integrand scale
    err = res.error_estimate + math.exp(-2.0 * eta_max) * abs(res.value)
    return res.value, err, res.converged


def _finish(atom, L, total, strategy_used, counter, err, converged, temperature):
    if not math.isfinite(total):
        raise FloatingPointError(f"non-finite free energy at L = {L} nm")
    ratio = NORMALIZATION * total
    sign = -1 if ratio >= 0 else 1
    f_abs = None
    if atom.alpha0_volume is not None:
        f_abs = f0_energy(atom, L) * ratio * EV_TO_J
    budget = {
        "evaluations": counter.evaluations,
        "m_terms_max": max(counter.terms) if counter.terms else 0,
        "converged": bool(converged),
        "error_estimate": None if err is None else float(NORMALIZATION * err),
    }
    return PotentialResult(abs(ratio), sign, f_abs, strategy_used, budget, float(L),
                           float(temperature))


def _warn_budget(converged):
    if not converged:
        import warnings
        warnings.warn("adaptive cubature stopped on its evaluation budget", BudgetExceeded,
                      stacklevel=3)


def free_energy_zero_t(atom: AtomModel, model: PermittivityModel, geom: ShellGeometry, L: float,
                       settings: EvalSettings | None = None) -> PotentialResult:
    """Free energy at ``T = 0`` normalized to ``F₀``."""
    settings = settings or EvalSettings()
    if not L > 0:
        raise ValueError("L must be positive")
    s = geom.R0 / L
    strategy = settings.resolve_m(s)
    counter = _Counter()
    adaptive = settings.small_s_adaptive and s <= 1.0
    if adaptive:
        total, err, converged = _zero_t_adaptive(atom, model, geom, L, settings, counter)
        _warn_budget(converged)
        strategy = Strategy.DIRECT
    else:
        total, err, converged = _zero_t_fixed(atom, model, geom, L, settings, strategy, counter)
    used = {"m": strategy.value, "n": None, "adaptive_2d": adaptive,
            "n_eta": settings.n_eta, "n_zeta": settings.n_zeta, "n_m": settings.n_m}
    return _finish(atom, L, total, used, counter, err, converged, 0.0)


# --- finite temperature --------------------------------------------------------------

# below this ν the endpoint factor 1/sqrt(η² - ν²) varies faster than a Laguerre
# rule in η - ν can follow, so the integral switches to t = sqrt(η² - ν²)
_NU_SWITCH = 0.5


def _matsubara_term(atom, model, geom, L, nu, n_weight, settings, strategy_m, counter, mu_n):
    """``∫dη`` of the ``m`` sum at the Matsubara point ``ν = nL/λ̄_T``.

    ``mu_n`` is the MDL decay rate carried by the ``n`` weights (0 for a direct sum), so
    the term is returned multiplied by ``e^{-2ν + μ_n n}``.
    """
    s = geom.R0 / L
    # an MDL rule in n already carries e^{-2ν}
    carried = 2.0 * nu if mu_n > 0.0 else 0.0
    if nu < _NU_SWITCH:
        # dη/sqrt(η² - ν²) = dt/η; the rule carries e^{-2t}
        lag = gauss_laguerre(settings.n_eta)
        t = lag.nodes / 2.0
        eta = np.sqrt(t * t + nu * nu)
        w = 0.5 * lag.weights / eta * np.exp(carried - 2.0 * (eta - t))
    else:
        # η_T^{-1/2} e^{-2η_T} carried by the rule; 1/sqrt(η_T + 2ν) stays in the integrand
        lag = gauss_laguerre(settings.n_eta, -0.5)
        eta_t = lag.nodes / 2.0
        eta = eta_t + nu
        w = lag.weights / np.sqrt(2.0) / np.sqrt(eta_t + 2.0 * nu) * math.exp(carried - 2.0 * nu)
    eta = eta[None, :]
    zeta = nu / eta
    w = n_weight * w[None, :]

    def term(m, mu):
        return _summand(atom, model, geom, L, _m_column(m), eta, zeta, mu)

    return float(_m_sum(term, lambda v: np.sum(w * v), s, settings, strategy_m, counter))


def free_energy_finite_t(atom: AtomModel, model: PermittivityModel, geom: ShellGeometry, L: float,
                         temperature: float, settings: EvalSettings | None = None) -> PotentialResult:
    """Free energy at temperature ``T > 0`` normalized to the zero-temperature ``F₀``.

    ``F/F₀ = (16/3π)(L/λ̄_T) Σ'_n ∫_{ν_n}^∞ dη Σ'_m (α/α₀) 𝒦_m B_m / sqrt(η² - ν_n²)`` with
    ``ν_n = nL/λ̄_T`` and ``ζ = ν_n/η``.
    """
    settings = settings or EvalSettings()
    if not temperature > 0:
        raise ValueError("temperature must be positive; use free_energy_zero_t for T = 0")
    if not L > 0:
        raise ValueError("L must be positive")
    lam_t = materials.thermal_wavelength(temperature)
    s = geom.R0 / L
    strategy_m = settings.resolve_m(s)
    strategy_n = settings.resolve_n(L, lam_t)
    counter = _Counter()
    step = L / lam_t
    if strategy_n is Strategy.MDL:
        mu_t = 2.0 * step
        rule = mdl_rule(settings.n_matsubara, mu_t)
        # the MDL weights carry e^{-μ_T n} = e^{-2ν}; nodes are all strictly positive
        parts = [_matsubara_term(atom, model, geom, L, x * step, w, settings, strategy_m,
                                 counter, mu_t) for x, w in zip(rule.nodes, rule.weights)]
        n_used = settings.n_matsubara
    else:
        parts = []
        quiet = 0
        threshold = settings.rel_tol / 10.0
        n_used = settings.n_matsubara
        for n in range(settings.n_matsubara):
            weight = 0.5 if n == 0 else 1.0
            parts.append(_matsubara_term(atom, model, geom, L, n * step, weight, settings,
                                         strategy_m, counter, 0.0))
            quiet = quiet + 1 if abs(parts[-1]) <= threshold * abs(math.fsum(parts)) else 0
            if quiet == 3:
                n_used = n + 1
                break
    total = step * math.fsum(parts)
    used = {"m": strategy_m.value, "n": strategy_n.value, "adaptive_2d": False,
            "n_eta": settings.n_eta, "n_m": settings.n_m, "n_matsubara": n_used}
    return _finish(atom, L, total, used, counter, None, True, temperature)


def free_energy(atom, model, geom, L, temperature: float = 0.0, settings=None) -> PotentialResult:
    """Dispatch to the zero- or finite-temperature evaluation."""
    if temperature == 0:
        return free_energy_zero_t(atom, model, geom, L, settings)
    return free_energy_finite_t(atom, model, geom, L, temperature, settings)


# --- Green tensor --------------------------------------------------------------------

def _green_setup(model, geom, L, xi, settings):
    if not xi >= 0:
        raise ValueError("xi must be non-negative")
    s = geom.R0 / L
    nu = xi * L / HBAR_C
    lag = gauss_laguerre(settings.n_eta)
    t = lag.nodes / 2.0
    eta = np.sqrt(t * t + nu * nu)
    zeta = nu / eta
    w = 0.5 * lag.weights * np.exp(-2.0 * (eta - t)) / np.pi ** 2

    def term(m, mu):
        m = np.asarray(m, float)[:, None]
        r_nn, r_mm, r_mn = _coefficients_raw(geom, model, eta[None, :], zeta[None, :], m, L)
        ratio, dk = _channel_factors(m, eta[None, :], s)
        pref = np.exp(_log_kernel_scaled(m, eta[None, :], s) + mu * m) / eta ** 3
        ratio2, dk2 = ratio * ratio, dk * dk
        cross = 2.0 * r_mn * nu * t * ratio * dk
        g_rr = t * t * r_nn * dk2 - r_mm * nu * nu * ratio2 + cross
        g_pp = t * t * r_nn * ratio2 - r_mm * nu * nu * dk2 + cross
        g_zz = r_nn * eta * eta
        return pref[:, None, :] * np.stack([g_rr, g_pp, g_zz], axis=1)

    return s, w, term


def green_tensor_diagonal(model: PermittivityModel, geom: ShellGeometry, L: float, xi: float,
                          settings: EvalSettings | None = None):
    """Diagonal ``(g_ρρ, g_φφ, g_zz)`` of the scattered Green tensor at the atom.

    Returned in the dimensionless form ``g = ε₀ L³ G``, so that
    ``F = -(ħ/2π) ∫dξ α(iξ) Tr G``.  The axial wave number integral runs over
    ``t = qL`` with ``η = sqrt(t² + ν²)`` and ``ν = ξL/ħc``; in that variable
    every component is smooth at ``t = 0``.  A Gauss-Laguerre rule in ``2t``
    carries ``e^{-2t}``, the leftover ``e^{-2(η - t)} ≤ 1`` stays explicit.
    """
    settings = settings or EvalSettings()
    s, w, term = _green_setup(model, geom, L, xi, settings)
    counter = _Counter()
    out = _m_sum(term, lambda v: v @ w, s, settings, settings.resolve_m(s), counter)
    return tuple(float(v) for v in out)


def green_tensor_partial_sums(model: PermittivityModel, geom: ShellGeometry, L: float, xi: float,
                              m_max: int, settings: EvalSettings | None = None) -> np.ndarray:
    """Running direct sums over ``m = 0 … m_max`` of the Green tensor diagonal.

    Row ``k`` holds ``(g_ρρ, g_φφ, g_zz)`` summed up to ``m = k``.
    """
    settings = settings or EvalSettings()
    if m_max < 0:
        raise ValueError("m_max must be >= 0")
    _, w, term = _green_setup(model, geom, L, xi, settings)
    ms = np.arange(m_max + 1, dtype=float)
    per_m = term(ms, 0.0) @ w
    per_m[0] *= 0.5
    return np.cumsum(per_m, axis=0)
