"""Modified Bessel functions of real order and the Lambert-W regime function.

All Bessel values are produced in log space from the exponentially scaled
functions ``Ĩ_ν(x) = I_ν(x) e^{-x}`` and ``K̃_ν(x) = K_ν(x) e^{x}``.  The
double-precision path is :func:`scipy.special.ive` / :func:`scipy.special.kve`.
Entries those routines cannot represent (large orders with moderate arguments,
tiny arguments) are recomputed with the uniform large-order expansion when the
order is large enough for it to be accurate to working precision, and with
mpmath otherwise.  Setting ``CYLCP_PRECISION=extended`` routes every
evaluation through mpmath.

Logarithmic derivatives ``𝕚_ν = I'_ν/I_ν`` and ``𝕜_ν = K'_ν/K_ν`` are assembled
from neighbouring orders,

    𝕚_ν(x) = I_{ν+1}(x)/I_ν(x) + ν/x,
    𝕜_ν(x) = -K_{ν-1}(x)/K_ν(x) - ν/x,

so that both terms share a sign and nothing cancels.
"""
from __future__ import annotations

import math
import os
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import mpmath
import numpy as np
from scipy import special

GAMMA_E_TILDE = math.exp(float(np.euler_gamma)) / 2.0

_MP_DPS = 40
_DEBYE_MIN_ORDER = 15.0
_DEBYE_TERMS = 12
# scaled values outside this window are recomputed rather than trusted
_SAFE_LO, _SAFE_HI = 1e-290, 1e290


class DomainError(ValueError):
    """Argument outside the mathematical domain of a function."""


class NoSolution(ArithmeticError):
    """The regime equation ``y ln y = -x`` has no root for the given ``x``."""


@dataclass(frozen=True)
class LogDerivs:
    i_val: np.ndarray | float
    k_val: np.ndarray | float


def precision_mode() -> str:
    mode = os.environ.get("CYLCP_PRECISION", "double").strip().lower()
    if mode not in ("double", "extended"):
        raise DomainError(f"CYLCP_PRECISION must be 'double' or 'extended', got {mode!r}")
    return mode


def _check(nu, x):
    nu = np.asarray(nu, dtype=float)
    x = np.asarray(x, dtype=float)
    if np.any(~(x > 0)):
        raise DomainError("Bessel argument must be positive")
    if np.any(~(nu >= 0)):
        raise DomainError("Bessel order must be non-negative")
    return np.broadcast_arrays(nu, x)


# --- uniform large-order expansion -------------------------------------------------

@lru_cache(maxsize=None)
def _debye_polynomials(n_terms: int) -> tuple[np.ndarray, ...]:
    """Coefficients (ascending powers of t) of the Debye polynomials u_0..u_{n-1}."""
    polys = [[Fraction(1)]]
    for _ in range(1, n_terms):
        u = polys[-1]
        # 1/2 t^2 (1 - t^2) u'(t)
        du = [k * c for k, c in enumerate(u)][1:]
        first = [Fraction(0)] * (len(du) + 4)
        for k, c in enumerate(du):
            first[k + 2] += c / 2
            first[k + 4] -= c / 2
        # 1/8 ∫_0^t (1 - 5 s^2) u(s) ds
        integrand = [Fraction(0)] * (len(u) + 2)
        for k, c in enumerate(u):
            integrand[k] += c
            integrand[k + 2] -= 5 * c
        second = [Fraction(0)] + [c / (8 * (k + 1)) for k, c in enumerate(integrand)]
        size = max(len(first), len(second))
        nxt = [Fraction(0)] * size
        for k, c in enumerate(first):
            nxt[k] += c
        for k, c in enumerate(second):
            nxt[k] += c
        polys.append(nxt)
    return tuple(np.array([float(c) for c in p]) for p in polys)


def _debye_log_scaled(nu, x):
    """log Ĩ_ν(x) and log K̃_ν(x) from the uniform expansion in 1/ν."""
    z = x / nu
    root = np.sqrt(1.0 + z * z)
    t = 1.0 / root
    # ν η(z) - x, arranged to avoid cancellation when z is large
    eta_minus_z = (root - z) + np.log(z / (1.0 + root))
    series_i = np.zeros_like(nu)
    series_k = np.zeros_like(nu)
    inv = 1.0 / nu
    power = np.ones_like(nu)
    for k, coeffs in enumerate(_debye_polynomials(_DEBYE_TERMS)):
        term = np.polynomial.polynomial.polyval(t, coeffs) * power
        series_i += term
        series_k += term if k % 2 == 0 else -term
        power = power * inv
    common = -0.5 * np.log(root)
    log_i = -0.5 * np.log(2.0 * np.pi * nu) + common + nu * eta_minus_z + np.log(series_i)
    log_k = 0.5 * np.log(np.pi / (2.0 * nu)) + common - nu * eta_minus_z + np.log(series_k)
    return log_i, log_k


def _mp_log_scaled(kind: str, nu: float, x: float) -> float:
    with mpmath.workdps(_MP_DPS):
        if kind == "i":
            value = mpmath.log(mpmath.besseli(nu, x)) - x
        else:
            value = mpmath.log(mpmath.besselk(nu, x)) + x
        return float(value)


def _log_scaled(kind: str, nu, x) -> np.ndarray:
    nu, x = _check(nu, x)
    out = np.empty(nu.shape, dtype=float)
    flat_nu, flat_x, flat_out = nu.ravel(), x.ravel(), out.reshape(-1)
    if precision_mode() == "extended":
        bad = np.ones(flat_nu.shape, dtype=bool)
    else:
        with np.errstate(all="ignore"):
            raw = special.ive(flat_nu, flat_x) if kind == "i" else special.kve(flat_nu, flat_x)
            bad = ~np.isfinite(raw) | (raw < _SAFE_LO) | (raw > _SAFE_HI)
            flat_out[~bad] = np.log(raw[~bad])
        large = bad & (flat_nu >= _DEBYE_MIN_ORDER)
        if np.any(large):
            log_i, log_k = _debye_log_scaled(flat_nu[large], flat_x[large])
            flat_out[large] = log_i if kind == "i" else log_k
            bad &= ~large
    for idx in np.flatnonzero(bad):
        n, xv = float(flat_nu[idx]), float(flat_x[idx])
        try:
            flat_out[idx] = _mp_log_scaled(kind, n, xv)
        except (ValueError, mpmath.libmp.NoConvergence):
            # mpmath's hypergeometric series can stall for huge order and argument
            if n < _DEBYE_MIN_ORDER:
                raise
            log_i, log_k = _debye_log_scaled(np.array([n]), np.array([xv]))
            flat_out[idx] = (log_i if kind == "i" else log_k)[0]
    return out


def log_bessel_i_scaled(nu, x) -> np.ndarray:
    """``log(e^{-x} I_ν(x))``, elementwise."""
    return _log_scaled("i", nu, x)


def log_bessel_k_scaled(nu, x) -> np.ndarray:
    """``log(e^{x} K_ν(x))``, elementwise."""
    return _log_scaled("k", nu, x)


def _finish(log_value, name):
    log_value = np.asarray(log_value)
    if np.any(log_value > 709.78):
        raise OverflowError(f"{name} is not representable in double precision")
    with np.errstate(under="ignore"):
        value = np.exp(log_value)
    return float(value) if value.ndim == 0 else value


def bessel_i(nu, x, scaled: bool = False):
    """Modified Bessel function of the first kind ``I_ν(x)`` for real ``ν ≥ 0``.

    Parameters
    ----------
    nu : float or array_like
        Non-negative order.
    x : float or array_like
        Positive argument.
    scaled : bool
        Return ``e^{-x} I_ν(x)`` instead.

    Raises
    ------
    DomainError
        If ``x <= 0`` or ``nu < 0``.
    OverflowError
        If the requested value exceeds the double range.
    """
    log_value = log_bessel_i_scaled(nu, x)
    if not scaled:
        log_value = log_value + np.asarray(x, dtype=float)
    return _finish(log_value, "I_nu(x)")


def bessel_k(nu, x, scaled: bool = False):
    """Modified Bessel function of the second kind ``K_ν(x)``; ``scaled`` gives ``e^{x} K_ν(x)``."""
    log_value = log_bessel_k_scaled(nu, x)
    if not scaled:
        log_value = log_value - np.asarray(x, dtype=float)
    return _finish(log_value, "K_nu(x)")


def log_derivs(nu, x) -> LogDerivs:
    """Logarithmic derivatives ``I'_ν/I_ν`` and ``K'_ν/K_ν``."""
    nu, x = _check(nu, x)
    li = log_bessel_i_scaled(nu, x)
    li_up = log_bessel_i_scaled(nu + 1.0, x)
    lk = log_bessel_k_scaled(nu, x)
    lk_down = log_bessel_k_scaled(np.abs(nu - 1.0), x)
    ratio = nu / x
    i_val = np.exp(li_up - li) + ratio
    k_val = -np.exp(lk_down - lk) - ratio
    if i_val.ndim == 0:
        return LogDerivs(float(i_val), float(k_val))
    return LogDerivs(i_val, k_val)


# --- Lambert W, lower branch ---------------------------------------------------------

_INV_E = math.exp(-1.0)


def lambert_w_minus1(x: float, tol: float = 1e-13) -> float:
    """Lower real branch ``W_{-1}(x)`` for ``-1/e <= x < 0``.

    Halley iteration from the branch-point series (near ``-1/e``) or the
    logarithmic asymptote (near ``0``), followed by three polishing steps.
    """
    x = float(x)
    if not (x < 0.0) or x < -_INV_E * (1.0 + 1e-15):
        raise DomainError("W_{-1} is real only on [-1/e, 0)")
    if x <= -_INV_E:
        return -1.0
    if x < -0.25:
        p = -math.sqrt(max(2.0 * (1.0 + math.e * x), 0.0))
        w = -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p ** 3
    else:
        l1 = math.log(-x)
        l2 = math.log(-l1)
        w = l1 - l2 + l2 / l1
    polish = 3
    for _ in range(100):
        ew = math.exp(w)
        f = w * ew - x
        converged = abs(f) <= tol * abs(x)
        if converged:
            polish -= 1
            if polish < 0 or f == 0.0:
                break
        wp1 = w + 1.0
        if wp1 == 0.0:
            break
        step = f / (ew * wp1 - (w + 2.0) * f / (2.0 * wp1))
        w_new = w - step
        if w_new > -1.0:
            # stay on the lower branch
            w_new = 0.5 * (w - 1.0)
        if w_new == w:
            break
        w = w_new
    return w


def script_w(x: float) -> float:
    """Smallest root ``y ∈ (0, 1/e]`` of ``y ln y = -x``, i.e. ``-x / W_{-1}(-x)``.

    Raises
    ------
    NoSolution
        When ``x > 1/e``; values within 1e-14 above the boundary are clamped to it.
    """
    x = float(x)
    if not x > 0.0:
        raise DomainError("argument must be positive")
    if x > _INV_E:
        if x - _INV_E > 1e-14:
            raise NoSolution(f"y ln y = -{x:g} has no solution (x > 1/e)")
        x = _INV_E
    if x == _INV_E:
        return _INV_E
    return -x / lambert_w_minus1(-x)
