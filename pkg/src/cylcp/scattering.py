"""Scattering coefficients of a hollow dielectric or conducting cylinder at imaginary frequency.

Notation
--------
For a point ``(η, ζ, m)`` at separation ``L`` from a shell of outer radius
``R₀ = sL`` and inner radius ``R_i = χR₀`` the Bessel arguments are

    x₀ = ηs         vacuum, outer surface
    b  = η_ε s      medium, outer surface
    a  = η_ε s χ    medium, inner surface
    xᵢ = η s χ      vacuum, inner surface

with ``η_ε = η sqrt(1 + ζ²/Δ²)``.  The material enters only through
``w = 1/ε`` and ``p² = ζ²/Δ² = ξ²(ε-1)(L/ħcη)²``.  Both stay finite for
conductors at ``ξ = 0`` where ``Δ = 0`` and ``ε`` diverges, so no limit needs
special-casing.

The ratio ``ρ = [I(a)/I(b)] / [K(a)/K(b)] ≤ 1`` is assembled from scaled Bessel
logarithms.  Its exponential part ``e^{2(a-b)}`` is applied in log space, so
nothing overflows for large arguments.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import materials
from .materials import HBAR_C, MaterialScales, PermittivityModel
from .special_functions import GAMMA_E_TILDE, log_bessel_i_scaled, log_bessel_k_scaled

_TINY = 1e-300


class DegenerateScattering(ArithmeticError):
    """A denominator of the scattering formulas vanished to working precision."""


@dataclass(frozen=True)
class ShellGeometry:
    R0: float
    Ri: float = 0.0

    def __post_init__(self):
        if not self.R0 > 0:
            raise ValueError("R0 must be positive")
        if not 0.0 <= self.Ri < self.R0:
            raise ValueError("need 0 <= Ri < R0")

    @classmethod
    def from_chi(cls, R0: float, chi: float) -> ShellGeometry:
        return cls(R0, chi * R0)

    @classmethod
    def from_thickness(cls, R0: float, d: float) -> ShellGeometry:
        return cls(R0, R0 - d)

    @property
    def chi(self) -> float:
        return self.Ri / self.R0

    @property
    def d(self) -> float:
        return self.R0 - self.Ri


@dataclass(frozen=True)
class ScatterPoint:
    """Evaluation point; ``eta``, ``zeta`` and ``m`` may be broadcastable arrays.

    ``s`` duplicates ``R0/L`` and is checked against it; ``None`` skips the check.
    """

    eta: np.ndarray | float
    zeta: np.ndarray | float
    s: float | None
    m: np.ndarray | float


@dataclass(frozen=True)
class ScatterCoeffs:
    r_nn: np.ndarray | float
    r_mm: np.ndarray | float
    r_mn: np.ndarray | float


@dataclass(frozen=True)
class AuxiliaryFunctions:
    phi_eps: np.ndarray
    phi_1: np.ndarray
    beta: np.ndarray
    beta_tilde: np.ndarray
    mu: np.ndarray
    pi_21: np.ndarray
    pi_22: np.ndarray
    pi_12: np.ndarray
    pi_0: np.ndarray


def _resolve_s(geom: ShellGeometry, pt: ScatterPoint, L: float) -> float:
    s = geom.R0 / L
    if pt.s is not None and not math.isclose(pt.s, s, rel_tol=1e-12):
        raise ValueError(f"point has s = {pt.s}, but R0/L = {s}")
    return s


def medium_parameters(model: PermittivityModel, eta, zeta, L: float):
    """``(w, p²)`` with ``w = 1/ε`` and ``p² = ζ²/Δ²`` at ``ξ = ζη ħc/L``."""
    eta = np.asarray(eta, dtype=float)
    zeta = np.asarray(zeta, dtype=float)
    xi = zeta * eta * HBAR_C / L
    w = np.asarray(materials.inverse_epsilon(model, xi))
    p2 = np.asarray(materials.xi2_susceptibility(model, xi)) * (L / (HBAR_C * eta)) ** 2
    return w, p2


def _bessel_block(m, x):
    """Scaled logs of I_m, K_m and the logarithmic derivatives at ``x``."""
    li = log_bessel_i_scaled(m, x)
    lk = log_bessel_k_scaled(m, x)
    ratio = m / x
    di = np.exp(log_bessel_i_scaled(m + 1.0, x) - li) + ratio
    dk = -np.exp(log_bessel_k_scaled(np.abs(m - 1.0), x) - lk) - ratio
    return li, lk, di, dk


class _State:
    """Intermediate quantities shared by the auxiliaries and the coefficients."""

    def __init__(self, geom, model, eta, zeta, m, L):
        s = geom.R0 / L
        chi = geom.chi
        eta, zeta, m = np.broadcast_arrays(np.asarray(eta, float), np.asarray(zeta, float),
                                           np.asarray(m, float))
        if np.any(~(eta > 0)):
            raise ValueError("eta must be positive")
        if np.any((zeta < 0) | (zeta > 1)):
            raise ValueError("zeta must lie in [0, 1]")
        if np.any(~(m >= 0)):
            raise ValueError("m must be non-negative")
        w, p2 = medium_parameters(model, eta, zeta, L)
        self.m, self.zeta, self.w, self.chi = m, zeta, w, chi
        one_minus_z2 = 1.0 - zeta * zeta
        self.ratio = np.sqrt(1.0 + p2)                          # η_ε / η
        self.tau2 = p2 * one_minus_z2 * (1.0 - w)               # T² w
        self.tw = zeta * np.sqrt(one_minus_z2) * (1.0 - w)      # T w, T = ζ sqrt(1-ζ²)/Δ²
        x0 = eta * s
        b = x0 * self.ratio
        self.b = b
        _, _, self.i_x0, self.k_x0 = _bessel_block(m, x0)
        li_b, lk_b, self.i_b, self.k_b = _bessel_block(m, b)
        self.shell = chi > 0.0
        if self.shell:
            a = b * chi
            xi_in = x0 * chi
            li_a, lk_a, self.i_a, self.k_a = _bessel_block(m, a)
            _, _, self.i_xin, _ = _bessel_block(m, xi_in)
            self.a = a
            self.log_rho = (li_a - li_b) - (lk_a - lk_b) + 2.0 * (a - b)


@dataclass
class _ShellTerms:
    """Shell quantities that enter the coefficients (all trivial for a full cylinder)."""

    phi_1: np.ndarray
    phi_e: np.ndarray
    beta: np.ndarray
    beta_t: np.ndarray
    mu: np.ndarray
    a2d: np.ndarray      # A²/D
    c: np.ndarray        # C
    X_i: np.ndarray
    X_k: np.ndarray
    w: np.ndarray

    @property
    def n_pi(self):
        return 1.0 + self.a2d - 2.0 * self.c

    def bracket(self, x_first, x_second):
        """``[β - 𝕩⁽ⁱ⁾][β - w 𝕩⁽ʲ⁾]`` numerator of ``Π^{ij}``."""
        return (self.beta - x_first) * (self.beta - self.w * x_second)


def _shell_terms(st: _State) -> _ShellTerms:
    ratio, w, m = st.ratio, st.w, st.m
    X_i = ratio * st.i_x0 / st.i_b
    X_k = ratio * st.k_x0 / st.i_b
    if not st.shell:
        one = np.ones_like(X_i)
        zero = np.zeros_like(X_i)
        return _ShellTerms(one, one, one, one, one, zero, zero, X_i, X_k, w)
    rho = np.exp(st.log_rho)
    one_minus_rho = -np.expm1(st.log_rho)
    if np.any(np.abs(one_minus_rho) < _TINY):
        raise DegenerateScattering("shell too thin: 1 - ρ vanished")
    kb_ib = st.k_b / st.i_b
    ia_ka = st.i_a / st.k_a
    beta = (1.0 - kb_ib * rho) / one_minus_rho
    beta_t = (1.0 - ia_ka * rho) / one_minus_rho
    mu = (1.0 - ia_ka * kb_ib * rho) / one_minus_rho
    # μ - β̃β in factorized form, free of cancellation
    mu_minus = -rho * (1.0 - ia_ka) * (1.0 - kb_ib) / one_minus_rho ** 2
    Z = ratio * st.i_xin / st.k_a
    den_1 = beta_t - Z
    den_e = beta_t - w * Z
    d_hat = den_1 * den_e
    if np.any(np.abs(d_hat) < _TINY):
        raise DegenerateScattering("vanishing auxiliary denominator")
    phi_1 = (mu - beta * Z) / den_1
    phi_e = (mu - w * beta * Z) / den_e
    ma_over_ka = np.where(m > 0, (m / st.a) / st.k_a, 0.0)
    a2d = st.tau2 * ma_over_ka ** 2 / d_hat
    c = (st.i_b / st.k_a) * mu_minus / (st.chi * d_hat)
    return _ShellTerms(phi_1, phi_e, beta, beta_t, mu, a2d, c, X_i, X_k, w)


def _out(arr):
    arr = np.asarray(arr)
    return float(arr) if arr.ndim == 0 else arr


def auxiliary_functions(geom: ShellGeometry, model: PermittivityModel, pt: ScatterPoint,
                        L: float) -> AuxiliaryFunctions:
    """Shell auxiliaries Φ^(ε), Φ^(1), β, β̃, μ, Π^21, Π^22, Π^12, Π^0.

    All of them equal one for a full cylinder (``R_i = 0``).  The Π functions
    are returned as defined; they can be singular where ``Φ^(1) - 𝕩`` vanishes
    (e.g. ``ζ → 0``), which is why :func:`coefficients` never divides by them.
    """
    _resolve_s(geom, pt, L)
    st = _State(geom, model, pt.eta, pt.zeta, pt.m, L)
    sh = _shell_terms(st)
    w = st.w
    n_pi = sh.n_pi
    e_i, e_k = sh.phi_e - w * sh.X_i, sh.phi_e - w * sh.X_k
    f_i, f_k = sh.phi_1 - sh.X_i, sh.phi_1 - sh.X_k
    with np.errstate(divide="ignore", invalid="ignore"):
        pi_21 = n_pi / (1.0 + sh.a2d * sh.bracket(sh.X_k, sh.X_i) / (f_k * e_i))
        pi_22 = n_pi / (1.0 + sh.a2d * sh.bracket(sh.X_k, sh.X_k) / (f_k * e_k))
        pi_12 = n_pi / (1.0 + sh.a2d * sh.bracket(sh.X_i, sh.X_k) / (f_i * e_k))
        pi_0 = n_pi / (1.0 + sh.a2d - sh.c)
    if not st.shell:
        pi_21 = pi_22 = pi_12 = pi_0 = np.ones_like(n_pi)
    return AuxiliaryFunctions(*(_out(v) for v in (
        sh.phi_e, sh.phi_1, sh.beta, sh.beta_t, sh.mu, pi_21, pi_22, pi_12, pi_0)))


def _coefficients_raw(geom, model, eta, zeta, m, L):
    """The three coefficients with every Π cleared from the denominators.

    Multiplying the numerator and denominator of each coefficient by
    ``N_Π F_k`` (or ``N_Π Ê_k``) leaves the common denominator

        D = Ê_k F_k + (A²/D̂) [β - 𝕜][β - w𝕜] + N_Π τ² Q²,

    which stays regular where individual Π functions hit 0/0.
    """
    st = _State(geom, model, eta, zeta, m, L)
    sh = _shell_terms(st)
    w = st.w
    e_i, e_k = sh.phi_e - w * sh.X_i, sh.phi_e - w * sh.X_k
    f_i, f_k = sh.phi_1 - sh.X_i, sh.phi_1 - sh.X_k
    q = np.where(st.m > 0, (st.m / st.b) / st.i_b, 0.0)
    tq2 = sh.n_pi * st.tau2 * q * q
    den = e_k * f_k + sh.a2d * sh.bracket(sh.X_k, sh.X_k) + tq2
    if np.any(np.abs(den) < _TINY):
        raise DegenerateScattering("vanishing coefficient denominator")
    r_nn = (e_i * f_k + sh.a2d * sh.bracket(sh.X_k, sh.X_i) + tq2) / den
    r_mm = (f_i * e_k + sh.a2d * sh.bracket(sh.X_i, sh.X_k) + tq2) / den
    r_mn = -(1.0 + sh.a2d - sh.c) * st.tw * q * (sh.X_i - sh.X_k) / den
    return r_nn, r_mm, r_mn


def coefficients(geom: ShellGeometry, model: PermittivityModel, pt: ScatterPoint,
                 L: float) -> ScatterCoeffs:
    """Exact ``r_m^{NN}``, ``r_m^{MM}``, ``r_m^{MN}`` of the shell; ``m`` may be non-integer."""
    _resolve_s(geom, pt, L)
    r_nn, r_mm, r_mn = _coefficients_raw(geom, model, pt.eta, pt.zeta, pt.m, L)
    return ScatterCoeffs(_out(r_nn), _out(r_mm), _out(r_mn))


def thin_wire_coefficients(geom: ShellGeometry, model: PermittivityModel, pt: ScatterPoint,
                           L: float) -> ScatterCoeffs:
    """Leading small-``s`` forms of the coefficients.

    ``m = 0`` keeps only the NN channel with its logarithmic denominator; all
    ``m ≥ 1`` share the prefactor ``(1-χ^{2m}) / (1 - χ^{2m}/(1+2Δ²)²)``.
    """
    s = _resolve_s(geom, pt, L)
    eta, zeta, m = np.broadcast_arrays(np.asarray(pt.eta, float), np.asarray(pt.zeta, float),
                                       np.asarray(pt.m, float))
    chi2 = geom.chi ** 2
    d2 = np.asarray(materials.delta_squared(model, zeta * eta * HBAR_C / L))
    x = eta * s
    log_term = x * x * np.log(x * GAMMA_E_TILDE)
    r0 = log_term / (log_term - 2.0 * d2 / (1.0 - chi2))
    chi2m = chi2 ** np.where(m > 0, m, 1.0)
    g = 1.0 + 2.0 * d2
    common = (1.0 - chi2m) / (1.0 - chi2m / (g * g)) / g
    z2 = zeta * zeta
    is0 = m == 0
    r_nn = np.where(is0, r0, common * (1.0 - z2))
    r_mm = np.where(is0, 0.0, -common * z2)
    r_mn = np.where(is0, 0.0, -common * zeta * np.sqrt(1.0 - z2))
    return ScatterCoeffs(_out(r_nn), _out(r_mm), _out(r_mn))


def renormalized_scales(geom: ShellGeometry, sc: MaterialScales) -> MaterialScales:
    """Material lengths as seen through a shell of relative inner radius χ."""
    f = 1.0 - geom.chi ** 2
    return MaterialScales(
        xi0=sc.xi0,
        delta0=None if sc.delta0 is None else sc.delta0 / math.sqrt(f),
        lambda_D=None if sc.lambda_D is None else sc.lambda_D / f,
        lambda_p=None if sc.lambda_p is None else sc.lambda_p / math.sqrt(f),
    )
