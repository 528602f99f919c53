"""Closed-form limits of the free energy and the regime parameters that delimit them.

Every limit is returned as ``F/|F₀|``, negative for attraction, where ``F₀`` is
the retarded perfect-plane energy at the same separation.  This matches
:attr:`cylcp.free_energy.PotentialResult.f_signed`, so numeric/asymptotic
ratios need no further conversion.  Internally ``α₀/ε₀ = 4πV`` is evaluated
with ``V = 1`` since every limit is linear in ``α₀``.

``η_[j]`` denotes the peak of ``η^j K₀²(η)``.  All printed constants use the
approximation ``(j-1)/2`` unless ``exact_peaks=True``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np
from scipy import optimize

from . import materials
from .free_energy import EvalSettings, NORMALIZATION, _log_dk, _tensor_rules
from .materials import HBAR_C, K_B, AtomModel, Kind, PermittivityModel
from .quadrature import gauss_laguerre
from .scattering import ScatterPoint, ShellGeometry, renormalized_scales, thin_wire_coefficients
from .special_functions import GAMMA_E_TILDE, NoSolution, log_bessel_k_scaled, log_derivs, script_w

_FREQ_NODES = 64
_ALPHA_OVER_EPS0 = 4.0 * math.pi


class KindMismatch(ValueError):
    """The requested limit does not apply to this kind of material."""


class ThinWireRegime(str, Enum):
    NONRETARDED = "NonRetarded"
    RETARDED = "Retarded"


class ConductorLimit(str, Enum):
    PERFECT_NR = "PerfectNR"
    SUPER_NR = "SuperNR"
    OHMIC_NR = "OhmicNR"
    SUPER_RET = "SuperRet"
    PERFECT_RET = "PerfectRet"
    OHMIC_RET = "OhmicRet"


class GatedValue(float):
    """A limit value with the validity notes that applied when it was computed.

    Behaves as a plain ``float``; ``notes`` lists every gate that failed.
    """

    notes: tuple[str, ...]

    def __new__(cls, value, notes=()):
        obj = super().__new__(cls, value)
        obj.notes = tuple(notes)
        return obj


@dataclass(frozen=True)
class SlabLimits:
    nonretarded_halfspace: float
    retarded_perfect: float


@dataclass(frozen=True)
class LimitNote:
    name: str
    valid: bool | None
    note: str


@dataclass(frozen=True)
class RegimeReport:
    lambda_a: float
    lambda_T: float
    s0: float | None = None
    s_p: float | None = None
    s_D: float | None = None
    xi_L: float | None = None
    eta_peaks: dict = field(default_factory=dict)
    applicable_limits: list = field(default_factory=list)
    conditions: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        """JSON-ready view; non-finite values (unbounded regimes) become ``None``."""
        def fin(v):
            return v if v is None or math.isfinite(v) else None

        return {
            "lambda_a": self.lambda_a,
            "lambda_T": fin(self.lambda_T),
            "s0": fin(self.s0),
            "s_p": fin(self.s_p),
            "s_D": fin(self.s_D),
            "xi_L": fin(self.xi_L),
            "eta_peaks": {str(k): v for k, v in self.eta_peaks.items()},
            "conditions": dict(self.conditions),
            "applicable_limits": [{"name": n.name, "valid": n.valid, "note": n.note}
                                  for n in self.applicable_limits],
        }


# --- helpers -------------------------------------------------------------------------

def _f0_abs(L: float) -> float:
    """``|F₀|`` in eV per unit polarizability volume."""
    return 3.0 * HBAR_C / (8.0 * math.pi * L ** 4)


def _ratio(energy_per_volume: float, L: float) -> float:
    return energy_per_volume / _f0_abs(L)


def _require_positive(L):
    if not L > 0:
        raise ValueError("L must be positive")


def eta_peak(j: int, exact: bool = False) -> float:
    """Location of the maximum of ``η^j K₀²(η)``."""
    if int(j) != j or j < 2:
        raise ValueError("j must be an integer >= 2")
    if not exact:
        return (j - 1) / 2.0

    def slope(eta):
        return j / eta + 2.0 * log_derivs(0.0, eta).k_val

    return optimize.bisect(slope, 1e-3, 50.0, xtol=1e-10, rtol=4 * np.finfo(float).eps)


def _frequency_integral(atom: AtomModel, g) -> float:
    """``∫₀^∞ dξ (α(iξ)/α₀) g(ξ)`` in eV.

    With ``ξ = ω_a(eᵘ - 1)`` the polarizability tail becomes ``e^{-u}`` and the
    integral is a Gauss-Laguerre sum in ``u`` of a bounded, smooth function.
    """
    rule = gauss_laguerre(_FREQ_NODES)
    u = rule.nodes
    xi = atom.omega_a * np.expm1(u)
    jac = atom.omega_a * np.exp(2.0 * u)
    return float(np.dot(rule.weights, jac * materials.polarizability(atom, xi) * g(xi)))


def polarizability_integral(atom: AtomModel) -> float:
    """``∫₀^∞ dξ α(iξ)/α₀ = (π/2) ω_a`` for the single-oscillator model."""
    return 0.5 * math.pi * atom.omega_a


def _log_arg(s: float, peak: float) -> float:
    """``ln((L/R₀)/(η γ̃))``, the logarithm of every conductor limit."""
    return -math.log(peak * s * GAMMA_E_TILDE)


def _shell_factor(chi2: float, d2):
    """``(1-χ²)/(1 - χ²/(1+2Δ²)²)``, the ``m = 1`` shell prefactor."""
    g = 1.0 + 2.0 * d2
    return (1.0 - chi2) / (1.0 - chi2 / (g * g))


def _scales(model: PermittivityModel, geom: ShellGeometry):
    return renormalized_scales(geom, materials.scales(model))


def _superconducting_scales(model: PermittivityModel, geom: ShellGeometry):
    base = model if model.kind is Kind.SUPERCONDUCTOR else model.as_superconductor()
    return _scales(base, geom)


# --- slab ----------------------------------------------------------------------------

def slab_limits(atom: AtomModel, model: PermittivityModel, L: float) -> SlabLimits:
    """Nonretarded half-space energy and the retarded perfect plane (``-1`` by definition)."""
    _require_positive(L)

    def g(xi):
        return 1.0 / (1.0 + 2.0 * np.asarray(materials.delta_squared(model, xi)))

    integral = _frequency_integral(atom, g)
    energy = -_ALPHA_OVER_EPS0 * integral / (16.0 * math.pi ** 2 * L ** 3)
    return SlabLimits(_ratio(energy, L), -1.0)


# --- dielectric thin wire ------------------------------------------------------------

def _require_kind(model: PermittivityModel, kinds, what: str):
    if model.kind not in kinds:
        raise KindMismatch(f"{what} does not apply to a {model.kind.value} material")


def _dielectric_bracket(chi2: float, d2, m1_weight: float):
    return (1.0 - chi2) / d2 + m1_weight * _shell_factor(chi2, d2) / (1.0 + 2.0 * d2)


def dielectric_thin_wire(atom: AtomModel, model: PermittivityModel, geom: ShellGeometry, L: float,
                         regime: ThinWireRegime | str = ThinWireRegime.RETARDED) -> GatedValue:
    """Thin-wire limit of a dielectric shell, ``∝ R₀²(1-χ²)/L⁵`` or ``/L⁶``."""
    _require_positive(L)
    _require_kind(model, (Kind.DIELECTRIC,), "the dielectric thin-wire limit")
    regime = ThinWireRegime(regime)
    chi2 = geom.chi ** 2
    R0 = geom.R0
    notes = []
    if regime is ThinWireRegime.NONRETARDED:
        integral = _frequency_integral(
            atom, lambda xi: _dielectric_bracket(chi2, np.asarray(materials.delta_squared(model, xi)),
                                                 3.0))
        energy = -9.0 / (512.0 * math.pi) * R0 ** 2 / L ** 5 * _ALPHA_OVER_EPS0 * integral
        if not R0 < L < atom.lambda_a:
            notes.append("outside R0 << L << lambda_a")
    else:
        d2 = materials.scales(model).delta0 ** 2
        bracket = 7.0 * (1.0 - chi2) / d2 + 32.0 * _shell_factor(chi2, d2) / (1.0 + 2.0 * d2)
        energy = -HBAR_C / (60.0 * math.pi ** 2) * _ALPHA_OVER_EPS0 * R0 ** 2 / L ** 6 * bracket
        if not L > max(R0, atom.lambda_a):
            notes.append("outside L >> max(R0, lambda_a)")
    s0 = _s0(model, geom)
    if not R0 / L < s0:
        notes.append(f"s = {R0 / L:.3g} not below s0 = {s0:.3g}")
    return GatedValue(_ratio(energy, L), notes)


# --- conductor thin wire -------------------------------------------------------------

_CONDUCTOR_KINDS = {
    ConductorLimit.PERFECT_NR: (Kind.OHMIC, Kind.SUPERCONDUCTOR),
    ConductorLimit.PERFECT_RET: (Kind.OHMIC, Kind.SUPERCONDUCTOR),
    ConductorLimit.SUPER_NR: (Kind.SUPERCONDUCTOR,),
    ConductorLimit.SUPER_RET: (Kind.SUPERCONDUCTOR,),
    ConductorLimit.OHMIC_NR: (Kind.OHMIC,),
    ConductorLimit.OHMIC_RET: (Kind.OHMIC,),
}


def conductor_thin_wire(atom: AtomModel, model: PermittivityModel, geom: ShellGeometry, L: float,
                        which: ConductorLimit | str, exact_peaks: bool = False) -> GatedValue:
    """Thin-wire limits of a conducting shell.

    ``PerfectNR``/``PerfectRet`` set ``Δ = 0`` and hold for any conductor.
    The ``Super*`` and ``Ohmic*`` forms use the low-frequency penetration
    depth of the matching model, renormalized by the shell thickness.
    """
    _require_positive(L)
    which = ConductorLimit(which)
    _require_kind(model, _CONDUCTOR_KINDS[which], f"the {which.value} limit")
    s = geom.R0 / L
    R0 = geom.R0
    f = 1.0 - geom.chi ** 2
    eta3, eta4 = eta_peak(3, exact_peaks), eta_peak(4, exact_peaks)
    notes = []
    lam_a = atom.lambda_a
    if which in (ConductorLimit.PERFECT_NR, ConductorLimit.SUPER_NR, ConductorLimit.OHMIC_NR):
        ell = _log_arg(s, eta4)
        if not R0 < L < lam_a:
            notes.append("outside R0 << L << lambda_a")
    else:
        ell = _log_arg(s, eta3 if which is not ConductorLimit.OHMIC_RET else eta4)
        if not L > max(R0, lam_a):
            notes.append("outside L >> max(R0, lambda_a)")
    if ell <= 0:
        notes.append("logarithm non-positive: s too large for the thin-wire form")

    if which is ConductorLimit.PERFECT_NR:
        energy = (-9.0 / (256.0 * math.pi) / eta4 ** 2 * _ALPHA_OVER_EPS0
                  * polarizability_integral(atom) / (L ** 3 * ell))
    elif which is ConductorLimit.SUPER_NR:
        lam_p = materials.scales(model).lambda_p
        energy = (-9.0 * HBAR_C / 2.0 ** 10 * R0 / L ** 4 * _ALPHA_OVER_EPS0 / eta4
                  * math.sqrt(f) / lam_p / math.sqrt(2.0 * ell))
    elif which is ConductorLimit.OHMIC_NR:
        lam_d = materials.scales(model).lambda_D
        arg = 2.0 * (lam_d / f) / lam_a * (L / R0 / eta4) ** 2 / ell
        energy = (-9.0 * HBAR_C / (512.0 * math.pi) * _ALPHA_OVER_EPS0 * f / lam_d
                  * R0 ** 2 / L ** 5 * math.log(arg))
    elif which is ConductorLimit.SUPER_RET:
        lam_p = materials.scales(model).lambda_p
        u = 2.0 / f * (lam_p / R0) ** 2 / ell
        root = math.sqrt(1.0 + u)
        energy = (-HBAR_C / (8.0 * math.pi ** 2) * _ALPHA_OVER_EPS0 / (L ** 4 * ell)
                  * (1.0 - (2.0 / 3.0) / (1.0 + root)) / root)
    elif which is ConductorLimit.PERFECT_RET:
        energy = -HBAR_C / (12.0 * math.pi ** 2) * _ALPHA_OVER_EPS0 / (L ** 4 * ell)
        if model.kind is Kind.SUPERCONDUCTOR or model.kind is Kind.OHMIC:
            sp = _s_p(model, geom, exact_peaks)
            if not s < sp:
                notes.append(f"s = {s:.3g} not below s_p = {sp:.3g}")
    else:
        lam_d = materials.scales(model).lambda_D
        bracket = 8.0 * math.log(4.0 * (lam_d / f) / R0 * (L / R0) / eta4 / ell) - 5.0
        energy = (-9.0 * HBAR_C / (2.0 ** 12 * math.pi) * _ALPHA_OVER_EPS0 * f / lam_d
                  * R0 ** 2 / L ** 5 * bracket)
        sd = _s_d(model, geom, exact_peaks)
        if not s < sd:
            notes.append(f"s = {s:.3g} not below s_D = {sd:.3g}")
    if which is ConductorLimit.SUPER_RET:
        sp = _s_p(model, geom, exact_peaks)
        if not s > sp:
            notes.append(f"s = {s:.3g} below s_p = {sp:.3g}: perfect-conductor form applies")
    return GatedValue(_ratio(energy, L), notes)


# --- finite temperature --------------------------------------------------------------

def finite_t_limits(atom: AtomModel, model: PermittivityModel, geom: ShellGeometry, L: float,
                    temperature: float, exact_peaks: bool = False) -> GatedValue:
    """Thermal (``L ≫ λ̄_T``) limit, from the static Matsubara term alone.

    Dielectrics fall off as ``L⁻⁵``.  Every conductor gives the same
    material-independent logarithmic ``L⁻³`` law.
    """
    _require_positive(L)
    if not temperature > 0:
        raise ValueError("temperature must be positive")
    kt = K_B * temperature
    R0 = geom.R0
    chi2 = geom.chi ** 2
    notes = []
    lam_t = materials.thermal_wavelength(temperature)
    if not L > lam_t:
        notes.append("outside L >> lambda_T")
    if model.kind is Kind.DIELECTRIC:
        d2 = materials.scales(model).delta0 ** 2
        energy = (-9.0 * kt / 512.0 * _ALPHA_OVER_EPS0 * R0 ** 2 / L ** 5
                  * _dielectric_bracket(chi2, d2, 6.0))
    else:
        ell = _log_arg(R0 / L, eta_peak(2, exact_peaks))
        energy = -kt / 32.0 * _ALPHA_OVER_EPS0 / (L ** 3 * ell)
    return GatedValue(_ratio(energy, L), notes)


# --- reduced integrals ---------------------------------------------------------------

def eta_cap(s: float, eta_max: float = math.inf) -> float:
    """Upper ``η`` limit of the ``m = 0`` thin-wire kernel.

    ``1/(-ln(ηsγ̃))`` diverges at ``η = 1/(sγ̃)``; this spurious pole is kept
    out of reach by stopping at half that value.
    """
    return min(eta_max, 0.5 / (s * GAMMA_E_TILDE))


def _reduced_terms(model, geom, L, eta, zeta, m):
    """Thin-wire kernel times ``B_m`` for ``m ∈ {0, 1}``, ``e^{2η}`` removed."""
    s = geom.R0 / L
    co = thin_wire_coefficients(geom, model, ScatterPoint(eta, zeta, s, m), L)
    lk = log_bessel_k_scaled(m, eta)
    if m == 0:
        kern = eta ** 3 * np.exp(2.0 * lk) / -np.log(eta * s * GAMMA_E_TILDE)
    else:
        # I_m/K_m(x) ~ 2 (x/2)^{2m} / (m! (m-1)!)
        kern = (2.0 / (math.factorial(m) * math.factorial(m - 1)) * eta ** 3
                * (eta * s / 2.0) ** (2 * m) * np.exp(2.0 * lk))
    ratio = m / eta
    dk = _log_dk(float(m), eta)
    z2 = zeta * zeta
    c2 = 1.0 - z2
    angular = ratio * ratio + dk * dk
    brace = (co.r_nn * (1.0 + c2 * angular) - co.r_mm * z2 * angular
             + 4.0 * co.r_mn * zeta * np.sqrt(c2) * ratio * dk)
    return kern * brace


def thin_wire_free_energy_reduced(atom: AtomModel, model: PermittivityModel, geom: ShellGeometry,
                                  L: float, temperature: float = 0.0, n_eta: int = 40,
                                  n_zeta: int = 30, m_max: int = 1) -> float:
    """Free energy from the ``m ≤ m_max`` thin-wire kernels and coefficients, as ``F/|F₀|``.

    At ``T = 0`` this is the full ``(η, ζ)`` double integral with the small-``s``
    forms of the Bessel ratios and scattering coefficients.  At ``T > 0`` only
    the static Matsubara term (``ζ = 0``) is kept, which is the thermal regime.
    """
    _require_positive(L)
    s = geom.R0 / L
    cap = eta_cap(s)
    orders = range(0, m_max + 1)
    if temperature == 0:
        eta, zeta, w = _tensor_rules(EvalSettings(n_eta=n_eta, n_zeta=n_zeta))
        alpha = materials.polarizability(atom, zeta * eta * HBAR_C / L)
        w = np.where(eta < cap, w * alpha, 0.0)
        total = sum((0.5 if m == 0 else 1.0) * np.sum(w * _reduced_terms(model, geom, L, eta,
                                                                          zeta, m))
                    for m in orders)
        return -NORMALIZATION * float(total)
    lag = gauss_laguerre(n_eta)
    eta = lag.nodes / 2.0
    w = np.where(eta < cap, 0.5 * lag.weights / eta, 0.0)
    zeta = np.zeros_like(eta)
    total = sum((0.5 if m == 0 else 1.0) * np.sum(w * _reduced_terms(model, geom, L, eta, zeta, m))
                for m in orders)
    step = L / materials.thermal_wavelength(temperature)
    return -NORMALIZATION * 0.5 * step * float(total)


# --- regime parameters ---------------------------------------------------------------

def _s0(model, geom):
    if model.kind is not Kind.DIELECTRIC:
        return None
    d0 = _scales(model, geom).delta0
    try:
        return math.sqrt(script_w((2.0 * d0 * GAMMA_E_TILDE) ** 2)) / GAMMA_E_TILDE
    except NoSolution:
        # the bound never binds
        return math.inf


def _s_p(model, geom, exact_peaks=False):
    lam_p = _superconducting_scales(model, geom).lambda_p
    return math.exp(-2.0 * (lam_p / geom.R0) ** 2) / (eta_peak(3, exact_peaks) * GAMMA_E_TILDE)


def _s_d_argument(model, geom):
    lam_d = _scales(model, geom).lambda_D
    return 2.0 * lam_d / geom.R0 * GAMMA_E_TILDE


def _s_d(model, geom, exact_peaks=False):
    try:
        return script_w(_s_d_argument(model, geom)) / (eta_peak(4, exact_peaks) * GAMMA_E_TILDE)
    except NoSolution:
        return math.inf


def xi_l(model: PermittivityModel, geom: ShellGeometry, s: float,
         exact_peaks: bool = False) -> float | None:
    """Frequency where the penetration term overtakes the logarithm of the wire kernel.

    Solves ``Δ²(iξ)/(1-χ²) = -(η_[4]s)²/2 · ln(η_[4]sγ̃)`` by bisection in
    ``ln ξ`` on ``[1e-12, ξ₀]`` eV.  Returns ``None`` if there is no sign
    change, i.e. ``ξ_L > ξ₀``.
    """
    if not model.is_conductor:
        return None
    x = eta_peak(4, exact_peaks) * s
    rhs = -0.5 * x * x * math.log(x * GAMMA_E_TILDE)
    if not rhs > 0:
        return None
    f = 1.0 - geom.chi ** 2
    hi = materials.scales(model).xi0
    if not math.isfinite(hi):
        hi = model.omega_p

    def g(t):
        return materials.delta_squared(model, math.exp(t)) / f - rhs

    lo_t, hi_t = math.log(1e-12), math.log(hi)
    if g(lo_t) * g(hi_t) > 0:
        return None
    return math.exp(optimize.bisect(g, lo_t, hi_t, xtol=1e-10))


def regime_parameters(atom: AtomModel, model: PermittivityModel, geom: ShellGeometry,
                      temperature: float = 0.0, L: float | None = None,
                      exact_peaks: bool = False) -> RegimeReport:
    """Regime boundaries for a given atom, material and shell.

    Dielectrics report ``s₀``.  A bound whose defining equation has no root
    never binds and is reported as ``inf``.  Ohmic conductors report ``s_D`` and, through
    their dissipationless counterpart, ``s_p``; superconductors report ``s_p``.
    ``ξ_L`` needs a separation and is only filled in when ``L`` is given.
    """
    lam_t = materials.thermal_wavelength(temperature)
    peaks = {j: eta_peak(j, exact_peaks) for j in (2, 3, 4)}
    s = None if L is None else geom.R0 / L
    conditions = {}
    limits = []
    s0 = s_p = s_d = xi = None

    def gate(name, ok, note):
        limits.append(LimitNote(name, ok, note))

    if model.kind is Kind.DIELECTRIC:
        d0 = _scales(model, geom).delta0
        conditions["s0_always_satisfied"] = math.log((2.0 * d0 * GAMMA_E_TILDE) ** 2) >= -1.0
        s0 = _s0(model, geom)
        below = None if s is None else (conditions["s0_always_satisfied"] or s < s0)
        gate("dielectric-nonretarded", below, "R0 << L << lambda_a and s << s0")
        gate("dielectric-retarded", below, "L >> max(R0, lambda_a) and s << s0")
        gate("dielectric-thermal", None if L is None else L > lam_t, "L >> lambda_T")
    else:
        s_p = _s_p(model, geom, exact_peaks)
        if model.kind is Kind.OHMIC:
            arg = _s_d_argument(model, geom)
            conditions["s_D_always_satisfied"] = math.log(arg) >= -1.0
            s_d = _s_d(model, geom, exact_peaks)
        gate("perfect-nonretarded", None, "R0 << L << lambda_a, Delta(i omega_a) negligible")
        gate("perfect-retarded", None if s is None else s < s_p, "s << s_p")
        if model.kind is Kind.SUPERCONDUCTOR:
            gate("super-nonretarded", None, "xi_L << xi0")
            gate("super-retarded", None if s is None else s > s_p, "s >~ s_p")
        else:
            ok = None
            if s is not None:
                ok = conditions["s_D_always_satisfied"] or s < s_d
            gate("ohmic-nonretarded", None, "xi_L << min(gamma, omega_a)")
            gate("ohmic-retarded", ok, "s << s_D")
        gate("conductor-thermal", None if L is None else L > lam_t, "L >> lambda_T")
        if s is not None:
            xi = xi_l(model, geom, s, exact_peaks)
    return RegimeReport(lambda_a=atom.lambda_a, lambda_T=lam_t, s0=s0, s_p=s_p, s_D=s_d,
                        xi_L=xi, eta_peaks=peaks, applicable_limits=limits, conditions=conditions)


# --- named registry ------------------------------------------------------------------

def _slab_nr(atom, model, geom, L, T):
    return slab_limits(atom, model, L).nonretarded_halfspace


LIMITS = {
    "slab-nonretarded": _slab_nr,
    "plane-retarded": lambda atom, model, geom, L, T: -1.0,
    "dielectric-nonretarded": lambda atom, model, geom, L, T: dielectric_thin_wire(
        atom, model, geom, L, ThinWireRegime.NONRETARDED),
    "dielectric-retarded": lambda atom, model, geom, L, T: dielectric_thin_wire(
        atom, model, geom, L, ThinWireRegime.RETARDED),
    "perfect-nonretarded": lambda atom, model, geom, L, T: conductor_thin_wire(
        atom, model, geom, L, ConductorLimit.PERFECT_NR),
    "super-nonretarded": lambda atom, model, geom, L, T: conductor_thin_wire(
        atom, model, geom, L, ConductorLimit.SUPER_NR),
    "ohmic-nonretarded": lambda atom, model, geom, L, T: conductor_thin_wire(
        atom, model, geom, L, ConductorLimit.OHMIC_NR),
    "super-retarded": lambda atom, model, geom, L, T: conductor_thin_wire(
        atom, model, geom, L, ConductorLimit.SUPER_RET),
    "perfect-retarded": lambda atom, model, geom, L, T: conductor_thin_wire(
        atom, model, geom, L, ConductorLimit.PERFECT_RET),
    "ohmic-retarded": lambda atom, model, geom, L, T: conductor_thin_wire(
        atom, model, geom, L, ConductorLimit.OHMIC_RET),
    "dielectric-thermal": lambda atom, model, geom, L, T: finite_t_limits(atom, model, geom, L, T),
    "conductor-thermal": lambda atom, model, geom, L, T: finite_t_limits(atom, model, geom, L, T),
    "reduced": lambda atom, model, geom, L, T: thin_wire_free_energy_reduced(
        atom, model, geom, L, T),
}


def evaluate_limit(name: str, atom: AtomModel, model: PermittivityModel, geom: ShellGeometry,
                   L: float, temperature: float = 0.0) -> float:
    """Evaluate a limit from :data:`LIMITS` by name."""
    try:
        fn = LIMITS[name]
    except KeyError:
        raise KeyError(f"unknown limit {name!r}; known: {sorted(LIMITS)}") from None
    if name.endswith("-thermal"):
        kind_ok = (model.kind is Kind.DIELECTRIC) == name.startswith("dielectric")
        if not kind_ok:
            raise KindMismatch(f"{name} does not apply to a {model.kind.value} material")
    return fn(atom, model, geom, L, temperature)
