"""Permittivity models at imaginary frequency, penetration depth and atomic polarizability.

Units: frequencies in eV, lengths in nm, temperatures in K.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from enum import Enum

import numpy as np

HBAR_C = 197.3269804  # eV nm
K_B = 8.617333262e-5  # eV / K
EV_TO_J = 1.602176634e-19


class Kind(str, Enum):
    DIELECTRIC = "dielectric"
    OHMIC = "ohmic"
    SUPERCONDUCTOR = "superconductor"


@dataclass(frozen=True)
class PermittivityModel:
    """Single-resonance permittivity ``ε(iξ)``.

    ``omega_0`` is used only by dielectrics and ``gamma`` is ignored for
    superconductors, which are the dissipationless limit of the ohmic model.
    """

    kind: Kind
    eps_inf: float = 1.0
    omega_p: float = 1.0
    omega_0: float = 0.0
    gamma: float = 0.0
    name: str = field(default="", compare=False)

    def __post_init__(self):
        object.__setattr__(self, "kind", Kind(self.kind))
        if not self.eps_inf >= 1.0:
            raise ValueError("eps_inf must be >= 1")
        if not self.omega_p > 0.0:
            raise ValueError("omega_p must be positive")
        if self.kind is Kind.DIELECTRIC:
            if not self.omega_0 > 0.0:
                raise ValueError("dielectric needs omega_0 > 0")
            if not self.gamma >= 0.0:
                raise ValueError("gamma must be >= 0")
        elif self.kind is Kind.OHMIC:
            if not self.gamma > 0.0:
                raise ValueError("ohmic conductor needs gamma > 0")

    @property
    def is_conductor(self) -> bool:
        return self.kind is not Kind.DIELECTRIC

    def as_superconductor(self) -> PermittivityModel:
        """Same parameters with the damping switched off."""
        return replace(self, kind=Kind.SUPERCONDUCTOR, gamma=0.0, omega_0=0.0)

    def _denominator(self, xi):
        # ε(iξ) = ε_∞ + ω_p² / D(ξ)
        if self.kind is Kind.DIELECTRIC:
            return xi * xi + self.gamma * xi + self.omega_0 ** 2
        if self.kind is Kind.OHMIC:
            return xi * xi + self.gamma * xi
        return xi * xi


@dataclass(frozen=True)
class AtomModel:
    """Single-oscillator polarizability ``α(iξ) = α₀ ω_a² / (ω_a² + ξ²)``.

    ``alpha0_volume`` is ``α₀ / (4π ε₀)`` in nm³ and is only needed for
    absolute energies.
    """

    omega_a: float
    alpha0_volume: float | None = None
    name: str = field(default="", compare=False)

    def __post_init__(self):
        if not self.omega_a > 0.0:
            raise ValueError("omega_a must be positive")
        if self.alpha0_volume is not None and not self.alpha0_volume > 0.0:
            raise ValueError("alpha0_volume must be positive")

    @property
    def lambda_a(self) -> float:
        return HBAR_C / self.omega_a


@dataclass(frozen=True)
class MaterialScales:
    xi0: float
    delta0: float | None = None
    lambda_D: float | None = None
    lambda_p: float | None = None


def _nonneg(xi):
    xi = np.asarray(xi, dtype=float)
    if np.any(~(xi >= 0.0)):
        raise ValueError("imaginary frequency must be non-negative")
    return xi


def _out(value):
    return float(value) if np.ndim(value) == 0 else value


def epsilon(model: PermittivityModel, xi):
    """``ε(iξ)``; conductors at ``ξ = 0`` give ``inf``."""
    xi = _nonneg(xi)
    den = model._denominator(xi)
    with np.errstate(divide="ignore"):
        value = model.eps_inf + np.where(den > 0.0, model.omega_p ** 2 / np.where(den > 0, den, 1.0), np.inf)
    return _out(value)


def delta_squared(model: PermittivityModel, xi):
    """``Δ² = 1/(ε - 1)``, written so that conductors give exactly 0 at ``ξ = 0``."""
    xi = _nonneg(xi)
    den = model._denominator(xi)
    return _out(den / ((model.eps_inf - 1.0) * den + model.omega_p ** 2))


def delta(model: PermittivityModel, xi):
    """Relative penetration depth ``Δ(iξ) = 1/sqrt(ε(iξ) - 1)``."""
    return _out(np.sqrt(delta_squared(model, xi)))


def inverse_epsilon(model: PermittivityModel, xi):
    """``1/ε(iξ)``, finite (zero) where ``ε`` diverges."""
    xi = _nonneg(xi)
    den = model._denominator(xi)
    return _out(den / (model.eps_inf * den + model.omega_p ** 2))


def xi2_susceptibility(model: PermittivityModel, xi):
    """``ξ² (ε(iξ) - 1)`` in eV², continuous at ``ξ = 0``.

    The limit is ``ω_p²`` for a superconductor and ``0`` otherwise.
    """
    xi = _nonneg(xi)
    background = (model.eps_inf - 1.0) * xi * xi
    wp2 = model.omega_p ** 2
    if model.kind is Kind.DIELECTRIC:
        return _out(background + wp2 * xi * xi / model._denominator(xi))
    if model.kind is Kind.OHMIC:
        return _out(background + wp2 * xi / (xi + model.gamma))
    return _out(background + wp2 * np.ones_like(xi))


def scales(model: PermittivityModel) -> MaterialScales:
    """Low-frequency crossover ``ξ₀`` and the matching length or ``Δ₀``."""
    if model.kind is Kind.DIELECTRIC:
        d0 = 1.0 / math.sqrt(model.eps_inf - 1.0 + (model.omega_p / model.omega_0) ** 2)
        return MaterialScales(xi0=model.omega_0, delta0=d0)
    if model.kind is Kind.OHMIC:
        return MaterialScales(xi0=model.gamma, lambda_D=HBAR_C * model.gamma / model.omega_p ** 2)
    xi0 = math.inf if model.eps_inf == 1.0 else model.omega_p / math.sqrt(model.eps_inf - 1.0)
    return MaterialScales(xi0=xi0, lambda_p=HBAR_C / model.omega_p)


def polarizability(atom: AtomModel, xi):
    """``α(iξ)/α₀``."""
    xi = _nonneg(xi)
    wa2 = atom.omega_a ** 2
    return _out(wa2 / (wa2 + xi * xi))


def thermal_wavelength(temperature: float) -> float:
    """Reduced Wien wavelength ``ħc / (2π k_B T)`` in nm (``inf`` at ``T = 0``)."""
    if temperature < 0:
        raise ValueError("temperature must be non-negative")
    if temperature == 0:
        return math.inf
    return HBAR_C / (2.0 * math.pi * K_B * temperature)


def matsubara_energy(n, temperature: float):
    """``ħ ξ_n = 2π n k_B T`` in eV."""
    return 2.0 * math.pi * K_B * temperature * np.asarray(n, dtype=float)


# Static polarizability volume of Rb, 318.8 atomic units (a₀³ = 1.48185e-4 nm³).
_RB_ALPHA0_NM3 = 318.8 * 1.48184711e-4

MATERIAL_PRESETS = {
    "silica": PermittivityModel(Kind.DIELECTRIC, eps_inf=1.49, omega_p=7.8, omega_0=10.0, gamma=0.9,
                                name="silica"),
    "good-conductor": PermittivityModel(Kind.OHMIC, eps_inf=1.0, omega_p=9.0, gamma=0.01,
                                        name="good-conductor"),
    "poor-conductor": PermittivityModel(Kind.OHMIC, eps_inf=3.7, omega_p=0.75, gamma=0.118,
                                        name="poor-conductor"),
}
for _base in ("good", "poor"):
    MATERIAL_PRESETS[f"{_base}-superconductor"] = replace(
        MATERIAL_PRESETS[f"{_base}-conductor"].as_superconductor(), name=f"{_base}-superconductor")

ATOM_PRESETS = {
    "rubidium": AtomModel(omega_a=1.6, alpha0_volume=_RB_ALPHA0_NM3, name="rubidium"),
}


def material_preset(name: str) -> PermittivityModel:
    try:
        return MATERIAL_PRESETS[name]
    except KeyError:
        raise KeyError(f"unknown material preset {name!r}; known: {sorted(MATERIAL_PRESETS)}") from None


def atom_preset(name: str) -> AtomModel:
    try:
        return ATOM_PRESETS[name]
    except KeyError:
        raise KeyError(f"unknown atom preset {name!r}; known: {sorted(ATOM_PRESETS)}") from None
