"""Acceptance criteria 1 to 8.

Each test prints one PASS/FAIL line; the lines are collected again in the
``acceptance`` section of the terminal summary.
"""
import math
import time

import numpy as np

from cylcp import asymptotics
from cylcp.free_energy import EvalSettings, free_energy, free_energy_zero_t, integrand_zero_t, kernel
from cylcp.materials import atom_preset, material_preset, thermal_wavelength
from cylcp.quadrature import gauss_jacobi_half, gauss_laguerre, mdl_rule
from cylcp.scattering import ScatterPoint, ShellGeometry, coefficients
from cylcp.special_functions import log_bessel_i_scaled, log_bessel_k_scaled, log_derivs

import oracles
from test_free_energy import trace_ratio
from test_scattering import thin_wire_deviation

RB = atom_preset("rubidium")
SILICA = material_preset("silica")
R0 = 2.0 * RB.lambda_a
SILICA_TUPLE = ("dielectric", 1.49, 7.8, 10.0, 0.9)
LAMBDA_T = thermal_wavelength(4.0)


def two_figures(x):
    return float(f"{x:.1e}")


def test_criterion_1_regime_parameters(verdict):
    good, poor = material_preset("good-conductor"), material_preset("poor-conductor")
    start = time.perf_counter()
    cases = [
        ("s_p good chi=0", asymptotics.regime_parameters(RB, good, ShellGeometry(R0)).s_p, 1.105),
        ("s_p good chi=0.95",
         asymptotics.regime_parameters(RB, good, ShellGeometry.from_chi(R0, 0.95)).s_p, 0.954),
        ("s_D good chi=0", asymptotics.regime_parameters(RB, good, ShellGeometry(R0)).s_D, 0.12e-4),
        ("s_D good chi=0.95",
         asymptotics.regime_parameters(RB, good, ShellGeometry.from_chi(R0, 0.95)).s_D, 1.4e-4),
        ("s_p poor chi=0", asymptotics.regime_parameters(RB, poor, ShellGeometry(R0)).s_p, 0.12),
        ("s_D poor chi=0", asymptotics.regime_parameters(RB, poor, ShellGeometry(R0)).s_D, 0.12),
        ("s_p poor chi=0.95",
         asymptotics.regime_parameters(RB, poor, ShellGeometry.from_chi(R0, 0.95)).s_p, 1.14e-10),
    ]
    elapsed = time.perf_counter() - start
    misses = [f"{name} = {got:.4g} (quoted {want:g})" for name, got, want in cases
              if two_figures(got) != two_figures(want)]
    detail = f"{len(cases) - len(misses)}/{len(cases)} values at 2 s.f., {elapsed:.3f} s"
    if misses:
        detail += "; mismatched: " + ", ".join(misses)
    verdict("criterion 1", not misses and elapsed < 1.0, detail)


def test_criterion_2_thermal_wavelength(verdict):
    cold, warm = thermal_wavelength(4.0), thermal_wavelength(300.0)
    ok = abs(cold / 91.1e3 - 1) <= 5e-3 and abs(warm / 1.21e3 - 1) <= 5e-3
    verdict("criterion 2", ok, f"4 K: {cold / 1e3:.4f} um, 300 K: {warm / 1e3:.4f} um")


def test_criterion_3_mdl_vs_direct(verdict):
    geom = ShellGeometry.from_chi(R0, 0.95)
    mdl_set = EvalSettings(n_eta=10, n_zeta=30, n_m=10, strategy_m="mdl")
    direct_set = EvalSettings(n_eta=10, n_zeta=30, n_m=100, strategy_m="direct")
    start = time.perf_counter()
    worst = 0.0
    for s in np.geomspace(1.0, 100.0, 12):
        L = R0 / s
        mdl = free_energy_zero_t(RB, SILICA, geom, L, mdl_set).f_signed
        direct = free_energy_zero_t(RB, SILICA, geom, L, direct_set).f_signed
        if s <= 10.0:
            worst = max(worst, abs(mdl - direct) / abs(direct))
    slab = oracles.planar_free_energy_ratio(SILICA_TUPLE, RB.omega_a, R0 / 100, thickness=geom.d)
    mdl_dev, direct_dev = abs(mdl / slab - 1), abs(direct / slab - 1)
    elapsed = time.perf_counter() - start
    ok = worst <= 0.01 and mdl_dev <= 0.05 and direct_dev > 0.10 and elapsed < 60
    verdict("criterion 3", ok,
            f"max |MDL-Direct|/|Direct| (s<=10) = {worst:.2e}; at s=100 MDL off slab by "
            f"{mdl_dev:.2%}, Direct(100) by {direct_dev:.1%}; {elapsed:.1f} s")


def _ratios(material, chi, limit, distances, temperature=0.0):
    model = material_preset(material)
    geom = ShellGeometry.from_chi(R0, chi)
    out = []
    for L in distances:
        numeric = free_energy(RB, model, geom, L, temperature).f_signed
        out.append(numeric / asymptotics.evaluate_limit(limit, RB, model, geom, L, temperature))
    return out


SWEEPS = {
    "a": [("silica", 0.95, "dielectric-retarded", R0 * np.geomspace(30, 100, 6), 0.0)],
    "b": [("good-conductor", 0.0, "perfect-retarded", R0 * np.geomspace(30, 100, 6), 0.0)],
    "c": [("poor-conductor", 0.95, "ohmic-retarded", R0 * np.geomspace(50, 200, 6), 0.0)],
    "d": [("silica", 0.95, "dielectric-thermal", LAMBDA_T * np.geomspace(5, 30, 5), 4.0),
          ("good-conductor", 0.95, "conductor-thermal", LAMBDA_T * np.geomspace(5, 30, 5), 4.0)],
}


def test_criterion_4_asymptotes(verdict):
    parts, ok = [], True
    for key, sweeps in SWEEPS.items():
        start = time.perf_counter()
        ratios = [r for args in sweeps for r in _ratios(*args)]
        elapsed = time.perf_counter() - start
        inside = all(0.85 <= r <= 1.15 for r in ratios) and elapsed < 120
        ok &= inside
        parts.append(f"({key}) {'ok' if inside else 'out'} [{min(ratios):.3f}, {max(ratios):.3f}]")
    verdict("criterion 4", ok, "numeric/asymptotic ratios " + "; ".join(parts))


def _slope(temperature, distances):
    geom = ShellGeometry.from_chi(R0, 0.95)
    energy = [abs(free_energy(RB, SILICA, geom, L, temperature).f_absolute) for L in distances]
    return np.polyfit(np.log(distances), np.log(energy), 1)[0]


def test_criterion_5_power_laws(verdict):
    cold = _slope(0.0, R0 * np.geomspace(30, 100, 8))
    warm = _slope(4.0, LAMBDA_T * np.geomspace(5, 30, 8))
    ok = abs(cold + 6.0) <= 0.2 and abs(warm + 5.0) <= 0.2
    verdict("criterion 5", ok, f"slope T=0: {cold:.3f}, T=4 K: {warm:.3f}")


def test_criterion_6_trace(verdict):
    worst = 0.0
    for name, chi, s in (("silica", 0.95, 2.0), ("good-conductor", 0.0, 0.5),
                         ("poor-conductor", 0.5, 5.0)):
        model, geom = material_preset(name), ShellGeometry.from_chi(R0, chi)
        engine = free_energy_zero_t(RB, model, geom, R0 / s,
                                    EvalSettings(n_eta=40, n_zeta=60, n_m=20)).f_signed
        trace = trace_ratio(model, geom, R0 / s, EvalSettings(n_eta=60, n_m=20))
        worst = max(worst, abs(trace / engine - 1))
    verdict("criterion 6", worst <= 1e-3, f"max relative gap {worst:.2e} over 3 configurations")


def _property_checks():
    rng = np.random.default_rng(0)
    checks = {}

    ok = True
    for N in (2, 5, 10, 20):
        lag, jac, mdl = gauss_laguerre(N), gauss_jacobi_half(N), mdl_rule(N, 0.4)
        for k in range(2 * N):
            ok &= math.isclose(lag.apply(lambda x: x ** k), math.gamma(k + 1), rel_tol=1e-10)
        ok &= math.isclose(jac.apply(lambda x: x), 2 * math.sqrt(2) / 3, rel_tol=1e-12)
        ok &= math.isclose(mdl.apply(lambda x: x), math.exp(-0.4) / (1 - math.exp(-0.4)) ** 2,
                           rel_tol=1e-12)
    checks["quadrature exactness"] = ok

    checks["MDL geometric series"] = all(
        math.isclose(mdl_rule(N, mu).apply(np.ones_like), 0.5 / math.tanh(mu / 2), rel_tol=1e-12)
        for mu in rng.uniform(0.05, 5.0, 10) for N in (1, 4, 12))

    ok = True
    for nu, x in zip(rng.uniform(0, 100, 50), np.exp(rng.uniform(-6, 6, 50))):
        d = log_derivs(nu, x)
        log_ik = float(log_bessel_i_scaled(nu, x) + log_bessel_k_scaled(nu, x))
        ok &= math.isclose(x * math.exp(log_ik) * (d.k_val - d.i_val), -1.0, rel_tol=1e-10)
        bound = math.sqrt(1 + (nu / x) ** 2)
        ok &= 0 < d.i_val <= bound * (1 + 1e-12) and d.k_val <= -bound * (1 - 1e-12)
    checks["Bessel Wronskian and bounds"] = ok

    ok = True
    for m, eta, s in zip(rng.uniform(0, 50, 50), rng.uniform(0.01, 50, 50), rng.uniform(1e-3, 10, 50)):
        plain = kernel(m, eta, s)
        if 1e-300 < plain < 1e300:
            ok &= math.isclose(kernel(m, eta, s, scaled=True) * math.exp(-2 * eta), plain,
                               rel_tol=1e-13)
    checks["kernel scaling"] = ok

    geom = ShellGeometry.from_chi(20.0, 0.9)
    c = coefficients(geom, SILICA, ScatterPoint(np.linspace(0.1, 20, 15)[:, None],
                                                np.linspace(0, 0.99, 7)[None, :], None, 0), 100.0)
    checks["no TE/TM mixing at m = 0"] = bool(np.all(c.r_mn == 0.0))

    pt = ScatterPoint(1.3, 0.4, None, 2)
    full = coefficients(ShellGeometry(10.0), SILICA, pt, 100.0)
    core = coefficients(ShellGeometry(10.0, 1e-11), SILICA, pt, 100.0)
    sliver = coefficients(ShellGeometry(10.0, 10.0 * (1 - 1e-9)), SILICA, pt, 100.0)
    checks["chi -> 0 and d -> 0"] = (math.isclose(core.r_nn, full.r_nn, rel_tol=1e-8)
                                     and max(abs(sliver.r_nn), abs(sliver.r_mm)) < 1e-6)

    hollow = ShellGeometry.from_chi(R0, 0.95)
    doubled = type(RB)(RB.omega_a, 2 * RB.alpha0_volume)
    a = free_energy_zero_t(RB, SILICA, hollow, 300.0)
    checks["alpha0 invariance"] = a.f_normalized == free_energy_zero_t(doubled, SILICA, hollow,
                                                                       300.0).f_normalized
    probe = ScatterPoint(np.linspace(0.1, 5, 9), 0.5, None, 1)
    checks["bit-identical repeats"] = (
        a == free_energy_zero_t(RB, SILICA, hollow, 300.0)
        and np.array_equal(integrand_zero_t(RB, SILICA, hollow, 300.0, probe),
                           integrand_zero_t(RB, SILICA, hollow, 300.0, probe)))
    return checks


def test_criterion_7_properties(verdict):
    checks = _property_checks()
    failed = [k for k, v in checks.items() if not v]
    detail = f"{len(checks) - len(failed)}/{len(checks)} invariant families hold"
    if failed:
        detail += "; broken: " + ", ".join(failed)
    verdict("criterion 7", not failed, detail)


def test_criterion_8_thin_wire_oracle(verdict):
    parts, ok = [], True
    for name in ("silica", "good-conductor", "poor-conductor", "good-superconductor"):
        model = material_preset(name)
        devs = [thin_wire_deviation(model, ShellGeometry.from_chi(s * 100.0, 0.95), 100.0)
                for s in (1e-2, 1e-3, 1e-4)]
        ok &= devs[0] > devs[1] > devs[2] and devs[2] <= 0.02
        parts.append(f"{name} " + "/".join(f"{d:.1e}" for d in devs))
    verdict("criterion 8", ok, "max deviation at s=1e-2/1e-3/1e-4: " + ", ".join(parts))
