import math

import numpy as np
import pytest

from cylcp.materials import (
    HBAR_C,
    Kind,
    PermittivityModel,
    atom_preset,
    delta,
    epsilon,
    material_preset,
    matsubara_energy,
    polarizability,
    scales,
    thermal_wavelength,
    xi2_susceptibility,
)

ALL_PRESETS = ["silica", "good-conductor", "poor-conductor", "good-superconductor",
               "poor-superconductor"]
XI_GRID = np.geomspace(1e-6, 1e3, 400)


def test_silica_static_permittivity():
    assert epsilon(material_preset("silica"), 0.0) == pytest.approx(2.0984, rel=1e-14)


def test_superconductor_at_plasma_frequency():
    sc = PermittivityModel(Kind.SUPERCONDUCTOR, eps_inf=1.0, omega_p=3.3)
    assert epsilon(sc, 3.3) == pytest.approx(2.0, rel=1e-15)


@pytest.mark.parametrize("name", ["good-conductor", "poor-conductor", "good-superconductor"])
def test_conductor_static_permittivity_is_infinite(name):
    assert epsilon(material_preset(name), 0.0) == math.inf
    assert delta(material_preset(name), 0.0) == 0.0


def test_delta_of_two():
    sc = PermittivityModel(Kind.SUPERCONDUCTOR, eps_inf=1.0, omega_p=2.0)
    assert delta(sc, 2.0) == pytest.approx(1.0, rel=1e-15)


def test_superconductor_delta_is_linear():
    sc = material_preset("good-superconductor")
    lam_p = scales(sc).lambda_p
    np.testing.assert_allclose(delta(sc, XI_GRID), lam_p / HBAR_C * XI_GRID, rtol=1e-13)


def test_ohmic_delta_small_frequency():
    m = material_preset("good-conductor")
    lam_d = scales(m).lambda_D
    ratios = [delta(m, xi) / math.sqrt(lam_d / HBAR_C * xi) for xi in m.gamma * np.array([1e-2, 1e-4])]
    assert abs(ratios[1] - 1) < 1e-4
    assert abs(ratios[1] - 1) < abs(ratios[0] - 1)


def test_silica_delta0():
    sil = material_preset("silica")
    assert scales(sil).delta0 == pytest.approx(1 / math.sqrt(1.0984), rel=1e-14)
    assert scales(sil).delta0 == pytest.approx(0.9541, abs=1e-4)
    assert delta(sil, 0.0) == pytest.approx(scales(sil).delta0, rel=1e-14)


def test_good_conductor_lengths():
    assert scales(material_preset("good-conductor")).lambda_D == pytest.approx(0.02436, rel=1e-3)
    assert scales(material_preset("good-superconductor")).lambda_p == pytest.approx(21.93, rel=1e-3)


def test_scales_fields_match_kind():
    sil = scales(material_preset("silica"))
    assert sil.xi0 == 10.0 and sil.lambda_D is None and sil.lambda_p is None
    ohm = scales(material_preset("poor-conductor"))
    assert ohm.xi0 == 0.118 and ohm.delta0 is None and ohm.lambda_p is None
    sc = scales(material_preset("poor-superconductor"))
    assert sc.xi0 == pytest.approx(0.75 / math.sqrt(2.7)) and sc.lambda_D is None
    assert scales(material_preset("good-superconductor")).xi0 == math.inf


@pytest.mark.parametrize("name", ALL_PRESETS)
def test_monotonicity(name):
    m = material_preset(name)
    eps = epsilon(m, XI_GRID)
    d = delta(m, XI_GRID)
    assert np.all(eps >= 1.0)
    assert np.all(np.diff(eps) < 0)
    assert np.all(np.diff(d) > 0)


@pytest.mark.parametrize("base", ["good", "poor"])
def test_superconductor_is_dissipationless_ohmic(base):
    ohm = material_preset(f"{base}-conductor")
    sc = material_preset(f"{base}-superconductor")
    assert sc.kind is Kind.SUPERCONDUCTOR and sc.gamma == 0.0
    direct = ohm.eps_inf + ohm.omega_p ** 2 / (XI_GRID * XI_GRID + 0.0 * XI_GRID)
    np.testing.assert_array_equal(epsilon(sc, XI_GRID), direct)


def test_xi2_susceptibility_limits():
    assert xi2_susceptibility(material_preset("good-superconductor"), 0.0) == pytest.approx(81.0)
    assert xi2_susceptibility(material_preset("good-conductor"), 0.0) == 0.0
    m = material_preset("silica")
    assert xi2_susceptibility(m, 2.0) == pytest.approx(4.0 * (epsilon(m, 2.0) - 1.0), rel=1e-14)


def test_negative_frequency_rejected():
    with pytest.raises(ValueError):
        epsilon(material_preset("silica"), -1.0)


def test_invalid_models():
    with pytest.raises(ValueError):
        PermittivityModel(Kind.OHMIC, eps_inf=1.0, omega_p=9.0, gamma=0.0)
    with pytest.raises(ValueError):
        PermittivityModel(Kind.DIELECTRIC, eps_inf=0.5, omega_p=1.0, omega_0=1.0)


def test_polarizability():
    rb = atom_preset("rubidium")
    assert polarizability(rb, 0.0) == 1.0
    assert polarizability(rb, rb.omega_a) == 0.5
    assert rb.lambda_a == pytest.approx(123.3, abs=0.05)


def test_thermal_wavelength():
    assert thermal_wavelength(4.0) == pytest.approx(91.1e3, rel=5e-3)
    assert thermal_wavelength(300.0) == pytest.approx(1.21e3, rel=5e-3)
    assert thermal_wavelength(0.0) == math.inf
    # ξ_n at n = 1 is ħc/λ̄_T
    assert matsubara_energy(1, 4.0) == pytest.approx(HBAR_C / thermal_wavelength(4.0), rel=1e-14)


def test_unknown_preset():
    with pytest.raises(KeyError):
        material_preset("gold")
