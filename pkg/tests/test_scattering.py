import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cylcp.materials import delta_squared, material_preset, scales
from cylcp.scattering import (
    ScatterPoint,
    ShellGeometry,
    auxiliary_functions,
    coefficients,
    renormalized_scales,
    thin_wire_coefficients,
)

SILICA = material_preset("silica")
PRESETS = ["silica", "good-conductor", "poor-conductor", "good-superconductor"]
L = 100.0


def thin_wire_deviation(model, geom, L):
    """Largest relative deviation of the exact coefficients from the thin-wire forms."""
    worst = 0.0
    for m in (0, 1, 2):
        for eta in np.linspace(0.5, 2.0, 7):
            for zeta in (0.0, 0.5, 0.9):
                pt = ScatterPoint(eta, zeta, None, m)
                exact = coefficients(geom, model, pt, L)
                approx = thin_wire_coefficients(geom, model, pt, L)
                for a, b in ((exact.r_nn, approx.r_nn), (exact.r_mm, approx.r_mm),
                             (exact.r_mn, approx.r_mn)):
                    worst = max(worst, abs(a / b - 1.0) if b != 0 else abs(a))
    return worst


class TestGeometry:
    def test_derived(self):
        g = ShellGeometry.from_chi(10.0, 0.95)
        assert g.chi == pytest.approx(0.95)
        assert g.d == pytest.approx(0.5)
        assert ShellGeometry.from_thickness(10.0, 0.5).Ri == pytest.approx(g.Ri)

    @pytest.mark.parametrize("R0,Ri", [(0.0, 0.0), (1.0, 1.0), (1.0, -0.1)])
    def test_invalid(self, R0, Ri):
        with pytest.raises(ValueError):
            ShellGeometry(R0, Ri)

    def test_point_s_checked(self):
        g = ShellGeometry(10.0)
        with pytest.raises(ValueError):
            coefficients(g, SILICA, ScatterPoint(1.0, 0.5, 0.2, 1), L)
        coefficients(g, SILICA, ScatterPoint(1.0, 0.5, 0.1, 1), L)


class TestAuxiliary:
    def test_tend_to_one_for_vanishing_core(self):
        g = ShellGeometry(10.0, 1e-8)
        for m in (1, 2.5, 3):
            aux = auxiliary_functions(g, SILICA, ScatterPoint(1.3, 0.4, None, m), L)
            for name, v in vars(aux).items():
                assert v == pytest.approx(1.0, abs=1e-6), name

    def test_order_zero_converges_logarithmically(self):
        # β₀ grows like ln(1/χ); the coefficients still approach the full cylinder
        betas = [auxiliary_functions(ShellGeometry(10.0, 10.0 * chi), SILICA,
                                     ScatterPoint(1.3, 0.4, None, 0), L).beta
                 for chi in (1e-3, 1e-6, 1e-9)]
        assert betas[0] > betas[1] > betas[2] > 1.0

    def test_shell_factor_in_thin_wire_regime(self):
        chi = 0.95
        g = ShellGeometry.from_chi(1e-3 * L, chi)
        for m in (1, 2):
            aux = auxiliary_functions(g, SILICA, ScatterPoint(1.0, 0.5, 1e-3, m), L)
            b_m = (1 + chi ** (2 * m)) / (1 - chi ** (2 * m))
            assert aux.beta == pytest.approx(b_m, rel=0.01)
            assert aux.beta_tilde == pytest.approx(b_m, rel=0.01)
            assert aux.mu == pytest.approx(1.0, rel=0.01)


class TestCoefficients:
    @pytest.mark.parametrize("name", PRESETS)
    @pytest.mark.parametrize("chi", [0.0, 0.5, 0.95])
    def test_no_cross_coupling_at_m0(self, name, chi):
        g = ShellGeometry.from_chi(20.0, chi)
        eta = np.linspace(0.1, 30, 20)[:, None]
        zeta = np.linspace(0.0, 0.99, 9)[None, :]
        c = coefficients(g, material_preset(name), ScatterPoint(eta, zeta, None, 0), L)
        assert np.all(c.r_mn == 0.0)

    def test_full_cylinder_m0_thin_wire(self):
        g = ShellGeometry(1e-4 * L)
        pt = ScatterPoint(1.0, 0.5, None, 0)
        exact = coefficients(g, SILICA, pt, L).r_nn
        assert exact / thin_wire_coefficients(g, SILICA, pt, L).r_nn == pytest.approx(1.0, abs=0.02)

    def test_shell_m1_thin_wire(self):
        g = ShellGeometry.from_chi(1e-4 * L, 0.95)
        pt = ScatterPoint(1.0, 0.5, None, 1)
        exact = coefficients(g, SILICA, pt, L)
        approx = thin_wire_coefficients(g, SILICA, pt, L)
        for a, b in ((exact.r_nn, approx.r_nn), (exact.r_mm, approx.r_mm), (exact.r_mn, approx.r_mn)):
            assert a / b == pytest.approx(1.0, abs=0.02)

    @settings(max_examples=100, deadline=None)
    @given(st.floats(0.05, 40.0), st.floats(0.0, 0.99), st.integers(0, 30),
           st.sampled_from(PRESETS))
    def test_full_cylinder_consistency(self, eta, zeta, m, name):
        model = material_preset(name)
        pt = ScatterPoint(eta, zeta, None, m)
        full = coefficients(ShellGeometry(10.0), model, pt, L)
        tiny = coefficients(ShellGeometry(10.0, 1e-11), model, pt, L)
        for a, b in ((full.r_nn, tiny.r_nn), (full.r_mm, tiny.r_mm), (full.r_mn, tiny.r_mn)):
            assert b == pytest.approx(a, rel=1e-8, abs=1e-300)

    def test_vanishing_thickness_scatters_nothing(self):
        g = ShellGeometry(1e-2 * L, 1e-2 * L * (1 - 1e-9))
        worst = 0.0
        for m in (0, 1, 2):
            for eta in np.linspace(0.5, 2.0, 7):
                for zeta in (0.0, 0.5, 0.9):
                    c = coefficients(g, SILICA, ScatterPoint(eta, zeta, None, m), L)
                    worst = max(worst, abs(c.r_nn), abs(c.r_mm), abs(c.r_mn))
        assert worst <= 1e-6

    def test_real_order_interpolates(self):
        g = ShellGeometry.from_chi(30.0, 0.9)
        vals = [coefficients(g, SILICA, ScatterPoint(2.0, 0.3, None, m), L).r_nn
                for m in (2.0, 2.5, 3.0)]
        assert min(vals[0], vals[2]) <= vals[1] <= max(vals[0], vals[2])

    @pytest.mark.parametrize("name", PRESETS)
    def test_bounded(self, name):
        # advisory bound: a failure here flags the point for review
        g = ShellGeometry.from_chi(50.0, 0.95)
        eta = np.geomspace(0.01, 50, 25)[:, None, None]
        zeta = np.linspace(0.0, 0.99, 12)[None, :, None]
        m = np.array([0, 1, 2, 5, 20, 80])[None, None, :]
        c = coefficients(g, material_preset(name), ScatterPoint(eta, zeta, None, m), L)
        for r in (c.r_nn, c.r_mm, c.r_mn):
            assert np.all(np.abs(r) <= 1 + 1e-9)

    def test_large_argument_is_finite(self):
        g = ShellGeometry.from_chi(1000.0, 0.95)
        c = coefficients(g, SILICA, ScatterPoint(np.array([1.0, 50.0]), 0.5, None, 30), 1.0)
        assert np.all(np.isfinite([c.r_nn, c.r_mm, c.r_mn]))


class TestThinWire:
    def test_perfect_reflection_at_zero_delta(self):
        # ζ = 0 gives Δ = 0 for a conductor
        g = ShellGeometry(1e-3 * L)
        r = thin_wire_coefficients(g, material_preset("good-superconductor"),
                                   ScatterPoint(1.0, 0.0, None, 0), L)
        assert r.r_nn == 1.0 and r.r_mm == 0.0 and r.r_mn == 0.0

    def test_full_cylinder_m1(self):
        g = ShellGeometry(1e-3 * L)
        zeta = 0.6
        r = thin_wire_coefficients(g, SILICA, ScatterPoint(1.2, zeta, None, 1), L)
        d2 = delta_squared(SILICA, zeta * 1.2 * 197.3269804 / L)
        assert r.r_nn == pytest.approx((1 - zeta ** 2) / (1 + 2 * d2), rel=1e-14)

    @settings(max_examples=100, deadline=None)
    @given(st.floats(0.01, 10.0), st.floats(0.01, 0.99), st.integers(1, 6), st.floats(0.0, 0.99))
    def test_common_prefactor(self, eta, zeta, m, chi):
        g = ShellGeometry.from_chi(0.1, chi)
        r = thin_wire_coefficients(g, SILICA, ScatterPoint(eta, zeta, None, m), L)
        a = r.r_nn / (1 - zeta ** 2)
        assert -r.r_mm / zeta ** 2 == pytest.approx(a, rel=1e-12)
        assert -r.r_mn / (zeta * math.sqrt(1 - zeta ** 2)) == pytest.approx(a, rel=1e-12)

    @pytest.mark.parametrize("name", PRESETS)
    def test_oracle_convergence(self, name):
        model = material_preset(name)
        devs = [thin_wire_deviation(model, ShellGeometry.from_chi(s * L, 0.95), L)
                for s in (1e-2, 1e-3, 1e-4)]
        assert devs[0] > devs[1] > devs[2]
        assert devs[2] <= 0.02


class TestRenormalizedScales:
    def test_identity_for_full_cylinder(self):
        sc = scales(material_preset("good-conductor"))
        assert renormalized_scales(ShellGeometry(5.0), sc) == sc

    def test_hollow(self):
        g = ShellGeometry.from_chi(5.0, 0.95)
        ohm = renormalized_scales(g, scales(material_preset("good-conductor")))
        sc = renormalized_scales(g, scales(material_preset("good-superconductor")))
        sil = renormalized_scales(g, scales(SILICA))
        assert ohm.lambda_D == pytest.approx(0.02436 / 0.0975, rel=1e-3)
        assert ohm.lambda_D == pytest.approx(0.2499, abs=2e-4)
        assert sc.lambda_p == pytest.approx(70.23, rel=1e-3)
        assert sil.delta0 == pytest.approx(scales(SILICA).delta0 / math.sqrt(0.0975), rel=1e-14)
