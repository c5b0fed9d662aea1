"""Curvature, flux, and boundary-relation checks against closed forms."""

import math

import numpy as np
import pytest

from sphereflect.geometry import (
    boundary_convexity,
    boundary_curvature_relations,
    boundary_integral,
    curvature_line_forms_check,
    curvature_report,
    fd_surface_derivative,
    flux,
    fundamental_forms,
    gauss_map_samples,
    gaussian_curvature_identity,
    hopf_quantities,
    injectivity_scan,
    strip_curvature_integral,
    superharmonic_checks,
    total_curvature,
)
from sphereflect.surfaces import (
    SpherePatch,
    catenoid_band,
    critical_catenoid,
    equatorial_disk,
    noncritical_catenoid,
)

T0 = 1.1996786402573889
C0 = 0.46048508825039869
KAPPA = 0.83355655960120434


def grid_points(period=2 * math.pi, y_lo=-T0, y_hi=T0, nx=24, ny=9):
    x = (np.arange(nx) * period / nx)[:, None]
    y = np.linspace(y_lo + 1e-2, y_hi - 1e-2, ny)[None, :]
    return x, y


class DegenerateChart:
    """psi = ((x^2 - y^2)/2, x y, 0): conformal harmonic, psi_x = 0 at 0."""

    period = 2 * math.pi

    def evaluate(self, x, y, dx=0, dy=0):
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        z = x + 1j * y
        d = {0: 0.5 * z * z, 1: z, 2: np.ones_like(z)}[dx + dy]
        d = d * (1j) ** dy
        shape = np.broadcast(x, y).shape
        return np.stack(np.broadcast_arrays(
            np.real(d), np.imag(d), np.zeros(shape)), axis=-1)


# ---------------------------------------------------------------------------
# fundamental forms
# ---------------------------------------------------------------------------

def test_catenoid_forms_match_closed_form():
    band = critical_catenoid()
    x, y = grid_points()
    forms = fundamental_forms(band, x, y)
    cosh = np.cosh(y) * np.ones_like(x)
    assert np.max(np.abs(forms.metric - C0 ** 2 * cosh ** 2)) <= 1e-12
    assert np.max(np.abs(forms.sec_xx + C0)) <= 1e-12
    assert np.max(np.abs(forms.sec_xy)) <= 1e-12
    assert np.max(np.abs(forms.sec_yy - C0)) <= 1e-12
    assert np.max(np.abs(forms.mean_curvature)) <= 1e-12
    k_exact = -1.0 / (C0 ** 2 * cosh ** 4)
    assert np.max(np.abs(forms.gauss_curvature - k_exact)) <= 1e-10
    n_exact = np.stack(np.broadcast_arrays(
        np.cos(x) / cosh, np.sin(x) / cosh, -np.sinh(y) / cosh), axis=-1)
    assert np.max(np.abs(forms.normal - n_exact)) <= 1e-12
    assert forms.frame_residual <= 1e-10


def test_forms_match_finite_difference_oracle():
    # second derivatives and the assembled forms against the independent
    # finite-difference route
    rng = np.random.RandomState(7)
    for surface in (critical_catenoid(), equatorial_disk(2.0)):
        x = rng.uniform(0, 2 * math.pi, 40)
        span = surface.y_hi - surface.y_lo
        y = rng.uniform(surface.y_lo + 0.1 * span, surface.y_hi - 0.1 * span, 40)
        for dxy in ((1, 0), (0, 1), (2, 0), (1, 1), (0, 2)):
            exact = surface.evaluate(x, y, dx=dxy[0], dy=dxy[1])
            approx = fd_surface_derivative(surface, x, y, dx=dxy[0], dy=dxy[1])
            assert np.max(np.abs(exact - approx)) <= 1e-6


def test_sphere_patch_is_detected_as_non_minimal():
    patch = SpherePatch(0.8, -0.9, 0.9)
    x, y = grid_points(y_lo=-0.9, y_hi=0.9)
    forms = fundamental_forms(patch, x, y)
    assert np.max(np.abs(np.abs(forms.mean_curvature) - 1.25)) <= 1e-8
    assert np.max(np.abs(forms.gauss_curvature - 1.0 / 0.64)) <= 1e-8
    assert forms.frame_residual <= 1e-10


def test_branch_point_raises():
    chart = DegenerateChart()
    with pytest.raises(ValueError, match="branch point"):
        fundamental_forms(chart, 0.0, 0.0)
    forms = fundamental_forms(chart, 0.5, 0.2)
    assert np.max(np.abs(forms.mean_curvature)) <= 1e-12


# ---------------------------------------------------------------------------
# Hopf quantities and the curvature identity
# ---------------------------------------------------------------------------

def catenoid_w_samples(band, n=120, seed=3):
    rng = np.random.RandomState(seed)
    x = rng.uniform(0, 2 * math.pi, n)
    y = rng.uniform(band.y_lo + 1e-3, band.y_hi - 1e-3, n)
    return np.exp(y) * np.exp(-1j * x)


def test_hopf_constant_on_critical_catenoid():
    band = critical_catenoid()
    w = catenoid_w_samples(band)
    alpha, beta = hopf_quantities(band, w)
    assert np.max(np.abs(alpha - C0)) <= 1e-10
    assert np.max(np.abs(beta)) <= 1e-10


def test_hopf_constant_discriminates_band_scale():
    band = noncritical_catenoid(0.9)
    w = catenoid_w_samples(band)
    alpha, beta = hopf_quantities(band, w)
    spread = np.max(alpha) - np.min(alpha)
    assert spread <= 1e-10
    assert np.max(np.abs(beta)) <= 1e-10
    assert abs(np.mean(alpha) - band.scale) <= 1e-10
    assert abs(np.mean(alpha) - C0) >= 1e-2


def test_gaussian_curvature_identity():
    band = critical_catenoid()
    w = catenoid_w_samples(band)
    assert gaussian_curvature_identity(band, w) <= 1e-10
    disk = equatorial_disk(2.0)
    wd = catenoid_w_samples(disk)
    assert gaussian_curvature_identity(disk, wd) <= 1e-12


# ---------------------------------------------------------------------------
# boundary circle relations
# ---------------------------------------------------------------------------

def test_boundary_relations_critical_catenoid():
    rel = boundary_curvature_relations(critical_catenoid())
    assert set(rel) == {"gamma1", "gamma2"}
    assert rel["gamma1"]["sigma"] == -1.0
    assert rel["gamma2"]["sigma"] == +1.0
    assert abs(rel["gamma1"]["rho"] - 1.0) <= 1e-12
    assert abs(rel["gamma2"]["rho"] - math.exp(2 * T0)) <= 1e-10
    for name in ("gamma1", "gamma2"):
        assert rel[name]["radial_residual"] <= 1e-10
        assert rel[name]["factor_residual"] <= 1e-10
        assert rel[name]["beta_sup"] <= 1e-10


def test_boundary_relations_disk():
    rel = boundary_curvature_relations(equatorial_disk())
    assert set(rel) == {"gamma1"}
    assert rel["gamma1"]["sigma"] == -1.0
    assert rel["gamma1"]["radial_residual"] <= 1e-10
    assert rel["gamma1"]["factor_residual"] <= 1e-10


def test_boundary_relations_negative_control():
    rel = boundary_curvature_relations(noncritical_catenoid(0.9))
    assert rel["gamma1"]["radial_residual"] >= 1e-2
    assert rel["gamma1"]["factor_residual"] >= 1e-2


# ---------------------------------------------------------------------------
# curvature integrals
# ---------------------------------------------------------------------------

def test_band_curvature_integral_matches_closed_form():
    for t_max in (T0, 3 * T0, 5 * T0):
        band = catenoid_band(t_max)
        value, err = strip_curvature_integral(band, -t_max, t_max)
        assert abs(value + 4 * math.pi * math.tanh(t_max)) <= 1e-8
        assert err <= 1e-8


def test_total_curvature_tail_extrapolates_the_ends():
    band = catenoid_band(3 * T0)
    value, tail = total_curvature(band)
    assert abs(value + 4 * math.pi * math.tanh(3 * T0)) <= 1e-7
    assert tail < 0.0
    assert abs(value + tail + 4 * math.pi) <= 5e-5


def test_plane_total_curvature_is_zero():
    disk = equatorial_disk(2.0)
    value, tail = total_curvature(disk)
    assert abs(value) <= 1e-12
    assert abs(tail) <= 1e-12


# ---------------------------------------------------------------------------
# flux and convexity
# ---------------------------------------------------------------------------

def test_flux_vertical_on_catenoid_circles():
    band = critical_catenoid()
    f1 = flux(band, "gamma1")
    f2 = flux(band, "gamma2")
    assert np.max(np.abs(f1 - [0.0, 0.0, 2 * math.pi * C0])) <= 1e-8
    assert np.max(np.abs(f2 - [0.0, 0.0, -2 * math.pi * C0])) <= 1e-8
    assert np.max(np.abs(f1 + f2)) <= 1e-12


def test_flux_equals_boundary_position_integral():
    # the free-boundary condition turns the conormal flux into the plain
    # boundary integral of the position map
    band = critical_catenoid()
    for name in ("gamma1", "gamma2"):
        assert np.max(np.abs(flux(band, name)
                             - boundary_integral(band, name))) <= 1e-8


def test_disk_flux_vanishes():
    assert np.max(np.abs(flux(equatorial_disk(), "gamma1"))) <= 1e-12


def test_boundary_convexity_indicator():
    band = critical_catenoid()
    expected = C0 * T0 / KAPPA  # geodesic curvature of a radius-kappa circle
    assert abs(expected - 0.6627) <= 1e-4
    for name in ("gamma1", "gamma2"):
        assert abs(boundary_convexity(band, name) - expected) <= 1e-6
    # the disk boundary is a great circle: geodesic, indicator 0
    assert abs(boundary_convexity(equatorial_disk(), "gamma1")) <= 1e-10


# ---------------------------------------------------------------------------
# Gauss map
# ---------------------------------------------------------------------------

def test_gauss_map_normals_are_unit_and_closed_form():
    band = critical_catenoid()
    params, normals = gauss_map_samples(band, grid=(16, 8))
    assert np.max(np.abs(np.linalg.norm(normals, axis=-1) - 1.0)) <= 1e-12
    x, y = params[:, 0], params[:, 1]
    n_exact = np.column_stack([np.cos(x), np.sin(x), -np.sinh(y)]) \
        / np.cosh(y)[:, None]
    assert np.max(np.abs(normals - n_exact)) <= 1e-12


def test_injectivity_scan_separates_catenoid_from_plane():
    assert injectivity_scan(critical_catenoid(), grid=(24, 12)) > 1e-3
    assert injectivity_scan(equatorial_disk(2.0), grid=(24, 12)) <= 1e-12


# ---------------------------------------------------------------------------
# superharmonic distance checks
# ---------------------------------------------------------------------------

def test_superharmonic_checks_critical_catenoid():
    out = superharmonic_checks(critical_catenoid(), 500)
    assert out["r2_residual"] <= 1e-6
    assert out["superharmonic_margin"] <= 1e-9
    assert out["boundary_value_residual"] <= 1e-8
    assert out["boundary_neumann_residual"] <= 1e-8


def test_superharmonic_checks_disk_trivial():
    out = superharmonic_checks(equatorial_disk(2.0), 500)
    assert out["r2_residual"] <= 1e-6
    assert out["superharmonic_margin"] <= 1e-9
    assert out["boundary_value_residual"] <= 1e-8
    assert out["boundary_neumann_residual"] <= 1e-8


def test_superharmonic_checks_flag_sphere():
    out = superharmonic_checks(SpherePatch(0.7, -0.8, 0.8), 200)
    assert out["r2_residual"] > 0.1           # r is constant, not harmonic-square
    assert out["boundary_value_residual"] is None


# ---------------------------------------------------------------------------
# curvature-line normal form
# ---------------------------------------------------------------------------

def test_curvature_line_forms_catenoid():
    out = curvature_line_forms_check(critical_catenoid())
    assert out["status"] == "ok"
    assert abs(out["scale"] - C0) <= 1e-8
    assert out["i_residual"] <= 1e-6
    assert out["ii_residual"] <= 1e-6
    assert out["offdiag_residual"] <= 1e-10


def test_curvature_line_forms_skip_flat_input():
    out = curvature_line_forms_check(equatorial_disk(2.0))
    assert out["status"] == "skipped"


# ---------------------------------------------------------------------------
# assembled report
# ---------------------------------------------------------------------------

def test_curvature_report_critical_catenoid():
    rep = curvature_report(critical_catenoid())
    assert rep.beta_sup <= 1e-10
    assert abs(rep.alpha_mean - C0) <= 1e-10
    assert rep.alpha_std <= 1e-10
    assert abs(rep.hopf_constant - C0) <= 1e-10
    assert rep.k_max < 0.0
    assert rep.k_min <= rep.k_max
    assert abs(rep.total_curvature + 4 * math.pi * KAPPA) <= 1e-6
    assert np.max(np.abs(rep.flux_sum)) <= 1e-10
    assert set(rep.flux_vectors) == {"gamma1", "gamma2"}
    assert abs(rep.convexity["gamma1"] - 0.6627) <= 1e-3
    assert rep.line_forms["status"] == "ok"
    assert rep.passes_minimal()
