"""Reflection across a sphere edge: completion, field equation, patches.

Closed-form ground truth throughout: the critical catenoid's reflection
across either boundary circle is the catenoid band continued past that
circle, and the flat disk's reflection is the exterior of the unit circle
in the same plane.  The field-equation solve is additionally cross-checked
by an independent RK4 integration along vertical segments.
"""

import math
import time

import numpy as np
import pytest

from sphereflect.harmonic import (CauchyData, HarmonicStripFunction,
                                  TrigPolynomial, fourier_analyze, solve_cauchy)
from sphereflect.holomorphic import (HolomorphicModel, holomorphic_completion,
                                     lambda_field)
from sphereflect.normalization import (boundary_conformal_factor,
                                       build_normalization)
from sphereflect.reflection import (reflect_patch, rk4_disagreement,
                                    schwarz_extend, solve_reflection_ode,
                                    verify_schwarz_condition)
from sphereflect.surfaces import (critical_catenoid, equatorial_disk,
                                  noncritical_catenoid)

T0 = 1.1996786402573889
C0 = 0.46048508825039869
KAPPA = 0.83355655960120434


def catenoid_models(edge="gamma1"):
    """Run the trace -> completion chain by hand for the critical catenoid."""
    chart = critical_catenoid().edge_chart(edge)
    factor = boundary_conformal_factor(chart)
    nm = build_normalization(factor)
    M = 65
    Xs = np.arange(M) * nm.period_out / M
    xs = nm.invert_axis(Xs)
    g = chart.evaluate(xs, 0.0)
    fy = chart.evaluate(xs, 0.0, dy=1)
    F = factor(xs)
    out = []
    for j in range(3):
        gj = fourier_analyze(g[:, j], nm.period_out).trimmed(1e-13)
        fj = fourier_analyze(fy[:, j] / F, nm.period_out).trimmed(1e-13)
        out.append(holomorphic_completion(solve_cauchy(CauchyData(gj, fj))))
    return out, nm


# ---------------------------------------------------------------------------
# holomorphic models and completion
# ---------------------------------------------------------------------------

def test_model_algebra_and_derivative():
    m = HolomorphicModel(2 * math.pi)
    m.add_term(2.0, 0.3 - 0.1j, 0.05j)
    m.add_term(-1.0, 0.2j)
    m.add_term(0.0, 0.1, 0.4 - 0.2j)
    m.quad = 0.25 - 0.05j
    rng = np.random.RandomState(7)
    Z = rng.uniform(-3, 3, 24) + 1j * rng.uniform(-1, 1, 24)
    d = m.derivative()
    expect = ((1j * 2.0 * (0.3 - 0.1j + 0.05j * Z) + 0.05j) * np.exp(2j * Z)
              + 1j * (-1.0) * 0.2j * np.exp(-1j * Z)
              + (0.4 - 0.2j) + 2.0 * (0.25 - 0.05j) * Z)
    assert np.max(np.abs(d.value(Z) - expect)) <= 1e-12
    # second route for the value itself
    direct = ((0.3 - 0.1j + 0.05j * Z) * np.exp(2j * Z)
              + 0.2j * np.exp(-1j * Z)
              + 0.1 + (0.4 - 0.2j) * Z + (0.25 - 0.05j) * Z * Z)
    assert np.max(np.abs(m.value(Z) - direct)) <= 1e-12
    X, Y = np.real(Z), np.imag(Z)
    assert np.max(np.abs(m.real_part(X, Y) - np.real(direct))) <= 1e-12


def test_model_add_term_merges_frequencies():
    m = HolomorphicModel(2 * math.pi)
    m.add_term(1.0, 0.5)
    m.add_term(1.0 + 1e-14, 0.25, 0.1)
    assert len(m.terms) == 1
    c0, c1 = m.coefficient(1.0)
    assert abs(c0 - 0.75) <= 1e-14 and abs(c1 - 0.1) <= 1e-14


def test_model_depth_guard():
    m = HolomorphicModel(2 * math.pi)
    m.add_term(3.0, 1.0)
    with pytest.raises(ValueError):
        m.value(0.0 + 11j)


def test_completion_matches_harmonic_function():
    rng = np.random.RandomState(11)
    n = 4
    per = 2 * math.pi * KAPPA
    g = TrigPolynomial(per, rng.randn(n + 1) * 0.5 ** np.arange(n + 1),
                       rng.randn(n + 1) * 0.5 ** np.arange(n + 1))
    f = TrigPolynomial(per, rng.randn(n + 1) * 0.5 ** np.arange(n + 1),
                       rng.randn(n + 1) * 0.5 ** np.arange(n + 1), b0=0.2)
    phi = solve_cauchy(CauchyData(g, f))
    phi.x2y2 = 0.15          # exercise the quadratic row as well
    Phi = holomorphic_completion(phi)
    X, Y = np.meshgrid(np.linspace(0, per, 40, endpoint=False),
                       np.linspace(-0.6, 0.6, 21))
    err = np.abs(Phi.real_part(X, Y) - phi.evaluate(X, Y))
    assert np.max(err) <= 1e-12
    # gauge: the imaginary part vanishes at the anchor point
    assert abs(np.imag(Phi.value(0.0 + 0.0j))) <= 1e-12


def test_completion_critical_catenoid_coefficients():
    models, nm = catenoid_models()
    assert abs(nm.period_out - 2 * math.pi * KAPPA) <= 1e-12
    plus = 0.5 * (KAPPA + KAPPA ** 2)
    minus = 0.5 * (KAPPA - KAPPA ** 2)
    c0, c1 = models[0].coefficient(T0)
    assert abs(c0 - plus) <= 1e-12 and abs(c1) <= 1e-12
    c0, c1 = models[0].coefficient(-T0)
    assert abs(c0 - minus) <= 1e-12 and abs(c1) <= 1e-12
    c0, c1 = models[1].coefficient(T0)
    assert abs(c0 - (-1j) * plus) <= 1e-12 and abs(c1) <= 1e-12
    c0, c1 = models[2].coefficient(0.0)
    assert abs(c0 - C0 * T0) <= 1e-12
    assert abs(c1 - 1j * C0 * T0) <= 1e-12


# ---------------------------------------------------------------------------
# Schwarz condition on the boundary field
# ---------------------------------------------------------------------------

def test_lambda_symmetric_for_critical_catenoid():
    models, nm = catenoid_models()
    for Phi in models:
        lam = lambda_field(Phi, +1)
        assert verify_schwarz_condition(lam) <= 1e-12
        sym = schwarz_extend(lam, tol=1e-10)
        rng = np.random.RandomState(3)
        Z = rng.uniform(0, nm.period_out, 16) + 1j * rng.uniform(-1, 1, 16)
        assert np.max(np.abs(sym.value(np.conj(Z))
                             - np.conj(sym.value(Z)))) <= 1e-12
    c0, c1 = lambda_field(models[2], +1).coefficient(0.0)
    assert abs(c0) <= 1e-12
    assert abs(c1 - (-C0 * T0)) <= 1e-12


def test_schwarz_violation_detected():
    models, _ = catenoid_models()
    lam = lambda_field(models[0], +1)
    bump = HolomorphicModel(lam.period)
    bump.add_term(0.0, 1e-3j)
    bad = lam + bump
    assert abs(verify_schwarz_condition(bad) - 1e-3) <= 1e-12
    with pytest.raises(ValueError):
        schwarz_extend(bad, tol=1e-6)
    # wrong sigma on a critical surface also breaks the symmetry
    asym = lambda_field(models[0], -1)
    assert verify_schwarz_condition(asym) > 1e-2


# ---------------------------------------------------------------------------
# the field equation solve
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("sigma", [+1, -1])
def test_field_equation_roundtrip(sigma):
    rng = np.random.RandomState(17 + sigma)
    per = 2 * math.pi

    def rc():
        return complex(rng.uniform(-1, 1), rng.uniform(-1, 1))

    known = HolomorphicModel(per)
    known.add_term(1.0, rc())
    known.add_term(-1.0, rc())
    known.add_term(2.0, rc())
    known.add_term(-2.0, rc())
    known.add_term(0.0, rc(), 1j * rng.uniform(-1, 1))
    lam = lambda_field(known, sigma)
    M = 41
    X = np.arange(M) * per / M
    trace = fourier_analyze(np.real(known.value(X + 0j)), per)
    got = solve_reflection_ode(lam, trace, sigma)
    Z = np.linspace(0, per, 28, endpoint=False)[None, :] \
        + 1j * np.linspace(-1.0, 0.5, 7)[:, None]
    assert np.max(np.abs(got.value(Z) - known.value(Z))) <= 1e-10


def test_field_equation_resonant_source_rejected():
    lam = HolomorphicModel(2 * math.pi)
    lam.add_term(1.0, 0.2, 0.3)     # Z-linear source at the resonant mode
    trace = TrigPolynomial(2 * math.pi, [0.0, 1.0], [0.0, 0.0])
    with pytest.raises(ValueError):
        solve_reflection_ode(lam, trace, +1)


def test_field_equation_catenoid_fixed_point():
    models, nm = catenoid_models()
    M = 65
    X = np.arange(M) * nm.period_out / M
    for Phi in models:
        lam = schwarz_extend(lambda_field(Phi, +1), tol=1e-10)
        trace = fourier_analyze(np.real(Phi.value(X + 0j)), nm.period_out)
        got = solve_reflection_ode(lam, trace, +1)
        Z = X[None, :] + 1j * np.linspace(-2.0, 1.0, 9)[:, None]
        assert np.max(np.abs(got.value(Z) - Phi.value(Z))) <= 1e-10


# ---------------------------------------------------------------------------
# reflected patches: catenoid continuation and the flat disk
# ---------------------------------------------------------------------------

def test_reflect_critical_catenoid_matches_continuation():
    tstart = time.perf_counter()
    patch = reflect_patch(critical_catenoid())
    assert patch.sigma == +1
    assert patch.steklov_sup <= 1e-10
    assert patch.schwarz_residual <= 1e-10
    assert len(patch.punctures) == 0
    assert abs(patch.depth - 2 * T0) <= 1e-8
    x = np.linspace(0, 2 * math.pi, 256, endpoint=False)[:, None]
    s = (np.arange(1, 65) / 64.0 * 2 * T0)[None, :]
    got = patch.evaluate(x, -s)
    t = T0 + s
    want = np.stack(np.broadcast_arrays(
        C0 * np.cosh(t) * np.cos(x), C0 * np.cosh(t) * np.sin(x),
        C0 * t), axis=-1)
    assert np.max(np.abs(got - want)) <= 1e-6
    assert time.perf_counter() - tstart < 10.0


def test_reflect_gamma2_matches_continuation():
    patch = reflect_patch(critical_catenoid(), "gamma2")
    x = np.linspace(0, 2 * math.pi, 96, endpoint=False)[:, None]
    s = np.linspace(0.05, 2 * T0, 48)[None, :]
    got = patch.evaluate(x, -s)
    t = T0 + s
    want = np.stack(np.broadcast_arrays(
        C0 * np.cosh(t) * np.cos(x), C0 * np.cosh(t) * np.sin(x),
        -C0 * t), axis=-1)
    assert np.max(np.abs(got - want)) <= 1e-6


def test_patch_seam_is_smooth():
    patch = reflect_patch(critical_catenoid())
    seam = patch.seam_defect()
    assert seam["value_sup"] <= 1e-8
    assert seam["dy_sup"] <= 1e-8


def test_patch_derivatives_match_continuation():
    patch = reflect_patch(critical_catenoid())
    x = np.linspace(0, 2 * math.pi, 48, endpoint=False)[:, None]
    s = np.linspace(0.1, 1.5, 16)[None, :]
    t = T0 + s
    # d/dy in the chart is -d/dt of the continued band
    want_y = np.stack(np.broadcast_arrays(
        -C0 * np.sinh(t) * np.cos(x), -C0 * np.sinh(t) * np.sin(x),
        -C0 * np.ones_like(t + x)), axis=-1)
    got_y = patch.evaluate(x, -s, dy=1)
    assert np.max(np.abs(got_y - want_y)) <= 1e-8
    want_xx = np.stack(np.broadcast_arrays(
        -C0 * np.cosh(t) * np.cos(x), -C0 * np.cosh(t) * np.sin(x),
        np.zeros_like(t + x)), axis=-1)
    got_xx = patch.evaluate(x, -s, dx=2)
    assert np.max(np.abs(got_xx - want_xx)) <= 1e-8
    want_xy = np.stack(np.broadcast_arrays(
        C0 * np.sinh(t) * np.sin(x), -C0 * np.sinh(t) * np.cos(x),
        np.zeros_like(t + x)), axis=-1)
    got_xy = patch.evaluate(x, -s, dx=1, dy=1)
    assert np.max(np.abs(got_xy - want_xy)) <= 1e-8
    # conformality of the continued immersion, via the patch's own factors
    gx = patch.evaluate(x, -s, dx=1)
    assert np.max(np.abs(np.sum(gx * got_y, axis=-1))) <= 1e-8
    assert np.max(np.abs(np.sum(gx * gx, axis=-1)
                         - np.sum(got_y * got_y, axis=-1))) <= 1e-8


def test_patch_model_chart_consistency():
    patch = reflect_patch(critical_catenoid())
    x = np.linspace(0, 2 * math.pi, 32, endpoint=False)[:, None]
    y = np.linspace(-1.8, 0.9, 11)[None, :]
    a = patch.evaluate(x, y)
    b = patch.evaluate_model(KAPPA * x, KAPPA * y)
    assert np.max(np.abs(a - b)) <= 1e-10


def test_rk4_route_agrees_with_mode_solve():
    patch = reflect_patch(critical_catenoid())
    assert rk4_disagreement(patch, 2.0) <= 1e-7
    disk = reflect_patch(equatorial_disk())
    assert rk4_disagreement(disk, 2.0) <= 1e-7


def test_reflect_disk_fills_plane_exterior():
    patch = reflect_patch(equatorial_disk())
    assert patch.sigma == +1
    c0, c1 = patch.models[0].coefficient(1.0)
    assert abs(c0 - 1.0) <= 1e-12 and abs(c1) <= 1e-12
    c0, c1 = patch.models[1].coefficient(1.0)
    assert abs(c0 - (-1j)) <= 1e-12 and abs(c1) <= 1e-12
    x = np.linspace(0, 2 * math.pi, 128, endpoint=False)[:, None]
    s = np.linspace(0.02, 3.0, 40)[None, :]
    got = patch.evaluate(x, -s)
    assert np.max(np.abs(got[..., 2])) <= 1e-10
    radius = np.hypot(got[..., 0], got[..., 1])
    assert np.min(radius) >= 1.0
    assert np.max(np.abs(radius - np.exp(s))) <= 1e-8
    # the boundary field is pure gauge here: shifting Phi by an imaginary
    # constant (the completion's anchor) moves Lambda by a real constant
    # without touching Re Phi, so "trivial" means constant and real
    for lam in patch.lambdas:
        X = np.linspace(0, 2 * math.pi, 64, endpoint=False)
        base = lam.value(np.zeros(1) + 0j)[0]
        assert abs(np.imag(base)) <= 1e-12
        assert np.max(np.abs(lam.value(X - 0.5j) - base)) <= 1e-12


# ---------------------------------------------------------------------------
# negative control and the involution
# ---------------------------------------------------------------------------

def test_noncritical_band_is_rejected():
    with pytest.raises(ValueError, match="free-boundary"):
        reflect_patch(noncritical_catenoid(0.9))


def test_noncritical_schwarz_defect_matches_closed_form():
    frac = 0.9
    T = frac * T0
    scale = 1.0 / math.hypot(math.cosh(T), T)
    chart = noncritical_catenoid(frac).edge_chart("gamma1")
    factor = boundary_conformal_factor(chart)
    nm = build_normalization(factor)
    M = 65
    Xs = np.arange(M) * nm.period_out / M
    xs = nm.invert_axis(Xs)
    g = chart.evaluate(xs, 0.0)
    fy = chart.evaluate(xs, 0.0, dy=1)
    F = factor(xs)
    sups = []
    for j in range(3):
        gj = fourier_analyze(g[:, j], nm.period_out).trimmed(1e-13)
        fj = fourier_analyze(fy[:, j] / F, nm.period_out).trimmed(1e-13)
        Phi = holomorphic_completion(solve_cauchy(CauchyData(gj, fj)))
        sups.append(verify_schwarz_condition(lambda_field(Phi, +1)))
    expect_r = abs(scale * math.cosh(T) - math.tanh(T))
    expect_z = abs(scale * T - 1.0 / math.cosh(T))
    assert abs(sups[0] - expect_r) <= 1e-10
    assert abs(sups[1] - expect_r) <= 1e-10
    assert abs(sups[2] - expect_z) <= 1e-10
    assert min(sups) > 1e-2


def test_double_reflection_is_the_identity():
    patch = reflect_patch(critical_catenoid())
    surf2 = patch.as_surface()
    chart2 = surf2.edge_chart("gamma1")
    assert chart2.exterior
    patch2 = reflect_patch(surf2)
    assert patch2.sigma == -1
    x = np.linspace(0, 2 * math.pi, 64, endpoint=False)[:, None]
    s = np.linspace(0.05, 2 * T0 - 0.05, 32)[None, :]
    got = patch2.evaluate(x, -s)
    t = T0 - s
    want = np.stack(np.broadcast_arrays(
        C0 * np.cosh(t) * np.cos(x), C0 * np.cosh(t) * np.sin(x),
        C0 * t), axis=-1)
    assert np.max(np.abs(got - want)) <= 1e-6
    seam = patch2.seam_defect()
    assert seam["value_sup"] <= 1e-8
    assert seam["dy_sup"] <= 1e-8
