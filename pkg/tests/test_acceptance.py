"""End-to-end acceptance battery.

Twelve numbered criteria, one verdict line printed per criterion
(`ACCEPT-NN PASS/FAIL: ...`), with the stated tolerances and runtime
budgets checked by the assertions themselves.
"""

import math
import time

import numpy as np
import pytest

from sphereflect.extension import extend
from sphereflect.geometry import (
    flux,
    fundamental_forms,
    gaussian_curvature_identity,
    strip_curvature_integral,
    superharmonic_checks,
    total_curvature,
)
from sphereflect.harmonic import CauchyData, TrigPolynomial, solve_cauchy
from sphereflect.normalization import (
    NormalizationMap,
    boundary_conformal_factor,
    build_normalization,
    find_branch_points,
    push_forward,
)
from sphereflect.reflection import rk4_disagreement
from sphereflect.reports import RunConfig, render_report, run_checks
from sphereflect.surfaces import (
    catenoid_band,
    critical_catenoid,
    equatorial_disk,
    noncritical_catenoid,
    verify_steklov,
)

T0 = 1.1996786402573889           # t tanh t = 1
C0 = 0.46048508825039869          # 1 / (t0 cosh t0)
KAPPA = 0.83355655960120434       # tanh t0
A = 2 * T0                        # strip height of the critical band


def _verdict(k, ok, detail):
    print("ACCEPT-%02d %s: %s" % (k, "PASS" if ok else "FAIL", detail))
    assert ok, "criterion %d: %s" % (k, detail)


@pytest.fixture(scope="module")
def cc():
    return critical_catenoid()


@pytest.fixture(scope="module")
def ext2(cc):
    return extend(cc, 2)


@pytest.fixture(scope="module")
def ext8(cc):
    return extend(cc, 8)


def closed_band(x, y):
    """Critical catenoid in the extension's global chart (t = t0 - y)."""
    t = T0 - np.asarray(y, float)
    ch = np.cosh(t)
    return np.stack(np.broadcast_arrays(
        C0 * ch * np.cos(x), C0 * ch * np.sin(x), C0 * t), axis=-1)


# ---------------------------------------------------------------------------

def test_accept_01_cauchy_solver_exactness():
    start = time.perf_counter()
    zero = TrigPolynomial(2.0, [0.0], [0.0])
    one = TrigPolynomial(2.0, [2.0], [0.0])          # a0 convention: a0/2
    cosx = TrigPolynomial(2.0, [0.0, 1.0], [0.0, 0.0])
    x = np.linspace(0.0, 2.0, 64, endpoint=False)[:, None]
    y = np.linspace(-1.0, 1.0, 64)[None, :]
    cases = [
        (CauchyData(zero, one), y + 0.0 * x),
        (CauchyData(cosx, zero), np.cosh(math.pi * y) * np.cos(math.pi * x)),
        (CauchyData(zero, cosx),
         np.sinh(math.pi * y) * np.cos(math.pi * x) / math.pi),
    ]
    worst = 0.0
    for data, want in cases:
        h = solve_cauchy(data)
        worst = max(worst, float(np.max(np.abs(h.evaluate(x, y) - want))))
    elapsed = time.perf_counter() - start
    _verdict(1, worst <= 1e-12 and elapsed < 1.0,
             "three closed-form strip solutions, sup %.3e on 64x64 "
             "(%.2fs)" % (worst, elapsed))


def test_accept_02_normalized_boundary_factor(cc):
    chart = cc.edge_chart("gamma1")
    nm = build_normalization(boundary_conformal_factor(chart))
    ns = push_forward(chart, nm)
    X = np.arange(512) * ns.period / 512
    worst = float(np.max(np.abs(ns.conformal_factor(X, np.zeros_like(X))
                                - 1.0)))
    # synthetic factor: renormalized axis factor is F / H' = 1
    F = TrigPolynomial(2.0, [2.0, 0.1], [0.0, 0.0])
    nm2 = build_normalization(F)
    xs = np.linspace(0.0, 2.0, 257)
    worst2 = float(np.max(np.abs(
        F.evaluate(xs) / np.real(nm2.derivative(xs + 0j)) - 1.0)))
    ok = worst <= 1e-8 and worst2 <= 1e-8
    _verdict(2, ok, "axis factor after normalization: catenoid %.3e, "
             "synthetic 1+0.1cos %.3e" % (worst, worst2))


def test_accept_03_free_boundary_residuals(cc):
    start = time.perf_counter()
    r_cat = max(verify_steklov(cc, e).sup_residual
                for e in ("gamma1", "gamma2"))
    t_cat = time.perf_counter() - start

    start = time.perf_counter()
    r_disk = verify_steklov(equatorial_disk(), "gamma1").sup_residual
    t_disk = time.perf_counter() - start

    start = time.perf_counter()
    r_bad = verify_steklov(noncritical_catenoid(0.9), "gamma1").sup_residual
    t_bad = time.perf_counter() - start

    ok = (r_cat <= 1e-8 and r_disk <= 1e-12 and r_bad >= 0.05
          and max(t_cat, t_disk, t_bad) < 1.0)
    _verdict(3, ok, "catenoid %.3e, disk %.3e, cut-band control %.3f "
             "(max %.2fs)" % (r_cat, r_disk, r_bad,
                              max(t_cat, t_disk, t_bad)))


def test_accept_04_reflection_matches_closed_form(cc):
    start = time.perf_counter()
    ext1 = extend(cc, 1)
    x = (np.arange(256) * ext1.period / 256)[:, None]
    y = np.linspace(-A + 1e-9, 0.0, 64)[None, :]     # t in (t0, 3 t0)
    sup = float(np.max(np.abs(ext1.evaluate(x, y) - closed_band(x, y))))
    rk4 = rk4_disagreement(ext1.patch1, 2.0)
    elapsed = time.perf_counter() - start
    ok = sup <= 1e-6 and rk4 <= 1e-7 and elapsed < 10.0
    _verdict(4, ok, "mirror band sup %.3e on 256x64, mode-vs-RK4 %.3e "
             "(%.2fs)" % (sup, rk4, elapsed))


def test_accept_05_flat_disk_reflection():
    ext = extend(equatorial_disk(), 1)
    x = (np.arange(128) * ext.period / 128)[:, None]
    y = np.linspace(-4.0, 0.0, 65)[None, :]          # mirror side only
    pts = ext.evaluate(x, y)
    planar = float(np.max(np.abs(pts[..., 2])))
    radii = np.linalg.norm(pts, axis=-1)
    r_min = float(np.min(radii))
    ok = planar <= 1e-10 and r_min >= 1.0 - 1e-12
    _verdict(5, ok, "mirror stays in x3=0 (%.3e) outside the ball "
             "(min radius %.12f)" % (planar, r_min))


def test_accept_06_extension_regularity(ext2):
    rng = np.random.RandomState(5)
    x = rng.uniform(0.0, ext2.period, 600)
    y = rng.uniform(ext2.y_lo + 1e-6, ext2.y_hi - 1e-6, 600)
    per = float(np.max(np.abs(ext2.evaluate(x + ext2.period, y)
                              - ext2.evaluate(x, y))))
    px = ext2.evaluate(x, y, dx=1)
    py = ext2.evaluate(x, y, dy=1)
    conf = max(float(np.max(np.abs(np.sum(px * px - py * py, axis=-1)))),
               float(np.max(np.abs(np.sum(px * py, axis=-1)))))
    seams = ext2.seam_defects()
    seam = max(max(d["value_sup"], d["dy_sup"]) for d in seams.values())
    # mean curvature everywhere, with rows straddling each seam
    xs = np.concatenate([x[:200], rng.uniform(0, ext2.period, 160)])
    ys = np.concatenate([y[:200],
                         np.repeat([0.0, ext2.a], 80)
                         + np.tile(np.linspace(-0.1, 0.1, 80), 2)])
    hsup = float(np.max(np.abs(
        fundamental_forms(ext2, xs, ys).mean_curvature)))
    ok = per <= 1e-10 and conf <= 1e-8 and seam <= 1e-8 and hsup <= 1e-6
    _verdict(6, ok, "periodicity %.3e, conformality %.3e, C1 seams %.3e, "
             "|H| %.3e" % (per, conf, seam, hsup))


def test_accept_07_hopf_quantities(ext8):
    nx, ny = 64, 97
    span = ext8.y_hi - ext8.y_lo
    x = (np.arange(nx) * ext8.period / nx)[:, None]
    y = np.linspace(ext8.y_lo + 1e-3 * span,
                    ext8.y_hi - 1e-3 * span, ny)[None, :]
    forms = fundamental_forms(ext8, x, y)
    scale = (ext8.period / (2 * math.pi)) ** 2
    q = -scale * (0.5 * (forms.sec_xx - forms.sec_yy) - 1j * forms.sec_xy)
    beta_sup = float(np.max(np.abs(np.imag(q))))
    alpha = np.real(q)
    spread = float((np.max(alpha) - np.min(alpha)) / abs(np.mean(alpha)))
    k_max = float(np.max(forms.gauss_curvature))
    w = np.exp(-2j * math.pi * (x + 1j * y) / ext8.period)
    ident = gaussian_curvature_identity(ext8, w, c_est=C0)
    ok = (beta_sup <= 1e-6 and spread <= 1e-6 and k_max < 0.0
          and ident <= 1e-6)
    _verdict(7, ok, "n=8 band: sup|beta| %.3e, alpha spread %.3e, "
             "max K %.3e, K-identity %.3e" % (beta_sup, spread, k_max, ident))


def test_accept_08_total_curvature(ext8):
    start = time.perf_counter()
    value, tail = total_curvature(ext8, nx=64)
    window = abs(value + tail + 4 * math.pi)
    worst_band = 0.0
    for T in (T0, 3 * T0, 5 * T0):
        band = catenoid_band(T)
        got, _ = strip_curvature_integral(band, -T, T)
        worst_band = max(worst_band,
                         abs(got + 4 * math.pi * math.tanh(T)))
    elapsed = time.perf_counter() - start
    ok = (window <= 1e-2 * 4 * math.pi and worst_band <= 1e-8
          and elapsed < 30.0)
    _verdict(8, ok, "n=8 window + tail misses -4pi by %.3e, finite-band "
             "oracle %.3e (%.2fs)" % (window, worst_band, elapsed))


def test_accept_09_flux_balance(cc):
    f1 = flux(cc, "gamma1")
    f2 = flux(cc, "gamma2")
    balance = float(np.linalg.norm(f1 + f2))
    closed = float(np.max(np.abs(f1 - np.array([0.0, 0.0,
                                                2 * math.pi * C0]))))
    ok = balance <= 1e-8 and closed <= 1e-8
    _verdict(9, ok, "|flux(g1)+flux(g2)| = %.3e, vertical closed form "
             "off by %.3e" % (balance, closed))


def test_accept_10_superharmonic_distance(cc):
    sup = superharmonic_checks(cc, nsamples=1000)
    ok = (sup["r2_residual"] <= 1e-6
          and sup["superharmonic_margin"] <= 1e-9
          and sup["boundary_value_residual"] <= 1e-8
          and sup["boundary_neumann_residual"] <= 1e-8)
    _verdict(10, ok, "|lap r^2 - 4| %.3e, superharmonic margin %.3e, "
             "boundary data %.3e/%.3e"
             % (sup["r2_residual"], sup["superharmonic_margin"],
                sup["boundary_value_residual"],
                sup["boundary_neumann_residual"]))


def test_accept_11_puncture_bookkeeping(cc, ext2, ext8):
    counts = [len(extend(cc, 1).punctures), len(ext2.punctures),
              len(ext8.punctures)]
    # synthetic fixture: F = 1 + 0.9 cos(pi x) has two factor-derivative
    # zeros at 1 -+ i y*; the argument principle should count both simply
    nm = build_normalization(TrigPolynomial(2.0, [2.0, 0.9], [0.0, 0.0]))
    ps = find_branch_points(nm, (0.0, 2.0, -0.4, 0.4))
    ps.validate(nm)
    ok = (counts == [0, 0, 0] and len(ps) == 2 and ps.total_winding == 2
          and all(m == 1 for m in ps.multiplicities))
    _verdict(11, ok, "catenoid extensions carry %s punctures; synthetic "
             "fixture: %d zeros, winding %d"
             % (counts, len(ps), ps.total_winding))


def test_accept_12_report_determinism(tmp_path):
    cfg = RunConfig(surface="critical-catenoid", steps=2,
                    out_dir=str(tmp_path), seed=11)
    a = render_report(run_checks(cfg))
    b = render_report(run_checks(cfg))
    la = a.splitlines()
    lb = b.splitlines()
    diff = [i for i, (p, q) in enumerate(zip(la, lb)) if p != q]
    stable = (len(la) == len(lb)
              and all("run_meta" in la[i] for i in diff))
    _verdict(12, stable, "two runs, %d differing line(s), all confined to "
             "the timestamped run_meta line" % len(diff))
