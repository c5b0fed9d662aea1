"""Differential-geometry verifiers for conformal minimal strips.

Everything here consumes a "strip object": anything with
``evaluate(x, y, dx=, dy=)`` returning 3-vectors (exact derivatives through
order two), a ``period``, and — where a function needs bounds or boundary
circles — ``y_lo``/``y_hi`` attributes or ``edges()``/``edge_chart()``.
Catalog surfaces, edge charts, reflected patches, and extended surfaces all
qualify.

Sign conventions are tied to the chart orientation: the unit normal is
always psi_x x psi_y normalized, so flipping a chart's y-axis flips the
normal and with it the signs (not the magnitudes) of the second-form
entries and the Hopf constant.  Curvature K, mean curvature H, and every
residual reported here are orientation-invariant.

Two derivative routes are deliberately kept independent: the surfaces'
exact mode/chain-rule derivatives are the primary path, and
`fd_surface_derivative` (central differences, Richardson-extrapolated) is
the universal cross-check oracle used by the tests.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "FundamentalForms",
    "fundamental_forms",
    "fd_surface_derivative",
    "hopf_quantities",
    "boundary_curvature_relations",
    "gaussian_curvature_identity",
    "strip_curvature_integral",
    "total_curvature",
    "flux",
    "boundary_integral",
    "boundary_convexity",
    "gauss_map_samples",
    "injectivity_scan",
    "superharmonic_checks",
    "curvature_line_forms_check",
    "CurvatureReport",
    "curvature_report",
]


# ---------------------------------------------------------------------------
# fundamental forms
# ---------------------------------------------------------------------------

@dataclass
class FundamentalForms:
    """First/second fundamental forms of a conformal chart at sample points.

    `metric` is the conformal first-form factor F^2 (both diagonal entries);
    `sec_xx`, `sec_xy`, `sec_yy` are the second-form entries against the
    normal psi_x x psi_y / |...|.  `frame_residual` bundles the worst
    self-consistency defect at the samples: conformality (|E-G|, |<x,y>|
    against F^2) and the tangential Gauss frame identities
    <psi_xx, psi_x> = F F_x, <psi_xx, psi_y> = -F F_y.
    """

    metric: np.ndarray
    sec_xx: np.ndarray
    sec_xy: np.ndarray
    sec_yy: np.ndarray
    mean_curvature: np.ndarray
    gauss_curvature: np.ndarray
    normal: np.ndarray
    frame_residual: float


def fundamental_forms(surface, x, y) -> FundamentalForms:
    """Exact fundamental forms of `surface` at (x, y) (arrays broadcast)."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    px = surface.evaluate(x, y, dx=1)
    py = surface.evaluate(x, y, dy=1)
    E = np.sum(px * px, axis=-1)
    G = np.sum(py * py, axis=-1)
    X = np.sum(px * py, axis=-1)
    if np.min(E) <= 1e-24:
        raise ValueError("branch point: chart derivative degenerates")
    metric = 0.5 * (E + G)
    nvec = np.cross(px, py)
    nlen = np.linalg.norm(nvec, axis=-1, keepdims=True)
    nvec = nvec / nlen
    pxx = surface.evaluate(x, y, dx=2)
    pxy = surface.evaluate(x, y, dx=1, dy=1)
    pyy = surface.evaluate(x, y, dy=2)
    L = np.sum(pxx * nvec, axis=-1)
    M = np.sum(pxy * nvec, axis=-1)
    N = np.sum(pyy * nvec, axis=-1)
    H = (L + N) / (2.0 * metric)
    K = (L * N - M * M) / metric ** 2
    # conformality and the tangential part of the frame equations
    FFx = np.sum(pxx * px, axis=-1)          # should be F F_x = E_x / 2
    FFy = np.sum(pxy * px, axis=-1)          # F F_y, via d/dy of E/2
    conf = max(float(np.max(np.abs(E - G))), float(np.max(np.abs(X))))
    tang = max(float(np.max(np.abs(np.sum(pxx * py, axis=-1) + FFy))),
               float(np.max(np.abs(np.sum(pyy * px, axis=-1) + FFx))))
    scale = max(1.0, float(np.max(metric)))
    return FundamentalForms(
        metric=metric, sec_xx=L, sec_xy=M, sec_yy=N, mean_curvature=H,
        gauss_curvature=K, normal=nvec,
        frame_residual=max(conf, tang) / scale)


def fd_surface_derivative(surface, x, y, dx: int = 0, dy: int = 0,
                          h: float | None = None):
    """Finite-difference derivative oracle (central, Richardson O(h^4)).

    Independent of the surfaces' exact-derivative code paths on purpose:
    it calls `evaluate` only with dx=dy=0.  The default step is 1e-5 for
    first derivatives; second differences use 1e-3 because dividing by h^2
    puts a smaller step below the round-off floor.
    """
    if h is None:
        h = 1e-5 if dx + dy < 2 else 1e-3

    def d(f, axis, step):
        if axis == "x":
            return (f(x + step, y) - f(x - step, y)) / (2 * step)
        return (f(x, y + step) - f(x, y - step)) / (2 * step)

    def richardson(axis, f):
        a = d(f, axis, h)
        b = d(f, axis, h / 2)
        return (4.0 * b - a) / 3.0

    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    val = lambda X, Y: surface.evaluate(X, Y)  # noqa: E731
    if (dx, dy) == (0, 0):
        return val(x, y)
    if (dx, dy) == (1, 0):
        return richardson("x", val)
    if (dx, dy) == (0, 1):
        return richardson("y", val)
    if (dx, dy) == (2, 0):
        a = (val(x + h, y) - 2 * val(x, y) + val(x - h, y)) / h ** 2
        b = (val(x + h / 2, y) - 2 * val(x, y) + val(x - h / 2, y)) / (h / 2) ** 2
        return (4.0 * b - a) / 3.0
    if (dx, dy) == (0, 2):
        a = (val(x, y + h) - 2 * val(x, y) + val(x, y - h)) / h ** 2
        b = (val(x, y + h / 2) - 2 * val(x, y) + val(x, y - h / 2)) / (h / 2) ** 2
        return (4.0 * b - a) / 3.0
    if (dx, dy) == (1, 1):
        def fx(X, Y):
            return (val(X + h, Y) - val(X - h, Y)) / (2 * h)
        return richardson("y", fx)
    raise NotImplementedError("orders up to 2")


# ---------------------------------------------------------------------------
# Hopf quantities in the plane model w = e^{-i 2 pi z / P}
# ---------------------------------------------------------------------------

def _strip_point_of_w(w, period):
    w = np.asarray(w, dtype=complex)
    if np.any(np.abs(w) <= 0.0):
        raise ValueError("w = 0 is not in the plane model")
    x = np.mod(-np.angle(w) * period / (2 * math.pi), period)
    y = np.log(np.abs(w)) * period / (2 * math.pi)
    return x, y


def hopf_quantities(strip, w):
    """(alpha, beta) = (Re, Im) of w^2 f(w) at plane-model points `w`.

    f(w) = (L - N)/2 - i M computed in the w-chart; for a conformal
    harmonic strip this collapses to a w-free expression,

        w^2 f(w) = -2 (P/2pi)^2 <psi_zz, n>,   psi_zz = (psi_xx - psi_yy
                                                         - 2i psi_xy)/4,

    so alpha + i beta is evaluated exactly from strip derivatives.  For a
    minimal surface this field is holomorphic in w; on a free-boundary
    annulus it is the constant whose modulus enters the curvature identity.
    """
    x, y = _strip_point_of_w(w, strip.period)
    forms = fundamental_forms(strip, x, y)
    # (L - N)/2 - i M in the strip chart equals 2<psi_zz, n>
    fz = 0.5 * (forms.sec_xx - forms.sec_yy) - 1j * forms.sec_xy
    q = -(strip.period / (2 * math.pi)) ** 2 * fz
    return np.real(q), np.imag(q)


def gaussian_curvature_identity(strip, w, c_est: float | None = None):
    """Sup residual of K = -|c/w^2|^2 / F_w^4 at plane-model points `w`.

    With the strip chart factored in, the identity is w-free:
    K = -c^2 (2pi/P)^4 / F^4.  `c_est` defaults to the mean |alpha| over
    the same samples (the Hopf constant estimate).
    """
    x, y = _strip_point_of_w(w, strip.period)
    forms = fundamental_forms(strip, x, y)
    if c_est is None:
        alpha, beta = hopf_quantities(strip, w)
        c_est = float(np.mean(np.hypot(alpha, beta)))
    rhs = -c_est ** 2 * (2 * math.pi / strip.period) ** 4 / forms.metric ** 2
    return float(np.max(np.abs(forms.gauss_curvature - rhs)))


# ---------------------------------------------------------------------------
# boundary circle relations (plane model, rho = |w|)
# ---------------------------------------------------------------------------

def boundary_curvature_relations(surface, *, nsamples: int = 256) -> dict:
    """Boundary relations on each free sphere circle, in the plane model.

    With rho = |w| = e^{2 pi y_glob / P} (gamma1 at rho = 1, the surface at
    rho > 1), the free-boundary condition gives, per circle,

        X_rho = sigma sqrt(metric) X,     1/rho + F_rho/F = sigma F_w,

    where sigma = -1 on the inner circle (the surface lies at larger rho)
    and sigma = +1 on the outer one.  Also beta = 0 there.  Returns per-edge
    dicts of sup residuals plus the sigma and rho used.
    """
    out = {}
    for edge in surface.edges():
        if not edge.free:
            continue
        chart = surface.edge_chart(edge.name)
        P = chart.period
        scale = 2 * math.pi / P
        x = np.arange(nsamples) * P / nsamples
        X = chart.evaluate(x, 0.0)
        Xy = chart.evaluate(x, 0.0, dy=1)
        Xxy = chart.evaluate(x, 0.0, dx=1, dy=1)
        px = chart.evaluate(x, 0.0, dx=1)
        F = np.sqrt(np.sum(px * px, axis=-1))
        dFdy = np.sum(px * Xxy, axis=-1) / F
        if edge.name == "gamma1":
            sigma, ygl = -1.0, 0.0
        else:
            sigma = +1.0
            ygl = _strip_height(surface)
            Xy, dFdy = -Xy, -dFdy      # global y runs opposite to this chart
        rho = math.exp(scale * ygl)
        # the chart-to-w conversion factors cancel between the two sides of
        # each relation except for one power of rho
        radial = np.linalg.norm(Xy - sigma * F[:, None] * X, axis=-1) / rho
        factor = np.abs(dFdy / F - sigma * F) / rho
        beta = _edge_beta(chart, x)
        out[edge.name] = {
            "sigma": sigma,
            "rho": rho,
            "radial_residual": float(np.max(radial)),
            "factor_residual": float(np.max(factor)),
            "beta_sup": float(np.max(np.abs(beta))),
        }
    return out


def _edge_beta(chart, x):
    """|beta| samples on the edge, from the chart's own derivatives."""
    forms = fundamental_forms(chart, x, np.zeros_like(x))
    fz = 0.5 * (forms.sec_xx - forms.sec_yy) - 1j * forms.sec_xy
    q = -(chart.period / (2 * math.pi)) ** 2 * fz
    return np.imag(q)


def _strip_height(surface) -> float:
    y_lo = getattr(surface, "y_lo", None)
    y_hi = getattr(surface, "y_hi", None)
    if y_lo is None or y_hi is None:
        raise ValueError("need y_lo/y_hi strip bounds for the outer circle")
    return float(y_hi - y_lo)


# ---------------------------------------------------------------------------
# curvature integrals
# ---------------------------------------------------------------------------

def strip_curvature_integral(strip, y_lo: float, y_hi: float, *,
                             nx: int = 128, ny: int = 64,
                             tol: float = 1e-9, max_doublings: int = 6,
                             absolute: bool = False):
    """integral of K dA over the strip band, with its convergence estimate.

    K dA = K F^2 dx dy; x-integration is a periodic trapezoid (spectrally
    accurate), y-integration a composite trapezoid refined by doubling with
    Richardson extrapolation until the correction drops below `tol` (or the
    doubling budget runs out).  `absolute=True` integrates |K| dA (the area
    swept by the Gauss map, counted with multiplicity).  Returns
    (value, error_estimate).
    """

    def row_profile(yv):
        x = (np.arange(nx) * strip.period / nx)[:, None]
        forms = fundamental_forms(strip, x, yv[None, :])
        dens = forms.gauss_curvature * forms.metric
        if absolute:
            dens = np.abs(dens)
        return np.mean(dens, axis=0) * strip.period

    def trap(n):
        yv = np.linspace(y_lo, y_hi, n + 1)
        rows = row_profile(yv)
        return float(np.trapezoid(rows, yv))

    # doubling + Richardson: the extrapolated sequence converges O(h^4),
    # so successive extrapolants are compared against the tolerance
    n = ny
    t_prev = trap(n)
    r_prev = None
    for _ in range(max_doublings):
        n *= 2
        t_cur = trap(n)
        r_cur = t_cur + (t_cur - t_prev) / 3.0
        if r_prev is not None and abs(r_cur - r_prev) <= tol:
            return r_cur, abs(r_cur - r_prev)
        t_prev, r_prev = t_cur, r_cur
    return r_prev, abs(r_cur - r_prev)


def total_curvature(ext, *, nx: int = 128, ny: int = 64, tol: float = 1e-9):
    """(integral of K dA over the computed strip, tail estimate).

    The tail estimate extrapolates the catenoid-type exponential decay of
    the row profile s(y) = integral of K F^2 dx past each strip edge: the
    remaining mass beyond an edge row is s_edge / 2 up to a factor
    (1 + tanh)/2 -> 1.  Adding the tail to the value approximates the
    integral over the complete surface.
    """
    y_lo = getattr(ext, "y_lo", None)
    y_hi = getattr(ext, "y_hi", None)
    if y_lo is None or y_hi is None:
        raise ValueError("need y_lo/y_hi strip bounds")
    value, err = strip_curvature_integral(ext, y_lo, y_hi, nx=nx, ny=ny,
                                          tol=tol)
    x = (np.arange(nx) * ext.period / nx)[:, None]
    tail = 0.0
    for edge_y in (y_lo, y_hi):
        forms = fundamental_forms(ext, x, np.full((1, 1), edge_y))
        s = float(np.mean(forms.gauss_curvature * forms.metric) * ext.period)
        tail += 0.5 * s
    return value, tail


# ---------------------------------------------------------------------------
# flux and boundary integrals
# ---------------------------------------------------------------------------

def flux(surface, boundary: str = "gamma1", *, nsamples: int = 256):
    """Conormal flux vector of the position map through one boundary.

    integral over gamma of dpsi/dnu ds with nu the outward conormal; in the
    edge chart nu = -(1/F) d/dy and ds = F dx, so the integrand collapses
    to -psi_y dx and the periodic trapezoid is spectrally accurate.
    """
    if nsamples < 64:
        raise ValueError("need at least 64 boundary samples")
    chart = surface.edge_chart(boundary)
    x = np.arange(nsamples) * chart.period / nsamples
    py = chart.evaluate(x, 0.0, dy=1)
    return -np.mean(py, axis=0) * chart.period


def boundary_integral(surface, boundary: str = "gamma1", *,
                      nsamples: int = 256):
    """integral over gamma of psi ds (the flux partner in the free-boundary
    identity dpsi/dnu = psi)."""
    if nsamples < 64:
        raise ValueError("need at least 64 boundary samples")
    chart = surface.edge_chart(boundary)
    x = np.arange(nsamples) * chart.period / nsamples
    p = chart.evaluate(x, 0.0)
    px = chart.evaluate(x, 0.0, dx=1)
    F = np.sqrt(np.sum(px * px, axis=-1))
    return np.mean(p * F[:, None], axis=0) * chart.period


def boundary_convexity(surface, boundary: str = "gamma1", *,
                       nsamples: int = 256) -> float:
    """Minimum signed geodesic curvature of the boundary circle on S^2.

    The curve's curvature vector is projected onto u = T x position (the
    in-sphere normal of the curve); the overall sign is normalized by the
    mean so the indicator is positive for a consistently convex curve,
    zero for a geodesic (great circle), and dips negative on concave arcs.
    """
    chart = surface.edge_chart(boundary)
    x = np.arange(nsamples) * chart.period / nsamples
    g = chart.evaluate(x, 0.0)
    g1 = chart.evaluate(x, 0.0, dx=1)
    g2 = chart.evaluate(x, 0.0, dx=2)
    speed2 = np.sum(g1 * g1, axis=-1)
    T = g1 / np.sqrt(speed2)[:, None]
    kvec = (g2 - np.sum(g2 * T, axis=-1)[:, None] * T) / speed2[:, None]
    pos = g / np.linalg.norm(g, axis=-1, keepdims=True)
    u = np.cross(T, pos)
    kg = np.sum(kvec * u, axis=-1)
    sbar = 1.0 if float(np.mean(kg)) >= 0.0 else -1.0
    return float(np.min(sbar * kg))


# ---------------------------------------------------------------------------
# Gauss map sampling
# ---------------------------------------------------------------------------

def gauss_map_samples(strip, grid=(48, 24), *, inset: float = 1e-3):
    """Unit normals on a parameter grid; returns (params, normals).

    params is an (n, 2) array of (x, y) chart points, normals the matching
    (n, 3) unit vectors (|n| = 1 to 1e-12 by construction).
    """
    nx, ny = grid
    y_lo = getattr(strip, "y_lo", 0.0)
    y_hi = getattr(strip, "y_hi", None)
    if y_hi is None:
        raise ValueError("need y_lo/y_hi strip bounds")
    x = np.arange(nx) * strip.period / nx
    y = np.linspace(y_lo + inset, y_hi - inset, ny)
    Xg, Yg = np.meshgrid(x, y, indexing="ij")
    forms = fundamental_forms(strip, Xg.ravel(), Yg.ravel())
    params = np.column_stack([Xg.ravel(), Yg.ravel()])
    return params, forms.normal


def injectivity_scan(strip, grid=(48, 24), *, min_sep: float = 0.35) -> float:
    """Minimum angular distance between normals at parameter-distant points.

    Pairs closer than `min_sep` in the chart (x wrapped mod the period) are
    skipped — neighbors legitimately have nearby normals.  A return value
    near zero flags a non-injective Gauss map on the sampled region (e.g.
    a plane); a value bounded away from zero is sampling evidence of
    injectivity, not a proof.
    """
    params, normals = gauss_map_samples(strip, grid)
    P = strip.period
    dx = np.abs(params[:, None, 0] - params[None, :, 0])
    dx = np.minimum(dx, P - dx)
    dy = params[:, None, 1] - params[None, :, 1]
    far = np.hypot(dx, dy) >= min_sep
    dots = np.clip(normals @ normals.T, -1.0, 1.0)
    ang = np.arccos(dots)
    if not np.any(far):
        raise ValueError("grid too coarse for the separation threshold")
    return float(np.min(ang[far]))


# ---------------------------------------------------------------------------
# superharmonicity of -log r
# ---------------------------------------------------------------------------

def superharmonic_checks(surface, nsamples: int = 1000, *, h: float = 1e-2,
                         seed: int = 0) -> dict:
    """Distance-function identities on a minimal strip, by finite differences.

    Checks, with r = |psi| and the surface Laplacian (1/F^2) (flat Delta):
    Delta r^2 = 4 (sup residual), Delta(-log r) <= 0 (max of the chart
    Laplacian reported as `superharmonic_margin` -- same sign as the
    surface Laplacian; nonpositive up to round-off for minimal input),
    and on each free sphere circle the boundary data of k = -log r:
    k = 0 and dk/dnu = 1 for the inward conormal.  The Laplacian uses
    5-point stencils at steps h and h/2 with Richardson extrapolation, so
    the whole check is independent of the exact-derivative code paths.
    """
    y_lo = getattr(surface, "y_lo", None)
    y_hi = getattr(surface, "y_hi", None)
    if y_lo is None or y_hi is None:
        raise ValueError("need y_lo/y_hi strip bounds")
    rng = np.random.RandomState(seed)
    # the -log r check tolerates a larger step (its sign has real slack in
    # the interior) and needs one: dividing the stencil round-off by h^2 and
    # then by a small F^2 would otherwise swamp a 1e-9 margin
    h_k = 2.5 * h
    margin = 2.5 * h_k
    x = rng.uniform(0.0, surface.period, nsamples)
    y = rng.uniform(y_lo + margin, y_hi - margin, nsamples)

    def r2(X, Y):
        p = surface.evaluate(X, Y)
        return np.sum(p * p, axis=-1)

    def neglogr(X, Y):
        return -0.5 * np.log(r2(X, Y))

    def flat_laplacian(f, X, Y, step):
        return (f(X + step, Y) + f(X - step, Y) + f(X, Y + step)
                + f(X, Y - step) - 4.0 * f(X, Y)) / step ** 2

    def laplacian(f, X, Y, step):
        a = flat_laplacian(f, X, Y, step)
        b = flat_laplacian(f, X, Y, step / 2)
        return (4.0 * b - a) / 3.0

    px = surface.evaluate(x, y, dx=1)
    F2 = np.sum(px * px, axis=-1)
    lap_r2 = laplacian(r2, x, y, h) / F2
    # sign check only, so skip the 1/F^2 factor: F^2 > 0 means the chart
    # Laplacian has the same sign as the surface one, and dividing by a
    # factor as small as e^{-2 y_max} would amplify stencil round-off past
    # any usable margin on deep strips
    lap_k = laplacian(neglogr, x, y, h_k)
    out = {
        "nsamples": int(nsamples),
        "r2_residual": float(np.max(np.abs(lap_r2 - 4.0))),
        "superharmonic_margin": float(np.max(lap_k)),
        "boundary_value_residual": None,
        "boundary_neumann_residual": None,
    }
    edges = getattr(surface, "edges", None)
    if callable(edges):
        vres, nres = 0.0, 0.0
        free = [e for e in surface.edges() if e.free]
        for edge in free:
            chart = surface.edge_chart(edge.name)
            xb = np.arange(256) * chart.period / 256
            p = chart.evaluate(xb, 0.0)
            r = np.linalg.norm(p, axis=-1)
            vres = max(vres, float(np.max(np.abs(np.log(r)))))
            py = chart.evaluate(xb, 0.0, dy=1)
            pxb = chart.evaluate(xb, 0.0, dx=1)
            F = np.sqrt(np.sum(pxb * pxb, axis=-1))
            # inward conormal is +(1/F) d/dy in the edge chart
            dk = -np.sum(p * py, axis=-1) / (r ** 2 * F)
            nres = max(nres, float(np.max(np.abs(dk - 1.0))))
        if free:
            out["boundary_value_residual"] = vres
            out["boundary_neumann_residual"] = nres
    return out


# ---------------------------------------------------------------------------
# line-of-curvature normal form
# ---------------------------------------------------------------------------

def curvature_line_forms_check(strip, *, grid=(64, 17), inset: float = 1e-3,
                               k_floor: float = 1e-10) -> dict:
    """Residuals of I = (1/kp)(dX^2 + dY^2), II = dX^2 - dY^2 after scaling.

    kp = sqrt(-K) is the principal curvature magnitude; the claim is that
    rescaling the chart by sqrt(c) (c the Hopf constant) turns the two
    forms into the stated normal form, with the chart axes as curvature
    lines.  Vanishing-curvature input (a plane) has no such normal form and
    comes back with status "skipped".  Inputs whose chart axes are not
    curvature lines report only the off-diagonal residual.
    """
    nx, ny = grid
    y_lo = getattr(strip, "y_lo", 0.0)
    y_hi = getattr(strip, "y_hi", None)
    if y_hi is None:
        raise ValueError("need y_lo/y_hi strip bounds")
    x = (np.arange(nx) * strip.period / nx)[:, None]
    y = np.linspace(y_lo + inset, y_hi - inset, ny)[None, :]
    forms = fundamental_forms(strip, x, y)
    K = forms.gauss_curvature
    if float(np.max(np.abs(K))) <= k_floor:
        return {"status": "skipped", "reason": "curvature vanishes",
                "scale": 0.0, "offdiag_residual": float(np.max(np.abs(forms.sec_xy)))}
    if float(np.max(K)) >= 0.0:
        return {"status": "skipped", "reason": "curvature not negative",
                "scale": 0.0, "offdiag_residual": float(np.max(np.abs(forms.sec_xy)))}
    fz = 0.5 * (forms.sec_xx - forms.sec_yy) - 1j * forms.sec_xy
    q = -(strip.period / (2 * math.pi)) ** 2 * fz
    c_est = float(np.mean(np.abs(q)))
    kp = np.sqrt(-K)
    sgn = 1.0 if float(np.mean(forms.sec_xx)) >= 0.0 else -1.0
    first = float(np.max(np.abs(forms.metric * kp - c_est)))
    second = max(float(np.max(np.abs(sgn * forms.sec_xx - c_est))),
                 float(np.max(np.abs(sgn * forms.sec_yy + c_est))))
    offdiag = float(np.max(np.abs(forms.sec_xy)))
    status = "ok" if offdiag <= 1e-6 * max(1.0, c_est) else "offdiagonal-only"
    return {"status": status, "scale": c_est, "i_residual": first,
            "ii_residual": second, "offdiag_residual": offdiag}


# ---------------------------------------------------------------------------
# assembled report
# ---------------------------------------------------------------------------

@dataclass
class CurvatureReport:
    """Bundled curvature/flux/convexity diagnostics of one strip object."""

    beta_sup: float
    alpha_mean: float
    alpha_std: float
    hopf_constant: float
    k_max: float
    k_min: float
    total_curvature: float
    curvature_tail: float
    flux_vectors: dict
    flux_sum: list
    convexity: dict
    line_forms: dict

    def passes_minimal(self, tol: float = 1e-6) -> bool:
        return self.beta_sup <= tol and self.k_max < 0.0


def curvature_report(strip, source=None, *, grid=(64, 33)) -> CurvatureReport:
    """Run the geometry verifiers over a strip object.

    `source` (a surface with free edges) supplies the boundary circles for
    flux and convexity; pass the original surface when `strip` is an
    extension or a bare chart.  When omitted, `strip` itself is used if it
    has edges, else the boundary entries stay empty.
    """
    if source is None and callable(getattr(strip, "edges", None)):
        source = strip
    nx, ny = grid
    y_lo = getattr(strip, "y_lo", 0.0)
    y_hi = getattr(strip, "y_hi")
    x = (np.arange(nx) * strip.period / nx)[:, None]
    y = np.linspace(y_lo + 1e-3, y_hi - 1e-3, ny)[None, :]
    forms = fundamental_forms(strip, x, y)
    fzv = 0.5 * (forms.sec_xx - forms.sec_yy) - 1j * forms.sec_xy
    q = -(strip.period / (2 * math.pi)) ** 2 * fzv
    alpha, beta = np.real(q), np.imag(q)
    value, tail = total_curvature(strip, nx=nx)
    fluxes, conv = {}, {}
    fsum = np.zeros(3)
    if source is not None:
        for edge in source.edges():
            if not edge.free:
                continue
            v = flux(source, edge.name)
            fluxes[edge.name] = [float(t) for t in v]
            fsum = fsum + v
            conv[edge.name] = boundary_convexity(source, edge.name)
    return CurvatureReport(
        beta_sup=float(np.max(np.abs(beta))),
        alpha_mean=float(np.mean(alpha)),
        alpha_std=float(np.std(alpha)),
        hopf_constant=float(np.mean(np.abs(q))),
        k_max=float(np.max(forms.gauss_curvature)),
        k_min=float(np.min(forms.gauss_curvature)),
        total_curvature=value,
        curvature_tail=tail,
        flux_vectors=fluxes,
        flux_sum=[float(t) for t in fsum],
        convexity=conv,
        line_forms=curvature_line_forms_check(strip),
    )
