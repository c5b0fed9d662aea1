"""Reflection of a free-boundary surface across its sphere circle.

Pipeline, per component psi_j of a surface meeting the unit sphere
orthogonally along an edge:

1. renormalize the boundary parameter (X = arc length along the edge) and
   sample the Cauchy traces there,

       g_j(X) = psi_j(x(X), 0),      f_j(X) = (dpsi_j/dy)(x(X), 0) / F(x(X));

2. solve the strip Cauchy problem -> phi_j, the component in normalized
   coordinates Z = X + iY;

3. complete holomorphically, phi_j = Re Phi_j, and form the boundary field

       Lambda_j = i Phi_j - sigma Phi_j'   (sigma = +1 interior, -1 exterior);

   the free-boundary condition is Im Lambda_j = 0 on the axis, so Lambda_j
   extends across it by Schwarz symmetry;

4. solve the field equation back for the continued Phi_j mode-by-mode, with
   the homogeneous freedom C e^{i sigma Z} pinned by a least-squares fit of
   the axis trace (cos X and sin X are independent on the axis, so C is
   unique); the reflected surface is psi*_j = Re Phi_j on the mirror strip
   Y < 0.

The mode solve is closed-form; an independent fixed-step RK4 integration of
the same field ODE down vertical segments (`rk4_disagreement`) cross-checks
it and is kept deliberately separate from the primary path.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .harmonic import CauchyData, TrigPolynomial, fourier_analyze, solve_cauchy
from .holomorphic import HolomorphicModel, holomorphic_completion, lambda_field
from .normalization import (
    NormalizationMap,
    boundary_conformal_factor,
    build_normalization,
    find_branch_points,
)
from .surfaces import Edge, EdgeChart, verify_steklov

__all__ = [
    "verify_schwarz_condition",
    "schwarz_extend",
    "solve_reflection_ode",
    "ReflectedPatch",
    "PatchSurface",
    "reflect_patch",
    "rk4_disagreement",
]

RESONANCE_TOL = 1e-9


# ---------------------------------------------------------------------------
# Schwarz condition
# ---------------------------------------------------------------------------

def verify_schwarz_condition(lam: HolomorphicModel, *,
                             nsamples: int = 512) -> float:
    """sup |Im Lambda| over one period of the axis.

    Zero (to round-off) exactly when the underlying surface meets the
    sphere orthogonally along the edge; otherwise the sup is the pointwise
    defect g + f of the normalized Cauchy traces.
    """
    X = np.arange(nsamples) * lam.period / nsamples
    return float(np.max(np.abs(np.imag(lam.value(X + 0j)))))


def schwarz_extend(lam: HolomorphicModel, *, tol: float = 1e-6,
                   nsamples: int = 512) -> HolomorphicModel:
    """Extend Lambda across the axis by Schwarz symmetry.

    Verifies Im Lambda = 0 on the axis to `tol` (raising otherwise: the
    surface is not orthogonal along this edge and has no reflection), then
    projects the coefficients onto the symmetric family c_{-w} = conj(c_w),
    real affine row, real quad.  The projection changes coefficients by at
    most the measured axis defect; after it, Lambda(conj Z) = conj Lambda(Z)
    holds identically, which the tests verify at reflected point pairs.
    """
    resid = verify_schwarz_condition(lam, nsamples=nsamples)
    if not resid <= tol:
        raise ValueError(
            "Schwarz condition fails: sup |Im Lambda| = %.3e > %.1e "
            "(edge not orthogonal to the sphere)" % (resid, tol))
    return lam.symmetrized()


# ---------------------------------------------------------------------------
# the field equation i*Phi - sigma*Phi' = Lambda
# ---------------------------------------------------------------------------

def solve_reflection_ode(lam: HolomorphicModel, trace: TrigPolynomial,
                         sigma: int = +1) -> HolomorphicModel:
    """Solve i*Phi - sigma*Phi' = Lambda with Re Phi = trace on the axis.

    Mode (c0 + c1 Z) e^{iwZ} with w != sigma:

        q1 = c1 / (i (1 - sigma w)),   q0 = (c0 + sigma q1) / (i (1 - sigma w));

    at the resonant frequency |w - sigma| <= 1e-9 the particular solution
    is secular, -sigma c0 * Z e^{i sigma Z} (a Z-linear coefficient there
    would need a Z^2 secular term and is reported as an error; it cannot
    arise from plain trigonometric traces).  The affine/quad rows solve the
    same triangular system.  The remaining freedom is C e^{i sigma Z}; C is
    the least-squares fit of Re Phi to the trace at 4N+1 uniform axis
    points, which is an interpolation-exact system because cos X and sin X
    are linearly independent of every data mode.
    """
    if sigma not in (+1, -1):
        raise ValueError("sigma must be +1 or -1")
    Phi = HolomorphicModel(lam.period)
    for w, c0, c1 in lam.terms:
        if abs(w) <= 1e-15:
            continue  # affine row handled below with the quad term
        if abs(w - sigma) <= RESONANCE_TOL:
            if abs(c1) > 1e-12:
                raise ValueError("resonant mode carries a secular source; "
                                 "cannot represent the solution in-family")
            Phi.add_term(sigma, 0.0, -sigma * c0)
            continue
        f = 1j * (1.0 - sigma * w)
        q1 = c1 / f
        q0 = (c0 + sigma * q1) / f
        Phi.add_term(w, q0, q1)
    # affine + quadratic rows:  i(q0+q1 Z+q2 Z^2) - sigma(q1+2 q2 Z) = p0+p1 Z+P Z^2
    p0, p1 = lam.coefficient(0.0)
    P = lam.quad
    q2 = -1j * P
    q1 = -1j * (p1 + 2.0 * sigma * q2)
    q0 = -1j * (p0 + sigma * q1)
    if q2 != 0.0:
        Phi.quad = q2
    if q0 != 0.0 or q1 != 0.0:
        Phi.add_term(0.0, q0, q1)
    # homogeneous freedom C e^{i sigma Z} from the axis trace
    N = max(trace.nmodes, 1)
    M = 4 * N + 1
    X = np.arange(M) * lam.period / M
    resid = trace(X) - np.real(Phi.value(X + 0j))
    A = np.column_stack([np.cos(X), -sigma * np.sin(X)])
    sol, *_ = np.linalg.lstsq(A, resid, rcond=None)
    C = complex(sol[0], sol[1])
    if abs(C) > 1e-13 * max(1.0, float(np.max(np.abs(trace(X))))):
        Phi.add_term(float(sigma), C)
    fit = trace(X) - np.real(Phi.value(X + 0j))
    sup = float(np.max(np.abs(fit)))
    if sup > 1e-6 * max(1.0, float(np.max(np.abs(trace(X))))):
        raise ArithmeticError("axis trace not reproduced after the mode "
                              "solve (sup defect %.3e)" % sup)
    return Phi


# ---------------------------------------------------------------------------
# the patch
# ---------------------------------------------------------------------------

@dataclass
class ReflectedPatch:
    """Analytic continuation of a surface across one sphere edge.

    Lives in the edge chart of the source surface: (x, y) with the edge at
    y = 0 and the source at y > 0; the patch's own domain is the mirror
    strip y < 0.  Evaluation composes the normalization with the completed
    models, so values and derivatives are closed-form everywhere.
    """

    charts: object                  # source EdgeChart
    nm: NormalizationMap
    models: list                    # three HolomorphicModel (components)
    lambdas: list                   # the (symmetrized) boundary fields
    sigma: int
    schwarz_residual: float
    steklov_sup: float
    punctures: object
    depth: float                    # usable mirror depth in source y units

    @property
    def period(self) -> float:
        return self.charts.period

    def evaluate_model(self, X, Y):
        """psi* components straight from the models, in Z-chart coords."""
        X = np.asarray(X, dtype=float)
        Y = np.asarray(Y, dtype=float)
        Z = X + 1j * Y
        vals = [np.real(m.value(Z)) for m in self.models]
        return np.stack(np.broadcast_arrays(*vals), axis=-1)

    def evaluate(self, x, y, dx: int = 0, dy: int = 0):
        """psi* in source-chart coordinates (mirror side y <= 0).

        Derivatives by the chain rule through Z = H(x + iy): for u = Re G
        with G = Phi o H holomorphic,

            u_x = Re G', u_y = -Im G', u_xx = Re G'', u_xy = -Im G'',
            u_yy = -Re G''  (G' = Phi' H',  G'' = Phi'' H'^2 + Phi' H'').
        """
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        z = x + 1j * y
        Z = self.nm.map(z)
        out = []
        for m in self.models:
            if dx + dy == 0:
                out.append(np.real(m.value(Z)))
                continue
            dH = self.nm.derivative(z)
            G1 = m.derivative()
            g1 = G1.value(Z) * dH
            if dx + dy == 1:
                out.append(np.real(g1) if dx == 1 else -np.imag(g1))
            elif dx + dy == 2:
                g2 = G1.derivative().value(Z) * dH * dH \
                    + G1.value(Z) * self.nm.second(z)
                if dx == 2:
                    out.append(np.real(g2))
                elif dy == 2:
                    out.append(-np.real(g2))
                else:
                    out.append(-np.imag(g2))
            else:
                raise NotImplementedError("derivatives up to total order 2")
        return np.stack(np.broadcast_arrays(*out), axis=-1)

    def conformal_factor(self, x, y):
        px = self.evaluate(x, y, dx=1)
        return np.sqrt(np.sum(px * px, axis=-1))

    def as_surface(self) -> "PatchSurface":
        return PatchSurface(self)

    def seam_defect(self, nsamples: int = 256) -> dict:
        """C^1 agreement on the axis: patch vs source values and y-derivs."""
        x = np.arange(nsamples) * self.period / nsamples
        dv = self.evaluate(x, 0.0) - self.charts.evaluate(x, 0.0)
        dd = self.evaluate(x, 0.0, dy=1) - self.charts.evaluate(x, 0.0, dy=1)
        return {
            "value_sup": float(np.max(np.abs(dv))),
            "dy_sup": float(np.max(np.abs(dd))),
        }


class PatchSurface:
    """A ReflectedPatch re-wrapped as a surface above its sphere edge.

    Chart (x, s) with s = -y >= 0, so the mirror strip sits above the axis
    and can be fed back into the reflection machinery (e.g. to reflect an
    exterior patch back inside, recovering the source)."""

    def __init__(self, patch: ReflectedPatch):
        self.patch = patch
        self.period = patch.period
        self.y_lo, self.y_hi = 0.0, patch.depth
        self._edges = [Edge("gamma1", 0.0, +1, True)]

    def evaluate(self, x, s, dx: int = 0, dy: int = 0):
        out = self.patch.evaluate(x, -np.asarray(s, dtype=float), dx=dx, dy=dy)
        return -out if dy % 2 == 1 else out

    def conformal_factor(self, x, s):
        px = self.evaluate(x, s, dx=1)
        return np.sqrt(np.sum(px * px, axis=-1))

    def edges(self):
        return list(self._edges)

    def edge(self, name):
        if name != "gamma1":
            raise KeyError(name)
        return self._edges[0]

    def edge_chart(self, name):
        return EdgeChart(self, self.edge(name))

    def is_exterior_at(self, edge, eps: float = 1e-3):
        x = np.linspace(0.0, self.period, 16, endpoint=False)
        p = self.evaluate(x, eps)
        return bool(np.mean(np.linalg.norm(p, axis=-1)) > 1.0)


def reflect_patch(surface, edge: str = "gamma1", *, nmodes: int = 32,
                  tol_steklov: float = 1e-8, tol_schwarz: float = 1e-6,
                  scan_punctures: bool = True) -> ReflectedPatch:
    """Reflect `surface` across the named sphere edge.

    Preconditions enforced: the edge lies on the unit sphere and satisfies
    the orthogonality (Steklov) condition to `tol_steklov`; the boundary
    fields satisfy the Schwarz condition to `tol_schwarz` (these agree up to
    normalization, so the second is a consistency check of the construction
    rather than an independent constraint).
    """
    chart = surface if isinstance(surface, EdgeChart) \
        else surface.edge_chart(edge)
    rep = verify_steklov(chart, nsamples=max(256, 4 * nmodes), tol=tol_steklov)
    if not rep.passes:
        raise ValueError("edge %r fails the free-boundary condition: %s"
                         % (edge, rep.summary()))
    sigma = -1 if chart.exterior else +1

    factor = boundary_conformal_factor(chart, nmodes=nmodes)
    nm = build_normalization(factor)

    # Cauchy traces at uniform stations of the normalized boundary parameter
    M = 2 * nmodes + 1
    P = nm.period_out
    Xs = np.arange(M) * P / M
    xs = nm.invert_axis(Xs)
    g = chart.evaluate(xs, 0.0)
    fy = chart.evaluate(xs, 0.0, dy=1)
    F = factor(xs)
    models, lambdas = [], []
    schwarz = 0.0
    for j in range(3):
        noise = 1e-13 * max(1.0, float(np.max(np.abs(g[..., j]))),
                            float(np.max(np.abs(fy[..., j] / F))))
        gj = fourier_analyze(g[..., j], P).trimmed(noise)
        fj = fourier_analyze(fy[..., j] / F, P).trimmed(noise)
        phi = solve_cauchy(CauchyData(gj, fj))
        Phi = holomorphic_completion(phi)
        lam = lambda_field(Phi, sigma)
        schwarz = max(schwarz, verify_schwarz_condition(lam))
        lam = schwarz_extend(lam, tol=tol_schwarz)
        models.append(solve_reflection_ode(lam, gj, sigma))
        lambdas.append(lam)

    punctures = None
    if scan_punctures:
        h = min(chart.height, nm.factor.period)
        punctures = find_branch_points(
            nm, (0.0, nm.period_in, -h, h), grid=(16, 8))
        if len(punctures):
            raise ArithmeticError(
                "normalization degenerates at %d point(s) near the edge; "
                "reflection domain is punctured" % len(punctures))

    depth = float(np.min(np.imag(nm.map(
        np.linspace(0, chart.period, 64, endpoint=False) + 1j * chart.height))))
    slope = 0.5 * factor.a[0]
    return ReflectedPatch(
        charts=chart, nm=nm, models=models, lambdas=lambdas, sigma=sigma,
        schwarz_residual=schwarz, steklov_sup=rep.sup_residual,
        punctures=punctures, depth=depth / slope)


# ---------------------------------------------------------------------------
# independent ODE verification (RK4 path integration)
# ---------------------------------------------------------------------------

def rk4_disagreement(patch: ReflectedPatch, depth: float, *,
                     ncols: int = 64, nsteps: int = 256) -> float:
    """Compare the mode solve against RK4 integration of the field ODE.

    Integrates dPhi/dZ = sigma (i Phi - Lambda) along vertical segments
    from the axis down to Y = -depth (normalized units) for `ncols` starting
    stations, all components, fixed-step classical RK4, and returns the sup
    endpoint disagreement against the closed-form models.
    """
    sigma = patch.sigma
    P = patch.models[0].period
    X0 = np.arange(ncols) * P / ncols
    hstep = depth / nsteps
    worst = 0.0
    for m, lam in zip(patch.models, patch.lambdas):
        # dPhi/dt along Z(t) = X0 - i t:  dPhi/dt = -i Phi'(Z) = sigma(Phi + i Lam)
        phi = m.value(X0 + 0j)

        def rhs(t, p):
            Z = X0 - 1j * t
            return sigma * (p + 1j * lam.value(Z))

        t = 0.0
        for _ in range(nsteps):
            k1 = rhs(t, phi)
            k2 = rhs(t + 0.5 * hstep, phi + 0.5 * hstep * k1)
            k3 = rhs(t + 0.5 * hstep, phi + 0.5 * hstep * k2)
            k4 = rhs(t + hstep, phi + hstep * k3)
            phi = phi + (hstep / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
            t += hstep
        exact = m.value(X0 - 1j * depth)
        worst = max(worst, float(np.max(np.abs(phi - exact))))
    return worst
