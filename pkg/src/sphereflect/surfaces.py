"""Catalog of conformal strip-parametrized surfaces and their sphere edges.

All surfaces here are maps Psi(x, y) from a periodic strip into R^3 that are
conformal and componentwise harmonic (except the round-sphere control patch,
which is conformal but *not* harmonic -- it exists so negative tests have
something honest to fail on).  Boundary circles that lie on the unit sphere
are tracked as named edges; `verify_steklov` measures how far an edge is from
meeting the sphere orthogonally, which for these surfaces is equivalent to
the boundary condition

    interior surface:   Psi = + dPsi/dnu   (outward conormal nu)
    exterior surface:   Psi = - dPsi/dnu

holding pointwise along the edge.

The distinguished example is the critical catenoid

    Psi(x, y) = c (cosh y cos x, cosh y sin x, y),   |y| < t0,

where t0 solves t*tanh(t) = 1 and c = 1/(t0 cosh t0); both its boundary
circles meet the unit sphere orthogonally.  A scaled catenoid band with
|y| < fraction*t0 still has its boundary on the sphere but meets it at an
angle, which shows up as a Steklov residual bounded away from zero.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .harmonic import (
    CauchyData,
    HarmonicStripFunction,
    TrigPolynomial,
    _cos_shift,
    _sin_shift,
    solve_cauchy,
)

__all__ = [
    "catenoid_constants",
    "AnalyticSurface",
    "Edge",
    "EdgeChart",
    "critical_catenoid",
    "noncritical_catenoid",
    "catenoid_band",
    "equatorial_disk",
    "sphere_patch",
    "CauchySurface",
    "verify_steklov",
    "SteklovReport",
    "encode_surface",
    "load_surface",
]


# ---------------------------------------------------------------------------
# catenoid constants
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def catenoid_constants():
    """Solve t*tanh(t) = 1 and derive the critical catenoid's constants.

    Bisection on [1, 1.5] to absolute tolerance 1e-12 (the bracket holds:
    1*tanh(1)-1 < 0 < 1.5*tanh(1.5)-1).  Returns a dict with

    t0       root of t*tanh(t) = 1
    c        scale factor 1/(t0*cosh(t0)); also the neck radius
    kappa    boundary circle radius c*cosh(t0) = tanh(t0) = 1/t0
    height   half-height of the strip (= t0)
    """
    lo, hi = 1.0, 1.5
    f = lambda t: t * math.tanh(t) - 1.0
    if not (f(lo) < 0.0 < f(hi)):
        raise RuntimeError("bisection bracket lost")
    while hi - lo > 1e-12:
        mid = 0.5 * (lo + hi)
        if f(mid) < 0.0:
            lo = mid
        else:
            hi = mid
    t0 = 0.5 * (lo + hi)
    c = 1.0 / (t0 * math.cosh(t0))
    return {
        "t0": t0,
        "c": c,
        "kappa": c * math.cosh(t0),
        "height": t0,
    }


# ---------------------------------------------------------------------------
# surface base class and edges
# ---------------------------------------------------------------------------

@dataclass
class Edge:
    """A horizontal boundary line of the strip, possibly on the unit sphere.

    `side` is +1 when the surface lies at y > y0 (bottom edge) and -1 when
    it lies at y < y0 (top edge).
    """

    name: str
    y0: float
    side: int
    free: bool = True


class AnalyticSurface:
    """Base: conformal map of the strip [0,L) x (y_lo, y_hi) into R^3."""

    period: float
    y_lo: float
    y_hi: float

    def evaluate(self, x, y, dx: int = 0, dy: int = 0):
        """Partial d^dx_x d^dy_y Psi at (x, y); returns shape (..., 3)."""
        raise NotImplementedError

    # -- derived quantities -------------------------------------------------

    def conformal_factor(self, x, y):
        """F = |Psi_x| (= |Psi_y| by conformality)."""
        px = self.evaluate(x, y, dx=1)
        return np.sqrt(np.sum(px * px, axis=-1))

    def normal(self, x, y):
        """Unit normal Psi_x ^ Psi_y / |...| in this chart's orientation."""
        px = self.evaluate(x, y, dx=1)
        py = self.evaluate(x, y, dy=1)
        n = np.cross(px, py)
        return n / np.linalg.norm(n, axis=-1, keepdims=True)

    def edges(self) -> list:
        return list(self._edges)

    def edge(self, name: str) -> Edge:
        for e in self._edges:
            if e.name == name:
                return e
        raise KeyError("surface has no edge named %r (have %s)"
                       % (name, [e.name for e in self._edges]))

    def edge_chart(self, name: str) -> "EdgeChart":
        return EdgeChart(self, self.edge(name))

    def is_exterior_at(self, edge: Edge, eps: float = 1e-3) -> bool:
        """Whether the surface sits outside the unit ball near this edge."""
        x = np.linspace(0.0, self.period, 16, endpoint=False)
        p = self.evaluate(x, edge.y0 + edge.side * eps)
        return bool(np.mean(np.linalg.norm(p, axis=-1)) > 1.0)


class EdgeChart:
    """View of a surface near one edge: edge at y=0, surface at y>0.

    For a top edge the view flips y, which flips the chart's orientation;
    every identity used downstream (conformality, harmonicity, the Steklov
    condition) is orientation-independent, so the flip is harmless and keeps
    a single code path for both edges.
    """

    def __init__(self, surface: AnalyticSurface, edge: Edge):
        self.surface = surface
        self.edge = edge
        self.period = surface.period
        if edge.side > 0:
            self.height = surface.y_hi - edge.y0
        else:
            self.height = edge.y0 - surface.y_lo
        self.exterior = surface.is_exterior_at(edge)
        # strip-object bounds, so charts duck-type wherever a y-range is read
        self.y_lo, self.y_hi = 0.0, self.height

    def to_source(self, y):
        return self.edge.y0 + self.edge.side * np.asarray(y, dtype=float)

    def evaluate(self, x, y, dx: int = 0, dy: int = 0):
        out = self.surface.evaluate(x, self.to_source(y), dx=dx, dy=dy)
        if self.edge.side < 0 and dy % 2 == 1:
            out = -out
        return out

    def conformal_factor(self, x, y):
        px = self.evaluate(x, y, dx=1)
        return np.sqrt(np.sum(px * px, axis=-1))


# ---------------------------------------------------------------------------
# catalog surfaces
# ---------------------------------------------------------------------------

class CatenoidBand(AnalyticSurface):
    """Psi = s (cosh y cos x, cosh y sin x, y) over |y| < t_max."""

    def __init__(self, scale: float, t_max: float, free_edges: bool = True):
        self.scale = scale
        self.period = 2.0 * math.pi
        self.y_lo, self.y_hi = -t_max, t_max
        self._edges = [
            Edge("gamma1", t_max, -1, free_edges),
            Edge("gamma2", -t_max, +1, free_edges),
        ]

    def evaluate(self, x, y, dx: int = 0, dy: int = 0):
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        s = self.scale
        cy = np.cosh(y) if dy % 2 == 0 else np.sinh(y)
        p1 = s * cy * _cos_shift(x, dx)
        p2 = s * cy * _sin_shift(x, dx)
        if dx == 0 and dy == 0:
            p3 = s * y
        elif dx == 0 and dy == 1:
            p3 = np.full(np.broadcast(x, y).shape, s)
        else:
            p3 = np.zeros(np.broadcast(x, y).shape)
        return np.stack(np.broadcast_arrays(p1, p2, p3), axis=-1)


def critical_catenoid() -> CatenoidBand:
    """The catenoid whose boundary circles meet the unit sphere orthogonally."""
    k = catenoid_constants()
    return CatenoidBand(k["c"], k["t0"])


def noncritical_catenoid(fraction: float) -> CatenoidBand:
    """Catenoid band |y| < fraction*t0, rescaled so the boundary still lies
    on the unit sphere (but meets it at an angle unless fraction = 1)."""
    if not 0.0 < fraction:
        raise ValueError("fraction must be positive")
    k = catenoid_constants()
    t_max = fraction * k["t0"]
    scale = 1.0 / math.hypot(math.cosh(t_max), t_max)
    return CatenoidBand(scale, t_max)


def catenoid_band(t_max: float) -> CatenoidBand:
    """Critical-scale catenoid band |y| < t_max (edges not on the sphere
    unless t_max = t0); used as the closed-form model of the extension."""
    k = catenoid_constants()
    return CatenoidBand(k["c"], t_max, free_edges=False)


class EquatorialDisk(AnalyticSurface):
    """Punctured flat unit disk Psi = e^{-y} (cos x, sin x, 0), y in (0, y_max)."""

    def __init__(self, y_max: float = 8.0):
        self.period = 2.0 * math.pi
        self.y_lo, self.y_hi = 0.0, y_max
        self._edges = [Edge("gamma1", 0.0, +1, True)]

    def evaluate(self, x, y, dx: int = 0, dy: int = 0):
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        ey = (-1.0) ** dy * np.exp(-y)
        p1 = ey * _cos_shift(x, dx)
        p2 = ey * _sin_shift(x, dx)
        p3 = np.zeros(np.broadcast(x, y).shape)
        return np.stack(np.broadcast_arrays(p1, p2, p3), axis=-1)


def equatorial_disk(y_max: float = 8.0) -> EquatorialDisk:
    return EquatorialDisk(y_max)


class SpherePatch(AnalyticSurface):
    """Round sphere of radius R in conformal (Mercator) coordinates.

    Conformal but not harmonic and not minimal: the negative control for
    checks that are supposed to detect non-minimal input.
    """

    def __init__(self, radius: float = 1.0, y_lo: float = -1.0, y_hi: float = 1.0):
        self.radius = radius
        self.period = 2.0 * math.pi
        self.y_lo, self.y_hi = y_lo, y_hi
        self._edges = [Edge("gamma1", y_lo, +1, False)]

    def evaluate(self, x, y, dx: int = 0, dy: int = 0):
        if dx + dy > 2:
            raise NotImplementedError("sphere patch: derivatives up to order 2")
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        R = self.radius
        s, t = 1.0 / np.cosh(y), np.tanh(y)
        if dy == 0:
            fy, gy = s, t
        elif dy == 1:
            fy, gy = -s * t, s * s
        else:
            fy, gy = s * (t * t - s * s), -2.0 * s * s * t
        p1 = R * fy * _cos_shift(x, dx)
        p2 = R * fy * _sin_shift(x, dx)
        p3 = R * gy if dx == 0 else np.zeros(np.broadcast(x, y).shape)
        return np.stack(np.broadcast_arrays(p1, p2, p3), axis=-1)


def sphere_patch(radius: float = 1.0, y_lo: float = -1.0, y_hi: float = 1.0):
    return SpherePatch(radius, y_lo, y_hi)


# ---------------------------------------------------------------------------
# surfaces reconstructed from axis traces
# ---------------------------------------------------------------------------

class CauchySurface(AnalyticSurface):
    """Surface rebuilt from traces (psi_j, dpsi_j/dy) on the line y = 0.

    Each component solves the strip Cauchy problem in closed form, so the
    surface is exactly harmonic; conformality holds to the extent the traces
    came from a conformal immersion.
    """

    def __init__(self, components, height: float, period: float):
        if len(components) != 3:
            raise ValueError("need exactly three components")
        self.h = list(components)
        self.period = period
        self.y_lo, self.y_hi = 0.0, height
        self._edges = [Edge("gamma1", 0.0, +1, True),
                       Edge("gamma2", height, -1, True)]
        for e in self._edges:
            p = self.evaluate(np.linspace(0, period, 32, endpoint=False), e.y0)
            e.free = bool(np.max(np.abs(np.linalg.norm(p, axis=-1) - 1.0)) < 1e-6)

    @classmethod
    def from_cauchy_data(cls, data_triple, height: float) -> "CauchySurface":
        comps = [solve_cauchy(d) for d in data_triple]
        return cls(comps, height, data_triple[0].period)

    def evaluate(self, x, y, dx: int = 0, dy: int = 0):
        vals = [h.evaluate(x, y, dx=dx, dy=dy) for h in self.h]
        return np.stack(np.broadcast_arrays(*vals), axis=-1)


def encode_surface(surface: AnalyticSurface, edge_name: str = "gamma1",
                   nmodes: int = 32) -> str:
    """Serialize a surface as traces on one edge (text block format).

    The chart written is the edge chart (edge at y=0, surface above), so
    `load_surface` reconstructs the surface in that chart.
    """
    from .harmonic import fourier_analyze

    chart = surface.edge_chart(edge_name)
    M = 2 * nmodes + 1
    x = np.arange(M) * chart.period / M
    lines = ["period=%.17g" % chart.period, "height=%.17g" % chart.height]
    g = chart.evaluate(x, 0.0)
    f = chart.evaluate(x, 0.0, dy=1)
    for j in range(3):
        gj = fourier_analyze(g[..., j], chart.period)
        fj = fourier_analyze(f[..., j], chart.period)
        lines.append("component=%d" % (j + 1))
        lines.append("g:")
        lines.extend(_coeff_lines(gj))
        lines.append("f:")
        lines.extend(_coeff_lines(fj))
    return "\n".join(lines) + "\n"


def _coeff_lines(p: TrigPolynomial, tiny: float = 1e-14):
    out = []
    if abs(p.a[0]) > tiny:
        out.append("a0=%.17g" % p.a[0])
    for n in range(1, p.a.size):
        if abs(p.a[n]) > tiny:
            out.append("a%d=%.17g" % (n, p.a[n]))
        if abs(p.b[n]) > tiny:
            out.append("b%d=%.17g" % (n, p.b[n]))
    if abs(p.b0) > tiny:
        out.append("b0=%.17g" % p.b0)
    return out


def load_surface(text: str) -> CauchySurface:
    """Parse the trace block format written by `encode_surface`.

    Header: `period=`, `height=`.  Then for each component 1..3 a
    `component=<j>` line followed by `g:` and `f:` sections whose lines are
    trig coefficients (`a<n>=`, `b<n>=`, `b0=`).
    """
    period = height = None
    comps = {}
    current = None     # (j, {"g": {...}, "f": {...}})
    section = None
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("period="):
            period = float(line.split("=", 1)[1])
        elif line.startswith("height="):
            height = float(line.split("=", 1)[1])
        elif line.startswith("component="):
            j = int(line.split("=", 1)[1])
            if j not in (1, 2, 3):
                raise ValueError("component index must be 1, 2 or 3")
            comps[j] = {"g": {}, "f": {}}
            current, section = comps[j], None
        elif line in ("g:", "f:"):
            if current is None:
                raise ValueError("trace section before any component= line")
            section = current[line[0]]
        elif "=" in line:
            if section is None:
                raise ValueError("coefficient line outside g:/f: section: %r" % raw)
            key, val = (s.strip() for s in line.split("=", 1))
            section[key] = float(val)
        else:
            raise ValueError("unparseable line: %r" % raw)
    if period is None or height is None:
        raise ValueError("missing period=/height= header")
    if sorted(comps) != [1, 2, 3]:
        raise ValueError("need components 1, 2 and 3; got %s" % sorted(comps))

    def to_poly(d):
        nmax = 0
        for k in d:
            if k[0] in "ab" and k[1:].isdigit():
                nmax = max(nmax, int(k[1:]))
        a, b = np.zeros(nmax + 1), np.zeros(nmax + 1)
        b0 = 0.0
        for k, v in d.items():
            if k == "b0":
                b0 = v
            elif k[0] == "a" and k[1:].isdigit():
                a[int(k[1:])] = v
            elif k[0] == "b" and k[1:].isdigit():
                b[int(k[1:])] = v
            else:
                raise ValueError("unknown coefficient key %r" % k)
        return TrigPolynomial(period, a, b, b0)

    data = [CauchyData(to_poly(comps[j]["g"]), to_poly(comps[j]["f"]))
            for j in (1, 2, 3)]
    return CauchySurface.from_cauchy_data(data, height)


# ---------------------------------------------------------------------------
# Steklov / orthogonality verification
# ---------------------------------------------------------------------------

@dataclass
class SteklovReport:
    """Result of checking Psi = sign * dPsi/dnu along one sphere edge."""

    edge: str
    exterior: bool
    nsamples: int
    radius_defect: float        # sup | |Psi| - 1 | on the edge
    sup_residual: float         # sup pointwise |Psi - sign*dPsi/dnu|
    mean_residual: float
    on_sphere: bool             # radius_defect <= radius_tol
    passes: bool                # on_sphere and sup_residual <= tol

    def summary(self) -> str:
        return ("edge=%s exterior=%s radius_defect=%.3e sup=%.3e mean=%.3e %s"
                % (self.edge, self.exterior, self.radius_defect,
                   self.sup_residual, self.mean_residual,
                   "PASS" if self.passes else "FAIL"))


def verify_steklov(surface: AnalyticSurface, edge_name: str = "gamma1", *,
                   nsamples: int = 256, tol: float = 1e-8,
                   radius_tol: float = 1e-8) -> SteklovReport:
    """Measure the free-boundary condition along a sphere edge.

    The outward conormal in the edge chart (edge at y=0, surface above) is
    -(1/F) d/dy, so the condition reads

        Psi + sign * Psi_y / F = 0,   sign = +1 interior, -1 exterior,

    and the residual reported is the pointwise Euclidean norm of that
    3-vector, sup and mean over `nsamples` edge points.  An edge that is not
    on the unit sphere at all (radius defect beyond `radius_tol`) is a
    distinct failure: `on_sphere` is False and `passes` is False regardless
    of the residual.
    """
    if nsamples < 64:
        raise ValueError("need at least 64 samples along the edge")
    chart = surface.edge_chart(edge_name) if not isinstance(surface, EdgeChart) \
        else surface
    x = np.arange(nsamples) * chart.period / nsamples
    p = chart.evaluate(x, 0.0)
    py = chart.evaluate(x, 0.0, dy=1)
    F = np.sqrt(np.sum(chart.evaluate(x, 0.0, dx=1) ** 2, axis=-1))
    radius_defect = float(np.max(np.abs(np.linalg.norm(p, axis=-1) - 1.0)))
    sign = -1.0 if chart.exterior else 1.0
    resid = p + sign * py / F[..., None]
    norms = np.linalg.norm(resid, axis=-1)
    sup, mean = float(np.max(norms)), float(np.mean(norms))
    on_sphere = radius_defect <= radius_tol
    return SteklovReport(
        edge=chart.edge.name, exterior=chart.exterior, nsamples=nsamples,
        radius_defect=radius_defect, sup_residual=sup, mean_residual=mean,
        on_sphere=on_sphere, passes=bool(on_sphere and sup <= tol))
