"""Conformal renormalization of the boundary parameter along a sphere edge.

Given the conformal factor F(x) = |Psi_x(x, 0)| along an edge, the strip is
re-coordinatized by a holomorphic map

    H(z) = X + iY,   Y(x, 0) = 0,   dY/dy(x, 0) = F(x),   X(0, 0) = 0,

so that the new boundary parameter X is arc length: the renormalized factor
is identically 1 along the edge.  Because F is a trigonometric polynomial,
H is available in closed form:

    H(z) = (a0/2) z + sum_n (1/w_n) [ a_n sin(w_n z) - b_n cos(w_n z) ] + K,

whose derivative H'(z) = a0/2 + sum_n [a_n cos(w_n z) + b_n sin(w_n z)] is
the analytic continuation of F off the axis.  H commutes with conjugation
(H(conj z) = conj H(z)) and maps the axis to the axis.

H fails to be a coordinate change wherever H' = 0; those points are located
by an argument-principle sweep plus Newton polishing (`find_branch_points`)
and reported as punctures to be excluded from any later evaluation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .harmonic import DEPTH_GUARD, TrigPolynomial, fourier_analyze

__all__ = [
    "NormalizationMap",
    "PunctureSet",
    "boundary_conformal_factor",
    "build_normalization",
    "find_branch_points",
    "push_forward",
    "NormalizedSurface",
]


# ---------------------------------------------------------------------------
# the map
# ---------------------------------------------------------------------------

@dataclass
class NormalizationMap:
    """Holomorphic strip reparametrization determined by an axis factor.

    Parameters
    ----------
    factor : TrigPolynomial
        The trace H'(x, 0); strictly positive traces give an actual
        coordinate change near the axis.  (The class itself accepts any
        trace -- synthetic fixtures for the branch-point finder use sign-
        changing ones on purpose; `build_normalization` is the validating
        entry point.)
    """

    factor: TrigPolynomial
    offset: float = field(init=False)

    def __post_init__(self):
        if self.factor.b0 != 0.0:
            raise ValueError("conformal factor trace cannot carry drift")
        # real constant making H(0) = 0 exactly
        self.offset = float(np.sum(self.factor.b[1:] /
                                   self.factor.frequencies()[1:])) \
            if self.factor.a.size > 1 else 0.0

    # -- basic data ---------------------------------------------------------

    @property
    def period_in(self) -> float:
        return self.factor.period

    @property
    def period_out(self) -> float:
        """Image period: X(x + L, y) = X(x, y) + (a0/2) L."""
        return 0.5 * self.factor.a[0] * self.factor.period

    def _check_depth(self, z):
        w = self.factor.frequencies()
        act = np.nonzero((self.factor.a != 0) | (self.factor.b != 0))[0]
        act = act[act > 0]
        if act.size == 0:
            return
        wmax = w[act[-1]]
        ymax = float(np.max(np.abs(np.imag(z))))
        if wmax * ymax > DEPTH_GUARD:
            raise ValueError("normalization evaluated too deep: |w y| = %.3g"
                             % (wmax * ymax))

    # -- evaluation ---------------------------------------------------------

    def map(self, z):
        """H(z) for real or complex z (arrays ok)."""
        z = np.asarray(z, dtype=complex)
        self._check_depth(z)
        a, b = self.factor.a, self.factor.b
        w = self.factor.frequencies()
        out = 0.5 * a[0] * z + self.offset
        for n in range(1, a.size):
            if a[n] == 0.0 and b[n] == 0.0:
                continue
            out = out + (a[n] * np.sin(w[n] * z) - b[n] * np.cos(w[n] * z)) / w[n]
        return out

    def derivative(self, z):
        """H'(z): the analytic continuation of the factor trace."""
        z = np.asarray(z, dtype=complex)
        self._check_depth(z)
        a, b = self.factor.a, self.factor.b
        w = self.factor.frequencies()
        out = np.full(z.shape, 0.5 * a[0], dtype=complex)
        for n in range(1, a.size):
            if a[n] == 0.0 and b[n] == 0.0:
                continue
            out = out + a[n] * np.cos(w[n] * z) + b[n] * np.sin(w[n] * z)
        return out

    def second(self, z):
        """H''(z)."""
        z = np.asarray(z, dtype=complex)
        self._check_depth(z)
        a, b = self.factor.a, self.factor.b
        w = self.factor.frequencies()
        out = np.zeros(z.shape, dtype=complex)
        for n in range(1, a.size):
            if a[n] == 0.0 and b[n] == 0.0:
                continue
            out = out + w[n] * (b[n] * np.cos(w[n] * z) - a[n] * np.sin(w[n] * z))
        return out

    # -- inversion ----------------------------------------------------------

    def invert_axis(self, X, tol: float = 1e-13, maxiter: int = 60):
        """Solve X(x, 0) = X for real x (Newton; monotone when factor > 0)."""
        X = np.asarray(X, dtype=float)
        slope = 0.5 * self.factor.a[0]
        if slope <= 0:
            raise ValueError("axis inversion needs a positive mean factor")
        x = X / slope
        for _ in range(maxiter):
            val = np.real(self.map(x + 0j)) - X
            if np.max(np.abs(val)) <= tol * max(1.0, float(np.max(np.abs(X)))):
                return np.real(x) if X.shape else float(np.real(x))
            dv = np.real(self.derivative(x + 0j))
            if np.min(np.abs(dv)) < 1e-14:
                raise ArithmeticError("axis inversion hit a critical point")
            x = x - val / dv
        raise ArithmeticError("axis inversion did not converge")

    def invert(self, w, tol: float = 1e-13, maxiter: int = 60):
        """Solve H(z) = w in the strip (complex Newton)."""
        w = np.asarray(w, dtype=complex)
        slope = 0.5 * self.factor.a[0]
        z = np.asarray(self.invert_axis(np.real(w)), dtype=complex) \
            + 1j * np.imag(w) / slope
        scale = max(1.0, float(np.max(np.abs(w))))
        for _ in range(maxiter):
            val = self.map(z) - w
            if np.max(np.abs(val)) <= tol * scale:
                return z if w.shape else complex(z)
            dv = self.derivative(z)
            if np.min(np.abs(dv)) < 1e-14:
                raise ArithmeticError("inversion hit a branch point of the map")
            z = z - val / dv
        raise ArithmeticError("inversion did not converge")

    # -- serialization ------------------------------------------------------

    def to_text(self) -> str:
        """Two tagged blocks: the axis trace of X and the axis normal
        derivative of Y (which equals the factor); enough to rebuild H."""
        xtrace = self.axis_trace()
        lines = ["period=%.17g" % self.period_in, "component=X"]
        lines.append("a0=%.17g" % xtrace.a[0])
        for n in range(1, xtrace.a.size):
            if xtrace.a[n] != 0.0:
                lines.append("a%d=%.17g" % (n, xtrace.a[n]))
            if xtrace.b[n] != 0.0:
                lines.append("b%d=%.17g" % (n, xtrace.b[n]))
        lines.append("b0=%.17g" % xtrace.b0)
        lines.append("component=Y")
        lines.append("a0=%.17g" % self.factor.a[0])
        for n in range(1, self.factor.a.size):
            if self.factor.a[n] != 0.0:
                lines.append("a%d=%.17g" % (n, self.factor.a[n]))
            if self.factor.b[n] != 0.0:
                lines.append("b%d=%.17g" % (n, self.factor.b[n]))
        return "\n".join(lines) + "\n"

    def axis_trace(self) -> TrigPolynomial:
        """X(x, 0) as a TrigPolynomial with drift (a0/2 per unit x)."""
        a, b = self.factor.a, self.factor.b
        w = self.factor.frequencies()
        ta = np.zeros_like(a)
        tb = np.zeros_like(b)
        ta[0] = 2.0 * self.offset
        for n in range(1, a.size):
            ta[n] = -b[n] / w[n]
            tb[n] = a[n] / w[n]
        return TrigPolynomial(self.period_in, ta, tb, b0=0.5 * a[0])

    @classmethod
    def from_text(cls, text: str) -> "NormalizationMap":
        period = None
        section = None
        blocks = {"X": {}, "Y": {}}
        for raw in text.splitlines():
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if line.startswith("period="):
                period = float(line.split("=", 1)[1])
            elif line.startswith("component="):
                tag = line.split("=", 1)[1].strip()
                if tag not in ("X", "Y"):
                    raise ValueError("component tag must be X or Y")
                section = blocks[tag]
            elif "=" in line and section is not None:
                k, v = (s.strip() for s in line.split("=", 1))
                section[k] = float(v)
            else:
                raise ValueError("unparseable normalization line: %r" % raw)
        if period is None or not blocks["Y"]:
            raise ValueError("missing period or component=Y block")
        nmax = max((int(k[1:]) for k in blocks["Y"] if k[1:].isdigit()),
                   default=0)
        a, b = np.zeros(nmax + 1), np.zeros(nmax + 1)
        for k, v in blocks["Y"].items():
            if k == "b0":
                continue
            (a if k[0] == "a" else b)[int(k[1:])] = v
        return cls(TrigPolynomial(period, a, b))


# ---------------------------------------------------------------------------
# construction from a surface edge
# ---------------------------------------------------------------------------

def boundary_conformal_factor(chart, nmodes: int = 32) -> TrigPolynomial:
    """Sample F = |Psi_x| along the chart's axis and Fourier-analyze it."""
    M = 2 * nmodes + 1
    x = np.arange(M) * chart.period / M
    F = np.sqrt(np.sum(chart.evaluate(x, 0.0, dx=1) ** 2, axis=-1))
    p = fourier_analyze(F, chart.period)
    # exact zeros for coefficients at noise level keep later sums short
    cut = 1e-13 * max(1.0, float(np.max(np.abs(F))))
    p.a[np.abs(p.a) < cut] = 0.0
    p.b[np.abs(p.b) < cut] = 0.0
    return p


def build_normalization(factor: TrigPolynomial,
                        nsamples: int = 512) -> NormalizationMap:
    """Validated constructor: the factor trace must be strictly positive."""
    x = np.arange(nsamples) * factor.period / nsamples
    vals = factor(x)
    if float(np.min(vals)) <= 0.0:
        raise ValueError("conformal factor trace must be strictly positive "
                         "(min sampled value %.3g)" % float(np.min(vals)))
    if factor.b0 != 0.0:
        raise ValueError("conformal factor trace cannot carry drift")
    return NormalizationMap(factor)


# ---------------------------------------------------------------------------
# branch points of the map (zeros of H')
# ---------------------------------------------------------------------------

@dataclass
class PunctureSet:
    """Isolated points where a conformal reparametrization degenerates."""

    points: list            # complex locations
    multiplicities: list    # positive ints (argument-principle winding)
    r_exclusion: float
    total_winding: int

    def __len__(self):
        return len(self.points)

    def count(self) -> int:
        return int(sum(self.multiplicities))

    def validate(self, nm: NormalizationMap, tol: float = 1e-8):
        for p in self.points:
            if abs(complex(nm.derivative(p))) > tol:
                raise AssertionError("listed puncture is not a zero of H'")
        for i in range(len(self.points)):
            for j in range(i + 1, len(self.points)):
                if abs(self.points[i] - self.points[j]) <= 2 * self.r_exclusion:
                    raise AssertionError("punctures closer than 2 r_exclusion")
        if self.count() != self.total_winding:
            raise AssertionError("multiplicity sum != boundary winding")


def _winding_grid(nm, x0, x1, y0, y1, nx, ny, sub=8):
    """Per-cell argument-principle winding of H' on an nx-by-ny cell grid.

    Phase increments are accumulated along every horizontal and vertical
    grid line with `sub` samples per cell edge; each cell's winding is the
    (telescoping) sum over its oriented boundary.  Returns the cell winding
    array; raises ArithmeticError if any sample lands on (numerically) a
    zero of H', so the caller can perturb and retry.
    """
    xs = np.linspace(x0, x1, nx * sub + 1)
    ys = np.linspace(y0, y1, ny * sub + 1)
    # horizontal lines: values on each y-level of the coarse grid
    ylev = np.linspace(y0, y1, ny + 1)
    xlev = np.linspace(x0, x1, nx + 1)
    scale = max(abs(0.5 * nm.factor.a[0]),
                float(np.max(np.abs(nm.factor.a))),
                float(np.max(np.abs(nm.factor.b))), 1e-300)
    hsum = np.empty((ny + 1, nx))
    for j, yv in enumerate(ylev):
        f = nm.derivative(xs + 1j * yv)
        if np.min(np.abs(f)) < 1e-12 * scale:
            raise ArithmeticError("H' vanishes on a sweep line")
        dphi = np.angle(f[1:] / f[:-1])
        hsum[j] = np.add.reduceat(dphi, np.arange(0, nx * sub, sub))
    vsum = np.empty((nx + 1, ny))
    for i, xv in enumerate(xlev):
        f = nm.derivative(xv + 1j * ys)
        if np.min(np.abs(f)) < 1e-12 * scale:
            raise ArithmeticError("H' vanishes on a sweep line")
        dphi = np.angle(f[1:] / f[:-1])
        vsum[i] = np.add.reduceat(dphi, np.arange(0, ny * sub, sub))
    wind = np.empty((nx, ny))
    for i in range(nx):
        for j in range(ny):
            total = hsum[j, i] + vsum[i + 1, j] - hsum[j + 1, i] - vsum[i, j]
            wind[i, j] = total / (2.0 * math.pi)
    iw = np.rint(wind).astype(int)
    if np.max(np.abs(wind - iw)) > 0.25:
        raise ArithmeticError("winding numbers did not settle near integers")
    return iw, xlev, ylev


def find_branch_points(nm: NormalizationMap, rect, *, grid=(24, 12),
                       r_exclusion: float = 1e-3,
                       max_retries: int = 3) -> PunctureSet:
    """Zeros of H' inside a rectangle, with multiplicities.

    Parameters
    ----------
    nm : NormalizationMap
    rect : (x0, x1, y0, y1)
        Search rectangle; points within `r_exclusion` of its boundary are
        outside the contract and excluded (the search region is the inset
        rectangle).
    grid : (nx, ny)
        Coarse cells for the argument-principle sweep.
    r_exclusion : float
        Exclusion radius; distinct punctures are separated by more than
        2*r_exclusion (closer zeros merge with summed multiplicity).

    Degenerate sweeps (a grid line passing numerically through a zero) are
    retried up to `max_retries` times with the inset grown by r_exclusion/2.
    """
    x0, x1, y0, y1 = rect
    nx, ny = grid
    last_err = None
    for k in range(max_retries + 1):
        # asymmetric insets on retry: a zero sitting exactly on a sweep line
        # of a symmetric grid would stay on it under symmetric shrinking
        r = r_exclusion
        dx0, dx1 = r * (1 + 0.13 * k), r * (1 + 0.29 * k)
        dy0, dy1 = r * (1 + 0.41 * k), r * (1 + 0.77 * k)
        try:
            iw, xlev, ylev = _winding_grid(
                nm, x0 + dx0, x1 - dx1, y0 + dy0, y1 - dy1, nx, ny)
            break
        except ArithmeticError as err:
            last_err = err
    else:
        raise ArithmeticError("branch point sweep kept hitting zeros: %s"
                              % last_err)

    points, mults = [], []
    for i in range(nx):
        for j in range(ny):
            m = int(iw[i, j])
            if m == 0:
                continue
            z = 0.5 * (xlev[i] + xlev[i + 1]) + 0.5j * (ylev[j] + ylev[j + 1])
            z = _polish_zero(nm, z)
            merged = False
            for k, p in enumerate(points):
                if abs(p - z) <= 2 * r_exclusion:
                    points[k] = (p * mults[k] + z * m) / (mults[k] + m)
                    mults[k] += m
                    merged = True
                    break
            if not merged:
                points.append(z)
                mults.append(m)
    idx = sorted(range(len(points)), key=lambda k: (points[k].real, points[k].imag))
    ps = PunctureSet([points[k] for k in idx], [mults[k] for k in idx],
                     r_exclusion, int(np.sum(iw)))
    return ps


def _polish_zero(nm: NormalizationMap, z: complex, tol: float = 1e-12,
                 maxiter: int = 60) -> complex:
    """Damped Newton on H' with exact H''."""
    z = complex(z)
    fz = complex(nm.derivative(z))
    for _ in range(maxiter):
        if abs(fz) <= tol:
            return z
        d = complex(nm.second(z))
        if d == 0.0:
            # multiple zero of H'': nudge off the symmetric point
            z += 1e-8 * (1 + 1j)
            fz = complex(nm.derivative(z))
            continue
        step = fz / d
        lam = 1.0
        for _ in range(30):
            znew = z - lam * step
            fnew = complex(nm.derivative(znew))
            if abs(fnew) < abs(fz):
                z, fz = znew, fnew
                break
            lam *= 0.5
        else:
            break
    if abs(fz) > tol:
        raise ArithmeticError("Newton polish stalled at |H'| = %.3g" % abs(fz))
    return z


# ---------------------------------------------------------------------------
# pushing a surface through the map
# ---------------------------------------------------------------------------

class NormalizedSurface:
    """A chart composed with the inverse normalization, Psi o H^{-1}.

    Evaluation inverts H by complex Newton; first derivatives use

        Psi_X - i Psi_Y = (psi_x - i psi_y) / H'(z),

    and second derivatives the holomorphic transform of Psi_zz (the mixed
    Wirtinger derivative vanishes because the components are harmonic).
    """

    def __init__(self, chart, nm: NormalizationMap):
        self.chart = chart
        self.nm = nm
        self.period = nm.period_out
        self.y_lo = 0.0
        x = np.linspace(0, chart.period, 64, endpoint=False)
        self.y_hi = float(np.min(np.imag(nm.map(x + 1j * chart.height))))
        from .surfaces import Edge
        self._edges = [Edge("gamma1", 0.0, +1, True)]

    def edges(self):
        return list(self._edges)

    def edge(self, name):
        if name != "gamma1":
            raise KeyError(name)
        return self._edges[0]

    def edge_chart(self, name):
        from .surfaces import EdgeChart
        return EdgeChart(self, self.edge(name))

    def is_exterior_at(self, edge, eps=1e-3):
        from .surfaces import AnalyticSurface
        return AnalyticSurface.is_exterior_at(self, edge, eps)

    def evaluate(self, X, Y, dx: int = 0, dy: int = 0):
        X = np.asarray(X, dtype=float)
        Y = np.asarray(Y, dtype=float)
        W = X + 1j * Y
        z = self.nm.invert(np.atleast_1d(W))
        zx = np.real(z)
        zy = np.imag(z)
        if dx == 0 and dy == 0:
            out = self.chart.evaluate(zx, zy)
        else:
            dH = self.nm.derivative(z)
            px = self.chart.evaluate(zx, zy, dx=1)
            py = self.chart.evaluate(zx, zy, dy=1)
            psi_z = 0.5 * (px - 1j * py)          # componentwise, shape (...,3)
            grad = psi_z / dH[..., None]          # Psi_W
            if dx + dy == 1:
                out = 2.0 * np.real(grad) if dx == 1 else -2.0 * np.imag(grad)
            elif dx + dy == 2:
                pxx = self.chart.evaluate(zx, zy, dx=2)
                pxy = self.chart.evaluate(zx, zy, dx=1, dy=1)
                psi_zz = 0.25 * (pxx - self.chart.evaluate(zx, zy, dy=2)
                                 - 2j * pxy)
                d2H = self.nm.second(z)
                AW = (psi_zz - psi_z * (d2H / dH)[..., None]) / (dH ** 2)[..., None]
                # harmonic components: Psi_WWbar = 0
                if dx == 2:
                    out = 2.0 * np.real(AW)
                elif dy == 2:
                    out = -2.0 * np.real(AW)
                else:
                    out = -2.0 * np.imag(AW)
            else:
                raise NotImplementedError("derivatives up to total order 2")
        shape = np.broadcast(X, Y).shape
        return out.reshape(shape + (3,))

    def conformal_factor(self, X, Y):
        px = self.evaluate(X, Y, dx=1)
        return np.sqrt(np.sum(px * px, axis=-1))


def push_forward(chart, nm: NormalizationMap) -> NormalizedSurface:
    """Compose a chart with the inverse of its boundary normalization."""
    if not math.isclose(chart.period, nm.period_in, rel_tol=1e-12):
        raise ValueError("chart and normalization periods disagree")
    return NormalizedSurface(chart, nm)
