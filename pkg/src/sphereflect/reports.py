"""Run configuration, verification check battery, and JSON reports.

A run is described by a `RunConfig` (surface selector, operation, grid,
tolerances, seed).  `run_checks` executes the verification battery for
that config and returns a `VerificationReport`: one entry per check with
status pass/fail/skipped, the measured value, the tolerance it was held
to, and — for failed sup-norm checks — the chart point where the sup was
attained.

Reports render to JSON deterministically: keys sorted, floats at 17
significant digits, and everything volatile (wall-clock timestamp and
per-phase timings) confined to the single `run_meta` line so that two
runs with the same config and seed differ in at most that one line.
"""

import datetime
import json
import math
import time
from dataclasses import dataclass, field, fields

import numpy as np

from . import geometry
from .extension import ExtendedSurface, extend
from .surfaces import (
    critical_catenoid,
    equatorial_disk,
    load_surface,
    noncritical_catenoid,
    verify_steklov,
)

__all__ = [
    "RunConfig",
    "VerificationReport",
    "parse_config_text",
    "resolve_surface",
    "run_checks",
    "render_json",
    "render_report",
]

OPERATIONS = ("reflect", "extend", "verify", "report", "export-mesh")
CATALOG = ("critical-catenoid", "equatorial-disk", "noncritical-catenoid:F")


@dataclass
class RunConfig:
    """Everything one run depends on; validated before use."""

    surface: str = "critical-catenoid"
    operation: str = "verify"
    steps: int = 0
    nx: int = 64
    ny: int = 33
    tol_steklov: float = 1e-8
    tol_match: float = 1e-6
    tol_quad: float = 1e-9
    out_dir: str = "."
    seed: int = 0
    threads: int = 1
    wrap: bool = False
    export: str | None = None

    def validate(self) -> "RunConfig":
        if self.operation not in OPERATIONS:
            raise ValueError("unknown operation %r (choose from %s)"
                             % (self.operation, ", ".join(OPERATIONS)))
        if self.nx < 8 or self.ny < 8:
            raise ValueError("grid resolution must be at least 8 per axis "
                             "(got %dx%d)" % (self.nx, self.ny))
        for name in ("tol_steklov", "tol_match", "tol_quad"):
            if getattr(self, name) <= 0:
                raise ValueError("%s must be positive" % name)
        if self.steps < 0:
            raise ValueError("steps must be nonnegative")
        if self.threads < 1:
            raise ValueError("threads must be at least 1")
        if self.export not in (None, "obj", "csv"):
            raise ValueError("export format must be obj or csv")
        return self

    def as_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}


_CONFIG_TYPES = {
    "surface": str, "operation": str, "steps": int, "nx": int, "ny": int,
    "tol_steklov": float, "tol_match": float, "tol_quad": float,
    "out_dir": str, "seed": int, "threads": int, "wrap": bool,
    "export": str,
}


def parse_config_text(text: str) -> dict:
    """Parse `key = value` lines (# comments, blank lines allowed)."""
    out = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError("config line %d: expected 'key = value', got %r"
                             % (lineno, raw.strip()))
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in _CONFIG_TYPES:
            raise ValueError("config line %d: unknown key %r (known: %s)"
                             % (lineno, key, ", ".join(sorted(_CONFIG_TYPES))))
        kind = _CONFIG_TYPES[key]
        try:
            if kind is bool:
                if value.lower() not in ("true", "false", "0", "1"):
                    raise ValueError(value)
                out[key] = value.lower() in ("true", "1")
            else:
                out[key] = kind(value)
        except ValueError:
            raise ValueError("config line %d: cannot read %r as %s"
                             % (lineno, value, kind.__name__)) from None
    return out


def resolve_surface(selector: str):
    """Catalog name (with optional :parameter) or a surface-spec file path."""
    if selector == "critical-catenoid":
        return critical_catenoid()
    if selector == "equatorial-disk":
        return equatorial_disk()
    if selector.startswith("noncritical-catenoid:"):
        frac = float(selector.split(":", 1)[1])
        return noncritical_catenoid(frac)
    if selector.startswith("noncritical-catenoid"):
        raise ValueError("noncritical-catenoid needs a fraction, e.g. "
                         "noncritical-catenoid:0.9")
    try:
        with open(selector, "r", encoding="utf-8") as handle:
            text = handle.read()
    except OSError:
        raise ValueError("unknown surface %r: not a catalog name (%s) and "
                         "not a readable file" % (selector,
                                                  ", ".join(CATALOG))) from None
    return load_surface(text)


# ---------------------------------------------------------------------------
# the check battery
# ---------------------------------------------------------------------------

@dataclass
class VerificationReport:
    """One run's checks plus the curvature diagnostics they came from."""

    surface: str
    operation: str
    steps: int
    lineage: str
    conformal_type: dict | None
    checks: list
    curvature: dict | None
    superharmonic: dict | None
    config: dict
    run_meta: dict = field(default_factory=dict)

    @property
    def n_failed(self) -> int:
        return sum(1 for c in self.checks if c["status"] == "fail")

    def passes(self) -> bool:
        return self.n_failed == 0

    def check(self, name: str) -> dict:
        for c in self.checks:
            if c["name"] == name:
                return c
        raise KeyError("no check named %r" % name)


def _entry(name, value, tol, *, mode="le", note="", location=None):
    if mode == "le":
        ok = value <= tol
    elif mode == "lt":
        ok = value < tol
    elif mode == "ge":
        ok = value >= tol
    else:
        raise ValueError("unknown comparison %r" % mode)
    out = {"name": name, "status": "pass" if ok else "fail",
           "value": value, "tol": tol, "mode": mode, "note": note}
    if not ok and location is not None:
        out["location"] = [float(location[0]), float(location[1])]
    return out


def _skip(name, note):
    return {"name": name, "status": "skipped", "value": None, "tol": None,
            "mode": "le", "note": note}


def _sup_and_loc(values, x, y):
    k = int(np.argmax(values))
    return float(values.flat[k]), (np.ravel(np.broadcast_to(x, values.shape))[k],
                                   np.ravel(np.broadcast_to(y, values.shape))[k])


def run_checks(cfg: RunConfig):
    """Execute the verification battery and assemble the report."""
    cfg.validate()
    timings = {}
    t0 = time.perf_counter()
    surface = resolve_surface(cfg.surface)
    checks = []
    rng = np.random.RandomState(cfg.seed)

    # --- catalog invariants at random interior points ----------------------
    n_inv = 500
    inset = 1e-3 * (surface.y_hi - surface.y_lo)
    xs = rng.uniform(0.0, surface.period, n_inv)
    ys = rng.uniform(surface.y_lo + inset, surface.y_hi - inset, n_inv)
    pxx = surface.evaluate(xs, ys, dx=2)
    pyy = surface.evaluate(xs, ys, dy=2)
    harm = np.linalg.norm(pxx + pyy, axis=-1)
    value, loc = _sup_and_loc(harm, xs, ys)
    checks.append(_entry("harmonic_residual", value, 1e-10, location=loc))
    px = surface.evaluate(xs, ys, dx=1)
    py = surface.evaluate(xs, ys, dy=1)
    conf = np.maximum(np.abs(np.sum(px * px - py * py, axis=-1)),
                      np.abs(np.sum(px * py, axis=-1)))
    value, loc = _sup_and_loc(conf, xs, ys)
    checks.append(_entry("conformality_residual", value, 1e-10, location=loc))

    free_edges = [e for e in surface.edges() if e.free]
    for edge in free_edges:
        chart = surface.edge_chart(edge.name)
        xb = np.arange(256) * chart.period / 256
        r = np.linalg.norm(chart.evaluate(xb, 0.0), axis=-1)
        defect = np.abs(r - 1.0)
        value, loc = _sup_and_loc(defect, xb, np.full_like(xb, edge.y0))
        checks.append(_entry("boundary_unit_sphere[%s]" % edge.name,
                             value, 1e-10, location=loc))
        rep = verify_steklov(surface, edge.name, tol=cfg.tol_steklov)
        sign = -1.0 if chart.exterior else 1.0
        pyb = chart.evaluate(xb, 0.0, dy=1)
        Fb = np.linalg.norm(chart.evaluate(xb, 0.0, dx=1), axis=-1)
        resid = np.linalg.norm(chart.evaluate(xb, 0.0)
                               + sign * pyb / Fb[:, None], axis=-1)
        checks.append(_entry("steklov[%s]" % edge.name, rep.sup_residual,
                             cfg.tol_steklov,
                             note="radius defect %.3e" % rep.radius_defect,
                             location=(xb[int(np.argmax(resid))], edge.y0)))
        conv = geometry.boundary_convexity(surface, edge.name)
        checks.append(_entry("boundary_convexity[%s]" % edge.name, conv,
                             -cfg.tol_match, mode="ge",
                             note="signed min of geodesic curvature"))
    timings["surface_checks"] = time.perf_counter() - t0

    # --- extension --------------------------------------------------------
    t0 = time.perf_counter()
    lineage = ""
    conformal_type = None
    if cfg.steps > 0:
        ext = extend(surface, cfg.steps, tol_steklov=cfg.tol_steklov)
        strip = ext
        lineage = ext.lineage
        conformal_type = ext.conformal_type()
        checks.append(_entry(
            "extension_steklov_sup",
            max(r.steklov_sup for r in ext.records), cfg.tol_steklov))
        checks.append(_entry(
            "extension_schwarz_residual",
            max(r.schwarz_residual for r in ext.records), cfg.tol_match))
        seams = ext.seam_defects()
        checks.append(_entry("seam_value_defect",
                             max(d["value_sup"] for d in seams.values()),
                             1e-8))
        checks.append(_entry("seam_slope_defect",
                             max(d["dy_sup"] for d in seams.values()), 1e-8))
        checks.append(_entry("punctures_found", float(len(ext.punctures)),
                             0.0, note="branch points inside the annulus"))
    else:
        strip = surface
    timings["extension"] = time.perf_counter() - t0

    # --- strip-level geometry ---------------------------------------------
    t0 = time.perf_counter()
    n_geo = 400
    inset = 1e-3 * (strip.y_hi - strip.y_lo)
    xs = rng.uniform(0.0, strip.period, n_geo)
    ys = rng.uniform(strip.y_lo + inset, strip.y_hi - inset, n_geo)
    if cfg.steps > 0:
        # make sure rows straddling every interior seam are represented
        seam_y = [0.0, ext.a] + [r.added[0] for r in ext.records] \
            + [r.added[1] for r in ext.records]
        seam_y = [y for y in seam_y
                  if strip.y_lo + inset < y < strip.y_hi - inset]
        for y0 in seam_y:
            xs = np.concatenate([xs, rng.uniform(0, strip.period, 8)])
            ys = np.concatenate([ys, y0 + np.linspace(-0.05, 0.05, 8)])

    pa = strip.evaluate(xs + strip.period, ys)
    pb = strip.evaluate(xs, ys)
    per = np.abs(pa - pb) / (1.0 + np.linalg.norm(pb, axis=-1, keepdims=True))
    value, loc = _sup_and_loc(np.max(per, axis=-1), xs, ys)
    checks.append(_entry("periodicity_residual", value, 1e-10,
                         note="relative to point amplitude", location=loc))

    forms = geometry.fundamental_forms(strip, xs, ys)
    value, loc = _sup_and_loc(np.abs(forms.mean_curvature), xs, ys)
    checks.append(_entry("mean_curvature_sup", value, cfg.tol_match,
                         location=loc))

    curv = geometry.curvature_report(strip, surface, grid=(cfg.nx, cfg.ny))
    checks.append(_entry("hopf_beta_sup", curv.beta_sup, cfg.tol_match))
    if abs(curv.alpha_mean) <= 1e-12:
        checks.append(_skip("hopf_alpha_spread", "mean vanishes (flat case)"))
        checks.append(_skip("gauss_curvature_negative", "flat case"))
    else:
        checks.append(_entry("hopf_alpha_spread",
                             curv.alpha_std / abs(curv.alpha_mean),
                             cfg.tol_match, note="std / |mean|"))
        checks.append(_entry("gauss_curvature_negative", curv.k_max, 0.0,
                             mode="lt", note="max K over the sample grid"))

    w = np.exp(-2j * math.pi * (xs + 1j * ys) / strip.period)
    ident = geometry.gaussian_curvature_identity(strip, w,
                                                 c_est=curv.hopf_constant)
    checks.append(_entry("curvature_identity", ident, cfg.tol_match))

    if len(free_edges) >= 2:
        checks.append(_entry("flux_balance",
                             float(np.linalg.norm(curv.flux_sum)), 1e-8))
    else:
        checks.append(_skip("flux_balance", "fewer than two free circles"))

    if cfg.surface == "critical-catenoid" and cfg.steps >= 2:
        total = curv.total_curvature + curv.curvature_tail
        checks.append(_entry("total_curvature_window",
                             abs(total + 4 * math.pi), 1e-2 * 4 * math.pi,
                             note="quadrature plus tail against -4*pi"))
    elif cfg.surface == "critical-catenoid":
        checks.append(_skip("total_curvature_window",
                            "band too narrow below two extension steps"))

    sup = geometry.superharmonic_checks(surface, seed=cfg.seed)
    checks.append(_entry("radius_squared_laplacian", sup["r2_residual"],
                         cfg.tol_match, note="|Delta r^2 - 4| by FD"))
    checks.append(_entry("superharmonic_margin",
                         sup["superharmonic_margin"], 1e-9,
                         note="max Delta(-log r); <= 0 up to round-off"))
    if sup["boundary_value_residual"] is not None:
        checks.append(_entry("distance_boundary_value",
                             sup["boundary_value_residual"], 1e-8))
        checks.append(_entry("distance_boundary_neumann",
                             sup["boundary_neumann_residual"], 1e-8))
    timings["geometry"] = time.perf_counter() - t0

    curv_dict = {
        "beta_sup": curv.beta_sup,
        "alpha_mean": curv.alpha_mean,
        "alpha_std": curv.alpha_std,
        "hopf_constant": curv.hopf_constant,
        "k_max": curv.k_max,
        "k_min": curv.k_min,
        "total_curvature": curv.total_curvature,
        "curvature_tail": curv.curvature_tail,
        "flux_vectors": curv.flux_vectors,
        "flux_sum": curv.flux_sum,
        "convexity": curv.convexity,
        "line_forms": curv.line_forms,
    }
    meta = {
        "timestamp": datetime.datetime.now(datetime.timezone.utc).isoformat(),
        "seconds": {k: round(v, 6) for k, v in timings.items()},
    }
    return VerificationReport(
        surface=cfg.surface, operation=cfg.operation, steps=cfg.steps,
        lineage=lineage, conformal_type=conformal_type, checks=checks,
        curvature=curv_dict, superharmonic=sup, config=cfg.as_dict(),
        run_meta=meta)


# ---------------------------------------------------------------------------
# deterministic rendering
# ---------------------------------------------------------------------------

def _scalar(v):
    if isinstance(v, bool) or v is None:
        return "true" if v else ("null" if v is None else "false")
    if isinstance(v, (int, np.integer)):
        return "%d" % v
    if isinstance(v, (float, np.floating)):
        if math.isnan(v):
            return "null"
        if math.isinf(v):
            return '"inf"' if v > 0 else '"-inf"'
        return "%.17g" % v
    return json.dumps(str(v))


def _render(obj, indent):
    pad = "  " * indent
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        rows = []
        for key in sorted(obj):
            rows.append('%s  %s: %s' % (pad, json.dumps(str(key)),
                                        _render(obj[key], indent + 1)))
        return "{\n" + ",\n".join(rows) + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        rows = ["%s  %s" % (pad, _render(v, indent + 1)) for v in obj]
        return "[\n" + ",\n".join(rows) + "\n" + pad + "]"
    return _scalar(obj)


def _compact(obj):
    if isinstance(obj, dict):
        return "{" + ", ".join('%s: %s' % (json.dumps(str(k)), _compact(obj[k]))
                               for k in sorted(obj)) + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(_compact(v) for v in obj) + "]"
    return _scalar(obj)


def render_json(obj) -> str:
    """Deterministic JSON for plain dict/list/scalar trees."""
    return _render(obj, 0) + "\n"


def render_report(rep: VerificationReport) -> str:
    """Deterministic JSON: sorted keys, %.17g floats, volatile data on the
    single line holding the `run_meta` key (timestamp and timings)."""
    body = {
        "surface": rep.surface,
        "operation": rep.operation,
        "steps": rep.steps,
        "lineage": rep.lineage,
        "conformal_type": rep.conformal_type,
        "checks": rep.checks,
        "curvature": rep.curvature,
        "superharmonic": rep.superharmonic,
        "config": rep.config,
        "n_failed": rep.n_failed,
    }
    rows = []
    for key in sorted(body):
        rows.append('  %s: %s' % (json.dumps(key), _render(body[key], 1)))
    rows.append('  "run_meta": %s' % _compact(rep.run_meta))
    return "{\n" + ",\n".join(rows) + "\n}\n"
