"""Command-line front end.

Subcommands:

  reflect      build the single reflection across each free circle once
  extend       iterate the reflection `--steps` times, print the step table
  verify       run the verification battery, write report.json, exit 0/1
  report       verify plus rendered PNG figures
  export-mesh  write an OBJ mesh (or CSV grid) of the surface/extension

Configuration may come from a `key = value` file via --config; explicit
command-line flags win over file entries.  The default output directory
is taken from $SPHEREFLECT_OUT when set.
"""

import argparse
import os
import sys

from .export import export_csv, export_obj
from .extension import coverage_monitor, extend
from .reports import (
    RunConfig,
    parse_config_text,
    render_json,
    render_report,
    resolve_surface,
    run_checks,
)

_STEP_DEFAULTS = {"reflect": 1, "extend": 2, "verify": 0, "report": 0,
                  "export-mesh": 0}


def _grid(text):
    try:
        nx, ny = (int(s) for s in text.lower().split("x"))
        return nx, ny
    except ValueError:
        raise argparse.ArgumentTypeError(
            "grid must look like NXxNY, e.g. 64x33") from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sphereflect",
        description="reflect free-boundary minimal surfaces across the "
                    "unit sphere and verify the continuation")
    sub = parser.add_subparsers(dest="operation", required=True)
    for name, help_text in [
            ("reflect", "build one reflection across each free circle"),
            ("extend", "iterate the reflection and print the step table"),
            ("verify", "run the check battery and write report.json"),
            ("report", "verify plus PNG figures"),
            ("export-mesh", "write an OBJ mesh or CSV grid")]:
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--surface", default=None,
                       help="catalog name (critical-catenoid, "
                            "equatorial-disk, noncritical-catenoid:F) "
                            "or a surface-spec file")
        p.add_argument("--steps", type=int, default=None,
                       help="number of reflection steps")
        p.add_argument("--grid", type=_grid, default=None, metavar="NXxNY",
                       help="sampling resolution (default 64x33)")
        p.add_argument("--tol-steklov", type=float, default=None,
                       help="free-boundary residual tolerance")
        p.add_argument("--out", default=None, metavar="DIR",
                       help="output directory (default $SPHEREFLECT_OUT "
                            "or the working directory)")
        p.add_argument("--threads", type=int, default=None, metavar="N",
                       help="worker threads for grid evaluation")
        p.add_argument("--wrap", action="store_true", default=None,
                       help="close the periodic direction with seam faces")
        p.add_argument("--seed", type=int, default=None,
                       help="seed for sampled checks")
        p.add_argument("--config", default=None, metavar="FILE",
                       help="key = value configuration file")
        p.add_argument("--export", choices=("obj", "csv"), default=None,
                       help="also write a mesh/grid file")
    return parser


def _merge_config(args) -> RunConfig:
    cfg = RunConfig(operation=args.operation)
    file_values = {}
    if args.config is not None:
        with open(args.config, "r", encoding="utf-8") as handle:
            file_values = parse_config_text(handle.read())
        for key, value in file_values.items():
            if key == "operation":
                continue
            setattr(cfg, key, value)
    overrides = {
        "surface": args.surface, "steps": args.steps,
        "tol_steklov": args.tol_steklov, "threads": args.threads,
        "seed": args.seed, "export": args.export,
    }
    if args.grid is not None:
        cfg.nx, cfg.ny = args.grid
    if args.wrap is not None:
        cfg.wrap = bool(args.wrap)
    for key, value in overrides.items():
        if value is not None:
            setattr(cfg, key, value)
    if args.out is not None:
        cfg.out_dir = args.out
    elif cfg.out_dir == "." and os.environ.get("SPHEREFLECT_OUT"):
        cfg.out_dir = os.environ["SPHEREFLECT_OUT"]
    if args.steps is None and "steps" not in file_values:
        cfg.steps = _STEP_DEFAULTS[args.operation]
    return cfg.validate()


def _write(cfg, name, text):
    os.makedirs(cfg.out_dir, exist_ok=True)
    path = os.path.join(cfg.out_dir, name)
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(text)
    print("wrote %s" % path)
    return path


def _maybe_export(cfg, obj):
    if cfg.export == "obj":
        _write(cfg, "mesh.obj",
               export_obj(obj, nx=cfg.nx, ny=cfg.ny, wrap=cfg.wrap,
                          threads=cfg.threads))
    elif cfg.export == "csv":
        _write(cfg, "grid.csv",
               export_csv(obj, nx=cfg.nx, ny=cfg.ny, threads=cfg.threads))


def _record_lines(ext):
    lines = []
    for rec in ext.records:
        lines.append("step %2d  across %-6s  band [%.6g, %.6g]  "
                     "steklov %.3e  schwarz %.3e  punctures %d"
                     % (rec.step, rec.edge, rec.added[0], rec.added[1],
                        rec.steklov_sup, rec.schwarz_residual,
                        rec.punctures_found))
    return lines


def cmd_reflect(cfg) -> int:
    surface = resolve_surface(cfg.surface)
    ext = extend(surface, cfg.steps, tol_steklov=cfg.tol_steklov)
    for line in _record_lines(ext):
        print(line)
    seams = ext.seam_defects()
    for name, d in seams.items():
        print("seam %-6s value %.3e slope %.3e"
              % (name, d["value_sup"], d["dy_sup"]))
    payload = {
        "surface": cfg.surface,
        "records": [r.as_dict() for r in ext.records],
        "seam_defects": seams,
        "punctures": len(ext.punctures),
        "conformal_type": ext.conformal_type(),
    }
    _write(cfg, "reflect.json", render_json(payload))
    _maybe_export(cfg, ext)
    return 0


def cmd_extend(cfg) -> int:
    surface = resolve_surface(cfg.surface)
    ext = extend(surface, cfg.steps, tol_steklov=cfg.tol_steklov)
    for line in _record_lines(ext):
        print(line)
    print("strip covers y in [%.6g, %.6g], lineage [%s]"
          % (ext.y_lo, ext.y_hi, ext.lineage))
    payload = {
        "surface": cfg.surface,
        "steps": cfg.steps,
        "lineage": ext.lineage,
        "records": [r.as_dict() for r in ext.records],
        "conformal_type": ext.conformal_type(),
        "coverage": coverage_monitor(ext, nx=min(cfg.nx, 64)),
        "punctures": len(ext.punctures),
    }
    _write(cfg, "extend.json", render_json(payload))
    _maybe_export(cfg, ext)
    return 0


def cmd_verify(cfg, *, figures: bool = False) -> int:
    rep = run_checks(cfg)
    for c in rep.checks:
        if c["status"] == "skipped":
            print("SKIP %-28s %s" % (c["name"], c["note"]))
            continue
        tag = "PASS" if c["status"] == "pass" else "FAIL"
        line = "%s %-28s %.17g (tol %.17g)" % (tag, c["name"], c["value"],
                                               c["tol"])
        if c["status"] == "fail" and "location" in c:
            line += "  at (x=%.6g, y=%.6g)" % tuple(c["location"])
        print(line)
    _write(cfg, "report.json", render_report(rep))
    if figures:
        from .figures import render_figures
        surface = resolve_surface(cfg.surface)
        obj = extend(surface, cfg.steps) if cfg.steps > 0 else surface
        for path in render_figures(obj, cfg.out_dir):
            print("wrote %s" % path)
        _maybe_export(cfg, obj)
    print("%d checks, %d failed" % (len(rep.checks), rep.n_failed))
    return 0 if rep.passes() else 1


def cmd_export_mesh(cfg) -> int:
    surface = resolve_surface(cfg.surface)
    obj = extend(surface, cfg.steps) if cfg.steps > 0 else surface
    if cfg.export is None:
        cfg.export = "obj"
    _maybe_export(cfg, obj)
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = _merge_config(args)
        if args.operation == "reflect":
            return cmd_reflect(cfg)
        if args.operation == "extend":
            return cmd_extend(cfg)
        if args.operation == "verify":
            return cmd_verify(cfg)
        if args.operation == "report":
            return cmd_verify(cfg, figures=True)
        return cmd_export_mesh(cfg)
    except (ValueError, OSError) as err:
        print("error: %s" % err, file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
